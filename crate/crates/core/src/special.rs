//! Hermite and Laguerre polynomials, the Landau-level amplitude factor and
//! Gaussian quadrature rules.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::cis_turns;
use crate::error::{Error, Result};

/// Physicists' Hermite polynomial `H_μ(x)` by the three-term recurrence.
pub fn hermite(mu: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if mu == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..mu {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre polynomial `L_μ(x)`.
pub fn laguerre(mu: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if mu == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..mu {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `c_μ = e^{−1/(4B)} L_μ(1/(2B))`, the Landau-level band width of the
/// projected potential. Vanishes at Laguerre roots.
pub fn band_width_factor(mu: u32, b: f64) -> f64 {
    (-0.25 / b).exp() * laguerre(mu, 0.5 / b)
}

/// `e^{2πiα}·c_μ`: the projected generator amplitude with its translation
/// phase. Periodic in `α` with period one.
pub fn projected_phase_coeff(mu: u32, b: f64, alpha: f64) -> Complex64 {
    cis_turns(alpha) * band_width_factor(mu, b)
}

/// Nodes and weights of a Gaussian quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const NEWTON_MAX_ITER: usize = 100;

/// Gauss–Hermite rule for the weight `e^{−x²}` on the real line, nodes in
/// ascending order.
pub fn gauss_hermite_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be >= 1".into()));
    }
    let n = order;
    let nf = n as f64;
    let pim4 = PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..half {
        // initial guesses for the largest roots, then extrapolation from the
        // previously found ones
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut converged = false;
        let mut derivative = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            // orthonormal Hermite functions are bounded, unlike H_n itself
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            derivative = (2.0 * nf).sqrt() * p2;
            let step = p1 / derivative;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::ConvergenceFailure(format!(
                "Gauss-Hermite root {i} of order {order}"
            )));
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        let w = 2.0 / (derivative * derivative);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    nodes.reverse();
    weights.reverse();
    Ok(QuadratureRule { nodes, weights, order })
}

/// Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre_rule(order: usize) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be >= 1".into()));
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        let mut derivative = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            derivative = nf * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / derivative;
            z -= step;
            if step.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure(format!(
                "Gauss-Legendre root {i} of order {order}"
            )));
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * derivative * derivative);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 0.7), 1.0);
        assert_eq!(hermite(1, 1.5), 3.0);
        // closed form 16x⁴ − 48x² + 12
        let closed = |x: f64| 16.0 * x.powi(4) - 48.0 * x * x + 12.0;
        assert_eq!(closed(1.0), -20.0);
        assert_eq!(hermite(4, 1.0), -20.0);
        for &x in &[-1.3, 0.2, 2.5] {
            assert!((hermite(4, x) - closed(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        let closed = |x: f64| 1.0 - 3.0 * x + 1.5 * x * x - x.powi(3) / 6.0;
        assert!((closed(1.0) + 2.0 / 3.0).abs() < 1e-15);
        assert!((laguerre(3, 1.0) + 2.0 / 3.0).abs() < 1e-15);
        for &x in &[0.1, 2.0, 7.5] {
            assert!((laguerre(3, x) - closed(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn band_width_examples() {
        let b = 1.0 / (2.0 * PI);
        assert!((band_width_factor(0, b) - (-PI / 2.0).exp()).abs() < 1e-15);
        assert!((band_width_factor(0, b) - 0.2078796).abs() < 1e-7);
        assert!(band_width_factor(1, 0.5).abs() < 1e-16);
        let big = band_width_factor(0, 1e6);
        assert!((big - (1.0 - 2.5e-7)).abs() < 1e-13);
    }

    #[test]
    fn phase_coeff_examples() {
        let b = 0.3;
        let c = band_width_factor(2, b);
        let z = projected_phase_coeff(2, b, 0.0);
        assert_eq!(z.im, 0.0);
        assert_eq!(z.re, c);
        let z = projected_phase_coeff(2, b, 0.5);
        assert!((z.re + c).abs() < 1e-15 && z.im.abs() < 1e-15);
        assert!((projected_phase_coeff(2, b, 0.37).norm() - c.abs()).abs() < 1e-15);
    }

    #[test]
    fn gauss_hermite_small_orders() {
        let r = gauss_hermite_rule(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - PI.sqrt()).abs() < 1e-14);

        let r = gauss_hermite_rule(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-14 && (r.nodes[1] - s).abs() < 1e-14);
        for w in &r.weights {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-14);
        }
        // roots of H_2 = 4x² − 2
        for &x in &r.nodes {
            assert!(hermite(2, x).abs() < 1e-13);
        }
        let moment = r.integrate(|x| x * x);
        assert!((moment - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_hermite_normalization_and_symmetry() {
        for order in [3, 8, 20, 40, 64] {
            let r = gauss_hermite_rule(order).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert!((total - PI.sqrt()).abs() < 1e-10, "order {order}");
            for i in 0..order {
                assert!((r.nodes[i] + r.nodes[order - 1 - i]).abs() < 1e-12);
                assert!(r.weights[i] > 0.0);
            }
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn gauss_hermite_polynomial_exactness() {
        // ∫ x^{2k} e^{−x²} = Γ(k + ½)
        let r = gauss_hermite_rule(10).unwrap();
        let mut gamma = PI.sqrt();
        for k in 0..10u32 {
            let got = r.integrate(|x| x.powi(2 * k as i32));
            assert!((got - gamma).abs() < 1e-10 * gamma.max(1.0), "k={k}");
            gamma *= k as f64 + 0.5;
            assert!(r.integrate(|x| x.powi(2 * k as i32 + 1)).abs() < 1e-10);
        }
    }

    #[test]
    fn hermite_orthogonality() {
        for a in 0..=8u32 {
            for b in 0..=8u32 {
                let r = gauss_hermite_rule((a + b + 1) as usize).unwrap();
                let got = r.integrate(|x| hermite(a, x) * hermite(b, x));
                let expected = if a == b {
                    2f64.powi(a as i32) * factorial(a) * PI.sqrt()
                } else {
                    0.0
                };
                assert!(
                    (got - expected).abs() < 1e-8 * expected.max(1.0),
                    "a={a} b={b} got={got}"
                );
            }
        }
    }

    #[test]
    fn laguerre_orthogonality() {
        // composite Gauss–Legendre on [0, 120]; e^{−x} tail is negligible
        let gl = gauss_legendre_rule(32).unwrap();
        let panels = 60;
        let width = 120.0 / panels as f64;
        for a in 0..=6u32 {
            for b in 0..=6u32 {
                let mut sum = 0.0;
                for p in 0..panels {
                    let lo = p as f64 * width;
                    sum += 0.5 * width
                        * gl.integrate(|t| {
                            let x = lo + 0.5 * width * (t + 1.0);
                            laguerre(a, x) * laguerre(b, x) * (-x).exp()
                        });
                }
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((sum - expected).abs() < 1e-6, "a={a} b={b} got={sum}");
            }
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        let r = gauss_legendre_rule(6).unwrap();
        for k in 0..12 {
            let got = r.integrate(|x| x.powi(k));
            let expected = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - expected).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(gauss_hermite_rule(0).is_err());
        assert!(gauss_legendre_rule(0).is_err());
    }

    proptest! {
        #[test]
        fn phase_coeff_period_one(mu in 0u32..6, b in 0.05f64..5.0, k in 0i64..(1 << 20)) {
            // dyadic α keeps α + 1 exact
            let alpha = k as f64 / (1u64 << 20) as f64;
            prop_assert_eq!(
                projected_phase_coeff(mu, b, alpha + 1.0),
                projected_phase_coeff(mu, b, alpha)
            );
        }

        #[test]
        fn phase_coeff_modulus(mu in 0u32..6, b in 0.05f64..5.0, alpha in -3.0f64..3.0) {
            let z = projected_phase_coeff(mu, b, alpha);
            prop_assert!((z.norm() - band_width_factor(mu, b).abs()).abs() < 1e-14);
            let z1 = projected_phase_coeff(mu, b, alpha + 1.0);
            prop_assert!((z1 - z).norm() < 1e-13);
        }
    }
}
