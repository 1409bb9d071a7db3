//! Projected potential (Harper) matrices, their spectra, the phase-independent
//! Chambers polynomial and the band edges it determines.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::algebra::{cis_turns, reduce_mod1, LandauLevel};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::special::band_width_factor;

const BRACKET_MARGIN: f64 = 1.0;
const TOUCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Scaled by the band-width factor `c_μ(B)`; the potential amplitude `v`
    /// is applied by the caller.
    Raw,
    /// `c_μ` set to one.
    #[serde(rename = "bw")]
    BandWidthUnits,
}

impl Units {
    pub fn label(self) -> &'static str {
        match self {
            Units::Raw => "raw",
            Units::BandWidthUnits => "bw",
        }
    }
}

/// Which family of matrices: the module over the line, or functions over the
/// plane with a `d`-fold super-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Enm,
    R2,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::Enm => "enm",
            Variant::R2 => "r2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HarperLabels {
    Enm { lambda: Rational64, alpha1: f64, alpha2: f64 },
    R2 { d: i64, j: i64, jp: i64, delta1: f64, delta2: f64 },
}

#[derive(Debug, Clone)]
pub struct HarperMatrix {
    pub matrix: ComplexMatrix,
    pub mu: LandauLevel,
    pub m: i64,
    pub n: i64,
    pub labels: HarperLabels,
    pub units: Units,
    /// Overall factor, `c_μ(B)` in raw units and 1 otherwise.
    pub scale: f64,
    /// Turns of the hopping phase on `r → r + 1`.
    pub hop_turns: f64,
    /// Turns subtracted inside the diagonal cosine.
    pub diag_turns: f64,
}

impl HarperMatrix {
    /// Hopping phase `e^{2πi·hop_turns}` before the cyclic wrap is added.
    pub fn hop_phase(&self) -> Complex64 {
        cis_turns(self.hop_turns)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        harper_eigenvalues(self)
    }
}

fn harper(m: i64, n: i64, hop_turns: f64, diag_turns: f64, scale: f64) -> ComplexMatrix {
    let dim = m as usize;
    let z = cis_turns(hop_turns) * scale;
    let mut h = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        let next = (r + 1) % dim;
        h[(next, r)] += z;
        h[(r, next)] += z.conj();
        let turns = reduce_mod1((n * r as i64).rem_euclid(m) as f64 / m as f64 - diag_turns);
        h[(r, r)] += 2.0 * scale * (2.0 * PI * turns).cos();
    }
    h
}

fn unit_scale(mu: LandauLevel, b: f64, units: Units) -> Result<f64> {
    match units {
        Units::BandWidthUnits => Ok(1.0),
        Units::Raw if b > 0.0 => Ok(band_width_factor(mu.index(), b)),
        Units::Raw => Err(Error::InvalidArgument(format!("raw units need B > 0, got {b}"))),
    }
}

fn check_m(m: i64) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("m must be >= 1, got {m}")));
    }
    Ok(())
}

/// Projected potential on the module over the line.
#[allow(clippy::too_many_arguments)]
pub fn build_v_enm(
    mu: LandauLevel,
    m: i64,
    n: i64,
    lambda: Rational64,
    alpha1: f64,
    alpha2: f64,
    b: f64,
    units: Units,
) -> Result<HarperMatrix> {
    check_m(m)?;
    let scale = unit_scale(mu, b, units)?;
    let hop_turns = *lambda.numer() as f64 / (*lambda.denom() * m) as f64 + alpha1;
    Ok(HarperMatrix {
        matrix: harper(m, n, hop_turns, alpha2, scale),
        mu,
        m,
        n,
        labels: HarperLabels::Enm { lambda, alpha1, alpha2 },
        units,
        scale,
        hop_turns,
        diag_turns: alpha2,
    })
}

/// Projected potential on the block `(j, j')` of the `d`-fold super-cell.
#[allow(clippy::too_many_arguments)]
pub fn build_v_r2(
    mu: LandauLevel,
    m: i64,
    n: i64,
    d: i64,
    j: i64,
    jp: i64,
    delta1: f64,
    delta2: f64,
    b: f64,
    units: Units,
) -> Result<HarperMatrix> {
    check_m(m)?;
    if d < 1 || !(0..d).contains(&j) || !(0..d).contains(&jp) {
        return Err(Error::InvalidArgument(format!(
            "need d >= 1 and 0 <= j, j' < d, got d={d} j={j} j'={jp}"
        )));
    }
    let scale = unit_scale(mu, b, units)?;
    let md = (m * d) as f64;
    let hop_turns = (j as f64 + delta2) / md;
    let diag_turns = (jp as f64 - delta1) / md;
    Ok(HarperMatrix {
        matrix: harper(m, n, hop_turns, diag_turns, scale),
        mu,
        m,
        n,
        labels: HarperLabels::R2 { d, j, jp, delta1, delta2 },
        units,
        scale,
        hop_turns,
        diag_turns,
    })
}

/// Ascending eigenvalues of a Harper matrix.
pub fn harper_eigenvalues(h: &HarperMatrix) -> Result<Vec<f64>> {
    hermitian_eigenvalues(&h.matrix)
}

/// `P(ε) = det(ε − V₀)/2 + 2` in band-width units, `V₀` the matrix at zero
/// phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChambersPoly {
    pub m: i64,
    pub n: i64,
    /// Coefficients in ascending powers of ε; the leading one is ½.
    pub coefficients: Vec<f64>,
    /// Roots of `P = 2`, ascending (the spectrum of `V₀`).
    pub roots: Vec<f64>,
}

impl ChambersPoly {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Evaluates in product form, which is better conditioned than the
    /// expanded coefficients.
    pub fn eval(&self, eps: f64) -> f64 {
        0.5 * self.roots.iter().map(|r| eps - r).product::<f64>() + 2.0
    }

    pub fn derivative(&self, eps: f64) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.roots.len() {
            let mut prod = 0.5;
            for (k, r) in self.roots.iter().enumerate() {
                if k != i {
                    prod *= eps - r;
                }
            }
            sum += prod;
        }
        sum
    }
}

pub fn chambers_poly(mu: LandauLevel, m: i64, n: i64, b: f64) -> Result<ChambersPoly> {
    let v0 = build_v_enm(mu, m, n, Rational64::from_integer(0), 0.0, 0.0, b, Units::BandWidthUnits)?;
    let roots = harper_eigenvalues(&v0)?;
    // expand ½∏(ε − r)
    let mut coefficients = vec![0.5];
    for r in &roots {
        let mut next = vec![0.0; coefficients.len() + 1];
        for (k, c) in coefficients.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coefficients = next;
    }
    coefficients[0] += 2.0;
    Ok(ChambersPoly { m, n, coefficients, roots })
}

/// `max |P(ε) − RHS|` over a `grid × grid` phase sweep for both variants,
/// with `d` blocks each.
pub fn verify_wilkinson(
    mu: LandauLevel,
    m: i64,
    n: i64,
    d: i64,
    b: f64,
    phase_grid: usize,
) -> Result<f64> {
    if d < 1 || phase_grid < 1 {
        return Err(Error::InvalidArgument("need d >= 1 and phase_grid >= 1".into()));
    }
    let p = chambers_poly(mu, m, n, b)?;
    let mf = m as f64;
    let grid = phase_grid as f64;
    let residual = |h: &HarperMatrix, rhs: f64| -> Result<f64> {
        Ok(harper_eigenvalues(h)?
            .iter()
            .map(|&e| (p.eval(e) - rhs).abs())
            .fold(0.0, f64::max))
    };
    let mut worst: f64 = 0.0;
    for a in 0..phase_grid {
        for c in 0..phase_grid {
            let (s, t) = (a as f64 / grid, c as f64 / grid);
            for j in 0..d {
                let lambda = Rational64::new(j, d);
                let h = build_v_enm(mu, m, n, lambda, s, t, b, Units::BandWidthUnits)?;
                let rhs = (2.0 * PI * (j as f64 / d as f64 + mf * s)).cos() + (2.0 * PI * mf * t).cos();
                worst = worst.max(residual(&h, rhs)?);
                for jp in 0..d {
                    let h = build_v_r2(mu, m, n, d, j, jp, s, t, b, Units::BandWidthUnits)?;
                    let df = d as f64;
                    let rhs = (2.0 * PI * (j as f64 + t) / df).cos()
                        + (2.0 * PI * (jp as f64 - s) / df).cos();
                    worst = worst.max(residual(&h, rhs)?);
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandStructure {
    /// Closed intervals `[lo, hi]`, ascending.
    pub bands: Vec<(f64, f64)>,
    /// `touching[k]` is set when bands `k` and `k + 1` share an endpoint.
    pub touching: Vec<bool>,
}

impl BandStructure {
    pub fn contains(&self, eps: f64, tol: f64) -> bool {
        self.bands.iter().any(|&(lo, hi)| eps >= lo - tol && eps <= hi + tol)
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Pairs each root of `P = 2` with the root of `P = −2` on the same monotone
/// piece of `P`.
pub fn band_edges(p: &ChambersPoly) -> Result<BandStructure> {
    let m = p.degree();
    if m == 0 {
        return Err(Error::InvalidArgument("band_edges needs degree >= 1".into()));
    }
    let roots = &p.roots;
    let mut critical = Vec::with_capacity(m - 1);
    for w in roots.windows(2) {
        let c = if w[1] - w[0] < TOUCH_TOLERANCE {
            0.5 * (w[0] + w[1])
        } else {
            bisect(|e| p.derivative(e), w[0], w[1]).ok_or_else(|| {
                Error::RootFindingFailure(format!(
                    "no critical point of P between {} and {}",
                    w[0], w[1]
                ))
            })?
        };
        critical.push(c);
    }
    let outer = 4.0 + BRACKET_MARGIN;
    let lower = roots[0].min(-outer);
    let upper = roots[m - 1].max(outer);
    let mut bands = Vec::with_capacity(m);
    for k in 0..m {
        let lo = if k == 0 { lower } else { critical[k - 1] };
        let hi = if k + 1 == m { upper } else { critical[k] };
        let g = |e: f64| p.eval(e) + 2.0;
        let other = if k > 0 && g(lo).abs() < TOUCH_TOLERANCE {
            lo
        } else if k + 1 < m && g(hi).abs() < TOUCH_TOLERANCE {
            hi
        } else {
            // P = −2 lies on the far side of r_k from the P = 2 neighbourhood
            let (a, b) = if p.derivative(roots[k]) > 0.0 { (lo, roots[k]) } else { (roots[k], hi) };
            bisect(g, a, b).ok_or_else(|| {
                Error::RootFindingFailure(format!(
                    "P = -2 has no root on [{a}, {b}] (band {k} of {m})"
                ))
            })?
        };
        let r = roots[k];
        bands.push((r.min(other), r.max(other)));
    }
    let touching = bands
        .windows(2)
        .map(|w| (w[1].0 - w[0].1).abs() < TOUCH_TOLERANCE)
        .collect();
    Ok(BandStructure { bands, touching })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    const MU0: LandauLevel = LandauLevel(0);
    const B: f64 = 0.3;
    const BW: Units = Units::BandWidthUnits;

    fn zero() -> Rational64 {
        Rational64::from_integer(0)
    }

    fn real(h: &HarperMatrix, i: usize, j: usize) -> f64 {
        assert!(h.matrix[(i, j)].im.abs() < 1e-15);
        h.matrix[(i, j)].re
    }

    #[test]
    fn enm_examples() {
        let h = build_v_enm(MU0, 2, 1, zero(), 0.0, 0.0, B, BW).unwrap();
        let expected = [[2.0, 2.0], [2.0, -2.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((real(&h, i, j) - expected[i][j]).abs() < 1e-15);
            }
        }
        let (a1, a2) = (0.13, 0.27);
        let h = build_v_enm(MU0, 1, 1, zero(), a1, a2, B, BW).unwrap();
        let x = 2.0 * (2.0 * PI * a1).cos() + 2.0 * (2.0 * PI * a2).cos();
        assert!((h.matrix[(0, 0)].re - x).abs() < 1e-14);
        assert_eq!(h.matrix.hermiticity_defect(), 0.0);
    }

    #[test]
    fn r2_examples() {
        let a = build_v_r2(MU0, 3, 2, 1, 0, 0, 0.0, 0.0, B, BW).unwrap();
        let b = build_v_enm(MU0, 3, 2, zero(), 0.0, 0.0, B, BW).unwrap();
        assert_eq!(a.matrix.max_diff(&b.matrix), 0.0);
        let h = build_v_r2(MU0, 2, 1, 2, 1, 0, 0.0, 0.0, B, BW).unwrap();
        assert!((h.hop_phase() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(h.matrix.hermiticity_defect() < 1e-12);
        assert!(build_v_r2(MU0, 2, 1, 2, 2, 0, 0.0, 0.0, B, BW).is_err());
    }

    #[test]
    fn cyclic_support_and_hermitian() {
        for m in 3..9i64 {
            let h = build_v_r2(MU0, m, 1, 3, 2, 1, 0.3, 0.7, B, BW).unwrap();
            assert!(h.matrix.hermiticity_defect() < 1e-12);
            let dim = m as usize;
            for r in 0..dim {
                for s in 0..dim {
                    let neighbour = r == s || (r + 1) % dim == s || (s + 1) % dim == r;
                    if !neighbour {
                        assert_eq!(h.matrix[(r, s)], Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn raw_units_scale_by_band_width_factor() {
        let bw = build_v_enm(LandauLevel(2), 3, 1, zero(), 0.1, 0.2, B, BW).unwrap();
        let raw = build_v_enm(LandauLevel(2), 3, 1, zero(), 0.1, 0.2, B, Units::Raw).unwrap();
        let c = band_width_factor(2, B);
        assert!(raw.matrix.max_diff(&bw.matrix.scale(Complex64::new(c, 0.0))) < 1e-15);
        assert!(build_v_enm(MU0, 3, 1, zero(), 0.0, 0.0, -1.0, Units::Raw).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let h = build_v_enm(MU0, 2, 1, zero(), 0.0, 0.0, B, BW).unwrap();
        let ev = h.eigenvalues().unwrap();
        let s = 2.0 * 2f64.sqrt();
        assert!((ev[0] + s).abs() < 1e-12 && (ev[1] - s).abs() < 1e-12);
        let h = build_v_enm(MU0, 1, 1, zero(), 0.25, 0.0, B, BW).unwrap();
        assert!((h.eigenvalues().unwrap()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn chambers_examples() {
        let p = chambers_poly(MU0, 1, 1, B).unwrap();
        assert_eq!(p.degree(), 1);
        assert!((p.coefficients[1] - 0.5).abs() < 1e-15 && p.coefficients[0].abs() < 1e-14);
        let p = chambers_poly(MU0, 2, 1, B).unwrap();
        assert!((p.coefficients[2] - 0.5).abs() < 1e-15);
        assert!(p.coefficients[1].abs() < 1e-12);
        assert!((p.coefficients[0] + 2.0).abs() < 1e-12);
        let e = 1.7;
        assert!((p.eval(e) - (e * e / 2.0 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn chambers_phase_independence() {
        // subtracting the cosine terms of V(α) recovers the same polynomial
        for m in 1..=8i64 {
            for n in 1..=m {
                if m.gcd(&n) != 1 {
                    continue;
                }
                let p = chambers_poly(MU0, m, n, B).unwrap();
                let (a1, a2) = (0.13, 0.27);
                let h = build_v_enm(MU0, m, n, zero(), a1, a2, B, BW).unwrap();
                let ev = h.eigenvalues().unwrap();
                let mf = m as f64;
                let shift = (2.0 * PI * mf * a1).cos() + (2.0 * PI * mf * a2).cos() - 2.0;
                for e in [-3.1, -0.4, 0.9, 2.5] {
                    let q = 0.5 * ev.iter().map(|r| e - r).product::<f64>() + 2.0 + shift;
                    assert!((q - p.eval(e)).abs() < 1e-10, "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn chambers_matches_faddeev_leverrier() {
        let (m, n) = (5i64, 2i64);
        let p = chambers_poly(MU0, m, n, B).unwrap();
        let v = build_v_enm(MU0, m, n, zero(), 0.0, 0.0, B, BW).unwrap().matrix;
        // det(ε − V) = Σ c_k ε^k via Faddeev–LeVerrier
        let dim = m as usize;
        let mut c = vec![0.0; dim + 1];
        c[dim] = 1.0;
        let mut mk = ComplexMatrix::zeros(dim);
        for k in 1..=dim {
            let mut next = &v * &mk;
            for i in 0..dim {
                next[(i, i)] += c[dim - k + 1];
            }
            mk = next;
            c[dim - k] = -(&v * &mk).trace().re / k as f64;
        }
        for k in 0..=dim {
            let expected = c[k] / 2.0 + if k == 0 { 2.0 } else { 0.0 };
            assert!((p.coefficients[k] - expected).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn wilkinson_examples() {
        let p = chambers_poly(MU0, 2, 1, B).unwrap();
        let s = 2.0 * 2f64.sqrt();
        assert!((p.eval(s) - 2.0).abs() < 1e-12);
        let h = build_v_enm(MU0, 2, 1, zero(), 0.0, 0.25, B, BW).unwrap();
        assert!(h.matrix[(0, 0)].norm() < 1e-15 && (h.matrix[(1, 0)].re - 2.0).abs() < 1e-15);
        for e in h.eigenvalues().unwrap() {
            assert!((e.abs() - 2.0).abs() < 1e-12);
            assert!(p.eval(e).abs() < 1e-12);
        }
        for m in 1..=10 {
            for n in 1..=m {
                if m.gcd(&n) == 1 {
                    assert!(verify_wilkinson(MU0, m, n, 2, B, 8).unwrap() < 1e-8, "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn band_examples() {
        let bs = band_edges(&chambers_poly(MU0, 1, 1, B).unwrap()).unwrap();
        assert_eq!(bs.bands.len(), 1);
        assert!((bs.bands[0].0 + 4.0).abs() < 1e-12 && (bs.bands[0].1 - 4.0).abs() < 1e-12);

        let bs = band_edges(&chambers_poly(MU0, 2, 1, B).unwrap()).unwrap();
        let s = 2.0 * 2f64.sqrt();
        assert!((bs.bands[0].0 + s).abs() < 1e-12 && bs.bands[0].1.abs() < 1e-9);
        assert!(bs.bands[1].0.abs() < 1e-9 && (bs.bands[1].1 - s).abs() < 1e-12);
        assert_eq!(bs.touching, vec![true]);
    }

    fn sweep_envelope(m: i64, n: i64, grid: usize) -> Vec<(f64, f64)> {
        let mut env = vec![(f64::INFINITY, f64::NEG_INFINITY); m as usize];
        for a in 0..grid {
            for c in 0..grid {
                let h = build_v_enm(
                    MU0,
                    m,
                    n,
                    zero(),
                    a as f64 / grid as f64,
                    c as f64 / grid as f64,
                    B,
                    BW,
                )
                .unwrap();
                for (k, e) in h.eigenvalues().unwrap().into_iter().enumerate() {
                    env[k].0 = env[k].0.min(e);
                    env[k].1 = env[k].1.max(e);
                }
            }
        }
        env
    }

    #[test]
    fn band_edges_match_phase_sweep() {
        // a 64-point grid hits α = 0 and α = 1/(2m)-multiples, where P = ±2
        for (m, n) in [(3, 1), (3, 2), (4, 1), (5, 2)] {
            let bs = band_edges(&chambers_poly(MU0, m, n, B).unwrap()).unwrap();
            assert_eq!(bs.bands.len(), m as usize);
            let env = sweep_envelope(m, n, 64);
            for (band, sweep) in bs.bands.iter().zip(&env) {
                assert!((band.0 - sweep.0).abs() < 1e-6, "m={m} n={n} {band:?} {sweep:?}");
                assert!((band.1 - sweep.1).abs() < 1e-6, "m={m} n={n} {band:?} {sweep:?}");
            }
            if m == 3 {
                assert!(bs.touching.iter().all(|t| !t));
            }
        }
    }

    #[test]
    fn theta_invariance_and_flux_reflection() {
        // B depends on θ but band-width units never see it
        for m in 2..7i64 {
            for n in 1..m {
                if m.gcd(&n) != 1 {
                    continue;
                }
                let reference = build_v_enm(MU0, m, n, zero(), 0.0, 0.0, B, BW).unwrap();
                let reflected = build_v_enm(MU0, m, m - n, zero(), 0.0, 0.0, B, BW).unwrap();
                let (a, b) = (reference.eigenvalues().unwrap(), reflected.eigenvalues().unwrap());
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-10);
                }
                for theta in [0.0, 0.3, 0.618_033_988_749_894_9] {
                    let b = m as f64 / (2.0 * PI * (n as f64 + m as f64 * theta));
                    let h = build_v_enm(MU0, m, n, Rational64::new(1, 3), 0.1, 0.2, b, BW).unwrap();
                    let r = build_v_enm(MU0, m, n, Rational64::new(1, 3), 0.1, 0.2, B, BW).unwrap();
                    assert_eq!(h.matrix.max_diff(&r.matrix), 0.0);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bands_contain_spectrum(m in 1i64..9, n in 1i64..9, a1 in 0.0f64..1.0, a2 in 0.0f64..1.0) {
            prop_assume!(n <= m && m.gcd(&n) == 1);
            let bs = band_edges(&chambers_poly(MU0, m, n, B).unwrap()).unwrap();
            let h = build_v_enm(MU0, m, n, zero(), a1, a2, B, BW).unwrap();
            for e in h.eigenvalues().unwrap() {
                prop_assert!(bs.contains(e, 1e-9));
            }
            for w in bs.bands.windows(2) {
                prop_assert!(w[0].1 <= w[1].0 + 1e-9);
            }
        }
    }
}
