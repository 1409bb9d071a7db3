//! Flux-sector arithmetic: the deformed quantization condition, gcd
//! reduction, positive-cone coordinates of the module labels, the commutant
//! phase matrix and the free Landau energies.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this `|n + m·θ|` the field strength is treated as singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Reduces `x` into `[0, 1)`.
pub fn reduce_mod1(x: f64) -> f64 {
    let r = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// `e^{2πi·turns}` with `turns` reduced modulo one first.
pub fn cis_turns(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * reduce_mod1(turns))
}

/// Exact rational reduction of `q` into `[0, 1)`.
pub fn rational_mod1(q: Rational64) -> Rational64 {
    q - q.floor()
}

/// `e^{2πi·q}` for a rational number of turns, reduced exactly before the
/// conversion to floating point.
pub fn cis_rational(q: Rational64) -> Complex64 {
    let r = rational_mod1(q);
    cis_turns(*r.numer() as f64 / *r.denom() as f64)
}

/// The arithmetic data of one rational flux sector.
///
/// `m` and `n` are stored reduced (`gcd(m, n) = 1`); the extracted common
/// divisor is `d`, so the original labels are `(d·m, d·n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxParams {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub theta: f64,
    /// Field strength, `2πB = m / (n + mθ)`.
    pub b: f64,
}

impl FluxParams {
    /// Unreduced numerator `d·m`.
    pub fn full_m(&self) -> i64 {
        self.d * self.m
    }

    /// Unreduced partner `d·n`.
    pub fn full_n(&self) -> i64 {
        self.d * self.n
    }

    /// `n + m·θ` for the unreduced labels.
    pub fn denominator(&self) -> f64 {
        self.full_n() as f64 + self.full_m() as f64 * self.theta
    }

    /// Residual of the quantization condition, `2πB·(n + mθ) − m`.
    pub fn quantization_residual(&self) -> f64 {
        2.0 * PI * self.b * self.denominator() - self.full_m() as f64
    }
}

/// Splits off `d = gcd(m, n)`. `gcd(m, 0) = m`.
pub fn reduce_flux(m: i64, n: i64) -> (i64, i64, i64) {
    let d = m.gcd(&n);
    if d == 0 {
        return (m, n, 1);
    }
    (m / d, n / d, d)
}

fn check_denominator(m: i64, n: i64, theta: f64) -> Result<f64> {
    let denominator = n as f64 + m as f64 * theta;
    // NaN fails too
    let regular = denominator.abs() >= SINGULAR_TOLERANCE;
    if !regular {
        return Err(Error::SingularFlux {
            denominator: denominator.abs(),
            tolerance: SINGULAR_TOLERANCE,
        });
    }
    Ok(denominator)
}

pub fn make_flux_params(m: i64, n: i64, theta: f64) -> Result<FluxParams> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("m must be >= 1, got {m}")));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidArgument(format!("theta must be finite, got {theta}")));
    }
    let denominator = check_denominator(m, n, theta)?;
    let (m_red, n_red, d) = reduce_flux(m, n);
    Ok(FluxParams {
        m: m_red,
        n: n_red,
        d,
        theta,
        b: m as f64 / (2.0 * PI * denominator),
    })
}

/// `(σn, σm)` with `σ = sgn(n + mθ)`; the result lies in the cone `x + θy > 0`.
pub fn positive_cone_coords(m: i64, n: i64, theta: f64) -> Result<(i64, i64)> {
    let denominator = check_denominator(m, n, theta)?;
    let sigma = if denominator > 0.0 { 1 } else { -1 };
    Ok((sigma * n, sigma * m))
}

/// Phases `Θ_{kl}` with `Z_k Z_l = e^{2πiΘ_{kl}} Z_l Z_k` for the four
/// generators of the commutant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaMatrix {
    /// Antisymmetric phases before reduction.
    pub raw: [[f64; 4]; 4],
    /// Entries reduced into `[0, 1)`.
    pub entries: [[f64; 4]; 4],
}

impl ThetaMatrix {
    /// `e^{2πiΘ_{kl}}` for zero-based generator indices.
    pub fn phase(&self, k: usize, l: usize) -> Complex64 {
        cis_turns(self.entries[k][l])
    }
}

pub fn theta_commutant_matrix(m: i64, n: i64, theta: f64) -> Result<ThetaMatrix> {
    if n == 0 {
        return Err(Error::DegenerateSector(
            "the commutant phases carry a 1/n prefactor and are undefined for n = 0".into(),
        ));
    }
    let denominator = check_denominator(m, n, theta)?;
    let t = theta / denominator;
    let mf = m as f64;
    let inv_n = 1.0 / n as f64;
    // Row 3/4 coupling is +m: Z3 Z4 = e^{2πi m/n} Z4 Z3 for the shift/phase
    // generators as represented on functions over the plane.
    let base = [
        [0.0, -t, -1.0, 0.0],
        [t, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, mf],
        [0.0, -1.0, -mf, 0.0],
    ];
    let mut raw = [[0.0; 4]; 4];
    let mut entries = [[0.0; 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            raw[k][l] = base[k][l] * inv_n;
            entries[k][l] = reduce_mod1(raw[k][l]);
        }
    }
    Ok(ThetaMatrix { raw, entries })
}

/// Landau level index μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct LandauLevel(pub u32);

impl LandauLevel {
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Free Landau energy `B(μ + ½)`.
pub fn landau_energy(mu: LandauLevel, b: f64) -> f64 {
    b * (mu.0 as f64 + 0.5)
}
