//! Finite-dimensional representations of the projected torus generators
//! `U₁^{(μ)}, U₂^{(μ)}` and their decomposition into irreducible blocks.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::algebra::{cis_rational, cis_turns, reduce_mod1, LandauLevel};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::special::band_width_factor;

/// Boundary and translation phases, each in turns (`e^{2πi·phase}`) and
/// stored reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseOffsets {
    pub alpha1: f64,
    pub alpha2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl PhaseOffsets {
    pub fn new(alpha1: f64, alpha2: f64, delta1: f64, delta2: f64) -> Self {
        PhaseOffsets {
            alpha1: reduce_mod1(alpha1),
            alpha2: reduce_mod1(alpha2),
            delta1: reduce_mod1(delta1),
            delta2: reduce_mod1(delta2),
        }
    }

    pub fn alphas(alpha1: f64, alpha2: f64) -> Self {
        Self::new(alpha1, alpha2, 0.0, 0.0)
    }

    pub fn deltas(delta1: f64, delta2: f64) -> Self {
        Self::new(0.0, 0.0, delta1, delta2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepVariant {
    Rho,
    Rho0,
    RhoTilde,
    RhoTilde1,
    RhoTilde0,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepLabels {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub lambda: Rational64,
    pub lambda_prime: Rational64,
}

impl RepLabels {
    fn simple(m: i64, n: i64) -> Self {
        RepLabels {
            m,
            n,
            d: 1,
            lambda: Rational64::from_integer(0),
            lambda_prime: Rational64::from_integer(0),
        }
    }
}

/// Images of `U₁^{(μ)}` and `U₂^{(μ)}` together with their labels.
#[derive(Debug, Clone)]
pub struct RepPair {
    pub u1: ComplexMatrix,
    pub u2: ComplexMatrix,
    pub variant: RepVariant,
    pub labels: RepLabels,
    pub phases: PhaseOffsets,
    pub mu: LandauLevel,
    /// Amplitude `c_μ` replaced by one.
    pub normalized: bool,
}

impl RepPair {
    pub fn dim(&self) -> usize {
        self.u1.dim()
    }

    /// `u1 + u1† + u2 + u2†`, the image of `2(cos x₁ + cos x₂)`.
    pub fn cosine_potential(&self) -> ComplexMatrix {
        let a = &self.u1 + &self.u1.adjoint();
        let b = &self.u2 + &self.u2.adjoint();
        &a + &b
    }

    /// Expected commutation phase `e^{2πi n/m}`.
    pub fn expected_phase(&self) -> Complex64 {
        cis_rational(Rational64::new(self.labels.n, self.labels.m))
    }
}

/// `c_μ(α)`: a pure phase when normalized, otherwise scaled by the band
/// width factor.
fn amplitude(mu: LandauLevel, b: f64, alpha: f64, normalized: bool) -> Complex64 {
    let phase = cis_turns(alpha);
    if normalized {
        phase
    } else {
        phase * band_width_factor(mu.index(), b)
    }
}

fn check_positive(name: &str, value: i64) -> Result<usize> {
    if value < 1 {
        return Err(Error::InvalidArgument(format!("{name} must be >= 1, got {value}")));
    }
    Ok(value as usize)
}

/// Clock matrix `diag(e^{−2πi·step·j/modulus})`, `j = 0..dim`.
fn clock(dim: usize, step: i64, modulus: i64) -> ComplexMatrix {
    let diag: Vec<Complex64> = (0..dim as i64)
        .map(|j| cis_rational(Rational64::new(-(step * j).rem_euclid(modulus), modulus)))
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// The `m`-dimensional clock–shift representation: `u1` the cyclic shift,
/// `u2 = diag(e^{−2πi n j/m})`.
pub fn rep_rho(
    m: i64,
    n: i64,
    mu: LandauLevel,
    b: f64,
    alpha1: f64,
    alpha2: f64,
    normalized: bool,
) -> Result<RepPair> {
    let dim = check_positive("m", m)?;
    let u1 = ComplexMatrix::cyclic_shift(dim, 1).scale(amplitude(mu, b, alpha1, normalized));
    let u2 = clock(dim, n, m).scale(amplitude(mu, b, alpha2, normalized));
    Ok(RepPair {
        u1,
        u2,
        variant: RepVariant::Rho,
        labels: RepLabels::simple(m, n),
        phases: PhaseOffsets::alphas(alpha1, alpha2),
        mu,
        normalized,
    })
}

/// `ρ₀^{(m,n;λ)}`: `ρ^{(m,n)}` with `u1` twisted by `e^{2πiλ/m}`.
#[allow(clippy::too_many_arguments)]
pub fn rep_rho0(
    m: i64,
    n: i64,
    lambda: Rational64,
    mu: LandauLevel,
    b: f64,
    alpha1: f64,
    alpha2: f64,
    normalized: bool,
) -> Result<RepPair> {
    let mut rep = rep_rho(m, n, mu, b, alpha1, alpha2, normalized)?;
    rep.u1 = rep.u1.scale(cis_rational(lambda / m));
    rep.variant = RepVariant::Rho0;
    rep.labels.lambda = lambda;
    Ok(rep)
}

/// The `mn`-dimensional representation on functions over the plane: `u1`
/// shifts by `n` in `Z_{mn}`, `u2 = diag(e^{−2πi j/m})`.
pub fn rep_rho_tilde(
    m: i64,
    n: i64,
    mu: LandauLevel,
    b: f64,
    delta1: f64,
    delta2: f64,
    normalized: bool,
) -> Result<RepPair> {
    let m_dim = check_positive("m", m)?;
    let n_dim = check_positive("n", n)?;
    let dim = m_dim * n_dim;
    let u1 = ComplexMatrix::cyclic_shift(dim, n_dim)
        .scale(amplitude(mu, b, delta2 / m as f64, normalized));
    let u2 = clock(dim, 1, m).scale(amplitude(mu, b, -delta1 / m as f64, normalized));
    let (_, _, d) = crate::algebra::reduce_flux(m, n);
    Ok(RepPair {
        u1,
        u2,
        variant: RepVariant::RhoTilde,
        labels: RepLabels { d, ..RepLabels::simple(m, n) },
        phases: PhaseOffsets::deltas(delta1, delta2),
        mu,
        normalized,
    })
}

/// `ρ̃₁^{(m,n;j)}`: `ρ^{(m,n)}` with `u2` twisted by `e^{2πi j/m}` and the
/// boundary phases substituted as `α₁ = δ₂/m`, `α₂ = −δ₁/m`.
#[allow(clippy::too_many_arguments)]
pub fn rep_rho_tilde1(
    m: i64,
    n: i64,
    j: i64,
    mu: LandauLevel,
    b: f64,
    delta1: f64,
    delta2: f64,
    normalized: bool,
) -> Result<RepPair> {
    let mf = m as f64;
    let mut rep = rep_rho(m, n, mu, b, delta2 / mf, -delta1 / mf, normalized)?;
    rep.u2 = rep.u2.scale(cis_rational(Rational64::new(j, m)));
    rep.variant = RepVariant::RhoTilde1;
    rep.labels.lambda = Rational64::from_integer(j);
    rep.phases = PhaseOffsets::deltas(delta1, delta2);
    Ok(rep)
}

/// `ω` with `a·b = ω·b·a`, measured from `ab·(ba)⁻¹`.
pub fn commutation_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    let ab = a * b;
    let ba = b * a;
    let ratio = &ab * &ba.inverse()?;
    let omega = ratio.trace() / ratio.dim() as f64;
    let deviation = ratio.max_diff(&ComplexMatrix::identity(ratio.dim()).scale(omega));
    if deviation > 1e-8 {
        return Err(Error::NotCentralPhase { deviation });
    }
    Ok(omega)
}

/// Irreducible blocks of `ρ̃^{(md, nd)}` for coprime `(m, n)`.
///
/// Returns `n·d²` blocks of dimension `m`, indexed by `(ν, j, j')` with
/// `ν = 0..n`, `j, j' = 0..d`: `u1 = e^{2πi(j+δ₂)/(md)}·shift`,
/// `u2 = e^{2πi(j'−δ₁)/(md)}·diag(e^{−2πi n r/m})`. Block `(ν, j, j')` has
/// `λ = j/d` and the `u2` twist `j'/d`; the `ν` copies are identical.
pub fn decompose_rep(
    m: i64,
    n: i64,
    d: i64,
    mu: LandauLevel,
    b: f64,
    phases: PhaseOffsets,
    normalized: bool,
) -> Result<Vec<RepPair>> {
    let m_dim = check_positive("m", m)?;
    check_positive("n", n)?;
    check_positive("d", d)?;
    if m.gcd(&n) != 1 {
        return Err(Error::InvalidArgument(format!(
            "decompose_rep expects coprime (m, n), got ({m}, {n})"
        )));
    }
    let md = (m * d) as f64;
    let shift = ComplexMatrix::cyclic_shift(m_dim, 1);
    let clock = clock(m_dim, n, m);
    let mut blocks = Vec::with_capacity((n * d * d) as usize);
    for _nu in 0..n {
        for j in 0..d {
            for jp in 0..d {
                let a1 = amplitude(mu, b, (j as f64 + phases.delta2) / md, normalized);
                let a2 = amplitude(mu, b, (jp as f64 - phases.delta1) / md, normalized);
                blocks.push(RepPair {
                    u1: shift.scale(a1),
                    u2: clock.scale(a2),
                    variant: RepVariant::RhoTilde0,
                    labels: RepLabels {
                        m,
                        n,
                        d,
                        lambda: Rational64::new(j, d),
                        lambda_prime: Rational64::new(jp, d),
                    },
                    phases,
                    mu,
                    normalized,
                });
            }
        }
    }
    Ok(blocks)
}

/// Dimension of the commutant `{X : [X, a] = [X, b] = 0}`.
pub fn commutant_dimension(a: &ComplexMatrix, b: &ComplexMatrix) -> usize {
    let n = a.dim();
    let unknowns = n * n;
    let mut system = vec![Complex64::new(0.0, 0.0); 2 * unknowns * unknowns];
    // row (which, i, j): (X·G − G·X)_{ij} = Σ_k X_{ik} G_{kj} − G_{ik} X_{kj}
    for (which, g) in [a, b].into_iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = which * unknowns + i * n + j;
                let base = row * unknowns;
                for k in 0..n {
                    system[base + i * n + k] += g[(k, j)];
                    system[base + k * n + j] -= g[(i, k)];
                }
            }
        }
    }
    unknowns - linalg::rank(2 * unknowns, unknowns, &system, 1e-9)
}
