//! Landau-level eigenfunctions on the module over the line and on functions
//! over the plane with twisted boundary conditions, the operators acting on
//! them, and quadrature checks of orthonormality and commutation relations.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{cis_turns, theta_commutant_matrix, FluxParams, LandauLevel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::representations::PhaseOffsets;
use crate::special::{gauss_hermite_rule, gauss_legendre_rule, hermite};

/// Default lattice-sum truncation `|k| ≤ K`.
pub const DEFAULT_TRUNCATION: usize = 20;
/// Default finite-difference step for the kinetic momenta.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

const GRAM_TOLERANCE: f64 = 1e-8;
const GRAM_MAX_LEVELS: usize = 7;
const HERMITE_GRAM_ORDER: usize = 48;

pub type Evaluator = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Where a function lives and how its scalar product is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Vector-valued functions on the real line: the scalar value times the
    /// unit vector `e_component` of `C^components`. Integrated with
    /// Gauss–Hermite around `center` with Gaussian length `1/scale`.
    Line { center: f64, scale: f64, components: usize, component: usize },
    /// Functions over the plane, integrated over `[−X/2, X/2] × [0, Y]` with
    /// measure `dx/X dy`.
    Plane { x_period: f64, y_period: f64 },
}

#[derive(Clone)]
pub struct SampledFunction {
    evaluator: Evaluator,
    pub domain: Domain,
    /// Lattice-sum truncation, when the function is a truncated sum.
    pub truncation: Option<usize>,
}

impl SampledFunction {
    pub fn new(domain: Domain, evaluator: Evaluator) -> Self {
        SampledFunction { evaluator, domain, truncation: None }
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        (self.evaluator)(x, y)
    }

    fn derive(&self, evaluator: Evaluator) -> Self {
        SampledFunction { evaluator, domain: self.domain, truncation: self.truncation }
    }
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction")
            .field("domain", &self.domain)
            .field("truncation", &self.truncation)
            .finish_non_exhaustive()
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `φ_μ(u) = e^{−u²/2} H_μ(u)`, zero far in the tail.
fn oscillator(mu: u32, u: f64) -> f64 {
    if u.abs() > 40.0 {
        return 0.0;
    }
    (-0.5 * u * u).exp() * hermite(mu, u)
}

fn positive_sector(params: &FluxParams) -> Result<f64> {
    let denominator = params.denominator();
    let positive = denominator > 0.0 && params.b > 0.0;
    if !positive {
        return Err(Error::InvalidArgument(format!(
            "Landau eigenfunctions need B > 0 (n + m*theta = {denominator})"
        )));
    }
    Ok(denominator)
}

/// Eigenfunction `ψ_{μ,j}` on the module over the line.
pub fn psi_enm(
    mu: LandauLevel,
    j: i64,
    params: &FluxParams,
    phases: &PhaseOffsets,
) -> Result<SampledFunction> {
    let denominator = positive_sector(params)?;
    let m = params.full_m();
    let mf = m as f64;
    let scale = (2.0 * PI * mf / denominator).sqrt();
    let mu = mu.index();
    let norm = (scale / (2f64.powi(mu as i32) * factorial(mu) * PI.sqrt())).sqrt();
    let center = phases.alpha2;
    let chirp = -2.0 * PI * phases.alpha1 * mf / denominator;
    let evaluator: Evaluator = Arc::new(move |x, _y| {
        Complex64::from_polar(norm * oscillator(mu, scale * (x - center)), chirp * x)
    });
    Ok(SampledFunction::new(
        Domain::Line {
            center,
            scale,
            components: m as usize,
            component: j.rem_euclid(m) as usize,
        },
        evaluator,
    ))
}

/// `(2^{2μ} π μ!² / B)^{−1/4}`.
pub fn plane_normalization(mu: u32, b: f64) -> f64 {
    (4f64.powi(mu as i32) * PI * factorial(mu).powi(2) / b).powf(-0.25)
}

/// `√(2^{μ−1} μ!)·(2(n/m + θ))^{−1/4}`, the alternative printed constant.
pub fn alternative_normalization(mu: u32, params: &FluxParams) -> f64 {
    let ratio = params.full_n() as f64 / params.full_m() as f64 + params.theta;
    (2f64.powi(mu as i32 - 1) * factorial(mu)).sqrt() * (2.0 * ratio).powf(-0.25)
}

/// Quasi-period in `y`, `2π(n + mθ/2)`.
pub fn y_period(params: &FluxParams) -> f64 {
    2.0 * PI * (params.full_n() as f64 + params.full_m() as f64 * params.theta / 2.0)
}

/// Eigenfunction `ψ_{μ,r}` over the plane, the lattice sum truncated to
/// `|k| ≤ truncation`.
pub fn psi_r2(
    mu: LandauLevel,
    r: i64,
    params: &FluxParams,
    phases: &PhaseOffsets,
    truncation: usize,
) -> Result<SampledFunction> {
    psi_r2_scaled(mu, r, params, phases, truncation, None)
}

fn psi_r2_scaled(
    mu: LandauLevel,
    r: i64,
    params: &FluxParams,
    phases: &PhaseOffsets,
    truncation: usize,
    norm_override: Option<f64>,
) -> Result<SampledFunction> {
    positive_sector(params)?;
    let m = params.full_m();
    let n = params.full_n();
    if n < 1 {
        return Err(Error::InvalidArgument(format!("psi_r2 needs n >= 1, got {n}")));
    }
    let mn = m * n;
    if !(0..mn).contains(&r) {
        return Err(Error::InvalidArgument(format!("r must lie in 0..{mn}, got {r}")));
    }
    let b = params.b;
    let mu = mu.index();
    let norm = norm_override.unwrap_or_else(|| plane_normalization(mu, b));
    let sqrt_b = b.sqrt();
    let offset = 1.0 / b - PI * params.theta;
    let (mf, nf) = (m as f64, n as f64);
    let (delta1, delta2) = (phases.delta1, phases.delta2);
    let k_max = truncation as i64;
    let terms: Vec<(f64, f64, f64)> = (-k_max..=k_max)
        .map(|k| {
            let turns = k as f64 * delta2 + r as f64 * delta2 / mn as f64;
            let freq = k as f64 * mf + (r as f64 + delta1) / nf;
            let shift = offset * ((k * mn + r) as f64 + delta1) / nf;
            (-turns, freq, shift)
        })
        .collect();
    let evaluator: Evaluator = Arc::new(move |x, y| {
        let mut sum = Complex64::new(0.0, 0.0);
        for &(turns, freq, shift) in &terms {
            let amp = oscillator(mu, sqrt_b * (y + shift));
            if amp == 0.0 {
                continue;
            }
            sum += cis_turns(turns) * Complex64::from_polar(amp, freq * x);
        }
        sum * norm
    });
    Ok(SampledFunction {
        evaluator,
        domain: Domain::Plane { x_period: 2.0 * PI * nf, y_period: y_period(params) },
        truncation: Some(truncation),
    })
}

/// Gram matrix `⟨f_a | f_b⟩` of functions sharing one domain.
pub fn gram_matrix(functions: &[SampledFunction], _params: &FluxParams) -> Result<ComplexMatrix> {
    let Some(first) = functions.first() else {
        return Ok(ComplexMatrix::zeros(0));
    };
    match first.domain {
        Domain::Line { center, scale, components, .. } => {
            for f in functions {
                match f.domain {
                    Domain::Line { center: c, scale: s, components: k, .. }
                        if c == center && s == scale && k == components => {}
                    _ => {
                        return Err(Error::InvalidArgument(
                            "gram_matrix: functions do not share a domain".into(),
                        ))
                    }
                }
            }
            line_gram(functions, center, scale)
        }
        Domain::Plane { x_period, y_period } => {
            if functions.iter().any(|f| f.domain != first.domain) {
                return Err(Error::InvalidArgument(
                    "gram_matrix: functions do not share a domain".into(),
                ));
            }
            plane_gram(functions, x_period, y_period)
        }
    }
}

fn component_of(f: &SampledFunction) -> usize {
    match f.domain {
        Domain::Line { component, .. } => component,
        Domain::Plane { .. } => 0,
    }
}

fn line_gram(functions: &[SampledFunction], center: f64, scale: f64) -> Result<ComplexMatrix> {
    let rule = gauss_hermite_rule(HERMITE_GRAM_ORDER)?;
    // ∫ f̄ g dx = (1/scale) Σ w e^{u²} f̄ g at x = center + u/scale
    let points: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&u, &w)| (center + u / scale, w * (u * u).exp() / scale))
        .collect();
    let values: Vec<Vec<Complex64>> = functions
        .iter()
        .map(|f| points.iter().map(|&(x, _)| f.eval(x, 0.0)).collect())
        .collect();
    let k = functions.len();
    let mut gram = ComplexMatrix::zeros(k);
    for a in 0..k {
        for b in a..k {
            let value = if component_of(&functions[a]) != component_of(&functions[b]) {
                Complex64::new(0.0, 0.0)
            } else {
                values[a]
                    .iter()
                    .zip(&values[b])
                    .zip(&points)
                    .map(|((fa, fb), &(_, w))| fa.conj() * fb * w)
                    .sum()
            };
            gram[(a, b)] = value;
            gram[(b, a)] = value.conj();
        }
    }
    Ok(gram)
}

fn composite_nodes(lo: f64, hi: f64, panels: usize, nodes: &[f64], weights: &[f64]) -> Vec<(f64, f64)> {
    let width = (hi - lo) / panels as f64;
    (0..panels)
        .flat_map(|p| {
            let a = lo + p as f64 * width;
            nodes
                .iter()
                .zip(weights)
                .map(move |(&t, &w)| (a + 0.5 * width * (t + 1.0), 0.5 * width * w))
        })
        .collect()
}

fn plane_gram_at(
    functions: &[SampledFunction],
    x_period: f64,
    y_period: f64,
    panels: usize,
    nodes: &[f64],
    weights: &[f64],
) -> ComplexMatrix {
    let xs = composite_nodes(-0.5 * x_period, 0.5 * x_period, panels, nodes, weights);
    let ys = composite_nodes(0.0, y_period, panels, nodes, weights);
    let values: Vec<Vec<Complex64>> = functions
        .iter()
        .map(|f| {
            xs.iter()
                .flat_map(|&(x, _)| ys.iter().map(move |&(y, _)| f.eval(x, y)))
                .collect()
        })
        .collect();
    let weights: Vec<f64> = xs
        .iter()
        .flat_map(|&(_, wx)| ys.iter().map(move |&(_, wy)| wx * wy / x_period))
        .collect();
    let k = functions.len();
    let mut gram = ComplexMatrix::zeros(k);
    for a in 0..k {
        for b in a..k {
            let value: Complex64 = values[a]
                .iter()
                .zip(&values[b])
                .zip(&weights)
                .map(|((fa, fb), &w)| fa.conj() * fb * w)
                .sum();
            gram[(a, b)] = value;
            gram[(b, a)] = value.conj();
        }
    }
    gram
}

/// Tensor-product composite Gauss–Legendre, panels doubled until two
/// successive levels agree.
fn plane_gram(functions: &[SampledFunction], x_period: f64, y_period: f64) -> Result<ComplexMatrix> {
    let rule = gauss_legendre_rule(16)?;
    let mut panels = 2;
    let mut previous = plane_gram_at(functions, x_period, y_period, panels, &rule.nodes, &rule.weights);
    for _ in 0..GRAM_MAX_LEVELS {
        panels *= 2;
        let current = plane_gram_at(functions, x_period, y_period, panels, &rule.nodes, &rule.weights);
        if current.max_diff(&previous) < GRAM_TOLERANCE {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::QuadratureFailure(format!(
        "Gram matrix not converged to {GRAM_TOLERANCE:e} with {panels} panels per axis"
    )))
}

/// Numerically measured normalization of `ψ_{μ,r}` compared with the two
/// printed closed forms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalizationReport {
    /// `1/‖ψ‖` for the unnormalized lattice sum.
    pub numeric: f64,
    pub gaussian_form: f64,
    pub alternative_form: f64,
}

impl NormalizationReport {
    pub fn gaussian_form_matches(&self, tol: f64) -> bool {
        (self.numeric - self.gaussian_form).abs() <= tol * self.numeric
    }

    pub fn alternative_form_matches(&self, tol: f64) -> bool {
        (self.numeric - self.alternative_form).abs() <= tol * self.numeric
    }
}

pub fn normalization_report(
    mu: LandauLevel,
    params: &FluxParams,
    phases: &PhaseOffsets,
    truncation: usize,
) -> Result<NormalizationReport> {
    let raw = psi_r2_scaled(mu, 0, params, phases, truncation, Some(1.0))?;
    let gram = gram_matrix(&[raw], params)?;
    Ok(NormalizationReport {
        numeric: 1.0 / gram[(0, 0)].re.sqrt(),
        gaussian_form: plane_normalization(mu.index(), params.b),
        alternative_form: alternative_normalization(mu.index(), params),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    U1,
    U2,
    Z1,
    Z2,
    Z3,
    Z4,
    /// Magnetic translation by one period in `x` (same as `Z3`).
    T1,
    /// Magnetic translation by one period in `y` (same as `Z4`).
    T2,
    Translate { ax: f64, ay: f64 },
    Pi1,
    Pi2,
}

#[derive(Debug, Clone, Copy)]
pub struct OperatorAction {
    pub kind: OperatorKind,
    pub params: FluxParams,
    pub phases: PhaseOffsets,
    /// Finite-difference step for the momentum kinds.
    pub step: f64,
}

impl OperatorAction {
    pub fn new(kind: OperatorKind, params: FluxParams) -> Self {
        OperatorAction { kind, params, phases: PhaseOffsets::default(), step: DEFAULT_FD_STEP }
    }
}

/// `(Aψ)(x, y) = e^{i(ax + by)} ψ(x + s, y + t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ShiftPhase {
    a: f64,
    b: f64,
    s: f64,
    t: f64,
}

impl ShiftPhase {
    /// `ω` with `self·other = ω·other·self`.
    fn commutator_phase(&self, other: &ShiftPhase) -> f64 {
        other.a * self.s + other.b * self.t - self.a * other.s - self.b * other.t
    }
}

fn shift_phase(kind: OperatorKind, p: &FluxParams) -> Option<ShiftPhase> {
    let theta = p.theta;
    let m = p.full_m() as f64;
    let n = p.full_n() as f64;
    let den = n + m * theta;
    let b = p.b;
    Some(match kind {
        OperatorKind::U1 => ShiftPhase { a: 1.0, b: 0.0, s: 0.0, t: -PI * theta },
        OperatorKind::U2 => ShiftPhase { a: 0.0, b: 1.0, s: PI * theta, t: 0.0 },
        OperatorKind::Z1 => ShiftPhase { a: 1.0 / n, b: 0.0, s: 0.0, t: PI * theta / n },
        OperatorKind::Z2 => ShiftPhase { a: 0.0, b: -1.0 / den, s: PI * theta / den, t: 0.0 },
        OperatorKind::Z3 | OperatorKind::T1 => ShiftPhase { a: 0.0, b: 0.0, s: 2.0 * PI, t: 0.0 },
        OperatorKind::Z4 | OperatorKind::T2 => ShiftPhase {
            a: m / n,
            b: 0.0,
            s: 0.0,
            t: 2.0 * PI * (1.0 + m * theta / (2.0 * n)),
        },
        OperatorKind::Translate { ax, ay } => {
            let g = 1.0 - 2.0 * PI * theta * b;
            ShiftPhase {
                a: -b / g * ay,
                b: 0.0,
                s: -ax,
                t: -(1.0 - PI * theta * b) / g * ay,
            }
        }
        OperatorKind::Pi1 | OperatorKind::Pi2 => return None,
    })
}

pub fn apply_operator(op: &OperatorAction, f: &SampledFunction) -> SampledFunction {
    let inner = f.evaluator.clone();
    if let Some(sp) = shift_phase(op.kind, &op.params) {
        return f.derive(Arc::new(move |x, y| {
            Complex64::from_polar(1.0, sp.a * x + sp.b * y) * inner(x + sp.s, y + sp.t)
        }));
    }
    let h = op.step;
    let i = Complex64::new(0.0, 1.0);
    match op.kind {
        OperatorKind::Pi1 => {
            let b = op.params.b;
            let coeff = 1.0 - PI * op.params.theta * b;
            f.derive(Arc::new(move |x, y| {
                let dx = (inner(x + h, y) - inner(x - h, y)) / (2.0 * h);
                -i * coeff * dx + inner(x, y) * (b * y)
            }))
        }
        OperatorKind::Pi2 => f.derive(Arc::new(move |x, y| {
            -i * (inner(x, y + h) - inner(x, y - h)) / (2.0 * h)
        })),
        _ => unreachable!("shift/phase kinds handled above"),
    }
}

fn apply_all(ops: &[OperatorAction], f: &SampledFunction) -> SampledFunction {
    // rightmost operator acts first
    ops.iter().rev().fold(f.clone(), |g, op| apply_operator(op, &g))
}

/// Max pointwise residuals of the operator identities.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorReport {
    pub samples: usize,
    /// `U₁U₂ = e^{−2πiθ}U₂U₁`.
    pub torus_relation: f64,
    /// `Z_kZ_l = e^{2πiΘ_{kl}}Z_lZ_k`, pairs `(k, l)` one-based.
    pub commutant_relations: Vec<((usize, usize), f64)>,
    /// `[Z_k, U_j] = 0`.
    pub commutant_commutes: f64,
    /// `T(a)U_j = e^{−ia_j}U_jT(a)`.
    pub translation_relation: f64,
    /// `T₁ⁿ = e^{2πiδ₁}`, `T₂ⁿ = e^{2πiδ₂}` on the eigenfunctions.
    pub center_scalars: (f64, f64),
    /// `T₁^{nk₁}T₂^{nk₂}T(a) = e^{−im(a_y k₁ − a_x k₂)}T(a)T₁^{nk₁}T₂^{nk₂}`.
    pub lattice_relation: f64,
    /// Boundary-condition residuals after `T(a)` with `a ∈ (2π/m)Z²`.
    pub supercell_boundary: f64,
    /// The same for a generic translation; expected to be large.
    pub generic_boundary: f64,
    /// `[π₁, π₂] = iB` by finite differences.
    pub momentum_commutator: f64,
    /// `[T(a), π_j] = 0` by finite differences.
    pub translation_momentum: f64,
    pub fd_step: f64,
}

impl OperatorReport {
    /// Largest residual among the exact shift/phase identities.
    pub fn max_exact(&self) -> f64 {
        let z = self.commutant_relations.iter().map(|(_, r)| *r).fold(0.0, f64::max);
        [
            self.torus_relation,
            z,
            self.commutant_commutes,
            self.translation_relation,
            self.center_scalars.0,
            self.center_scalars.1,
            self.lattice_relation,
            self.supercell_boundary,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn test_gaussian(x0: f64, y0: f64, kx: f64, ky: f64) -> SampledFunction {
    SampledFunction::new(
        Domain::Plane { x_period: 2.0 * PI, y_period: 2.0 * PI },
        Arc::new(move |x, y| {
            let r2 = (x - x0).powi(2) + (y - y0).powi(2);
            Complex64::from_polar((-r2 / 18.0).exp(), kx * x + ky * y)
        }),
    )
}

fn max_residual(
    points: &[(f64, f64)],
    lhs: &SampledFunction,
    rhs: &SampledFunction,
    phase: Complex64,
) -> f64 {
    points
        .iter()
        .map(|&(x, y)| (lhs.eval(x, y) - phase * rhs.eval(x, y)).norm())
        .fold(0.0, f64::max)
}

fn boundary_residual(points: &[(f64, f64)], f: &SampledFunction, params: &FluxParams, phases: &PhaseOffsets) -> f64 {
    let n = params.full_n() as f64;
    let m = params.full_m() as f64;
    let ly = y_period(params);
    points
        .iter()
        .map(|&(x, y)| {
            let v = f.eval(x, y);
            let bc1 = (f.eval(x + 2.0 * PI * n, y) - cis_turns(phases.delta1) * v).norm();
            let bc2 = (f.eval(x, y + ly)
                - cis_turns(phases.delta2) * Complex64::from_polar(1.0, -m * x) * v)
                .norm();
            bc1.max(bc2)
        })
        .fold(0.0, f64::max)
}

/// Samples the operator identities at `sample_count` seeded random points.
pub fn check_operator_relations(
    params: &FluxParams,
    phases: &PhaseOffsets,
    sample_count: usize,
) -> Result<OperatorReport> {
    check_operator_relations_with(params, phases, sample_count, DEFAULT_FD_STEP, DEFAULT_TRUNCATION)
}

pub fn check_operator_relations_with(
    params: &FluxParams,
    phases: &PhaseOffsets,
    sample_count: usize,
    fd_step: f64,
    truncation: usize,
) -> Result<OperatorReport> {
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample_count must be >= 1".into()));
    }
    positive_sector(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f70_7275);
    let points: Vec<(f64, f64)> = (0..sample_count)
        .map(|_| (rng.gen_range(-2.0 * PI..2.0 * PI), rng.gen_range(-2.0 * PI..2.0 * PI)))
        .collect();
    let op = |kind| OperatorAction { kind, params: *params, phases: *phases, step: fd_step };
    let gaussian = test_gaussian(0.3, -0.2, 0.7, -0.4);

    let u1 = op(OperatorKind::U1);
    let u2 = op(OperatorKind::U2);
    let torus_relation = max_residual(
        &points,
        &apply_all(&[u1, u2], &gaussian),
        &apply_all(&[u2, u1], &gaussian),
        cis_turns(-params.theta),
    );

    let theta_matrix = theta_commutant_matrix(params.full_m(), params.full_n(), params.theta)?;
    let zs = [OperatorKind::Z1, OperatorKind::Z2, OperatorKind::Z3, OperatorKind::Z4].map(op);
    let mut commutant_relations = Vec::new();
    for k in 0..4 {
        for l in (k + 1)..4 {
            let r = max_residual(
                &points,
                &apply_all(&[zs[k], zs[l]], &gaussian),
                &apply_all(&[zs[l], zs[k]], &gaussian),
                theta_matrix.phase(k, l),
            );
            commutant_relations.push(((k + 1, l + 1), r));
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let mut commutant_commutes: f64 = 0.0;
    for z in zs {
        for u in [u1, u2] {
            commutant_commutes = commutant_commutes.max(max_residual(
                &points,
                &apply_all(&[z, u], &gaussian),
                &apply_all(&[u, z], &gaussian),
                one,
            ));
        }
    }

    let translations: Vec<(f64, f64)> =
        (0..4).map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
    let mut translation_relation: f64 = 0.0;
    for &(ax, ay) in &translations {
        let t = op(OperatorKind::Translate { ax, ay });
        for (u, a) in [(u1, ax), (u2, ay)] {
            translation_relation = translation_relation.max(max_residual(
                &points,
                &apply_all(&[t, u], &gaussian),
                &apply_all(&[u, t], &gaussian),
                Complex64::from_polar(1.0, -a),
            ));
        }
    }

    let n = params.full_n() as usize;
    let m = params.full_m() as f64;
    let t1 = op(OperatorKind::T1);
    let t2 = op(OperatorKind::T2);
    let t1n = vec![t1; n];
    let t2n = vec![t2; n];
    let mut center_scalars: (f64, f64) = (0.0, 0.0);
    let mn = params.full_m() * params.full_n();
    let states: Vec<SampledFunction> = (0..mn.min(4))
        .map(|r| psi_r2(LandauLevel(0), r, params, phases, truncation))
        .collect::<Result<_>>()?;
    for psi in &states {
        center_scalars.0 = center_scalars
            .0
            .max(max_residual(&points, &apply_all(&t1n, psi), psi, cis_turns(phases.delta1)));
        center_scalars.1 = center_scalars
            .1
            .max(max_residual(&points, &apply_all(&t2n, psi), psi, cis_turns(phases.delta2)));
    }

    let mut lattice_relation: f64 = 0.0;
    for &(k1, k2) in &[(1usize, 0usize), (0, 1), (1, 1), (2, 1)] {
        for &(ax, ay) in &translations {
            let t = op(OperatorKind::Translate { ax, ay });
            let mut lattice = vec![t1; n * k1];
            lattice.extend(vec![t2; n * k2]);
            let mut lhs_ops = lattice.clone();
            lhs_ops.push(t);
            let mut rhs_ops = vec![t];
            rhs_ops.extend(lattice);
            let phase = Complex64::from_polar(1.0, -m * (ay * k1 as f64 - ax * k2 as f64));
            lattice_relation = lattice_relation.max(max_residual(
                &points,
                &apply_all(&lhs_ops, &gaussian),
                &apply_all(&rhs_ops, &gaussian),
                phase,
            ));
        }
    }

    let mut supercell_boundary: f64 = 0.0;
    let mut generic_boundary: f64 = 0.0;
    for psi in &states {
        for &(n1, n2) in &[(1i64, 0i64), (0, 1), (1, -2)] {
            let t = op(OperatorKind::Translate {
                ax: 2.0 * PI * n1 as f64 / m,
                ay: 2.0 * PI * n2 as f64 / m,
            });
            supercell_boundary = supercell_boundary
                .max(boundary_residual(&points, &apply_operator(&t, psi), params, phases));
        }
        let t = op(OperatorKind::Translate { ax: 0.37, ay: 0.81 });
        generic_boundary =
            generic_boundary.max(boundary_residual(&points, &apply_operator(&t, psi), params, phases));
    }

    let p1 = op(OperatorKind::Pi1);
    let p2 = op(OperatorKind::Pi2);
    let ib = Complex64::new(0.0, params.b);
    let commutator_lhs = apply_all(&[p1, p2], &gaussian);
    let commutator_rhs = apply_all(&[p2, p1], &gaussian);
    let momentum_commutator = points
        .iter()
        .map(|&(x, y)| {
            (commutator_lhs.eval(x, y) - commutator_rhs.eval(x, y) - ib * gaussian.eval(x, y)).norm()
        })
        .fold(0.0, f64::max);

    let mut translation_momentum: f64 = 0.0;
    for &(ax, ay) in &translations {
        let t = op(OperatorKind::Translate { ax, ay });
        for p in [p1, p2] {
            translation_momentum = translation_momentum.max(max_residual(
                &points,
                &apply_all(&[t, p], &gaussian),
                &apply_all(&[p, t], &gaussian),
                one,
            ));
        }
    }

    Ok(OperatorReport {
        samples: sample_count,
        torus_relation,
        commutant_relations,
        commutant_commutes,
        translation_relation,
        center_scalars,
        lattice_relation,
        supercell_boundary,
        generic_boundary,
        momentum_commutator,
        translation_momentum,
        fd_step,
    })
}

/// Analytic commutation phase of two shift/phase operators, in radians.
pub fn analytic_commutator_phase(a: OperatorKind, b: OperatorKind, params: &FluxParams) -> Option<f64> {
    Some(shift_phase(a, params)?.commutator_phase(&shift_phase(b, params)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_flux_params, reduce_mod1};

    fn params(m: i64, n: i64, theta: f64) -> FluxParams {
        make_flux_params(m, n, theta).unwrap()
    }

    #[test]
    fn enm_ground_state_peaks_at_alpha2() {
        let p = params(2, 1, 0.3);
        for alpha2 in [0.0, 0.4] {
            let f = psi_enm(LandauLevel(0), 0, &p, &PhaseOffsets::alphas(0.2, alpha2)).unwrap();
            let (mut best, mut best_x) = (0.0, f64::NAN);
            for i in -2000..=2000 {
                let x = i as f64 * 1e-3;
                let v = f.eval(x, 0.0).norm();
                if v > best {
                    best = v;
                    best_x = x;
                }
            }
            assert!((best_x - alpha2).abs() < 1.5e-3, "argmax {best_x}");
        }
    }

    #[test]
    fn enm_index_periodicity_and_phase() {
        let p = params(3, 1, 0.2);
        let ph = PhaseOffsets::alphas(0.0, 0.1);
        let a = psi_enm(LandauLevel(1), 1, &p, &ph).unwrap();
        let b = psi_enm(LandauLevel(1), 4, &p, &ph).unwrap();
        assert_eq!(a.domain, b.domain);
        let shifted = psi_enm(LandauLevel(1), 1, &p, &PhaseOffsets::alphas(0.35, 0.1)).unwrap();
        for i in -50..50 {
            let x = i as f64 * 0.05;
            assert_eq!(a.eval(x, 0.0), b.eval(x, 0.0));
            assert!((a.eval(x, 0.0).norm() - shifted.eval(x, 0.0).norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn enm_orthonormal() {
        let p = params(3, 2, 0.3);
        let ph = PhaseOffsets::alphas(0.3, 0.2);
        let fs: Vec<SampledFunction> = (0..3u32)
            .flat_map(|mu| (0..3).map(move |j| (mu, j)))
            .map(|(mu, j)| psi_enm(LandauLevel(mu), j, &p, &ph).unwrap())
            .collect();
        let g = gram_matrix(&fs, &p).unwrap();
        assert!(g.max_diff(&ComplexMatrix::identity(9)) < 1e-10);
    }

    #[test]
    fn boundary_conditions_hold() {
        for (m, n, theta) in [(1, 1, 0.0), (2, 1, 0.3), (3, 2, 0.618)] {
            let p = params(m, n, theta);
            let ph = PhaseOffsets::deltas(0.21, 0.67);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let pts: Vec<(f64, f64)> =
                (0..100).map(|_| (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect();
            for r in 0..(m * n) {
                let f = psi_r2(LandauLevel(1), r, &p, &ph, DEFAULT_TRUNCATION).unwrap();
                assert!(boundary_residual(&pts, &f, &p, &ph) < 1e-8, "m={m} n={n} r={r}");
            }
        }
    }

    #[test]
    fn truncation_converges() {
        let p = params(2, 1, 0.3);
        let ph = PhaseOffsets::deltas(0.1, 0.2);
        let a = psi_r2(LandauLevel(2), 1, &p, &ph, 20).unwrap();
        let b = psi_r2(LandauLevel(2), 1, &p, &ph, 25).unwrap();
        for i in 0..40 {
            let (x, y) = (-6.0 + 0.3 * i as f64, -8.0 + 0.4 * i as f64);
            assert!((a.eval(x, y) - b.eval(x, y)).norm() < 1e-10);
        }
    }

    #[test]
    fn plane_gram_identity() {
        let p = params(2, 1, 0.3);
        let ph = PhaseOffsets::deltas(0.3, 0.4);
        let fs: Vec<SampledFunction> = (0..2u32)
            .flat_map(|mu| (0..2).map(move |r| (mu, r)))
            .map(|(mu, r)| psi_r2(LandauLevel(mu), r, &p, &ph, DEFAULT_TRUNCATION).unwrap())
            .collect();
        let g = gram_matrix(&fs, &p).unwrap();
        assert!(g.max_diff(&ComplexMatrix::identity(4)) < 1e-6, "{g:?}");
        let single = gram_matrix(&fs[..1], &p).unwrap();
        assert!((single[(0, 0)].re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn gram_rejects_mixed_domains() {
        let p = params(2, 1, 0.3);
        let a = psi_r2(LandauLevel(0), 0, &p, &PhaseOffsets::default(), 20).unwrap();
        let b = psi_enm(LandauLevel(0), 0, &p, &PhaseOffsets::default()).unwrap();
        assert!(gram_matrix(&[a, b], &p).is_err());
    }

    #[test]
    fn gaussian_normalization_matches() {
        let p = params(3, 2, 0.3);
        for mu in 0..3 {
            let report = normalization_report(LandauLevel(mu), &p, &PhaseOffsets::default(), 20).unwrap();
            assert!(report.gaussian_form_matches(1e-8), "{report:?}");
            assert!(!report.alternative_form_matches(1e-3), "{report:?}");
        }
    }

    #[test]
    fn operator_examples() {
        let p = params(2, 1, 0.3);
        let g = test_gaussian(0.1, 0.2, 0.3, 0.4);
        let u1 = apply_operator(&OperatorAction::new(OperatorKind::U1, p), &g);
        let z3 = apply_operator(&OperatorAction::new(OperatorKind::Z3, p), &g);
        let t0 = apply_operator(&OperatorAction::new(OperatorKind::Translate { ax: 0.0, ay: 0.0 }, p), &g);
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.5), (-3.0, 4.0)] {
            let expected = Complex64::from_polar(1.0, x) * g.eval(x, y - PI * 0.3);
            assert!((u1.eval(x, y) - expected).norm() < 1e-15);
            assert_eq!(z3.eval(x, y), g.eval(x + 2.0 * PI, y));
            assert_eq!(t0.eval(x, y), g.eval(x, y));
        }
    }

    #[test]
    fn analytic_phases_match_theta_matrix() {
        for (m, n, theta) in [(2, 1, 0.3), (3, 4, 0.618), (5, 3, 0.1)] {
            let p = params(m, n, theta);
            let tm = theta_commutant_matrix(m, n, theta).unwrap();
            let zs = [OperatorKind::Z1, OperatorKind::Z2, OperatorKind::Z3, OperatorKind::Z4];
            for k in 0..4 {
                for l in 0..4 {
                    let phase = analytic_commutator_phase(zs[k], zs[l], &p).unwrap() / (2.0 * PI);
                    let diff = reduce_mod1(phase - tm.entries[k][l] + 0.5) - 0.5;
                    assert!(diff.abs() < 1e-12, "({k},{l}) m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn relations_report() {
        for (m, n, theta) in [(1, 1, 0.0), (2, 1, 0.3), (3, 2, 0.618), (5, 3, 0.1), (2, 3, 0.77)] {
            let p = params(m, n, theta);
            let r = check_operator_relations(&p, &PhaseOffsets::deltas(0.3, 0.45), 100).unwrap();
            assert!(r.max_exact() < 1e-10, "{r:?}");
            assert!(r.momentum_commutator < 1e-5, "{r:?}");
            assert!(r.translation_momentum < 1e-5, "{r:?}");
            assert!(r.generic_boundary > 1e-3, "{r:?}");
        }
        let p = params(3, 2, 0.3);
        let coarse = check_operator_relations_with(&p, &PhaseOffsets::default(), 50, 1e-4, 20).unwrap();
        assert!(coarse.momentum_commutator < 1e-5);
        assert!(check_operator_relations(&p, &PhaseOffsets::default(), 0).is_err());
    }
}
