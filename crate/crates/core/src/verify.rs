//! Invariant suites shared by the `verify` subcommand and the tests. Each
//! check reports its measured value against a threshold.

use std::f64::consts::PI;

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;

use crate::algebra::{make_flux_params, LandauLevel};
use crate::butterfly::{
    band_containment_violation, butterfly_dataset, count_mismatches, flux_reflection_asymmetry,
    negation_asymmetry, SpectrumDataset,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::representations::{commutant_dimension, decompose_rep, rep_rho, rep_rho_tilde, PhaseOffsets};
use crate::spectrum::{
    band_edges, build_v_enm, build_v_r2, chambers_poly, verify_wilkinson, Units, Variant,
};
use crate::wavefunctions::{
    check_operator_relations, gram_matrix, normalization_report, psi_r2, SampledFunction,
    DEFAULT_TRUNCATION,
};

const MU0: LandauLevel = LandauLevel(0);
const BW: Units = Units::BandWidthUnits;
const NOMINAL_B: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Representations,
    Wavefunctions,
    Spectrum,
    Butterfly,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    /// `None` for informational measurements.
    pub threshold: Option<f64>,
    /// Whether the value must be below (`true`) or above the threshold.
    pub upper_bound: bool,
}

impl CheckResult {
    fn below(suite: &'static str, name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckResult { suite, name: name.into(), value, threshold: Some(threshold), upper_bound: true }
    }

    fn above(suite: &'static str, name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckResult { suite, name: name.into(), value, threshold: Some(threshold), upper_bound: false }
    }

    fn info(suite: &'static str, name: impl Into<String>, value: f64) -> Self {
        CheckResult { suite, name: name.into(), value, threshold: None, upper_bound: true }
    }

    pub fn passed(&self) -> bool {
        match self.threshold {
            None => true,
            Some(t) if self.upper_bound => self.value <= t,
            Some(t) => self.value > t,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Largest `m` in the representation and spectrum sweeps.
    pub m_max: i64,
    /// Super-cell cutoff for the butterfly checks.
    pub d_max: i64,
    pub grid: usize,
    pub truncation: usize,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { m_max: 8, d_max: 6, grid: 8, truncation: DEFAULT_TRUNCATION, samples: 100 }
    }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    if config.m_max < 1 || config.d_max < 1 || config.grid < 1 || config.samples < 1 {
        return Err(Error::InvalidArgument("verify needs m_max, d_max, grid, samples >= 1".into()));
    }
    let mut out = Vec::new();
    if suite.includes(Suite::Representations) {
        out.extend(representation_checks(config)?);
    }
    if suite.includes(Suite::Wavefunctions) {
        out.extend(wavefunction_checks(config)?);
    }
    if suite.includes(Suite::Spectrum) {
        out.extend(spectrum_checks(config)?);
    }
    if suite.includes(Suite::Butterfly) {
        out.extend(butterfly_checks(config)?);
    }
    Ok(out)
}

fn coprime_pairs(m_max: i64, include_zero: bool) -> impl Iterator<Item = (i64, i64)> {
    let start = if include_zero { 0 } else { 1 };
    (1..=m_max).flat_map(move |m| (start..=m).filter(move |&n| m.gcd(&n) == 1).map(move |n| (m, n)))
}

fn sorted_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Largest `|U₁U₂ − e^{2πin/m}U₂U₁|` over normalized `ρ^{(m,n)}`,
/// `m ≤ m_max`, `0 ≤ n < m`.
pub fn projected_relation_residual(m_max: i64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (m, n) in coprime_pairs(m_max, true).filter(|&(m, n)| n < m) {
        let rep = rep_rho(m, n, MU0, NOMINAL_B, 0.17, 0.41, true)?;
        let lhs = &rep.u1 * &rep.u2;
        let rhs = (&rep.u2 * &rep.u1).scale(rep.expected_phase());
        worst = worst.max(lhs.max_diff(&rhs));
    }
    Ok(worst)
}

/// Eigenvalues of `Ṽ^{(md, nd)}` against the union of its irreducible blocks.
pub fn decomposition_residual(pairs: &[(i64, i64)], d_max: i64, phases: PhaseOffsets) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(m, n) in pairs {
        for d in 1..=d_max {
            let full = rep_rho_tilde(m * d, n * d, MU0, NOMINAL_B, phases.delta1, phases.delta2, true)?;
            let whole = hermitian_eigenvalues(&full.cosine_potential())?;
            let blocks = decompose_rep(m, n, d, MU0, NOMINAL_B, phases, true)?;
            let potentials: Vec<ComplexMatrix> = blocks.iter().map(|b| b.cosine_potential()).collect();
            let parts = hermitian_eigenvalues(&ComplexMatrix::direct_sum(&potentials))?;
            worst = worst.max(sorted_distance(&whole, &parts));
        }
    }
    Ok(worst)
}

fn representation_checks(config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    const S: &str = "representations";
    let m_max = config.m_max.min(12);
    let mut out = vec![CheckResult::below(
        S,
        format!("U1U2 = e^(2 pi i n/m) U2U1, m <= {m_max}"),
        projected_relation_residual(m_max)?,
        1e-12,
    )];
    let mut unitarity: f64 = 0.0;
    let mut irreducible: f64 = 0.0;
    for (m, n) in coprime_pairs(m_max.min(6), false) {
        let rep = rep_rho(m, n, MU0, NOMINAL_B, 0.3, 0.6, true)?;
        unitarity = unitarity.max(rep.u1.unitarity_defect()).max(rep.u2.unitarity_defect());
        irreducible = irreducible.max((commutant_dimension(&rep.u1, &rep.u2) as f64 - 1.0).abs());
    }
    out.push(CheckResult::below(S, "unitarity of normalized generators", unitarity, 1e-12));
    out.push(CheckResult::below(S, "commutant dimension - 1 (irreducibility)", irreducible, 0.0));
    out.push(CheckResult::below(
        S,
        "decomposition into irreducible blocks, d <= 3",
        decomposition_residual(&[(1, 1), (2, 1), (3, 2)], 3, PhaseOffsets::deltas(0.23, 0.71))?,
        1e-9,
    ));
    Ok(out)
}

/// Largest deviation of the Gram matrices of `ψ_{μ,r}`, `μ ≤ mu_max`, from the
/// identity.
pub fn gram_residual(pairs: &[(i64, i64)], mu_max: u32, truncation: usize) -> Result<f64> {
    let phases = PhaseOffsets::deltas(0.3, 0.45);
    let mut worst: f64 = 0.0;
    for &(m, n) in pairs {
        let params = make_flux_params(m, n, 0.3)?;
        let functions: Vec<SampledFunction> = (0..=mu_max)
            .flat_map(|mu| (0..m * n).map(move |r| (mu, r)))
            .map(|(mu, r)| psi_r2(LandauLevel(mu), r, &params, &phases, truncation))
            .collect::<Result<_>>()?;
        let gram = gram_matrix(&functions, &params)?;
        worst = worst.max(gram.max_diff(&ComplexMatrix::identity(functions.len())));
    }
    Ok(worst)
}

fn wavefunction_checks(config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    const S: &str = "wavefunctions";
    let mut out = vec![CheckResult::below(
        S,
        "Gram matrix vs identity, (m,n) in {(1,1),(2,1),(3,2)}, mu <= 2",
        gram_residual(&[(1, 1), (2, 1), (3, 2)], 2, config.truncation)?,
        1e-6,
    )];
    let configs = [(1, 1, 0.0), (2, 1, 0.3), (3, 2, 0.618), (5, 3, 0.1), (2, 3, 0.77)];
    let (mut exact, mut momentum, mut translation, mut generic): (f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, f64::INFINITY);
    for (m, n, theta) in configs {
        let params = make_flux_params(m, n, theta)?;
        let report = check_operator_relations(&params, &PhaseOffsets::deltas(0.3, 0.45), config.samples)?;
        exact = exact.max(report.max_exact());
        momentum = momentum.max(report.momentum_commutator);
        translation = translation.max(report.translation_momentum);
        generic = generic.min(report.generic_boundary);
    }
    out.push(CheckResult::below(S, "exact shift/phase operator identities", exact, 1e-10));
    out.push(CheckResult::below(S, "[pi1, pi2] = iB (finite differences)", momentum, 1e-5));
    out.push(CheckResult::below(S, "[T(a), pi_j] = 0 (finite differences)", translation, 1e-5));
    out.push(CheckResult::above(S, "generic T(a) breaks the boundary conditions", generic, 1e-3));
    let params = make_flux_params(3, 2, 0.3)?;
    let mut norm: f64 = 0.0;
    for mu in 0..3 {
        let r = normalization_report(LandauLevel(mu), &params, &PhaseOffsets::default(), config.truncation)?;
        norm = norm.max((r.numeric - r.gaussian_form).abs() / r.numeric);
    }
    out.push(CheckResult::below(S, "normalization (2^(2mu) pi mu!^2/B)^(-1/4)", norm, 1e-8));
    Ok(out)
}

/// `max |P(ε) − RHS|` for `m ≤ m_max` on a `grid × grid` phase sweep.
pub fn chambers_residual(m_max: i64, grid: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (m, n) in coprime_pairs(m_max, false) {
        worst = worst.max(verify_wilkinson(MU0, m, n, 2, NOMINAL_B, grid)?);
    }
    Ok(worst)
}

/// Largest entry difference of `V_Enm` in band-width units across θ.
pub fn theta_invariance_residual(m_max: i64) -> Result<f64> {
    let thetas = [0.0, 0.3, (5f64.sqrt() - 1.0) / 2.0];
    let mut worst: f64 = 0.0;
    for (m, n) in coprime_pairs(m_max, false) {
        let at = |theta: f64| {
            let b = m as f64 / (2.0 * PI * (n as f64 + m as f64 * theta));
            build_v_enm(MU0, m, n, Rational64::new(1, 3), 0.11, 0.29, b, BW)
        };
        let reference = at(thetas[0])?;
        for &theta in &thetas[1..] {
            worst = worst.max(at(theta)?.matrix.max_diff(&reference.matrix));
        }
    }
    Ok(worst)
}

/// Spectrum at `δ₂ = p/q`, `d = 1` against block `j = p` of the `δ₂ = 0`,
/// `d = q` super-cell.
pub fn phase_absorption_residual(m_max: i64, p: i64, q: i64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (m, n) in coprime_pairs(m_max, false) {
        let shifted = build_v_r2(MU0, m, n, 1, 0, 0, 0.0, p as f64 / q as f64, NOMINAL_B, BW)?;
        let block = build_v_r2(MU0, m, n, q, p, 0, 0.0, 0.0, NOMINAL_B, BW)?;
        worst = worst.max(sorted_distance(&shifted.eigenvalues()?, &block.eigenvalues()?));
    }
    Ok(worst)
}

fn spectrum_checks(config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    const S: &str = "spectrum";
    let m_max = config.m_max;
    let zero = Rational64::from_integer(0);
    let mut out = vec![CheckResult::below(
        S,
        format!("Chambers relation, m <= {m_max}, {0}x{0} grid", config.grid),
        chambers_residual(m_max, config.grid)?,
        1e-8,
    )];
    let s = 2.0 * 2f64.sqrt();
    let half = build_v_enm(MU0, 2, 1, zero, 0.0, 0.0, NOMINAL_B, BW)?.eigenvalues()?;
    out.push(CheckResult::below(
        S,
        "flux 1/2 eigenvalues +-2 sqrt 2",
        sorted_distance(&half, &[-s, s]),
        1e-10,
    ));
    let two = band_edges(&chambers_poly(MU0, 2, 1, NOMINAL_B)?)?;
    let edges = [two.bands[0].0, two.bands[0].1, two.bands[1].0, two.bands[1].1];
    out.push(CheckResult::below(
        S,
        "m = 2 band edges {-2 sqrt 2, 0, 0, 2 sqrt 2}",
        sorted_distance(&edges, &[-s, 0.0, 0.0, s]),
        1e-9,
    ));
    out.push(CheckResult::below(
        S,
        "m = 2 central bands touch",
        if two.touching == [true] { 0.0 } else { 1.0 },
        0.0,
    ));
    let one = band_edges(&chambers_poly(MU0, 1, 1, NOMINAL_B)?)?;
    out.push(CheckResult::below(
        S,
        "m = 1 band [-4, 4]",
        sorted_distance(&[one.bands[0].0, one.bands[0].1], &[-4.0, 4.0]),
        1e-12,
    ));
    out.push(CheckResult::below(
        S,
        "theta invariance in band-width units",
        theta_invariance_residual(m_max)?,
        1e-15,
    ));
    let mut reflection: f64 = 0.0;
    let mut envelope: f64 = 0.0;
    let mut hermitian: f64 = 0.0;
    for (m, n) in coprime_pairs(m_max, false) {
        let a = build_v_enm(MU0, m, n, zero, 0.0, 0.0, NOMINAL_B, BW)?;
        let b = build_v_enm(MU0, m, m - n, zero, 0.0, 0.0, NOMINAL_B, BW)?;
        reflection = reflection.max(sorted_distance(&a.eigenvalues()?, &b.eigenvalues()?));
        let bands = band_edges(&chambers_poly(MU0, m, n, NOMINAL_B)?)?;
        let edges = sorted(bands.bands.iter().flat_map(|&(lo, hi)| [lo, hi]).collect());
        let negated: Vec<f64> = edges.iter().rev().map(|e| -e).collect();
        envelope = envelope.max(sorted_distance(&edges, &negated));
        let h = build_v_r2(MU0, m, n, 3, 2, 1, 0.3, 0.7, NOMINAL_B, BW)?;
        hermitian = hermitian.max(h.matrix.hermiticity_defect());
    }
    out.push(CheckResult::below(S, "Hermiticity of built matrices", hermitian, 1e-12));
    out.push(CheckResult::below(S, "flux reflection n -> m - n", reflection, 1e-10));
    out.push(CheckResult::below(S, "band envelope symmetric under e -> -e", envelope, 1e-9));
    out.push(CheckResult::below(
        S,
        "phase absorption delta2 = 1/3 vs block j = 1 of d = 3",
        phase_absorption_residual(m_max, 1, 3)?,
        1e-10,
    ));
    Ok(out)
}

fn butterfly_checks(config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    const S: &str = "butterfly";
    let ds = butterfly_dataset(MU0, config.m_max, config.d_max, Variant::R2, &PhaseOffsets::default(), 0.0)?;
    let mut out = vec![
        CheckResult::below(S, "band containment", band_containment_violation(&ds)?, 1e-9),
        CheckResult::below(S, "flux symmetry n/m -> 1 - n/m", flux_reflection_asymmetry(&ds), 1e-10),
        CheckResult::below(S, "eigenvalue count d^2 m per block set", count_mismatches(&ds).len() as f64, 0.0),
    ];
    let even = SpectrumDataset {
        metadata: ds.metadata.clone(),
        records: ds.records.iter().filter(|r| r.d % 2 == 0 || r.m % 2 == 0).copied().collect(),
    };
    let even_asym = negation_asymmetry(&even).into_values().fold(0.0, f64::max);
    out.push(CheckResult::below(S, "e -> -e per flux, even d or even m", even_asym, 1e-10));
    let all_asym = negation_asymmetry(&ds).into_values().fold(0.0, f64::max);
    out.push(CheckResult::info(S, "e -> -e per flux, all d (odd m, odd d break it)", all_asym));
    Ok(out)
}
