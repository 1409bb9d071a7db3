//! Command-line front end. `run` parses arguments, dispatches and maps errors
//! to exit codes: 0 on success, 2 on invalid input, 1 on computation failure.

use std::ffi::OsString;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

use crate::algebra::{make_flux_params, positive_cone_coords, theta_commutant_matrix, LandauLevel};
use crate::butterfly::{butterfly_dataset, emit_dataset, emit_dataset_to_path, OutputFormat};
use crate::error::{Error, Result};
use crate::representations::{
    commutant_dimension, commutation_phase, rep_rho, PhaseOffsets,
};
use crate::special::band_width_factor;
use crate::spectrum::{band_edges, build_v_enm, build_v_r2, chambers_poly, Units, Variant};
use crate::verify::{decomposition_residual, run_suite, Suite, VerifyConfig};
use crate::wavefunctions::{check_operator_relations_with, gram_matrix, normalization_report, psi_r2};

pub const JOBS_ENV: &str = "NC_TORUS_JOBS";

#[derive(Debug, Parser)]
#[command(name = "nctorus", version, about = "Landau levels on the deformed two-torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Field strength and reduced labels of a flux sector.
    Flux(Params),
    /// Projected clock/shift representation checks.
    Rep(Params),
    /// Eigenvalues of the projected potential.
    Spectrum(Params),
    /// Chambers polynomial and band edges.
    Bands(Params),
    /// Rational Hofstadter butterfly dataset.
    Butterfly(Params),
    /// Landau-level eigenfunction checks over the plane.
    Wavefn(Params),
    /// Invariant suites with thresholds.
    Verify(Params),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitsArg {
    Raw,
    Bw,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Enm,
    R2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Representations,
    Wavefunctions,
    Spectrum,
    Butterfly,
    All,
}

fn phase(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("phase must lie in [0, 1), got {x}"))
    }
}

fn finite(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got {x}"))
    }
}

#[derive(Debug, Clone, Args)]
struct Params {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    m: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    n: i64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    d: i64,
    #[arg(long, default_value_t = 0.0, value_parser = finite, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 0)]
    mu: u32,
    #[arg(long, default_value_t = 0.0, value_parser = phase)]
    alpha1: f64,
    #[arg(long, default_value_t = 0.0, value_parser = phase)]
    alpha2: f64,
    #[arg(long, default_value_t = 0.0, value_parser = phase)]
    delta1: f64,
    #[arg(long, default_value_t = 0.0, value_parser = phase)]
    delta2: f64,
    /// Potential amplitude applied in raw units.
    #[arg(long, default_value_t = 1.0, value_parser = finite, allow_negative_numbers = true)]
    v: f64,
    #[arg(long, value_enum, default_value = "bw")]
    units: UnitsArg,
    #[arg(long, value_enum, default_value = "enm")]
    variant: VariantArg,
    #[arg(long = "m-max", value_parser = clap::value_parser!(i64).range(1..))]
    m_max: Option<i64>,
    #[arg(long = "d-max", value_parser = clap::value_parser!(i64).range(1..))]
    d_max: Option<i64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    grid: u32,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    trunc: u32,
    /// Worker threads; NC_TORUS_JOBS overrides.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
}

impl Params {
    fn phases(&self) -> PhaseOffsets {
        PhaseOffsets::new(self.alpha1, self.alpha2, self.delta1, self.delta2)
    }

    fn variant(&self) -> Variant {
        match self.variant {
            VariantArg::Enm => Variant::Enm,
            VariantArg::R2 => Variant::R2,
        }
    }

    fn units(&self) -> Units {
        match self.units {
            UnitsArg::Raw => Units::Raw,
            UnitsArg::Bw => Units::BandWidthUnits,
        }
    }
}

/// Nine significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-6..=9).contains(&exponent) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn is_validation(err: &Error) -> bool {
    matches!(err, Error::InvalidArgument(_) | Error::SingularFlux { .. } | Error::DegenerateSector(_))
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = out.write_all(e.render().to_string().as_bytes());
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{}\n{}", e.render(), grammar(argv.get(1)));
            return 2;
        }
    };
    let params = match &cli.command {
        Command::Flux(p)
        | Command::Rep(p)
        | Command::Spectrum(p)
        | Command::Bands(p)
        | Command::Butterfly(p)
        | Command::Wavefn(p)
        | Command::Verify(p) => p.clone(),
    };
    let jobs = match std::env::var(JOBS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Some(n),
            _ => {
                let _ = writeln!(err, "error: {JOBS_ENV} must be a positive integer, got '{v}'");
                return 2;
            }
        },
        Err(_) => params.jobs.map(|j| j as usize),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let mut buffered = BufWriter::new(out);
    let result = dispatch(&cli.command, &pool, &mut buffered, err);
    let flushed = buffered.flush();
    match (result, flushed) {
        (Ok(code), Ok(())) => code,
        (Err(e), _) => {
            let _ = writeln!(err, "error: {e}");
            if is_validation(&e) {
                2
            } else {
                1
            }
        }
        (Ok(_), Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// Help text of the subcommand named by `word`, or of the whole program.
fn grammar(word: Option<&OsString>) -> String {
    let mut command = Cli::command();
    let sub = word
        .and_then(|w| w.to_str())
        .and_then(|w| command.find_subcommand_mut(w))
        .map(|c| c.render_help().to_string());
    sub.unwrap_or_else(|| command.render_help().to_string())
}

fn dispatch(
    command: &Command,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    match command {
        Command::Flux(p) => flux(p, out),
        Command::Rep(p) => rep(p, out),
        Command::Spectrum(p) => spectrum(p, out, err),
        Command::Bands(p) => bands(p, out),
        Command::Butterfly(p) => butterfly(p, pool, out),
        Command::Wavefn(p) => wavefn(p, out),
        Command::Verify(p) => verify(p, pool, out),
    }
}

fn flux(p: &Params, out: &mut dyn Write) -> Result<i32> {
    let f = make_flux_params(p.m, p.n, p.theta)?;
    let (x, y) = positive_cone_coords(p.m, p.n, p.theta)?;
    writeln!(out, "m = {}", f.m)?;
    writeln!(out, "n = {}", f.n)?;
    writeln!(out, "d = {}", f.d)?;
    writeln!(out, "theta = {}", format_sig(f.theta))?;
    writeln!(out, "B = {}", format_sig(f.b))?;
    writeln!(out, "2piB = {}", format_sig(2.0 * std::f64::consts::PI * f.b))?;
    writeln!(out, "cone = ({x}, {y})")?;
    if f.n != 0 {
        let tm = theta_commutant_matrix(p.m, p.n, p.theta)?;
        for row in tm.entries {
            let cells: Vec<String> = row.iter().map(|&e| format_sig(e)).collect();
            writeln!(out, "Theta = [{}]", cells.join(", "))?;
        }
    }
    Ok(0)
}

fn rep(p: &Params, out: &mut dyn Write) -> Result<i32> {
    let f = make_flux_params(p.m, p.n, p.theta)?;
    let mu = LandauLevel(p.mu);
    let rep = rep_rho(f.m, f.n, mu, f.b, p.alpha1, p.alpha2, true)?;
    let omega = commutation_phase(&rep.u1, &rep.u2)?;
    let expected = rep.expected_phase();
    writeln!(out, "dim = {}", rep.dim())?;
    writeln!(out, "phase = {} {}", format_sig(omega.re), format_sig(omega.im))?;
    writeln!(out, "expected = {} {}", format_sig(expected.re), format_sig(expected.im))?;
    let residual = (&rep.u1 * &rep.u2).max_diff(&(&rep.u2 * &rep.u1).scale(expected));
    writeln!(out, "relation_residual = {}", format_sig(residual))?;
    let unitarity = rep.u1.unitarity_defect().max(rep.u2.unitarity_defect());
    writeln!(out, "unitarity_defect = {}", format_sig(unitarity))?;
    writeln!(out, "commutant_dim = {}", commutant_dimension(&rep.u1, &rep.u2))?;
    writeln!(out, "band_width_factor = {}", format_sig(band_width_factor(p.mu, f.b)))?;
    if f.n >= 1 {
        let phases = PhaseOffsets::deltas(p.delta1, p.delta2);
        let residual = decomposition_residual(&[(f.m, f.n)], p.d, phases)?;
        writeln!(out, "decomposition_residual = {}", format_sig(residual))?;
    }
    Ok(0)
}

fn spectrum(p: &Params, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let f = make_flux_params(p.m, p.n, p.theta)?;
    let mu = LandauLevel(p.mu);
    let units = p.units();
    let factor = match units {
        Units::Raw => {
            if band_width_factor(p.mu, f.b) == 0.0 {
                writeln!(err, "warning: band width factor vanishes at B = {}; raw spectrum collapses", format_sig(f.b))?;
            }
            p.v
        }
        Units::BandWidthUnits => 1.0,
    };
    let mut blocks = Vec::new();
    for j in 0..p.d {
        match p.variant() {
            Variant::Enm => {
                let h = build_v_enm(mu, f.m, f.n, Rational64::new(j, p.d), p.alpha1, p.alpha2, f.b, units)?;
                blocks.push((j, 0, h.eigenvalues()?));
            }
            Variant::R2 => {
                for jp in 0..p.d {
                    let h = build_v_r2(mu, f.m, f.n, p.d, j, jp, p.delta1, p.delta2, f.b, units)?;
                    blocks.push((j, jp, h.eigenvalues()?));
                }
            }
        }
    }
    let single = blocks.len() == 1;
    for (j, jp, values) in blocks {
        if !single {
            writeln!(out, "# j = {j}, jp = {jp}")?;
        }
        for e in values {
            writeln!(out, "{}", format_sig(e * factor))?;
        }
    }
    Ok(0)
}

fn bands(p: &Params, out: &mut dyn Write) -> Result<i32> {
    let f = make_flux_params(p.m, p.n, p.theta)?;
    let poly = chambers_poly(LandauLevel(p.mu), f.m, f.n, f.b)?;
    let cells: Vec<String> = poly.coefficients.iter().map(|&c| format_sig(c)).collect();
    writeln!(out, "P = [{}]", cells.join(", "))?;
    let bs = band_edges(&poly)?;
    for (k, (lo, hi)) in bs.bands.iter().enumerate() {
        let touch = bs.touching.get(k).copied().unwrap_or(false);
        writeln!(
            out,
            "band {k} = [{}, {}]{}",
            format_sig(*lo),
            format_sig(*hi),
            if touch { " touches next" } else { "" }
        )?;
    }
    Ok(0)
}

fn butterfly(p: &Params, pool: &rayon::ThreadPool, out: &mut dyn Write) -> Result<i32> {
    let m_max = p.m_max.unwrap_or(crate::butterfly::DEFAULT_M_MAX);
    let d_max = p.d_max.unwrap_or(crate::butterfly::DEFAULT_D_MAX);
    let mut ds = pool.install(|| {
        butterfly_dataset(LandauLevel(p.mu), m_max, d_max, p.variant(), &p.phases(), p.theta)
    })?;
    ds.metadata.v = p.v;
    let format = match p.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Svg => OutputFormat::Svg,
    };
    match &p.out {
        Some(path) => emit_dataset_to_path(&ds, format, path)?,
        None => emit_dataset(&ds, format, out)?,
    }
    Ok(0)
}

fn wavefn(p: &Params, out: &mut dyn Write) -> Result<i32> {
    let f = make_flux_params(p.m, p.n, p.theta)?;
    let phases = PhaseOffsets::deltas(p.delta1, p.delta2);
    let mu = LandauLevel(p.mu);
    let trunc = p.trunc as usize;
    let count = f.full_m() * f.full_n();
    let functions = (0..count)
        .map(|r| psi_r2(mu, r, &f, &phases, trunc))
        .collect::<Result<Vec<_>>>()?;
    let gram = gram_matrix(&functions, &f)?;
    let identity = crate::linalg::ComplexMatrix::identity(functions.len());
    writeln!(out, "states = {count}")?;
    writeln!(out, "gram_residual = {}", format_sig(gram.max_diff(&identity)))?;
    let norm = normalization_report(mu, &f, &phases, trunc)?;
    writeln!(out, "norm_numeric = {}", format_sig(norm.numeric))?;
    writeln!(out, "norm_gaussian_form = {}", format_sig(norm.gaussian_form))?;
    writeln!(out, "norm_alternative_form = {}", format_sig(norm.alternative_form))?;
    let report = check_operator_relations_with(&f, &phases, 100, crate::wavefunctions::DEFAULT_FD_STEP, trunc)?;
    writeln!(out, "exact_relations_residual = {}", format_sig(report.max_exact()))?;
    writeln!(out, "momentum_commutator_residual = {}", format_sig(report.momentum_commutator))?;
    writeln!(out, "generic_translation_boundary = {}", format_sig(report.generic_boundary))?;
    Ok(0)
}

fn verify(p: &Params, pool: &rayon::ThreadPool, out: &mut dyn Write) -> Result<i32> {
    let defaults = VerifyConfig::default();
    let config = VerifyConfig {
        m_max: p.m_max.unwrap_or(defaults.m_max),
        d_max: p.d_max.unwrap_or(defaults.d_max),
        grid: p.grid as usize,
        truncation: p.trunc as usize,
        samples: defaults.samples,
    };
    let suite = match p.suite {
        SuiteArg::Representations => Suite::Representations,
        SuiteArg::Wavefunctions => Suite::Wavefunctions,
        SuiteArg::Spectrum => Suite::Spectrum,
        SuiteArg::Butterfly => Suite::Butterfly,
        SuiteArg::All => Suite::All,
    };
    let results = pool.install(|| run_suite(suite, &config))?;
    let mut all_passed = true;
    for r in &results {
        let status = match r.threshold {
            None => "INFO",
            Some(_) if r.passed() => "PASS",
            Some(_) => "FAIL",
        };
        all_passed &= r.passed();
        let bound = match r.threshold {
            None => String::new(),
            Some(t) => format!(" ({} {})", if r.upper_bound { "<=" } else { ">" }, format_sig(t)),
        };
        writeln!(out, "[{status}] {}: {} = {}{bound}", r.suite, r.name, format_sig(r.value))?;
    }
    Ok(if all_passed { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("nctorus").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0 / (2.0 * std::f64::consts::PI)), "0.159154943");
        assert_eq!(format_sig(-2.0 * 2f64.sqrt()), "-2.82842712");
        assert_eq!(format_sig(4.0), "4");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-1e-20), "-1.00000000e-20");
    }

    #[test]
    fn flux_prints_b() {
        let (code, out, _) = call(&["flux", "--m", "1", "--n", "1", "--theta", "0"]);
        assert_eq!(code, 0);
        assert!(out.contains("B = 0.159154943\n"), "{out}");
    }

    #[test]
    fn spectrum_prints_half_flux() {
        let (code, out, _) = call(&["spectrum", "--m", "2", "--n", "1", "--mu", "0", "--units", "bw"]);
        assert_eq!(code, 0);
        assert_eq!(out, "-2.82842712\n2.82842712\n");
    }

    #[test]
    fn validation_errors_exit_two() {
        let (code, _, err) = call(&["spectrum", "--m", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("--m"), "{err}");
        assert_eq!(call(&["spectrum", "--alpha1", "1.5"]).0, 2);
        assert_eq!(call(&["flux", "--m", "1", "--n", "-1", "--theta", "1"]).0, 2);
        assert_eq!(call(&["nonsense"]).0, 2);
    }

    #[test]
    fn bands_output() {
        let (code, out, _) = call(&["bands", "--m", "2", "--n", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("band 0 = [-2.82842712, "), "{out}");
        assert!(out.contains("touches next"), "{out}");
    }

    #[test]
    fn deterministic_output() {
        let args = ["butterfly", "--m-max", "4", "--d-max", "3", "--variant", "r2"];
        let (a, b) = (call(&args), call(&args));
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        assert!(a.1.starts_with("m,n,d,j,jp,flux,eigenvalue,units,variant\n"));
    }
}
