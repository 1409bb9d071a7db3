//! The rational Hofstadter butterfly: spectra swept over fluxes `n/m` and
//! super-cell blocks, consistency checks on the assembled set, and CSV, JSON
//! and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num_integer::Integer;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::LandauLevel;
use crate::error::{Error, Result};
use crate::representations::PhaseOffsets;
use crate::spectrum::{band_edges, build_v_enm, build_v_r2, chambers_poly, Units, Variant};

/// Super-cell cutoff standing in for `d → ∞`.
pub const DEFAULT_D_MAX: i64 = 16;
pub const DEFAULT_M_MAX: i64 = 15;
/// Field strength used where band-width units make it irrelevant.
const NOMINAL_B: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockLabels {
    pub d: i64,
    pub j: i64,
    pub jp: i64,
}

/// One eigenvalue; field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub j: i64,
    pub jp: i64,
    pub flux: f64,
    pub eigenvalue: f64,
    pub units: Units,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub mu: LandauLevel,
    pub theta: f64,
    pub phases: PhaseOffsets,
    pub v: f64,
    pub units: Units,
    pub variant: Variant,
    pub m_max: i64,
    pub d_max: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDataset {
    pub metadata: DatasetMetadata,
    pub records: Vec<SpectrumRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// Eigenvalues of every block at flux `n/m` with super-cell `d`, in band-width
/// units. `Enm` takes `λ = j/d` (with `j' = 0`), `R2` takes all `(j, j')`.
pub fn spectrum_for_flux(
    mu: LandauLevel,
    m: i64,
    n: i64,
    d: i64,
    variant: Variant,
    phases: &PhaseOffsets,
    b: f64,
) -> Result<Vec<(BlockLabels, Vec<f64>)>> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!("d must be >= 1, got {d}")));
    }
    let units = Units::BandWidthUnits;
    let mut out = Vec::new();
    for j in 0..d {
        match variant {
            Variant::Enm => {
                let h = build_v_enm(mu, m, n, Rational64::new(j, d), phases.alpha1, phases.alpha2, b, units)?;
                out.push((BlockLabels { d, j, jp: 0 }, h.eigenvalues()?));
            }
            Variant::R2 => {
                for jp in 0..d {
                    let h = build_v_r2(mu, m, n, d, j, jp, phases.delta1, phases.delta2, b, units)?;
                    out.push((BlockLabels { d, j, jp }, h.eigenvalues()?));
                }
            }
        }
    }
    Ok(out)
}

/// Coprime pairs `(m, n)` with `1 ≤ n ≤ m ≤ m_max`.
pub fn flux_pairs(m_max: i64) -> Vec<(i64, i64)> {
    (1..=m_max)
        .flat_map(|m| (1..=m).filter(move |n| m.gcd(n) == 1).map(move |n| (m, n)))
        .collect()
}

pub fn butterfly_dataset(
    mu: LandauLevel,
    m_max: i64,
    d_max: i64,
    variant: Variant,
    phases: &PhaseOffsets,
    theta: f64,
) -> Result<SpectrumDataset> {
    if m_max < 1 || d_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "need m_max >= 1 and d_max >= 1, got {m_max} and {d_max}"
        )));
    }
    let jobs: Vec<(i64, i64, i64)> = flux_pairs(m_max)
        .into_iter()
        .flat_map(|(m, n)| (1..=d_max).map(move |d| (m, n, d)))
        .collect();
    let chunks: Vec<Vec<SpectrumRecord>> = jobs
        .par_iter()
        .map(|&(m, n, d)| {
            let flux = n as f64 / m as f64;
            let blocks = spectrum_for_flux(mu, m, n, d, variant, phases, NOMINAL_B)?;
            Ok(blocks
                .into_iter()
                .flat_map(|(labels, eigenvalues)| {
                    eigenvalues.into_iter().map(move |eigenvalue| SpectrumRecord {
                        m,
                        n,
                        d: labels.d,
                        j: labels.j,
                        jp: labels.jp,
                        flux,
                        eigenvalue,
                        units: Units::BandWidthUnits,
                        variant,
                    })
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(SpectrumDataset {
        metadata: DatasetMetadata {
            mu,
            theta,
            phases: *phases,
            v: 1.0,
            units: Units::BandWidthUnits,
            variant,
            m_max,
            d_max,
        },
        records: chunks.into_iter().flatten().collect(),
    })
}

/// Eigenvalues grouped by reduced flux `(m, n)`, each list sorted.
pub fn per_flux(ds: &SpectrumDataset) -> BTreeMap<(i64, i64), Vec<f64>> {
    let mut groups: BTreeMap<(i64, i64), Vec<f64>> = BTreeMap::new();
    for r in &ds.records {
        groups.entry((r.m, r.n)).or_default().push(r.eigenvalue);
    }
    for values in groups.values_mut() {
        values.sort_by(f64::total_cmp);
    }
    groups
}

/// Largest distance of any eigenvalue outside the band envelope of its flux.
pub fn band_containment_violation(ds: &SpectrumDataset) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for ((m, n), values) in per_flux(ds) {
        let bands = band_edges(&chambers_poly(ds.metadata.mu, m, n, NOMINAL_B)?)?;
        for e in values {
            let distance = bands
                .bands
                .iter()
                .map(|&(lo, hi)| (lo - e).max(e - hi).max(0.0))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(distance);
        }
    }
    Ok(worst)
}

fn sorted_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Per flux, the distance between the multiset and its negation.
pub fn negation_asymmetry(ds: &SpectrumDataset) -> BTreeMap<(i64, i64), f64> {
    per_flux(ds)
        .into_iter()
        .map(|(key, values)| {
            let negated: Vec<f64> = values.iter().rev().map(|e| -e).collect();
            (key, sorted_distance(&values, &negated))
        })
        .collect()
}

/// Largest distance between the multisets at `n/m` and `1 − n/m`, over the
/// fluxes whose partner is present.
pub fn flux_reflection_asymmetry(ds: &SpectrumDataset) -> f64 {
    let groups = per_flux(ds);
    groups
        .iter()
        .filter_map(|(&(m, n), values)| {
            groups.get(&(m, m - n)).map(|partner| sorted_distance(values, partner))
        })
        .fold(0.0, f64::max)
}

/// Checks the number of eigenvalues per `(m, n, d)`: `d²·m` for `R2`, `d·m`
/// for `Enm`. Returns the offending labels.
pub fn count_mismatches(ds: &SpectrumDataset) -> Vec<(i64, i64, i64)> {
    let mut counts: BTreeMap<(i64, i64, i64), usize> = BTreeMap::new();
    for r in &ds.records {
        *counts.entry((r.m, r.n, r.d)).or_default() += 1;
    }
    counts
        .into_iter()
        .filter(|&((m, _, d), count)| {
            let blocks = match ds.metadata.variant {
                Variant::R2 => d * d,
                Variant::Enm => d,
            };
            count as i64 != blocks * m
        })
        .map(|(key, _)| key)
        .collect()
}

pub fn emit_dataset<W: Write>(ds: &SpectrumDataset, format: OutputFormat, out: W) -> Result<()> {
    if ds.records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    match format {
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            for record in &ds.records {
                writer.serialize(record)?;
            }
            writer.flush()?;
        }
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer(&mut out, ds)?;
            out.write_all(b"\n")?;
        }
        OutputFormat::Svg => write_svg(ds, out)?,
    }
    Ok(())
}

pub fn emit_dataset_to_path(ds: &SpectrumDataset, format: OutputFormat, path: &Path) -> Result<()> {
    if ds.records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut out = BufWriter::new(File::create(path)?);
    emit_dataset(ds, format, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_csv_records<R: Read>(input: R) -> Result<Vec<SpectrumRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    Ok(reader.deserialize().collect::<std::result::Result<_, _>>()?)
}

const SVG_WIDTH: f64 = 900.0;
const SVG_HEIGHT: f64 = 700.0;
const SVG_MARGIN: f64 = 60.0;

fn write_svg<W: Write>(ds: &SpectrumDataset, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let plot_w = SVG_WIDTH - 2.0 * SVG_MARGIN;
    let plot_h = SVG_HEIGHT - 2.0 * SVG_MARGIN;
    let x_of = |flux: f64| SVG_MARGIN + flux * plot_w;
    let y_of = |e: f64| SVG_MARGIN + (4.0 - e) / 8.0 * plot_h;
    let mut head = String::new();
    writeln!(
        head,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    )
    .unwrap();
    writeln!(head, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        head,
        r#"<g stroke="black" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"#,
        x_of(0.0),
        y_of(-4.0),
        x_of(1.0),
        y_of(-4.0),
        x_of(0.0),
        y_of(-4.0),
        x_of(0.0),
        y_of(4.0)
    )
    .unwrap();
    writeln!(head, r#"<g font-family="sans-serif" font-size="12" fill="black">"#).unwrap();
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        writeln!(
            head,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{f}</text>"#,
            x_of(f),
            y_of(-4.0) + 18.0
        )
        .unwrap();
    }
    for e in (-4..=4).step_by(2) {
        writeln!(
            head,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{e}</text>"#,
            x_of(0.0) - 8.0,
            y_of(e as f64) + 4.0
        )
        .unwrap();
    }
    writeln!(
        head,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">flux n/m</text>"#,
        x_of(0.5),
        SVG_HEIGHT - 12.0
    )
    .unwrap();
    writeln!(
        head,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">energy ({})</text></g>"#,
        y_of(0.0),
        y_of(0.0),
        ds.metadata.units.label()
    )
    .unwrap();
    writeln!(head, r#"<g fill="black" fill-opacity="0.6">"#).unwrap();
    out.write_all(head.as_bytes())?;
    for r in &ds.records {
        writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="0.7"/>"#,
            x_of(r.flux),
            y_of(r.eigenvalue.clamp(-4.0, 4.0))
        )?;
    }
    out.write_all(b"</g>\n</svg>\n")?;
    out.flush()?;
    Ok(())
}
