//! C interface. Every function returns an `NctStatus`; on failure the message
//! is available from `nct_last_error_message` on the same thread. Handles are
//! opaque and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use nctorus::algebra::{make_flux_params, LandauLevel};
use nctorus::butterfly::{butterfly_dataset, emit_dataset_to_path, OutputFormat, SpectrumDataset};
use nctorus::num_rational::Rational64;
use nctorus::representations::{rep_rho, rep_rho_tilde, PhaseOffsets, RepPair};
use nctorus::spectrum::{band_edges, build_v_enm, build_v_r2, chambers_poly, Units, Variant};
use nctorus::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NctStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    SingularFlux = 3,
    Computation = 4,
    Io = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NctVariant {
    Enm = 0,
    R2 = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NctRepKind {
    /// `m`-dimensional clock/shift pair.
    Rho = 0,
    /// `mn`-dimensional pair on functions over the plane.
    RhoTilde = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NctUnits {
    BandWidth = 0,
    Raw = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NctFormat {
    Csv = 0,
    Json = 1,
    Svg = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NctFluxParams {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub theta: f64,
    pub b: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NctRecord {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub j: i64,
    pub jp: i64,
    pub flux: f64,
    pub eigenvalue: f64,
}

/// Opaque representation pair.
pub struct NctRep(RepPair);

/// Opaque butterfly dataset.
pub struct NctDataset(SpectrumDataset);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> NctStatus {
    match err {
        Error::InvalidArgument(_) | Error::DegenerateSector(_) => NctStatus::InvalidArgument,
        Error::SingularFlux { .. } => NctStatus::SingularFlux,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => NctStatus::Io,
        _ => NctStatus::Computation,
    }
}

fn fail(status: NctStatus, message: &str) -> NctStatus {
    set_error(message);
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), NctStatus>>(f: F) -> NctStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NctStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(NctStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: nctorus::Result<T>) -> Result<T, NctStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

fn check_ptr<T>(p: *const T, name: &str) -> Result<(), NctStatus> {
    if p.is_null() {
        Err(fail(NctStatus::NullPointer, &format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// Copies `values` into `out[0..len]`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
unsafe fn write_slice(values: &[f64], out: *mut f64, len: usize) -> Result<(), NctStatus> {
    check_ptr(out, "out")?;
    if len < values.len() {
        return Err(fail(
            NctStatus::BufferTooSmall,
            &format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Message of the last failure on this thread, empty after a success. Valid
/// until the next call on the same thread.
#[no_mangle]
pub extern "C" fn nct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Reduced labels and field strength `2πB = m/(n + mθ)`.
///
/// # Safety
/// `out` must be a valid pointer to an `NctFluxParams`.
#[no_mangle]
pub unsafe extern "C" fn nct_flux_params(m: i64, n: i64, theta: f64, out: *mut NctFluxParams) -> NctStatus {
    guard(|| {
        check_ptr(out, "out")?;
        let p = lift(make_flux_params(m, n, theta))?;
        *out = NctFluxParams { m: p.m, n: p.n, d: p.d, theta: p.theta, b: p.b };
        Ok(())
    })
}

/// Builds a representation pair. `phase1, phase2` are `(α₁, α₂)` for `Rho`
/// and `(δ₁, δ₂)` for `RhoTilde`.
///
/// # Safety
/// `out` must be a valid pointer; the handle written there is owned by the
/// caller and released with `nct_rep_free`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn nct_rep_new(
    kind: NctRepKind,
    m: i64,
    n: i64,
    mu: u32,
    b: f64,
    phase1: f64,
    phase2: f64,
    normalized: bool,
    out: *mut *mut NctRep,
) -> NctStatus {
    guard(|| {
        check_ptr(out, "out")?;
        let mu = LandauLevel(mu);
        let rep = match kind {
            NctRepKind::Rho => lift(rep_rho(m, n, mu, b, phase1, phase2, normalized))?,
            NctRepKind::RhoTilde => lift(rep_rho_tilde(m, n, mu, b, phase1, phase2, normalized))?,
        };
        *out = Box::into_raw(Box::new(NctRep(rep)));
        Ok(())
    })
}

/// Matrix dimension of the pair, 0 for a null handle.
///
/// # Safety
/// `rep` must be null or a live handle from `nct_rep_new`.
#[no_mangle]
pub unsafe extern "C" fn nct_rep_dim(rep: *const NctRep) -> usize {
    rep.as_ref().map_or(0, |r| r.0.dim())
}

unsafe fn copy_matrix(rep: *const NctRep, second: bool, out: *mut f64, len: usize) -> NctStatus {
    guard(|| {
        check_ptr(rep, "rep")?;
        let pair = &(*rep).0;
        let matrix = if second { &pair.u2 } else { &pair.u1 };
        let values: Vec<f64> = matrix.as_slice().iter().flat_map(|z| [z.re, z.im]).collect();
        write_slice(&values, out, len)
    })
}

/// Copies `u1` row-major as interleaved `(re, im)` pairs; `len ≥ 2·dim²`.
///
/// # Safety
/// `rep` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nct_rep_copy_u1(rep: *const NctRep, out: *mut f64, len: usize) -> NctStatus {
    copy_matrix(rep, false, out, len)
}

/// Copies `u2` like `nct_rep_copy_u1`.
///
/// # Safety
/// `rep` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nct_rep_copy_u2(rep: *const NctRep, out: *mut f64, len: usize) -> NctStatus {
    copy_matrix(rep, true, out, len)
}

/// # Safety
/// `rep` must be null or a handle from `nct_rep_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nct_rep_free(rep: *mut NctRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Ascending eigenvalues (`m` of them) of the projected potential. For `Enm`
/// the block is `λ = j/d` with phases `(α₁, α₂)`; for `R2` it is `(j, j')`
/// with phases `(δ₁, δ₂)`.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn nct_harper_eigenvalues(
    variant: NctVariant,
    mu: u32,
    m: i64,
    n: i64,
    d: i64,
    j: i64,
    jp: i64,
    phase1: f64,
    phase2: f64,
    b: f64,
    units: NctUnits,
    out: *mut f64,
    len: usize,
) -> NctStatus {
    guard(|| {
        let mu = LandauLevel(mu);
        let units = match units {
            NctUnits::BandWidth => Units::BandWidthUnits,
            NctUnits::Raw => Units::Raw,
        };
        if d < 1 {
            return Err(fail(NctStatus::InvalidArgument, "d must be >= 1"));
        }
        let h = match variant {
            NctVariant::Enm => lift(build_v_enm(mu, m, n, Rational64::new(j, d), phase1, phase2, b, units))?,
            NctVariant::R2 => lift(build_v_r2(mu, m, n, d, j, jp, phase1, phase2, b, units))?,
        };
        write_slice(&lift(h.eigenvalues())?, out, len)
    })
}

/// Coefficients of the Chambers polynomial, ascending powers, `m + 1` values.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nct_chambers_coefficients(m: i64, n: i64, out: *mut f64, len: usize) -> NctStatus {
    guard(|| {
        let p = lift(chambers_poly(LandauLevel(0), m, n, 1.0))?;
        write_slice(&p.coefficients, out, len)
    })
}

/// Band edges as `2m` values `lo₀, hi₀, lo₁, hi₁, …`.
///
/// # Safety
/// `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nct_band_edges(m: i64, n: i64, out: *mut f64, len: usize) -> NctStatus {
    guard(|| {
        let p = lift(chambers_poly(LandauLevel(0), m, n, 1.0))?;
        let bands = lift(band_edges(&p))?;
        let flat: Vec<f64> = bands.bands.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
        write_slice(&flat, out, len)
    })
}

/// Butterfly dataset for `m ≤ m_max`, `d ≤ d_max`. Phases as in
/// `nct_harper_eigenvalues`.
///
/// # Safety
/// `out` must be a valid pointer; release the handle with `nct_dataset_free`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn nct_dataset_new(
    variant: NctVariant,
    mu: u32,
    m_max: i64,
    d_max: i64,
    phase1: f64,
    phase2: f64,
    theta: f64,
    out: *mut *mut NctDataset,
) -> NctStatus {
    guard(|| {
        check_ptr(out, "out")?;
        let (variant, phases) = match variant {
            NctVariant::Enm => (Variant::Enm, PhaseOffsets::alphas(phase1, phase2)),
            NctVariant::R2 => (Variant::R2, PhaseOffsets::deltas(phase1, phase2)),
        };
        let ds = lift(butterfly_dataset(LandauLevel(mu), m_max, d_max, variant, &phases, theta))?;
        *out = Box::into_raw(Box::new(NctDataset(ds)));
        Ok(())
    })
}

/// Number of records, 0 for a null handle.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nct_dataset_len(ds: *const NctDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.records.len())
}

/// # Safety
/// `ds` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn nct_dataset_record(ds: *const NctDataset, index: usize, out: *mut NctRecord) -> NctStatus {
    guard(|| {
        check_ptr(ds, "ds")?;
        check_ptr(out, "out")?;
        let records = &(*ds).0.records;
        let r = records.get(index).ok_or_else(|| {
            fail(NctStatus::InvalidArgument, &format!("index {index} out of range ({} records)", records.len()))
        })?;
        *out = NctRecord { m: r.m, n: r.n, d: r.d, j: r.j, jp: r.jp, flux: r.flux, eigenvalue: r.eigenvalue };
        Ok(())
    })
}

/// Writes the dataset to a UTF-8 `path`.
///
/// # Safety
/// `ds` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn nct_dataset_write(ds: *const NctDataset, format: NctFormat, path: *const c_char) -> NctStatus {
    guard(|| {
        check_ptr(ds, "ds")?;
        check_ptr(path, "path")?;
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| fail(NctStatus::InvalidArgument, "path is not UTF-8"))?;
        let format = match format {
            NctFormat::Csv => OutputFormat::Csv,
            NctFormat::Json => OutputFormat::Json,
            NctFormat::Svg => OutputFormat::Svg,
        };
        lift(emit_dataset_to_path(&(*ds).0, format, Path::new(path)))
    })
}

/// # Safety
/// `ds` must be null or a handle from `nct_dataset_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nct_dataset_free(ds: *mut NctDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}
