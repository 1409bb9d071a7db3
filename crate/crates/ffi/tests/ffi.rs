use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use nctorus_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(nct_last_error_message()) }.to_str().unwrap().to_string()
}

#[test]
fn flux_params() {
    let mut p = NctFluxParams::default();
    assert_eq!(unsafe { nct_flux_params(4, 6, 0.0, &mut p) }, NctStatus::Ok);
    assert_eq!((p.m, p.n, p.d), (2, 3, 2));
    assert!((p.b - 4.0 / (2.0 * std::f64::consts::PI * 6.0)).abs() < 1e-15);
    assert_eq!(last_error(), "");

    assert_eq!(unsafe { nct_flux_params(1, -1, 1.0, &mut p) }, NctStatus::SingularFlux);
    assert!(last_error().contains("singular"), "{}", last_error());
    assert_eq!(unsafe { nct_flux_params(1, 1, 0.0, ptr::null_mut()) }, NctStatus::NullPointer);
}

#[test]
fn rep_handles() {
    let mut rep = ptr::null_mut();
    let status = unsafe { nct_rep_new(NctRepKind::Rho, 3, 1, 0, 0.3, 0.0, 0.0, true, &mut rep) };
    assert_eq!(status, NctStatus::Ok);
    assert_eq!(unsafe { nct_rep_dim(rep) }, 3);
    let mut u1 = vec![0.0; 18];
    let mut u2 = vec![0.0; 18];
    assert_eq!(unsafe { nct_rep_copy_u1(rep, u1.as_mut_ptr(), u1.len()) }, NctStatus::Ok);
    assert_eq!(unsafe { nct_rep_copy_u2(rep, u2.as_mut_ptr(), u2.len()) }, NctStatus::Ok);
    // u1 is the cyclic shift: one unit entry per row
    let ones = u1.chunks(2).filter(|z| (z[0] - 1.0).abs() < 1e-15 && z[1] == 0.0).count();
    assert_eq!(ones, 3);
    // u2 is diagonal, first entry 1
    assert_eq!((u2[0], u2[1]), (1.0, 0.0));
    let mut small = vec![0.0; 4];
    assert_eq!(unsafe { nct_rep_copy_u1(rep, small.as_mut_ptr(), small.len()) }, NctStatus::BufferTooSmall);
    unsafe { nct_rep_free(rep) };
    unsafe { nct_rep_free(ptr::null_mut()) };
    assert_eq!(unsafe { nct_rep_dim(ptr::null()) }, 0);

    let status = unsafe { nct_rep_new(NctRepKind::RhoTilde, 2, 3, 0, 0.3, 0.1, 0.2, true, &mut rep) };
    assert_eq!(status, NctStatus::Ok);
    assert_eq!(unsafe { nct_rep_dim(rep) }, 6);
    unsafe { nct_rep_free(rep) };

    let status = unsafe { nct_rep_new(NctRepKind::Rho, 0, 1, 0, 0.3, 0.0, 0.0, true, &mut rep) };
    assert_eq!(status, NctStatus::InvalidArgument);
}

#[test]
fn spectra_and_bands() {
    let mut ev = [0.0; 2];
    let status = unsafe {
        nct_harper_eigenvalues(NctVariant::Enm, 0, 2, 1, 1, 0, 0, 0.0, 0.0, 0.3, NctUnits::BandWidth, ev.as_mut_ptr(), 2)
    };
    assert_eq!(status, NctStatus::Ok);
    let s = 2.0 * 2f64.sqrt();
    assert!((ev[0] + s).abs() < 1e-12 && (ev[1] - s).abs() < 1e-12);

    let mut edges = [0.0; 4];
    assert_eq!(unsafe { nct_band_edges(2, 1, edges.as_mut_ptr(), 4) }, NctStatus::Ok);
    assert!((edges[0] + s).abs() < 1e-12 && edges[1].abs() < 1e-9 && (edges[3] - s).abs() < 1e-12);

    let mut coeffs = [0.0; 3];
    assert_eq!(unsafe { nct_chambers_coefficients(2, 1, coeffs.as_mut_ptr(), 3) }, NctStatus::Ok);
    assert!((coeffs[0] + 2.0).abs() < 1e-12 && (coeffs[2] - 0.5).abs() < 1e-15);

    let status = unsafe {
        nct_harper_eigenvalues(NctVariant::R2, 0, 2, 1, 2, 2, 0, 0.0, 0.0, 0.3, NctUnits::BandWidth, ev.as_mut_ptr(), 2)
    };
    assert_eq!(status, NctStatus::InvalidArgument);
}

#[test]
fn dataset_handles() {
    let mut ds = ptr::null_mut();
    let status = unsafe { nct_dataset_new(NctVariant::R2, 0, 2, 1, 0.0, 0.0, 0.0, &mut ds) };
    assert_eq!(status, NctStatus::Ok);
    assert_eq!(unsafe { nct_dataset_len(ds) }, 3);
    let mut rec = NctRecord::default();
    assert_eq!(unsafe { nct_dataset_record(ds, 0, &mut rec) }, NctStatus::Ok);
    assert_eq!((rec.m, rec.n), (1, 1));
    assert!((rec.eigenvalue - 4.0).abs() < 1e-12);
    assert_eq!(unsafe { nct_dataset_record(ds, 3, &mut rec) }, NctStatus::InvalidArgument);

    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("bf.csv").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { nct_dataset_write(ds, NctFormat::Csv, path.as_ptr()) }, NctStatus::Ok);
    let text = std::fs::read_to_string(dir.path().join("bf.csv")).unwrap();
    assert_eq!(text.lines().count(), 4);
    let bad = CString::new(dir.path().join("no/such/dir.csv").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { nct_dataset_write(ds, NctFormat::Svg, bad.as_ptr()) }, NctStatus::Io);
    unsafe { nct_dataset_free(ds) };
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let lib = target_dir().join("libnctorus_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("main.c");
    std::fs::write(
        &source,
        r#"#include <math.h>
#include <stdio.h>
#include "nctorus.h"
int main(void) {
    NctFluxParams p;
    if (nct_flux_params(1, 1, 0.0, &p) != NCT_STATUS_OK) return 1;
    double ev[2];
    if (nct_harper_eigenvalues(NCT_VARIANT_ENM, 0, 2, 1, 1, 0, 0, 0.0, 0.0, p.b,
                               NCT_UNITS_BAND_WIDTH, ev, 2) != NCT_STATUS_OK) return 2;
    if (fabs(ev[1] - 2.0 * sqrt(2.0)) > 1e-12) return 3;
    if (nct_flux_params(1, -1, 1.0, &p) != NCT_STATUS_SINGULAR_FLUX) return 4;
    printf("%.9f %s\n", ev[1], nct_last_error_message());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&source)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("2.828427125 "));
}
