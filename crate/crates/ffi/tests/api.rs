use std::ffi::{CStr, CString};
use std::ptr;

use perfect_stbc_ffi::*;

fn new_code(name: &str) -> (PstbcStatus, *mut PstbcCode) {
    let c = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    let s = unsafe { pstbc_code_new(c.as_ptr(), &mut h) };
    (s, h)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pstbc_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn lifecycle_and_degree() {
    for (name, n) in [("golden", 2), ("3x3", 3), ("4x4", 4), ("2x2:13", 2)] {
        let (s, h) = new_code(name);
        assert_eq!(s, PstbcStatus::Ok);
        let mut d = 0usize;
        assert_eq!(unsafe { pstbc_code_degree(h, &mut d) }, PstbcStatus::Ok);
        assert_eq!(d, n);
        unsafe { pstbc_code_free(h) };
    }
    unsafe { pstbc_code_free(ptr::null_mut()) };
}

#[test]
fn generator_matrix_is_unitary() {
    let (_, h) = new_code("golden");
    let mut re = [0.0; 4];
    let mut im = [0.0; 4];
    assert_eq!(unsafe { pstbc_code_generator_matrix(h, re.as_mut_ptr(), im.as_mut_ptr(), 4) }, PstbcStatus::Ok);
    // rows have unit norm and are orthogonal
    let row = |r: usize| [(re[2 * r], im[2 * r]), (re[2 * r + 1], im[2 * r + 1])];
    let dot = |a: [(f64, f64); 2], b: [(f64, f64); 2]| {
        a.iter().zip(&b).fold((0.0, 0.0), |acc, (x, y)| (acc.0 + x.0 * y.0 + x.1 * y.1, acc.1 + x.1 * y.0 - x.0 * y.1))
    };
    let d00 = dot(row(0), row(0));
    let d01 = dot(row(0), row(1));
    assert!((d00.0 - 1.0).abs() < 1e-12 && d00.1.abs() < 1e-12);
    assert!(d01.0.abs() < 1e-12 && d01.1.abs() < 1e-12);
    assert_eq!(
        unsafe { pstbc_code_generator_matrix(h, re.as_mut_ptr(), im.as_mut_ptr(), 3) },
        PstbcStatus::BufferTooSmall
    );
    unsafe { pstbc_code_free(h) };
}

#[test]
fn encode_preserves_energy() {
    let (_, h) = new_code("3x3");
    let sr: Vec<f64> = (0..9).map(|k| k as f64 - 4.0).collect();
    let si: Vec<f64> = (0..9).map(|k| (k % 3) as f64).collect();
    let mut or = [0.0; 9];
    let mut oi = [0.0; 9];
    let s = unsafe { pstbc_code_encode(h, sr.as_ptr(), si.as_ptr(), 9, or.as_mut_ptr(), oi.as_mut_ptr(), 9) };
    assert_eq!(s, PstbcStatus::Ok);
    let ein: f64 = sr.iter().zip(&si).map(|(a, b)| a * a + b * b).sum();
    let eout: f64 = or.iter().zip(&oi).map(|(a, b)| a * a + b * b).sum();
    assert!((ein - eout).abs() < 1e-10 * ein);
    let s = unsafe { pstbc_code_encode(h, sr.as_ptr(), si.as_ptr(), 8, or.as_mut_ptr(), oi.as_mut_ptr(), 9) };
    assert_eq!(s, PstbcStatus::InvalidArgument);
    assert!(last_error().contains("expected 9 symbols"));
    unsafe { pstbc_code_free(h) };
}

#[test]
fn errors_are_reported() {
    let (s, h) = new_code("5x5");
    assert_eq!(s, PstbcStatus::UnknownName);
    assert!(h.is_null());
    assert!(last_error().contains("valid names"));

    let (s, _) = new_code("2x2:17");
    assert_eq!(s, PstbcStatus::ConstructionFailed);
    assert!(last_error().contains("5 (mod 8)"));

    let mut d = 0usize;
    assert_eq!(unsafe { pstbc_code_degree(ptr::null(), &mut d) }, PstbcStatus::NullPointer);
    assert_eq!(unsafe { pstbc_code_new(ptr::null(), &mut ptr::null_mut()) }, PstbcStatus::NullPointer);
}

#[test]
fn text_and_min_det() {
    let (_, h) = new_code("golden");
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { pstbc_code_to_text(h, &mut t) }, PstbcStatus::Ok);
    let text = unsafe { CStr::from_ptr(t) }.to_string_lossy().into_owned();
    unsafe { pstbc_string_free(t) };
    assert!(text.starts_with("name: golden\n"));
    let mut m = 0.0;
    assert_eq!(unsafe { pstbc_code_min_det(h, 1, 0, 0, &mut m) }, PstbcStatus::Ok);
    assert!((m - 0.2).abs() < 1e-15);
    unsafe { pstbc_code_free(h) };
}

#[test]
fn simulate_point() {
    let (_, h) = new_code("golden");
    let c = CString::new("qam4").unwrap();
    let (mut sent, mut errors) = (0u64, 0u64);
    let s = unsafe { pstbc_simulate_point(h, c.as_ptr(), 0.0, 1, 500, 20, &mut sent, &mut errors) };
    assert_eq!(s, PstbcStatus::Ok);
    assert_eq!(errors, 20);
    assert!(sent <= 500);
    let bad = CString::new("hex4").unwrap();
    let s = unsafe { pstbc_simulate_point(h, bad.as_ptr(), 0.0, 1, 10, 1, &mut sent, &mut errors) };
    assert_eq!(s, PstbcStatus::InvalidArgument);
    unsafe { pstbc_code_free(h) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/perfect_stbc.h")).unwrap();
    for f in [
        "pstbc_last_error",
        "pstbc_code_new",
        "pstbc_code_free",
        "pstbc_code_degree",
        "pstbc_code_generator_matrix",
        "pstbc_code_encode",
        "pstbc_code_min_det",
        "pstbc_code_to_text",
        "pstbc_string_free",
        "pstbc_simulate_point",
        "PSTBC_STATUS_OK = 0",
    ] {
        assert!(header.contains(f), "{f}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-std=c99"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include/perfect_stbc.h"))
        .status()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(status.success());
}
