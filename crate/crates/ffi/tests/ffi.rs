use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use bredon_ffi::*;

fn compute(rank: usize, m: &[i64], method: u32, cap: u64) -> (BredonStatus, *mut BredonResult) {
    let mut out = ptr::null_mut();
    let s = unsafe { bredon_compute(rank, m.as_ptr(), method, cap, &mut out) };
    (s, out)
}

fn homology(r: *const BredonResult, d: usize) -> (u64, usize) {
    let (mut f, mut t) = (0, 0);
    assert_eq!(unsafe { bredon_result_homology(r, d, &mut f, &mut t) }, BredonStatus::Ok);
    (f, t)
}

fn last_error() -> String {
    let p = bredon_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn infinite_dihedral() {
    let (s, r) = compute(2, &[1, 0, 0, 1], BREDON_METHOD_AUTO, 0);
    assert_eq!(s, BredonStatus::Ok);
    assert_eq!(homology(r, 0), (3, 0));
    assert_eq!(homology(r, 1), (0, 0));
    let mut top = 7;
    assert_eq!(unsafe { bredon_result_top_degree(r, &mut top) }, BredonStatus::Ok);
    assert_eq!(top, 0);
    let (mut f, mut t) = (0, 0);
    assert_eq!(unsafe { bredon_result_k_homology(r, 0, &mut f, &mut t) }, BredonStatus::Ok);
    assert_eq!((f, t), (3, 0));
    let mut agree = false;
    assert_eq!(unsafe { bredon_result_methods_agree(r, &mut agree) }, BredonStatus::Ok);
    assert!(agree);
    unsafe { bredon_result_free(r) };
}

#[test]
fn odd_triangle_by_chain() {
    let (s, r) = compute(3, &[1, 3, 3, 3, 1, 3, 3, 3, 1], BREDON_METHOD_CHAIN, 0);
    assert_eq!(s, BredonStatus::Ok);
    assert_eq!(homology(r, 0), (5, 0));
    assert_eq!(homology(r, 1), (1, 0));
    let mut v = 0;
    assert_eq!(unsafe { bredon_result_torsion(r, 0, 0, &mut v) }, BredonStatus::OutOfRange);
    let (mut f, mut t) = (0, 0);
    assert_eq!(unsafe { bredon_result_k_homology(r, 2, &mut f, &mut t) }, BredonStatus::OutOfRange);
    unsafe { bredon_result_free(r) };
}

#[test]
fn error_codes() {
    let (s, r) = compute(2, &[1, 1, 1, 1], BREDON_METHOD_AUTO, 0);
    assert_eq!(s, BredonStatus::InvalidMatrix);
    assert!(r.is_null());
    assert!(last_error().contains("invalid Coxeter matrix"));

    let h3 = [1, 5, 2, 5, 1, 3, 2, 3, 1];
    assert_eq!(compute(3, &h3, BREDON_METHOD_AUTO, 100).0, BredonStatus::Resource);
    assert_eq!(compute(3, &h3, 9, 0).0, BredonStatus::Input);

    let no_formula = [1, 3, 0, 2, 3, 1, 3, 2, 0, 3, 1, 3, 2, 2, 3, 1];
    assert_eq!(compute(4, &no_formula, BREDON_METHOD_CLOSED, 0).0, BredonStatus::Precondition);

    let s = unsafe { bredon_compute(2, ptr::null(), BREDON_METHOD_AUTO, 0, &mut ptr::null_mut()) };
    assert_eq!(s, BredonStatus::NullPointer);
    let (mut f, mut t) = (0, 0);
    assert_eq!(unsafe { bredon_result_homology(ptr::null(), 0, &mut f, &mut t) }, BredonStatus::NullPointer);
    unsafe { bredon_result_free(ptr::null_mut()) };
}

#[test]
fn spherical_count() {
    let mut n = 0;
    let m = [1, 2, 0, 2, 1, 2, 0, 2, 1];
    assert_eq!(unsafe { bredon_spherical_count(3, m.as_ptr(), &mut n) }, BredonStatus::Ok);
    assert_eq!(n, 6);
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

/// Compiles the C example against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libbredon_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = tempfile_path("bredon_smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("examples/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("H_0 = Z^5, H_1 = Z^1, K_1 = Z^1, agree = 1"));
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}-{}", std::process::id()))
}
