use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use sft_escape_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn hole(q: u32, g: &str, f: Option<&str>) -> Result<*mut SftHole, SftStatus> {
    let g = c(g);
    let f = f.map(c);
    let mut out = ptr::null_mut();
    let s = unsafe {
        sft_hole_new(q, g.as_ptr(), f.as_ref().map_or(ptr::null(), |x| x.as_ptr()), SftWordMode::Abstract as u32, &mut out)
    };
    if s == SftStatus::Ok {
        Ok(out)
    } else {
        Err(s)
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sft_last_error_message()) }.to_str().unwrap().to_string()
}

#[test]
fn escape_rate_roundtrip() {
    let h = hole(3, "aa,bb", None).unwrap();
    let mut r = SftEscapeRate::default();
    assert_eq!(unsafe { sft_escape_rate(h, &mut r) }, SftStatus::Ok);
    assert!((r.rho - 0.217238701649).abs() < 1e-11);
    assert_eq!(r.theta, 3.0);
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { sft_escape_rate_json(h, &mut js) }, SftStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(js) }.to_str().unwrap()).unwrap();
    assert_eq!(v["q"], 3);
    assert!(v["lambda"]["lo"].as_str().unwrap().contains('/'));
    unsafe {
        sft_string_free(js);
        sft_hole_free(h);
    }
    assert!(sft_last_error_message().is_null());
}

#[test]
fn compare_and_count() {
    let a = hole(4, "ab", Some("aa")).unwrap();
    let b = hole(4, "ba", Some("aa")).unwrap();
    let mut o = SftOrdering::Less;
    let mut cert = true;
    assert_eq!(unsafe { sft_compare(a, b, &mut o, &mut cert) }, SftStatus::Ok);
    assert_eq!(o, SftOrdering::Tie);
    assert!(!cert);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sft_count_words(a, 10, &mut s) }, SftStatus::Ok);
    let n: u64 = unsafe { CStr::from_ptr(s) }.to_str().unwrap().parse().unwrap();
    assert!(n > 0 && n < 4u64.pow(10));
    unsafe {
        sft_string_free(s);
        sft_hole_free(a);
        sft_hole_free(b);
    }
}

#[test]
fn entropy_of_golden_mean() {
    let f = c("aa");
    let mut h = 0.0;
    assert_eq!(unsafe { sft_entropy(2, f.as_ptr(), SftWordMode::Abstract as u32, &mut h) }, SftStatus::Ok);
    assert!((h - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-11);
    assert_eq!(unsafe { sft_entropy(2, ptr::null(), 0, &mut h) }, SftStatus::Ok);
    assert!((h - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn errors_are_reported() {
    assert_eq!(hole(2, "aa,bb,cc", None).unwrap_err(), SftStatus::InsufficientAlphabet);
    assert!(last_error().starts_with("InsufficientAlphabet"));
    assert_eq!(hole(3, "aa", Some("a")).unwrap_err(), SftStatus::InvalidHole);
    assert_eq!(hole(1, "aa", None).unwrap_err(), SftStatus::InvalidAlphabet);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sft_hole_new(3, ptr::null(), ptr::null(), 0, &mut out) }, SftStatus::NullPointer);
    let g = c("aa");
    assert_eq!(unsafe { sft_hole_new(3, g.as_ptr(), ptr::null(), 7, &mut out) }, SftStatus::InvalidArgument);
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { sft_hole_new(3, bad.as_ptr() as *const _, ptr::null(), 0, &mut out) },
        SftStatus::InvalidUtf8
    );
    assert_eq!(unsafe { sft_escape_rate(ptr::null(), ptr::null_mut()) }, SftStatus::NullPointer);
    assert!(out.is_null());
    unsafe {
        sft_hole_free(ptr::null_mut());
        sft_string_free(ptr::null_mut());
    }
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn cc() -> String {
    std::env::var("CC").unwrap_or_else(|_| "cc".into())
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = header_dir().join("sft_escape.h");
    for (lang, std) in [("c", "-std=c99"), ("c++", "-std=c++11")] {
        let out = Command::new(cc())
            .args(["-fsyntax-only", "-Wall", "-Werror", "-pedantic", std, "-x", lang])
            .arg(&header)
            .output()
            .expect("a C compiler on PATH");
        assert!(out.status.success(), "{lang}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_against_staticlib() {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libsft_escape_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let bin = profile_dir.join(format!("sft_escape_c_test_{}", std::process::id()));
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c_program.c");
    let out = Command::new(cc())
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(header_dir())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    let _ = std::fs::remove_file(&bin);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok 0.1.0"));
}
