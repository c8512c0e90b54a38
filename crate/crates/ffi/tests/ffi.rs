//! The C interface, called from Rust and from a compiled C program.

use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use catachc_ffi::*;

const DOUBLE: &str = include_str!("../../../benchmarks/double.chc");

fn last_error() -> String {
    unsafe { CStr::from_ptr(cata_chc_last_error_message()) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { cata_chc_string_free(s) };
    out
}

#[test]
fn transform_and_render_every_mode() {
    let src = CString::new(DOUBLE).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cata_chc_transform(src.as_ptr(), false, &mut h) }, CataChcStatus::Ok);
    assert!(!h.is_null());
    assert_eq!(last_error(), "");
    assert_eq!(unsafe { cata_chc_output_definition_count(h) }, 4);
    for m in [CataChcMode::Src, CataChcMode::Wwo, CataChcMode::W, CataChcMode::Wo] {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { cata_chc_output_smtlib(h, m, &mut s) }, CataChcStatus::Ok);
        let text = take(s);
        assert!(text.starts_with("(set-logic HORN)") && text.ends_with("(check-sat)\n"));
        let mut c = ptr::null_mut();
        assert_eq!(unsafe { cata_chc_output_chc(h, m, &mut c) }, CataChcStatus::Ok);
        catachc::frontend::load_clauses(&take(c)).unwrap();
    }
    unsafe { cata_chc_output_free(h) };
}

#[test]
fn failures_carry_a_status_and_a_message() {
    let bad = CString::new("p(X :- .").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cata_chc_transform(bad.as_ptr(), false, &mut h) }, CataChcStatus::Syntax);
    assert!(h.is_null());
    assert!(last_error().contains("syntax error"), "{}", last_error());

    assert_eq!(unsafe { cata_chc_transform(ptr::null(), false, &mut h) }, CataChcStatus::NullArgument);
    assert_eq!(unsafe { cata_chc_transform(bad.as_ptr(), false, ptr::null_mut()) }, CataChcStatus::NullArgument);
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { cata_chc_transform(invalid.as_ptr().cast(), false, &mut h) }, CataChcStatus::InvalidUtf8);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cata_chc_output_smtlib(ptr::null(), CataChcMode::W, &mut s) }, CataChcStatus::NullArgument);
    assert_eq!(unsafe { cata_chc_output_definition_count(ptr::null()) }, 0);
    unsafe {
        cata_chc_output_free(ptr::null_mut());
        cata_chc_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(cata_chc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/catachc.h")).unwrap();
    for f in [
        "cata_chc_transform",
        "cata_chc_output_smtlib",
        "cata_chc_output_chc",
        "cata_chc_output_definition_count",
        "cata_chc_output_free",
        "cata_chc_string_free",
        "cata_chc_last_error_message",
        "cata_chc_version",
        "typedef struct CataChcOutput CataChcOutput;",
        "CATA_CHC_STATUS_OK = 0",
    ] {
        assert!(h.contains(f), "{f}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "catachc.h"

int main(int argc, char **argv) {
    FILE *f = fopen(argv[1], "rb");
    static char buf[1 << 16];
    size_t n = fread(buf, 1, sizeof buf - 1, f);
    buf[n] = 0;
    fclose(f);
    CataChcOutput *h = NULL;
    if (cata_chc_transform(buf, false, &h) != CATA_CHC_STATUS_OK) {
        fprintf(stderr, "%s\n", cata_chc_last_error_message());
        return 1;
    }
    char *s = NULL;
    if (cata_chc_output_smtlib(h, CATA_CHC_MODE_WWO, &s) != CATA_CHC_STATUS_OK) return 2;
    printf("%zu %s", cata_chc_output_definition_count(h), strstr(s, "(check-sat)"));
    cata_chc_string_free(s);
    cata_chc_output_free(h);
    if (cata_chc_transform("p(", false, &h) != CATA_CHC_STATUS_SYNTAX || h != NULL) return 3;
    return 0;
}
"#;

#[test]
fn a_c_program_links_against_the_static_library() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| std::process::Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler; skipped");
        return;
    };
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcatachc_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipped", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("main.c");
    std::fs::write(&c, C_PROGRAM).unwrap();
    let exe = dir.path().join("main");
    let inc = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let o = std::process::Command::new(cc)
        .arg(&c)
        .arg("-I")
        .arg(&inc)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bench = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks/double.chc");
    let o = std::process::Command::new(&exe).arg(bench).output().unwrap();
    assert!(o.status.success(), "{:?} {}", o.status, String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "4 (check-sat)\n");
}
