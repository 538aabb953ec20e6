use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use liftlab_ffi::*;

fn last_error() -> String {
    let p = liftlab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    liftlab_string_free(s);
    out
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn rp3_betti_numbers() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(liftlab_complex_build_rp3(4, &mut c), LiftlabStatus::Ok);
        assert!(liftlab_last_error().is_null());
        let mut b = [0usize; 4];
        let mut len = 0;
        assert_eq!(
            liftlab_complex_betti_z2(c, b.as_mut_ptr(), 4, &mut len),
            LiftlabStatus::Ok
        );
        assert_eq!((len, b), (4, [1, 1, 1, 1]));
        assert_eq!(
            liftlab_complex_betti_z2(c, b.as_mut_ptr(), 2, &mut len),
            LiftlabStatus::InvalidArgument
        );
        assert_eq!(len, 4);

        let mut h = ptr::null_mut();
        assert_eq!(liftlab_complex_homology_json(c, &mut h), LiftlabStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(h)).unwrap();
        assert_eq!(v["torsion_free"], false);
        liftlab_complex_free(c);
    }
}

#[test]
fn complex_json_round_trip() {
    unsafe {
        let ks = [2usize, 2, 3];
        let mut c = ptr::null_mut();
        assert_eq!(
            liftlab_complex_build_telescope(ks.as_ptr(), ks.len(), &mut c),
            LiftlabStatus::Ok
        );
        let mut s = ptr::null_mut();
        assert_eq!(liftlab_complex_to_json(c, &mut s), LiftlabStatus::Ok);
        let text = CString::new(take(s)).unwrap();
        let mut d = ptr::null_mut();
        assert_eq!(
            liftlab_complex_from_json(text.as_ptr(), &mut d),
            LiftlabStatus::Ok
        );
        let mut s2 = ptr::null_mut();
        assert_eq!(liftlab_complex_to_json(d, &mut s2), LiftlabStatus::Ok);
        assert_eq!(take(s2), text.to_str().unwrap());
        liftlab_complex_free(c);
        liftlab_complex_free(d);
    }
}

#[test]
fn code_parameters_and_solve() {
    unsafe {
        let mut b = ptr::null_mut();
        let mut c = ptr::null_mut();
        assert_eq!(
            liftlab_code_build_product(LiftlabCodeKind::B, 2, 1, &mut b),
            LiftlabStatus::Ok
        );
        assert_eq!(
            liftlab_code_build_product(LiftlabCodeKind::C, 2, 1, &mut c),
            LiftlabStatus::Ok
        );
        let (mut nz, mut nq, mut nx, mut kb, mut kc) = (0, 0, 0, 9, 9);
        assert_eq!(
            liftlab_code_params(b, &mut nz, &mut nq, &mut nx, &mut kb),
            LiftlabStatus::Ok
        );
        assert_eq!(
            liftlab_code_params(
                c,
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
                &mut kc
            ),
            LiftlabStatus::Ok
        );
        assert_eq!((kb, kc), (1, 0));
        assert!(nz > 0 && nq > 0 && nx > 0);

        let mut verified = false;
        assert_eq!(
            liftlab_code_solve(
                c,
                LiftlabStrategy::Explicit,
                0,
                0,
                false,
                &mut verified,
                ptr::null_mut()
            ),
            LiftlabStatus::Ok
        );
        assert!(verified);
        let mut report = ptr::null_mut();
        assert_eq!(
            liftlab_code_solve(
                c,
                LiftlabStrategy::Greedy,
                500,
                3,
                true,
                &mut verified,
                &mut report
            ),
            LiftlabStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert!(verified);
        assert_eq!(v["strategy"], "greedy");
        assert_eq!(
            liftlab_code_solve(
                c,
                LiftlabStrategy::Anneal,
                100,
                0,
                false,
                &mut verified,
                ptr::null_mut()
            ),
            LiftlabStatus::InvalidArgument
        );
        assert!(last_error().contains("seed"), "{}", last_error());
        liftlab_code_free(b);
        liftlab_code_free(c);
    }
}

#[test]
fn sited_local_lift() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            liftlab_sited_random(3, 2, 0.8, 1, &mut s),
            LiftlabStatus::Ok
        );
        let mut passed = false;
        let mut report = ptr::null_mut();
        assert_eq!(
            liftlab_sited_local_lift(s, &mut passed, &mut report),
            LiftlabStatus::Ok
        );
        assert!(passed);
        let v: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(v["report"]["product_zero"], true);

        let mut j = ptr::null_mut();
        assert_eq!(liftlab_sited_to_json(s, &mut j), LiftlabStatus::Ok);
        let text = CString::new(take(j)).unwrap();
        let mut t = ptr::null_mut();
        assert_eq!(
            liftlab_sited_from_json(text.as_ptr(), &mut t),
            LiftlabStatus::Ok
        );
        liftlab_sited_free(s);
        liftlab_sited_free(t);
    }
}

#[test]
fn errors_are_reported_not_raised() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(
            liftlab_complex_build_rp3(1, &mut c),
            LiftlabStatus::InvalidArgument
        );
        assert!(c.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            liftlab_complex_build_rp3(2, ptr::null_mut()),
            LiftlabStatus::NullPointer
        );

        let bad = CString::new("{\"rows\": 1").unwrap();
        let mut code = ptr::null_mut();
        assert_eq!(
            liftlab_code_from_json(bad.as_ptr(), &mut code),
            LiftlabStatus::Parse
        );
        assert_eq!(
            liftlab_code_from_json(ptr::null(), &mut code),
            LiftlabStatus::NullPointer
        );
        let bytes = [0xffu8, 0];
        assert_eq!(
            liftlab_code_from_json(bytes.as_ptr().cast(), &mut code),
            LiftlabStatus::InvalidUtf8
        );

        // dq·dz ≠ 0 mod 2
        let invalid = CString::new(
            r#"{"n_z":1,"n_q":1,"n_x":1,"added_columns":[],
                "dz":{"rows":1,"cols":1,"ring":"Z2","entries":[[0,0,1]]},
                "dq":{"rows":1,"cols":1,"ring":"Z2","entries":[[0,0,1]]}}"#,
        )
        .unwrap();
        assert_eq!(
            liftlab_code_from_json(invalid.as_ptr(), &mut code),
            LiftlabStatus::InvalidInput
        );
        assert!(code.is_null());

        let ks = [3usize, 2];
        assert_eq!(
            liftlab_code_build_telescope(LiftlabCodeKind::C, ks.as_ptr(), 2, &mut code),
            LiftlabStatus::InvalidArgument
        );
        assert_eq!(
            liftlab_code_build_telescope(LiftlabCodeKind::C, ptr::null(), 2, &mut code),
            LiftlabStatus::NullPointer
        );

        // freeing null is a no-op
        liftlab_complex_free(ptr::null_mut());
        liftlab_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(liftlab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c_and_cxx() {
    let header = crate_dir().join("include/liftlab.h");
    assert!(header.exists());
    for (lang, compiler) in [("c", "cc"), ("c++", "c++")] {
        let out = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Wextra", "-Werror", "-x", lang])
            .arg(&header)
            .output()
            .unwrap_or_else(|e| panic!("{compiler}: {e}"));
        assert!(
            out.status.success(),
            "{compiler}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

/// Directory holding the cdylib built for this test run.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let dir = lib_dir();
    assert!(
        dir.join("libliftlab_ffi.so").exists() || dir.join("libliftlab_ffi.dylib").exists(),
        "no cdylib in {dir:?}"
    );
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let cc = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-L")
        .arg(&dir)
        .args(["-lliftlab_ffi", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(
        cc.status.success(),
        "{}",
        String::from_utf8_lossy(&cc.stderr)
    );
    let run = Command::new(&bin)
        .env("LD_LIBRARY_PATH", &dir)
        .env("DYLD_LIBRARY_PATH", &dir)
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "{}{}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("ok=1"));
}
