use std::ffi::{CStr, CString};
use std::ptr;

use symqm_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    unsafe {
        symqm_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn spectra_agree_through_the_c_interface() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(symqm_solver_new(3, 8, ptr::null(), &mut s), SymqmStatus::Ok);
        let mut dim = 0;
        assert_eq!(symqm_solver_dim(s, &mut dim), SymqmStatus::Ok);
        assert_eq!(dim, 10);

        let mut len = 0;
        assert_eq!(symqm_spectrum_numeric(s, ptr::null_mut(), 0, &mut len), SymqmStatus::BufferTooSmall);
        assert_eq!(len, dim);
        let mut numeric = vec![0.0; len];
        assert_eq!(symqm_spectrum_numeric(s, numeric.as_mut_ptr(), numeric.len(), &mut len), SymqmStatus::Ok);
        let mut closed = vec![0.0; len];
        assert_eq!(symqm_spectrum_closed(3, 8, closed.as_mut_ptr(), closed.len(), &mut len), SymqmStatus::Ok);
        for (a, b) in numeric.iter().zip(&closed) {
            assert!((a - b).abs() <= 1e-9 * a.abs());
        }

        let (mut e, mut r) = (0.0, 0.0);
        let tail = [2u32];
        assert_eq!(symqm_family_state(s, tail.as_ptr(), 1, 0, &mut e, &mut r), SymqmStatus::Ok);
        assert!(r < 1e-10);
        assert!(closed.iter().any(|c| (c - e).abs() < 1e-12));
        symqm_solver_free(s);
    }
}

#[test]
fn errors_carry_a_status_and_a_message() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(symqm_solver_new(1, 4, ptr::null(), &mut s), SymqmStatus::InvalidArgument);
        assert!(s.is_null());
        assert!(last_error().contains("at least 2"));

        assert_eq!(symqm_solver_dim(ptr::null(), ptr::null_mut()), SymqmStatus::NullPointer);

        let dir = tempfile::tempdir().unwrap();
        let c = CString::new(dir.path().to_str().unwrap()).unwrap();
        assert_eq!(symqm_solver_new(2, 6, c.as_ptr(), &mut s), SymqmStatus::Ok);
        let (mut e, mut r) = (0.0, 0.0);
        assert_eq!(symqm_family_state(s, ptr::null(), 0, 9, &mut e, &mut r), SymqmStatus::InvalidArgument);
        assert!(last_error().contains("roots"));
        symqm_solver_free(s);
        symqm_solver_free(ptr::null_mut());

        let v = CStr::from_ptr(symqm_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/symqm.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["symqm_solver_new", "symqm_solver_free", "symqm_spectrum_numeric", "symqm_last_error"] {
        assert!(text.contains(f), "{f} missing from the header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(&src, format!("#include \"{header}\"\nint main(void) {{ return SYMQM_STATUS_OK; }}\n")).unwrap();
    match std::process::Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(st) => assert!(st.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler on PATH, skipping the compile check"),
    }
}
