use std::ffi::{CStr, CString};
use std::ptr;

use spherocurve_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(spc_last_error()).to_string_lossy().into_owned() }
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    spc_string_free(s);
    out
}

#[test]
fn gamma1_frenet_invariants() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(spc_curve_gamma1(2.0, &mut c), SpcStatus::Ok);
        assert_eq!(spc_curve_dim(c), 4);
        let (mut frame, mut kappa, mut tau) = ([0.0; 16], 0.0, 0.0);
        assert_eq!(
            spc_curve_frenet(c, 0.3, frame.as_mut_ptr(), &mut kappa, &mut tau),
            SpcStatus::Ok
        );
        assert!((kappa - 2.0 / 3f64.sqrt()).abs() < 1e-9);
        assert!((tau - 1.0).abs() < 1e-9);
        let mut x = [0.0; 4];
        assert_eq!(spc_curve_point(c, 0.3, x.as_mut_ptr()), SpcStatus::Ok);
        let first_row = &frame[..4];
        assert!(x.iter().zip(first_row).all(|(a, b)| (a - b).abs() < 1e-12));
        spc_curve_free(c);
    }
}

#[test]
fn decompose_then_compose_returns_to_start() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(spc_curve_gamma1(1.0, &mut c), SpcStatus::Ok);
        let mut pair = ptr::null_mut();
        assert_eq!(spc_decompose(c, 1024, &mut pair), SpcStatus::Ok);
        let mut back = ptr::null_mut();
        let mut end = [0.0; 8];
        assert_eq!(spc_compose(pair, &mut back, end.as_mut_ptr()), SpcStatus::Ok);
        let expected = [-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        assert!(end.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-5), "{end:?}");
        let (mut p, mut q) = ([0.0; 4], [0.0; 4]);
        for t in [0.1, 0.45, 0.9] {
            spc_curve_point(c, t, p.as_mut_ptr());
            spc_curve_point(back, t, q.as_mut_ptr());
            assert!(p.iter().zip(q).all(|(a, b)| (a - b).abs() < 1e-5));
        }
        let mut json = ptr::null_mut();
        assert_eq!(spc_pair_to_json(pair, &mut json), SpcStatus::Ok);
        let text = CString::new(take_string(json)).unwrap();
        let mut again = ptr::null_mut();
        assert_eq!(spc_pair_from_json(text.as_ptr(), &mut again), SpcStatus::Ok);
        spc_pair_free(again);
        spc_pair_free(pair);
        spc_curve_free(back);
        spc_curve_free(c);
    }
}

#[test]
fn rotation_and_convexity_reports() {
    unsafe {
        let doc =
            CString::new(r#"{"space":"S2","kind":"catalog","catalog":{"name":"sigma","c":3.141592653589793,"m":2}}"#)
                .unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(spc_curve_from_json(doc.as_ptr(), &mut s), SpcStatus::Ok);
        let mut rot = 0;
        assert_eq!(spc_rotation_number(s, 512, &mut rot), SpcStatus::Ok);
        assert_eq!(rot, 2);
        let mut json = ptr::null_mut();
        assert_eq!(spc_convexity_json(s, 512, 0, &mut json), SpcStatus::WrongSpace);
        spc_curve_free(s);

        let mut g = ptr::null_mut();
        assert_eq!(spc_curve_gamma1(1.0, &mut g), SpcStatus::Ok);
        assert_eq!(spc_convexity_json(g, 256, 0, &mut json), SpcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["verdict"], "convex-certified");
        spc_curve_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(spc_curve_sigma(-1.0, 1.0, &mut c), SpcStatus::InvalidInput);
        assert!(last_error().starts_with("RangeError"));
        assert!(c.is_null());
        let bad = CString::new("{").unwrap();
        assert_eq!(spc_curve_from_json(bad.as_ptr(), &mut c), SpcStatus::InvalidInput);
        assert!(last_error().starts_with("SchemaError"));
        assert_eq!(spc_curve_from_json(ptr::null(), &mut c), SpcStatus::NullPointer);
        assert_eq!(spc_curve_gamma1(1.0, ptr::null_mut()), SpcStatus::NullPointer);
        assert_eq!(spc_curve_dim(ptr::null()), 0);
        spc_curve_free(ptr::null_mut());
        spc_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_current_and_compiles() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/spherocurve.h")).unwrap();
    for name in [
        "spc_curve_gamma1",
        "spc_decompose",
        "spc_compose",
        "spc_last_error",
        "SPC_STATUS_OK",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let src = std::env::temp_dir().join(format!("spc_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"spherocurve.h\"\nint main(void) { SpcCurve *c = 0; return spc_curve_gamma1(1.0, &c) == SPC_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    match std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&src)
        .status()
    {
        Ok(status) => assert!(status.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler; header syntax not checked"),
    }
    let _ = std::fs::remove_file(src);
}
