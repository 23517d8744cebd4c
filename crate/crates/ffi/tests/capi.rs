use std::ffi::{CStr, CString};
use std::ptr;

use epsdens_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { epsdens_string_free(p) };
    s
}

fn last_error() -> String {
    let p = epsdens_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn parse(json: &str) -> *mut EpsdensIdeal {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { epsdens_ideal_parse_json(text.as_ptr(), &mut out) },
        EpsdensStatus::Ok
    );
    out
}

fn small_options() -> EpsdensOptions {
    let mut o = EpsdensOptions {
        n_max: 0,
        k_max: 0,
        degree: 0,
        offset_kmax: 0,
        step_numerator: 0,
        step_denominator: 0,
    };
    assert_eq!(unsafe { epsdens_options_default(&mut o) }, EpsdensStatus::Ok);
    assert_eq!((o.n_max, o.k_max, o.degree, o.step_denominator), (48, 4, -1, 20));
    o.n_max = 12;
    o
}

fn eval(d: *const EpsdensDensity, num: i64, den: i64) -> (String, f64) {
    let mut exact = ptr::null_mut();
    let mut approx = 0.0;
    assert_eq!(
        unsafe { epsdens_density_eval(d, num, den, &mut exact, &mut approx) },
        EpsdensStatus::Ok
    );
    (take_string(exact), approx)
}

#[test]
fn ordinary_density_through_handles() {
    let ideal = parse(r#"{"vars":["X","Y","Z"],"gens":["X","Y^2","Z^3"]}"#);
    assert_eq!(unsafe { epsdens_ideal_generator_count(ideal) }, 3);
    let mut d = ptr::null_mut();
    let opts = small_options();
    assert_eq!(
        unsafe { epsdens_ordinary_density(ideal, &opts, &mut d) },
        EpsdensStatus::Ok
    );
    assert_eq!(unsafe { epsdens_density_breakpoint_count(d) }, 3);
    assert_eq!(eval(d, 5, 2), ("18".to_string(), 18.0));
    assert_eq!(eval(d, 3, 1).0, "27");
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { epsdens_density_to_json(d, &mut json) }, EpsdensStatus::Ok);
    assert!(take_string(json).contains("\"18x - 27\""));
    unsafe {
        epsdens_density_free(d);
        epsdens_ideal_free(ideal);
    }
}

#[test]
fn epsilon_of_the_edge_ideal() {
    let ideal = parse(r#"{"vars":["X","Y","Z"],"gens":["X*Y","Y*Z","Z*X"]}"#);
    let opts = small_options();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { epsdens_epsilon_value(ideal, &opts, &mut s) },
        EpsdensStatus::Ok
    );
    assert_eq!(take_string(s), "1/2");
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { epsdens_epsilon_density(ideal, ptr::null(), &mut d) },
        EpsdensStatus::Ok
    );
    assert_eq!(eval(d, 7, 4).0, "3/4");
    unsafe {
        epsdens_density_free(d);
        epsdens_ideal_free(ideal);
    }
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    let bad = CString::new("{\"vars\": [\"X\"],\n \"gens\": [\"Y\"]}").unwrap();
    let status = unsafe { epsdens_ideal_parse_json(bad.as_ptr(), &mut out) };
    assert_eq!(status, EpsdensStatus::ParseError);
    assert!(out.is_null());
    assert!(last_error().contains('Y'));

    let broken = CString::new("{\"vars\": [").unwrap();
    assert_eq!(
        unsafe { epsdens_ideal_parse_json(broken.as_ptr(), &mut out) },
        EpsdensStatus::ParseError
    );
    assert!(last_error().contains("line 1"));

    assert_eq!(
        unsafe { epsdens_ideal_parse_json(ptr::null(), &mut out) },
        EpsdensStatus::NullPointer
    );

    // Saturated densities need a polynomial ambient ring.
    let q = parse(r#"{"vars":["X","Y","Z"],"quotient":["X*Y","Y*Z","Z*X"],"gens":["X","Y^2","Z^3"]}"#);
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { epsdens_saturated_density(q, ptr::null(), &mut d) },
        EpsdensStatus::InvalidInput
    );
    assert!(d.is_null());
    unsafe { epsdens_ideal_free(q) };

    let mut s = ptr::null_mut();
    let flat = [2u32, 0];
    assert_eq!(
        unsafe { epsdens_vpf_eval(1, flat.as_ptr(), 1, 1, 1, &mut s) },
        EpsdensStatus::InvalidInput
    );
    // Success clears the message.
    let cols = [2u32, 1];
    assert_eq!(
        unsafe { epsdens_vpf_eval(1, cols.as_ptr(), 1, 5, 2, &mut s) },
        EpsdensStatus::Ok
    );
    assert_eq!(take_string(s), "1");
    assert!(epsdens_last_error_message().is_null());
}

#[test]
fn fixtures_evaluate_exactly() {
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { epsdens_fixture(EpsdensFixture::Nagata, 4, 1, &mut d) },
        EpsdensStatus::Ok
    );
    assert_eq!(eval(d, 5, 1).0, "27");
    unsafe { epsdens_density_free(d) };
    assert_eq!(
        unsafe { epsdens_fixture(EpsdensFixture::Nagata, 3, 1, &mut d) },
        EpsdensStatus::InvalidInput
    );
    assert_eq!(
        unsafe { epsdens_fixture(EpsdensFixture::Cutkosky, 0, 1, &mut d) },
        EpsdensStatus::Ok
    );
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { epsdens_density_to_json(d, &mut json) }, EpsdensStatus::Ok);
    assert!(take_string(json).contains("\"type\":\"surd\""));
    unsafe { epsdens_density_free(d) };
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        epsdens_ideal_free(ptr::null_mut());
        epsdens_density_free(ptr::null_mut());
        epsdens_string_free(ptr::null_mut());
        assert_eq!(epsdens_ideal_generator_count(ptr::null()), 0);
    }
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { epsdens_ordinary_density(ptr::null(), ptr::null(), &mut d) },
        EpsdensStatus::NullPointer
    );
}
