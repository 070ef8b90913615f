use std::ffi::{CStr, CString};
use std::ptr;

use cheeger_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cheeger_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn measure_porous_domain() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(cheeger_domain_build_porous(0.2, 1.0, 6, &mut d), CheegerStatus::Ok);
        assert_eq!(cheeger_domain_obstacle_count(d), 21);
        let mut m = CheegerMeasures::default();
        assert_eq!(cheeger_domain_measure(d, &mut m), CheegerStatus::Ok);
        assert!(m.has_delta == 1 && m.delta_hi < 2f64.powi(-7));
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!(m.perimeter_lo > two_pi && m.area_hi < std::f64::consts::PI);
        assert_eq!((m.perimeter_lo, m.perimeter_hi), (m.boundary_lo, m.boundary_hi));
        cheeger_domain_free(d);
    }
}

#[test]
fn invalid_parameters_report_condition() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(cheeger_domain_build_porous(0.3, 1.0, 6, &mut d), CheegerStatus::InvalidParameters);
        assert!(d.is_null());
        assert!(last_error().contains("(ii)"), "{}", last_error());
        assert_ne!(cheeger_domain_build_cantor(0.0, 5, &mut d), CheegerStatus::Ok);
        assert!(d.is_null());
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        assert_eq!(cheeger_domain_plain_disk(ptr::null_mut()), CheegerStatus::NullPointer);
        let mut m = CheegerMeasures::default();
        assert_eq!(cheeger_domain_measure(ptr::null(), &mut m), CheegerStatus::NullPointer);
        assert!(last_error().contains("domain"));
        assert_eq!(cheeger_domain_obstacle_count(ptr::null()), 0);
        cheeger_domain_free(ptr::null_mut());
        cheeger_string_free(ptr::null_mut());
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(cheeger_domain_build_cantor(0.04, 6, &mut d), CheegerStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(cheeger_domain_to_json(d, &mut s), CheegerStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(cheeger_domain_from_json(s, &mut back), CheegerStatus::Ok);
        let mut a = CheegerMeasures::default();
        let mut b = CheegerMeasures::default();
        cheeger_domain_measure(d, &mut a);
        cheeger_domain_measure(back, &mut b);
        assert_eq!(a, b);
        assert!(a.perimeter_hi < a.boundary_lo);

        let bad = CString::new("{\"outer\": 3}").unwrap();
        let mut none = ptr::null_mut();
        assert_ne!(cheeger_domain_from_json(bad.as_ptr(), &mut none), CheegerStatus::Ok);
        assert!(!last_error().is_empty());

        cheeger_string_free(s);
        cheeger_domain_free(d);
        cheeger_domain_free(back);
    }
}

#[test]
fn rasterize_and_solve_disk() {
    unsafe {
        let mut d = ptr::null_mut();
        cheeger_domain_plain_disk(&mut d);
        let mut inside = 0u8;
        cheeger_domain_contains(d, 0.5, 0.5, &mut inside);
        assert_eq!(inside, 1);
        cheeger_domain_contains(d, 0.8, 0.8, &mut inside);
        assert_eq!(inside, 0);

        let mut f = ptr::null_mut();
        assert_eq!(cheeger_rasterize(d, 128, 0, &mut f), CheegerStatus::Ok);
        let mut info = CheegerFieldInfo::default();
        cheeger_field_info(f, &mut info);
        assert_eq!((info.nx, info.ny), (128, 128));
        let mut buf = vec![0.0; info.nx * info.ny];
        assert_eq!(cheeger_field_copy_values(f, buf.as_mut_ptr(), 10), CheegerStatus::InvalidInput);
        assert_eq!(cheeger_field_copy_values(f, buf.as_mut_ptr(), buf.len()), CheegerStatus::Ok);
        let area: f64 = buf.iter().sum::<f64>() * info.pixel * info.pixel;
        assert!((area - std::f64::consts::PI).abs() < 1e-9);

        let (mut p, mut a) = (0.0, 0.0);
        assert_eq!(cheeger_field_measure_set(f, 1.0, &mut p, &mut a), CheegerStatus::DegenerateThreshold);
        cheeger_field_measure_set(f, 0.5, &mut p, &mut a);
        assert!((p / a - 2.0).abs() < 0.02);

        let cfg = CString::new("{\"outer_tol\": 1e-4}").unwrap();
        let mut sol = ptr::null_mut();
        assert_eq!(cheeger_solve(f, cfg.as_ptr(), &mut sol), CheegerStatus::Ok, "{}", last_error());
        let mut si = CheegerSolutionInfo::default();
        cheeger_solution_info(sol, &mut si);
        assert!((si.h_estimate - 2.0).abs() < 0.03, "{si:?}");
        assert_eq!(si.grid, 128);

        let mut s = ptr::null_mut();
        assert_eq!(cheeger_solution_to_json(sol, f, &mut s), CheegerStatus::Ok);
        let json = CStr::from_ptr(s).to_str().unwrap();
        assert!(json.contains("\"minimality_gap\""));
        cheeger_string_free(s);

        let mut ind = ptr::null_mut();
        cheeger_solution_indicator(sol, &mut ind);
        cheeger_field_info(ind, &mut info);
        assert_eq!(info.nx, 128);

        let bad = CString::new("{\"no_such_key\": 1}").unwrap();
        let mut none = ptr::null_mut();
        assert_eq!(cheeger_solve(f, bad.as_ptr(), &mut none), CheegerStatus::Json);

        cheeger_field_free(ind);
        cheeger_solution_free(sol);
        cheeger_field_free(f);
        cheeger_domain_free(d);
    }
}

#[test]
fn save_and_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("d.json").to_str().unwrap()).unwrap();
    unsafe {
        let mut d = ptr::null_mut();
        cheeger_domain_build_porous(0.2, 1.0, 4, &mut d);
        assert_eq!(cheeger_domain_save(d, path.as_ptr()), CheegerStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(cheeger_domain_load(path.as_ptr(), &mut back), CheegerStatus::Ok);
        assert_eq!(cheeger_domain_obstacle_count(back), 10);
        let missing = CString::new(dir.path().join("nope.json").to_str().unwrap()).unwrap();
        assert_eq!(cheeger_domain_load(missing.as_ptr(), &mut back), CheegerStatus::Io);
        cheeger_domain_free(d);
        cheeger_domain_free(back);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(cheeger_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
