use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use rabi_var_ffi::*;

fn new_params(omega: f64, big_omega: f64, epsilon: f64, g: f64) -> *mut RabiParams {
    let mut p = ptr::null_mut();
    let status = unsafe { rabi_params_new(omega, big_omega, epsilon, g, &mut p) };
    assert_eq!(status, RabiStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(rabi_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(rabi_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn params_round_trip() {
    let p = new_params(1.0, 5.0, -0.1, 0.2);
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    assert_eq!(
        unsafe { rabi_params_get(p, &mut a, &mut b, &mut c, &mut d) },
        RabiStatus::Ok
    );
    assert_eq!((a, b, c, d), (1.0, 5.0, -0.1, 0.2));
    assert_eq!(
        unsafe { rabi_params_get(p, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), &mut d) },
        RabiStatus::Ok
    );
    unsafe { rabi_params_free(p) };
}

#[test]
fn biased_form_doubles_splitting_and_bias() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { rabi_params_from_biased(1.0, 0.25, 0.05, 0.3, &mut p) },
        RabiStatus::Ok
    );
    let (mut big_omega, mut epsilon) = (0.0, 0.0);
    unsafe {
        rabi_params_get(
            p,
            ptr::null_mut(),
            &mut big_omega,
            &mut epsilon,
            ptr::null_mut(),
        )
    };
    assert_eq!((big_omega, epsilon), (0.5, 0.1));
    unsafe { rabi_params_free(p) };
}

#[test]
fn invalid_parameters_are_reported() {
    let mut p = ptr::null_mut();
    let status = unsafe { rabi_params_new(0.0, 1.0, 0.0, 0.1, &mut p) };
    assert_eq!(status, RabiStatus::InvalidParameter);
    assert!(p.is_null());
    assert!(last_error().contains("omega"), "{}", last_error());

    let status = unsafe { rabi_params_new(1.0, 1.0, 0.0, f64::NAN, &mut p) };
    assert_eq!(status, RabiStatus::InvalidParameter);
    assert_eq!(
        unsafe { rabi_params_new(1.0, 1.0, 0.0, 0.1, ptr::null_mut()) },
        RabiStatus::NullPointer
    );
}

#[test]
fn successful_call_clears_last_error() {
    let mut p = ptr::null_mut();
    unsafe { rabi_params_new(-1.0, 1.0, 0.0, 0.1, &mut p) };
    assert!(!last_error().is_empty());
    let p = new_params(1.0, 1.0, 0.0, 0.1);
    assert_eq!(last_error(), "");
    unsafe { rabi_params_free(p) };
}

#[test]
fn null_handles() {
    let mut x = 0.0;
    assert_eq!(
        unsafe { rabi_energy_functional(ptr::null(), 0.1, &mut x) },
        RabiStatus::NullPointer
    );
    let p = new_params(1.0, 1.0, 0.0, 0.1);
    assert_eq!(
        unsafe { rabi_energy_gradient(p, 0.1, ptr::null_mut()) },
        RabiStatus::NullPointer
    );
    assert!(unsafe { rabi_exact_energy(ptr::null()) }.is_nan());
    assert_eq!(unsafe { rabi_exact_cutoff(ptr::null()) }, 0);
    unsafe {
        rabi_params_free(p);
        rabi_params_free(ptr::null_mut());
        rabi_exact_free(ptr::null_mut());
    }
}

#[test]
fn functional_matches_core() {
    let p = new_params(1.0, 5.0, 0.1, 0.2);
    let core = rabi_var::ModelParams::new(1.0, 5.0, 0.1, 0.2).unwrap();
    let (mut e, mut de) = (0.0, 0.0);
    unsafe {
        assert_eq!(rabi_energy_functional(p, 0.05, &mut e), RabiStatus::Ok);
        assert_eq!(rabi_energy_gradient(p, 0.05, &mut de), RabiStatus::Ok);
        rabi_params_free(p);
    }
    assert_eq!(e, rabi_var::energy_functional(&core, 0.05));
    assert_eq!(de, rabi_var::energy_gradient(&core, 0.05));
}

#[test]
fn variational_methods() {
    let p = new_params(1.0, 5.0, 0.1, 0.2);
    let mut var = RabiVariational::default();
    let mut grwa = RabiVariational::default();
    let mut fixed = RabiVariational::default();
    unsafe {
        assert_eq!(
            rabi_solve_variational(p, RabiMethod::Variational, 0.0, 0, &mut var),
            RabiStatus::Ok
        );
        assert_eq!(
            rabi_solve_variational(p, RabiMethod::Grwa, 0.0, 0, &mut grwa),
            RabiStatus::Ok
        );
        assert_eq!(
            rabi_solve_variational(p, RabiMethod::FixedPoint, 0.0, 0, &mut fixed),
            RabiStatus::Ok
        );
    }
    assert!(var.energy < grwa.energy);
    assert_eq!(grwa.lambda, 0.2);
    assert!(var.gradient_residual <= 1e-10);
    assert!((fixed.lambda - var.lambda).abs() / var.lambda < 0.05);
    assert_eq!(var.observables.mean_photon, var.lambda * var.lambda);
    assert!((var.alpha.powi(2) + var.beta.powi(2) - 1.0).abs() < 1e-15);

    let status = unsafe { rabi_solve_variational(p, RabiMethod::Variational, -1.0, 0, &mut var) };
    assert_eq!(status, RabiStatus::InvalidParameter);
    unsafe { rabi_params_free(p) };
}

#[test]
fn regime_codes() {
    let cases = [
        ((1.0, 0.5, 0.1, 0.3), RabiRegime::Ii),
        ((1.0, 5.0, 0.1, 5.0), RabiRegime::I),
        ((1.0, 5.0, 0.1, 2.0), RabiRegime::Iii),
    ];
    for ((w, o, e, g), expected) in cases {
        let p = new_params(w, o, e, g);
        let mut r = RabiRegime::I;
        assert_eq!(unsafe { rabi_classify_regime(p, &mut r) }, RabiStatus::Ok);
        assert_eq!(r, expected);
        unsafe { rabi_params_free(p) };
    }
}

#[test]
fn exact_closed_form_and_vector() {
    let p = new_params(1.0, 0.0, 0.0, 0.4);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { rabi_exact_solve(p, 0, &mut s) }, RabiStatus::Ok);
    assert!((unsafe { rabi_exact_energy(s) } + 0.16).abs() < 1e-10);

    let mut obs = RabiObservables::default();
    let mut sz = 0.0;
    assert_eq!(
        unsafe { rabi_exact_observables(s, &mut obs, &mut sz) },
        RabiStatus::Ok
    );
    assert!((obs.mean_photon - 0.16).abs() < 1e-8);

    let cutoff = unsafe { rabi_exact_cutoff(s) };
    let mut len = 0usize;
    assert_eq!(
        unsafe { rabi_exact_vector(s, ptr::null_mut(), &mut len) },
        RabiStatus::Ok
    );
    assert_eq!(len, 2 * (cutoff + 1));

    let mut short = vec![0.0; len - 1];
    let mut cap = short.len();
    assert_eq!(
        unsafe { rabi_exact_vector(s, short.as_mut_ptr(), &mut cap) },
        RabiStatus::BufferTooSmall
    );
    assert_eq!(cap, len);

    let mut v = vec![0.0; len];
    assert_eq!(
        unsafe { rabi_exact_vector(s, v.as_mut_ptr(), &mut len) },
        RabiStatus::Ok
    );
    let norm: f64 = v.iter().map(|x| x * x).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    unsafe {
        rabi_exact_free(s);
        rabi_params_free(p);
    }
}

#[test]
fn exact_non_convergence() {
    let p = new_params(1.0, 1.0, 0.0, 2.0);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { rabi_exact_solve(p, 8, &mut s) },
        RabiStatus::NotConverged
    );
    assert!(s.is_null());
    assert!(last_error().contains("not converged"), "{}", last_error());
    assert_eq!(
        unsafe { rabi_exact_solve(p, 1, &mut s) },
        RabiStatus::InvalidParameter
    );
    unsafe { rabi_params_free(p) };
}

fn header() -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/rabi_var.h");
    std::fs::read_to_string(path).expect("header generated by the build script")
}

#[test]
fn header_declares_the_api() {
    let h = header();
    for needle in [
        "#ifndef RABI_VAR_H",
        "typedef struct RabiParams RabiParams;",
        "typedef struct RabiExact RabiExact;",
        "RABI_STATUS_OK = 0,",
        "RABI_STATUS_NOT_CONVERGED = 4,",
        "RABI_METHOD_GRWA = 2,",
        "typedef struct RabiVariational {",
        "const char *rabi_version(void);",
        "const char *rabi_last_error_message(void);",
        "RabiStatus rabi_params_new(double omega,",
        "void rabi_params_free(struct RabiParams *p);",
        "RabiStatus rabi_exact_vector(const struct RabiExact *s, double *buf, size_t *len);",
    ] {
        assert!(h.contains(needle), "header lacks `{needle}`:\n{h}");
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"rabi_var.h\"\n\
         int main(void) {\n\
           RabiParams *p = 0;\n\
           RabiVariational v;\n\
           if (rabi_params_new(1.0, 5.0, 0.1, 0.2, &p) != RABI_STATUS_OK) return 1;\n\
           if (rabi_solve_variational(p, RABI_METHOD_VARIATIONAL, 0.0, 0, &v) != RABI_STATUS_OK) return 1;\n\
           rabi_params_free(p);\n\
           return v.energy < 0.0 ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let out = Command::new(compiler)
            .args([
                "-fsyntax-only",
                "-Wall",
                "-Werror",
                "-x",
                lang,
                "-I",
                include,
            ])
            .arg(&src)
            .output()
            .unwrap_or_else(|e| panic!("running {compiler}: {e}"));
        assert!(
            out.status.success(),
            "{compiler}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
