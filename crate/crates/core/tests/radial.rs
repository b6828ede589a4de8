use harmonia::green::GreenKernel;
use harmonia::radial::{
    check_density_inequality, check_mu_properties, horosphere_scalar_curvature, mu, radial_laplacian, sphere_eigenvalue,
    sphere_scalar_curvature, spherical_mean_check, RadialFunction,
};
use harmonia::{make_space, ModelSpace, SpaceParams};

fn space(kind: &str, n: usize) -> ModelSpace {
    make_space(kind, &SpaceParams::dim(n)).unwrap()
}

fn exponential_catalog() -> Vec<ModelSpace> {
    let mut all: Vec<ModelSpace> = (2..=5).map(|n| space("real_hyperbolic", n)).collect();
    all.push(space("complex_hyperbolic", 4));
    all.push(space("complex_hyperbolic", 6));
    all.push(make_space("rank1_model", &SpaceParams::eigen(vec![(-4.0, 1), (-1.0, 2)])).unwrap());
    all
}

#[test]
fn laplacian_of_r_squared_in_flat_space() {
    let e3 = space("euclidean", 3);
    let f = RadialFunction::new(|r| r * r, |r| 2.0 * r);
    for r in [0.3, 1.0, 4.0] {
        assert!((radial_laplacian(&e3, &f, r).unwrap() - 6.0).abs() < 1e-8);
    }
    assert!(radial_laplacian(&e3, &f, 0.0).is_err());
}

#[test]
fn green_kernel_is_radially_harmonic() {
    let e3 = space("euclidean", 3);
    let g = GreenKernel::new(&e3).unwrap().radial_function();
    assert!(radial_laplacian(&e3, &g, 1.0).unwrap().abs() < 1e-8);
}

#[test]
fn mu_examples() {
    let h2 = space("real_hyperbolic", 2);
    assert_eq!(mu(&h2, 0.0).unwrap(), 0.0);
    assert!((mu(&h2, 2.0).unwrap() - 0.761594).abs() < 1e-6);
    for n in 2..=5 {
        let e = space("euclidean", n);
        for r in [0.5, 3.0, 17.0] {
            assert!((mu(&e, r).unwrap() - r / n as f64).abs() < 1e-12 * r);
        }
    }
}

#[test]
fn mu_reports() {
    let g: Vec<f64> = (1..=4000).map(|i| 0.01 * i as f64).collect();
    let h2 = check_mu_properties(&space("real_hyperbolic", 2), &g).unwrap();
    assert!(h2.max_violation() <= 1e-6);
    assert!(h2.limit.unwrap().error <= 1e-6);
    let e4 = check_mu_properties(&space("euclidean", 4), &g).unwrap();
    assert!(e4.max_violation() <= 1e-9);
    assert!((e4.derivative_at_origin - 0.25).abs() < 1e-8);
    assert!(e4.limit.is_none());
    let h3 = check_mu_properties(&space("real_hyperbolic", 3), &g).unwrap();
    assert!((h3.third_derivative_at_origin + 4.0 / 15.0).abs() < 1e-5);
}

#[test]
fn mu_ode_holds_everywhere() {
    let g: Vec<f64> = (1..=100).map(|i| 0.05 * i as f64).collect();
    for s in exponential_catalog() {
        let rep = check_mu_properties(&s, &g).unwrap();
        assert!(rep.ode_residual <= 1e-8, "{} n={}: {}", s.name, s.dim_n, rep.ode_residual);
    }
}

#[test]
fn h_v_radial_profile_is_harmonic() {
    // μ'' + ((f'/f) μ)' = 0 because μ' + (f'/f) μ ≡ 1
    for s in exponential_catalog() {
        let m = RadialFunction::mu(&s);
        for r in [0.3, 1.0, 2.5, 6.0] {
            let h = 1e-3;
            let g = |x: f64| m.deriv(x) + s.log_derivative(x) * m.value(x);
            let dg = (g(r + h) - g(r - h)) / (2.0 * h);
            assert!(dg.abs() < 1e-8, "{}: {dg}", s.name);
        }
    }
}

#[test]
fn sphere_eigenvalues() {
    let h2 = space("real_hyperbolic", 2);
    assert!((sphere_eigenvalue(&h2, 1.0).unwrap() - 1.0 / 1f64.sinh().powi(2)).abs() < 1e-12);
    assert!((sphere_eigenvalue(&space("euclidean", 3), 2.0).unwrap() - 0.5).abs() < 1e-14);
    let ten = sphere_eigenvalue(&h2, 10.0).unwrap();
    assert!((ten / (4.0 * (-20f64).exp()) - 1.0).abs() < 1e-6);
    for s in exponential_catalog() {
        assert!(sphere_eigenvalue(&s, 30.0).unwrap() < 1e-10, "{}", s.name);
    }
}

#[test]
fn scalar_curvatures() {
    let h3 = space("real_hyperbolic", 3);
    assert!((sphere_scalar_curvature(&h3, 1.0).unwrap() - 2.0 / 1f64.sinh().powi(2)).abs() < 1e-12);
    assert!((sphere_scalar_curvature(&space("euclidean", 3), 2.0).unwrap() - 0.5).abs() < 1e-14);
    assert!((sphere_scalar_curvature(&space("euclidean", 4), 1.0).unwrap() - 6.0).abs() < 1e-14);
    assert_eq!(horosphere_scalar_curvature(&h3).unwrap(), 0.0);
    assert_eq!(horosphere_scalar_curvature(&space("euclidean", 4)).unwrap(), 0.0);
    assert!((horosphere_scalar_curvature(&space("complex_hyperbolic", 4)).unwrap() + 2.0).abs() < 1e-12);
    assert!(sphere_scalar_curvature(&space("real_hyperbolic", 2), 1.0).is_err());
    assert!(horosphere_scalar_curvature(&space("real_hyperbolic", 2)).is_err());
}

#[test]
fn sphere_curvature_tends_to_horosphere_curvature() {
    for s in exponential_catalog().into_iter().filter(|s| s.dim_n >= 3) {
        let gap = sphere_scalar_curvature(&s, 40.0).unwrap() - horosphere_scalar_curvature(&s).unwrap();
        assert!(gap.abs() <= 1e-6, "{}: {gap}", s.name);
    }
}

#[test]
fn density_inequality_cases() {
    let g: Vec<f64> = (0..=48).map(|i| 0.2 + 0.1 * i as f64).collect();
    assert!(check_density_inequality(&space("euclidean", 3), &g).unwrap().max_abs_residual <= 1e-9);
    assert!(check_density_inequality(&space("real_hyperbolic", 4), &g).unwrap().equality);
    let ch = check_density_inequality(&space("complex_hyperbolic", 4), &g).unwrap();
    assert!(ch.strict && ch.min_residual > 0.0);
}

#[test]
fn radial_mean_value_inequality() {
    let g: Vec<f64> = (1..=60).map(|i| 0.1 * i as f64).collect();
    let e3 = space("euclidean", 3);
    assert!(spherical_mean_check(&e3, &RadialFunction::new(|r| r * r, |r| 2.0 * r), &g).unwrap().nondecreasing);
    for s in exponential_catalog() {
        let rep = spherical_mean_check(&s, &RadialFunction::mu(&s), &g).unwrap();
        assert!(rep.nondecreasing && rep.not_subharmonic_at.is_empty(), "{}", s.name);
    }
    let h2 = space("real_hyperbolic", 2);
    let k = GreenKernel::new(&h2).unwrap();
    let (k1, k2) = (k.clone(), k);
    let neg = RadialFunction::new(move |r| -k1.value(r).unwrap_or(f64::NAN), move |r| -k2.derivative(r));
    let rep = spherical_mean_check(&h2, &neg, &g).unwrap();
    assert!(rep.nondecreasing && rep.not_subharmonic_at.is_empty());
}
