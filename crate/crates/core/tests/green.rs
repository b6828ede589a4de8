use std::f64::consts::PI;

use harmonia::disk::{busemann, geodesic_ray, BoundaryAngle, DiskPoint};
use harmonia::green::{bump, green_radial, martin_kernel_along_ray, martin_limit, verify_fundamental, GreenKernel};
use harmonia::numdiff::derivative;
use harmonia::radial::radial_laplacian;
use harmonia::{make_space, HarmoniaError, ModelSpace, SpaceParams};
use num_complex::Complex64;

fn space(kind: &str, n: usize) -> ModelSpace {
    make_space(kind, &SpaceParams::dim(n)).unwrap()
}

fn kernels() -> Vec<GreenKernel> {
    let mut spaces = vec![space("euclidean", 3), space("euclidean", 5), space("complex_hyperbolic", 4)];
    spaces.extend((2..=5).map(|n| space("real_hyperbolic", n)));
    spaces.push(make_space("rank1_model", &SpaceParams::eigen(vec![(-4.0, 1), (-1.0, 2)])).unwrap());
    spaces.iter().map(|s| GreenKernel::new(s).unwrap()).collect()
}

#[test]
fn listed_values() {
    let e3 = GreenKernel::new(&space("euclidean", 3)).unwrap();
    assert!((green_radial(&e3, 1.0).unwrap() - 0.0795775).abs() < 1e-7);
    let h3 = GreenKernel::new(&space("real_hyperbolic", 3)).unwrap();
    let expect = (1.0 / 1f64.tanh() - 1.0) / (4.0 * PI);
    assert!((green_radial(&h3, 1.0).unwrap() / expect - 1.0).abs() < 1e-12);
    assert!((expect - 0.02491).abs() < 1e-5);
    let h2 = GreenKernel::new(&space("real_hyperbolic", 2)).unwrap();
    let expect = (1.0 / 0.5f64.tanh()).ln() / (2.0 * PI);
    assert!((green_radial(&h2, 1.0).unwrap() / expect - 1.0).abs() < 1e-12);
}

#[test]
fn flat_plane_error() {
    match GreenKernel::new(&space("euclidean", 2)) {
        Err(e @ HarmoniaError::NoGreenKernel(_)) => assert!(e.to_string().contains("no positive Green's kernel")),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn derivative_formula() {
    for k in kernels() {
        for r in [0.3, 1.0, 3.0, 8.0] {
            let fd = derivative(|x| k.value(x).unwrap(), r, 1e-3);
            let exact = k.derivative(r);
            assert!((fd - exact).abs() <= 1e-8 * exact.abs().max(1e-300), "{} r={r}", k.space.name);
        }
    }
}

#[test]
fn kernels_are_harmonic_and_decreasing() {
    for k in kernels() {
        let g = k.radial_function();
        let mut prev = f64::INFINITY;
        for i in 0..=49 {
            let r = 0.2 + 0.2 * i as f64;
            let lap = radial_laplacian(&k.space, &g, r).unwrap();
            // relative to the size of the individual terms
            let scale = k.derivative(r).abs() * k.space.log_derivative(r).abs();
            assert!(lap.abs() <= 1e-7 * scale.max(1.0), "{} r={r}: {lap}", k.space.name);
            let v = k.value(r).unwrap();
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }
}

#[test]
fn fundamental_solution_residuals() {
    for kind in ["euclidean", "real_hyperbolic"] {
        let k = GreenKernel::new(&space(kind, 3)).unwrap();
        assert!(verify_fundamental(&k, &bump(), 1.0).unwrap() <= 1e-6);
    }
    let k = GreenKernel::new(&space("complex_hyperbolic", 4)).unwrap();
    assert!(verify_fundamental(&k, &bump(), 1.0).unwrap() <= 1e-6);
}

#[test]
fn martin_quotients() {
    let e3 = GreenKernel::new(&space("euclidean", 3)).unwrap();
    assert!((martin_limit(&e3, 5.0, 40.0).unwrap() - 40.0 / 45.0).abs() < 1e-10);
    for k in kernels().into_iter().filter(|k| k.space.has_exponential_growth()) {
        let h = k.space.mean_curvature_h;
        let q = martin_limit(&k, 1.0, 40.0).unwrap();
        assert!((q - (-h).exp()).abs() <= 1e-4, "{}: {q}", k.space.name);
    }
}

#[test]
fn martin_kernel_along_rays() {
    let p0 = DiskPoint::origin();
    let xi = BoundaryAngle::new(0.0);
    let on_ray = geodesic_ray(&p0, 0.0, 1.0);
    let s = martin_kernel_along_ray(&on_ray, &p0, &xi, &[40.0]).unwrap();
    assert!((s[0].ratio - 1f64.exp()).abs() < 1e-4);
    let x = DiskPoint::new(Complex64::new(0.0, 0.3)).unwrap();
    let b = busemann(&xi, &x);
    assert!((b - (1.09f64 / 0.91).ln()).abs() < 1e-12);
    let seq = martin_kernel_along_ray(&x, &p0, &xi, &[5.0, 10.0, 20.0, 40.0]).unwrap();
    let errs: Vec<f64> = seq.iter().map(|m| (m.ratio - (-b).exp()).abs()).collect();
    // decreasing until rounding
    assert!(errs.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-14));
    assert!(errs[3] < 1e-4);
    assert!(((-b).exp() - 0.8349).abs() < 1e-4);
}

#[test]
fn kernel_is_symmetric() {
    let h = GreenKernel::new(&space("real_hyperbolic", 2)).unwrap();
    let x = DiskPoint::from_re_im(0.2, -0.4).unwrap();
    let y = DiskPoint::from_re_im(-0.6, 0.1).unwrap();
    let dxy = harmonia::disk::distance(&x, &y);
    let dyx = harmonia::disk::distance(&y, &x);
    assert_eq!(h.value(dxy).unwrap(), h.value(dyx).unwrap());
}
