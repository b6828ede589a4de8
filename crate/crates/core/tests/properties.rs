use std::f64::consts::TAU;

use harmonia::boundary::visibility_measure;
use harmonia::disk::{busemann, distance, geodesic_ray, gromov_product, BoundaryAngle, DiskPoint};
use harmonia::exp_poly::{ExpPoly, ExpTerm};
use harmonia::radial::mu;
use harmonia::{make_space, SpaceParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn disk_point() -> impl Strategy<Value = DiskPoint> {
    (0.0..0.97f64, 0.0..TAU).prop_map(|(r, th)| DiskPoint::new(Complex64::from_polar(r, th)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(x in disk_point(), y in disk_point(), z in disk_point()) {
        let (dxy, dyx) = (distance(&x, &y), distance(&y, &x));
        prop_assert!((dxy - dyx).abs() <= 1e-12 * dxy.max(1.0));
        prop_assert!(dxy <= distance(&x, &z) + distance(&z, &y) + 1e-10);
    }

    #[test]
    fn rays_have_unit_speed(p in disk_point(), dir in 0.0..TAU, t in 0.0..30.0f64) {
        prop_assert!((distance(&p, &geodesic_ray(&p, dir, t)) - t).abs() <= 1e-9 * t.max(1.0));
    }

    #[test]
    fn busemann_is_one_lipschitz(x in disk_point(), y in disk_point(), th in 0.0..TAU) {
        let xi = BoundaryAngle::new(th);
        prop_assert!((busemann(&xi, &x) - busemann(&xi, &y)).abs() <= distance(&x, &y) + 1e-9);
    }

    #[test]
    fn gromov_product_bounds(x in disk_point(), y in disk_point(), p in disk_point()) {
        let g = gromov_product(&x, &y, &p);
        prop_assert!(g >= 0.0);
        prop_assert!(g <= distance(&x, &p).min(distance(&y, &p)) + 1e-9);
    }

    #[test]
    fn visibility_mass_is_one(p in disk_point(), n in 8usize..600) {
        let m = visibility_measure(&p, n).unwrap();
        prop_assert!((m.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mu_lies_below_its_limit(n in 2usize..6, r in 0.0..40.0f64) {
        let s = make_space("real_hyperbolic", &SpaceParams::dim(n)).unwrap();
        let m = mu(&s, r).unwrap();
        prop_assert!(m >= 0.0 && m <= 1.0 / (n - 1) as f64 + 1e-12);
    }

    #[test]
    fn exp_poly_is_linear(a in -2.0..2.0f64, c in -3.0..3.0f64, t in -3.0..3.0f64) {
        let p = ExpPoly::new(vec![ExpTerm::real(a, vec![c, 1.0])]).unwrap();
        prop_assert!((p.eval(t) - (c + t) * (a * t).exp()).abs() <= 1e-12 * (a * t).exp().max(1.0) * 10.0);
    }
}
