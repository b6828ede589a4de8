use harmonia::exp_poly::{fit, sample, translation_rank, ExpPoly, ExpTerm, FitCaps};
use harmonia::{make_space, ModelSpace, SpaceParams};

fn space(kind: &str, n: usize) -> ModelSpace {
    make_space(kind, &SpaceParams::dim(n)).unwrap()
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Real rates of the fitted terms with their leading coefficients, sorted by
/// rate.
fn rates(p: &ExpPoly) -> Vec<(f64, f64)> {
    let mut r: Vec<(f64, f64)> = p.terms.iter().map(|t| (t.alpha, t.poly_cos[0])).collect();
    r.sort_by(|a, b| a.0.total_cmp(&b.0));
    r
}

#[test]
fn evaluation() {
    let sinh = ExpPoly::new(vec![ExpTerm::real(1.0, vec![0.5]), ExpTerm::real(-1.0, vec![-0.5])]).unwrap();
    assert!((sinh.eval(1.0) - 1f64.sinh()).abs() < 1e-15);
    assert_eq!(ExpPoly::zero().eval(3.7), 0.0);
    let sq = ExpPoly::new(vec![ExpTerm::real(0.0, vec![0.0, 0.0, 1.0])]).unwrap();
    assert_eq!(sq.eval(3.0), 9.0);
    assert!(ExpPoly::new(vec![ExpTerm::real(1.0, vec![1.0]), ExpTerm::real(1.0, vec![2.0])]).is_err());
}

#[test]
fn translation_ranks() {
    let (t, s) = (grid(-2.0, 2.0, 20), grid(-1.0, 1.0, 20));
    assert_eq!(translation_rank(f64::sinh, &t, &s, 1e-9).unwrap(), 2);
    assert_eq!(translation_rank(|x| x * x, &t, &s, 1e-9).unwrap(), 3);
    // sinh³ cosh = (e^{4t} - 2e^{2t} + 2e^{-2t} - e^{-4t})/16
    let ch = |x: f64| x.sinh().powi(3) * x.cosh();
    assert_eq!(translation_rank(ch, &t, &s, 1e-9).unwrap(), 4);
}

#[test]
fn ranks_are_stable_under_refinement() {
    let f = |x: f64| x * (0.5 * x).exp() + (2.0 * x).cos();
    let coarse = translation_rank(f, &grid(-2.0, 2.0, 20), &grid(-1.0, 1.0, 20), 1e-9).unwrap();
    let fine = translation_rank(f, &grid(-2.0, 2.0, 40), &grid(-1.0, 1.0, 40), 1e-9).unwrap();
    assert_eq!(coarse, 4);
    assert_eq!(coarse, fine);
}

#[test]
fn fits_of_listed_samples() {
    let caps = FitCaps::default();
    let r = fit(&sample(f64::sinh, 0.0, 10.0, 0.1), &caps).unwrap();
    assert!(r.max_residual <= 1e-8 * 10f64.sinh());
    let got = rates(&r.poly);
    assert_eq!(got.len(), 2);
    assert!((got[0].0 + 1.0).abs() < 1e-6 && (got[0].1 + 0.5).abs() < 1e-6);
    assert!((got[1].0 - 1.0).abs() < 1e-6 && (got[1].1 - 0.5).abs() < 1e-6);

    let r = fit(&sample(|x| x * x, 0.0, 10.0, 0.1), &caps).unwrap();
    assert!(r.max_residual <= 1e-9 * 100.0);
    assert_eq!(r.poly.terms.len(), 1);
    assert!(r.poly.terms[0].alpha.abs() < 1e-6 && r.poly.terms[0].degree() == 2);

    let r = fit(&sample(|x| x.sinh().powi(2), 0.0, 5.0, 0.05), &caps).unwrap();
    let got = rates(&r.poly);
    assert_eq!(got.len(), 3);
    for ((a, c), (ea, ec)) in got.iter().zip([(-2.0, 0.25), (0.0, -0.5), (2.0, 0.25)]) {
        assert!((a - ea).abs() < 1e-6 && (c - ec).abs() < 1e-6);
    }
}

#[test]
fn oscillatory_terms() {
    let f = |x: f64| (0.3 * x).exp() * (2.0 * x).cos() + 0.5;
    let r = fit(&sample(f, 0.0, 8.0, 0.05), &FitCaps::default()).unwrap();
    assert!(r.relative_residual < 1e-8);
    let osc = r.poly.terms.iter().find(|t| t.beta > 0.0).unwrap();
    assert!((osc.beta - 2.0).abs() < 1e-6 && (osc.alpha - 0.3).abs() < 1e-6);
}

#[test]
fn catalog_round_trips() {
    let spaces = [
        space("euclidean", 3),
        space("real_hyperbolic", 2),
        space("real_hyperbolic", 3),
        space("real_hyperbolic", 4),
        space("complex_hyperbolic", 4),
    ];
    for s in spaces {
        let samples = sample(|r| s.density(r).f, 0.0, 5.0, 0.05);
        let r = fit(&samples, &FitCaps::default()).unwrap();
        for (t, v) in &samples {
            assert!((r.poly.eval(*t) - v).abs() <= 1e-6 * v.abs().max(1.0), "{} at {t}", s.name);
        }
        let lead = r.poly.leading_rate().unwrap();
        assert!((lead - s.mean_curvature_h).abs() < 1e-4, "{}: {lead}", s.name);
    }
}

#[test]
fn fit_rejects_bad_input() {
    assert!(fit(&[(0.0, 1.0), (1.0, 2.0)], &FitCaps::default()).is_err());
    let uneven = vec![(0.0, 1.0), (0.1, 1.0), (0.3, 1.0), (0.4, 1.0), (0.5, 1.0), (0.6, 1.0)];
    assert!(fit(&uneven, &FitCaps::default()).is_err());
}
