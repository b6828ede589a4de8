//! Quadrature rules: Gauss–Legendre on intervals (fixed and adaptive),
//! the periodic trapezoid rule on the circle, and a mapped rule for
//! semi-infinite ranges.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{HarmoniaError, Result};

/// Where a [`QuadratureRule`] lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// A bounded interval `[a, b]`.
    Interval(f64, f64),
    /// The full circle `[0, 2π)`, periodic.
    Circle,
}

/// Nodes and weights together with the declared error order.
///
/// For Gauss–Legendre the order is the polynomial degree integrated
/// exactly (`2n - 1`); for the circle it is the number of Fourier modes
/// integrated exactly (`n - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
    pub order: usize,
}

impl QuadratureRule {
    /// `n`-point Gauss–Legendre rule on `[a, b]`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        let (x, w) = legendre_nodes(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        QuadratureRule {
            nodes: x.iter().map(|&xi| mid + half * xi).collect(),
            weights: w.iter().map(|&wi| half * wi).collect(),
            domain: Domain::Interval(a, b),
            order: 2 * n - 1,
        }
    }

    /// Uniform trapezoid rule with `n` nodes on the circle, weights `2π/n`.
    pub fn circle(n: usize) -> Self {
        let h = 2.0 * PI / n as f64;
        QuadratureRule {
            nodes: (0..n).map(|j| j as f64 * h).collect(),
            weights: vec![h; n],
            domain: Domain::Circle,
            order: n.saturating_sub(1),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// the three-term recurrence.
pub fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Absolute and relative tolerance pair; the target is `max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-12, 1e-13)
    }
}

const LOW_ORDER: usize = 10;
const HIGH_ORDER: usize = 20;
const MAX_PANELS: usize = 4000;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Legendre quadrature.
///
/// Each panel is integrated with a 20-point rule; the difference to the
/// 10-point rule serves as its error estimate. The panel with the largest
/// error is bisected until the summed estimate meets `tol`.
pub struct AdaptiveGaussLegendre {
    low: (Vec<f64>, Vec<f64>),
    high: (Vec<f64>, Vec<f64>),
    pub tol: Tolerance,
}

impl AdaptiveGaussLegendre {
    pub fn new(tol: Tolerance) -> Self {
        AdaptiveGaussLegendre {
            low: legendre_nodes(LOW_ORDER),
            high: legendre_nodes(HIGH_ORDER),
            tol,
        }
    }

    fn panel<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64) -> Panel {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut hi = 0.0;
        for (x, w) in self.high.0.iter().zip(&self.high.1) {
            hi += w * f(mid + half * x);
        }
        let mut lo = 0.0;
        for (x, w) in self.low.0.iter().zip(&self.low.1) {
            lo += w * f(mid + half * x);
        }
        hi *= half;
        lo *= half;
        let floor = 50.0 * f64::EPSILON * hi.abs();
        let error = (hi - lo).abs();
        Panel {
            a,
            b,
            value: hi,
            error: if error < floor { 0.0 } else { error },
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(HarmoniaError::Quadrature(format!(
                "non-finite limits [{a}, {b}]"
            )));
        }
        let mut heap = BinaryHeap::new();
        let first = self.panel(&mut f, a, b);
        let mut total = first.value;
        let mut total_err = first.error;
        heap.push(first);
        while total_err > self.tol.target(total) {
            if heap.len() >= MAX_PANELS {
                return Err(HarmoniaError::Quadrature(format!(
                    "panel limit reached on [{a}, {b}], error estimate {total_err:e}"
                )));
            }
            let worst = heap.pop().expect("heap is never empty");
            let m = 0.5 * (worst.a + worst.b);
            let left = self.panel(&mut f, worst.a, m);
            let right = self.panel(&mut f, m, worst.b);
            total += left.value + right.value - worst.value;
            total_err += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }
        if !total.is_finite() {
            return Err(HarmoniaError::Quadrature(format!(
                "non-finite integral on [{a}, {b}]"
            )));
        }
        // re-sum to shed the drift of the running total
        Ok(heap.iter().map(|p| p.value).sum())
    }
}

impl Default for AdaptiveGaussLegendre {
    fn default() -> Self {
        AdaptiveGaussLegendre::new(Tolerance::default())
    }
}

/// Adaptive Gauss–Legendre integral of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    AdaptiveGaussLegendre::new(tol).integrate(f, a, b)
}

/// `∫_a^∞ f` through the substitution `t = a + x/(1-x)` on `[0, 1)`.
///
/// The integrand must decay fast enough that the mapped integrand stays
/// bounded near `x = 1`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: Tolerance) -> Result<f64> {
    let mapped = |x: f64| {
        if x >= 1.0 {
            return 0.0;
        }
        let one_minus = 1.0 - x;
        let t = a + x / one_minus;
        let v = f(t) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(mapped, 0.0, 1.0, tol)
}

/// Trapezoid rule on the circle with `n` equally spaced nodes.
pub fn circle_mean<F: FnMut(f64) -> f64>(f: F, n: usize) -> f64 {
    QuadratureRule::circle(n).integrate(f) / (2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let rule = QuadratureRule::gauss_legendre(5, 0.0, 2.0);
        // degree 9 is the highest exact degree for 5 nodes
        let got = rule.integrate(|x| x.powi(9));
        assert!((got - 2f64.powi(10) / 10.0).abs() < 1e-12);
        assert_eq!(rule.order, 9);
        let wsum: f64 = rule.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_sharp_exponential() {
        let v = integrate(|s| (10.0 * (s - 40.0)).exp(), 0.0, 40.0, Tolerance::new(0.0, 1e-13)).unwrap();
        let exact = (1.0 - (-400f64).exp()) / 10.0;
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn adaptive_reaches_relative_accuracy_on_reciprocal_square() {
        let v = integrate(|t| 1.0 / (t * t), 0.5, 60.0, Tolerance::new(0.0, 1e-14)).unwrap();
        assert!((v - (2.0 - 1.0 / 60.0)).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_matches_antiderivative() {
        let v = integrate_to_infinity(|t| (-t).exp(), 1.0, Tolerance::new(1e-15, 1e-13)).unwrap();
        assert!((v - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn circle_rule_is_exact_for_low_modes() {
        let m = circle_mean(|t| (3.0 * t).cos().powi(2), 16);
        assert!((m - 0.5).abs() < 1e-15);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, Tolerance::default()).unwrap(), 0.0);
    }
}
