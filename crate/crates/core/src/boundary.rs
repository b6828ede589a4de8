//! Visibility measures on the circle at infinity of the disk, the Poisson
//! solution of the Dirichlet problem at infinity, the bounded harmonic
//! functions `h_v = μ(d(0, ·)) φ_v`, the ball model, the integral gradient
//! formula and averages over horocycle arcs.

use std::f64::consts::{LN_10, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::disk::{self, busemann, BoundaryAngle, DiskPoint};
use crate::error::{HarmoniaError, Result};
use crate::model_catalog::{make_space, unit_sphere_volume, ModelSpace, SpaceParams};
use crate::numdiff::{derivative, second_derivative};
use crate::quadrature::{circle_mean, integrate, Tolerance};
use crate::radial::mu;

pub const DEFAULT_NODES: usize = 512;
pub const MIN_NODES: usize = 8;
/// Mean curvature of horocycles in the disk.
const H: f64 = 1.0;

fn disk_space() -> ModelSpace {
    make_space("real_hyperbolic", &SpaceParams::dim(2)).expect("the hyperbolic plane is in the catalog")
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityMeasure {
    pub basepoint: DiskPoint,
    pub nodes: Vec<BoundaryAngle>,
    pub weights: Vec<f64>,
}

impl VisibilityMeasure {
    pub fn integrate<F: Fn(&BoundaryAngle) -> f64>(&self, phi: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(xi, w)| w * phi(xi)).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Uniform nodes on the circle weighted by `e^{-h b_ξ(p)}` relative to the
/// round measure at the origin, normalized to mass 1.
pub fn visibility_measure(p: &DiskPoint, node_count: usize) -> Result<VisibilityMeasure> {
    if node_count < MIN_NODES {
        return Err(HarmoniaError::InvalidParameters(format!(
            "visibility measure needs at least {MIN_NODES} nodes, got {node_count}"
        )));
    }
    let base = TAU / node_count as f64 / unit_sphere_volume(2);
    let nodes: Vec<BoundaryAngle> = (0..node_count)
        .map(|j| BoundaryAngle::new(TAU * j as f64 / node_count as f64))
        .collect();
    let mut weights: Vec<f64> = nodes.iter().map(|xi| (-H * busemann(xi, p)).exp() * base).collect();
    let mass: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= mass;
    }
    Ok(VisibilityMeasure { basepoint: *p, nodes, weights })
}

/// `dμ_p/dμ_q(ξ) = e^{-h (b_ξ(p) - b_ξ(q))}`.
pub fn radon_nikodym(p: &DiskPoint, q: &DiskPoint, xi: &BoundaryAngle) -> f64 {
    (-H * (busemann(xi, p) - busemann(xi, q))).exp()
}

/// Nodes for about `digits` correct digits of a Poisson integral at `z`:
/// the trapezoid error decays like `|z|^N`.
pub fn nodes_for_accuracy(z: &DiskPoint, digits: f64) -> usize {
    let one_minus = z.gap() / (1.0 + z.z().norm());
    ((digits * LN_10 / one_minus).ceil() as usize).max(DEFAULT_NODES)
}

/// `H_φ(z) = ∫ φ dμ_z`.
pub fn dirichlet_solve<F: Fn(&BoundaryAngle) -> f64>(phi: F, z: &DiskPoint, node_count: usize) -> Result<f64> {
    Ok(visibility_measure(z, node_count)?.integrate(phi))
}

/// `h_v(q) = μ(d(0, q)) ⟨v, q/|q|⟩`, with `v` a tangent vector at the origin
/// written as a complex number.
pub fn h_v(v: Complex64, q: &DiskPoint) -> Result<f64> {
    if v.norm() > 1.0 + 1e-12 {
        return Err(HarmoniaError::InvalidParameters(format!("|v| = {} exceeds 1", v.norm())));
    }
    let r = q.z().norm();
    if r == 0.0 {
        return Ok(0.0);
    }
    let d = disk::distance(&DiskPoint::origin(), q);
    let radial = q.z() / r;
    Ok(mu(&disk_space(), d)? * (v.re * radial.re + v.im * radial.im))
}

/// `(h_{e₁}(q), h_{e₂}(q))` for an orthonormal frame at the origin.
pub fn ball_model_map(basis: [Complex64; 2], q: &DiskPoint) -> Result<[f64; 2]> {
    let [e1, e2] = basis;
    let dot = e1.re * e2.re + e1.im * e2.im;
    if (e1.norm() - 1.0).abs() > 1e-12 || (e2.norm() - 1.0).abs() > 1e-12 || dot.abs() > 1e-12 {
        return Err(HarmoniaError::InvalidParameters("basis is not orthonormal".into()));
    }
    Ok([h_v(e1, q)?, h_v(e2, q)?])
}

pub fn standard_basis() -> [Complex64; 2] {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
}

/// Both sides of `⟨grad u(p), v⟩ = (1/vol B_r(p)) ∫_{S_r(p)} u φ_v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Nodes on `S_r(p)` used by [`gradient_integral_check`].
pub const SPHERE_NODES: usize = 256;
const GRAD_STEP: f64 = 1e-3;

/// The left side differentiates `u` along the geodesic through `p` in
/// direction `v`; the right side integrates over `S_r(p)` with surface
/// measure `f(r) dθ` and `vol B_r = ω₂ ∫₀ʳ f`.
pub fn gradient_integral_check<U: Fn(&DiskPoint) -> f64>(u: U, p: &DiskPoint, v: f64, r: f64) -> Result<GradientCheck> {
    if !(r > 0.0) {
        return Err(HarmoniaError::Domain(format!("radius must be positive, got {r}")));
    }
    let along = |s: f64| {
        if s >= 0.0 {
            u(&disk::geodesic_ray(p, v, s))
        } else {
            u(&disk::geodesic_ray(p, v + PI, -s))
        }
    };
    let lhs = derivative(along, 0.0, GRAD_STEP);
    let space = disk_space();
    let ball = unit_sphere_volume(2) * integrate(|s| space.density(s).f, 0.0, r, Tolerance::default())?;
    let sphere = circle_mean(|w| u(&disk::geodesic_ray(p, w, r)) * (w - v).cos(), SPHERE_NODES);
    let rhs = TAU * space.density(r).f * sphere / ball;
    if !rhs.is_finite() {
        return Err(HarmoniaError::Quadrature("sphere integral is not finite".into()));
    }
    Ok(GradientCheck { lhs, rhs, residual: (lhs - rhs).abs() })
}

/// Point at signed arc length `x` on the horocycle through 0 based at `ξ`,
/// measured from the ray towards `ξ`. In the half-plane picture
/// `w = i(1 + z/ξ)/(1 - z/ξ)` this horocycle is the line `Im w = 1`.
pub fn horocycle_point(xi: &BoundaryAngle, x: f64) -> Complex64 {
    xi.point() * Complex64::new(x, 0.0) / Complex64::new(x, 2.0)
}

/// Averages of `φ` over horocycle arcs of intrinsic half-length `L_j`.
pub fn mean_value_at_infinity<F: Fn(Complex64) -> f64>(phi: F, xi: &BoundaryAngle, arc_lengths: &[f64]) -> Result<Vec<f64>> {
    if arc_lengths.windows(2).any(|w| !(w[1] > w[0])) || arc_lengths.iter().any(|&l| !(l > 0.0)) {
        return Err(HarmoniaError::InvalidParameters(
            "arc lengths must be positive and strictly increasing".into(),
        ));
    }
    arc_lengths
        .iter()
        .map(|&l| {
            let total = integrate(|x| phi(horocycle_point(xi, x)), -l, l, Tolerance::new(1e-12, 1e-12))?;
            Ok(total / (2.0 * l))
        })
        .collect()
}

/// Hyperbolic Laplacian `(1-|z|²)²/4 (∂²ₓ + ∂²ᵧ) u` by central differences.
pub fn hyperbolic_laplacian<U: Fn(Complex64) -> f64>(u: U, z: Complex64, step: f64) -> f64 {
    let uxx = second_derivative(|x| u(Complex64::new(x, z.im)), z.re, step);
    let uyy = second_derivative(|y| u(Complex64::new(z.re, y)), z.im, step);
    let g = 1.0 - z.norm_sqr();
    0.25 * g * g * (uxx + uyy)
}

/// Boundary data `cos(kθ)`.
pub fn cos_mode(k: f64) -> impl Fn(&BoundaryAngle) -> f64 {
    move |xi: &BoundaryAngle| (k * xi.theta).cos()
}
