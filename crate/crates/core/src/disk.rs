//! The Poincaré disk, metric `4|dz|²/(1-|z|²)²`: distances, geodesic rays,
//! Busemann functions, Gromov products, the sphere-intersection map `F_t`
//! and the Jacobian of the induced map between unit circles.
//!
//! Points keep `1 - |z|²` next to `z`. Far out along a ray `|z|` rounds to 1
//! in double precision while the conformal factor is still known exactly,
//! so every metric formula below is written in terms of that gap.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HarmoniaError, Result};

/// Points with `|z| ≥ 1 - RIM` are rejected by [`DiskPoint::new`].
pub const RIM: f64 = 1e-12;
/// Bisection tolerance of [`sphere_hit`].
pub const HIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    z: Complex64,
    gap: f64,
}

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if !(r < 1.0 - RIM) {
            return Err(HarmoniaError::Domain(format!("|z| = {r} is not inside the disk")));
        }
        Ok(DiskPoint { z, gap: (1.0 - r) * (1.0 + r) })
    }

    pub fn from_re_im(x: f64, y: f64) -> Result<Self> {
        DiskPoint::new(Complex64::new(x, y))
    }

    pub fn origin() -> Self {
        DiskPoint { z: Complex64::new(0.0, 0.0), gap: 1.0 }
    }

    /// Point with a separately known `1 - |z|²`, for points produced by
    /// Möbius transport that may sit closer to the rim than `RIM`.
    fn with_gap(z: Complex64, gap: f64) -> Self {
        DiskPoint { z, gap }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `1 - |z|²`.
    pub fn gap(&self) -> f64 {
        self.gap
    }
}

/// A boundary point `e^{iθ}`, `θ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryAngle {
    pub theta: f64,
}

impl BoundaryAngle {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        BoundaryAngle { theta: t }
    }

    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

/// `d(z, w) = 2 asinh(|z - w| / √((1-|z|²)(1-|w|²)))`, equal to
/// `2 artanh |z - w|/|1 - z̄w|` but accurate near the rim.
pub fn distance(z: &DiskPoint, w: &DiskPoint) -> f64 {
    2.0 * ((z.z - w.z).norm() / (z.gap * w.gap).sqrt()).asinh()
}

/// `φ_p(w) = (w + p)/(1 + p̄w)` applied to a point given with its gap.
fn transport(p: &DiskPoint, w: Complex64, w_gap: f64) -> DiskPoint {
    let den = Complex64::new(1.0, 0.0) + p.z.conj() * w;
    let z = (w + p.z) / den;
    DiskPoint::with_gap(z, p.gap * w_gap / den.norm_sqr())
}

/// `φ_p^{-1}(x) = (x - p)/(1 - p̄x)`.
fn pull_back(p: &DiskPoint, x: Complex64) -> Complex64 {
    (x - p.z) / (Complex64::new(1.0, 0.0) - p.z.conj() * x)
}

/// Unit-speed geodesic from `p` leaving at Euclidean angle `direction`.
pub fn geodesic_ray(p: &DiskPoint, direction: f64, t: f64) -> DiskPoint {
    let rho = (0.5 * t).tanh();
    let w = Complex64::from_polar(rho, direction);
    let c = (0.5 * t).cosh();
    transport(p, w, 1.0 / (c * c))
}

/// Initial direction at `p` of the ray ending at `ξ`.
pub fn direction_toward(p: &DiskPoint, xi: &BoundaryAngle) -> f64 {
    pull_back(p, xi.point()).arg()
}

/// Initial direction at `p` of the geodesic through `x` (`x ≠ p`).
pub fn direction_to(p: &DiskPoint, x: &DiskPoint) -> f64 {
    pull_back(p, x.z).arg()
}

/// Direction at `x` of the unit-speed geodesic coming from `p`: the outward
/// normal of the sphere about `p` through `x`.
pub fn outward_normal(p: &DiskPoint, x: &DiskPoint) -> f64 {
    let u = pull_back(p, x.z);
    let one = Complex64::new(1.0, 0.0);
    u.arg() - 2.0 * (one + p.z.conj() * u).arg()
}

/// Point at distance `s` from `x` on the geodesic towards `y`.
pub fn geodesic_between(x: &DiskPoint, y: &DiskPoint, s: f64) -> DiskPoint {
    geodesic_ray(x, direction_to(x, y), s)
}

/// `b_ξ(z) = ln(|ξ - z|²/(1 - |z|²))`, normalized by `b_ξ(0) = 0`.
pub fn busemann(xi: &BoundaryAngle, z: &DiskPoint) -> f64 {
    ((xi.point() - z.z).norm_sqr() / z.gap).ln()
}

/// `(x, y)_p = ½(d(x, p) + d(y, p) - d(x, y))`.
pub fn gromov_product(x: &DiskPoint, y: &DiskPoint, p: &DiskPoint) -> f64 {
    (0.5 * (distance(x, p) + distance(y, p) - distance(x, y))).max(0.0)
}

/// The unique point where the ray from `q` in direction `v` leaves the
/// sphere `S_t(p)`, and the ray parameter `s` there.
pub fn sphere_hit(p: &DiskPoint, q: &DiskPoint, v: f64, t: f64) -> Result<(DiskPoint, f64)> {
    let d = distance(p, q);
    if !(d < t) {
        return Err(HarmoniaError::Domain(format!("q at distance {d} is not inside S_{t}(p)")));
    }
    if d == 0.0 {
        return Ok((geodesic_ray(q, v, t), t));
    }
    let g = |s: f64| distance(p, &geodesic_ray(q, v, s)) - t;
    let (mut lo, mut hi) = ((t - d).max(0.0), t + d);
    let (glo, ghi) = (g(lo), g(hi));
    if glo > 0.0 || ghi < 0.0 {
        return Err(HarmoniaError::Bracketing(format!(
            "no sign change on [{lo}, {hi}]: {glo:e}, {ghi:e}"
        )));
    }
    while hi - lo > HIT_TOL {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    Ok((geodesic_ray(q, v, s), s))
}

/// `B_t(v)`: direction at `p` of the point `F_t(v)`.
pub fn bt_map(p: &DiskPoint, q: &DiskPoint, v: f64, t: f64) -> Result<f64> {
    let (x, _) = sphere_hit(p, q, v, t)?;
    Ok(direction_to(p, &x))
}

/// `Jac B_t(v) = f(d(q, F_t v))/f(t) / ⟨N_p, N_q⟩` with `f = sinh`.
pub fn jacobian_bt(p: &DiskPoint, q: &DiskPoint, v: f64, t: f64) -> Result<f64> {
    let (x, s) = sphere_hit(p, q, v, t)?;
    let cos = (outward_normal(p, &x) - outward_normal(q, &x)).cos();
    if !(cos > 0.0) {
        return Err(HarmoniaError::Domain("sphere normals are not acute".into()));
    }
    Ok(s.sinh() / t.sinh() / cos)
}

/// `d(c_v(t), c_w(t))` for rays from the origin at angle `α`, and the lower
/// bound `a(t)·α`, `a(t) = min(t/π, a_const/√(coth(t/2) - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Divergence {
    pub actual: f64,
    pub bound: f64,
}

fn ray_separation(alpha: f64, t: f64) -> f64 {
    // arccosh(cosh²t - sinh²t cos α), written without cancellation
    2.0 * (t.sinh() * (0.5 * alpha).sin()).asinh()
}

/// `a_const` so that `a(t_cal)·α` touches `d(c_v(t_cal), c_w(t_cal))` from
/// below over `α ∈ (0, π]`.
pub fn calibrate_a_const(t_cal: f64) -> f64 {
    const SAMPLES: usize = 2000;
    let worst = (1..=SAMPLES)
        .map(|i| PI * i as f64 / SAMPLES as f64)
        .map(|a| ray_separation(a, t_cal) / a)
        .fold(f64::INFINITY, f64::min);
    ((0.5 * t_cal).tanh().recip() - 1.0).sqrt() * worst
}

pub fn divergence_check_with(alpha: f64, t: f64, a_const: f64) -> Result<Divergence> {
    if !(alpha > 0.0 && alpha <= PI) || !(t > 0.0) {
        return Err(HarmoniaError::Domain(format!("need 0 < α ≤ π and t > 0, got α = {alpha}, t = {t}")));
    }
    let gap = (0.5 * t).tanh().recip() - 1.0;
    let a = (t / PI).min(a_const / gap.sqrt());
    Ok(Divergence { actual: ray_separation(alpha, t), bound: a * alpha })
}

/// [`divergence_check_with`] using the constant calibrated at `t = 1`.
pub fn divergence_check(alpha: f64, t: f64) -> Result<Divergence> {
    divergence_check_with(alpha, t, calibrate_a_const(1.0))
}
