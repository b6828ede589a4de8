//! Radial Green's kernel `G̃(r) = (1/ω_n) ∫_r^∞ dt/f(t)` and Martin
//! quotients.

use serde::Serialize;

use crate::disk::{self, BoundaryAngle, DiskPoint};
use crate::error::{HarmoniaError, Result};
use crate::model_catalog::{growth_exponents, make_space, unit_sphere_volume, GrowthExponents, ModelSpace, SpaceParams};
use crate::quadrature::{integrate, Tolerance};
use crate::radial::{radial_laplacian, RadialFunction};

/// Quadrature cut; beyond it `1/f` is integrated from its asymptotics.
pub const GREEN_HORIZON: f64 = 60.0;
/// Smallest `s` accepted by [`martin_limit`].
pub const MARTIN_START: f64 = 20.0;

const KERNEL_TOL: Tolerance = Tolerance::new(1e-300, 1e-14);
const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GreenKernel {
    pub space: ModelSpace,
    /// `1/ω_n`.
    pub beta: f64,
    pub tail_params: GrowthExponents,
    pub horizon: f64,
}

impl GreenKernel {
    pub fn new(space: &ModelSpace) -> Result<Self> {
        let tail_params = growth_exponents(space)?;
        if tail_params.h == 0.0 && tail_params.m <= 1 {
            return Err(HarmoniaError::NoGreenKernel(format!(
                "∫ dt/f diverges for {} in dimension {}",
                space.name, space.dim_n
            )));
        }
        Ok(GreenKernel {
            space: space.clone(),
            beta: 1.0 / unit_sphere_volume(space.dim_n),
            tail_params,
            horizon: GREEN_HORIZON,
        })
    }

    /// `∫_T^∞ dt/f` from `f ≈ c t^m e^{ht}`.
    fn tail(&self, from: f64) -> f64 {
        let GrowthExponents { m, h, c } = self.tail_params;
        let m = m as f64;
        if h > 0.0 {
            let x = h * from;
            (-x).exp() * from.powf(-m) / (h * c) * (1.0 - m / x + m * (m + 1.0) / (x * x))
        } else {
            from.powf(1.0 - m) / ((m - 1.0) * c)
        }
    }

    /// `G̃(r)`.
    pub fn value(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(HarmoniaError::Domain(format!("Green's kernel needs r > 0, got {r}")));
        }
        if r >= self.horizon {
            return Ok(self.beta * self.tail(r));
        }
        let body = integrate(|t| (-self.space.log_density(t)).exp(), r, self.horizon, KERNEL_TOL)?;
        Ok(self.beta * (body + self.tail(self.horizon)))
    }

    /// `G̃'(r) = -β/f(r)`.
    pub fn derivative(&self, r: f64) -> f64 {
        -self.beta * (-self.space.log_density(r)).exp()
    }

    /// `G̃` as a radial function (singular at 0).
    pub fn radial_function(&self) -> RadialFunction {
        let k1 = self.clone();
        let k2 = self.clone();
        RadialFunction::new(
            move |r| if r == 0.0 { f64::INFINITY } else { k1.value(r).unwrap_or(f64::NAN) },
            move |r| k2.derivative(r),
        )
    }
}

/// `G̃(r)` for the space.
pub fn green_radial(kernel: &GreenKernel, r: f64) -> Result<f64> {
    kernel.value(r)
}

/// `|ω_n ∫₀^R G̃ Δφ f dr + φ(0)|` for a radial test function supported in
/// `[0, R]`.
pub fn verify_fundamental(kernel: &GreenKernel, testfn: &RadialFunction, support: f64) -> Result<f64> {
    if !(support > 0.0) {
        return Err(HarmoniaError::Domain(format!("support radius must be positive, got {support}")));
    }
    let edge = testfn.value(support).abs().max(testfn.deriv(support).abs());
    if !(edge <= SUPPORT_TOL) {
        return Err(HarmoniaError::InvalidParameters(format!(
            "test function is not supported in [0, {support}]: |φ|, |φ'| = {edge:e} at the edge"
        )));
    }
    let space = &kernel.space;
    let omega = unit_sphere_volume(space.dim_n);
    let mut failure = None;
    let integral = integrate(
        |r| {
            let lap = match radial_laplacian(space, testfn, r) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    return 0.0;
                }
            };
            if lap == 0.0 {
                return 0.0;
            }
            kernel.value(r).unwrap_or(f64::NAN) * lap * space.density(r).f
        },
        0.0,
        support,
        Tolerance::new(1e-12, 1e-12),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((omega * integral + testfn.origin_value).abs())
}

/// `G̃(s + a)/G̃(s)`, tending to `e^{-ha}`.
pub fn martin_limit(kernel: &GreenKernel, a: f64, s: f64) -> Result<f64> {
    if s < MARTIN_START {
        return Err(HarmoniaError::Domain(format!("s = {s} is below the horizon start {MARTIN_START}")));
    }
    if !(s + a > 0.0) {
        return Err(HarmoniaError::Domain(format!("s + a = {} must be positive", s + a)));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    Ok(kernel.value(s + a)? / kernel.value(s)?)
}

/// One sample of [`martin_kernel_along_ray`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MartinSample {
    pub t: f64,
    pub ratio: f64,
}

/// `G(x, x_n)/G(p₀, x_n)` on the disk for `x_n` on the ray from `p₀`
/// towards `ξ` at parameters `t_seq`.
pub fn martin_kernel_along_ray(x: &DiskPoint, p0: &DiskPoint, xi: &BoundaryAngle, t_seq: &[f64]) -> Result<Vec<MartinSample>> {
    let kernel = GreenKernel::new(&make_space("real_hyperbolic", &SpaceParams::dim(2))?)?;
    let dir = disk::direction_toward(p0, xi);
    t_seq
        .iter()
        .map(|&t| {
            let xn = disk::geodesic_ray(p0, dir, t);
            let num = kernel.value(disk::distance(x, &xn))?;
            let den = kernel.value(disk::distance(p0, &xn))?;
            Ok(MartinSample { t, ratio: num / den })
        })
        .collect()
}

/// The bump `(1 - r²)²` on `[0, 1]` as untruncated polynomials; pair it
/// with support radius 1.
pub fn bump() -> RadialFunction {
    RadialFunction::new(|r| (1.0 - r * r).powi(2), |r| -4.0 * r * (1.0 - r * r))
}
