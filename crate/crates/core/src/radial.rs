//! Radial analysis on a model space: the `μ` function, the radial
//! Laplacian, sphere and horosphere curvatures, the sphere eigenvalue and
//! the density inequality `(n-1) ≤ -f^{2/(n-1)} (f'/f)'`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{HarmoniaError, Result};
use crate::model_catalog::ModelSpace;
use crate::numdiff::{derivative, radial_step, second_derivative};
use crate::quadrature::{integrate, Tolerance};

/// Step for the finite differences of radial quantities.
pub const FD_STEP: f64 = 1e-3;
/// Offset used to read `μ'(0⁺)` and `μ'''(0⁺)` off the odd Taylor series.
const ORIGIN_STEP: f64 = 5e-3;
const MU_TOL: Tolerance = Tolerance::new(1e-300, 1e-14);

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function of the distance to a point, with its first derivative.
#[derive(Clone)]
pub struct RadialFunction {
    pub eval: RealFn,
    pub d1: RealFn,
    pub origin_value: f64,
}

impl RadialFunction {
    pub fn new<F, D>(eval: F, d1: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let origin_value = eval(0.0);
        RadialFunction { eval: Arc::new(eval), d1: Arc::new(d1), origin_value }
    }

    /// `μ` of the space, with `μ' = 1 - (f'/f) μ`.
    pub fn mu(space: &ModelSpace) -> Self {
        let s1 = space.clone();
        let s2 = space.clone();
        RadialFunction::new(
            move |r| mu(&s1, r.abs()).unwrap_or(f64::NAN),
            move |r| {
                if r == 0.0 {
                    return 1.0 / s2.dim_n as f64;
                }
                1.0 - s2.log_derivative(r) * mu(&s2, r).unwrap_or(f64::NAN)
            },
        )
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn deriv(&self, r: f64) -> f64 {
        (self.d1)(r)
    }
}

fn positive(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(HarmoniaError::Domain(format!("radius must be positive, got {r}")))
    }
}

/// `F''(r) + (f'/f)(r) F'(r)`; `F''` by differencing `F'`.
pub fn radial_laplacian(space: &ModelSpace, func: &RadialFunction, r: f64) -> Result<f64> {
    positive(r)?;
    let h = radial_step(r, FD_STEP);
    let f2 = derivative(|x| func.deriv(x), r, h);
    Ok(f2 + space.log_derivative(r) * func.deriv(r))
}

/// `μ(r) = ∫₀ʳ f / f(r)`.
pub fn mu(space: &ModelSpace, r: f64) -> Result<f64> {
    if r < 0.0 || r.is_nan() {
        return Err(HarmoniaError::Domain(format!("μ needs r >= 0, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let lf = space.log_density(r);
    integrate(|s| (space.log_density(s) - lf).exp(), 0.0, r, MU_TOL)
}

/// `-(f'/f)'(r) = (f'/f)² - f''/f`, the eigenvalue of the sphere function
/// `φ_v` on `S_r`.
pub fn sphere_eigenvalue(space: &ModelSpace, r: f64) -> Result<f64> {
    positive(r)?;
    let q = space.log_derivative(r);
    Ok(q * q - space.second_log_ratio(r))
}

fn needs_surface_dim(space: &ModelSpace) -> Result<()> {
    if space.dim_n < 3 {
        return Err(HarmoniaError::Domain(
            "scalar curvature of a 1-dimensional sphere or horosphere is undefined (n = 2)".into(),
        ));
    }
    Ok(())
}

/// `f''/f(r) + (n-1) Ric`.
pub fn sphere_scalar_curvature(space: &ModelSpace, r: f64) -> Result<f64> {
    positive(r)?;
    needs_surface_dim(space)?;
    Ok(space.second_log_ratio(r) + (space.dim_n - 1) as f64 * space.ricci)
}

/// `h² + (n-1) Ric`; zero exactly for constant sectional curvature.
pub fn horosphere_scalar_curvature(space: &ModelSpace) -> Result<f64> {
    needs_surface_dim(space)?;
    let h = space.mean_curvature_h;
    Ok(h * h + (space.dim_n - 1) as f64 * space.ricci)
}

/// Limit check `μ(r_max)` against `1/h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuLimit {
    pub r: f64,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
}

/// Worst violation of each property of `μ` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuReport {
    /// `max(-μ)`, clipped at zero.
    pub nonnegativity: f64,
    /// `max(-μ', μ' - 1)`, clipped at zero.
    pub derivative_bounds: f64,
    /// `max(-μ''μ - 1/4)`, clipped at zero.
    pub concavity: f64,
    /// `max |μ' + (f'/f) μ - 1|`.
    pub ode_residual: f64,
    pub derivative_at_origin: f64,
    pub derivative_at_origin_error: f64,
    pub third_derivative_at_origin: f64,
    pub third_derivative_reference: f64,
    pub third_derivative_error: f64,
    pub limit: Option<MuLimit>,
}

impl MuReport {
    /// Largest of the three inequality violations.
    pub fn max_violation(&self) -> f64 {
        self.nonnegativity.max(self.derivative_bounds).max(self.concavity)
    }
}

/// `μ'(0⁺)` from the odd expansion `μ(δ)/δ = μ'(0) + μ'''(0) δ²/6 + ...`.
pub fn mu_derivative_at_origin(space: &ModelSpace) -> Result<f64> {
    let g = |d: f64| mu(space, d).map(|v| v / d);
    let d = ORIGIN_STEP;
    Ok((4.0 * g(0.5 * d)? - g(d)?) / 3.0)
}

/// `μ'''(0⁺)` from `(μ(2δ) - 2μ(δ))/δ³ = μ''' + μ⁽⁵⁾δ²/4 + ...`.
pub fn mu_third_derivative_at_origin(space: &ModelSpace) -> Result<f64> {
    let d3 = |d: f64| -> Result<f64> { Ok((mu(space, 2.0 * d)? - 2.0 * mu(space, d)?) / (d * d * d)) };
    let d = ORIGIN_STEP;
    Ok((4.0 * d3(0.5 * d)? - d3(d)?) / 3.0)
}

/// Evaluate the properties of `μ` on `grid`; the limit `μ → 1/h` is read at
/// the largest grid point when `h > 0`.
pub fn check_mu_properties(space: &ModelSpace, grid: &[f64]) -> Result<MuReport> {
    if grid.is_empty() {
        return Err(HarmoniaError::InvalidParameters("empty grid".into()));
    }
    let n = space.dim_n as f64;
    let mut rep = MuReport {
        nonnegativity: 0.0,
        derivative_bounds: 0.0,
        concavity: 0.0,
        ode_residual: 0.0,
        derivative_at_origin: 0.0,
        derivative_at_origin_error: 0.0,
        third_derivative_at_origin: 0.0,
        third_derivative_reference: 2.0 * space.ricci / (n * (n + 2.0)),
        third_derivative_error: 0.0,
        limit: None,
    };
    let m = |x: f64| mu(space, x).unwrap_or(f64::NAN);
    for &r in grid {
        positive(r)?;
        let h = radial_step(r, FD_STEP);
        let v = m(r);
        let d1 = derivative(m, r, h);
        let d2 = second_derivative(m, r, h);
        rep.nonnegativity = rep.nonnegativity.max(-v);
        rep.derivative_bounds = rep.derivative_bounds.max(-d1).max(d1 - 1.0);
        rep.concavity = rep.concavity.max(-d2 * v - 0.25);
        rep.ode_residual = rep.ode_residual.max((d1 + space.log_derivative(r) * v - 1.0).abs());
    }
    rep.derivative_at_origin = mu_derivative_at_origin(space)?;
    rep.derivative_at_origin_error = (rep.derivative_at_origin - 1.0 / n).abs();
    rep.third_derivative_at_origin = mu_third_derivative_at_origin(space)?;
    rep.third_derivative_error = (rep.third_derivative_at_origin - rep.third_derivative_reference).abs();
    if space.has_exponential_growth() {
        let r = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let value = m(r);
        let reference = 1.0 / space.mean_curvature_h;
        rep.limit = Some(MuLimit { r, value, reference, error: (value - reference).abs() });
    }
    Ok(rep)
}

/// `-f^{2/(n-1)}(r) (f'/f)'(r) - (n-1)`, nonnegative on every harmonic space.
pub fn density_inequality_residual(space: &ModelSpace, r: f64) -> Result<f64> {
    positive(r)?;
    let k = (space.dim_n - 1) as f64;
    let scale = (2.0 * space.log_density(r) / k).exp();
    Ok(scale * sphere_eigenvalue(space, r)? - k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityInequalityReport {
    pub residuals: Vec<(f64, f64)>,
    pub min_residual: f64,
    pub max_abs_residual: f64,
    /// Every residual within [`EQUALITY_TOL`] of zero.
    pub equality: bool,
    /// Every residual strictly positive.
    pub strict: bool,
}

/// Residual magnitude treated as equality in the density inequality.
pub const EQUALITY_TOL: f64 = 1e-8;

pub fn check_density_inequality(space: &ModelSpace, grid: &[f64]) -> Result<DensityInequalityReport> {
    if grid.is_empty() {
        return Err(HarmoniaError::InvalidParameters("empty grid".into()));
    }
    let residuals = grid
        .iter()
        .map(|&r| density_inequality_residual(space, r).map(|v| (r, v)))
        .collect::<Result<Vec<_>>>()?;
    let min_residual = residuals.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_abs_residual = residuals.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    Ok(DensityInequalityReport {
        equality: max_abs_residual <= EQUALITY_TOL,
        strict: min_residual > EQUALITY_TOL,
        residuals,
        min_residual,
        max_abs_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalMeanReport {
    /// Grid points where the radial Laplacian is negative beyond noise.
    pub not_subharmonic_at: Vec<f64>,
    /// Largest drop `F(r_i) - F(r_{i+1})` between consecutive points.
    pub max_decrease: f64,
    pub nondecreasing: bool,
}

/// Radial form of the mean value inequality: a radially subharmonic `F` is
/// nondecreasing.
pub fn spherical_mean_check(space: &ModelSpace, func: &RadialFunction, grid: &[f64]) -> Result<SphericalMeanReport> {
    const NOISE: f64 = 1e-7;
    let mut not_subharmonic_at = Vec::new();
    for &r in grid {
        if radial_laplacian(space, func, r)? < -NOISE {
            not_subharmonic_at.push(r);
        }
    }
    let values: Vec<f64> = grid.iter().map(|&r| func.value(r)).collect();
    let max_decrease = values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    Ok(SphericalMeanReport {
        not_subharmonic_at,
        max_decrease,
        nondecreasing: max_decrease <= NOISE,
    })
}
