//! Catalog of model harmonic spaces with exact densities.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{HarmoniaError, Result};
use crate::jacobi::{ScalarJacobiTable, DEFAULT_STEP};

/// Window used to read off the large-`t` behaviour of `f`.
pub const GROWTH_WINDOW: (f64, f64) = (20.0, 60.0);
const H_ZERO_TOL: f64 = 1e-9;
const TABLE_RANGE: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Euclidean,
    RealHyperbolic,
    ComplexHyperbolic,
    Rank1Model,
}

impl SpaceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::RealHyperbolic => "real_hyperbolic",
            SpaceKind::ComplexHyperbolic => "complex_hyperbolic",
            SpaceKind::Rank1Model => "rank1_model",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpaceKind {
    type Err = HarmoniaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(SpaceKind::Euclidean),
            "real_hyperbolic" => Ok(SpaceKind::RealHyperbolic),
            "complex_hyperbolic" => Ok(SpaceKind::ComplexHyperbolic),
            "rank1_model" => Ok(SpaceKind::Rank1Model),
            other => Err(HarmoniaError::UnknownKind(other.to_string())),
        }
    }
}

/// Construction parameters. `eigen` is only read by `rank1_model`, whose
/// dimension may be left out and inferred from the multiplicities.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpaceParams {
    pub dim: Option<usize>,
    pub eigen: Vec<(f64, usize)>,
}

impl SpaceParams {
    pub fn dim(n: usize) -> Self {
        SpaceParams { dim: Some(n), eigen: Vec::new() }
    }

    pub fn eigen(eigen: Vec<(f64, usize)>) -> Self {
        SpaceParams { dim: None, eigen }
    }
}

/// `(f, f', f'')` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

#[derive(Clone)]
enum DensityModel {
    Closed,
    Product(Arc<Vec<(ScalarJacobiTable, usize)>>),
}

/// A harmonic model manifold, immutable after construction.
#[derive(Clone)]
pub struct ModelSpace {
    pub name: String,
    pub kind: SpaceKind,
    pub dim_n: usize,
    pub mean_curvature_h: f64,
    pub ricci: f64,
    pub curvature_eigen: Vec<(f64, usize)>,
    model: DensityModel,
}

impl fmt::Debug for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelSpace")
            .field("name", &self.name)
            .field("dim_n", &self.dim_n)
            .field("mean_curvature_h", &self.mean_curvature_h)
            .field("ricci", &self.ricci)
            .field("curvature_eigen", &self.curvature_eigen)
            .finish()
    }
}

/// `c·s^e`, with `0·s^e = 0` even where `s^e` blows up at the origin.
fn term(c: f64, s: f64, e: i32) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * s.powi(e)
    }
}

/// `ln sinh r` without overflow.
pub(crate) fn ln_sinh(r: f64) -> f64 {
    if r > 20.0 {
        r - std::f64::consts::LN_2 + (-(-2.0 * r).exp()).ln_1p()
    } else {
        r.sinh().ln()
    }
}

fn ln_cosh(r: f64) -> f64 {
    let a = r.abs();
    a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
}

impl ModelSpace {
    /// `(f(r), f'(r), f''(r))` for `r ≥ 0`.
    pub fn density(&self, r: f64) -> Density {
        let n = self.dim_n as i32;
        match (&self.model, self.kind) {
            (DensityModel::Closed, SpaceKind::Euclidean) => {
                let k = (n - 1) as f64;
                Density {
                    f: r.powi(n - 1),
                    df: term(k, r, n - 2),
                    d2f: term(k * (k - 1.0), r, n - 3),
                }
            }
            (DensityModel::Closed, SpaceKind::RealHyperbolic) => {
                let k = n - 1;
                let kf = k as f64;
                let (s, c) = (r.sinh(), r.cosh());
                Density {
                    f: s.powi(k),
                    df: term(kf, s, k - 1) * c,
                    d2f: term(kf * (kf - 1.0), s, k - 2) * c * c + kf * s.powi(k),
                }
            }
            (DensityModel::Closed, SpaceKind::ComplexHyperbolic) => {
                let k = n - 1;
                let kf = k as f64;
                let (s, c) = (r.sinh(), r.cosh());
                Density {
                    f: s.powi(k) * c,
                    df: kf * s.powi(k - 1) * c * c + s.powi(k + 1),
                    d2f: term(kf * (kf - 1.0), s, k - 2) * c.powi(3) + (3.0 * kf + 1.0) * s.powi(k) * c,
                }
            }
            (DensityModel::Product(tables), _) => {
                if r == 0.0 {
                    return Density {
                        f: 0.0,
                        df: if n == 2 { 1.0 } else { 0.0 },
                        d2f: if n == 3 { 2.0 } else { 0.0 },
                    };
                }
                let mut f = 1.0;
                let mut l1 = 0.0;
                let mut l2 = 0.0;
                for (tab, m) in tables.iter() {
                    let (y, yp) = tab.eval(r);
                    let mf = *m as f64;
                    let q = yp / y;
                    f *= y.powi(*m as i32);
                    l1 += mf * q;
                    l2 += mf * (-tab.lambda - q * q);
                }
                Density {
                    f,
                    df: f * l1,
                    d2f: f * (l1 * l1 + l2),
                }
            }
            (DensityModel::Closed, SpaceKind::Rank1Model) => unreachable!("rank-1 models carry tables"),
        }
    }

    /// `f'/f` at `r > 0`, the mean curvature of the geodesic sphere.
    pub fn log_derivative(&self, r: f64) -> f64 {
        let k = (self.dim_n - 1) as f64;
        match (&self.model, self.kind) {
            (DensityModel::Closed, SpaceKind::Euclidean) => k / r,
            (DensityModel::Closed, SpaceKind::RealHyperbolic) => k / r.tanh(),
            (DensityModel::Closed, SpaceKind::ComplexHyperbolic) => k / r.tanh() + r.tanh(),
            _ => {
                let d = self.density(r);
                d.df / d.f
            }
        }
    }

    /// `f''/f` at `r > 0`, evaluated without forming `f` for closed forms.
    pub fn second_log_ratio(&self, r: f64) -> f64 {
        let k = (self.dim_n - 1) as f64;
        match (&self.model, self.kind) {
            (DensityModel::Closed, SpaceKind::Euclidean) => k * (k - 1.0) / (r * r),
            (DensityModel::Closed, SpaceKind::RealHyperbolic) => {
                let ct = 1.0 / r.tanh();
                k * (k - 1.0) * ct * ct + k
            }
            (DensityModel::Closed, SpaceKind::ComplexHyperbolic) => {
                let ct = 1.0 / r.tanh();
                k * (k - 1.0) * ct * ct + 3.0 * k + 1.0
            }
            _ => {
                let d = self.density(r);
                d.d2f / d.f
            }
        }
    }

    /// `ln f(r)` for `r > 0`, safe far beyond the range where `f` overflows.
    pub fn log_density(&self, r: f64) -> f64 {
        let k = (self.dim_n - 1) as f64;
        match (&self.model, self.kind) {
            (DensityModel::Closed, SpaceKind::Euclidean) => k * r.ln(),
            (DensityModel::Closed, SpaceKind::RealHyperbolic) => k * ln_sinh(r),
            (DensityModel::Closed, SpaceKind::ComplexHyperbolic) => k * ln_sinh(r) + ln_cosh(r),
            (DensityModel::Product(tables), _) => tables
                .iter()
                .map(|(tab, m)| *m as f64 * tab.eval(r).0.ln())
                .sum(),
            (DensityModel::Closed, SpaceKind::Rank1Model) => unreachable!(),
        }
    }

    pub fn has_exponential_growth(&self) -> bool {
        self.mean_curvature_h > H_ZERO_TOL
    }
}

/// Build a catalog space.
pub fn make_space(kind: &str, params: &SpaceParams) -> Result<ModelSpace> {
    let kind: SpaceKind = kind.parse()?;
    build(kind, params)
}

fn require_dim(params: &SpaceParams, kind: SpaceKind) -> Result<usize> {
    match params.dim {
        Some(n) if n >= 2 => Ok(n),
        Some(n) => Err(HarmoniaError::InvalidParameters(format!(
            "{kind} needs dimension n >= 2, got {n}"
        ))),
        None => Err(HarmoniaError::InvalidParameters(format!("{kind} needs a dimension"))),
    }
}

fn closed(kind: SpaceKind, n: usize, h: f64, eigen: Vec<(f64, usize)>) -> ModelSpace {
    let ricci = eigen.iter().map(|&(l, m)| l * m as f64).sum();
    ModelSpace {
        name: kind.as_str().to_string(),
        kind,
        dim_n: n,
        mean_curvature_h: h,
        ricci,
        curvature_eigen: eigen,
        model: DensityModel::Closed,
    }
}

fn build(kind: SpaceKind, params: &SpaceParams) -> Result<ModelSpace> {
    match kind {
        SpaceKind::Euclidean => {
            let n = require_dim(params, kind)?;
            Ok(closed(kind, n, 0.0, vec![(0.0, n - 1)]))
        }
        SpaceKind::RealHyperbolic => {
            let n = require_dim(params, kind)?;
            Ok(closed(kind, n, (n - 1) as f64, vec![(-1.0, n - 1)]))
        }
        SpaceKind::ComplexHyperbolic => {
            let n = require_dim(params, kind)?;
            if n < 4 || n % 2 != 0 {
                return Err(HarmoniaError::InvalidParameters(format!(
                    "complex_hyperbolic needs even n >= 4, got {n}"
                )));
            }
            Ok(closed(kind, n, n as f64, vec![(-4.0, 1), (-1.0, n - 2)]))
        }
        SpaceKind::Rank1Model => rank1(params),
    }
}

fn rank1(params: &SpaceParams) -> Result<ModelSpace> {
    let eigen = &params.eigen;
    if eigen.is_empty() {
        return Err(HarmoniaError::InvalidParameters(
            "rank1_model needs a curvature eigenvalue list".into(),
        ));
    }
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for &(l, m) in eigen {
        if m == 0 {
            return Err(HarmoniaError::InvalidParameters("multiplicities must be positive".into()));
        }
        if !l.is_finite() || l > 0.0 {
            return Err(HarmoniaError::InvalidParameters(format!(
                "eigenvalue {l} must be finite and nonpositive (positive curvature closes up the space)"
            )));
        }
        match merged.iter_mut().find(|(x, _)| *x == l) {
            Some(e) => e.1 += m,
            None => merged.push((l, m)),
        }
    }
    let zero = merged.iter().any(|&(l, _)| l == 0.0);
    if zero && merged.len() > 1 {
        return Err(HarmoniaError::InvalidParameters(
            "flat and negative eigenvalues cannot be mixed: the density would not be harmonic".into(),
        ));
    }
    let n = 1 + merged.iter().map(|&(_, m)| m).sum::<usize>();
    if let Some(d) = params.dim {
        if d != n {
            return Err(HarmoniaError::InvalidParameters(format!(
                "multiplicities sum to {} but dimension {d} needs {}",
                n - 1,
                d - 1
            )));
        }
    }
    let h = merged.iter().map(|&(l, m)| m as f64 * (-l).sqrt()).sum();
    let ricci = merged.iter().map(|&(l, m)| l * m as f64).sum();
    let tables = merged
        .iter()
        .map(|&(l, m)| (ScalarJacobiTable::new(l, TABLE_RANGE, DEFAULT_STEP), m))
        .collect();
    Ok(ModelSpace {
        name: SpaceKind::Rank1Model.as_str().to_string(),
        kind: SpaceKind::Rank1Model,
        dim_n: n,
        mean_curvature_h: h,
        ricci,
        curvature_eigen: merged,
        model: DensityModel::Product(Arc::new(tables)),
    })
}

/// Volume of the unit sphere `S^{n-1} ⊂ ℝⁿ`, `2π^{n/2}/Γ(n/2)`.
///
/// Γ at half-integers is exact through `ω_{n+2} = 2π ω_n / n`.
pub fn unit_sphere_volume(n: usize) -> f64 {
    assert!(n >= 1, "sphere dimension must be positive");
    let mut k = if n.is_multiple_of(2) { 2 } else { 1 };
    let mut w = if n.is_multiple_of(2) { 2.0 * PI } else { 2.0 };
    while k < n {
        w *= 2.0 * PI / k as f64;
        k += 2;
    }
    w
}

/// `vol S(p, r) = ω_n f(r)`.
pub fn sphere_volume(space: &ModelSpace, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(HarmoniaError::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(unit_sphere_volume(space.dim_n) * space.density(r).f)
}

/// `f(t) ~ c·t^m·e^{ht}` for large `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthExponents {
    pub m: u32,
    pub h: f64,
    pub c: f64,
}

fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let rows = y.len();
    let mut a = DMatrix::zeros(rows, cols.len());
    let mut scale = vec![0.0; cols.len()];
    for (j, col) in cols.iter().enumerate() {
        scale[j] = col.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for i in 0..rows {
            a[(i, j)] = col[i] / scale[j];
        }
    }
    let b = DVector::from_column_slice(y);
    let x = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| HarmoniaError::NonConvergent(e.to_string()))?;
    Ok(x.iter().zip(&scale).map(|(v, s)| v / s).collect())
}

/// Fit `ln f = ln c + m ln t + h t` on `t ∈ [20, 60]`, step 1; round `m`
/// and refit `(c, h)` with it fixed.
pub fn growth_exponents(space: &ModelSpace) -> Result<GrowthExponents> {
    let (a, b) = GROWTH_WINDOW;
    let ts: Vec<f64> = (0..=((b - a) as usize)).map(|i| a + i as f64).collect();
    let y: Vec<f64> = ts.iter().map(|&t| space.log_density(t)).collect();
    if y.iter().any(|v| !v.is_finite()) {
        return Err(HarmoniaError::NonConvergent("density not finite on the growth window".into()));
    }
    let ones = vec![1.0; ts.len()];
    let logs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let full = least_squares(&[ones.clone(), logs.clone(), ts.clone()], &y)?;
    let m_est = full[1];
    let m = m_est.round();
    if (m_est - m).abs() > 1e-3 || m < 0.0 {
        return Err(HarmoniaError::NonConvergent(format!(
            "polynomial exponent estimate {m_est} is not an integer"
        )));
    }
    let rest: Vec<f64> = y.iter().zip(&logs).map(|(v, l)| v - m * l).collect();
    let fit = least_squares(&[ones.clone(), ts.clone()], &rest)?;
    let (mut lnc, mut h) = (fit[0], fit[1]);
    if h < -1e-6 {
        return Err(HarmoniaError::NonConvergent(format!("negative growth rate {h}")));
    }
    if h.abs() < 1e-8 {
        h = 0.0;
        lnc = rest.iter().sum::<f64>() / rest.len() as f64;
    }
    Ok(GrowthExponents { m: m as u32, h, c: lnc.exp() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthClass {
    /// `h = 0`: polynomial volume growth.
    Polynomial,
    /// `h > 0` and `f e^{-ht}` bounded above and below.
    PurelyExponential,
    /// `h > 0` with a polynomial correction, `f ~ t^m e^{ht}`, `m ≥ 1`.
    Exponential,
}

/// Growth class of the volume density.
pub fn classify_growth(space: &ModelSpace) -> GrowthClass {
    if !space.has_exponential_growth() {
        return GrowthClass::Polynomial;
    }
    let h = space.mean_curvature_h;
    // f e^{-ht} on [1, 60]: bounded means it settles, t^m drift means it keeps growing
    let g = |t: f64| space.log_density(t) - h * t;
    let drift = g(GROWTH_WINDOW.1) - g(GROWTH_WINDOW.1 / 2.0);
    let spread = (1..=120)
        .map(|i| g(0.5 * i as f64 + 0.5))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if drift.abs() < 1e-3 && spread.1 - spread.0 < 10.0 {
        GrowthClass::PurelyExponential
    } else {
        GrowthClass::Exponential
    }
}
