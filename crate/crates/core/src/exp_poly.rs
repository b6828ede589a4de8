//! Exponential polynomials `Σ (q_i(t) cos β_i t + p_i(t) sin β_i t) e^{α_i t}`:
//! evaluation, a Prony-type fit on uniform samples, and the numerical rank
//! of the space of translates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{HarmoniaError, Result};

/// One `(α, β)` frequency with its cosine and sine polynomials,
/// coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpTerm {
    pub poly_cos: Vec<f64>,
    pub poly_sin: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

impl ExpTerm {
    pub fn real(alpha: f64, poly: Vec<f64>) -> Self {
        ExpTerm { poly_cos: poly, poly_sin: Vec::new(), alpha, beta: 0.0 }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = horner(&self.poly_cos, t);
        if self.beta != 0.0 {
            v = v * (self.beta * t).cos() + horner(&self.poly_sin, t) * (self.beta * t).sin();
        }
        v * (self.alpha * t).exp()
    }

    pub fn degree(&self) -> usize {
        self.poly_cos.len().max(self.poly_sin.len()).saturating_sub(1)
    }

    fn magnitude(&self) -> f64 {
        self.poly_cos.iter().chain(&self.poly_sin).fold(0.0, |m, c| m.max(c.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ExpPoly {
    pub terms: Vec<ExpTerm>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    /// Validating constructor: distinct `(α, β)`, `β ≥ 0`, no sine part
    /// when `β = 0`.
    pub fn new(terms: Vec<ExpTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if !(t.beta >= 0.0) || !t.alpha.is_finite() {
                return Err(HarmoniaError::InvalidParameters(format!(
                    "term {i}: need finite alpha and beta >= 0"
                )));
            }
            if t.beta == 0.0 && !t.poly_sin.is_empty() {
                return Err(HarmoniaError::InvalidParameters(format!(
                    "term {i}: beta = 0 admits no sine polynomial"
                )));
            }
            if terms[..i].iter().any(|u| u.alpha == t.alpha && u.beta == t.beta) {
                return Err(HarmoniaError::InvalidParameters(format!(
                    "term {i}: repeated frequency ({}, {})",
                    t.alpha, t.beta
                )));
            }
        }
        Ok(ExpPoly { terms })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    /// Largest `α` among terms that are not numerically zero.
    pub fn leading_rate(&self) -> Option<f64> {
        let big = self.terms.iter().map(ExpTerm::magnitude).fold(0.0, f64::max);
        self.terms
            .iter()
            .filter(|t| t.magnitude() > 1e-12 * big)
            .map(|t| t.alpha)
            .reduce(f64::max)
    }
}

/// Numerical rank of `M[i][j] = f(t_j - s_i)`: singular values above
/// `tol·σ_max`.
pub fn translation_rank<F: Fn(f64) -> f64>(f: F, t_grid: &[f64], s_grid: &[f64], tol: f64) -> Result<usize> {
    if t_grid.len() < 3 || s_grid.len() < 3 {
        return Err(HarmoniaError::InvalidParameters("translation grids need at least 3 points".into()));
    }
    let m = DMatrix::from_fn(s_grid.len(), t_grid.len(), |i, j| f(t_grid[j] - s_grid[i]));
    if m.iter().any(|v| !v.is_finite()) {
        return Err(HarmoniaError::InvalidParameters("function not finite on the translation grid".into()));
    }
    let sv = m.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * top).count())
}

/// Limits and tolerances of [`fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitCaps {
    pub max_terms: usize,
    pub max_degree: usize,
    /// Relative singular-value cutoff for the model order.
    pub rank_tol: f64,
    /// Roots closer than this (relative) are one multiple root.
    pub cluster_tol: f64,
    /// Relative residual above which the fit is reported as failed.
    pub accept_tol: f64,
}

impl Default for FitCaps {
    fn default() -> Self {
        FitCaps { max_terms: 8, max_degree: 4, rank_tol: 1e-9, cluster_tol: 1e-2, accept_tol: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub poly: ExpPoly,
    /// `max |fit - sample|`.
    pub max_residual: f64,
    /// `max_residual / max |sample|`.
    pub relative_residual: f64,
}

fn failed(reason: impl Into<String>, residual: f64) -> HarmoniaError {
    HarmoniaError::FitFailed { reason: reason.into(), residual }
}

fn normalize_rows(m: &mut DMatrix<f64>, rhs: Option<&mut DVector<f64>>) -> Vec<f64> {
    let mut w = vec![1.0; m.nrows()];
    for i in 0..m.nrows() {
        let mut s = m.row(i).amax();
        if let Some(r) = rhs.as_ref() {
            s = s.max(r[i].abs());
        }
        if s > 0.0 {
            w[i] = 1.0 / s;
        }
    }
    for (i, wi) in w.iter().enumerate() {
        m.row_mut(i).scale_mut(*wi);
    }
    if let Some(r) = rhs {
        for (i, wi) in w.iter().enumerate() {
            r[i] *= wi;
        }
    }
    w
}

fn lstsq(mut a: DMatrix<f64>, mut b: DVector<f64>) -> Result<DVector<f64>> {
    normalize_rows(&mut a, Some(&mut b));
    let scale: Vec<f64> = (0..a.ncols())
        .map(|j| {
            let s = a.column(j).amax();
            if s > 0.0 {
                1.0 / s
            } else {
                1.0
            }
        })
        .collect();
    for (j, s) in scale.iter().enumerate() {
        a.column_mut(j).scale_mut(*s);
    }
    let x = a
        .svd(true, true)
        .solve(&b, 1e-15)
        .map_err(|e| failed(e.to_string(), f64::INFINITY))?;
    Ok(DVector::from_iterator(x.len(), x.iter().zip(&scale).map(|(v, s)| v * s)))
}

struct Cluster {
    centre: Complex64,
    size: usize,
}

fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<Cluster> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &z in roots {
        let scale = z.norm().max(1e-300);
        match groups.iter_mut().find(|g| {
            let c: Complex64 = g.iter().sum::<Complex64>() / g.len() as f64;
            (c - z).norm() <= tol * scale.max(c.norm())
        }) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
        .into_iter()
        .map(|g| Cluster {
            centre: g.iter().sum::<Complex64>() / g.len() as f64,
            size: g.len(),
        })
        .collect()
}

/// Prony fit of uniformly spaced samples.
///
/// The model order comes from the numerical rank of the sample Hankel
/// matrix, the exponentials from the roots of the linear-prediction
/// polynomial, and the polynomial amplitudes from a weighted least-squares
/// solve. Clustered roots become polynomial factors.
pub fn fit(samples: &[(f64, f64)], caps: &FitCaps) -> Result<FitResult> {
    let n = samples.len();
    if n < 5 {
        return Err(failed("need at least 5 samples", f64::INFINITY));
    }
    let dt = samples[1].0 - samples[0].0;
    if !(dt > 0.0) {
        return Err(failed("sample times must increase", f64::INFINITY));
    }
    for (k, w) in samples.windows(2).enumerate() {
        if ((w[1].0 - w[0].0) - dt).abs() > 1e-9 * dt.max(samples[k].0.abs()) {
            return Err(failed("samples are not equally spaced", f64::INFINITY));
        }
    }
    let y: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !ymax.is_finite() {
        return Err(failed("non-finite samples", f64::INFINITY));
    }
    if ymax == 0.0 {
        return Ok(FitResult { poly: ExpPoly::zero(), max_residual: 0.0, relative_residual: 0.0 });
    }

    // model order
    let cap_order = 2 * caps.max_terms * (caps.max_degree + 1);
    let p_max = cap_order.min((n - 1) / 2);
    let mut hankel = DMatrix::from_fn(n - p_max, p_max + 1, |i, j| y[i + j]);
    normalize_rows(&mut hankel, None);
    let sv = hankel.singular_values();
    let top = sv.max();
    let order = sv.iter().filter(|&&s| s > caps.rank_tol * top).count();
    if order == 0 {
        return Err(failed("samples carry no signal", 1.0));
    }
    if order > p_max || order >= cap_order {
        return Err(failed(
            format!("model order exceeds the cap of {} terms of degree {}", caps.max_terms, caps.max_degree),
            1.0,
        ));
    }

    // linear prediction y_{k+p} = -Σ a_j y_{k+j}
    let p = order;
    let rows = n - p;
    let a = DMatrix::from_fn(rows, p, |i, j| y[i + j]);
    let b = DVector::from_fn(rows, |i, _| -y[i + p]);
    let coef = lstsq(a, b)?;
    let mut companion = DMatrix::zeros(p, p);
    for j in 0..p {
        companion[(0, j)] = -coef[p - 1 - j];
    }
    for i in 1..p {
        companion[(i, i - 1)] = 1.0;
    }
    let roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
    if roots.iter().any(|z| z.norm() == 0.0 || !z.norm().is_finite()) {
        return Err(failed("prediction polynomial has a root at zero", 1.0));
    }

    // frequencies with multiplicities
    let t0 = samples[0].0;
    let mut freqs: Vec<(f64, f64, usize)> = Vec::new();
    for c in cluster_roots(&roots, caps.cluster_tol) {
        let im_small = c.centre.im.abs() <= caps.cluster_tol * c.centre.norm();
        if !im_small && c.centre.im < 0.0 {
            continue;
        }
        let alpha = c.centre.norm().ln() / dt;
        let beta = if im_small && c.centre.re > 0.0 { 0.0 } else { c.centre.arg().abs() / dt };
        if c.size - 1 > caps.max_degree {
            return Err(failed(format!("root multiplicity {} exceeds degree cap", c.size), 1.0));
        }
        freqs.push((alpha, beta, c.size));
    }
    if freqs.len() > caps.max_terms {
        return Err(failed(format!("{} frequencies exceed the term cap", freqs.len()), 1.0));
    }
    freqs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.total_cmp(&y.1)));

    // amplitudes, in the shifted variable u = t - t0 for conditioning
    let nyquist = |beta: f64| (beta * dt - std::f64::consts::PI).abs() < 1e-9;
    let mut columns: Vec<(usize, usize, bool)> = Vec::new();
    for (fi, &(_, beta, mult)) in freqs.iter().enumerate() {
        for d in 0..mult {
            columns.push((fi, d, false));
            if beta > 0.0 && !nyquist(beta) {
                columns.push((fi, d, true));
            }
        }
    }
    let basis = |col: &(usize, usize, bool), u: f64| {
        let (alpha, beta, _) = freqs[col.0];
        let trig = if col.2 { (beta * u).sin() } else { (beta * u).cos() };
        u.powi(col.1 as i32) * trig * (alpha * u).exp()
    };
    let design = DMatrix::from_fn(n, columns.len(), |i, j| basis(&columns[j], samples[i].0 - t0));
    let amp = lstsq(design, DVector::from_column_slice(&y))?;

    // expand the shifted polynomials back to powers of t
    let mut terms = Vec::new();
    for (fi, &(alpha, beta, mult)) in freqs.iter().enumerate() {
        let mut pc = vec![0.0; mult];
        let mut ps = vec![0.0; mult];
        for (j, col) in columns.iter().enumerate() {
            if col.0 == fi {
                if col.2 {
                    ps[col.1] = amp[j];
                } else {
                    pc[col.1] = amp[j];
                }
            }
        }
        // q(u) cos β(t-t0) + p(u) sin β(t-t0), times e^{α(t-t0)}
        let (c0, s0) = ((beta * t0).cos(), (beta * t0).sin());
        let damp = (-alpha * t0).exp();
        let qc: Vec<f64> = pc.iter().zip(&ps).map(|(q, p)| (q * c0 - p * s0) * damp).collect();
        let qs: Vec<f64> = pc.iter().zip(&ps).map(|(q, p)| (q * s0 + p * c0) * damp).collect();
        let poly_cos = shift_poly(&qc, -t0);
        let poly_sin = if beta > 0.0 { shift_poly(&qs, -t0) } else { Vec::new() };
        terms.push(ExpTerm { poly_cos, poly_sin, alpha, beta });
    }
    let poly = ExpPoly::new(terms)?;
    let max_residual = samples
        .iter()
        .map(|&(t, v)| (poly.eval(t) - v).abs())
        .fold(0.0, f64::max);
    let relative_residual = max_residual / ymax;
    if !(relative_residual <= caps.accept_tol) {
        return Err(failed("fit does not reproduce the samples", relative_residual));
    }
    Ok(FitResult { poly, max_residual, relative_residual })
}

/// Coefficients of `q(t + a)` from those of `q`.
fn shift_poly(q: &[f64], a: f64) -> Vec<f64> {
    let d = q.len();
    let mut out = vec![0.0; d];
    for (k, &c) in q.iter().enumerate() {
        // c (t + a)^k = c Σ C(k, j) a^{k-j} t^j
        let mut binom = 1.0;
        for j in (0..=k).rev() {
            out[j] += c * binom * a.powi((k - j) as i32);
            binom = binom * j as f64 / (k - j + 1) as f64;
        }
    }
    out
}

/// Uniform samples of `f` on `[a, b]` with the given step.
pub fn sample(f: impl Fn(f64) -> f64, a: f64, b: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ((b - a) / step).round() as usize;
    (0..=n).map(|i| a + i as f64 * step).map(|t| (t, f(t))).collect()
}
