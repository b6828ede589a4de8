//! Matrix Jacobi equation `Y'' + R Y = 0` along a geodesic with constant
//! curvature operator `R`, integrated by the classical fourth-order
//! Runge–Kutta method, and the tensor identities built on it.
//!
//! A trajectory carries the canonical pair: `A` with `A(0) = 0, A'(0) = I`
//! and `B` with `B(0) = I, B'(0) = 0`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{HarmoniaError, Result};
use crate::quadrature::legendre_nodes;

/// Default integration step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Default horizon beyond which tails of `∫ (A*A)^{-1}` are taken in closed form.
pub const DEFAULT_HORIZON: f64 = 40.0;

const SYMMETRY_TOL: f64 = 1e-12;
const PANEL_WIDTH: f64 = 0.1;
const PANEL_NODES: usize = 10;

/// Sampled solution of the matrix Jacobi equation.
#[derive(Debug, Clone)]
pub struct JacobiTrajectory {
    pub times: Vec<f64>,
    pub a: Vec<DMatrix<f64>>,
    pub a_prime: Vec<DMatrix<f64>>,
    pub b: Vec<DMatrix<f64>>,
    pub b_prime: Vec<DMatrix<f64>>,
    pub curvature: DMatrix<f64>,
    step: f64,
}

/// Classical RK4 step for `X' = (X₂, -R X₁)` acting on the stacked state
/// `X = [Y; Y']`.
fn rk4_step(r: &DMatrix<f64>, y: &DMatrix<f64>, yp: &DMatrix<f64>, h: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let k1y = yp.clone();
    let k1p = -(r * y);
    let y2 = y + &k1y * (0.5 * h);
    let p2 = yp + &k1p * (0.5 * h);
    let k2y = p2.clone();
    let k2p = -(r * &y2);
    let y3 = y + &k2y * (0.5 * h);
    let p3 = yp + &k2p * (0.5 * h);
    let k3y = p3.clone();
    let k3p = -(r * &y3);
    let y4 = y + &k3y * h;
    let p4 = yp + &k3p * h;
    let k4y = p4;
    let k4p = -(r * &y4);
    let ny = y + (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (h / 6.0);
    let np = yp + (k1p + k2p * 2.0 + k3p * 2.0 + k4p) * (h / 6.0);
    (ny, np)
}

fn rk4_scalar(lambda: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    let k1y = yp;
    let k1p = -lambda * y;
    let k2y = yp + 0.5 * h * k1p;
    let k2p = -lambda * (y + 0.5 * h * k1y);
    let k3y = yp + 0.5 * h * k2p;
    let k3p = -lambda * (y + 0.5 * h * k2y);
    let k4y = yp + h * k3p;
    let k4p = -lambda * (y + h * k3y);
    (
        y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
        yp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
    )
}

fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    m.is_square() && (m - m.transpose()).amax() <= tol * m.amax().max(1.0)
}

/// Integrate the canonical pair `(A, B)` for constant curvature operator `R`
/// on `[0, t_max]`.
///
/// The step is shrunk so that the grid ends exactly at `t_max`.
pub fn integrate(curvature: &DMatrix<f64>, t_max: f64, step: f64) -> Result<JacobiTrajectory> {
    if !curvature.is_square() || curvature.nrows() == 0 {
        return Err(HarmoniaError::InvalidParameters(
            "curvature operator must be a nonempty square matrix".into(),
        ));
    }
    if !is_symmetric(curvature, SYMMETRY_TOL) {
        return Err(HarmoniaError::InvalidParameters(
            "curvature operator must be symmetric".into(),
        ));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(HarmoniaError::Domain(format!("t_max must be positive, got {t_max}")));
    }
    if !(step > 0.0) || step > 1e-2 * t_max.min(1.0) {
        return Err(HarmoniaError::InvalidParameters(format!(
            "step {step} exceeds 1e-2 * min(1, t_max)"
        )));
    }
    let k = curvature.nrows();
    let n_steps = (t_max / step).ceil() as usize;
    let h = t_max / n_steps as f64;

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut a = Vec::with_capacity(n_steps + 1);
    let mut ap = Vec::with_capacity(n_steps + 1);
    let mut b = Vec::with_capacity(n_steps + 1);
    let mut bp = Vec::with_capacity(n_steps + 1);

    // A and B share the propagator, so they are stepped side by side.
    let mut y = DMatrix::zeros(k, 2 * k);
    let mut yp = DMatrix::zeros(k, 2 * k);
    for i in 0..k {
        yp[(i, i)] = 1.0;
        y[(i, k + i)] = 1.0;
    }
    for i in 0..=n_steps {
        times.push(i as f64 * h);
        a.push(y.columns(0, k).into_owned());
        b.push(y.columns(k, k).into_owned());
        ap.push(yp.columns(0, k).into_owned());
        bp.push(yp.columns(k, k).into_owned());
        if i < n_steps {
            let (ny, np) = rk4_step(curvature, &y, &yp, h);
            y = ny;
            yp = np;
        }
    }
    Ok(JacobiTrajectory {
        times,
        a,
        a_prime: ap,
        b,
        b_prime: bp,
        curvature: curvature.clone(),
        step: h,
    })
}

/// Value and derivative of `S` at one time.
#[derive(Debug, Clone)]
pub struct StableTensor {
    pub s: DMatrix<f64>,
    pub s_prime: DMatrix<f64>,
}

/// The four Jacobi tensors at a single time.
#[derive(Debug, Clone)]
pub struct JacobiState {
    pub a: DMatrix<f64>,
    pub a_prime: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub b_prime: DMatrix<f64>,
}

impl JacobiTrajectory {
    pub fn dim(&self) -> usize {
        self.curvature.nrows()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().expect("trajectory has samples")
    }

    /// State at arbitrary `t ∈ [0, t_max]`: one RK4 sub-step from the
    /// nearest grid node below, so interpolation keeps the method's order.
    pub fn state_at(&self, t: f64) -> Result<JacobiState> {
        if !(0.0..=self.t_max() * (1.0 + 1e-14)).contains(&t) {
            return Err(HarmoniaError::Domain(format!(
                "t = {t} outside trajectory range [0, {}]",
                self.t_max()
            )));
        }
        let i = ((t / self.step).floor() as usize).min(self.times.len() - 1);
        let dt = t - self.times[i];
        if dt.abs() < 1e-15 {
            return Ok(JacobiState {
                a: self.a[i].clone(),
                a_prime: self.a_prime[i].clone(),
                b: self.b[i].clone(),
                b_prime: self.b_prime[i].clone(),
            });
        }
        let k = self.dim();
        let mut y = DMatrix::zeros(k, 2 * k);
        let mut yp = DMatrix::zeros(k, 2 * k);
        y.columns_mut(0, k).copy_from(&self.a[i]);
        y.columns_mut(k, k).copy_from(&self.b[i]);
        yp.columns_mut(0, k).copy_from(&self.a_prime[i]);
        yp.columns_mut(k, k).copy_from(&self.b_prime[i]);
        let (y, yp) = rk4_step(&self.curvature, &y, &yp, dt);
        Ok(JacobiState {
            a: y.columns(0, k).into_owned(),
            b: y.columns(k, k).into_owned(),
            a_prime: yp.columns(0, k).into_owned(),
            b_prime: yp.columns(k, k).into_owned(),
        })
    }

    /// `W(A, B)(t_i) = A'* B - A* B'` at sample `i`.
    pub fn wronskian(&self, i: usize) -> DMatrix<f64> {
        self.a_prime[i].transpose() * &self.b[i] - self.a[i].transpose() * &self.b_prime[i]
    }

    /// Largest `|W(t) - I|` entry divided by `max(t, 1)` over all samples.
    pub fn wronskian_drift(&self) -> f64 {
        let id = DMatrix::<f64>::identity(self.dim(), self.dim());
        (0..self.times.len())
            .map(|i| (self.wronskian(i) - &id).amax() / self.times[i].max(1.0))
            .fold(0.0, f64::max)
    }

    /// Asymmetry of `A'A^{-1}` at `t > 0` (max entry of `U - U*`).
    pub fn sff_asymmetry(&self, t: f64) -> Result<f64> {
        let u = self.second_fundamental_form(t)?;
        Ok((&u - u.transpose()).amax())
    }

    /// `A'(t) A(t)^{-1}`.
    pub fn second_fundamental_form(&self, t: f64) -> Result<DMatrix<f64>> {
        if t <= 0.0 {
            return Err(HarmoniaError::Domain(format!("A is singular at t = {t}")));
        }
        let st = self.state_at(t)?;
        let inv = invert(&st.a)?;
        Ok(st.a_prime * inv)
    }

    /// Mean curvature of the geodesic sphere, `tr(A'(t) A(t)^{-1})`.
    pub fn riccati_trace(&self, t: f64) -> Result<f64> {
        Ok(self.second_fundamental_form(t)?.trace())
    }

    fn inv_ata(&self, u: f64) -> Result<DMatrix<f64>> {
        let a = self.state_at(u)?.a;
        invert(&(a.transpose() * a))
    }

    /// `∫_s^t (A*A)^{-1}` by composite Gauss–Legendre on panels of width
    /// at most 0.1, with `A` sampled through [`Self::state_at`].
    fn integral_inv_ata(&self, s: f64, t: f64) -> Result<DMatrix<f64>> {
        let k = self.dim();
        let mut acc = DMatrix::zeros(k, k);
        if t <= s {
            return Ok(acc);
        }
        let (x, w) = legendre_nodes(PANEL_NODES);
        let panels = ((t - s) / PANEL_WIDTH).ceil().max(1.0) as usize;
        let width = (t - s) / panels as f64;
        for p in 0..panels {
            let a = s + p as f64 * width;
            let mid = a + 0.5 * width;
            for (xi, wi) in x.iter().zip(&w) {
                acc += self.inv_ata(mid + 0.5 * width * xi)? * (0.5 * width * wi);
            }
        }
        Ok(acc)
    }

    /// `Q(s) - Q(t) = ∫_s^t (A*A)^{-1}(u) du` where `Q = A^{-1} B`.
    pub fn q_difference(&self, s: f64, t: f64) -> Result<DMatrix<f64>> {
        if s <= 0.0 {
            return Err(HarmoniaError::Domain(format!("s = {s} must be positive (A(0) = 0)")));
        }
        if s < self.step * (1.0 - 1e-12) {
            return Err(HarmoniaError::Domain(format!(
                "s = {s} is below one grid step {}",
                self.step
            )));
        }
        if s > t {
            return Err(HarmoniaError::Domain(format!("s = {s} exceeds t = {t}")));
        }
        if t > self.t_max() * (1.0 + 1e-14) {
            return Err(HarmoniaError::Domain(format!("t = {t} beyond t_max {}", self.t_max())));
        }
        self.integral_inv_ata(s, t)
    }

    /// `Q(t) = A(t)^{-1} B(t)` read directly off the trajectory.
    pub fn q(&self, t: f64) -> Result<DMatrix<f64>> {
        let st = self.state_at(t)?;
        Ok(invert(&st.a)? * st.b)
    }

    /// Closed-form tail `∫_T^∞ (A*A)^{-1}` from the dominant exponential of
    /// each eigen-direction: `2√-λ · e^{-2√-λ T}`.
    pub fn tail_inv_ata(&self, horizon: f64) -> Result<DMatrix<f64>> {
        let eig = SymmetricEigen::new(self.curvature.clone());
        let mut diag = DMatrix::zeros(self.dim(), self.dim());
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda >= 0.0 {
                return Err(HarmoniaError::NoStableSolution(lambda));
            }
            let k = (-lambda).sqrt();
            diag[(i, i)] = 2.0 * k * (-2.0 * k * horizon).exp();
        }
        Ok(&eig.eigenvectors * diag * eig.eigenvectors.transpose())
    }

    /// Stable Jacobi tensor `S(t) = A(t) ∫_t^∞ (A*A)^{-1}` and its derivative
    /// `S' = A' ∫_t^∞ (A*A)^{-1} - (A*)^{-1}`, with the integral truncated at
    /// `horizon` plus the closed-form tail.
    pub fn stable_tensor(&self, t: f64, horizon: f64) -> Result<StableTensor> {
        if !(t > 0.0 && t < horizon) {
            return Err(HarmoniaError::Domain(format!("need 0 < t < T, got t = {t}, T = {horizon}")));
        }
        if horizon > self.t_max() * (1.0 + 1e-14) {
            return Err(HarmoniaError::Domain(format!(
                "horizon {horizon} beyond t_max {}",
                self.t_max()
            )));
        }
        let tail = self.tail_inv_ata(horizon)?;
        let integral = self.integral_inv_ata(t, horizon)? + tail;
        let st = self.state_at(t)?;
        let s = &st.a * &integral;
        let s_prime = &st.a_prime * &integral - invert(&st.a.transpose())?;
        Ok(StableTensor { s, s_prime })
    }

    /// Residual of `A'A^{-1} - S'S^{-1} = (A^{-1})* (S'(0) - S'_t(0))^{-1} A^{-1}`
    /// (max entry). The right side uses `S'(0) - S'_t(0) = Q(t) - Q(∞)`,
    /// taken from the `B` tensor, so it is independent of the quadrature that
    /// builds `S`.
    pub fn stable_identity_residual(&self, t: f64, horizon: f64) -> Result<f64> {
        let st = self.stable_tensor(t, horizon)?;
        let lhs = self.second_fundamental_form(t)? - &st.s_prime * invert(&st.s)?;
        let gap = self.q(t)? - self.q(horizon)? + self.tail_inv_ata(horizon)?;
        let a_inv = invert(&self.state_at(t)?.a)?;
        let rhs = a_inv.transpose() * invert(&gap)? * a_inv;
        Ok((lhs - rhs).amax())
    }
}

fn invert(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| HarmoniaError::Domain("singular Jacobi tensor".into()))
}

/// `|det(Q(s) - Q(t)) - f(t-s) / (f(t) f(s))|`.
pub fn check_det_identity(
    traj: &JacobiTrajectory,
    density: &dyn Fn(f64) -> f64,
    s: f64,
    t: f64,
) -> Result<f64> {
    let q = traj.q_difference(s, t)?;
    let expected = density(t - s) / (density(t) * density(s));
    Ok((q.determinant() - expected).abs())
}

/// Diagonal curvature operator from `(eigenvalue, multiplicity)` pairs.
pub fn diagonal_curvature(eigen: &[(f64, usize)]) -> DMatrix<f64> {
    let diag: Vec<f64> = eigen
        .iter()
        .flat_map(|&(l, m)| std::iter::repeat_n(l, m))
        .collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// Tabulated scalar Jacobi solution `y'' + λ y = 0`, `y(0) = 0`, `y'(0) = 1`.
///
/// Lookups between nodes take one RK4 sub-step; lookups past the end keep
/// stepping from the last node.
#[derive(Debug, Clone)]
pub struct ScalarJacobiTable {
    pub lambda: f64,
    step: f64,
    y: Vec<f64>,
    yp: Vec<f64>,
}

impl ScalarJacobiTable {
    pub fn new(lambda: f64, r_max: f64, step: f64) -> Self {
        let n = (r_max / step).ceil() as usize;
        let mut y = Vec::with_capacity(n + 1);
        let mut yp = Vec::with_capacity(n + 1);
        let (mut cy, mut cp) = (0.0, 1.0);
        for _ in 0..=n {
            y.push(cy);
            yp.push(cp);
            (cy, cp) = rk4_scalar(lambda, cy, cp, step);
        }
        ScalarJacobiTable { lambda, step, y, yp }
    }

    pub fn r_max(&self) -> f64 {
        (self.y.len() - 1) as f64 * self.step
    }

    /// `(y(r), y'(r))` for `r ≥ 0`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let last = self.y.len() - 1;
        let i = ((r / self.step).floor() as usize).min(last);
        let (mut y, mut yp) = (self.y[i], self.yp[i]);
        let mut t = i as f64 * self.step;
        while r - t > self.step {
            (y, yp) = rk4_scalar(self.lambda, y, yp, self.step);
            t += self.step;
        }
        let dt = r - t;
        if dt > 0.0 {
            (y, yp) = rk4_scalar(self.lambda, y, yp, dt);
        }
        (y, yp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(l: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, l)
    }

    #[test]
    fn scalar_negative_curvature_gives_sinh() {
        let tr = integrate(&scalar(-1.0), 3.0, 1e-3).unwrap();
        for (i, t) in tr.times.iter().enumerate().step_by(97) {
            assert!((tr.a[i][(0, 0)] - t.sinh()).abs() <= 1e-8 * t.sinh().max(1.0));
        }
        let st = tr.state_at(2.345_678).unwrap();
        assert!((st.a[(0, 0)] - 2.345_678f64.sinh()).abs() < 1e-8);
    }

    #[test]
    fn flat_operator_gives_linear_tensor() {
        let tr = integrate(&DMatrix::zeros(2, 2), 2.0, 1e-3).unwrap();
        let st = tr.state_at(1.5).unwrap();
        assert!((st.a - DMatrix::identity(2, 2) * 1.5).amax() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let nonsym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(integrate(&nonsym, 1.0, 1e-3).is_err());
        assert!(integrate(&scalar(-1.0), 1.0, 0.5).is_err());
        let tr = integrate(&scalar(-1.0), 2.0, 1e-3).unwrap();
        assert!(tr.q_difference(0.0, 1.0).is_err());
        assert!(tr.q_difference(1.5, 1.0).is_err());
        assert!(tr.riccati_trace(0.0).is_err());
    }

    #[test]
    fn q_difference_of_equal_times_is_zero() {
        let tr = integrate(&scalar(-1.0), 2.0, 1e-3).unwrap();
        assert_eq!(tr.q_difference(1.0, 1.0).unwrap().amax(), 0.0);
    }

    #[test]
    fn flat_q_difference_is_harmonic_series() {
        let tr = integrate(&scalar(0.0), 2.0, 1e-3).unwrap();
        assert!((tr.q_difference(1.0, 2.0).unwrap()[(0, 0)] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn stable_tensor_requires_negative_spectrum() {
        let tr = integrate(&scalar(0.0), 3.0, 1e-3).unwrap();
        assert!(matches!(
            tr.stable_tensor(1.0, 2.0),
            Err(HarmoniaError::NoStableSolution(_))
        ));
    }

    #[test]
    fn scalar_table_matches_closed_form() {
        let tab = ScalarJacobiTable::new(-4.0, 10.0, 1e-3);
        for r in [0.0005, 0.3, 2.0, 9.99, 12.5] {
            let (y, yp) = tab.eval(r);
            let exact = (2.0 * r).sinh() / 2.0;
            assert!((y - exact).abs() <= 1e-10 * exact, "r = {r}");
            assert!((yp - (2.0 * r).cosh()).abs() <= 1e-10 * (2.0 * r).cosh());
        }
    }
}
