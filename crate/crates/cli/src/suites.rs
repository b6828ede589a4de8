//! Verification suites. Each suite is a list of independent sections whose
//! checks are concatenated in a fixed order, so serial and parallel runs
//! give identical reports.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::str::FromStr;
use std::thread;

use harmonia::boundary::{
    ball_model_map, cos_mode, dirichlet_solve, gradient_integral_check, h_v, hyperbolic_laplacian, mean_value_at_infinity,
    nodes_for_accuracy, radon_nikodym, standard_basis, visibility_measure,
};
use harmonia::disk::{
    self, bt_map, busemann, distance, divergence_check, geodesic_between, geodesic_ray, gromov_product, jacobian_bt,
    sphere_hit, BoundaryAngle, DiskPoint,
};
use harmonia::green::{bump, martin_limit, verify_fundamental, GreenKernel};
use harmonia::jacobi::{check_det_identity, diagonal_curvature, integrate, DEFAULT_STEP};
use harmonia::model_catalog::unit_sphere_volume;
use harmonia::numdiff::{derivative, second_derivative};
use harmonia::quadrature::{circle_mean, integrate as quad, Tolerance};
use harmonia::radial::{
    check_density_inequality, check_mu_properties, horosphere_scalar_curvature, mu, radial_laplacian, sphere_eigenvalue,
    sphere_scalar_curvature, spherical_mean_check, RadialFunction, EQUALITY_TOL,
};
use harmonia::{HarmoniaError, ModelSpace};
use num_complex::Complex64;

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{timestamp, Check, Row, VerificationReport};
use crate::space::{describe, SpaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Radial,
    Jacobi,
    Green,
    Disk,
    Poisson,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Radial => "radial",
            Suite::Jacobi => "jacobi",
            Suite::Green => "green",
            Suite::Disk => "disk",
            Suite::Poisson => "poisson",
            Suite::All => "all",
        }
    }

    /// Whether the suite reads `--space`.
    pub fn needs_space(&self) -> bool {
        !matches!(self, Suite::Disk | Suite::Poisson)
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "radial" => Suite::Radial,
            "jacobi" => Suite::Jacobi,
            "green" => Suite::Green,
            "disk" => Suite::Disk,
            "poisson" => Suite::Poisson,
            "all" => Suite::All,
            _ => {
                return Err(CliError::Unknown {
                    what: "suite",
                    name: s.into(),
                    expected: "radial, jacobi, green, disk, poisson, all",
                })
            }
        })
    }
}

/// Checks and data rows from one section of a suite.
#[derive(Debug, Default)]
pub struct Section {
    pub checks: Vec<Check>,
    pub rows: Vec<Row>,
}

type Task<'a> = Box<dyn Fn() -> Result<Section> + Send + Sync + 'a>;

fn run_tasks(tasks: &[Task<'_>], parallel: bool) -> Result<Vec<Section>> {
    if !parallel {
        return tasks.iter().map(|t| t()).collect();
    }
    thread::scope(|scope| {
        let handles: Vec<_> = tasks.iter().map(|t| scope.spawn(t)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|p| std::panic::resume_unwind(p)))
            .collect()
    })
}

/// Result of [`run_suite`]: the report plus the data rows for `--csv`.
#[derive(Debug)]
pub struct SuiteOutput {
    pub report: VerificationReport,
    pub rows: Vec<Row>,
}

pub fn run_suite(suite: Suite, spec: &SpaceSpec, cfg: &Config) -> Result<SuiteOutput> {
    let space = if suite.needs_space() { Some(spec.build()?) } else { None };
    let mut skipped = Vec::new();
    let mut tasks: Vec<Task<'_>> = Vec::new();
    if let Some(space) = &space {
        if matches!(suite, Suite::Radial | Suite::All) {
            tasks.push(Box::new(move || radial_mu(space, cfg)));
            tasks.push(Box::new(move || radial_box(space, cfg)));
            tasks.push(Box::new(move || radial_curvature(space, cfg)));
        }
        if matches!(suite, Suite::Jacobi | Suite::All) {
            tasks.push(Box::new(move || jacobi_tensors(space, cfg)));
            if space.curvature_eigen.iter().all(|&(l, _)| l < 0.0) {
                tasks.push(Box::new(move || jacobi_stable(space, cfg)));
            } else {
                skipped.push("jacobi.stable: no decaying stable Jacobi tensor without strictly negative curvature".into());
            }
        }
        if matches!(suite, Suite::Green | Suite::All) {
            match GreenKernel::new(space) {
                Ok(kernel) => tasks.push(Box::new(move || green_checks(&kernel, cfg))),
                // a missing kernel is a property of the space, not a failed check
                Err(e @ HarmoniaError::NoGreenKernel(_)) if suite == Suite::All => skipped.push(format!("green: {e}")),
                Err(e) => return Err(e.into()),
            }
        }
    }
    if matches!(suite, Suite::Disk | Suite::All) {
        tasks.push(Box::new(disk_metric));
        tasks.push(Box::new(disk_boundary));
    }
    if matches!(suite, Suite::Poisson | Suite::All) {
        tasks.push(Box::new(move || poisson_solver(cfg)));
        tasks.push(Box::new(move || poisson_harmonic_maps(cfg)));
    }
    let sections = run_tasks(&tasks, cfg.parallel)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for s in sections {
        checks.extend(s.checks);
        rows.extend(s.rows);
    }
    let report = VerificationReport {
        schema: crate::report::SCHEMA,
        suite: suite.as_str().into(),
        space: space.as_ref().map(describe).unwrap_or_else(|| "disk".into()),
        timestamp: timestamp(),
        config: cfg.clone(),
        skipped,
        checks,
    };
    Ok(SuiteOutput { report, rows })
}

/// Finite-difference step relative to `r` near the origin, where radial
/// quantities vary on the scale of `r`.
fn fd_step(r: f64) -> f64 {
    1e-3 * r.min(1.0)
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

fn positive_grid(cfg: &Config) -> Result<Vec<f64>> {
    let g: Vec<f64> = cfg.grid.points().into_iter().filter(|&r| r > 0.0).collect();
    if g.is_empty() {
        return Err(CliError::Parse(format!("grid {} has no positive points", cfg.grid)));
    }
    Ok(g)
}

/// Deterministic points filling the disk of the given radius evenly.
fn spiral(count: usize, radius: f64) -> Vec<DiskPoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let r = radius * ((k as f64 + 0.5) / count as f64).sqrt();
            DiskPoint::new(Complex64::from_polar(r, golden * k as f64)).expect("inside the disk")
        })
        .collect()
}

fn radial_mu(space: &ModelSpace, cfg: &Config) -> Result<Section> {
    let grid = positive_grid(cfg)?;
    let n = space.dim_n as f64;
    let rep = check_mu_properties(space, &grid)?;
    let mut s = Section::default();
    s.checks.push(Check::close(
        "radial.mu_bounds",
        "largest violation of μ ≥ 0, 0 ≤ μ' ≤ 1, -μ''μ ≤ 1/4 on the grid",
        rep.max_violation(),
        0.0,
        cfg.tol("radial.mu_bounds", 1e-6),
    ));
    s.checks.push(Check::close(
        "radial.mu_origin_slope",
        "μ'(0⁺) = 1/n",
        rep.derivative_at_origin,
        1.0 / n,
        cfg.tol("radial.mu_origin_slope", 1e-6),
    ));
    s.checks.push(Check::close(
        "radial.mu_origin_third",
        "μ'''(0⁺) = 2 Ric/(n(n+2))",
        rep.third_derivative_at_origin,
        rep.third_derivative_reference,
        cfg.tol("radial.mu_origin_third", 1e-4),
    ));
    if space.has_exponential_growth() {
        let h = space.mean_curvature_h;
        s.checks.push(Check::close(
            "radial.mu_limit",
            format!("μ({}) = 1/h", cfg.horizon),
            mu(space, cfg.horizon)?,
            1.0 / h,
            cfg.tol("radial.mu_limit", 1e-6),
        ));
    }
    let m = |x: f64| mu(space, x).unwrap_or(f64::NAN);
    let mut ode = Vec::new();
    let mut profile = Vec::new();
    for &r in &grid {
        let h = fd_step(r);
        let v = m(r);
        let lhs = derivative(m, r, h) + space.log_derivative(r) * v;
        ode.push(lhs - 1.0);
        s.rows.push(Row { r, quantity: "mu_ode", value: lhs, reference: 1.0, residual: lhs - 1.0 });
        // μ'' + ((f'/f) μ)' = 0, the radial part of Δh_v = 0
        let hh = 1e-2f64.min(0.25 * r);
        let d2 = second_derivative(m, r, hh);
        let dq = derivative(|x| space.log_derivative(x) * m(x), r, hh);
        profile.push(d2 + dq);
        s.rows.push(Row { r, quantity: "h_v_profile", value: d2 + dq, reference: 0.0, residual: d2 + dq });
    }
    s.checks.push(Check::close(
        "radial.mu_ode",
        "max |μ' + (f'/f)μ - 1| on the grid",
        max_abs(ode),
        0.0,
        cfg.tol("radial.mu_ode", 1e-8),
    ));
    s.checks.push(Check::close(
        "radial.h_v_profile",
        "max |μ'' + ((f'/f)μ)'| on the grid",
        max_abs(profile),
        0.0,
        cfg.tol("radial.h_v_profile", 1e-7),
    ));
    let sm = spherical_mean_check(space, &RadialFunction::mu(space), &grid)?;
    s.checks.push(Check::close(
        "radial.mu_mean_value",
        "μ∘d is subharmonic and nondecreasing on the grid (largest drop)",
        sm.max_decrease + sm.not_subharmonic_at.len() as f64,
        0.0,
        cfg.tol("radial.mu_mean_value", 1e-7),
    ));
    Ok(s)
}

fn radial_box(space: &ModelSpace, cfg: &Config) -> Result<Section> {
    let grid = positive_grid(cfg)?;
    let rep = check_density_inequality(space, &grid)?;
    let k = (space.dim_n - 1) as f64;
    let mut s = Section::default();
    s.rows = rep
        .residuals
        .iter()
        .map(|&(r, res)| Row { r, quantity: "density_inequality", value: res + k, reference: k, residual: res })
        .collect();
    // equality exactly for constant curvature
    if space.curvature_eigen.len() <= 1 {
        s.checks.push(Check::close(
            "radial.box_equality",
            "-f^{2/(n-1)}(f'/f)' = n-1 on the grid",
            rep.max_abs_residual,
            0.0,
            cfg.tol("radial.box_equality", EQUALITY_TOL),
        ));
    } else {
        s.checks.push(Check::at_least(
            "radial.box_strict",
            "-f^{2/(n-1)}(f'/f)' - (n-1) > 0 on the grid (smallest residual)",
            rep.min_residual,
            cfg.tol("radial.box_strict", EQUALITY_TOL),
        ));
    }
    Ok(s)
}

fn radial_curvature(space: &ModelSpace, cfg: &Config) -> Result<Section> {
    let grid = positive_grid(cfg)?;
    let mut s = Section::default();
    let mut smallest = f64::INFINITY;
    let mut mismatch = Vec::new();
    for &r in &grid {
        let lambda = sphere_eigenvalue(space, r)?;
        let fd = -derivative(|x| space.log_derivative(x), r, fd_step(r));
        smallest = smallest.min(lambda);
        mismatch.push((lambda - fd) / lambda);
        s.rows.push(Row { r, quantity: "sphere_eigenvalue", value: lambda, reference: fd, residual: lambda - fd });
    }
    s.checks.push(Check::at_least(
        "radial.eigenvalue_positive",
        "-(f'/f)' > 0 on the grid (smallest value)",
        smallest,
        f64::MIN_POSITIVE,
    ));
    s.checks.push(Check::close(
        "radial.eigenvalue_fd",
        "max relative gap between -(f'/f)' and a finite difference of f'/f",
        max_abs(mismatch),
        0.0,
        cfg.tol("radial.eigenvalue_fd", 1e-6),
    ));
    if space.has_exponential_growth() {
        s.checks.push(Check::at_most(
            "radial.eigenvalue_decay",
            "-(f'/f)'(30) ≤ 1e-10",
            sphere_eigenvalue(space, 30.0)?,
            cfg.tol("radial.eigenvalue_decay", 1e-10),
        ));
    }
    if space.dim_n >= 3 {
        let horo = horosphere_scalar_curvature(space)?;
        s.checks.push(Check::at_most(
            "radial.horosphere_scal_sign",
            "scal of horospheres h² + (n-1)Ric ≤ 0",
            horo,
            cfg.tol("radial.horosphere_scal_sign", 1e-12),
        ));
        let far = sphere_scalar_curvature(space, cfg.horizon)?;
        if space.has_exponential_growth() {
            s.checks.push(Check::close(
                "radial.sphere_to_horosphere",
                format!("scal of S_r at r = {} against horospheres", cfg.horizon),
                far,
                horo,
                cfg.tol("radial.sphere_to_horosphere", 1e-6),
            ));
        } else {
            // flat: round spheres, which only approach flat horospheres like 1/r²
            let n = space.dim_n as f64;
            s.checks.push(Check::relative(
                "radial.sphere_round",
                format!("scal of S_r at r = {} against (n-1)(n-2)/r²", cfg.horizon),
                far,
                (n - 1.0) * (n - 2.0) / (cfg.horizon * cfg.horizon),
                cfg.tol("radial.sphere_round", 1e-12),
            ));
        }
        for &r in &grid {
            let v = sphere_scalar_curvature(space, r)?;
            s.rows.push(Row { r, quantity: "sphere_scalar_curvature", value: v, reference: horo, residual: v - horo });
        }
    }
    Ok(s)
}

fn jacobi_tensors(space: &ModelSpace, cfg: &Config) -> Result<Section> {
    let traj = integrate(&diagonal_curvature(&space.curvature_eigen), cfg.tmax, DEFAULT_STEP)?;
    let mut s = Section::default();
    s.checks.push(Check::close(
        "jacobi.wronskian",
        format!("max |W(A,B) - I| on [0, {}]", cfg.tmax),
        traj.wronskian_drift(),
        0.0,
        cfg.tol("jacobi.wronskian", 1e-7) * cfg.tmax.max(1.0),
    ));
    let times: Vec<f64> = cfg.grid.points().into_iter().filter(|&t| t > 0.0 && t <= cfg.tmax).collect();
    let (mut asym, mut det_gap, mut trace_gap) = (Vec::new(), Vec::new(), Vec::new());
    for &t in &times {
        asym.push(traj.sff_asymmetry(t)?);
        let det = traj.state_at(t)?.a.determinant();
        let f = space.density(t).f;
        det_gap.push(det / f - 1.0);
        s.rows.push(Row { r: t, quantity: "det_a", value: det, reference: f, residual: det / f - 1.0 });
        let tr = traj.riccati_trace(t)?;
        let q = space.log_derivative(t);
        trace_gap.push(tr - q);
        s.rows.push(Row { r: t, quantity: "riccati_trace", value: tr, reference: q, residual: tr - q });
    }
    s.checks.push(Check::close(
        "jacobi.sff_symmetry",
        "max asymmetry of A'A^{-1} on the grid",
        max_abs(asym),
        0.0,
        cfg.tol("jacobi.sff_symmetry", 1e-7),
    ));
    s.checks.push(Check::close(
        "jacobi.det_density",
        "max |det A / f - 1| on the grid",
        max_abs(det_gap),
        0.0,
        cfg.tol("jacobi.det_density", 1e-8),
    ));
    s.checks.push(Check::close(
        "jacobi.riccati_trace",
        "max |tr(A'A^{-1}) - f'/f| on the grid",
        max_abs(trace_gap),
        0.0,
        cfg.tol("jacobi.riccati_trace", 1e-7),
    ));
    let f = |r: f64| space.density(r).f;
    for (a, b) in [(0.5, 1.0), (1.0, 2.0), (0.5, 2.5)] {
        if b <= cfg.tmax {
            s.checks.push(Check::close(
                format!("jacobi.det_identity[s={a},t={b}]"),
                "det(Q(s) - Q(t)) = f(t-s)/(f(t)f(s))",
                check_det_identity(&traj, &f, a, b)?,
                0.0,
                cfg.tol("jacobi.det_identity", 1e-6),
            ));
        }
    }
    Ok(s)
}

fn jacobi_stable(space: &ModelSpace, cfg: &Config) -> Result<Section> {
    let horizon = cfg.horizon;
    let traj = integrate(&diagonal_curvature(&space.curvature_eigen), horizon, DEFAULT_STEP)?;
    let mut s = Section::default();
    let t = 0.5 * horizon;
    let st = traj.stable_tensor(t, horizon)?;
    let inv = st.s.clone().try_inverse().ok_or_else(|| HarmoniaError::Domain("singular stable tensor".into()))?;
    s.checks.push(Check::close(
        "jacobi.stable_trace",
        format!("-tr(S'S^{{-1}})({t}) = h"),
        -(&st.s_prime * inv).trace(),
        space.mean_curvature_h,
        cfg.tol("jacobi.stable_trace", 1e-6),
    ));
    for t in [1.0, 2.0] {
        s.checks.push(Check::close(
            format!("jacobi.stable_identity[t={t}]"),
            "A'A^{-1} - S'S^{-1} = (A^{-1})*(S'(0) - S'_t(0))^{-1}A^{-1}",
            traj.stable_identity_residual(t, horizon)?,
            0.0,
            cfg.tol("jacobi.stable_identity", 1e-5),
        ));
    }
    Ok(s)
}

fn green_checks(kernel: &GreenKernel, cfg: &Config) -> Result<Section> {
    let space = &kernel.space;
    let grid = positive_grid(cfg)?;
    let mut s = Section::default();
    s.checks.push(Check::close(
        "green.fundamental",
        "|ω_n ∫ G̃ Δφ f dr + φ(0)| for the bump (1-r²)²",
        verify_fundamental(kernel, &bump(), 1.0)?,
        0.0,
        cfg.tol("green.fundamental", 1e-6),
    ));
    let mut deriv_gap = Vec::new();
    let mut lap = Vec::new();
    let mut values = Vec::new();
    let g = kernel.radial_function();
    for &r in &grid {
        let fd = derivative(|x| kernel.value(x).unwrap_or(f64::NAN), r, fd_step(r));
        let exact = kernel.derivative(r);
        deriv_gap.push((fd - exact) / exact);
        s.rows.push(Row { r, quantity: "green_derivative", value: fd, reference: exact, residual: fd - exact });
        values.push(kernel.value(r)?);
        if (0.2..=10.0).contains(&r) {
            let scale = (exact * space.log_derivative(r)).abs().max(1.0);
            lap.push(radial_laplacian(space, &g, r)? / scale);
        }
    }
    s.checks.push(Check::close(
        "green.derivative",
        "max |G̃'_fd / (-1/(ω_n f)) - 1| on the grid",
        max_abs(deriv_gap),
        0.0,
        cfg.tol("green.derivative", 1e-8),
    ));
    if !lap.is_empty() {
        s.checks.push(Check::close(
            "green.harmonic",
            "max scaled |ΔG̃| on the grid within [0.2, 10]",
            max_abs(lap),
            0.0,
            cfg.tol("green.harmonic", 1e-7),
        ));
    }
    let drop = values.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    if values.len() > 1 {
        s.checks.push(Check::at_least("green.decreasing", "smallest G̃(r_i) - G̃(r_{i+1})", drop, f64::MIN_POSITIVE));
    }
    if space.name == "euclidean" {
        let n = space.dim_n as f64;
        let worst = max_abs(grid.iter().map(|&r| {
            let exact = 1.0 / ((n - 2.0) * unit_sphere_volume(space.dim_n) * r.powf(n - 2.0));
            kernel.value(r).map(|v| v / exact - 1.0).unwrap_or(f64::NAN)
        }));
        s.checks.push(Check::close(
            "green.euclidean_closed_form",
            "max relative gap to 1/((n-2)ω_n r^{n-2})",
            worst,
            0.0,
            cfg.tol("green.euclidean_closed_form", 1e-10),
        ));
    }
    let (a, h) = (cfg.martin_a, space.mean_curvature_h);
    if h > 0.0 {
        s.checks.push(Check::close(
            "green.martin",
            format!("G̃(s+a)/G̃(s) at a = {a}, s = {} against e^(-ha)", cfg.martin_s),
            martin_limit(kernel, a, cfg.martin_s)?,
            (-h * a).exp(),
            cfg.tol("green.martin", 1e-4),
        ));
    } else {
        s.checks.push(Check::close(
            "green.martin",
            format!("G̃(s+a)/G̃(s) at a = {a}, s = 1e4 against 1"),
            martin_limit(kernel, a, 1e4)?,
            1.0,
            cfg.tol("green.martin", 1e-3),
        ));
    }
    Ok(s)
}

/// Sampled distance from `x` to the segment `[a, b]`.
fn distance_to_segment(x: &DiskPoint, a: &DiskPoint, b: &DiskPoint) -> f64 {
    let len = distance(a, b);
    (0..=200)
        .map(|i| distance(x, &geodesic_between(a, b, len * i as f64 / 200.0)))
        .fold(f64::INFINITY, f64::min)
}

fn disk_metric() -> Result<Section> {
    let mut s = Section::default();
    let (a, b) = (DiskPoint::from_re_im(0.5, 0.0)?, DiskPoint::from_re_im(-0.5, 0.0)?);
    let length = quad(|x| 2.0 / (1.0 - x * x), -0.5, 0.5, Tolerance::new(1e-14, 1e-14))?;
    s.checks.push(Check::close(
        "disk.distance",
        "d(0.5, -0.5) against the metric length of the diameter",
        distance(&a, &b),
        length,
        1e-12,
    ));
    let points = spiral(20, 0.9);
    let speed = max_abs(points.iter().enumerate().map(|(k, p)| {
        let t = 0.5 + k as f64;
        distance(p, &geodesic_ray(p, 0.7 * k as f64, t)) - t
    }));
    s.checks.push(Check::close("disk.ray_speed", "max |d(p, c(t)) - t| over 20 rays", speed, 0.0, 1e-10));
    let limit = max_abs(points.iter().enumerate().map(|(k, z)| {
        let xi = BoundaryAngle::new(2.3 * k as f64);
        let ray = geodesic_ray(&DiskPoint::origin(), xi.theta, 30.0);
        busemann(&xi, z) - (distance(z, &ray) - 30.0)
    }));
    s.checks.push(Check::close("disk.busemann_limit", "max |b_ξ(z) - (d(z, c(30)) - 30)|", limit, 0.0, 1e-8));
    let h = 1e-5;
    let grad = max_abs(points.iter().enumerate().map(|(k, p)| {
        let xi = BoundaryAngle::new(1.1 * k as f64);
        let z = p.z();
        let b = |w: Complex64| DiskPoint::new(w).map(|q| busemann(&xi, &q)).unwrap_or(f64::NAN);
        let bx = (b(z + h) - b(z - h)) / (2.0 * h);
        let by = (b(z + Complex64::new(0.0, h)) - b(z - Complex64::new(0.0, h))) / (2.0 * h);
        0.5 * (1.0 - z.norm_sqr()) * bx.hypot(by) - 1.0
    }));
    s.checks.push(Check::close("disk.busemann_gradient", "max ||grad b_ξ| - 1| at 20 points", grad, 0.0, 1e-6));
    let z = DiskPoint::from_re_im(0.0, 0.3)?;
    s.checks.push(Check::close(
        "disk.busemann_closed_form",
        "b_1(0.3i) = ln(1.09/0.91)",
        busemann(&BoundaryAngle::new(0.0), &z),
        (1.09f64 / 0.91).ln(),
        1e-14,
    ));
    let tri = spiral(150, 0.99);
    let mut thick = 0.0f64;
    for v in tri.chunks(3) {
        for i in 0..3 {
            let (a, b, c) = (&v[i], &v[(i + 1) % 3], &v[(i + 2) % 3]);
            let len = distance(a, b);
            for k in 0..=10 {
                let x = geodesic_between(a, b, len * k as f64 / 10.0);
                thick = thick.max(distance_to_segment(&x, b, c).min(distance_to_segment(&x, c, a)));
            }
        }
    }
    s.checks.push(Check::at_most("disk.thin_triangles", "largest distance from a side to the other two (δ = 4)", thick, 4.0));
    let (x, y, p) = (DiskPoint::from_re_im(0.9, 0.0)?, DiskPoint::from_re_im(0.0, 0.9)?, DiskPoint::origin());
    let g = gromov_product(&x, &y, &p);
    let d = distance_to_segment(&p, &x, &y);
    s.checks.push(Check::at_least("disk.gromov_lower", "d(p, [x, y]) ≥ (x, y)_p", d + 1e-3, g));
    s.checks.push(Check::at_most("disk.gromov_upper", "d(p, [x, y]) ≤ (x, y)_p + 32δ", d, g + 128.0));
    Ok(s)
}

fn disk_boundary() -> Result<Section> {
    let mut s = Section::default();
    let p = DiskPoint::origin();
    let q = DiskPoint::from_re_im(0.2, 0.0)?;
    let (_, hit) = sphere_hit(&p, &q, 0.0, 3.0)?;
    s.checks.push(Check::close(
        "disk.sphere_hit",
        "collinear exit parameter 3 - 2 artanh 0.2",
        hit,
        3.0 - 2.0 * 0.2f64.atanh(),
        1e-10,
    ));
    let (v, t, h) = (FRAC_PI_2, 3.0, 1e-4);
    let mut diff = bt_map(&p, &q, v + h, t)? - bt_map(&p, &q, v - h, t)?;
    diff -= TAU * (diff / TAU).round();
    s.checks.push(Check::close(
        "disk.jacobian",
        "Jac B_t against a finite difference of B_t (t = 3)",
        jacobian_bt(&p, &q, v, t)?,
        (diff / (2.0 * h)).abs(),
        1e-5,
    ));
    let mut failure = None;
    let lhs = circle_mean(
        |v| match (bt_map(&p, &q, v, 4.0), jacobian_bt(&p, &q, v, 4.0)) {
            (Ok(b), Ok(j)) => b.cos() * j,
            (Err(e), _) | (_, Err(e)) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        256,
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    s.checks.push(Check::close(
        "disk.change_of_variables",
        "mean of cos(B_t) Jac B_t against the mean of cos (t = 4)",
        lhs,
        circle_mean(f64::cos, 256),
        1e-5,
    ));
    let mut margin = f64::INFINITY;
    for i in 0..=38 {
        let t = 1.0 + 0.5 * i as f64;
        for j in 1..=16 {
            let d = divergence_check(PI * j as f64 / 16.0, t)?;
            margin = margin.min(d.actual - d.bound);
            if j == 8 {
                s.rows.push(Row {
                    r: t,
                    quantity: "divergence",
                    value: d.actual,
                    reference: d.bound,
                    residual: d.actual - d.bound,
                });
            }
        }
    }
    s.checks.push(Check::at_least("disk.divergence", "min d(c_v(t), c_w(t)) - a(t)∠(v, w) on t ∈ [1, 20]", margin, 0.0));
    Ok(s)
}

fn poisson_solver(cfg: &Config) -> Result<Section> {
    let nodes = cfg.nodes;
    let mut s = Section::default();
    let points = spiral(40, 0.9);
    let mut mass = 0.0f64;
    let mut one = 0.0f64;
    let mut cos = 0.0f64;
    for p in &points {
        mass = mass.max((visibility_measure(p, nodes)?.total_mass() - 1.0).abs());
        one = one.max((dirichlet_solve(|_| 1.0, p, nodes)? - 1.0).abs());
        cos = cos.max((dirichlet_solve(cos_mode(1.0), p, nodes)? - p.z().re).abs());
    }
    s.checks.push(Check::close("poisson.mass", "max |μ_z(∂D) - 1|", mass, 0.0, cfg.tol("poisson.mass", 1e-12)));
    s.checks.push(Check::close("poisson.constant", "max |H_1 - 1|", one, 0.0, cfg.tol("poisson.constant", 1e-14)));
    s.checks.push(Check::close(
        "poisson.cos",
        format!("max |H_cos(z) - Re z| for |z| ≤ 0.9 at {nodes} nodes"),
        cos,
        0.0,
        cfg.tol("poisson.cos", 1e-8),
    ));
    let mut lap = 0.0f64;
    for k in 1..=3 {
        for p in spiral(20, 0.8) {
            let u = |w: Complex64| {
                DiskPoint::new(w).and_then(|q| dirichlet_solve(cos_mode(k as f64), &q, nodes)).unwrap_or(f64::NAN)
            };
            lap = lap.max(hyperbolic_laplacian(u, p.z(), 1e-3).abs());
        }
    }
    s.checks.push(Check::close(
        "poisson.harmonic",
        "max |Δ H_cos(kθ)| for k ≤ 3 at 20 points",
        lap,
        0.0,
        cfg.tol("poisson.harmonic", 1e-4),
    ));
    let phi = |th: f64| th.sin().abs();
    let mut edge = 0.0f64;
    for j in 0..16 {
        let xi = BoundaryAngle::new(TAU * j as f64 / 16.0 + 0.1);
        let p = DiskPoint::new(xi.point() * 0.99)?;
        let h = dirichlet_solve(|x: &BoundaryAngle| phi(x.theta), &p, nodes_for_accuracy(&p, 10.0).max(nodes))?;
        edge = edge.max((h - phi(xi.theta)).abs());
    }
    s.checks.push(Check::close(
        "poisson.boundary_values",
        "max |H_φ(0.99ξ) - φ(ξ)| for φ = |sin θ|",
        edge,
        0.0,
        cfg.tol("poisson.boundary_values", 0.02),
    ));
    let (a, b, c) = (DiskPoint::from_re_im(0.3, -0.5)?, DiskPoint::from_re_im(-0.7, 0.2)?, DiskPoint::from_re_im(0.1, 0.85)?);
    let cocycle = max_abs(
        visibility_measure(&DiskPoint::origin(), nodes)?
            .nodes
            .iter()
            .map(|xi| radon_nikodym(&a, &b, xi) * radon_nikodym(&b, &c, xi) / radon_nikodym(&a, &c, xi) - 1.0),
    );
    s.checks.push(Check::close(
        "poisson.rn_cocycle",
        "dμ_p/dμ_q · dμ_q/dμ_r = dμ_p/dμ_r on the nodes",
        cocycle,
        0.0,
        cfg.tol("poisson.rn_cocycle", 1e-10),
    ));
    let vector = max_abs(spiral(20, 0.9).iter().map(|z| {
        let w = |th: f64| (-busemann(&BoundaryAngle::new(th), z)).exp();
        let x = circle_mean(|th| w(th) * th.cos(), 2048);
        let y = circle_mean(|th| w(th) * th.sin(), 2048);
        // h μ(d(0, z)) w₀(z) with h = 1
        let r = disk::distance(&DiskPoint::origin(), z);
        let m = harmonia::model_catalog::make_space("real_hyperbolic", &harmonia::SpaceParams::dim(2))
            .and_then(|d| mu(&d, r))
            .unwrap_or(f64::NAN);
        let dir = z.z() / z.z().norm();
        (x - m * dir.re).abs().max((y - m * dir.im).abs())
    }));
    s.checks.push(Check::close(
        "poisson.vector_identity",
        "(1/ω₂)∫ e^{-b_w(z)} w dθ = h μ(d(0,z)) w₀(z)",
        vector,
        0.0,
        cfg.tol("poisson.vector_identity", 1e-6),
    ));
    Ok(s)
}

fn poisson_harmonic_maps(cfg: &Config) -> Result<Section> {
    let nodes = cfg.nodes;
    let mut s = Section::default();
    let mut ball = 0.0f64;
    for p in spiral(100, 0.99) {
        let f = ball_model_map(standard_basis(), &p)?;
        ball = ball.max((f[0] - p.z().re).abs()).max((f[1] - p.z().im).abs());
    }
    s.checks.push(Check::close(
        "poisson.ball_model",
        "max componentwise |F(z) - z| at 100 points",
        ball,
        0.0,
        cfg.tol("poisson.ball_model", 1e-10),
    ));
    let e1 = Complex64::new(1.0, 0.0);
    let c = gradient_integral_check(|q| h_v(e1, q).unwrap_or(f64::NAN), &DiskPoint::origin(), 0.0, 1.0)?;
    s.checks.push(Check::close(
        "poisson.gradient_h_v",
        "integral gradient formula for h_{e1} at 0, r = 1",
        c.lhs,
        c.rhs,
        cfg.tol("poisson.gradient_h_v", 1e-6),
    ));
    let u = |q: &DiskPoint| dirichlet_solve(cos_mode(2.0), q, nodes).unwrap_or(f64::NAN);
    let c = gradient_integral_check(u, &DiskPoint::from_re_im(0.2, 0.0)?, FRAC_PI_2, 0.8)?;
    s.checks.push(Check::close(
        "poisson.gradient_dirichlet",
        "integral gradient formula for H_cos(2θ) at 0.2, r = 0.8",
        c.lhs,
        c.rhs,
        cfg.tol("poisson.gradient_dirichlet", 1e-5),
    ));
    let h_cos = |z: Complex64| {
        DiskPoint::new(z)
            .and_then(|p| dirichlet_solve(cos_mode(1.0), &p, nodes_for_accuracy(&p, 12.0).max(nodes)))
            .unwrap_or(f64::NAN)
    };
    let arcs = [1.0, 5.0, 25.0, 125.0];
    let avg = mean_value_at_infinity(h_cos, &BoundaryAngle::new(0.0), &arcs)?;
    let errs: Vec<f64> = avg.iter().map(|v| (v - 1.0).abs()).collect();
    let decay = errs.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    s.checks.push(Check::at_least(
        "poisson.mean_value_decay",
        "horocycle averages of H_cos at ξ = 1 approach 1 monotonically",
        decay,
        f64::MIN_POSITIVE,
    ));
    // on the horocycle through 0, Re z = x²/(x² + 4), whose average is 1 - 2 atan(L/2)/L
    let exact = max_abs(errs.iter().zip(arcs).map(|(e, l)| e - 2.0 * (0.5 * l).atan() / l));
    s.checks.push(Check::close(
        "poisson.mean_value_arcs",
        "horocycle averages against 1 - 2 atan(L/2)/L",
        exact,
        0.0,
        cfg.tol("poisson.mean_value_arcs", 1e-8),
    ));
    for (l, v) in arcs.iter().zip(&avg) {
        s.rows.push(Row { r: *l, quantity: "horocycle_average", value: *v, reference: 1.0, residual: v - 1.0 });
    }
    Ok(s)
}
