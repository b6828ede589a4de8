use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use harmonia::boundary::{dirichlet_solve, mean_value_at_infinity, nodes_for_accuracy};
use harmonia::disk::{busemann, distance, gromov_product, BoundaryAngle, DiskPoint};
use harmonia::exp_poly::{fit, sample, FitCaps};
use harmonia::green::{bump, martin_limit, verify_fundamental, GreenKernel};
use harmonia::quadrature::circle_mean;
use harmonia_cli::parse;
use harmonia_cli::table::csv_number;
use harmonia_cli::{emit_table, run_suite, CliError, Config, Format, Overrides, Quantity, Result, SpaceSpec, Suite};
use serde_json::json;

#[derive(Parser)]
#[command(name = "harmonia", version, about = "Numerics on noncompact harmonic model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct SpaceArgs {
    /// euclidean, real_hyperbolic, complex_hyperbolic or rank1_model
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    /// Jacobi eigenvalues as λ:mult,... (rank1_model)
    #[arg(long, allow_hyphen_values = true)]
    eigen: Option<String>,
}

impl SpaceArgs {
    fn spec(&self) -> SpaceSpec {
        SpaceSpec { kind: self.space.clone(), dim: self.dim, eigen: self.eigen.clone() }
    }
}

#[derive(Args, Clone, Default)]
struct ConfigArgs {
    /// TOML config file; defaults to $HARMONIA_CONFIG
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid a:b:step
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
    /// Run independent checks on separate threads
    #[arg(long)]
    parallel: bool,
}

impl ConfigArgs {
    fn load(&self) -> Result<Config> {
        let flags = Overrides {
            grid: self.grid.clone(),
            tmax: self.tmax,
            horizon: self.horizon,
            nodes: self.nodes,
            parallel: self.parallel.then_some(true),
            ..Overrides::default()
        };
        Config::load(self.config.as_deref(), &flags)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: radial, jacobi, green, disk, poisson or all
    Verify {
        suite: String,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        config: ConfigArgs,
        /// Print the JSON report instead of the table
        #[arg(long)]
        json: bool,
        /// Also write the JSON report here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the data rows (r, quantity, value, reference, residual) here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tabulate density, mu, green, eigenvalue, scal_sphere or martin_ratio
    Emit {
        quantity: String,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Shift for martin_ratio
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a: f64,
        /// Output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Green's kernel at r and the fundamental-solution residual
    Green {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        r: f64,
    },
    /// Martin quotient G(s+a)/G(s) against e^(-ha)
    Martin {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        s: f64,
    },
    /// Poincaré disk geometry
    Disk {
        /// distance, busemann or gromov
        #[arg(long)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        /// Boundary angle for busemann
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<f64>,
        /// Base point for gromov; the origin when absent
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
    },
    /// Solve the Dirichlet problem at infinity at one point
    Dirichlet {
        /// cos(k*theta), sin(k*theta) or a constant
        #[arg(long, default_value = "cos(theta)")]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 512)]
        nodes: usize,
    },
    /// Averages of a harmonic extension over horocycle arcs, as CSV
    Meanvalue {
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        /// Half-lengths l1,l2,...
        #[arg(long)]
        arcs: String,
        #[arg(long, default_value = "cos(theta)")]
        phi: String,
    },
    /// Fit an exponential polynomial to a density, printed as JSON
    FitDensity {
        #[command(flatten)]
        space: SpaceArgs,
        /// Sample range a:b:step
        #[arg(long, default_value = "0:10:0.05")]
        range: String,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io { path: path.into(), source })
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.into(), source }
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from).map_err(stdout_err)?;
    writeln!(out).map_err(stdout_err)
}

fn disk_point(s: &str) -> Result<DiskPoint> {
    Ok(DiskPoint::new(parse::complex(s)?)?)
}

fn required<'a>(v: &'a Option<String>, flag: &str, op: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| CliError::Parse(format!("--op {op} needs --{flag}")))
}

/// Exit status: success, or a failed check.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { suite, space, config, json, report, csv } => {
            let suite: Suite = suite.parse()?;
            let cfg = config.load()?;
            let out = run_suite(suite, &space.spec(), &cfg)?;
            if let Some(path) = &report {
                let mut f = create(path)?;
                writeln!(f, "{}", out.report.to_json()).and_then(|_| f.flush()).map_err(io_at(path))?;
            }
            if let Some(path) = &csv {
                let mut w = csv::Writer::from_writer(create(path)?);
                let res: std::result::Result<(), csv::Error> = (|| {
                    w.write_record(["r", "quantity", "value", "reference", "residual"])?;
                    for row in &out.rows {
                        w.write_record([
                            csv_number(row.r),
                            row.quantity.to_string(),
                            csv_number(row.value),
                            csv_number(row.reference),
                            csv_number(row.residual),
                        ])?;
                    }
                    w.flush()?;
                    Ok(())
                })();
                res.map_err(|e| CliError::Io { path: path.clone(), source: e.into() })?;
            }
            if json {
                println!("{}", out.report.to_json());
            } else {
                out.report.write_table(io::stdout().lock()).map_err(stdout_err)?;
            }
            Ok(out.report.passed())
        }
        Command::Emit { quantity, space, config, format, a, out } => {
            let quantity: Quantity = quantity.parse()?;
            let format: Format = format.parse()?;
            let cfg = config.load()?;
            let table = emit_table(quantity, &space.spec().build()?, &cfg.grid.points(), a)?;
            match &out {
                Some(path) => {
                    let mut f = create(path)?;
                    table.write(&mut f, format).and_then(|_| f.flush()).map_err(io_at(path))?;
                }
                None => table.write(io::stdout().lock(), format).map_err(stdout_err)?,
            }
            Ok(true)
        }
        Command::Green { space, r } => {
            let space = space.spec().build()?;
            let kernel = GreenKernel::new(&space)?;
            let residual = verify_fundamental(&kernel, &bump(), 1.0)?;
            print_json(&json!({
                "space": harmonia_cli::space::describe(&space),
                "r": r,
                "green": kernel.value(r)?,
                "green_derivative": kernel.derivative(r),
                "fundamental_residual": residual,
            }))?;
            Ok(residual <= 1e-6)
        }
        Command::Martin { space, a, s } => {
            let space = space.spec().build()?;
            let kernel = GreenKernel::new(&space)?;
            let ratio = martin_limit(&kernel, a, s)?;
            let limit = (-space.mean_curvature_h * a).exp();
            print_json(&json!({
                "space": harmonia_cli::space::describe(&space),
                "a": a,
                "s": s,
                "ratio": ratio,
                "limit": limit,
                "difference": ratio - limit,
            }))?;
            Ok(true)
        }
        Command::Disk { op, z, w, xi, p } => {
            let value = match op.as_str() {
                "distance" => distance(&disk_point(required(&z, "z", &op)?)?, &disk_point(required(&w, "w", &op)?)?),
                "busemann" => {
                    let xi = xi.ok_or_else(|| CliError::Parse("--op busemann needs --xi".into()))?;
                    busemann(&BoundaryAngle::new(xi), &disk_point(required(&z, "z", &op)?)?)
                }
                "gromov" => {
                    let base = match &p {
                        Some(p) => disk_point(p)?,
                        None => DiskPoint::origin(),
                    };
                    gromov_product(&disk_point(required(&z, "z", &op)?)?, &disk_point(required(&w, "w", &op)?)?, &base)
                }
                _ => {
                    return Err(CliError::Unknown { what: "disk op", name: op, expected: "distance, busemann, gromov" })
                }
            };
            print_json(&json!({ "op": op, "value": value }))?;
            Ok(true)
        }
        Command::Dirichlet { phi, z, nodes } => {
            let data = parse::boundary_data(&phi)?;
            let zc = parse::complex(&z)?;
            let p = DiskPoint::new(zc)?;
            let h = dirichlet_solve(|xi: &BoundaryAngle| data.eval(xi.theta), &p, nodes)?;
            // classical Poisson integral at ten times the nodes
            let poisson = circle_mean(
                |th| data.eval(th) * (1.0 - zc.norm_sqr()) / (num_complex::Complex64::from_polar(1.0, th) - zc).norm_sqr(),
                10 * nodes,
            );
            let exact = data.exact(zc);
            print_json(&json!({
                "phi": phi,
                "z": [zc.re, zc.im],
                "nodes": nodes,
                "value": h,
                "poisson_residual": (h - poisson).abs(),
                "exact": exact,
                "exact_residual": exact.map(|e| (h - e).abs()),
            }))?;
            Ok(true)
        }
        Command::Meanvalue { xi, arcs, phi } => {
            let data = parse::boundary_data(&phi)?;
            let arcs = parse::list(&arcs)?;
            let xi = BoundaryAngle::new(xi);
            let u = |z: num_complex::Complex64| match DiskPoint::new(z) {
                Ok(p) => match data.exact(z) {
                    Some(v) => v,
                    None => dirichlet_solve(|x: &BoundaryAngle| data.eval(x.theta), &p, nodes_for_accuracy(&p, 12.0))
                        .unwrap_or(f64::NAN),
                },
                Err(_) => f64::NAN,
            };
            let avg = mean_value_at_infinity(u, &xi, &arcs)?;
            let target = data.eval(xi.theta);
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            let res: std::result::Result<(), csv::Error> = (|| {
                w.write_record(["half_length", "average", "boundary_value", "error"])?;
                for (l, v) in arcs.iter().zip(&avg) {
                    w.write_record([csv_number(*l), csv_number(*v), csv_number(target), csv_number((v - target).abs())])?;
                }
                w.flush()?;
                Ok(())
            })();
            res.map_err(|e| stdout_err(e.into()))?;
            Ok(true)
        }
        Command::FitDensity { space, range, max_terms, max_degree } => {
            let space = space.spec().build()?;
            let g = parse::grid(&range)?;
            let mut caps = FitCaps::default();
            caps.max_terms = max_terms.unwrap_or(caps.max_terms);
            caps.max_degree = max_degree.unwrap_or(caps.max_degree);
            let samples = sample(|r| space.density(r).f, g.start, g.stop, g.step);
            let r = fit(&samples, &caps)?;
            print_json(&json!({
                "space": harmonia_cli::space::describe(&space),
                "range": g.to_string(),
                "terms": r.poly.terms,
                "leading_rate": r.poly.leading_rate(),
                "mean_curvature_h": space.mean_curvature_h,
                "max_residual": r.max_residual,
                "relative_residual": r.relative_residual,
            }))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let report = json!({ "error": { "code": e.code(), "message": e.to_string() } });
            eprintln!("{report}");
            ExitCode::from(2)
        }
    }
}
