//! Columnar tables of single quantities over a grid.

use std::io::Write;
use std::str::FromStr;

use harmonia::green::{martin_limit, GreenKernel};
use harmonia::radial::{mu, sphere_eigenvalue, sphere_scalar_curvature};
use harmonia::ModelSpace;
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Density,
    Mu,
    Green,
    Eigenvalue,
    ScalSphere,
    MartinRatio,
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "density" => Quantity::Density,
            "mu" => Quantity::Mu,
            "green" => Quantity::Green,
            "eigenvalue" => Quantity::Eigenvalue,
            "scal_sphere" => Quantity::ScalSphere,
            "martin_ratio" => Quantity::MartinRatio,
            _ => {
                return Err(CliError::Unknown {
                    what: "quantity",
                    name: s.into(),
                    expected: "density, mu, green, eigenvalue, scal_sphere, martin_ratio",
                })
            }
        })
    }
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Density => "density",
            Quantity::Mu => "mu",
            Quantity::Green => "green",
            Quantity::Eigenvalue => "eigenvalue",
            Quantity::ScalSphere => "scal_sphere",
            Quantity::MartinRatio => "martin_ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Unknown { what: "format", name: s.into(), expected: "csv, json" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub quantity: String,
    pub space: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// CSV number format: 17 significant digits, `.` decimal point.
pub fn csv_number(v: f64) -> String {
    format!("{v:.16e}")
}

impl Table {
    pub fn write<W: Write>(&self, out: W, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)
            }
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| csv_number(v)))?;
        }
        w.flush()
    }
}

/// Tabulate `quantity` at each grid point. For `martin_ratio` the grid holds
/// the values of `s` and `a` is the shift.
pub fn emit_table(quantity: Quantity, space: &ModelSpace, grid: &[f64], a: f64) -> Result<Table> {
    let name = crate::space::describe(space);
    let mut rows = Vec::with_capacity(grid.len());
    let columns = match quantity {
        Quantity::Density => {
            for &r in grid {
                let d = space.density(r);
                rows.push(vec![r, d.f, d.df, d.d2f]);
            }
            vec!["r", "f", "df", "d2f"]
        }
        Quantity::Mu => {
            for &r in grid {
                rows.push(vec![r, mu(space, r)?]);
            }
            vec!["r", "mu"]
        }
        Quantity::Green => {
            let k = GreenKernel::new(space)?;
            for &r in grid {
                rows.push(vec![r, k.value(r)?, k.derivative(r)]);
            }
            vec!["r", "green", "green_derivative"]
        }
        Quantity::Eigenvalue => {
            for &r in grid {
                rows.push(vec![r, sphere_eigenvalue(space, r)?]);
            }
            vec!["r", "eigenvalue"]
        }
        Quantity::ScalSphere => {
            for &r in grid {
                rows.push(vec![r, sphere_scalar_curvature(space, r)?]);
            }
            vec!["r", "scal_sphere"]
        }
        Quantity::MartinRatio => {
            let k = GreenKernel::new(space)?;
            let limit = (-space.mean_curvature_h * a).exp();
            for &s in grid {
                rows.push(vec![s, a, martin_limit(&k, a, s)?, limit]);
            }
            vec!["s", "a", "ratio", "limit"]
        }
    };
    let quantity = quantity.as_str().to_string();
    Ok(Table { quantity, space: name, columns, rows })
}
