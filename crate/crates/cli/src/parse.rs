//! Parsers for the small command-line languages: grids, eigenvalue lists,
//! complex numbers and boundary data.

use num_complex::Complex64;

use crate::error::{CliError, Result};

fn bad(what: &str, input: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("invalid {what} {input:?}: {why}"))
}

fn number(what: &str, input: &str, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|e| bad(what, input, e))?;
    if !v.is_finite() {
        return Err(bad(what, input, "not finite"));
    }
    Ok(v)
}

/// Inclusive uniform grid written `a:b:step`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

pub fn grid(input: &str) -> Result<Grid> {
    let parts: Vec<&str> = input.split(':').collect();
    let [a, b, s] = parts[..] else {
        return Err(bad("grid", input, "expected a:b:step"));
    };
    let g = Grid { start: number("grid", input, a)?, stop: number("grid", input, b)?, step: number("grid", input, s)? };
    if !(g.step > 0.0) || g.stop < g.start {
        return Err(bad("grid", input, "need step > 0 and a <= b"));
    }
    if (g.stop - g.start) / g.step > 1e7 {
        return Err(bad("grid", input, "more than 10^7 points"));
    }
    Ok(g)
}

/// `λ:mult,λ:mult,...`.
pub fn eigen(input: &str) -> Result<Vec<(f64, usize)>> {
    input
        .split(',')
        .map(|pair| {
            let (l, m) = pair.split_once(':').ok_or_else(|| bad("eigenvalue list", input, "expected λ:mult"))?;
            let mult: usize = m.trim().parse().map_err(|e| bad("eigenvalue list", input, e))?;
            if mult == 0 {
                return Err(bad("eigenvalue list", input, "multiplicity 0"));
            }
            Ok((number("eigenvalue list", input, l)?, mult))
        })
        .collect()
}

pub fn complex(input: &str) -> Result<Complex64> {
    let z: Complex64 = input.trim().parse().map_err(|e| bad("complex number", input, e))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad("complex number", input, "not finite"));
    }
    Ok(z)
}

/// Comma-separated reals.
pub fn list(input: &str) -> Result<Vec<f64>> {
    input.split(',').map(|s| number("list", input, s)).collect()
}

/// Boundary data `c`, `cos(theta)`, `sin(k*theta)`, `cos(k*theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryData {
    Constant(f64),
    Cos(f64),
    Sin(f64),
}

impl BoundaryData {
    pub fn eval(&self, theta: f64) -> f64 {
        match *self {
            BoundaryData::Constant(c) => c,
            BoundaryData::Cos(k) => (k * theta).cos(),
            BoundaryData::Sin(k) => (k * theta).sin(),
        }
    }

    /// Harmonic extension to the disk: `Re z^k` or `Im z^k` for integer `k`.
    pub fn exact(&self, z: Complex64) -> Option<f64> {
        match *self {
            BoundaryData::Constant(c) => Some(c),
            BoundaryData::Cos(k) if k.fract() == 0.0 => Some(z.powi(k.abs() as i32).re),
            BoundaryData::Sin(k) if k.fract() == 0.0 => Some(z.powi(k.abs() as i32).im * k.signum()),
            _ => None,
        }
    }
}

pub fn boundary_data(input: &str) -> Result<BoundaryData> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(c) = s.parse::<f64>() {
        return Ok(BoundaryData::Constant(c));
    }
    let (head, inner) = s
        .strip_suffix(')')
        .and_then(|t| t.split_once('('))
        .ok_or_else(|| bad("boundary data", input, "expected cos(k*theta), sin(k*theta) or a constant"))?;
    let k = match inner.strip_suffix("theta") {
        Some("") => 1.0,
        Some(pre) => {
            let pre = pre.strip_suffix('*').unwrap_or(pre);
            number("boundary data", input, pre)?
        }
        None => return Err(bad("boundary data", input, "argument must be k*theta")),
    };
    match head {
        "cos" => Ok(BoundaryData::Cos(k)),
        "sin" => Ok(BoundaryData::Sin(k)),
        _ => Err(bad("boundary data", input, format!("unknown function {head}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = grid("0:5:0.5").unwrap();
        assert_eq!(g.points().len(), 11);
        assert_eq!(*g.points().last().unwrap(), 5.0);
        assert_eq!(grid("0.1:0.3:0.1").unwrap().points().len(), 3);
        assert!(grid("1:0:0.1").is_err());
        assert!(grid("0:1:0").is_err());
        assert!(grid("0:1").is_err());
        assert!(grid("a:1:0.1").is_err());
    }

    #[test]
    fn eigen_lists() {
        assert_eq!(eigen("-4:1,-1:2").unwrap(), vec![(-4.0, 1), (-1.0, 2)]);
        assert!(eigen("-4").is_err());
        assert!(eigen("-4:0").is_err());
    }

    #[test]
    fn complex_numbers() {
        assert_eq!(complex("0.3+0.4i").unwrap(), Complex64::new(0.3, 0.4));
        assert_eq!(complex("-0.2-0.5i").unwrap(), Complex64::new(-0.2, -0.5));
        assert_eq!(complex("0.7").unwrap(), Complex64::new(0.7, 0.0));
        assert_eq!(complex("0.3i").unwrap(), Complex64::new(0.0, 0.3));
        assert!(complex("nope").is_err());
    }

    #[test]
    fn boundary_expressions() {
        assert_eq!(boundary_data("cos(2*theta)").unwrap(), BoundaryData::Cos(2.0));
        assert_eq!(boundary_data("cos(theta)").unwrap(), BoundaryData::Cos(1.0));
        assert_eq!(boundary_data(" sin( 3 * theta ) ").unwrap(), BoundaryData::Sin(3.0));
        assert_eq!(boundary_data("1.5").unwrap(), BoundaryData::Constant(1.5));
        assert!(boundary_data("tan(theta)").is_err());
        assert!(boundary_data("cos(x)").is_err());
        let z = Complex64::new(0.3, 0.4);
        assert!((BoundaryData::Cos(2.0).exact(z).unwrap() - (z * z).re).abs() < 1e-15);
        assert_eq!(BoundaryData::Cos(0.5).exact(z), None);
    }
}
