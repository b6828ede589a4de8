use harmonia::{make_space, ModelSpace, SpaceParams};

use crate::error::{CliError, Result};
use crate::parse;

/// `--space`, `--dim`, `--eigen` as given on the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpaceSpec {
    pub kind: Option<String>,
    pub dim: Option<usize>,
    pub eigen: Option<String>,
}

impl SpaceSpec {
    pub fn new(kind: &str, dim: usize) -> Self {
        SpaceSpec { kind: Some(kind.into()), dim: Some(dim), eigen: None }
    }

    pub fn build(&self) -> Result<ModelSpace> {
        let kind = self.kind.as_deref().ok_or_else(|| CliError::Parse("--space is required".into()))?;
        let eigen = match &self.eigen {
            Some(e) => parse::eigen(e)?,
            None => Vec::new(),
        };
        Ok(make_space(kind, &SpaceParams { dim: self.dim, eigen })?)
    }
}

/// `name n=...` for reports.
pub fn describe(space: &ModelSpace) -> String {
    let mut s = format!("{} n={}", space.name, space.dim_n);
    if space.name == "rank1_model" {
        let eigen: Vec<String> = space.curvature_eigen.iter().map(|(l, m)| format!("{l}:{m}")).collect();
        s.push_str(&format!(" eigen={}", eigen.join(",")));
    }
    s
}
