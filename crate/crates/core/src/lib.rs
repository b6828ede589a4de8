//! Numerical toolkit for noncompact harmonic manifolds.
//!
//! Model spaces are described by their volume density `f(r)`; everything
//! radial (the `μ` function, Green's kernels, sphere curvatures) is derived
//! from it. Boundary-at-infinity constructions are exercised on the
//! Poincaré disk, where every quantity has a closed form.

pub mod boundary;
pub mod disk;
pub mod error;
pub mod exp_poly;
pub mod green;
pub mod jacobi;
pub mod model_catalog;
pub mod numdiff;
pub mod quadrature;
pub mod radial;

pub use error::{HarmoniaError, Result};
pub use model_catalog::{make_space, ModelSpace, SpaceKind, SpaceParams};
