//! Exact modal Green functions and wave kernels for the Dirichlet problem
//! outside an infinite cylinder in ℝ³, together with the closed-form phase
//! geometry and Airy/Hankel asymptotics used by the parametrix construction,
//! and a dispersion-estimate scanner.
//!
//! Units: the cylinder has radius 1; points are given in cylindrical
//! coordinates `(r, θ, z)`; the source sits at `(s, 0, 0)`.

pub mod cli;
pub mod error;
pub mod green;
pub mod numdiff;
pub mod oscint;
pub mod phases;
pub mod propagator;
pub mod specfun;

pub use error::{Error, Result};
