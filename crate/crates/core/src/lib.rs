//! Holomorphic-embedding power-flow series, Padé approximants and the
//! potential theory of their pole/zero distributions.
//!
//! The pipeline is: [`hem`] builds Maclaurin series of bus voltages,
//! [`pade`] turns them into `[M/M]` rational approximants and extracts
//! roots, [`potential`] supplies equilibrium (Fekete) references and
//! capacities, and [`diagnostics`] compares the two. [`io`] reads cases
//! and writes CSV/SVG; [`cli`] wires it all into the `padelab` binary.

pub mod algebra;
pub mod cli;
pub mod diagnostics;
pub mod hem;
pub mod io;
mod linalg;
pub mod pade;
pub mod potential;

pub use algebra::{Polynomial, PowerSeries};
pub use num_complex::Complex64;

/// Crate-wide error, one variant per module.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Hem(#[from] hem::HemError),
    #[error(transparent)]
    Pade(#[from] pade::PadeError),
    #[error(transparent)]
    Potential(#[from] potential::PotentialError),
    #[error(transparent)]
    Diagnostics(#[from] diagnostics::DiagnosticsError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
