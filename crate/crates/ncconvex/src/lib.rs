//! Numerical toolkit for real and complex matrix (noncommutative) convex
//! sets at finite matrix levels.
//!
//! The crate is organized bottom-up:
//!
//! - [`mat`], [`eig`], [`tuple`]: dense matrix kernel, Jacobi eigensolver,
//!   matrix tuples with the real/complex structure maps (block doubling,
//!   canonical isometry compression, real/imaginary parts).
//! - [`conic`]: affine-subspace ∩ PSD-cone feasibility with machine-checkable
//!   certificates in both directions.
//! - [`opsys`]: finite-dimensional operator systems, ucp testing through Choi
//!   blocks, state spaces, complexification and the state-pairing maps.
//! - [`ncset`]: representations of matrix convex sets and membership dispatch.
//! - [`affine`]: pencil-form affine functions, positivity, norms, duality.
//! - [`sepolar`]: separation certificates, polars, bipolar reports, and
//!   separability via a corrective Frank-Wolfe loop.
//! - [`suites`], [`cli`]: property suites and the command-line front end.
//!
//! Every verdict that matters ships with a witness that re-validates by
//! direct eigenvalue arithmetic; the solvers are never trusted.
//!
//! See the `examples/` directory for one runnable walk-through per major
//! capability, and `docs/format.md` at the repository root for the frozen
//! JSON schemas.

pub mod affine;
pub mod choi;
pub mod cli;
pub mod config;
pub mod conic;
pub mod eig;
pub mod error;
pub mod mat;
pub mod ncset;
pub mod opsys;
pub mod qr;
pub mod randmat;
pub mod sepolar;
pub mod suites;
pub mod tuple;

pub use config::ToleranceConfig;
pub use error::{Error, Result};
pub use mat::{Field, Mat};
pub use tuple::MatTuple;
