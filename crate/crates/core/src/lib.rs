//! Reversion (compositional inversion) of truncated power series over
//! prime fields.
//!
//! The main entry point is [`reversion::revert`], which dispatches to naive
//! Lagrange inversion, baby-step giant-step ("fast") Lagrange inversion in
//! its inner-product and matrix forms, or Newton iteration over Brent-Kung
//! composition. Every algorithm can be instrumented to count truncated
//! polynomial multiplications and scalar matrix products.

pub mod cli;
pub mod error;
pub mod instrument;
pub mod matrix;
pub mod reversion;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use instrument::{Context, MulTag, OpCounter};
pub use matrix::{DenseMatrix, MatrixStrategy};
pub use reversion::{revert, Algorithm, BenchRecord, ReversionConfig};
pub use ring::{PrimeField, Residue};
pub use series::Series;
