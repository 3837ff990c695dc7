//! Numerical toolkit for local Orlicz-slice Hardy spaces on uniform grids in
//! one and two dimensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`orlicz`]: Orlicz and Musielak–Orlicz functionals and Luxemburg gauges.
//! - [`grid`]: sampled functions, cubes and balls, mollifier dictionaries.
//! - [`slice`]: the slice quasi-norm, the unit-cube amalgam norm, the
//!   Hardy–Littlewood maximal operator and the inequalities built on them.
//! - [`maximal`]: local radial, non-tangential, Peetre and grand maximal
//!   functions, and the Hardy quasi-norms composed from them.
//! - [`atomic`]: Whitney covers, partitions of unity, Calderón–Zygmund
//!   decomposition into local atoms, atom validation.
//! - [`campanato`]: local Campanato and bmo-type norms, duality pairings.
//! - [`embeddings`]: inclusion checks between the variant spaces.
//! - [`scenario`]: configuration, seeded families and the check runner
//!   behind the `slice-hardy` binary.

// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod atomic;
pub mod campanato;
pub mod embeddings;
pub mod error;
pub mod grid;
pub mod maximal;
pub mod numeric;
pub mod orlicz;
pub mod report;
pub mod scenario;
pub mod slice;

pub use error::{Error, Result};
pub use grid::{Ball, Cube, GridFunction, GridSpec, MollifierDictionary, Region};
pub use orlicz::{BuiltinFunctional, MusielakFunction, OrliczFunction};
pub use slice::SliceParams;
