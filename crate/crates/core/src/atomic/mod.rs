//! Whitney covers, partitions of unity, polynomial projections and the
//! Calderón–Zygmund decomposition into local atoms.

mod atom;
mod decompose;
pub mod io;
mod partition;
mod polynomial;
mod whitney;

pub use atom::{atomic_quasinorm, covering_grid, validate_atom, Atom, AtomReport, AtomTolerances};
pub use decompose::{cz_decompose, decomposition_quasinorm, reconstruct, CzParams, Decomposition, Entry, LevelSummary, DEFAULT_C0};
pub use partition::{bump_profile, partition_of_unity, PartitionOfUnity, WHITNEY_DILATION};
pub use polynomial::{
    minimizing_polynomial, multi_indices, scaled_monomials, space_dimension, weighted_norm, weighted_projection,
    weighted_projection_with, Polynomial,
};
pub use whitney::{complement_distance, overlap_max, whitney_decompose, WhitneyCube};
