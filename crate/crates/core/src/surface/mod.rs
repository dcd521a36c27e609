//! Plane partitions in a box and their dynamics.

pub mod dynamics;
pub mod embedding;
pub mod partition;
pub mod paths;
pub mod wilson;

pub use dynamics::{column_resample, column_resample_with, coupling_time, local_update, occupation_counts, CouplingOutcome, Dynamics, Parity};
pub use embedding::{embedding_check, EmbeddingReport};
pub use partition::{enumerate, macmahon, BoxSpec, PlanePartition};
pub use paths::{partition_to_paths, paths_to_partition, LatticePathBundle};
pub use wilson::{kappa, phi_functional, wilson_drift, DriftReport};
