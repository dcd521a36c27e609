//! Exact generators on enumerable state spaces and the bridge-path
//! Dirichlet ratio.
//!
//! States are bitmasks over the site order of the domain: bit `i` set means
//! site `i` is `+`.

pub mod blocks;
pub mod dirichlet;
pub mod generator;
pub mod killed;
pub mod lanczos;

pub use blocks::{decompose_blocks, principal_eigen, BlockDecomposition, GeneratorBlock, PrincipalEigen};
pub use dirichlet::{dirichlet_test_ratio, DirichletReport};
pub use generator::{build_generator, spectral_gap, symmetrize, SparseGenerator, StateSpace, SymmetrizedMatrix};
pub use killed::{killed_semigroup_check, KilledReport};

/// Largest state space that is enumerated.
pub const STATE_BUDGET: u64 = 1 << 20;

/// Dense eigensolvers are used up to this many states.
pub const DENSE_LIMIT: usize = 3000;
