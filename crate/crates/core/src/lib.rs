//! Zero- and low-temperature stochastic Ising dynamics and their interface
//! representations.
//!
//! The crate is organised by subsystem:
//!
//! * [`lattice`] and [`geometry`]: domains, boundary fields, spin
//!   configurations, energies and the 2D contour classification.
//! * [`glauber`]: heat-bath dynamics, the monotone grand coupling, hitting
//!   times and the modified 2D dynamics that lives in the good set.
//! * [`surface`]: plane partitions in a box, the lattice-path bijection and
//!   the single-site and column dynamics on monotone surfaces.
//! * [`dimer`]: the translation-invariant honeycomb dimer measure, its
//!   Kasteleyn inverse and the Poisson-binomial height statistics.
//! * [`spectral`]: exact generators on small state spaces, symmetrisation,
//!   equal-energy block decomposition and the bridge-path Dirichlet ratio.
//! * [`diffusion`]: the discrete heat equation, SSEP duality, random-walk
//!   tails and the rate-2 column dynamics profile.
//!
//! Replica fan-out goes through [`parallel`], which uses rayon when the
//! `parallel` feature is enabled and a plain loop otherwise. Results are
//! identical either way.

pub mod diffusion;
pub mod dimer;
pub mod error;
pub mod geometry;
pub mod glauber;
pub mod lattice;
pub mod parallel;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod surface;

pub use error::{Error, Result};
