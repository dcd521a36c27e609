//! Translation-invariant dimer measure on the honeycomb lattice.
//!
//! Labelling: white sites `w_{x,y} = w_{0,0} + x e1 + y e2`, black sites
//! likewise from `b_{0,0}`. Each white site has three black neighbours:
//!
//! ```text
//!            b_{x,y}            type c (crosses e3)
//!              |
//!           w_{x,y} ---- b_{x+1,y}   type b
//!              \
//!            b_{x,y-1}          type a
//! ```
//!
//! so `K(b, w)` is `k_c`, `k_b` or `k_a` for black offsets `(0,0)`, `(1,0)`
//! and `(0,-1)` from the white site, and `K K⁻¹ = I` reads
//! `k_c G(x,y) + k_a G(x,y-1) + k_b G(x+1,y) = δ_{x,y}` for
//! `G(x, y) = K⁻¹(w_{0,0}, b_{x,y})`.

pub mod kasteleyn;
pub mod quad;
pub mod spec;
pub mod tails;
pub mod toeplitz;

pub use kasteleyn::{edge_probability, kinv_closed, kinv_quadrature, Edge, EdgeType};
pub use spec::DimerSpec;
pub use tails::{fourier_identity_residual, poisson_binomial_tail, TailReport};
pub use toeplitz::{build_a, variance_eigen, variance_nn, BernoulliProfile, ToeplitzA};
