//! Lower-bound machinery: the discrete heat equation with tent data, the
//! SSEP it describes through gradients, random-walk tails and the 3D
//! column dynamics whose mean profile solves the same equation.

pub mod coldyn;
pub mod heat;
pub mod rw;
pub mod ssep;

pub use coldyn::{coldyn_profile, ColdynReport};
pub use heat::{heat_rk4, heat_solve, heat_tail_check, tent, HeatState, HeatTail, HEAT_TAIL_CONSTANT};
pub use rw::{rw_tail_chain, RwChain};
pub use ssep::{ssep_simulate, SsepProfile, SsepState};
