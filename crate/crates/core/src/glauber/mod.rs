//! Heat-bath dynamics at inverse temperature β ∈ (0, ∞].

pub mod coupling;
pub mod hitting;
pub mod modified;
pub mod rule;
pub mod sim;

pub use coupling::{grand_coupling_simulate, CouplingReport};
pub use hitting::{tau_plus, tmix_inf_quantile, tmix_quantile_of, TauPlusSample, TauRecord};
pub use modified::{modified_2d_simulate, ModifiedOptions, ModifiedReport};
pub use rule::{heat_bath_update, RateRule};
pub use sim::{beta_compare, simulate, BetaCompareReport, HittingRecord, Sample, Trajectory};
