//! Positive definite functions on `F_d`: Gram-matrix tests, the summability
//! conditions on radial profiles, the `(2d-1)^{-1/p}` threshold for
//! `φ_α(s) = α^{|s|}`, conjugacy growth and Hölder triples.

mod conditions;
mod gram;
mod holder;
mod profile;
mod threshold;

pub use conditions::{
    chain_holds, condition2_sup, condition3_sum, condition4_limsup, condition_battery,
    ConditionReport, ConditionRow, Verdict,
};
pub use gram::{
    gram_matrix, hermitian_eigenvalues, omega, pd_battery_phi_alpha, symmetric_eigenvalues,
    GramReport, GroupFunction, MAX_BATTERY_RADIUS, PSD_TOLERANCE,
};
pub use holder::{holder_battery, holder_conjugate, holder_triple_check, EXPONENT_TOLERANCE};
pub use profile::{RadialProfile, Tail};
pub use threshold::{
    lp_threshold, phi_alpha_in_lp, separation_witness, trace_growth_check, SeparationReport,
    TraceGrowthRow,
};
