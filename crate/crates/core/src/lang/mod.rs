//! Language-level operations on parity automata.

pub mod complement;
pub mod flower;
pub mod inclusion;
pub mod membership;
pub mod ramsey;
pub mod to_buchi;

pub use complement::{complement_buchi, complement_cobuchi, complement_deterministic, determinize_cobuchi};
pub use flower::detect_flower;
pub use inclusion::{contains, equivalent, successors_equivalent, LanguageRelationVerdict};
pub use membership::lasso_membership;
pub use to_buchi::parity_to_buchi;
