//! Exact verification of chain-extension measures for finite set functions.
//!
//! A set function on at most 24 points is stored as a dense table over
//! bitmask subsets. For a monotone submodular `v` and `B ⊆ A`, inserting `B`
//! into a maximal chain yields an atomic measure in the lower core of `A` that
//! agrees with `v` at `B`; [`verify_sup_representation`] builds that witness
//! and checks every claim exhaustively. The supermodular case, Choquet
//! integrals and the ternary chain embedding follow the same pattern.

pub mod chain;
pub mod choquet;
pub mod embed;
pub mod error;
pub mod generators;
pub mod instance;
pub mod interval;
pub mod measure;
pub mod report;
pub mod scalar;
pub mod setfun;
pub mod subset;

pub use chain::{generated_algebra, Chain};
pub use choquet::{
    attaining_chain, choquet_integral, level_set_chain, risk_measure, verify_choquet_sup,
    PointFunction,
};
pub use embed::{embed_chain, recover_generator, sublevel_chain, ternary_embed, GeneratingFamily};
pub use error::{Error, Result};
pub use generators::{
    coverage, distortion_capacity, interval_discretization, random_non_submodular,
    random_submodular, random_supermodular, running_example, shapley_example, Distortion, Shape,
    ShapleyExample,
};
pub use instance::{instance_json, load_family, load_instance, parse_family, parse_instance};
pub use interval::ChainIntervalUnion;
pub use measure::{
    agrees_on_chain, chain_measure, core_claims, in_lower_core, in_upper_core, same_claims,
    sample_core, verify_inf_dual_route, verify_inf_representation, verify_inf_representation_with,
    verify_sup_representation, verify_sup_representation_with, verify_uniqueness,
    verify_uniqueness_with, AtomicMeasure, CoreSide,
};
pub use report::{Claim, ClaimKind, Relation, Route, Statement, VerificationReport};
pub use scalar::{epsilon, set_epsilon, Mode, Scalar};
pub use setfun::{GroundSet, LatticeCheck, Profile, SetFunction};
pub use subset::Subset;
