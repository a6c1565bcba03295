//! Statistical comparison of complexity distributions, procedural patterns
//! and speaker roles.

pub mod kmeans;
pub mod ks;
pub mod procedural;
pub mod roles;
pub mod stats;

pub use kmeans::{kmeans, KMeansFit, KMeansParams};
pub use ks::{ks_two_sample, KsResult};
pub use procedural::{
    basket_profile, procedural_signatures, trim_by_turn_percentile, trim_to_bounds, turn_percentile_bounds,
    BasketProfile, ProceduralParams, ProceduralSignature, TrimBounds,
};
pub use roles::{role_complexity, RoleComplexityTable};
pub use stats::{group_mean_comparison, pearson_r, welch_t_test, GroupComparison, TTest};
