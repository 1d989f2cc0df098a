//! Convexity and starlikeness checks, inclusion radii between metric balls
//! with empirical verification, and conjecture explorers.

mod convexity;
mod explore;
mod inclusion;

pub use convexity::{
    check_convexity_2d, check_convexity_2d_with, ConvexityReport, Witness, CROSS_TOL,
};
pub use explore::{
    conjectured_c_rho_radii, explore_c_rho_conjecture, explore_convexity_constant,
    explore_starlikeness, half_plane_convex_at, ConjectureEvidence, ConstantEstimate,
    ConstantSample, StarlikeEntry, StarlikenessReport,
};
pub use inclusion::{
    inclusion_radii, verify_inclusion, InclusionParams, InclusionReport, InclusionTheorem,
};
