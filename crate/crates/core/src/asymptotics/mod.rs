//! High-SNR expansions: constants, behaviour of the pairwise received-distance
//! densities at zero, diversity order, coefficient bounds, expansion curves
//! and SNR offsets.

pub mod constants;
pub mod density;
pub mod expansion;

pub use constants::{alternate_constant, expansion_constant, ConstantKind};
pub use density::{
    distance_dist_correlated, distance_dist_for_model, distance_dist_rayleigh, distance_dist_ricean,
    distance_dist_spacetime, pdf_zero_derivative_weighted, pdf_zero_taylor, DistanceDistribution, PairTerm,
    ZERO_EIG_REL,
};
pub use expansion::{
    delta_prime_spread, delta_spread, diversity_order, epsilon_bounds, evaluate_expansion, expansion_overshoot,
    snr_offsets, ExpansionBounds, ExpansionCurves, Offsets,
};
