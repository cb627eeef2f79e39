//! Constrained capacity, MMSE and error probability of coherent MIMO fading
//! channels driven by finite equiprobable constellations.
//!
//! The crate covers channel models and sampling ([`model`]), Monte Carlo
//! ground truth ([`mc`]), fixed-channel bounds valid at every SNR
//! ([`bounds`]), high-SNR expansions and diversity analysis
//! ([`asymptotics`]), and the design procedures built on them ([`designs`]).

// NaN must fail the positivity guards, and index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::too_many_arguments)]

pub mod asymptotics;
pub mod bounds;
pub mod designs;
pub mod error;
pub mod linalg;
pub mod mc;
pub mod model;
pub mod special;

pub use asymptotics::{
    diversity_order, epsilon_bounds, evaluate_expansion, expansion_constant, snr_offsets, ConstantKind,
    DistanceDistribution, ExpansionBounds, ExpansionCurves, Offsets,
};
pub use bounds::{avg_bounds, BoundPair, DistanceTable};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use mc::{avg_quantity, empirical_epsilon, Estimate, McConfig, Quantity};
pub use model::{
    make_constellation, received_sq_distance, ChannelModel, ChannelVariant, Constellation, ConstellationFamily,
    SnrGrid, SpaceTimeCode,
};
pub use num_complex::Complex64;
