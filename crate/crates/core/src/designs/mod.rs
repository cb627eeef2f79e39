//! Design procedures driven by the expansions: power allocation over parallel
//! fading subchannels, linear precoders, and space-time code ranking.

pub mod palloc;
pub mod precoder;
pub mod stcode;

pub use palloc::{
    palloc_numeric, palloc_rayleigh_highsnr, palloc_ricean_highsnr, Fading, NumericAllocation, PowerAllocation,
    SubchannelSpec,
};
pub use precoder::{
    certify_by_probes, precoder_canonical, precoder_correlated, precoder_correlated_with, precoder_objective,
    random_feasible_z, PgdOptions, Precoder, PrecoderReport, PrecoderRoute, ProbeReport,
};
pub use stcode::{st_compare, st_criteria, StCriteria};
