//! Constellations, channel models, sampling and received-space distances.

pub mod channel;
pub mod constellation;
pub mod rng;
pub mod snr;
pub mod spacetime;

pub use channel::{received_sq_distance, ChannelModel, ChannelVariant};
pub use constellation::{make_constellation, Constellation, ConstellationFamily, KissingInfo};
pub use rng::{complex_gaussian, stream_rng, McRng};
pub use snr::SnrGrid;
pub use spacetime::SpaceTimeCode;
