//! Receiver digital signal processing: carrier-frequency-offset estimation,
//! phase-locked-loop carrier tracking, and IQ-imbalance modeling.

mod cfo;
mod iq;
mod pll;

pub use cfo::{derotate, estimate_cfo_pow4};
pub use iq::IqImbalance;
pub use pll::{Pll, PllConfig, TrackResult};
