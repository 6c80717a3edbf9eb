//! Baseband signal processing: Gray-mapped square QAM, root-raised-cosine
//! pulse shaping, and error-rate / quality metrics.

mod constellation;
mod metrics;
mod rrc;

pub use constellation::{Constellation, PowerGroup};
pub use metrics::{ber_awgn_qam, evm_rms, snr_db_from_evm, BitErrorCount};
pub use rrc::RrcFilter;
