//! Link-level modeling of sub-terahertz wireless links.
//!
//! This crate covers the two front-end architectures commonly used to reach
//! carrier frequencies around 300 GHz, and everything needed to predict and
//! simulate their link-level performance:
//!
//! * **Photonic transmitter / receiver** ([`photonics`]): two free-running
//!   lasers amplified by an EDFA beat in a photodiode to generate the carrier;
//!   a second laser pair serves as the local oscillator. Amplified spontaneous
//!   emission, relative intensity noise, shot noise, and thermal noise
//!   propagate through the square-law detector, producing both
//!   signal-independent and signal-dependent noise at the demodulator.
//! * **Electronic transmitter / receiver** ([`electronics`]): a microwave
//!   oscillator multiplied up to the carrier, with multiplied-up oscillator
//!   phase-noise floors entering multiplicatively around the signal.
//!
//! Supporting modules: [`signal`] (square Gray-mapped QAM, root-raised-cosine
//! shaping, exact analytic bit-error rates), [`budget`] (free-space link
//! budgets), [`noise`] (elementary noise-power formulas), [`phase`]
//! (laser and oscillator phase-noise synthesis), [`spectrum`] (Welch spectral
//! estimation), [`rxdsp`] (frequency-offset estimation, carrier tracking,
//! IQ imbalance), [`sim`] (the end-to-end Monte-Carlo chain), and [`harness`]
//! (config-file driven experiment runners producing CSV tables).
//!
//! # Example
//!
//! Predict the demodulator SNR of a photonic link and check it against a
//! Monte-Carlo estimate of the same operating point:
//!
//! ```
//! use thzlink::photonics::PhotonicsLink;
//!
//! let link = PhotonicsLink::builder()
//!     .input_power_dbm(5.0)
//!     .edfa_gain_db(18.0)
//!     .rin_db_hz(-145.0)
//!     .lo_power_dbm(19.26)
//!     .electrical_bandwidth_hz(40e9)
//!     .build()
//!     .unwrap();
//!
//! let snr_tx = link.snr_tx_db();
//! let snr_rx = link.snr_rx_db();
//! assert!(snr_tx > snr_rx); // the receiver only adds noise
//! assert!((snr_tx - 34.7).abs() < 0.2);
//! ```

pub mod budget;
pub mod electronics;
pub mod error;
pub mod harness;
pub mod noise;
pub mod phase;
pub mod photonics;
pub mod rng;
pub mod rxdsp;
pub mod signal;
pub mod sim;
pub mod spectrum;
pub mod units;

pub mod guide;

pub use error::{Error, Result};
