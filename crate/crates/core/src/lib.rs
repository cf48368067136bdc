//! Simulation and exhaustive verification of complete hyperentangled
//! Bell-state and GHZ-state analysis in the polarization and spatial-mode
//! degrees of freedom.
//!
//! The pipeline has three stages:
//!
//! 1. `N − 1` cross-Kerr parity QNDs read the polarization bit pattern
//!    (probes `alpha1 … alpha{N-1}`, probe `k` pairs photon `A` with photon `k`);
//! 2. another `N − 1` read the spatial-mode bit pattern (`beta1 …`);
//! 3. beam splitters and wave plates on every photon map the two relative
//!    phases onto the parities of V clicks and mode-2 clicks.
//!
//! ```
//! use hyperqnd_core::protocols::{hgsa_n_analyze, AnalyzerConfig};
//! use hyperqnd_core::statecore::HyperLabel;
//!
//! let label: HyperLabel = "P:-011;S:+001".parse().unwrap();
//! let (decoded, transcript) = hgsa_n_analyze(3, &label.state(), &AnalyzerConfig::default()).unwrap();
//! assert_eq!(decoded, label);
//! assert_eq!(transcript.probe_readouts.len(), 4);
//! ```

pub mod error;
pub mod kerrqnd;
pub mod optics;
pub mod protocols;
pub mod rng;
pub mod statecore;

pub use error::{Error, Result};
