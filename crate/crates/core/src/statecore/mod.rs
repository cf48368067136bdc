//! Basis kets, sparse photon states, hyperentangled-state constructors and the
//! single-photon gate engine.

mod ket;
mod label;
mod state;

pub use ket::{photon_name, BasisKet, BitString, Dof, MAX_PHOTONS};
pub(crate) use label::check_photon_count;
pub use label::{bell_state, ghz_state, hyper_product, BellKind, GhzLabel, HyperLabel, Sign};
pub use state::{
    apply_gate, equal_up_to_global_phase, Gate2, PhotonState, NORM_TOLERANCE, PRUNE_THRESHOLD,
};
