//! Exact Fock-space simulation of lossy multiport interferometers.
//!
//! Interferometer meshes built from two-mode unit cells lose photons in a
//! layout-dependent pattern. This crate models that pattern as an
//! entrywise amplitude-transmittance matrix Γ, simulates multiphoton
//! interference through the lossy transfer matrix T = Γ⊙U exactly (via
//! matrix permanents and amplitude-damping Kraus operators), and computes
//! the figures of merit that distinguish the rectangular and triangular
//! mesh layouts: post-selected and preimage fidelities, heralded
//! conditional transmittance, and dual-rail GHZ state quality.
//!
//! All randomness is seeded and all reductions are fixed-order, so every
//! result is reproducible bit for bit.

pub mod error;
pub mod experiments;
pub mod fock;
pub mod loss;
pub mod metrics;
pub mod numerics;
pub mod selftest;

pub use error::{Error, Result};
