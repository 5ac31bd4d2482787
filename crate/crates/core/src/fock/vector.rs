//! Pure-state amplitude vectors over a fixed-photon-number basis.

use std::sync::Arc;

use num_complex::Complex64;

use crate::fock::basis::{FockBasis, FockState};

/// Complex amplitudes aligned with the order of a [`FockBasis`].
///
/// Sub-normalized vectors are allowed; they represent unnormalized branches
/// of a larger computation.
#[derive(Debug, Clone)]
pub struct FockVector {
    basis: Arc<FockBasis>,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let dim = basis.len();
        Self {
            basis,
            amplitudes: vec![Complex64::ZERO; dim],
        }
    }

    pub fn from_amplitudes(basis: Arc<FockBasis>, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(basis.len(), amplitudes.len());
        Self { basis, amplitudes }
    }

    /// Basis vector |state⟩.
    pub fn basis_state(basis: Arc<FockBasis>, state: &FockState) -> Self {
        let mut v = Self::zero(basis);
        let idx = v.basis.rank(state.occupations());
        v.amplitudes[idx] = Complex64::ONE;
        v
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude_of(&self, state: &FockState) -> Complex64 {
        self.amplitudes[self.basis.rank(state.occupations())]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}
