//! Multiphoton evolution through a mode transformation via permanents.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::basis::{FockBasis, FockState};
use crate::fock::vector::FockVector;
use crate::numerics::{permanent_unchecked, ComplexMatrix, MAX_PERMANENT_SIDE};

/// Amplitude ⟨output| Φ(u) |input⟩ for photon-number states.
///
/// Equals perm(u[output|input]) / √(∏ output_i! · ∏ input_j!), where the
/// submatrix repeats row i `output_i` times and column j `input_j` times.
pub fn transition_amplitude(
    u: &ComplexMatrix,
    input: &FockState,
    output: &FockState,
) -> Result<Complex64> {
    let m = u.require_square()?;
    if input.modes() != m || output.modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: input.modes().max(output.modes()),
        });
    }
    let n = input.total();
    if n != output.total() {
        return Err(Error::PhotonMismatch {
            input: n,
            output: output.total(),
        });
    }
    if n > MAX_PERMANENT_SIDE {
        return Err(Error::TooManyPhotons {
            photons: n,
            max: MAX_PERMANENT_SIDE,
        });
    }
    Ok(amplitude_unchecked(
        u,
        input.occupations(),
        output.occupations(),
        n,
    ))
}

/// Permanent-based amplitude with pre-validated occupations.
pub(crate) fn amplitude_unchecked(
    u: &ComplexMatrix,
    input: &[u8],
    output: &[u8],
    photons: usize,
) -> Complex64 {
    if photons == 0 {
        return Complex64::ONE;
    }
    let cols: Vec<usize> = repeat_indices(input, photons);
    let rows: Vec<usize> = repeat_indices(output, photons);
    let sub = ComplexMatrix::from_fn(photons, photons, |a, b| u[(rows[a], cols[b])]);
    permanent_unchecked(&sub) / normalization(input, output)
}

fn repeat_indices(occ: &[u8], photons: usize) -> Vec<usize> {
    let mut idx = Vec::with_capacity(photons);
    for (mode, &count) in occ.iter().enumerate() {
        for _ in 0..count {
            idx.push(mode);
        }
    }
    idx
}

fn normalization(input: &[u8], output: &[u8]) -> f64 {
    let fact = |occ: &[u8]| -> f64 {
        occ.iter()
            .map(|&n| (1..=n as u64).product::<u64>() as f64)
            .product()
    };
    (fact(input) * fact(output)).sqrt()
}

/// Applies the Fock-layer image of the mode transformation `u` to a pure
/// state. Norm is preserved to ~1e−9 when `u` is unitary.
pub fn evolve_pure(u: &ComplexMatrix, psi: &FockVector) -> Result<FockVector> {
    let m = u.require_square()?;
    if psi.basis().modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: psi.basis().modes(),
        });
    }
    let basis = Arc::clone(psi.basis());
    let mut out = FockVector::zero(Arc::clone(&basis));
    for (in_idx, amp) in psi.amplitudes().iter().enumerate() {
        if *amp == Complex64::ZERO {
            continue;
        }
        let column = evolve_basis_state(u, &basis, basis.state(in_idx).to_vec());
        for (o, a) in out.amplitudes_mut().iter_mut().zip(column.amplitudes()) {
            *o += amp * a;
        }
    }
    Ok(out)
}

/// Image of a single occupation basis state under Φ(u), as a vector over
/// the full photon-number layer of the input.
pub fn evolve_basis_state(u: &ComplexMatrix, basis: &Arc<FockBasis>, input: Vec<u8>) -> FockVector {
    let photons = input.iter().map(|&v| v as usize).sum::<usize>();
    let amplitudes: Vec<Complex64> = basis
        .iter()
        .map(|output| amplitude_unchecked(u, &input, output, photons))
        .collect();
    FockVector::from_amplitudes(Arc::clone(basis), amplitudes)
}
