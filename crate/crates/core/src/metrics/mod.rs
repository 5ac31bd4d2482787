//! Figures of merit: circuit fidelities, conditional transmittance,
//! dual-rail qubit extraction, stabilizer errors, and power-law fits.

mod fit;
mod pauli;

pub use fit::{power_law_fit, FitResult};
pub use pauli::{
    alpha_of, ghz3_stabilizer_group, ghz_fidelity, stabilizer_error, stabilizer_expectation,
    AlphaEstimate, Pauli, PauliString, QubitDensityMatrix,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{partial_trace, ConditionalState};
use crate::numerics::ComplexMatrix;

/// Normalized average fidelity of single-photon transformations,
/// |tr(U†T)|² / (tr(U†U)·tr(T†T)).
///
/// Invariant under global rescaling of T, so uniform loss does not lower
/// it: it implicitly post-selects on full transmission.
pub fn postselected_fidelity(u: &ComplexMatrix, t: &ComplexMatrix) -> Result<f64> {
    if (u.rows(), u.cols()) != (t.rows(), t.cols()) {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: t.rows(),
        });
    }
    let tt = t.frobenius_inner(t).re;
    if tt <= 0.0 {
        return Err(Error::ZeroTransform);
    }
    let uu = u.frobenius_inner(u).re;
    let cross = u.frobenius_inner(t);
    Ok(cross.norm_sqr() / (uu * tt))
}

/// Overlap of the ideal and lossy single-photon preimages of output mode i:
/// |Σ_j conj(U_ij)·T_ij|².
///
/// The sum pairs the two preimage rows entrywise (conjugating the ideal
/// one); this is the reading under which T = U gives fidelity 1.
pub fn preimage_fidelity(u: &ComplexMatrix, t: &ComplexMatrix, mode: usize) -> Result<f64> {
    if (u.rows(), u.cols()) != (t.rows(), t.cols()) {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: t.rows(),
        });
    }
    if mode >= u.rows() {
        return Err(Error::ModeOutOfRange {
            mode,
            m: u.rows(),
        });
    }
    let overlap: Complex64 = u
        .row(mode)
        .iter()
        .zip(t.row(mode))
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(overlap.norm_sqr())
}

/// Mean preimage fidelity over all output modes.
pub fn average_preimage_fidelity(u: &ComplexMatrix, t: &ComplexMatrix) -> Result<f64> {
    let m = u.rows();
    let mut acc = 0.0;
    for i in 0..m {
        acc += preimage_fidelity(u, t, i)?;
    }
    Ok(acc / m as f64)
}

/// Per-mode preimage fidelities.
pub fn preimage_fidelities(u: &ComplexMatrix, t: &ComplexMatrix) -> Result<Vec<f64>> {
    (0..u.rows()).map(|i| preimage_fidelity(u, t, i)).collect()
}

/// Probability that the heralded state is not the vacuum,
/// 1 − ⟨0|ρ′|0⟩.
pub fn conditional_transmittance(cs: &ConditionalState) -> Result<f64> {
    if cs.p_s() <= 0.0 {
        return Err(Error::DegenerateHerald);
    }
    Ok(1.0 - cs.rho().vacuum_probability())
}

/// Which rail of a dual-rail pair carries the photon encoding logical |0⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroRail {
    /// |1,0⟩ on (first, second) reads as |0⟩.
    #[default]
    First,
    /// |0,1⟩ on (first, second) reads as |0⟩.
    Second,
}

/// Dual-rail qubit layout over the unmeasured modes of a conditional state.
/// Mode labels refer to the original interferometer ports.
#[derive(Debug, Clone)]
pub struct QubitLayout {
    pub pairs: Vec<(usize, usize)>,
    pub spectator_modes: Vec<usize>,
    pub zero_rail: ZeroRail,
}

impl QubitLayout {
    pub fn new(pairs: Vec<(usize, usize)>, spectator_modes: Vec<usize>) -> Self {
        Self {
            pairs,
            spectator_modes,
            zero_rail: ZeroRail::First,
        }
    }

    pub fn with_zero_rail(mut self, rail: ZeroRail) -> Self {
        self.zero_rail = rail;
        self
    }

    pub fn qubits(&self) -> usize {
        self.pairs.len()
    }

    fn resolve(&self, cs: &ConditionalState) -> Result<ResolvedLayout> {
        let find = |mode: usize| {
            cs.reduced_index(mode).ok_or(Error::ModeOutOfRange {
                mode,
                m: cs.rho().basis().modes(),
            })
        };
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for &(a, b) in &self.pairs {
            pairs.push((find(a)?, find(b)?));
        }
        let spectators: Vec<usize> = self
            .spectator_modes
            .iter()
            .map(|&s| find(s))
            .collect::<Result<_>>()?;
        let mut covered: Vec<usize> = pairs
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .chain(spectators.iter().copied())
            .collect();
        covered.sort_unstable();
        let all: Vec<usize> = (0..cs.rho().basis().modes()).collect();
        if covered != all {
            return Err(Error::DuplicateMode {
                mode: covered.first().copied().unwrap_or(0),
            });
        }
        Ok(ResolvedLayout { pairs, spectators })
    }
}

struct ResolvedLayout {
    pairs: Vec<(usize, usize)>,
    spectators: Vec<usize>,
}

/// Marginal conditional transmittance of each dual-rail pair:
/// Λ_k = 1 − Pr(both rails of pair k vacuum), on the reduced two-mode state.
pub fn qubit_transmittances(cs: &ConditionalState, layout: &QubitLayout) -> Result<Vec<f64>> {
    let resolved = layout.resolve(cs)?;
    resolved
        .pairs
        .iter()
        .map(|&(a, b)| {
            let reduced = partial_trace(cs.rho(), &[a, b])?;
            Ok(1.0 - reduced.vacuum_probability())
        })
        .collect()
}

/// Occupation probability of a single unmeasured mode (any photon number).
pub fn mode_occupation_probability(cs: &ConditionalState, mode: usize) -> Result<f64> {
    let reduced_mode = cs.reduced_index(mode).ok_or(Error::ModeOutOfRange {
        mode,
        m: cs.rho().basis().modes(),
    })?;
    let reduced = partial_trace(cs.rho(), &[reduced_mode])?;
    Ok(1.0 - reduced.vacuum_probability())
}

/// Projects the heralded state onto the dual-rail code space: exactly one
/// photon per pair, spectator modes empty. Returns the post-selection
/// probability and the normalized qubit density matrix, with qubit 0 as the
/// most significant bit.
pub fn dual_rail_postselect(
    cs: &ConditionalState,
    layout: &QubitLayout,
) -> Result<(f64, QubitDensityMatrix)> {
    let resolved = layout.resolve(cs)?;
    let q = resolved.pairs.len();
    let basis = cs.rho().basis();

    // Map each code-space basis state of ρ′ to its logical index.
    let mut code_states: Vec<Option<usize>> = vec![None; 1 << q];
    for (idx, occ) in basis.states().enumerate() {
        if let Some(logical) = logical_index(occ, &resolved, layout.zero_rail) {
            code_states[logical] = Some(idx);
        }
    }

    let mut rho_q = QubitDensityMatrix::zero(q);
    let mut prob = 0.0;
    for (x, slot_x) in code_states.iter().enumerate() {
        let Some(ix) = slot_x else { continue };
        prob += cs.rho().entry(*ix, *ix).re;
        for (y, slot_y) in code_states.iter().enumerate() {
            let Some(iy) = slot_y else { continue };
            *rho_q.entry_mut(x, y) = cs.rho().entry(*ix, *iy);
        }
    }
    if prob <= 0.0 {
        return Err(Error::DegeneratePostselection);
    }
    rho_q.scale(1.0 / prob);
    Ok((prob, rho_q))
}

/// Logical index of an occupation vector if it lies in the code space.
fn logical_index(occ: &[u8], layout: &ResolvedLayout, zero_rail: ZeroRail) -> Option<usize> {
    if layout.spectators.iter().any(|&s| occ[s] != 0) {
        return None;
    }
    let q = layout.pairs.len();
    let mut index = 0usize;
    for (k, &(a, b)) in layout.pairs.iter().enumerate() {
        let bit = match (occ[a], occ[b]) {
            (1, 0) => match zero_rail {
                ZeroRail::First => 0,
                ZeroRail::Second => 1,
            },
            (0, 1) => match zero_rail {
                ZeroRail::First => 1,
                ZeroRail::Second => 0,
            },
            _ => return None,
        };
        index |= bit << (q - 1 - k);
    }
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{conditional_state, FockState, HeraldSpec};
    use crate::loss::{compose_lossy, LossModel};
    use crate::numerics::haar_unitary;

    #[test]
    fn postselected_fidelity_scalar_invariance() {
        let u = haar_unitary(4, 3).unwrap();
        assert!((postselected_fidelity(&u, &u).unwrap() - 1.0).abs() < 1e-12);
        let scaled = u.scale(Complex64::new(0.2, 0.1));
        assert!((postselected_fidelity(&u, &scaled).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_transform_rejected() {
        let u = haar_unitary(2, 3).unwrap();
        let zero = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            postselected_fidelity(&u, &zero),
            Err(Error::ZeroTransform)
        ));
    }

    #[test]
    fn rectangular_preimage_is_eta_to_the_m() {
        let m = 5;
        let eta = 0.99f64;
        let u = haar_unitary(m, 17).unwrap();
        let loss = LossModel::rectangular(m, eta).unwrap();
        let t = compose_lossy(&u, &loss).unwrap();
        for i in 0..m {
            let f = preimage_fidelity(&u, t.t(), i).unwrap();
            assert!((f - eta.powi(m as i32)).abs() < 1e-12, "mode {i}");
        }
        let avg = average_preimage_fidelity(&u, t.t()).unwrap();
        assert!((avg - eta.powi(m as i32)).abs() < 1e-12);
    }

    #[test]
    fn triangular_last_mode_beats_eta_to_the_m() {
        let m = 5;
        let eta = 0.9f64;
        let u = haar_unitary(m, 23).unwrap();
        let loss = LossModel::triangular(m, eta).unwrap();
        let t = compose_lossy(&u, &loss).unwrap();
        let f = preimage_fidelity(&u, t.t(), m - 1).unwrap();
        assert!(f >= eta.powi(m as i32) - 1e-12);
    }

    #[test]
    fn transmittance_of_single_photon_state() {
        // Lossless identity heralded on mode 1 leaves |1⟩ on mode 0.
        let u = ComplexMatrix::identity(2);
        let loss = LossModel::rectangular(2, 1.0).unwrap();
        let t = compose_lossy(&u, &loss).unwrap();
        let herald = HeraldSpec::single_photons(vec![1]);
        let cs = conditional_state(&t, &FockState(vec![1, 1]), &herald).unwrap();
        assert!((conditional_transmittance(&cs).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dual_rail_reads_single_photon_pairs() {
        // Two pairs on four modes, photons on rails (1,0) and (0,1):
        // logical |01⟩ under the first-rail convention.
        let u = ComplexMatrix::identity(4);
        let loss = LossModel::rectangular(4, 1.0).unwrap();
        let t = compose_lossy(&u, &loss).unwrap();
        // Herald nothing: measure no modes.
        let herald = HeraldSpec::new(vec![], vec![]).unwrap();
        let cs = conditional_state(&t, &FockState(vec![1, 0, 0, 1]), &herald).unwrap();
        let layout = QubitLayout::new(vec![(0, 1), (2, 3)], vec![]);
        let (prob, rho_q) = dual_rail_postselect(&cs, &layout).unwrap();
        assert!((prob - 1.0).abs() < 1e-12);
        assert!((rho_q.entry(0b01, 0b01).re - 1.0).abs() < 1e-12);

        let flipped = layout.with_zero_rail(ZeroRail::Second);
        let (_, rho_q2) = dual_rail_postselect(&cs, &flipped).unwrap();
        assert!((rho_q2.entry(0b10, 0b10).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_transmittance_of_occupied_pairs() {
        let u = ComplexMatrix::identity(4);
        let loss = LossModel::rectangular(4, 1.0).unwrap();
        let t = compose_lossy(&u, &loss).unwrap();
        let herald = HeraldSpec::new(vec![], vec![]).unwrap();
        let cs = conditional_state(&t, &FockState(vec![1, 0, 0, 0]), &herald).unwrap();
        let layout = QubitLayout::new(vec![(0, 1), (2, 3)], vec![]);
        let lambdas = qubit_transmittances(&cs, &layout).unwrap();
        assert!((lambdas[0] - 1.0).abs() < 1e-12);
        assert!(lambdas[1].abs() < 1e-12);
    }
}
