//! Heralded conditional states of lossy interferometers, computed exactly.
//!
//! Two independent routes produce the same heralded state:
//!
//! * the production path expands input loss into a classical mixture,
//!   evolves each surviving branch through the ideal unitary, applies
//!   output-loss Kraus operators, and projects the herald;
//! * the oracle path evolves the input through the full unitary dilation
//!   and traces the virtual modes.
//!
//! Branches with different input-survival patterns or different output
//! loss vectors leave orthogonal records in the virtual modes, so they are
//! accumulated incoherently; coherence within a branch is preserved.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::basis::{check_mode_set, loss_vectors_up_to, FockBasis, FockState, MultiBasis};
use crate::fock::channel::{apply_output_loss_kraus, input_loss_mixture};
use crate::fock::density::DensityMatrix;
use crate::fock::evolve::evolve_basis_state;
use crate::loss::{dilate, LossyTransform};

/// Photon budget for the production path.
pub const MAX_PIPELINE_PHOTONS: usize = 8;
/// Mode and photon budget for the dilated oracle.
pub const MAX_ORACLE_MODES: usize = 30;
pub const MAX_ORACLE_PHOTONS: usize = 6;

/// Herald probabilities below this are floating-point residue of
/// interference-suppressed amplitudes (squared machine rounding, ~1e−32
/// after accumulation) and flag the state as degenerate. Every physical
/// herald probability at the supported photon counts and efficiencies is
/// many orders of magnitude larger.
pub const DEGENERATE_PS_THRESHOLD: f64 = 1e-26;

/// Required photon counts on a set of measured modes.
#[derive(Debug, Clone)]
pub struct HeraldSpec {
    measured_modes: Vec<usize>,
    pattern: Vec<u8>,
}

impl HeraldSpec {
    pub fn new(measured_modes: Vec<usize>, pattern: Vec<u8>) -> Result<Self> {
        if measured_modes.len() != pattern.len() {
            return Err(Error::DimensionMismatch {
                expected: measured_modes.len(),
                got: pattern.len(),
            });
        }
        Ok(Self {
            measured_modes,
            pattern,
        })
    }

    /// One photon in each of the listed modes.
    pub fn single_photons(measured_modes: Vec<usize>) -> Self {
        let pattern = vec![1; measured_modes.len()];
        Self {
            measured_modes,
            pattern,
        }
    }

    pub fn measured_modes(&self) -> &[usize] {
        &self.measured_modes
    }

    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    pub fn total(&self) -> usize {
        self.pattern.iter().map(|&v| v as usize).sum()
    }

    fn validate(&self, m: usize) -> Result<()> {
        check_mode_set(&self.measured_modes, m)
    }

    fn matches(&self, occ: &[u8]) -> bool {
        self.measured_modes
            .iter()
            .zip(&self.pattern)
            .all(|(&mode, &want)| occ[mode] == want)
    }
}

/// Heralded state: the normalized density matrix on the unmeasured nominal
/// modes together with the herald probability.
#[derive(Debug, Clone)]
pub struct ConditionalState {
    p_s: f64,
    rho: DensityMatrix,
    unmeasured_modes: Vec<usize>,
    degenerate: bool,
}

impl ConditionalState {
    pub fn p_s(&self) -> f64 {
        self.p_s
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    /// Original labels of the unmeasured modes, ascending; the i-th mode of
    /// `rho` is `unmeasured_modes[i]`.
    pub fn unmeasured_modes(&self) -> &[usize] {
        &self.unmeasured_modes
    }

    /// True when the herald probability vanished and `rho` is a placeholder
    /// vacuum state.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Position of an original mode label within `rho`'s mode ordering.
    pub fn reduced_index(&self, mode: usize) -> Option<usize> {
        self.unmeasured_modes.iter().position(|&x| x == mode)
    }

    fn degenerate_placeholder(unmeasured: Vec<usize>, cutoff: usize) -> Self {
        let basis = MultiBasis::new(unmeasured.len(), cutoff);
        let mut rho = DensityMatrix::zero(basis);
        rho.accumulate_outer(&[(0, Complex64::ONE)], 1.0);
        Self {
            p_s: 0.0,
            rho,
            unmeasured_modes: unmeasured,
            degenerate: true,
        }
    }
}

/// Exact heralded state via the input-mixture / output-Kraus expansion.
///
/// Deterministic: branches are evaluated independently (in parallel) and
/// reduced in a fixed order, so results do not depend on thread count.
pub fn conditional_state(
    transform: &LossyTransform,
    input: &FockState,
    herald: &HeraldSpec,
) -> Result<ConditionalState> {
    let m = transform.modes();
    if input.modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: input.modes(),
        });
    }
    let photons = input.total();
    if photons > MAX_PIPELINE_PHOTONS {
        return Err(Error::TooManyPhotons {
            photons,
            max: MAX_PIPELINE_PHOTONS,
        });
    }
    herald.validate(m)?;

    let herald_total = herald.total();
    let unmeasured: Vec<usize> = (0..m)
        .filter(|mode| !herald.measured_modes().contains(mode))
        .collect();
    if herald_total > photons {
        return Ok(ConditionalState::degenerate_placeholder(unmeasured, 0));
    }
    let cutoff = photons - herald_total;
    let rho_basis = MultiBasis::new(unmeasured.len(), cutoff);

    let loss = transform.loss();
    let branches = input_loss_mixture(input, loss.in_amps());

    let per_branch: Vec<(f64, Option<DensityMatrix>)> = branches
        .par_iter()
        .map(|(weight, surviving)| {
            branch_contribution(
                transform,
                surviving,
                *weight,
                herald,
                herald_total,
                &unmeasured,
                &rho_basis,
            )
        })
        .collect();

    let mut rho = DensityMatrix::zero(rho_basis);
    let mut p_s = 0.0;
    for (p, contribution) in per_branch {
        p_s += p;
        if let Some(part) = contribution {
            rho.add_assign(&part);
        }
    }

    if p_s <= DEGENERATE_PS_THRESHOLD {
        return Ok(ConditionalState::degenerate_placeholder(unmeasured, cutoff));
    }
    rho.scale(1.0 / p_s);
    Ok(ConditionalState {
        p_s,
        rho,
        unmeasured_modes: unmeasured,
        degenerate: false,
    })
}

#[allow(clippy::too_many_arguments)]
fn branch_contribution(
    transform: &LossyTransform,
    surviving: &FockState,
    weight: f64,
    herald: &HeraldSpec,
    herald_total: usize,
    unmeasured: &[usize],
    rho_basis: &MultiBasis,
) -> (f64, Option<DensityMatrix>) {
    let n_surviving = surviving.total();
    if n_surviving < herald_total {
        return (0.0, None);
    }
    let m = transform.modes();
    let layer = Arc::new(FockBasis::new(m, n_surviving));
    let psi = evolve_basis_state(transform.u(), &layer, surviving.occupations().to_vec());

    let mut rho = DensityMatrix::zero(rho_basis.clone());
    let mut p_s = 0.0;
    let out_amps = transform.loss().out_amps();
    for ell in loss_vectors_up_to(m, n_surviving - herald_total) {
        let phi = apply_output_loss_kraus(&psi, &ell, out_amps);
        let mut components: Vec<(usize, Complex64)> = Vec::new();
        for (idx, amp) in phi.amplitudes().iter().enumerate() {
            if *amp == Complex64::ZERO {
                continue;
            }
            let occ = phi.basis().state(idx);
            if !herald.matches(occ) {
                continue;
            }
            let reduced: Vec<u8> = unmeasured.iter().map(|&mode| occ[mode]).collect();
            components.push((rho_basis.index_of(&reduced), *amp));
        }
        if components.is_empty() {
            continue;
        }
        p_s += weight * components.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>();
        rho.accumulate_outer(&components, weight);
    }
    if p_s == 0.0 {
        (0.0, None)
    } else {
        (p_s, Some(rho))
    }
}

/// Test oracle: the same heralded state through the unitary dilation.
///
/// The pure input (virtual modes in vacuum) is evolved through the full
/// 3m-mode dilation, the herald is projected on the nominal measured
/// modes, and all virtual modes are traced out.
pub fn oracle_conditional_state_dilated(
    transform: &LossyTransform,
    input: &FockState,
    herald: &HeraldSpec,
) -> Result<ConditionalState> {
    let m = transform.modes();
    if input.modes() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: input.modes(),
        });
    }
    let total_modes = 3 * m;
    if total_modes > MAX_ORACLE_MODES {
        return Err(Error::DilationTooLarge {
            modes: total_modes,
            max: MAX_ORACLE_MODES,
        });
    }
    let photons = input.total();
    if photons > MAX_ORACLE_PHOTONS {
        return Err(Error::TooManyPhotons {
            photons,
            max: MAX_ORACLE_PHOTONS,
        });
    }
    herald.validate(m)?;

    let herald_total = herald.total();
    let unmeasured: Vec<usize> = (0..m)
        .filter(|mode| !herald.measured_modes().contains(mode))
        .collect();
    if herald_total > photons {
        return Ok(ConditionalState::degenerate_placeholder(unmeasured, 0));
    }
    let cutoff = photons - herald_total;

    let u_tilde = dilate(transform)?;
    let layer = Arc::new(FockBasis::new(total_modes, photons));
    let mut padded = vec![0u8; total_modes];
    padded[..m].copy_from_slice(input.occupations());
    let psi = evolve_basis_state(&u_tilde, &layer, padded);

    // Group herald-compatible amplitudes by their virtual-mode record; the
    // BTreeMap keeps the reduction order fixed.
    let rho_basis = MultiBasis::new(unmeasured.len(), cutoff);
    let mut groups: BTreeMap<Vec<u8>, Vec<(usize, Complex64)>> = BTreeMap::new();
    let mut p_s = 0.0;
    for (idx, amp) in psi.amplitudes().iter().enumerate() {
        if *amp == Complex64::ZERO {
            continue;
        }
        let occ = layer.state(idx);
        if !herald.matches(occ) {
            continue;
        }
        p_s += amp.norm_sqr();
        let reduced: Vec<u8> = unmeasured.iter().map(|&mode| occ[mode]).collect();
        groups
            .entry(occ[m..].to_vec())
            .or_default()
            .push((rho_basis.index_of(&reduced), *amp));
    }

    if p_s <= DEGENERATE_PS_THRESHOLD {
        return Ok(ConditionalState::degenerate_placeholder(unmeasured, cutoff));
    }
    let mut rho = DensityMatrix::zero(rho_basis);
    for components in groups.values() {
        rho.accumulate_outer(components, 1.0);
    }
    rho.scale(1.0 / p_s);
    Ok(ConditionalState {
        p_s,
        rho,
        unmeasured_modes: unmeasured,
        degenerate: false,
    })
}

/// Largest entrywise difference between the heralded states of two routes,
/// together with the herald-probability difference.
pub fn conditional_state_difference(a: &ConditionalState, b: &ConditionalState) -> (f64, f64) {
    assert_eq!(a.rho.dim(), b.rho.dim());
    let mut worst = 0.0f64;
    for i in 0..a.rho.dim() {
        for j in 0..a.rho.dim() {
            worst = worst.max((a.rho.entry(i, j) - b.rho.entry(i, j)).norm());
        }
    }
    ((a.p_s - b.p_s).abs(), worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::{compose_lossy, LossModel};
    use crate::numerics::{fourier_unitary, haar_unitary, ComplexMatrix};

    #[test]
    fn lossless_identity_heralds_cleanly() {
        let u = ComplexMatrix::identity(2);
        let lm = LossModel::rectangular(2, 1.0).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let herald = HeraldSpec::single_photons(vec![1]);
        let cs = conditional_state(&lt, &FockState(vec![1, 1]), &herald).unwrap();
        assert!((cs.p_s() - 1.0).abs() < 1e-12);
        assert!(!cs.is_degenerate());
        let one = cs.rho().basis().index_of(&[1]);
        assert!((cs.rho().entry(one, one).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lossless_fourier_distillation_herald() {
        let f = fourier_unitary(3).unwrap();
        let lm = LossModel::rectangular(3, 1.0).unwrap();
        let lt = compose_lossy(&f, &lm).unwrap();
        let herald = HeraldSpec::single_photons(vec![1, 2]);
        let cs = conditional_state(&lt, &FockState(vec![1, 1, 1]), &herald).unwrap();
        assert!((cs.p_s() - 1.0 / 3.0).abs() < 1e-12);
        let one = cs.rho().basis().index_of(&[1]);
        assert!((cs.rho().entry(one, one).re - 1.0).abs() < 1e-10);
        assert!(cs.rho().validate());
    }

    #[test]
    fn impossible_herald_is_degenerate() {
        let u = ComplexMatrix::identity(2);
        let lm = LossModel::rectangular(2, 0.9).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let herald = HeraldSpec::new(vec![0], vec![3]).unwrap();
        let cs = conditional_state(&lt, &FockState(vec![1, 1]), &herald).unwrap();
        assert!(cs.is_degenerate());
        assert_eq!(cs.p_s(), 0.0);
    }

    #[test]
    fn herald_probabilities_sum_to_one() {
        let m = 3;
        let u = haar_unitary(m, 31).unwrap();
        let lm = LossModel::triangular(m, 0.7).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let input = FockState(vec![1, 1, 0]);
        let measured = vec![0, 2];
        let mut total = 0.0;
        for a in 0..=2u8 {
            for b in 0..=2u8 {
                let herald = HeraldSpec::new(measured.clone(), vec![a, b]).unwrap();
                total += conditional_state(&lt, &input, &herald).unwrap().p_s();
            }
        }
        assert!((total - 1.0).abs() < 1e-9, "total {total}");
    }

    #[test]
    fn oracle_agrees_with_production_path() {
        let m = 3;
        let u = haar_unitary(m, 8).unwrap();
        let lm = LossModel::triangular(m, 0.8).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let input = FockState(vec![1, 1, 1]);
        let herald = HeraldSpec::single_photons(vec![1, 2]);
        let fast = conditional_state(&lt, &input, &herald).unwrap();
        let slow = oracle_conditional_state_dilated(&lt, &input, &herald).unwrap();
        let (dp, drho) = conditional_state_difference(&fast, &slow);
        assert!(dp < 1e-12, "p_s differs by {dp}");
        assert!(drho < 1e-10, "rho differs by {drho}");
    }

    #[test]
    fn oracle_guards_size() {
        let u = haar_unitary(11, 1).unwrap();
        let lm = LossModel::rectangular(11, 0.9).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let herald = HeraldSpec::single_photons(vec![0]);
        let input = FockState::with_photons_at(11, &[0]);
        assert!(matches!(
            oracle_conditional_state_dilated(&lt, &input, &herald),
            Err(Error::DilationTooLarge { .. })
        ));
    }
}
