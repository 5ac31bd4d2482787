//! Per-mode amplitude-damping loss channels on Fock states.

use std::sync::Arc;

use num_complex::Complex64;

use crate::fock::basis::{binomial, FockBasis, FockState};
use crate::fock::vector::FockVector;

/// Classical mixture left after independent per-photon input loss.
///
/// Photon survival in mode j is Bernoulli with probability g_in(j)², so a
/// mode holding n photons keeps k with binomial weight. Branches with zero
/// probability are dropped. The returned weights sum to 1.
pub fn input_loss_mixture(input: &FockState, in_amps: &[f64]) -> Vec<(f64, FockState)> {
    assert_eq!(input.modes(), in_amps.len());
    let mut branches = vec![(1.0f64, Vec::<u8>::with_capacity(input.modes()))];
    for (mode, &n) in input.occupations().iter().enumerate() {
        let survive = in_amps[mode] * in_amps[mode];
        let mut next = Vec::with_capacity(branches.len() * (n as usize + 1));
        for (weight, occ) in &branches {
            for kept in 0..=n {
                let w = weight
                    * binomial(n as usize, kept as usize) as f64
                    * survive.powi(kept as i32)
                    * (1.0 - survive).powi((n - kept) as i32);
                if w == 0.0 {
                    continue;
                }
                let mut occ = occ.clone();
                occ.push(kept);
                next.push((w, occ));
            }
        }
        branches = next;
    }
    branches
        .into_iter()
        .map(|(w, occ)| (w, FockState(occ)))
        .collect()
}

/// Applies the output-loss Kraus operator E_ℓ that removes exactly ℓ_i
/// photons from mode i.
///
/// E_ℓ |n⟩ = √(∏ C(n_i, ℓ_i)) · ∏ t_i^((n_i−ℓ_i)/2) (1−t_i)^(ℓ_i/2) |n−ℓ⟩
/// with t_i = out_amps_i². Source states with any n_i < ℓ_i contribute
/// nothing. The result lives on the photon layer reduced by Σℓ.
pub fn apply_output_loss_kraus(psi: &FockVector, ell: &[u8], out_amps: &[f64]) -> FockVector {
    let m = psi.basis().modes();
    assert_eq!(ell.len(), m);
    assert_eq!(out_amps.len(), m);
    let lost: usize = ell.iter().map(|&v| v as usize).sum();
    let n = psi.basis().photons();
    assert!(lost <= n, "cannot remove more photons than the layer holds");

    let target = Arc::new(FockBasis::new(m, n - lost));
    let mut out = FockVector::zero(Arc::clone(&target));
    let mut reduced = vec![0u8; m];
    'source: for (idx, amp) in psi.amplitudes().iter().enumerate() {
        if *amp == Complex64::ZERO {
            continue;
        }
        let occ = psi.basis().state(idx);
        let mut coeff = 1.0f64;
        for i in 0..m {
            if occ[i] < ell[i] {
                continue 'source;
            }
            reduced[i] = occ[i] - ell[i];
            let t = out_amps[i] * out_amps[i];
            coeff *= (binomial(occ[i] as usize, ell[i] as usize) as f64
                * t.powi(reduced[i] as i32)
                * (1.0 - t).powi(ell[i] as i32))
            .sqrt();
        }
        if coeff == 0.0 {
            continue;
        }
        let target_idx = target.rank(&reduced);
        out.amplitudes_mut()[target_idx] += amp * coeff;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::basis::loss_vectors_up_to;

    #[test]
    fn lossless_input_is_single_branch() {
        let input = FockState(vec![1, 2, 0]);
        let mix = input_loss_mixture(&input, &[1.0, 1.0, 1.0]);
        assert_eq!(mix.len(), 1);
        assert_eq!(mix[0].0, 1.0);
        assert_eq!(mix[0].1, input);
    }

    #[test]
    fn single_photon_branch_weights() {
        let input = FockState(vec![0, 1]);
        let g = 0.9f64.sqrt();
        let mix = input_loss_mixture(&input, &[1.0, g]);
        assert_eq!(mix.len(), 2);
        let total: f64 = mix.iter().map(|(w, _)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for (w, s) in &mix {
            match s.total() {
                1 => assert!((w - 0.9).abs() < 1e-12),
                0 => assert!((w - 0.1).abs() < 1e-12),
                _ => panic!("unexpected branch"),
            }
        }
    }

    #[test]
    fn two_mode_product_of_bernoullis() {
        let input = FockState(vec![1, 1]);
        let mix = input_loss_mixture(&input, &[0.9f64.sqrt(), 0.5f64.sqrt()]);
        let mut weights: Vec<f64> = mix.iter().map(|(w, _)| *w).collect();
        weights.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [0.05, 0.05, 0.45, 0.45];
        for (w, e) in weights.iter().zip(expect) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn kraus_identity_when_no_loss() {
        let basis = Arc::new(FockBasis::new(2, 2));
        let psi = FockVector::basis_state(Arc::clone(&basis), &FockState(vec![1, 1]));
        let out = apply_output_loss_kraus(&psi, &[0, 0], &[1.0, 1.0]);
        assert!((out.amplitude_of(&FockState(vec![1, 1])) - Complex64::ONE).norm() < 1e-14);
    }

    #[test]
    fn kraus_two_photon_coefficient() {
        // |2⟩ with t = 0.5 and ℓ = 1: amplitude √(2·0.5·0.5) = √0.5 on |1⟩.
        let basis = Arc::new(FockBasis::new(1, 2));
        let psi = FockVector::basis_state(Arc::clone(&basis), &FockState(vec![2]));
        let out = apply_output_loss_kraus(&psi, &[1], &[0.5f64.sqrt()]);
        let amp = out.amplitude_of(&FockState(vec![1]));
        assert!((amp.norm() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kraus_completeness_preserves_norm() {
        let basis = Arc::new(FockBasis::new(3, 3));
        let amps: Vec<Complex64> = (0..basis.len())
            .map(|k| Complex64::new((k as f64).sin() + 0.2, (k as f64).cos()))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = amps.into_iter().map(|z| z / norm).collect();
        let psi = FockVector::from_amplitudes(Arc::clone(&basis), amps);

        let out_amps = [0.9f64.sqrt(), 0.6f64.sqrt(), 1.0];
        let mut total = 0.0;
        for ell in loss_vectors_up_to(3, 3) {
            total += apply_output_loss_kraus(&psi, &ell, &out_amps).norm_sqr();
        }
        assert!((total - 1.0).abs() < 1e-10, "total {total}");
    }
}
