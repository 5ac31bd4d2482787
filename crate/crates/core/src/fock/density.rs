//! Density matrices over truncated occupation-number bases.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::basis::MultiBasis;
use crate::numerics::{largest_hermitian_eigenvalue, ComplexMatrix};

/// Hermitian operator on the union of Fock layers 0..=cutoff.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    basis: MultiBasis,
    /// Row-major dim×dim.
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero(basis: MultiBasis) -> Self {
        let dim = basis.dim();
        Self {
            basis,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn basis(&self) -> &MultiBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        let dim = self.dim();
        &mut self.entries[i * dim + j]
    }

    /// Adds w·|v⟩⟨v| for a sparse vector given as (global index, amplitude).
    pub fn accumulate_outer(&mut self, components: &[(usize, Complex64)], weight: f64) {
        let dim = self.dim();
        for &(i, a) in components {
            for &(j, b) in components {
                self.entries[i * dim + j] += weight * a * b.conj();
            }
        }
    }

    pub fn add_assign(&mut self, other: &DensityMatrix) {
        assert_eq!(self.dim(), other.dim());
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    pub fn scale(&mut self, c: f64) {
        for z in &mut self.entries {
            *z *= c;
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i).re).sum()
    }

    pub fn purity(&self) -> f64 {
        let dim = self.dim();
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                acc += (self.entry(i, j) * self.entry(j, i)).re;
            }
        }
        acc
    }

    /// Probability weight on the all-modes-vacuum state.
    pub fn vacuum_probability(&self) -> f64 {
        self.entry(0, 0).re
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue, via power iteration on λ_max·I − ρ.
    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let as_matrix = ComplexMatrix::from_fn(dim, dim, |i, j| self.entry(i, j));
        let upper = largest_hermitian_eigenvalue(&as_matrix).max(self.trace());
        let shifted = ComplexMatrix::from_fn(dim, dim, |i, j| {
            let id = if i == j { Complex64::ONE } else { Complex64::ZERO };
            id * upper - self.entry(i, j)
        });
        upper - largest_hermitian_eigenvalue(&shifted)
    }

    /// Checks Hermiticity, trace range, and positivity at the tolerances
    /// the rest of the pipeline relies on.
    pub fn validate(&self) -> bool {
        self.hermiticity_deviation() < 1e-10
            && (-1e-10..=1.0 + 1e-10).contains(&self.trace())
            && self.min_eigenvalue() > -1e-9
    }

    /// Largest-eigenvalue eigenvector by power iteration, for extracting
    /// the dominant pure component of a near-pure state.
    pub fn dominant_eigenvector(&self) -> (f64, Vec<Complex64>) {
        let dim = self.dim();
        let mut v: Vec<Complex64> = (0..dim)
            .map(|i| Complex64::new(1.0 + (i % 7) as f64 * 0.1, 0.0))
            .collect();
        normalize(&mut v);
        let mut value = 0.0;
        for _ in 0..1000 {
            let mut w = vec![Complex64::ZERO; dim];
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = v
                    .iter()
                    .enumerate()
                    .map(|(j, vj)| self.entry(i, j) * vj)
                    .sum();
            }
            let next = v
                .iter()
                .zip(&w)
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>();
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return (0.0, v);
            }
            v = w;
            normalize(&mut v);
            if (next - value).abs() <= 1e-15 * next.abs().max(1.0) {
                return (next, v);
            }
            value = next;
        }
        (value, v)
    }

    /// Rows of the CSV export: (row_state, col_state, re, im), states
    /// printed as "n1|n2|…|nm".
    pub fn export_rows(&self) -> Vec<(String, String, f64, f64)> {
        let dim = self.dim();
        let label = |idx: usize| {
            self.basis
                .state(idx)
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join("|")
        };
        let mut rows = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = self.entry(i, j);
                rows.push((label(i), label(j), z.re, z.im));
            }
        }
        rows
    }
}

/// Partial trace onto the listed modes (indices into the density matrix's
/// mode set), preserving the photon-number cutoff.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let m = rho.basis().modes();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return Err(Error::DuplicateMode {
            mode: keep_sorted[0],
        });
    }
    for &mode in &keep_sorted {
        if mode >= m {
            return Err(Error::ModeOutOfRange { mode, m });
        }
    }
    let discard: Vec<usize> = (0..m).filter(|mode| !keep_sorted.contains(mode)).collect();

    let reduced_basis = MultiBasis::new(keep_sorted.len(), rho.basis().cutoff());
    let mut out = DensityMatrix::zero(reduced_basis);

    let dim = rho.dim();
    let split = |occ: &[u8]| -> (Vec<u8>, Vec<u8>) {
        (
            keep_sorted.iter().map(|&k| occ[k]).collect(),
            discard.iter().map(|&d| occ[d]).collect(),
        )
    };
    for i in 0..dim {
        let (keep_i, env_i) = split(rho.basis().state(i));
        for j in 0..dim {
            let z = rho.entry(i, j);
            if z == Complex64::ZERO {
                continue;
            }
            let (keep_j, env_j) = split(rho.basis().state(j));
            if env_i != env_j {
                continue;
            }
            let a = out.basis.index_of(&keep_i);
            let b = out.basis.index_of(&keep_j);
            *out.entry_mut(a, b) += z;
        }
    }
    Ok(out)
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v {
            *z /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure_state(basis: MultiBasis, components: &[(usize, Complex64)]) -> DensityMatrix {
        let mut rho = DensityMatrix::zero(basis);
        rho.accumulate_outer(components, 1.0);
        rho
    }

    #[test]
    fn outer_product_trace_and_purity() {
        let basis = MultiBasis::new(2, 1);
        let z = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = pure_state(basis, &[(1, z), (2, z)]);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(rho.validate());
    }

    #[test]
    fn keep_all_modes_is_identity_map() {
        let basis = MultiBasis::new(2, 1);
        let z = Complex64::new(0.6, 0.0);
        let w = Complex64::new(0.8, 0.0);
        let rho = pure_state(basis, &[(1, z), (2, w)]);
        let traced = partial_trace(&rho, &[0, 1]).unwrap();
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                assert!((rho.entry(i, j) - traced.entry(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn product_state_traces_to_factor() {
        // |1⟩⊗|0⟩ on two modes; tracing out mode 1 leaves |1⟩⟨1|.
        let basis = MultiBasis::new(2, 1);
        let idx = basis.index_of(&[1, 0]);
        let rho = pure_state(basis, &[(idx, Complex64::ONE)]);
        let reduced = partial_trace(&rho, &[0]).unwrap();
        assert!((reduced.trace() - 1.0).abs() < 1e-12);
        let one = reduced.basis().index_of(&[1]);
        assert!((reduced.entry(one, one).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let basis = MultiBasis::new(3, 2);
        let dim = basis.dim();
        let mut rho = DensityMatrix::zero(basis);
        // Deterministic mixed state: weighted projectors onto each basis state.
        let mut total = 0.0;
        for i in 0..dim {
            let w = 1.0 / (1.0 + i as f64);
            total += w;
            rho.accumulate_outer(&[(i, Complex64::ONE)], w);
        }
        rho.scale(1.0 / total);
        let reduced = partial_trace(&rho, &[1]).unwrap();
        assert!((reduced.trace() - rho.trace()).abs() < 1e-12);
        assert!(reduced.validate());
    }

    #[test]
    fn empty_keep_rejected() {
        let rho = DensityMatrix::zero(MultiBasis::new(2, 1));
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::EmptyKeepSet)));
    }

    #[test]
    fn export_row_labels() {
        let rho = DensityMatrix::zero(MultiBasis::new(2, 1));
        let rows = rho.export_rows();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0].0, "0|0");
        assert_eq!(rows[1].1, "0|1");
    }
}
