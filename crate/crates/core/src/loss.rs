//! Design-dependent loss matrices, lossy transfer matrices, and unitary
//! dilations with explicit virtual modes.
//!
//! A mesh of two-mode unit cells with uniform per-cell transmission η loses
//! photons in a pattern set by the mesh layout. The entrywise amplitude
//! transmittance between output port i and input port j is collected in a
//! matrix Γ, and the lossy transfer matrix is the entrywise product Γ⊙U.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, UNITARY_TOL};

/// Mesh layout. Exactly these two designs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignKind {
    Rectangular,
    Triangular,
}

impl DesignKind {
    pub const BOTH: [DesignKind; 2] = [DesignKind::Rectangular, DesignKind::Triangular];

    pub fn label(self) -> &'static str {
        match self {
            DesignKind::Rectangular => "rectangular",
            DesignKind::Triangular => "triangular",
        }
    }
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Converts a loss figure in dB to a transmission efficiency 10^(−l/10).
pub fn eta_from_db(l: f64) -> Result<f64> {
    if l < 0.0 || !l.is_finite() {
        return Err(Error::NegativeLossDb { db: l });
    }
    Ok(10f64.powf(-l / 10.0))
}

/// Entrywise amplitude-transmittance matrix Γ for one design, together with
/// its rank-one factorization into per-mode input and output amplitudes.
#[derive(Debug, Clone)]
pub struct LossModel {
    m: usize,
    eta: f64,
    design: DesignKind,
    /// Row-major m×m, entries in [0,1]; gamma[i][j] = out_amps[i]·in_amps[j].
    gamma: Vec<f64>,
    in_amps: Vec<f64>,
    out_amps: Vec<f64>,
}

impl LossModel {
    /// Uniform loss: every entry η^(m/2).
    pub fn rectangular(m: usize, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        if m < 1 {
            return Err(Error::TooFewModes { m, min: 1 });
        }
        let amp = eta.powf(m as f64 / 4.0);
        Ok(Self::from_factors(
            m,
            eta,
            DesignKind::Rectangular,
            vec![amp; m],
            vec![amp; m],
        ))
    }

    /// Asymmetric loss: the exponent of Γ_ij decreases toward the last
    /// output/input ports, with the first row and column clamped to the
    /// second. The clamp is folded into the factors via max(index, 2) so a
    /// single code path produces all four regions.
    pub fn triangular(m: usize, eta: f64) -> Result<Self> {
        check_eta(eta)?;
        if m < 2 {
            return Err(Error::TooFewModes { m, min: 2 });
        }
        let amps: Vec<f64> = (1..=m)
            .map(|port| {
                let clamped = port.max(2) as f64;
                eta.powf(0.25) * eta.powf((m as f64 - clamped) / 2.0)
            })
            .collect();
        Ok(Self::from_factors(
            m,
            eta,
            DesignKind::Triangular,
            amps.clone(),
            amps,
        ))
    }

    pub fn for_design(design: DesignKind, m: usize, eta: f64) -> Result<Self> {
        match design {
            DesignKind::Rectangular => Self::rectangular(m, eta),
            DesignKind::Triangular => Self::triangular(m, eta),
        }
    }

    fn from_factors(
        m: usize,
        eta: f64,
        design: DesignKind,
        in_amps: Vec<f64>,
        out_amps: Vec<f64>,
    ) -> Self {
        let mut gamma = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                gamma[i * m + j] = out_amps[i] * in_amps[j];
            }
        }
        Self {
            m,
            eta,
            design,
            gamma,
            in_amps,
            out_amps,
        }
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn design(&self) -> DesignKind {
        self.design
    }

    pub fn gamma(&self, i: usize, j: usize) -> f64 {
        self.gamma[i * self.m + j]
    }

    /// Per-mode input amplitude transmittances g_in(j).
    pub fn in_amps(&self) -> &[f64] {
        &self.in_amps
    }

    /// Per-mode output amplitude transmittances g_out(i).
    pub fn out_amps(&self) -> &[f64] {
        &self.out_amps
    }

    /// Largest residual of the rank-one factorization over all entries.
    pub fn separability_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.m {
            for j in 0..self.m {
                worst = worst.max((self.gamma(i, j) - self.out_amps[i] * self.in_amps[j]).abs());
            }
        }
        worst
    }
}

/// Lossy transfer matrix T = Γ⊙U together with its ideal target.
#[derive(Debug, Clone)]
pub struct LossyTransform {
    t: ComplexMatrix,
    u: ComplexMatrix,
    loss: LossModel,
}

impl LossyTransform {
    pub fn t(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn loss(&self) -> &LossModel {
        &self.loss
    }

    pub fn modes(&self) -> usize {
        self.loss.m
    }

    /// Assemble without the unitarity gate of [`compose_lossy`].
    ///
    /// For callers that drive the Fock engine with a matrix whose relevant
    /// columns form an isometry but whose remaining columns are filler
    /// (e.g. a printed submatrix completed to full size). The entrywise
    /// product is still taken against the loss model.
    pub fn from_parts(u: ComplexMatrix, loss: LossModel) -> Result<Self> {
        let n = u.require_square()?;
        if n != loss.m {
            return Err(Error::DimensionMismatch { expected: loss.m, got: n });
        }
        let t = hadamard_gamma(&u, &loss);
        Ok(Self { t, u, loss })
    }
}

/// T = Γ⊙U for a unitary target U.
pub fn compose_lossy(u: &ComplexMatrix, loss: &LossModel) -> Result<LossyTransform> {
    let n = u.require_square()?;
    if n != loss.m {
        return Err(Error::DimensionMismatch { expected: loss.m, got: n });
    }
    let deviation = u.unitarity_deviation()?;
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary {
            deviation,
            tol: UNITARY_TOL,
        });
    }
    Ok(LossyTransform {
        t: hadamard_gamma(u, loss),
        u: u.clone(),
        loss: loss.clone(),
    })
}

/// Entrywise product of an arbitrary nonnegative loss matrix with U.
/// Accepts non-separable Γ; such matrices cannot be dilated but the lossy
/// transfer matrix itself is well defined.
pub fn hadamard_general(u: &ComplexMatrix, gamma: &[f64], m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |i, j| u[(i, j)] * gamma[i * m + j])
}

fn hadamard_gamma(u: &ComplexMatrix, loss: &LossModel) -> ComplexMatrix {
    ComplexMatrix::from_fn(loss.m, loss.m, |i, j| u[(i, j)] * loss.gamma(i, j))
}

/// Embeds T = Γ⊙U as the nominal block of a 3m×3m unitary.
///
/// Mode layout: [nominal 1..m | input-virtual m+1..2m | output-virtual
/// 2m+1..3m]. Input-side loss couples nominal mode j to input-virtual mode
/// m+j through a real beamsplitter with transmission amplitude g_in(j);
/// output-side loss couples nominal i to output-virtual 2m+i with g_out(i).
/// The result is B_out · (U ⊕ I_2m) · B_in, whose top-left m×m block equals
/// T. Requires a separable loss model.
pub fn dilate(transform: &LossyTransform) -> Result<ComplexMatrix> {
    let loss = &transform.loss;
    let residual = loss.separability_residual();
    if residual > 1e-12 {
        return Err(Error::NonSeparableLoss { residual });
    }
    let m = loss.m;
    let total = 3 * m;

    let embedded = transform.u.direct_sum(&ComplexMatrix::identity(2 * m));
    let b_in = beamsplitter_bank(total, loss.in_amps(), |j| (j, m + j));
    let b_out = beamsplitter_bank(total, loss.out_amps(), |i| (i, 2 * m + i));

    Ok(b_out.mul(&embedded).mul(&b_in))
}

/// Block-diagonal bank of 2×2 real beamsplitters [[g, r], [r, −g]] with
/// r = √(1−g²), acting on the mode pairs produced by `pair`.
fn beamsplitter_bank(
    total: usize,
    amps: &[f64],
    pair: impl Fn(usize) -> (usize, usize),
) -> ComplexMatrix {
    let mut b = ComplexMatrix::identity(total);
    for (k, &g) in amps.iter().enumerate() {
        let (a, v) = pair(k);
        let r = (1.0 - g * g).max(0.0).sqrt();
        b[(a, a)] = Complex64::new(g, 0.0);
        b[(a, v)] = Complex64::new(r, 0.0);
        b[(v, a)] = Complex64::new(r, 0.0);
        b[(v, v)] = Complex64::new(-g, 0.0);
    }
    b
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
        return Err(Error::InvalidEta { eta });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{fourier_unitary, haar_unitary};

    #[test]
    fn eta_from_db_values() {
        assert_eq!(eta_from_db(0.0).unwrap(), 1.0);
        assert!((eta_from_db(3.0103).unwrap() - 0.5).abs() < 1e-4);
        // 0.8 dB spread over 12 unit-cell columns.
        assert!((eta_from_db(0.8 / 12.0).unwrap() - 0.9848).abs() < 5e-5);
        assert!(eta_from_db(-0.1).is_err());
    }

    #[test]
    fn rectangular_gamma_constant() {
        let lm = LossModel::rectangular(2, 0.81).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((lm.gamma(i, j) - 0.81).abs() < 1e-12);
            }
        }

        let ones = LossModel::rectangular(5, 1.0).unwrap();
        let zeros = LossModel::rectangular(5, 0.0).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(ones.gamma(i, j), 1.0);
                assert_eq!(zeros.gamma(i, j), 0.0);
            }
        }
    }

    #[test]
    fn triangular_gamma_matches_piecewise_definition() {
        let eta = 0.7f64;
        let lm = LossModel::triangular(3, eta).unwrap();
        let expect = [
            [eta.powf(1.5), eta.powf(1.5), eta],
            [eta.powf(1.5), eta.powf(1.5), eta],
            [eta, eta, eta.sqrt()],
        ];
        for (i, row) in expect.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert!((lm.gamma(i, j) - want).abs() < 1e-12, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn triangular_last_port_has_least_loss() {
        let eta = 0.6f64;
        let lm = LossModel::triangular(5, eta).unwrap();
        let corner = lm.gamma(4, 4);
        assert!((corner - eta.sqrt()).abs() < 1e-12);
        for i in 0..5 {
            for j in 0..5 {
                assert!(lm.gamma(i, j) <= corner + 1e-12);
            }
        }
        // Γ_mm ordering against the rectangular design.
        let rect = LossModel::rectangular(5, eta).unwrap();
        assert!(corner >= rect.gamma(4, 4));
    }

    #[test]
    fn separability_over_design_grid() {
        for &eta in &[0.0, 0.3, 0.7, 0.9848, 1.0] {
            for m in 2..=12 {
                for design in DesignKind::BOTH {
                    let lm = LossModel::for_design(design, m, eta).unwrap();
                    assert!(
                        lm.separability_residual() < 1e-12,
                        "{design} m={m} eta={eta}"
                    );
                    for i in 0..m {
                        for j in 0..m {
                            let g = lm.gamma(i, j);
                            assert!((0.0..=1.0 + 1e-12).contains(&g));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn compose_checks_unitarity_and_dimensions() {
        let lm = LossModel::rectangular(3, 0.9).unwrap();
        let not_unitary = ComplexMatrix::identity(3).scale(Complex64::new(0.9, 0.0));
        assert!(compose_lossy(&not_unitary, &lm).is_err());

        let u4 = haar_unitary(4, 1).unwrap();
        assert!(compose_lossy(&u4, &lm).is_err());
    }

    #[test]
    fn compose_lossless_is_identity_on_u() {
        let u = haar_unitary(4, 9).unwrap();
        let lm = LossModel::rectangular(4, 1.0).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        assert!(lt.t().max_abs_diff(&u) < 1e-15);
    }

    #[test]
    fn compose_rectangular_is_scalar_multiple() {
        let m = 4;
        let eta = 0.8f64;
        let u = haar_unitary(m, 11).unwrap();
        let lm = LossModel::rectangular(m, eta).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let scaled = u.scale(Complex64::new(eta.powf(m as f64 / 2.0), 0.0));
        assert!(lt.t().max_abs_diff(&scaled) < 1e-14);
        assert!(lt.t().is_subunitary(UNITARY_TOL).unwrap());
    }

    #[test]
    fn compose_triangular_fourier_corner_entry() {
        let u = fourier_unitary(3).unwrap();
        let lm = LossModel::triangular(3, 0.9).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let expect = 0.9f64.sqrt() / 3f64.sqrt();
        assert!((lt.t()[(2, 2)].norm() - expect).abs() < 1e-12);
        // |t| ≤ |u| entrywise.
        for i in 0..3 {
            for j in 0..3 {
                assert!(lt.t()[(i, j)].norm() <= lt.u()[(i, j)].norm() + 1e-15);
            }
        }
    }

    #[test]
    fn dilation_is_unitary_with_t_block() {
        let m = 3;
        let u = fourier_unitary(m).unwrap();
        let lm = LossModel::triangular(m, 0.81).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let big = dilate(&lt).unwrap();
        assert_eq!(big.rows(), 3 * m);
        assert!(big.unitarity_deviation().unwrap() < 1e-10);
        for i in 0..m {
            for j in 0..m {
                assert!((big[(i, j)] - lt.t()[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lossless_dilation_is_direct_sum() {
        let m = 3;
        let u = haar_unitary(m, 5).unwrap();
        let lm = LossModel::rectangular(m, 1.0).unwrap();
        let lt = compose_lossy(&u, &lm).unwrap();
        let big = dilate(&lt).unwrap();
        let expect = u.direct_sum(&ComplexMatrix::identity(2 * m));
        // Virtual blocks pick up a -1 reflection phase on vacuum modes,
        // which is unobservable; compare only the nominal block and
        // unitarity here.
        assert!(big.unitarity_deviation().unwrap() < 1e-12);
        for i in 0..m {
            for j in 0..m {
                assert!((big[(i, j)] - expect[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn random_dilations_hold_contract() {
        for case in 0..50 {
            let m = 2 + (case % 4);
            let eta = [0.3, 0.5, 0.7, 0.9, 1.0][case % 5];
            let design = DesignKind::BOTH[case % 2];
            let u = haar_unitary(m, 1000 + case as u64).unwrap();
            let lm = LossModel::for_design(design, m, eta).unwrap();
            let lt = compose_lossy(&u, &lm).unwrap();
            let big = dilate(&lt).unwrap();
            assert!(big.unitarity_deviation().unwrap() < 1e-10, "case {case}");
            for i in 0..m {
                for j in 0..m {
                    assert!((big[(i, j)] - lt.t()[(i, j)]).norm() < 1e-10);
                }
            }
        }
    }
}
