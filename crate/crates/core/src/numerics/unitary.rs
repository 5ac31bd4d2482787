//! Structured and random unitary generation.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Name of the PRNG backing every seeded draw; recorded in experiment
/// output metadata so (algorithm, seed) pins reproducibility.
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// Recipe for a unitary transformation.
#[derive(Debug, Clone)]
pub enum UnitaryKind {
    /// Haar-random unitary, reproducible from the seed.
    Haar { seed: u64 },
    /// Discrete Fourier transform on `n` modes.
    Fourier { n: usize },
    /// Caller-supplied matrix, used as-is.
    Explicit(ComplexMatrix),
}

impl UnitaryKind {
    /// Materialize an m×m matrix. For `Fourier` and `Explicit` the intrinsic
    /// dimension must match `m`.
    pub fn realize(&self, m: usize) -> Result<ComplexMatrix> {
        match self {
            UnitaryKind::Haar { seed } => haar_unitary(m, *seed),
            UnitaryKind::Fourier { n } => {
                if *n != m {
                    return Err(Error::DimensionMismatch { expected: m, got: *n });
                }
                fourier_unitary(m)
            }
            UnitaryKind::Explicit(u) => {
                let n = u.require_square()?;
                if n != m {
                    return Err(Error::DimensionMismatch { expected: m, got: n });
                }
                Ok(u.clone())
            }
        }
    }
}

/// Haar-distributed m×m unitary, deterministic in the seed.
///
/// Complex Ginibre matrix, Householder QR, then each column of Q is
/// multiplied by the phase of the matching diagonal entry of R. The phase
/// fix makes the effective R-diagonal positive, which is what makes the QR
/// output exactly Haar rather than merely unitary.
pub fn haar_unitary(m: usize, seed: u64) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::TooFewModes { m: 0, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ginibre = ComplexMatrix::from_fn(m, m, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let (q, r) = householder_qr(&ginibre);
    let mut u = q;
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::ONE } else { d / d.norm() };
        for i in 0..m {
            u[(i, j)] *= phase;
        }
    }
    Ok(u)
}

/// N-mode discrete Fourier matrix, entries exp(i·2π·jk/N)/√N (zero-based).
pub fn fourier_unitary(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::TooFewModes { m: 0, min: 1 });
    }
    let norm = 1.0 / (n as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, n, |j, k| {
        // Reduce the exponent first so large j·k products keep full phase accuracy.
        let phase = TAU * (((j * k) % n) as f64) / (n as f64);
        Complex64::from_polar(norm, phase)
    }))
}

/// Householder QR of a square complex matrix; returns (Q, R) with Q unitary
/// and R upper triangular.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "QR expects a square matrix");
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);

    for k in 0..n {
        // Reflector annihilating the subdiagonal of column k.
        let mut x = vec![Complex64::ZERO; n - k];
        for i in k..n {
            x[i - k] = r[(i, k)];
        }
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { Complex64::ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm_x;
        let mut v = x;
        v[0] -= alpha;
        let v_norm_sqr = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if v_norm_sqr == 0.0 {
            continue;
        }

        // Apply H = I - 2·v v†/‖v‖² to R (left) and accumulate into Q (right).
        for col in k..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * r[(k + i, col)])
                .sum();
            let scale = dot * (2.0 / v_norm_sqr);
            for (i, vi) in v.iter().enumerate() {
                let entry = r[(k + i, col)] - scale * vi;
                r[(k + i, col)] = entry;
            }
        }
        for row in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| q[(row, k + i)] * vi)
                .sum();
            let scale = dot * (2.0 / v_norm_sqr);
            for (i, vi) in v.iter().enumerate() {
                let entry = q[(row, k + i)] - scale * vi.conj();
                q[(row, k + i)] = entry;
            }
        }
    }
    (q, r)
}
