//! Pauli strings, stabilizer expectations, and GHZ-state diagnostics on
//! dual-rail qubit density matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn entry(self, row: usize, col: usize) -> Complex64 {
        match self {
            Pauli::I => {
                if row == col {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            }
            Pauli::X => {
                if row != col {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            }
            Pauli::Y => match (row, col) {
                (0, 1) => Complex64::new(0.0, -1.0),
                (1, 0) => Complex64::new(0.0, 1.0),
                _ => Complex64::ZERO,
            },
            Pauli::Z => match (row, col) {
                (0, 0) => Complex64::ONE,
                (1, 1) => -Complex64::ONE,
                _ => Complex64::ZERO,
            },
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Signed tensor product of single-qubit Paulis.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    letters: Vec<Pauli>,
    sign: f64,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, sign: f64) -> Self {
        debug_assert!(sign == 1.0 || sign == -1.0);
        Self { letters, sign }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn label(&self) -> String {
        let body: String = self.letters.iter().map(|p| p.letter()).collect();
        if self.sign < 0.0 {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Entry ⟨row|S|col⟩ with qubit 0 as the most significant bit.
    fn entry(&self, row: usize, col: usize) -> Complex64 {
        let q = self.letters.len();
        let mut acc = Complex64::new(self.sign, 0.0);
        for (k, p) in self.letters.iter().enumerate() {
            let shift = q - 1 - k;
            let r = (row >> shift) & 1;
            let c = (col >> shift) & 1;
            let factor = p.entry(r, c);
            if factor == Complex64::ZERO {
                return Complex64::ZERO;
            }
            acc *= factor;
        }
        acc
    }

    /// True when every letter is I or Z (diagonal in the computational basis).
    pub fn is_z_type(&self) -> bool {
        self.letters
            .iter()
            .all(|p| matches!(p, Pauli::I | Pauli::Z))
    }
}

/// The seven nontrivial elements of the GHZ-3 stabilizer group generated
/// by XXX, ZZI, and IZZ; products carry their algebraic signs so the ideal
/// GHZ state gives +1 for all of them.
pub fn ghz3_stabilizer_group() -> Vec<PauliString> {
    use Pauli::{X, Y, Z};
    let i = Pauli::I;
    vec![
        PauliString::new(vec![X, X, X], 1.0),
        PauliString::new(vec![Z, Z, i], 1.0),
        PauliString::new(vec![i, Z, Z], 1.0),
        PauliString::new(vec![Z, i, Z], 1.0),
        PauliString::new(vec![Y, Y, X], -1.0),
        PauliString::new(vec![Y, X, Y], -1.0),
        PauliString::new(vec![X, Y, Y], -1.0),
    ]
}

/// Density matrix of q dual-rail qubits (dimension 2^q).
#[derive(Debug, Clone)]
pub struct QubitDensityMatrix {
    qubits: usize,
    entries: Vec<Complex64>,
}

impl QubitDensityMatrix {
    pub fn zero(qubits: usize) -> Self {
        let dim = 1 << qubits;
        Self {
            qubits,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim() + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        let dim = self.dim();
        &mut self.entries[i * dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i).re).sum()
    }

    pub fn scale(&mut self, c: f64) {
        for z in &mut self.entries {
            *z *= c;
        }
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

    /// Power iteration for the dominant pure component.
    pub fn dominant_eigenvector(&self) -> (f64, Vec<Complex64>) {
        let dim = self.dim();
        let mut v: Vec<Complex64> = (0..dim).map(|i| Complex64::new(1.0 + i as f64 * 0.01, 0.0)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
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
            let next: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return (0.0, v);
            }
            v = w;
            v.iter_mut().for_each(|z| *z /= norm);
            if (next - value).abs() <= 1e-15 * next.abs().max(1.0) {
                return (next, v);
            }
            value = next;
        }
        (value, v)
    }
}

/// tr(ρS) for a signed Pauli string; real for Hermitian inputs.
pub fn stabilizer_expectation(rho: &QubitDensityMatrix, s: &PauliString) -> Result<f64> {
    if rho.qubits() != s.len() {
        return Err(Error::QubitCountMismatch {
            state: rho.qubits(),
            operator: s.len(),
        });
    }
    let dim = rho.dim();
    let mut acc = Complex64::ZERO;
    for i in 0..dim {
        for j in 0..dim {
            let sij = s.entry(i, j);
            if sij != Complex64::ZERO {
                acc += rho.entry(j, i) * sij;
            }
        }
    }
    Ok(acc.re)
}

/// Measurement error (1 − ⟨S⟩)/2.
pub fn stabilizer_error(rho: &QubitDensityMatrix, s: &PauliString) -> Result<f64> {
    Ok((1.0 - stabilizer_expectation(rho, s)?) / 2.0)
}

/// Overlap ⟨GHZ|ρ|GHZ⟩ with GHZ = (|0…0⟩ + |1…1⟩)/√2.
pub fn ghz_fidelity(rho: &QubitDensityMatrix) -> f64 {
    let last = rho.dim() - 1;
    0.5 * (rho.entry(0, 0) + rho.entry(0, last) + rho.entry(last, 0) + rho.entry(last, last)).re
}

/// Angle of the dominant pure component sin(α)|0…0⟩ + cos(α)|1…1⟩.
#[derive(Debug, Clone, Copy)]
pub struct AlphaEstimate {
    pub alpha: f64,
    pub purity: f64,
    /// Set when purity < 0.999 and the single-angle parametrization is
    /// unreliable.
    pub mixed_warning: bool,
}

/// Recovers α from the dominant eigenvector amplitude ratio
/// |⟨0…0|ψ⟩| / |⟨1…1|ψ⟩|.
pub fn alpha_of(rho: &QubitDensityMatrix) -> AlphaEstimate {
    let purity = rho.purity();
    let (_, v) = rho.dominant_eigenvector();
    let a_zero = v[0].norm();
    let a_one = v[rho.dim() - 1].norm();
    AlphaEstimate {
        alpha: a_zero.atan2(a_one),
        purity,
        mixed_warning: purity < 0.999,
    }
}
