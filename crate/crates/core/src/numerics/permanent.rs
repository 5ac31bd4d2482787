//! Matrix permanents via Ryser's formula with Gray-code subset updates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Largest supported matrix side. 2^20 subset iterations keep the runtime
/// and the f64 accumulation error within bounds.
pub const MAX_PERMANENT_SIDE: usize = 20;

/// Permanent of a square complex matrix.
///
/// Ryser with Gray-code ordering: each subset step updates the running row
/// sums with a single column, so the cost is O(2^n · n). The permanent of
/// the empty matrix is 1.
pub fn permanent(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.require_square()?;
    if n > MAX_PERMANENT_SIDE {
        return Err(Error::PermanentTooLarge {
            side: n,
            max: MAX_PERMANENT_SIDE,
        });
    }
    Ok(permanent_unchecked(m))
}

pub(crate) fn permanent_unchecked(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    if n == 0 {
        return Complex64::ONE;
    }
    if n == 1 {
        return m[(0, 0)];
    }
    let mut row_sums = vec![Complex64::ZERO; n];
    let mut total = Complex64::ZERO;
    let mut gray: u64 = 0;
    // Iterate nonempty column subsets in Gray-code order; the sign of each
    // term is (-1)^(n - |S|).
    for k in 1u64..(1u64 << n) {
        let next_gray = k ^ (k >> 1);
        let flipped = (gray ^ next_gray).trailing_zeros() as usize;
        if next_gray & (1 << flipped) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, flipped)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, flipped)];
            }
        }
        gray = next_gray;
        let prod: Complex64 = row_sums.iter().product();
        if (n as u32 - next_gray.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}
