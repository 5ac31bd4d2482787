//! Occupation-number basis enumeration with combinatorial ranking.

use crate::error::{Error, Result};

/// Occupation numbers, one per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockState(pub Vec<u8>);

impl FockState {
    pub fn vacuum(m: usize) -> Self {
        Self(vec![0; m])
    }

    /// One photon in every mode.
    pub fn uniform_single(m: usize) -> Self {
        Self(vec![1; m])
    }

    /// One photon in each listed mode, zero elsewhere.
    pub fn with_photons_at(m: usize, modes: &[usize]) -> Self {
        let mut occ = vec![0u8; m];
        for &j in modes {
            occ[j] += 1;
        }
        Self(occ)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    pub fn occupations(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Display for FockState {
    /// Prints as "n1|n2|…|nm".
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join("|"))
    }
}

/// Number of occupation vectors of `parts` modes summing to `total`:
/// C(total + parts − 1, total).
pub fn compositions(total: usize, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(total == 0);
    }
    binomial(total + parts - 1, total)
}

/// Exact binomial coefficient in u64 range (small arguments only).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All occupation vectors of m modes at fixed total photon number, in
/// ascending lexicographic order, with O(m·n) rank/unrank.
#[derive(Debug, Clone)]
pub struct FockBasis {
    m: usize,
    n: usize,
    /// Flattened occupations, stride m.
    occs: Vec<u8>,
}

impl FockBasis {
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m >= 1, "basis needs at least one mode");
        let size = compositions(n, m);
        let mut occs = Vec::with_capacity(size * m);
        let mut current = vec![0u8; m];
        emit_lex(&mut current, 0, n, &mut occs);
        debug_assert_eq!(occs.len(), size * m);
        Self { m, n, occs }
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn photons(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.occs.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.occs.is_empty()
    }

    /// Occupations of the basis state at `index`.
    pub fn state(&self, index: usize) -> &[u8] {
        &self.occs[index * self.m..(index + 1) * self.m]
    }

    pub fn state_owned(&self, index: usize) -> FockState {
        FockState(self.state(index).to_vec())
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.occs.chunks_exact(self.m)
    }

    /// Lexicographic rank of an occupation vector with the right total.
    pub fn rank(&self, occ: &[u8]) -> usize {
        debug_assert_eq!(occ.len(), self.m);
        let mut remaining = self.n;
        let mut rank = 0;
        for (pos, &v) in occ.iter().enumerate() {
            let v = v as usize;
            let tail = self.m - pos - 1;
            for smaller in 0..v {
                rank += compositions(remaining - smaller, tail);
            }
            remaining -= v;
        }
        rank
    }
}

/// Recursive lexicographic emission of occupation vectors.
fn emit_lex(current: &mut [u8], pos: usize, remaining: usize, out: &mut Vec<u8>) {
    if pos + 1 == current.len() {
        current[pos] = remaining as u8;
        out.extend_from_slice(current);
        return;
    }
    for v in 0..=remaining {
        current[pos] = v as u8;
        emit_lex(current, pos + 1, remaining - v, out);
    }
    current[pos] = 0;
}

/// All loss vectors ℓ (occupations over m modes) with total at most `max`,
/// grouped in ascending total order.
pub fn loss_vectors_up_to(m: usize, max: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for total in 0..=max {
        let basis = FockBasis::new(m, total);
        for s in basis.iter() {
            out.push(s.to_vec());
        }
    }
    out
}

/// Union of the occupation bases for photon numbers 0..=cutoff, with a
/// global index that is the layer offset plus the in-layer rank.
#[derive(Debug, Clone)]
pub struct MultiBasis {
    m: usize,
    cutoff: usize,
    layers: Vec<FockBasis>,
    offsets: Vec<usize>,
}

impl MultiBasis {
    pub fn new(m: usize, cutoff: usize) -> Self {
        let layers: Vec<FockBasis> = (0..=cutoff).map(|n| FockBasis::new(m, n)).collect();
        let mut offsets = Vec::with_capacity(layers.len());
        let mut acc = 0;
        for layer in &layers {
            offsets.push(acc);
            acc += layer.len();
        }
        Self {
            m,
            cutoff,
            layers,
            offsets,
        }
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0) + self.layers.last().map_or(0, FockBasis::len)
    }

    pub fn layer(&self, n: usize) -> &FockBasis {
        &self.layers[n]
    }

    pub fn layer_offset(&self, n: usize) -> usize {
        self.offsets[n]
    }

    /// Global index of an occupation vector (total must be ≤ cutoff).
    pub fn index_of(&self, occ: &[u8]) -> usize {
        let total: usize = occ.iter().map(|&v| v as usize).sum();
        self.offsets[total] + self.layers[total].rank(occ)
    }

    /// Occupations of the global basis state at `index`.
    pub fn state(&self, index: usize) -> &[u8] {
        let layer = match self.offsets.binary_search(&index) {
            Ok(l) => l,
            Err(l) => l - 1,
        };
        self.layers[layer].state(index - self.offsets[layer])
    }

    pub fn states(&self) -> impl Iterator<Item = &[u8]> {
        self.layers.iter().flat_map(FockBasis::iter)
    }
}

/// Validates a herald-style mode set: distinct, in range.
pub fn check_mode_set(modes: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    for &mode in modes {
        if mode >= m {
            return Err(Error::ModeOutOfRange { mode, m });
        }
        if seen[mode] {
            return Err(Error::DuplicateMode { mode });
        }
        seen[mode] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_size_matches_compositions() {
        for m in 1..=5 {
            for n in 0..=5 {
                let basis = FockBasis::new(m, n);
                assert_eq!(basis.len(), compositions(n, m), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn rank_and_unrank_roundtrip() {
        let basis = FockBasis::new(4, 5);
        for idx in 0..basis.len() {
            assert_eq!(basis.rank(basis.state(idx)), idx);
        }
    }

    #[test]
    fn lexicographic_order() {
        let basis = FockBasis::new(2, 2);
        let states: Vec<&[u8]> = basis.iter().collect();
        assert_eq!(states, vec![&[0, 2][..], &[1, 1][..], &[2, 0][..]]);
    }

    #[test]
    fn multibasis_indices_are_contiguous() {
        let mb = MultiBasis::new(3, 3);
        assert_eq!(mb.dim(), (0..=3).map(|n| compositions(n, 3)).sum::<usize>());
        for idx in 0..mb.dim() {
            assert_eq!(mb.index_of(mb.state(idx)), idx);
        }
        assert_eq!(mb.index_of(&[0, 0, 0]), 0);
    }

    #[test]
    fn loss_vector_enumeration_counts() {
        let vs = loss_vectors_up_to(3, 2);
        assert_eq!(vs.len(), 1 + 3 + 6);
        assert_eq!(vs[0], vec![0, 0, 0]);
    }

    #[test]
    fn state_display_format() {
        let s = FockState(vec![1, 0, 3]);
        assert_eq!(s.to_string(), "1|0|3");
    }

    #[test]
    fn mode_set_validation() {
        assert!(check_mode_set(&[0, 2], 3).is_ok());
        assert!(check_mode_set(&[3], 3).is_err());
        assert!(check_mode_set(&[1, 1], 3).is_err());
    }
}
