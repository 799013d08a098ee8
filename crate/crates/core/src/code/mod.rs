//! Binary linear block codes defined as the null space of a parity-check
//! matrix.

mod distance;
mod dual;
mod reduce;

pub use distance::{min_distance, min_distance_dual, min_distance_primal, weight_distribution};
pub use dual::{count_four_cycles, low_weight_dual_search, optimize_pcm, DualWordPool};
pub use reduce::reduce_zero_columns;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest `k` for which [`LinearCode::codewords`] will enumerate.
pub const MAX_ENUMERATION_BITS: usize = 24;

/// An `(n, k)` binary linear code `{x : H·x = 0}` with a full-rank parity-check
/// matrix `H` and a generator `G` whose rows span the same null space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    h: BitMatrix,
    g: BitMatrix,
}

impl LinearCode {
    /// Builds the code from a full-row-rank parity-check matrix.
    pub fn from_pcm(h: BitMatrix) -> Result<Self> {
        let (m, n) = h.shape();
        if m == 0 || m >= n {
            return Err(Error::InvalidParameter(format!(
                "parity-check matrix must have 1 <= rows < cols, got {m}x{n}"
            )));
        }
        let rank = h.rank();
        if rank != m {
            return Err(Error::RankDeficient {
                expected: m,
                actual: rank,
            });
        }
        let g = h.null_space_basis();
        debug_assert!(h.mul(&g.transpose()).unwrap().is_zero());
        Ok(LinearCode { h, g })
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn g(&self) -> &BitMatrix {
        &self.g
    }

    pub fn is_codeword(&self, x: &BitVector) -> bool {
        self.h.annihilates(x)
    }

    /// `x = uᵀ·G`.
    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        if u.len() != self.k() {
            return Err(Error::DimensionMismatch {
                op: "encode",
                left: (1, u.len()),
                right: self.g.shape(),
            });
        }
        Ok(self.g.vec_mul(u))
    }

    /// All `2^k` codewords in Gray-code order starting from zero.
    pub fn codewords(&self) -> Result<Vec<BitVector>> {
        if self.k() > MAX_ENUMERATION_BITS {
            return Err(Error::TooLarge(format!("2^{} codewords", self.k())));
        }
        let mut out = Vec::with_capacity(1 << self.k());
        out.push(BitVector::zeros(self.n()));
        for_each_span_word(&self.g, |w| out.push(w.clone()));
        Ok(out)
    }

    /// True when both codes have the same null space.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n() == other.n()
            && self.k() == other.k()
            && (0..other.g.rows()).all(|r| self.is_codeword(&other.g.row(r)))
    }
}

/// Visits every nonzero vector in the row span of `m` (assumed to have
/// independent rows) exactly once, in Gray-code order.
pub(crate) fn for_each_span_word(m: &BitMatrix, mut f: impl FnMut(&BitVector)) {
    let rows = m.rows();
    assert!(rows < 64, "span too large to enumerate");
    let basis = m.row_vectors();
    let mut cur = BitVector::zeros(m.cols());
    for i in 1u64..(1u64 << rows) {
        cur.xor_assign(&basis[i.trailing_zeros() as usize]);
        f(&cur);
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use std::collections::HashSet;

    pub(crate) fn hamming74() -> LinearCode {
        LinearCode::from_pcm(BitMatrix::from_strs(&["1010101", "0110011", "0001111"])).unwrap()
    }

    #[test]
    fn canonical_pcm_gives_unit_generator() {
        let h = BitMatrix::from_fn(3, 7, |r, c| r == c);
        let code = LinearCode::from_pcm(h).unwrap();
        assert_eq!(code.k(), 4);
        assert_eq!(*code.g(), BitMatrix::from_fn(4, 7, |r, c| c == r + 3));
    }

    #[test]
    fn hamming_weight_distribution() {
        let code = hamming74();
        let mut dist = [0usize; 8];
        for w in code.codewords().unwrap() {
            assert!(code.is_codeword(&w));
            dist[w.weight()] += 1;
        }
        assert_eq!(dist, [1, 0, 0, 7, 7, 0, 0, 1]);
    }

    #[test]
    fn rank_deficient_rejected() {
        let h = BitMatrix::from_strs(&["1100", "1100"]);
        assert!(matches!(
            LinearCode::from_pcm(h),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn encode_is_injective_and_linear() {
        let code = hamming74();
        assert!(code.encode(&BitVector::zeros(4)).unwrap().is_zero());
        assert_eq!(code.encode(&BitVector::unit(4, 0)).unwrap(), code.g().row(0));
        let mut seen = HashSet::new();
        for u in 0u8..16 {
            let bits: Vec<u8> = (0..4).map(|i| (u >> i) & 1).collect();
            let x = code.encode(&BitVector::from_bits(&bits)).unwrap();
            assert!(code.is_codeword(&x));
            seen.insert(x);
        }
        assert_eq!(seen.len(), 16);
        assert!(code.encode(&BitVector::zeros(3)).is_err());
    }
}
