use std::fmt;

use rand::Rng;

use super::bitvec::{dot_words, ones_in_words, words_for, xor_words, BitVector, WORD_BITS};
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(2), one run of 64-bit words per row.
///
/// Padding bits past `cols` in each row are kept zero, so whole-word
/// comparisons and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Stacks row vectors. All rows must share one length; `cols` is needed
    /// for the zero-row case.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Parses rows of '0'/'1' characters. Mainly for tests and literals.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |r, c| rows[r].as_bytes()[c] == b'1')
    }

    /// Uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for w in m.row_words_mut(r) {
                *w = rng.random();
            }
            m.clear_row_padding(r);
        }
        m
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (r, &c) in perm.iter().enumerate() {
            m.set(r, c, true);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.row_words(r).to_vec(), self.cols)
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Column indices of the ones in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        ones_in_words(self.row_words(r)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// True when every row and every column carries exactly one 1.
    pub fn is_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut seen = vec![false; self.cols];
        for r in 0..self.rows {
            let support = self.row_support(r);
            if support.len() != 1 || seen[support[0]] {
                return false;
            }
            seen[support[0]] = true;
        }
        true
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(src.max(dst) * s);
        if src < dst {
            xor_words(&mut hi[..s], &lo[src * s..src * s + s]);
        } else {
            xor_words(&mut lo[dst * s..dst * s + s], &hi[..s]);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in ones_in_words(self.row_words(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Exact product `self · rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let dst = r * out.stride;
            for k in ones_in_words(self.row_words(r)) {
                xor_words(&mut out.data[dst..dst + out.stride], rhs.row_words(k));
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · x` with `x` a column vector.
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(self.cols, x.len(), "mul_vec dimension mismatch");
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if dot_words(self.row_words(r), x.words()) {
                out.set(r, true);
            }
        }
        out
    }

    /// Row-vector product `xᵀ · self`, i.e. the XOR of the rows selected by `x`.
    pub fn vec_mul(&self, x: &BitVector) -> BitVector {
        assert_eq!(self.rows, x.len(), "vec_mul dimension mismatch");
        let mut out = BitVector::zeros(self.cols);
        for r in x.iter_ones() {
            xor_words(out.words_mut(), self.row_words(r));
        }
        out
    }

    /// Syndrome check `self · x == 0` without allocating.
    pub fn annihilates(&self, x: &BitVector) -> bool {
        assert_eq!(self.cols, x.len(), "annihilates dimension mismatch");
        (0..self.rows).all(|r| !dot_words(self.row_words(r), x.words()))
    }

    pub fn pow(&self, mut e: u64) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "pow",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let mut base = self.clone();
        let mut acc = BitMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn add(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = self.clone();
        xor_words(&mut out.data, &rhs.data);
        Ok(out)
    }

    /// Copy of the block `rows × cols`.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), cols.len());
        for (dr, r) in rows.clone().enumerate() {
            for c in ones_in_words(self.row_words(r)) {
                if cols.contains(&c) {
                    out.set(dr, c - cols.start, true);
                }
            }
        }
        out
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(keep.len(), self.cols);
        for (dst, &src) in keep.iter().enumerate() {
            out.row_words_mut(dst).copy_from_slice(self.row_words(src));
        }
        out
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_cols(&self, keep: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, keep.len());
        for r in 0..self.rows {
            for (dst, &src) in keep.iter().enumerate() {
                if self.get(r, src) {
                    out.set(r, dst, true);
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let cols = self.cols;
        Ok(BitMatrix::from_fn(self.rows, cols + rhs.cols, |r, c| {
            if c < cols {
                self.get(r, c)
            } else {
                rhs.get(r, c - cols)
            }
        }))
    }

    pub fn vstack(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = BitMatrix::zeros(self.rows + rhs.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&rhs.data);
        Ok(out)
    }

    /// Block-diagonal matrix `diag(blocks...)`.
    pub fn block_diagonal(blocks: &[BitMatrix]) -> BitMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = BitMatrix::zeros(n, m);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in ones_in_words(b.row_words(r)) {
                    out.set(ro + r, co + c, true);
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// In-place reduced row echelon form; returns the pivot columns in row
    /// order. Rows past the returned length are zero afterwards.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.add_row(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Inverse via Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "invert",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = BitMatrix::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| work.get(i, c)) else {
                return Err(Error::Singular);
            };
            work.swap_rows(c, p);
            inv.swap_rows(c, p);
            for i in 0..n {
                if i != c && work.get(i, c) {
                    work.add_row(c, i);
                    inv.add_row(c, i);
                }
            }
        }
        Ok(inv)
    }

    /// Basis of `{x : self · x = 0}`, one basis vector per row of the result.
    pub fn null_space_basis(&self) -> BitMatrix {
        let mut rref = self.clone();
        let pivots = rref.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis.set(b, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if rref.get(r, f) {
                    basis.set(b, p, true);
                }
            }
        }
        basis
    }

    /// Returns an invertible `A` with `self · A = [I | 0]`, found by Gaussian
    /// elimination on the columns. Requires full row rank.
    pub fn column_reduce(&self) -> Result<BitMatrix> {
        let (m, n) = self.shape();
        if m > n {
            return Err(Error::RankDeficient {
                expected: m,
                actual: self.rank(),
            });
        }
        // Column operations on self are row operations on selfᵀ; track them in E
        // so that E · selfᵀ = [I; 0], then A = Eᵀ.
        let mut work = self.transpose();
        let mut ops = BitMatrix::identity(n);
        for c in 0..m {
            let Some(p) = (c..n).find(|&i| work.get(i, c)) else {
                return Err(Error::RankDeficient {
                    expected: m,
                    actual: self.rank(),
                });
            };
            work.swap_rows(c, p);
            ops.swap_rows(c, p);
            for i in 0..n {
                if i != c && work.get(i, c) {
                    work.add_row(c, i);
                    ops.add_row(c, i);
                }
            }
        }
        Ok(ops.transpose())
    }

    /// Solves `self · x = b` for one solution `x`, if any exists.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(self.rows, b.len(), "solve dimension mismatch");
        let aug = self
            .hstack(&BitMatrix::from_rows(b.len(), std::slice::from_ref(b)).transpose())
            .ok()?;
        let mut rref = aug;
        let pivots = rref.row_reduce();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            if rref.get(r, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }

    fn clear_row_padding(&mut self, r: usize) {
        let rem = self.cols % WORD_BITS;
        if rem != 0 && self.stride > 0 {
            let idx = r * self.stride + self.stride - 1;
            self.data[idx] &= (1u64 << rem) - 1;
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn hamming74_h() -> BitMatrix {
        BitMatrix::from_strs(&["1010101", "0110011", "0001111"])
    }

    fn naive_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        BitMatrix::from_fn(a.rows(), b.cols(), |i, j| {
            (0..a.cols()).fold(false, |acc, k| acc ^ (a.get(i, k) & b.get(k, j)))
        })
    }

    #[test]
    fn identity_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = BitMatrix::random(3, 5, &mut rng);
        assert_eq!(BitMatrix::identity(3).mul(&m).unwrap(), m);
    }

    #[test]
    fn product_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = BitMatrix::random(8, 8, &mut rng);
            let b = BitMatrix::random(8, 8, &mut rng);
            assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
        }
        let a = BitMatrix::random(7, 70, &mut rng);
        let b = BitMatrix::random(70, 130, &mut rng);
        assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b));
    }

    #[test]
    fn mul_dimension_mismatch() {
        let a = BitMatrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(4, 6).rank(), 0);
        assert_eq!(BitMatrix::identity(9).rank(), 9);
        let g = BitMatrix::from_strs(&["1110000", "1001100", "0101010", "1101001"]);
        // 2^rank distinct words in the row span
        let mut span = std::collections::HashSet::new();
        for u in 0..16u8 {
            let sel = BitVector::from_bits(&[u & 1, (u >> 1) & 1, (u >> 2) & 1, (u >> 3) & 1]);
            span.insert(g.vec_mul(&sel));
        }
        assert_eq!(span.len(), 1 << g.rank());
        assert_eq!(g.rank(), 4);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(BitMatrix::identity(5).invert().unwrap(), BitMatrix::identity(5));
        let p = BitMatrix::permutation(&[2, 0, 3, 1]);
        assert_eq!(p.invert().unwrap(), p.transpose());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = BitMatrix::random_invertible(16, &mut rng);
        let inv = m.invert().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
        assert!(matches!(BitMatrix::zeros(3, 3).invert(), Err(Error::Singular)));
    }

    #[test]
    fn null_space_of_canonical_pcm() {
        // [I | 0] with n-k = 3, k = 4: null space spanned by e_4..e_7
        let h = BitMatrix::from_fn(3, 7, |r, c| r == c);
        let basis = h.null_space_basis();
        assert_eq!(basis.rows(), 4);
        for (i, r) in (0..4).enumerate() {
            assert_eq!(basis.row(r), BitVector::unit(7, 3 + i));
        }
        assert_eq!(BitMatrix::identity(6).null_space_basis().rows(), 0);
    }

    #[test]
    fn null_space_hamming_exhaustive() {
        let h = hamming74_h();
        let basis = h.null_space_basis();
        assert_eq!(basis.rows(), 4);
        assert_eq!(basis.rank(), 4);
        let mut count = 0;
        for x in 0u8..128 {
            let v = BitVector::from_bits(&(0..7).map(|i| (x >> i) & 1).collect::<Vec<_>>());
            if h.annihilates(&v) {
                count += 1;
                // every codeword lies in the row span of the basis
                let stacked = basis.vstack(&BitMatrix::from_rows(7, &[v])).unwrap();
                assert_eq!(stacked.rank(), 4);
            }
        }
        assert_eq!(count, 16);
        for r in 0..4 {
            assert!(h.annihilates(&basis.row(r)));
        }
    }

    #[test]
    fn column_reduce_hamming() {
        let h = hamming74_h();
        let a = h.column_reduce().unwrap();
        let reduced = h.mul(&a).unwrap();
        assert_eq!(reduced, BitMatrix::from_fn(3, 7, |r, c| r == c));
        let a_inv = a.invert().unwrap();
        assert_eq!(a_inv.submatrix(0..3, 0..7), h);
    }

    #[test]
    fn column_reduce_identity_shape() {
        let h = BitMatrix::from_fn(2, 5, |r, c| r == c);
        let a = h.column_reduce().unwrap();
        assert_eq!(h.mul(&a).unwrap(), h);
        let deficient = BitMatrix::from_strs(&["110", "110"]);
        assert!(matches!(
            deficient.column_reduce(),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn solve_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = BitMatrix::random(6, 10, &mut rng);
        let x = BitMatrix::random(1, 10, &mut rng).row(0);
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&y), b);
        let z = BitMatrix::zeros(2, 2);
        assert!(z.solve(&BitVector::unit(2, 0)).is_none());
    }

    #[test]
    fn pow_and_permutation() {
        let p = BitMatrix::permutation(&[1, 2, 0]);
        assert!(p.is_permutation());
        assert!(p.pow(3).unwrap().is_identity());
        assert!(!BitMatrix::from_strs(&["11", "01"]).is_permutation());
    }
}
