use std::fmt;

use super::bitvec::{ones_in_words, BitVector, WORD_BITS};
use super::matrix::BitMatrix;
use crate::error::{Error, Result};

/// Polynomial over GF(2), coefficients packed lowest degree first.
///
/// The word vector never carries trailing zero words, so equality is
/// structural and the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(degree: usize) -> Self {
        let mut p = Gf2Poly {
            words: vec![0; degree / WORD_BITS + 1],
        };
        p.words[degree / WORD_BITS] = 1u64 << (degree % WORD_BITS);
        p
    }

    /// Sum of `x^e` over the given exponents (repeated exponents cancel).
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exponents {
            p.toggle(e);
        }
        p
    }

    /// Coefficients lowest degree first; nonzero bytes count as 1.
    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                p.toggle(i);
            }
        }
        p
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD_BITS + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / WORD_BITS)
            .is_some_and(|w| (w >> (i % WORD_BITS)) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        ones_in_words(&self.words)
    }

    /// Coefficients `c_0..c_{len-1}` as a bit vector.
    pub fn to_bitvector(&self, len: usize) -> BitVector {
        let mut v = BitVector::zeros(len);
        for e in self.exponents() {
            assert!(e < len, "polynomial degree exceeds vector length");
            v.set(e, true);
        }
        v
    }

    pub fn from_bitvector(v: &BitVector) -> Self {
        let mut p = Gf2Poly {
            words: v.words().to_vec(),
        };
        p.trim();
        p
    }

    fn toggle(&mut self, i: usize) {
        let w = i / WORD_BITS;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1u64 << (i % WORD_BITS);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn add(&self, rhs: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.words.len() >= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = long.words.clone();
        for (d, s) in words.iter_mut().zip(&short.words) {
            *d ^= s;
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    /// Multiplication by `x^shift`.
    pub fn shl(&self, shift: usize) -> Gf2Poly {
        if self.is_zero() {
            return Self::zero();
        }
        let ws = shift / WORD_BITS;
        let bs = shift % WORD_BITS;
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (WORD_BITS - bs);
            }
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, rhs: &Gf2Poly) -> Gf2Poly {
        let mut acc = Gf2Poly::zero();
        for e in rhs.exponents() {
            acc = acc.add(&self.shl(e));
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Gf2Poly {
        let mut base = self.clone();
        let mut acc = Gf2Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Gf2Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.toggle(shift);
            rem = rem.add(&divisor.shl(shift));
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        self.div_rem(divisor).1
    }

    pub fn gcd(&self, rhs: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Formal derivative; over GF(2) only odd exponents survive.
    pub fn derivative(&self) -> Gf2Poly {
        let exps: Vec<usize> = self.exponents().filter(|e| e % 2 == 1).map(|e| e - 1).collect();
        Self::from_exponents(&exps)
    }

    /// Square root of a polynomial whose exponents are all even.
    pub(crate) fn sqrt_even(&self) -> Gf2Poly {
        debug_assert!(self.exponents().all(|e| e % 2 == 0));
        let exps: Vec<usize> = self.exponents().map(|e| e / 2).collect();
        Self::from_exponents(&exps)
    }

    /// `f(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &BitMatrix) -> Result<BitMatrix> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                op: "eval_matrix",
                left: m.shape(),
                right: m.shape(),
            });
        }
        let n = m.rows();
        let mut acc = BitMatrix::zeros(n, n);
        let Some(d) = self.degree() else {
            return Ok(acc);
        };
        for i in (0..=d).rev() {
            acc = acc.mul(m)?;
            if self.coeff(i) {
                for j in 0..n {
                    acc.flip(j, j);
                }
            }
        }
        Ok(acc)
    }

    /// `f(M) · v` by Horner's rule on the vector.
    pub fn apply(&self, m: &BitMatrix, v: &BitVector) -> BitVector {
        let mut acc = BitVector::zeros(v.len());
        let Some(d) = self.degree() else {
            return acc;
        };
        for i in (0..=d).rev() {
            acc = m.mul_vec(&acc);
            if self.coeff(i) {
                acc.xor_assign(v);
            }
        }
        acc
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let exps: Vec<usize> = self.exponents().collect();
        for (i, &e) in exps.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

/// Companion matrix of a monic polynomial `f = x^d + c_{d-1}x^{d-1} + … + c_0`.
///
/// Convention used throughout the crate: ones on the subdiagonal, the
/// coefficients `c_0..c_{d-1}` down the last column. With basis
/// `v, Mv, …, M^{d-1}v` of a cyclic subspace this is exactly the matrix of `M`.
pub fn companion_matrix(f: &Gf2Poly) -> Result<BitMatrix> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidParameter(
                "companion matrix needs a polynomial of degree >= 1".into(),
            ))
        }
    };
    let mut c = BitMatrix::zeros(d, d);
    for i in 1..d {
        c.set(i, i - 1, true);
    }
    for i in 0..d {
        if f.coeff(i) {
            c.set(i, d - 1, true);
        }
    }
    Ok(c)
}

impl BitMatrix {
    /// Characteristic polynomial `det(xI + M)` by Berkowitz's division-free
    /// recurrence. Independent of the Krylov machinery in `frobenius`.
    pub fn characteristic_polynomial(&self) -> Result<Gf2Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                op: "characteristic_polynomial",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let n = self.rows();
        // coefficients, highest degree first
        let mut p: Vec<bool> = vec![true];
        for r in 0..n {
            let lead = self.submatrix(0..r, 0..r);
            let s = BitVector::from_bools(&(0..r).map(|i| self.get(i, r)).collect::<Vec<_>>());
            let row = BitVector::from_bools(&(0..r).map(|j| self.get(r, j)).collect::<Vec<_>>());
            let mut t = Vec::with_capacity(r + 2);
            t.push(true);
            t.push(self.get(r, r));
            let mut w = s;
            for _ in 0..r {
                t.push(row.dot(&w));
                w = lead.mul_vec(&w);
            }
            let mut next = vec![false; r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = false;
                for (j, &pj) in p.iter().enumerate() {
                    if j <= i && pj && t[i - j] {
                        acc = !acc;
                    }
                }
                *slot = acc;
            }
            p = next;
        }
        let exps: Vec<usize> = p
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| n - i)
            .collect();
        Ok(Gf2Poly::from_exponents(&exps))
    }
}
