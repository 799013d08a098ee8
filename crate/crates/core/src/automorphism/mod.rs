//! Generalized automorphisms: invertible linear maps `T` with
//! `Null(H) = Null(H·T)`.
//!
//! Given a code characterization matrix `A` with `H·A = [I | 0]`, every
//! automorphism has the form `T = A·Z·A⁻¹` where `Z` is invertible with a zero
//! upper-right `(n-k)×k` block, and conversely.

mod construct;

pub use construct::{
    construct_code_with_automorphism, construct_with, order_blocks, sample_sparse_invertible, Construction,
    ConstructionParams, ConstructionReport,
};

use rand::Rng;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// An invertible `n×n` matrix together with its cached inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedAutomorphism {
    t: BitMatrix,
    t_inv: BitMatrix,
}

impl GeneralizedAutomorphism {
    pub fn new(t: BitMatrix) -> Result<Self> {
        let t_inv = t.invert()?;
        Ok(GeneralizedAutomorphism { t, t_inv })
    }

    pub fn identity(n: usize) -> Self {
        GeneralizedAutomorphism {
            t: BitMatrix::identity(n),
            t_inv: BitMatrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.t.rows()
    }

    pub fn t(&self) -> &BitMatrix {
        &self.t
    }

    pub fn t_inv(&self) -> &BitMatrix {
        &self.t_inv
    }

    /// Number of ones in `T`.
    pub fn omega(&self) -> usize {
        self.t.weight()
    }

    /// Excess weight over a permutation, `Ω(T) - n`.
    pub fn delta(&self) -> usize {
        self.omega() - self.n()
    }

    pub fn is_permutation(&self) -> bool {
        self.t.is_permutation()
    }

    pub fn inverse(&self) -> Self {
        GeneralizedAutomorphism {
            t: self.t_inv.clone(),
            t_inv: self.t.clone(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(GeneralizedAutomorphism {
            t: self.t.mul(&other.t)?,
            t_inv: other.t_inv.mul(&self.t_inv)?,
        })
    }

    /// `T^e` for any integer exponent.
    pub fn power(&self, e: i64) -> Self {
        let (base, inv) = if e >= 0 {
            (&self.t, &self.t_inv)
        } else {
            (&self.t_inv, &self.t)
        };
        let m = e.unsigned_abs();
        GeneralizedAutomorphism {
            t: base.pow(m).expect("square"),
            t_inv: inv.pow(m).expect("square"),
        }
    }
}

/// True iff `t` is invertible and maps every codeword to a codeword.
pub fn verify_automorphism(code: &LinearCode, t: &BitMatrix) -> Result<bool> {
    let n = code.n();
    if t.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "verify_automorphism",
            left: t.shape(),
            right: (n, n),
        });
    }
    if t.rank() != n {
        return Ok(false);
    }
    // H·T·gᵀ for every generator row g.
    let ht = code.h().mul(t)?;
    Ok(ht.mul(&code.g().transpose())?.is_zero())
}

/// Code characterization matrix: invertible `A` with `H·A = [I | 0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ccm {
    k: usize,
    a: BitMatrix,
    a_inv: BitMatrix,
}

/// Computes a CCM by column elimination on `H`.
pub fn compute_ccm(code: &LinearCode) -> Ccm {
    let a = code
        .h()
        .column_reduce()
        .expect("parity-check matrix has full rank");
    let a_inv = a.invert().expect("column operations are invertible");
    let ccm = Ccm {
        k: code.k(),
        a,
        a_inv,
    };
    debug_assert!(ccm.reduces(code.h()) && ccm.contains_pcm(code.h()));
    ccm
}

impl Ccm {
    /// Wraps a candidate `A`, checking it is a CCM of `code`.
    pub fn new(code: &LinearCode, a: BitMatrix) -> Result<Self> {
        let a_inv = a.invert()?;
        let ccm = Ccm {
            k: code.k(),
            a,
            a_inv,
        };
        if !ccm.reduces(code.h()) {
            return Err(Error::InvalidParameter("H·A is not [I | 0]".into()));
        }
        Ok(ccm)
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &BitMatrix {
        &self.a
    }

    pub fn a_inv(&self) -> &BitMatrix {
        &self.a_inv
    }

    /// `H·A = [I | 0]`.
    pub fn reduces(&self, h: &BitMatrix) -> bool {
        let r = self.n() - self.k;
        h.shape() == (r, self.n())
            && h.mul(&self.a).is_ok_and(|p| {
                p == BitMatrix::identity(r)
                    .hstack(&BitMatrix::zeros(r, self.k))
                    .unwrap()
            })
    }

    /// The first `n - k` rows of `A⁻¹` equal `H`.
    pub fn contains_pcm(&self, h: &BitMatrix) -> bool {
        let r = self.n() - self.k;
        h.shape() == (r, self.n()) && self.a_inv.submatrix(0..r, 0..self.n()) == *h
    }
}

/// Invertible `Z` whose upper-right `(n-k)×k` block is zero:
/// `Z = [C 0; D E]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZBlockMatrix {
    z: BitMatrix,
    k: usize,
}

impl ZBlockMatrix {
    pub fn new(z: BitMatrix, k: usize) -> Result<Self> {
        let n = z.rows();
        if !z.is_square() || k > n {
            return Err(Error::InvalidParameter(format!(
                "{:?} matrix cannot have a k = {k} block structure",
                z.shape()
            )));
        }
        if !upper_right_is_zero(&z, k) {
            return Err(Error::InvalidParameter("upper-right block is not zero".into()));
        }
        if z.rank() != n {
            return Err(Error::Singular);
        }
        Ok(ZBlockMatrix { z, k })
    }

    pub fn identity(n: usize, k: usize) -> Self {
        ZBlockMatrix {
            z: BitMatrix::identity(n),
            k,
        }
    }

    /// Uniform over the group: independent invertible `C`, `E` and arbitrary `D`.
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        let r = n - k;
        let c = BitMatrix::random_invertible(r, rng);
        let e = BitMatrix::random_invertible(k, rng);
        let d = BitMatrix::random(k, r, rng);
        Self::from_blocks(&c, &d, &e).expect("invertible diagonal blocks")
    }

    pub fn from_blocks(c: &BitMatrix, d: &BitMatrix, e: &BitMatrix) -> Result<Self> {
        let top = c.hstack(&BitMatrix::zeros(c.rows(), e.cols()))?;
        let bottom = d.hstack(e)?;
        Self::new(top.vstack(&bottom)?, e.rows())
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.z
    }

    pub fn c(&self) -> BitMatrix {
        let r = self.z.rows() - self.k;
        self.z.submatrix(0..r, 0..r)
    }

    pub fn d(&self) -> BitMatrix {
        let (n, r) = (self.z.rows(), self.z.rows() - self.k);
        self.z.submatrix(r..n, 0..r)
    }

    pub fn e(&self) -> BitMatrix {
        let (n, r) = (self.z.rows(), self.z.rows() - self.k);
        self.z.submatrix(r..n, r..n)
    }
}

fn upper_right_is_zero(m: &BitMatrix, k: usize) -> bool {
    let n = m.rows();
    m.submatrix(0..n - k, n - k..n).is_zero()
}

/// `T = A·Z·A⁻¹`, always an automorphism of the code `A` characterizes.
pub fn conjugate_z(ccm: &Ccm, z: &ZBlockMatrix) -> GeneralizedAutomorphism {
    let t = ccm
        .a
        .mul(z.matrix())
        .and_then(|m| m.mul(&ccm.a_inv))
        .expect("matching sizes");
    let z_inv = z.matrix().invert().expect("invertible by construction");
    let t_inv = ccm
        .a
        .mul(&z_inv)
        .and_then(|m| m.mul(&ccm.a_inv))
        .expect("matching sizes");
    GeneralizedAutomorphism { t, t_inv }
}

/// True iff `A⁻¹·T·A` has a zero upper-right block.
pub fn membership_in_z(ccm: &Ccm, t: &BitMatrix) -> Result<bool> {
    let n = ccm.n();
    if t.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            op: "membership_in_z",
            left: t.shape(),
            right: (n, n),
        });
    }
    if t.rank() != n {
        return Err(Error::Singular);
    }
    let z = ccm.a_inv.mul(t)?.mul(&ccm.a)?;
    Ok(upper_right_is_zero(&z, ccm.k))
}
