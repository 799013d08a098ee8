//! Frobenius (rational canonical) normal form over GF(2).
//!
//! The decomposition is built from cyclic subspaces: pick a vector whose
//! local minimal polynomial equals the minimal polynomial of the operator,
//! take its Krylov chain as the first block, split off a complementary
//! invariant subspace through a dual functional, and repeat on the
//! complement. This produces the invariant factors `f_1, f_2, …` with
//! `f_{i+1} | f_i`. Optionally each invariant factor block is further split
//! into its primary components (elementary divisors).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bitvec::BitVector;
use super::factor::factor;
use super::matrix::BitMatrix;
use super::poly::{companion_matrix, Gf2Poly};
use crate::error::{Error, Result};

/// Which block decomposition to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decomposition {
    /// Invariant factors, largest block first, each dividing the previous one.
    #[default]
    InvariantFactors,
    /// Elementary divisors: one block per prime-power component. This is the
    /// finest split into companion blocks.
    ElementaryDivisors,
}

/// `T = S⁻¹ · F · S` with `F` block-diagonal of companion matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusForm {
    blocks: Vec<Gf2Poly>,
    block_sizes: Vec<usize>,
    f: BitMatrix,
    s: BitMatrix,
    s_inv: BitMatrix,
}

const MAX_VECTOR_TRIES: usize = 512;
const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// Invariant-factor normal form with a fixed internal seed.
pub fn frobenius_normal_form(t: &BitMatrix) -> Result<FrobeniusForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    frobenius_normal_form_with(t, Decomposition::InvariantFactors, &mut rng)
}

/// Normal form of an invertible `t`. The randomness only picks cyclic
/// generators: the block polynomials are determined by `t`, while `S`
/// depends on the draw.
pub fn frobenius_normal_form_with<R: Rng + ?Sized>(
    t: &BitMatrix,
    kind: Decomposition,
    rng: &mut R,
) -> Result<FrobeniusForm> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch {
            op: "frobenius_normal_form",
            left: t.shape(),
            right: t.shape(),
        });
    }
    if t.rank() != t.rows() {
        return Err(Error::Singular);
    }
    let n = t.rows();
    let mut q = BitMatrix::identity(n); // q⁻¹ · t · q = F
    let mut blocks = Vec::new();
    let mut rest = t.clone();
    let mut offset = 0;
    while rest.rows() > 0 {
        let (f, p) = split_cyclic(&rest, rng)?;
        let m = f.degree().expect("nonzero minimal polynomial");
        q = q.mul(&BitMatrix::block_diagonal(&[
            BitMatrix::identity(offset),
            p.clone(),
        ]))?;
        let reduced = p.invert()?.mul(&rest)?.mul(&p)?;
        debug_assert!(reduced.submatrix(0..m, m..rest.rows()).is_zero());
        debug_assert!(reduced.submatrix(m..rest.rows(), 0..m).is_zero());
        rest = reduced.submatrix(m..rest.rows(), m..rest.rows());
        blocks.push(f);
        offset += m;
    }

    if kind == Decomposition::ElementaryDivisors {
        let mut refined = Vec::new();
        let mut pieces = Vec::new();
        for f in &blocks {
            let (parts, p) = split_primary(f)?;
            pieces.push(p);
            refined.extend(parts);
        }
        q = q.mul(&BitMatrix::block_diagonal(&pieces))?;
        blocks = refined;
    }

    FrobeniusForm::assemble(blocks, q)
}

/// Finds a vector with maximal local minimal polynomial `f`, and returns `f`
/// with `P = [K | C]` where `K` is the Krylov chain and `C` spans an invariant
/// complement, so that `P⁻¹ M P = diag(companion(f), M_C)`.
fn split_cyclic<R: Rng + ?Sized>(m: &BitMatrix, rng: &mut R) -> Result<(Gf2Poly, BitMatrix)> {
    let r = m.rows();
    for _ in 0..MAX_VECTOR_TRIES {
        let v = BitMatrix::random(1, r, rng).row(0);
        if v.is_zero() {
            continue;
        }
        let (chain, f) = krylov(m, &v);
        if !f.eval_matrix(m)?.is_zero() {
            continue;
        }
        let d = chain.len();
        let k_t = BitMatrix::from_rows(r, &chain); // rows are Mⁱv
                                                   // φ with φ(Mⁱv) = [i == d-1]
        let phi = k_t
            .solve(&BitVector::unit(d, d - 1))
            .expect("Krylov chain is linearly independent");
        let mut dual_rows = Vec::with_capacity(d);
        let mut w = phi;
        for _ in 0..d {
            let next = m.vec_mul(&w);
            dual_rows.push(w);
            w = next;
        }
        let complement = BitMatrix::from_rows(r, &dual_rows).null_space_basis();
        let p = k_t.vstack(&complement)?.transpose();
        return Ok((f, p));
    }
    Err(Error::BudgetExhausted {
        attempts: MAX_VECTOR_TRIES,
        detail: "no cyclic vector with maximal minimal polynomial found".into(),
    })
}

/// Krylov chain `v, Mv, …, M^{d-1}v` up to the first linear dependency, and
/// the monic local minimal polynomial of `v`.
fn krylov(m: &BitMatrix, v: &BitVector) -> (Vec<BitVector>, Gf2Poly) {
    let r = m.rows();
    let mut chain: Vec<BitVector> = Vec::new();
    // (reduced vector, pivot, combination of chain indices)
    let mut echelon: Vec<(BitVector, usize, BitVector)> = Vec::new();
    let mut w = v.clone();
    loop {
        let idx = chain.len();
        let mut reduced = w.clone();
        let mut combo = BitVector::unit(r + 1, idx);
        for (b, pivot, c) in &echelon {
            if reduced.get(*pivot) {
                reduced.xor_assign(b);
                combo.xor_assign(c);
            }
        }
        match reduced.first_one() {
            None => {
                return (chain, Gf2Poly::from_bitvector(&combo));
            }
            Some(pivot) => {
                echelon.push((reduced, pivot, combo));
                let next = m.mul_vec(&w);
                chain.push(w);
                w = next;
            }
        }
    }
}

/// Splits the companion block of `f` into prime-power blocks. Returns the
/// block polynomials and the change of basis `P` with
/// `P⁻¹ · companion(f) · P = diag(companion(q_1), …)`.
fn split_primary(f: &Gf2Poly) -> Result<(Vec<Gf2Poly>, BitMatrix)> {
    let d = f.degree().expect("nonzero");
    let factors = factor(f);
    if factors.len() <= 1 {
        return Ok((vec![f.clone()], BitMatrix::identity(d)));
    }
    let c = companion_matrix(f)?;
    let e0 = BitVector::unit(d, 0);
    let mut parts = Vec::with_capacity(factors.len());
    let mut columns = Vec::with_capacity(d);
    for (p, e) in factors {
        let qj = p.pow(e);
        let cofactor = f.div_rem(&qj).0;
        let w = cofactor.apply(&c, &e0);
        let (chain, local) = krylov(&c, &w);
        debug_assert_eq!(local, qj);
        columns.extend(chain);
        parts.push(qj);
    }
    Ok((parts, BitMatrix::from_rows(d, &columns).transpose()))
}

impl FrobeniusForm {
    fn assemble(blocks: Vec<Gf2Poly>, s_inv: BitMatrix) -> Result<Self> {
        let companions = blocks.iter().map(companion_matrix).collect::<Result<Vec<_>>>()?;
        let f = BitMatrix::block_diagonal(&companions);
        let s = s_inv.invert()?;
        let block_sizes = blocks.iter().map(|b| b.degree().unwrap()).collect();
        Ok(FrobeniusForm {
            blocks,
            block_sizes,
            f,
            s,
            s_inv,
        })
    }

    /// Block polynomials `f_i`, in block order.
    pub fn blocks(&self) -> &[Gf2Poly] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// The block-diagonal matrix of companion matrices.
    pub fn f(&self) -> &BitMatrix {
        &self.f
    }

    /// Change of basis with `T = S⁻¹ · F · S`.
    pub fn s(&self) -> &BitMatrix {
        &self.s
    }

    pub fn s_inv(&self) -> &BitMatrix {
        &self.s_inv
    }

    /// Starting row/column of each block inside `F`.
    pub fn block_offsets(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect()
    }

    /// Product of the block polynomials.
    pub fn polynomial_product(&self) -> Gf2Poly {
        self.blocks.iter().fold(Gf2Poly::one(), |acc, f| acc.mul(f))
    }

    /// Rearranges the blocks: block `order[i]` of `self` becomes block `i`.
    pub fn reorder(&self, order: &[usize]) -> Result<FrobeniusForm> {
        let mut seen = vec![false; self.blocks.len()];
        let duplicate_or_oob = order
            .iter()
            .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true));
        if order.len() != self.blocks.len() || duplicate_or_oob {
            return Err(Error::InvalidParameter("block order is not a permutation".into()));
        }
        let offsets = self.block_offsets();
        let mut rows = Vec::with_capacity(self.s.rows());
        for &b in order {
            rows.extend(offsets[b]..offsets[b] + self.block_sizes[b]);
        }
        let s = self.s.select_rows(&rows);
        let s_inv = self.s_inv.select_cols(&rows);
        let blocks: Vec<Gf2Poly> = order.iter().map(|&b| self.blocks[b].clone()).collect();
        let companions = blocks.iter().map(companion_matrix).collect::<Result<Vec<_>>>()?;
        Ok(FrobeniusForm {
            block_sizes: order.iter().map(|&b| self.block_sizes[b]).collect(),
            blocks,
            f: BitMatrix::block_diagonal(&companions),
            s,
            s_inv,
        })
    }

    /// Checks `S⁻¹ · F · S == t` exactly.
    pub fn reconstructs(&self, t: &BitMatrix) -> bool {
        self.s_inv
            .mul(&self.f)
            .and_then(|x| x.mul(&self.s))
            .is_ok_and(|x| x == *t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[usize]) -> Gf2Poly {
        Gf2Poly::from_exponents(exps)
    }

    #[test]
    fn identity_gives_unit_blocks() {
        let ff = frobenius_normal_form(&BitMatrix::identity(5)).unwrap();
        assert_eq!(ff.blocks(), vec![p(&[1, 0]); 5].as_slice());
        assert!(ff.f().is_identity());
        assert!(ff.reconstructs(&BitMatrix::identity(5)));
    }

    #[test]
    fn companion_is_single_block() {
        let f = p(&[6, 1, 0]);
        let c = companion_matrix(&f).unwrap();
        let ff = frobenius_normal_form(&c).unwrap();
        assert_eq!(ff.blocks(), &[f]);
        assert_eq!(ff.f(), &c);
        assert!(ff.reconstructs(&c));
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            frobenius_normal_form(&BitMatrix::zeros(3, 3)),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn invariant_factor_chain_divides() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            // permutation matrices give rich block structure
            let mut perm: Vec<usize> = (0..14).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            let t = BitMatrix::permutation(&perm);
            let ff = frobenius_normal_form_with(&t, Decomposition::InvariantFactors, &mut rng).unwrap();
            assert!(ff.reconstructs(&t));
            for w in ff.blocks().windows(2) {
                assert!(w[0].rem(&w[1]).is_zero(), "{} !| {}", w[1], w[0]);
            }
        }
    }

    #[test]
    fn elementary_divisors_refine() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        // x^3+1 = (x+1)(x^2+x+1): a 3-cycle splits into sizes 1 and 2
        let t = BitMatrix::permutation(&[1, 2, 0]);
        let ff = frobenius_normal_form_with(&t, Decomposition::ElementaryDivisors, &mut rng).unwrap();
        let mut sizes = ff.block_sizes().to_vec();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        assert!(ff.reconstructs(&t));
    }

    #[test]
    fn reorder_keeps_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let t = BitMatrix::random_invertible(10, &mut rng);
        let ff = frobenius_normal_form_with(&t, Decomposition::ElementaryDivisors, &mut rng).unwrap();
        let order: Vec<usize> = (0..ff.blocks().len()).rev().collect();
        let re = ff.reorder(&order).unwrap();
        assert!(re.reconstructs(&t));
        if ff.blocks().len() > 1 {
            assert!(ff.reorder(&vec![0; ff.blocks().len()]).is_err());
        }
    }
}
