//! Factorization of polynomials over GF(2): square-free decomposition
//! followed by Berlekamp splitting.

use super::matrix::BitMatrix;
use super::poly::Gf2Poly;

/// Irreducible factorization of a nonzero polynomial as `(factor, multiplicity)`
/// pairs, sorted by factor. Constants have no factors.
pub fn factor(f: &Gf2Poly) -> Vec<(Gf2Poly, u32)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut out: Vec<(Gf2Poly, u32)> = Vec::new();
    for (part, mult) in square_free_decomposition(f) {
        for irr in berlekamp(&part) {
            match out.iter_mut().find(|(p, _)| *p == irr) {
                Some(entry) => entry.1 += mult,
                None => out.push((irr, mult)),
            }
        }
    }
    out.sort();
    out
}

/// Returns pairwise coprime square-free parts `(g_i, i)` with `f = Π g_i^i`.
pub fn square_free_decomposition(f: &Gf2Poly) -> Vec<(Gf2Poly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x)^2
        for (g, m) in square_free_decomposition(&f.sqrt_even()) {
            out.push((g, 2 * m));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        for (g, m) in square_free_decomposition(&c.sqrt_even()) {
            out.push((g, 2 * m));
        }
    }
    out
}

/// Splits a square-free polynomial into its irreducible factors.
fn berlekamp(g: &Gf2Poly) -> Vec<Gf2Poly> {
    let Some(d) = g.degree() else {
        return Vec::new();
    };
    if d <= 1 {
        return vec![g.clone()];
    }
    // Row i holds x^{2i} mod g; h is a Berlekamp subalgebra element iff h·Q = h.
    let mut q = BitMatrix::zeros(d, d);
    let x2 = Gf2Poly::monomial(2);
    let mut cur = Gf2Poly::one();
    for i in 0..d {
        for e in cur.exponents() {
            q.set(i, e, true);
        }
        cur = cur.mul(&x2).rem(g);
    }
    let q_plus_i = q.add(&BitMatrix::identity(d)).expect("square");
    let basis = q_plus_i.transpose().null_space_basis();
    let count = basis.rows();

    let mut factors = vec![g.clone()];
    if count == 1 {
        return factors;
    }
    for b in 0..basis.rows() {
        let h = Gf2Poly::from_bitvector(&basis.row(b));
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(factors.len() + 1);
        for u in factors {
            if u.degree() == Some(1) {
                next.push(u);
                continue;
            }
            let a = u.gcd(&h);
            let a_deg = a.degree().unwrap_or(0);
            if a_deg > 0 && a != u {
                let rest = u.div_rem(&a).0;
                next.push(a);
                next.push(rest);
            } else {
                let a1 = u.gcd(&h.add(&Gf2Poly::one()));
                if a1.degree().unwrap_or(0) > 0 && a1 != u {
                    let rest = u.div_rem(&a1).0;
                    next.push(a1);
                    next.push(rest);
                } else {
                    next.push(u);
                }
            }
        }
        factors = next;
        if factors.len() == count {
            break;
        }
    }
    debug_assert_eq!(factors.len(), count);
    factors
}
