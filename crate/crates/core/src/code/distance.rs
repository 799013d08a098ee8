use super::{for_each_span_word, LinearCode};
use crate::error::{Error, Result};

/// Largest `k` enumerated on the primal side.
pub const MAX_PRIMAL_K: usize = 28;
/// Largest `n - k` enumerated on the dual side.
pub const MAX_DUAL_REDUNDANCY: usize = 24;

/// Minimum Hamming distance by brute force, enumerating whichever of the
/// code or its dual is smaller.
pub fn min_distance(code: &LinearCode) -> Result<usize> {
    let (k, r) = (code.k(), code.n() - code.k());
    if k <= MAX_PRIMAL_K && (k <= r || r > MAX_DUAL_REDUNDANCY) {
        min_distance_primal(code)
    } else if r <= MAX_DUAL_REDUNDANCY {
        min_distance_dual(code)
    } else {
        Err(Error::TooLarge(format!(
            "k = {k} and n - k = {r} both exceed the enumeration limits"
        )))
    }
}

/// Minimum weight over all `2^k - 1` nonzero codewords.
pub fn min_distance_primal(code: &LinearCode) -> Result<usize> {
    if code.k() > MAX_PRIMAL_K {
        return Err(Error::TooLarge(format!("2^{} codewords", code.k())));
    }
    let mut best = usize::MAX;
    for_each_span_word(code.g(), |w| best = best.min(w.weight()));
    Ok(best)
}

/// Minimum distance from the dual weight distribution via the MacWilliams
/// identity.
pub fn min_distance_dual(code: &LinearCode) -> Result<usize> {
    let dist = weight_distribution_from_dual(code)?;
    Ok(dist
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &a)| a > 0)
        .map(|(i, _)| i)
        .expect("k >= 1 implies a nonzero codeword"))
}

/// Number of codewords of each weight `0..=n`, computed on the cheaper side.
pub fn weight_distribution(code: &LinearCode) -> Result<Vec<u128>> {
    let (k, r) = (code.k(), code.n() - code.k());
    if k <= MAX_PRIMAL_K && (k <= r || r > MAX_DUAL_REDUNDANCY) {
        let mut dist = vec![0u128; code.n() + 1];
        dist[0] = 1;
        for_each_span_word(code.g(), |w| dist[w.weight()] += 1);
        Ok(dist)
    } else {
        weight_distribution_from_dual(code)
    }
}

fn weight_distribution_from_dual(code: &LinearCode) -> Result<Vec<u128>> {
    let n = code.n();
    let r = n - code.k();
    if r > MAX_DUAL_REDUNDANCY {
        return Err(Error::TooLarge(format!("2^{r} dual codewords")));
    }
    let mut dual = vec![0i128; n + 1];
    dual[0] = 1;
    for_each_span_word(code.h(), |w| dual[w.weight()] += 1);

    let binom = binomials(n)?;
    let overflow = || Error::TooLarge(format!("MacWilliams transform overflows at n = {n}"));
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut acc: i128 = 0;
        for (j, &b) in dual.iter().enumerate() {
            if b == 0 {
                continue;
            }
            // Krawtchouk K_i(j) = Σ_s (-1)^s C(j,s) C(n-j, i-s)
            let mut kraw: i128 = 0;
            for s in 0..=i.min(j) {
                if i - s > n - j {
                    continue;
                }
                let term = binom[j][s]
                    .checked_mul(binom[n - j][i - s])
                    .ok_or_else(overflow)?;
                kraw = if s % 2 == 0 {
                    kraw.checked_add(term)
                } else {
                    kraw.checked_sub(term)
                }
                .ok_or_else(overflow)?;
            }
            acc = acc
                .checked_add(b.checked_mul(kraw).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        let count = acc >> r;
        debug_assert_eq!(count << r, acc, "MacWilliams sum not divisible");
        out.push(u128::try_from(count).map_err(|_| overflow())?);
    }
    Ok(out)
}

fn binomials(n: usize) -> Result<Vec<Vec<i128>>> {
    let mut c = vec![vec![0i128; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1]
                .checked_add(if j < i { c[i - 1][j] } else { 0 })
                .ok_or_else(|| Error::TooLarge(format!("binomials of {n}")))?;
        }
    }
    Ok(c)
}
