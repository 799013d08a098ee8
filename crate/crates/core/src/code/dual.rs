use std::collections::{BinaryHeap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{for_each_span_word, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Echelon};

/// Dual sizes up to `2^this` are enumerated exhaustively.
const MAX_ENUMERATED_REDUNDANCY: usize = 24;
/// Information-set draws for the randomized search.
const RANDOM_ROUNDS: usize = 256;

/// A set of distinct nonzero dual codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualWordPool {
    n: usize,
    words: Vec<BitVector>,
    underfull: bool,
}

impl DualWordPool {
    /// Validates that every word is orthogonal to the code.
    pub fn new(code: &LinearCode, words: Vec<BitVector>) -> Result<Self> {
        for w in &words {
            if w.len() != code.n() {
                return Err(Error::DimensionMismatch {
                    op: "dual word",
                    left: (1, w.len()),
                    right: (1, code.n()),
                });
            }
            if !code.g().annihilates(w) {
                return Err(Error::InvalidParameter("pool word is not a dual codeword".into()));
            }
        }
        Ok(DualWordPool {
            n: code.n(),
            words,
            underfull: false,
        })
    }

    /// The rows of the code's parity-check matrix.
    pub fn from_pcm_rows(code: &LinearCode) -> Self {
        DualWordPool {
            n: code.n(),
            words: code.h().row_vectors(),
            underfull: false,
        }
    }

    pub fn words(&self) -> &[BitVector] {
        &self.words
    }

    pub fn weights(&self) -> Vec<usize> {
        self.words.iter().map(BitVector::weight).collect()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Set when the search returned fewer words than requested.
    pub fn is_underfull(&self) -> bool {
        self.underfull
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.n);
        self.words.iter().filter(|w| e.insert(w)).count()
    }

    /// The first `count` words stacked as matrix rows.
    pub fn to_matrix(&self, count: usize) -> BitMatrix {
        BitMatrix::from_rows(self.n, &self.words[..count.min(self.words.len())])
    }
}

/// Deterministic tie-break key for a word under a seed.
fn tie_key(w: &BitVector, seed: u64) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &x in w.words() {
        h = splitmix(h ^ x);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Finds up to `target_count` distinct nonzero dual codewords of weight at
/// most `max_weight`, lightest first, ties broken by a seeded order.
///
/// Small duals are enumerated exhaustively; larger ones are sampled from
/// reduced echelon forms of `H` over random information sets together with
/// pairwise sums of their rows.
pub fn low_weight_dual_search(
    code: &LinearCode,
    target_count: usize,
    max_weight: usize,
    seed: u64,
) -> DualWordPool {
    let n = code.n();
    let r = n - code.k();
    let mut words = if r <= MAX_ENUMERATED_REDUNDANCY {
        enumerate_lightest(code.h(), target_count, max_weight, seed)
    } else {
        random_search(code.h(), max_weight, seed)
    };
    words.sort_by_cached_key(|w| (w.weight(), tie_key(w, seed)));
    words.truncate(target_count);
    DualWordPool {
        n,
        underfull: words.len() < target_count,
        words,
    }
}

fn enumerate_lightest(h: &BitMatrix, target: usize, max_weight: usize, seed: u64) -> Vec<BitVector> {
    if target == 0 {
        return Vec::new();
    }
    // Max-heap holding the best `target` candidates seen so far.
    let mut heap: BinaryHeap<(usize, u64, BitVector)> = BinaryHeap::with_capacity(target + 1);
    for_each_span_word(h, |w| {
        let wt = w.weight();
        if wt > max_weight {
            return;
        }
        if heap.len() == target {
            let top = heap.peek().unwrap();
            if wt > top.0 {
                return;
            }
            let key = tie_key(w, seed);
            if (wt, key) >= (top.0, top.1) {
                return;
            }
            heap.pop();
            heap.push((wt, key, w.clone()));
        } else {
            heap.push((wt, tie_key(w, seed), w.clone()));
        }
    });
    heap.into_iter().map(|(_, _, w)| w).collect()
}

fn random_search(h: &BitMatrix, max_weight: usize, seed: u64) -> Vec<BitVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = h.cols();
    let mut found: HashSet<BitVector> = HashSet::new();
    let keep = |w: BitVector, found: &mut HashSet<BitVector>| {
        if !w.is_zero() && w.weight() <= max_weight {
            found.insert(w);
        }
    };
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..RANDOM_ROUNDS {
        perm.shuffle(&mut rng);
        let mut work = h.select_cols(&perm);
        let rank = work.row_reduce().len();
        let mut inverse = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let rows: Vec<BitVector> = (0..rank).map(|i| work.row(i).select(&inverse)).collect();
        for (i, a) in rows.iter().enumerate() {
            keep(a.clone(), &mut found);
            for b in &rows[i + 1..] {
                let mut s = a.clone();
                s.xor_assign(b);
                keep(s, &mut found);
            }
        }
    }
    found.into_iter().collect()
}

/// Number of length-4 cycles in the Tanner graph of `h`.
pub fn count_four_cycles(h: &BitMatrix) -> usize {
    let rows = h.row_vectors();
    let mut total = 0;
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            let c = a.overlap(b);
            total += c * c.saturating_sub(1) / 2;
        }
    }
    total
}

/// Chooses `n - k` independent pool words with the least total weight, then
/// the fewest 4-cycles, over `trials` seeded restarts. Restarts differ in
/// how equal-weight words are ordered. Selected rows keep their pool order.
pub fn optimize_pcm(code: &LinearCode, pool: &DualWordPool, trials: usize, seed: u64) -> Result<LinearCode> {
    let r = code.n() - code.k();
    let rank = pool.rank();
    if rank < r {
        return Err(Error::InsufficientPool {
            needed: r,
            available: rank,
        });
    }
    let weights = pool.weights();
    let mut best: Option<((usize, usize), BitMatrix)> = None;
    for trial in 0..trials.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.shuffle(&mut rng);
        order.sort_by_key(|&i| weights[i]);

        let mut basis = Echelon::new(code.n());
        let mut chosen = Vec::with_capacity(r);
        for &i in &order {
            if basis.insert(&pool.words()[i]) {
                chosen.push(i);
                if chosen.len() == r {
                    break;
                }
            }
        }
        chosen.sort_unstable();
        let rows: Vec<BitVector> = chosen.iter().map(|&i| pool.words()[i].clone()).collect();
        let h = BitMatrix::from_rows(code.n(), &rows);
        let score = (h.weight(), count_four_cycles(&h));
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, h));
        }
    }
    let (_, h) = best.expect("at least one trial");
    let out = LinearCode::from_pcm(h)?;
    debug_assert!(out.same_code(code));
    Ok(out)
}
