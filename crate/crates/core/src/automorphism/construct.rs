use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{compute_ccm, upper_right_is_zero, verify_automorphism, Ccm, GeneralizedAutomorphism};
use crate::code::{
    low_weight_dual_search, min_distance, optimize_pcm, reduce_zero_columns, DualWordPool, LinearCode,
};
use crate::error::{Error, Result};
use crate::gf2::{frobenius_normal_form_with, BitMatrix, Decomposition};

const MAX_SAMPLE_TRIES: usize = 10_000;
/// Distances are reported when one side of the code has at most this many
/// dimensions.
const CHEAP_DISTANCE_BITS: usize = 20;

/// Knobs for [`construct_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: usize,
    pub k: usize,
    /// Extra ones in the sampled `T` beyond a permutation.
    pub delta: usize,
    pub seed: u64,
    pub max_resamples: usize,
    /// Dual words offered to the PCM optimizer; `None` picks `8·(n-k)`.
    pub pool_size: Option<usize>,
    pub optimization_trials: usize,
    /// Resample until the code reaches this minimum distance (0 disables).
    pub min_distance: usize,
    /// Resample instead of accepting a code shortened by frozen positions.
    pub keep_length: bool,
}

impl ConstructionParams {
    pub fn new(n: usize, k: usize, delta: usize, seed: u64) -> Self {
        ConstructionParams {
            n,
            k,
            delta,
            seed,
            max_resamples: 1000,
            pool_size: None,
            optimization_trials: 16,
            min_distance: 0,
            keep_length: false,
        }
    }
}

/// Bookkeeping from one construction run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstructionReport {
    /// Number of `T` matrices drawn, including the accepted one.
    pub attempts: usize,
    pub ordering_failures: usize,
    pub reduction_failures: usize,
    pub shortened_rejections: usize,
    pub distance_rejections: usize,
    /// Companion block sizes of the accepted `T`, in the order used.
    pub block_sizes: Vec<usize>,
    /// Positions removed because every codeword is zero there.
    pub frozen_positions: Vec<usize>,
    /// Weight of `T` as sampled, before any reduction.
    pub omega_sampled: usize,
    pub omega_t: usize,
    pub omega_t_inv: usize,
    pub omega_t2: usize,
    pub min_distance: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub code: LinearCode,
    pub automorphism: GeneralizedAutomorphism,
    pub ccm: Ccm,
    pub report: ConstructionReport,
}

/// Draws an invertible `n×n` matrix with exactly `omega_obj` ones: a random
/// permutation plus `omega_obj - n` extra ones off its pattern.
pub fn sample_sparse_invertible(n: usize, omega_obj: usize, seed: u64) -> Result<BitMatrix> {
    sample_sparse_with(n, omega_obj, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn sample_sparse_with<R: Rng + ?Sized>(n: usize, omega_obj: usize, rng: &mut R) -> Result<BitMatrix> {
    if n == 0 || omega_obj < n || omega_obj > n * n {
        return Err(Error::InvalidParameter(format!(
            "weight {omega_obj} impossible for an invertible {n}x{n} matrix"
        )));
    }
    let extra = omega_obj - n;
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..MAX_SAMPLE_TRIES {
        perm.shuffle(rng);
        let mut t = BitMatrix::permutation(&perm);
        let free: Vec<usize> = (0..n * n).filter(|&i| !t.get(i / n, i % n)).collect();
        for i in rand::seq::index::sample(rng, free.len(), extra) {
            let p = free[i];
            t.set(p / n, p % n, true);
        }
        if t.rank() == n {
            return Ok(t);
        }
    }
    Err(Error::BudgetExhausted {
        attempts: MAX_SAMPLE_TRIES,
        detail: format!("no invertible {n}x{n} matrix of weight {omega_obj} found"),
    })
}

/// Finds block indices whose sizes sum to `k` and returns an ordering that
/// lists the remaining blocks first, then the chosen ones. `None` when no
/// subset of the sizes sums to `k`.
pub fn order_blocks(sizes: &[usize], k: usize) -> Option<Vec<usize>> {
    let total: usize = sizes.iter().sum();
    if k > total {
        return None;
    }
    // reach[i][s]: some subset of the first i blocks sums to s.
    let mut reach = vec![vec![false; k + 1]; sizes.len() + 1];
    reach[0][0] = true;
    for (i, &d) in sizes.iter().enumerate() {
        for s in 0..=k {
            reach[i + 1][s] = reach[i][s] || (s >= d && reach[i][s - d]);
        }
    }
    if !reach[sizes.len()][k] {
        return None;
    }
    let mut chosen = vec![false; sizes.len()];
    let mut s = k;
    for i in (0..sizes.len()).rev() {
        if !reach[i][s] {
            chosen[i] = true;
            s -= sizes[i];
        }
    }
    debug_assert_eq!(s, 0);
    let mut order: Vec<usize> = (0..sizes.len()).filter(|&i| !chosen[i]).collect();
    order.extend((0..sizes.len()).filter(|&i| chosen[i]));
    Some(order)
}

/// Builds an `(n, k)` code together with an automorphism of weight
/// `n + delta`, with default settings otherwise.
pub fn construct_code_with_automorphism(
    n: usize,
    k: usize,
    delta: usize,
    seed: u64,
    max_resamples: usize,
) -> Result<Construction> {
    construct_with(&ConstructionParams {
        max_resamples,
        ..ConstructionParams::new(n, k, delta, seed)
    })
}

/// Samples a sparse invertible `T`, brings it to Frobenius form with blocks
/// ordered so the form has a zero upper-right `(n-k)×k` block, and reads off
/// a code for which `T` is an automorphism. The parity-check matrix is then
/// replaced by a low-weight basis of the dual.
pub fn construct_with(p: &ConstructionParams) -> Result<Construction> {
    let (n, k) = (p.n, p.k);
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "need 0 < k < n, got n = {n}, k = {k}"
        )));
    }
    let mut report = ConstructionReport::default();
    for attempt in 0..p.max_resamples {
        report.attempts = attempt + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        rng.set_stream(attempt as u64);
        let t = sample_sparse_with(n, n + p.delta, &mut rng)?;
        let form = frobenius_normal_form_with(&t, Decomposition::ElementaryDivisors, &mut rng)?;
        let Some(order) = order_blocks(form.block_sizes(), k) else {
            report.ordering_failures += 1;
            continue;
        };
        let form = form.reorder(&order)?;
        debug_assert!(upper_right_is_zero(form.f(), k));
        let h = form.s().submatrix(0..n - k, 0..n);
        let code = LinearCode::from_pcm(h)?;
        debug_assert!(verify_automorphism(&code, &t)?);

        let frozen: Vec<usize> = {
            let g_cols = code.g().transpose();
            (0..n).filter(|&c| g_cols.row_weight(c) == 0).collect()
        };
        if p.keep_length && !frozen.is_empty() {
            report.shortened_rejections += 1;
            continue;
        }
        // Any failure here means this T cannot be salvaged; draw another.
        let Ok((code, t_red)) = reduce_zero_columns(&code, &t) else {
            report.reduction_failures += 1;
            continue;
        };

        let code = optimize(&code, p, rng.random())?;
        let cheap = code.k().min(code.n() - code.k()) <= CHEAP_DISTANCE_BITS;
        let dmin = if p.min_distance > 0 || cheap {
            match min_distance(&code) {
                Ok(d) => Some(d),
                Err(Error::TooLarge(_)) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        if dmin.is_some_and(|d| d < p.min_distance) {
            report.distance_rejections += 1;
            continue;
        }

        let automorphism = GeneralizedAutomorphism::new(t_red)?;
        if !verify_automorphism(&code, automorphism.t())? {
            return Err(Error::NotAnAutomorphism);
        }
        let t2 = automorphism.power(2);
        report.block_sizes = form.block_sizes().to_vec();
        report.frozen_positions = frozen;
        report.omega_sampled = t.weight();
        report.omega_t = automorphism.omega();
        report.omega_t_inv = automorphism.t_inv().weight();
        report.omega_t2 = t2.omega();
        report.min_distance = dmin;
        let ccm = compute_ccm(&code);
        return Ok(Construction {
            code,
            automorphism,
            ccm,
            report,
        });
    }
    Err(Error::BudgetExhausted {
        attempts: report.attempts,
        detail: format!(
            "ordering failures {}, reduction failures {}, shortened {}, below distance {}",
            report.ordering_failures,
            report.reduction_failures,
            report.shortened_rejections,
            report.distance_rejections
        ),
    })
}

fn optimize(code: &LinearCode, p: &ConstructionParams, seed: u64) -> Result<LinearCode> {
    let r = code.n() - code.k();
    let target = p.pool_size.unwrap_or(8 * r);
    let found = low_weight_dual_search(code, target, code.n(), seed);
    let mut words = found.words().to_vec();
    for row in code.h().row_vectors() {
        if !words.contains(&row) {
            words.push(row);
        }
    }
    let pool = DualWordPool::new(code, words)?;
    optimize_pcm(code, &pool, p.optimization_trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_when_no_excess() {
        for seed in 0..20 {
            let t = sample_sparse_invertible(9, 9, seed).unwrap();
            assert!(t.is_permutation());
        }
    }

    #[test]
    fn exact_weight_and_invertible() {
        for seed in 0..20 {
            let t = sample_sparse_invertible(16, 21, seed).unwrap();
            assert_eq!(t.weight(), 21);
            assert!(t.invert().is_ok());
        }
        assert_eq!(
            sample_sparse_invertible(8, 30, 1).unwrap(),
            sample_sparse_invertible(8, 30, 1).unwrap()
        );
        assert!(sample_sparse_invertible(4, 3, 0).is_err());
    }

    fn subset_sums_to(sizes: &[usize], k: usize) -> bool {
        (0u32..(1 << sizes.len())).any(|m| {
            (0..sizes.len())
                .filter(|i| (m >> i) & 1 == 1)
                .map(|i| sizes[i])
                .sum::<usize>()
                == k
        })
    }

    #[test]
    fn ordering_examples() {
        // Either {3} or {2, 1} works; the size-3 block is found first.
        assert_eq!(order_blocks(&[3, 2, 1], 3), Some(vec![1, 2, 0]));
        assert_eq!(order_blocks(&[3, 2, 1], 2), Some(vec![0, 2, 1]));
        assert!(order_blocks(&[4], 2).is_none());
        assert_eq!(order_blocks(&[4], 4), Some(vec![0]));
    }

    #[test]
    fn ordering_matches_exhaustive_subset_check() {
        let cases: &[&[usize]] = &[&[3, 2, 1], &[5, 5, 2], &[7, 1, 1, 4], &[2, 2, 2, 2], &[6, 9]];
        for sizes in cases {
            let n: usize = sizes.iter().sum();
            for k in 0..=n {
                let got = order_blocks(sizes, k);
                assert_eq!(got.is_some(), subset_sums_to(sizes, k), "{sizes:?} k={k}");
                if let Some(order) = got {
                    let mut sorted = order.clone();
                    sorted.sort_unstable();
                    assert_eq!(sorted, (0..sizes.len()).collect::<Vec<_>>());
                    // The trailing blocks cover exactly k positions.
                    let mut acc = 0;
                    let tail = order.iter().rev().take_while(|&&i| {
                        if acc >= k {
                            return false;
                        }
                        acc += sizes[i];
                        true
                    });
                    let tail_sum: usize = tail.map(|&i| sizes[i]).sum();
                    assert_eq!(tail_sum, k);
                }
            }
        }
    }

    #[test]
    fn construction_yields_automorphism() {
        let c = construct_code_with_automorphism(16, 8, 4, 3, 200).unwrap();
        let aut = &c.automorphism;
        assert_eq!(c.report.omega_sampled, 20);
        assert_eq!(c.code.k(), 8);
        assert!(verify_automorphism(&c.code, aut.t()).unwrap());
        assert!(verify_automorphism(&c.code, aut.t_inv()).unwrap());
        assert!(verify_automorphism(&c.code, aut.power(2).t()).unwrap());
        assert!(c.ccm.reduces(c.code.h()));
        assert!(c.ccm.contains_pcm(c.code.h()));
        assert_eq!(c.report.omega_t2, aut.power(2).omega());
    }

    #[test]
    fn construction_is_deterministic() {
        let a = construct_code_with_automorphism(12, 5, 2, 9, 200).unwrap();
        let b = construct_code_with_automorphism(12, 5, 2, 9, 200).unwrap();
        assert_eq!(a.code, b.code);
        assert_eq!(a.automorphism, b.automorphism);
        assert_eq!(a.report, b.report);
    }

    #[test]
    fn permutation_construction_keeps_permutation() {
        let c = construct_with(&ConstructionParams {
            keep_length: true,
            ..ConstructionParams::new(15, 7, 0, 4)
        })
        .unwrap();
        assert!(c.automorphism.is_permutation());
        assert_eq!(c.code.n(), 15);
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert!(construct_code_with_automorphism(8, 8, 0, 0, 10).is_err());
        assert!(construct_code_with_automorphism(8, 0, 0, 0, 10).is_err());
    }
}
