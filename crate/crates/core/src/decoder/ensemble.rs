use super::{preprocess_llrs, BpConfig, BpDecoder, DecodeOutcome, FrameDecoder, LlrVector};
use crate::automorphism::{verify_automorphism, GeneralizedAutomorphism};
use crate::code::{DualWordPool, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Echelon};

/// Generalized automorphism ensemble decoder: one BP path per automorphism,
/// each fed box-plus preprocessed LLRs and mapped back through `T⁻¹`.
#[derive(Debug, Clone)]
pub struct Gaed {
    code: LinearCode,
    paths: Vec<GeneralizedAutomorphism>,
    bp: BpDecoder,
}

impl Gaed {
    /// Fails if the list is empty or any entry is not an automorphism.
    pub fn new(code: &LinearCode, paths: Vec<GeneralizedAutomorphism>, cfg: BpConfig) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        for aut in &paths {
            if !verify_automorphism(code, aut.t())? {
                return Err(Error::NotAnAutomorphism);
            }
        }
        Ok(Gaed {
            code: code.clone(),
            paths,
            bp: BpDecoder::new(code.h(), cfg)?,
        })
    }

    /// The ensemble `{I, T, T⁻¹}`.
    pub fn three_path(code: &LinearCode, t: &GeneralizedAutomorphism, cfg: BpConfig) -> Result<Self> {
        let paths = vec![
            GeneralizedAutomorphism::identity(code.n()),
            t.clone(),
            t.inverse(),
        ];
        Self::new(code, paths, cfg)
    }

    pub fn paths(&self) -> &[GeneralizedAutomorphism] {
        &self.paths
    }

    /// Decodes every path and returns all candidates in path order.
    pub fn candidates(&self, llr: &LlrVector) -> Vec<DecodeOutcome> {
        self.paths
            .iter()
            .enumerate()
            .map(|(i, aut)| {
                let out = if aut.t().is_identity() {
                    self.bp.run(llr)
                } else {
                    let pre = preprocess_llrs(aut.t(), llr).expect("dimensions checked");
                    self.bp.run(&pre)
                };
                let x = aut.t_inv().mul_vec(&out.hard_bits);
                DecodeOutcome {
                    is_codeword: self.code.is_codeword(&x),
                    correlation: llr.correlation(&x),
                    hard_bits: x,
                    iterations_used: out.iterations_used,
                    path_index: i,
                }
            })
            .collect()
    }

    pub fn run(&self, llr: &LlrVector) -> DecodeOutcome {
        select_ml_in_list(self.candidates(llr))
    }
}

/// Highest correlation among syndrome-valid candidates, or among all of them
/// if none is valid. Earlier candidates win ties.
pub(crate) fn select_ml_in_list(candidates: Vec<DecodeOutcome>) -> DecodeOutcome {
    let any_valid = candidates.iter().any(|c| c.is_codeword);
    let mut best: Option<DecodeOutcome> = None;
    for c in candidates {
        if any_valid && !c.is_codeword {
            continue;
        }
        if best.as_ref().is_none_or(|b| c.correlation > b.correlation) {
            best = Some(c);
        }
    }
    best.expect("non-empty candidate list")
}

impl FrameDecoder for Gaed {
    fn decode(&self, llr: &LlrVector) -> DecodeOutcome {
        self.run(llr)
    }

    fn label(&self) -> String {
        format!("GAED-{}-BP-{}", self.paths.len(), self.bp.config().iterations)
    }
}

/// Decodes `llr` with the ensemble given by `auts`.
pub fn gaed_decode(
    code: &LinearCode,
    auts: &[GeneralizedAutomorphism],
    llr: &LlrVector,
    cfg: &BpConfig,
) -> Result<DecodeOutcome> {
    if llr.len() != code.n() {
        return Err(Error::DimensionMismatch {
            op: "gaed_decode",
            left: (code.n(), code.n()),
            right: (llr.len(), 1),
        });
    }
    Ok(Gaed::new(code, auts.to_vec(), *cfg)?.run(llr))
}

/// BP over an overcomplete parity-check matrix of `ell·(n-k)` dual words.
#[derive(Debug, Clone)]
pub struct RedundantRowDecoder {
    ell: usize,
    h: BitMatrix,
    bp: BpDecoder,
}

impl RedundantRowDecoder {
    /// Stacks the first `ell·(n-k)` pool words, which must span the dual.
    pub fn new(code: &LinearCode, pool: &DualWordPool, ell: usize, cfg: BpConfig) -> Result<Self> {
        let r = code.n() - code.k();
        let needed = ell * r;
        if ell == 0 || pool.len() < needed {
            return Err(Error::InsufficientPool {
                needed,
                available: pool.len(),
            });
        }
        let h = pool.to_matrix(needed);
        let mut span = Echelon::new(code.n());
        let rank = (0..h.rows()).filter(|&i| span.insert(&h.row(i))).count();
        if rank < r {
            return Err(Error::InsufficientPool {
                needed: r,
                available: rank,
            });
        }
        if !code.g().mul(&h.transpose())?.is_zero() {
            return Err(Error::InvalidParameter("pool word is not a dual codeword".into()));
        }
        Ok(RedundantRowDecoder {
            ell,
            bp: BpDecoder::new(&h, cfg)?,
            h,
        })
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn run(&self, llr: &LlrVector) -> DecodeOutcome {
        self.bp.run(llr)
    }
}

impl FrameDecoder for RedundantRowDecoder {
    fn decode(&self, llr: &LlrVector) -> DecodeOutcome {
        self.run(llr)
    }

    fn label(&self) -> String {
        format!("R-{}-BP-{}", self.ell, self.bp.config().iterations)
    }
}

pub fn redundant_row_decode(
    code: &LinearCode,
    pool: &DualWordPool,
    ell: usize,
    llr: &LlrVector,
    cfg: &BpConfig,
) -> Result<DecodeOutcome> {
    if llr.len() != code.n() {
        return Err(Error::DimensionMismatch {
            op: "redundant_row_decode",
            left: (code.n(), code.n()),
            right: (llr.len(), 1),
        });
    }
    Ok(RedundantRowDecoder::new(code, pool, ell, *cfg)?.run(llr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{compute_ccm, conjugate_z, ZBlockMatrix};
    use crate::code::low_weight_dual_search;
    use crate::code::tests::hamming74;
    use crate::decoder::{awgn_llr, bp_min_sum};
    use crate::gf2::BitVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_ensemble_equals_plain_bp() {
        let code = hamming74();
        let cfg = BpConfig::new(10);
        let ident = [GeneralizedAutomorphism::identity(7)];
        for seed in 0..200 {
            let l = awgn_llr(&BitVector::zeros(7), 1.0, code.rate(), seed);
            let a = gaed_decode(&code, &ident, &l, &cfg).unwrap();
            let b = bp_min_sum(code.h(), &l, &cfg).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn three_paths_produce_valid_candidates() {
        let code = hamming74();
        let ccm = compute_ccm(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = conjugate_z(&ccm, &ZBlockMatrix::random(7, 4, &mut rng));
        let gaed = Gaed::three_path(&code, &t, BpConfig::new(10)).unwrap();
        assert_eq!(gaed.label(), "GAED-3-BP-10");
        for seed in 0..100 {
            let l = awgn_llr(&BitVector::zeros(7), 2.0, code.rate(), seed);
            let cands = gaed.candidates(&l);
            assert_eq!(cands.len(), 3);
            for (i, c) in cands.iter().enumerate() {
                assert_eq!(c.path_index, i);
                assert_eq!(c.is_codeword, code.is_codeword(&c.hard_bits));
            }
            let best = gaed.run(&l);
            let any_valid = cands.iter().any(|c| c.is_codeword);
            assert_eq!(best.is_codeword, any_valid);
        }
    }

    #[test]
    fn selection_prefers_valid_then_correlation_then_index() {
        let mk = |valid: bool, corr: f64, i: usize| DecodeOutcome {
            hard_bits: BitVector::zeros(1),
            is_codeword: valid,
            iterations_used: 1,
            path_index: i,
            correlation: corr,
        };
        let pick = |v: Vec<DecodeOutcome>| select_ml_in_list(v).path_index;
        assert_eq!(pick(vec![mk(false, 9.0, 0), mk(true, 1.0, 1)]), 1);
        assert_eq!(pick(vec![mk(true, 1.0, 0), mk(true, 2.0, 1)]), 1);
        assert_eq!(pick(vec![mk(true, 2.0, 0), mk(true, 2.0, 1)]), 0);
        assert_eq!(pick(vec![mk(false, 1.0, 0), mk(false, 3.0, 1)]), 1);
    }

    #[test]
    fn rejects_non_automorphism_and_empty_list() {
        let code = hamming74();
        let swap = GeneralizedAutomorphism::new(BitMatrix::permutation(&[1, 0, 2, 3, 4, 5, 6])).unwrap();
        assert!(matches!(
            Gaed::new(&code, vec![swap], BpConfig::default()),
            Err(Error::NotAnAutomorphism)
        ));
        assert!(matches!(
            Gaed::new(&code, vec![], BpConfig::default()),
            Err(Error::EmptyEnsemble)
        ));
    }

    #[test]
    fn single_copy_of_pcm_matches_bp() {
        let code = hamming74();
        let pool = DualWordPool::from_pcm_rows(&code);
        let cfg = BpConfig::new(8);
        for seed in 0..100 {
            let l = awgn_llr(&BitVector::zeros(7), 0.5, code.rate(), seed);
            assert_eq!(
                redundant_row_decode(&code, &pool, 1, &l, &cfg).unwrap(),
                bp_min_sum(code.h(), &l, &cfg).unwrap()
            );
        }
    }

    #[test]
    fn redundant_decoder_outputs_codewords() {
        let code = hamming74();
        let pool = low_weight_dual_search(&code, 7, 7, 0);
        let dec = RedundantRowDecoder::new(&code, &pool, 2, BpConfig::new(10)).unwrap();
        assert_eq!(dec.h().rows(), 6);
        assert_eq!(dec.label(), "R-2-BP-10");
        for seed in 0..100 {
            let out = dec.run(&awgn_llr(&BitVector::zeros(7), 1.0, code.rate(), seed));
            if out.is_codeword {
                assert!(code.is_codeword(&out.hard_bits));
            }
        }
        assert!(matches!(
            RedundantRowDecoder::new(&code, &pool, 3, BpConfig::new(10)),
            Err(Error::InsufficientPool { .. })
        ));
    }
}
