//! Soft-decision decoding over the BPSK/AWGN channel.
//!
//! LLRs use the natural log and the convention `L = ln P(x=0) / P(x=1)`, so a
//! positive value favours bit 0.

mod bp;
mod ensemble;
mod osd;

pub use bp::{bp_min_sum, BpConfig, BpDecoder};
pub use ensemble::{gaed_decode, redundant_row_decode, Gaed, RedundantRowDecoder};
pub use osd::{osd_decode, OsdDecoder};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::automorphism::GeneralizedAutomorphism;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Saturation magnitude for channel LLRs and messages.
pub const LLR_CLAMP: f64 = 25.0;

/// Channel LLRs, saturated to `±LLR_CLAMP`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    values: Vec<f64>,
}

impl LlrVector {
    /// Clamps every value; NaN is rejected.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("NaN in LLR vector".into()));
        }
        Ok(LlrVector {
            values: values.into_iter().map(clamp).collect(),
        })
    }

    /// Noiseless LLRs of magnitude `magnitude` for a codeword.
    pub fn from_bits(x: &BitVector, magnitude: f64) -> Self {
        let values = (0..x.len())
            .map(|i| clamp(if x.get(i) { -magnitude } else { magnitude }))
            .collect();
        LlrVector { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Bit `i` is 1 iff `values[i] < 0`.
    pub fn hard_decision(&self) -> BitVector {
        BitVector::from_bools(&self.values.iter().map(|&v| v < 0.0).collect::<Vec<_>>())
    }

    /// `Σ (1 - 2 x_j) L_j`; larger means closer in Euclidean distance.
    pub fn correlation(&self, x: &BitVector) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(j, &l)| if x.get(j) { -l } else { l })
            .sum()
    }
}

#[inline]
pub(crate) fn clamp(v: f64) -> f64 {
    v.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Noise standard deviation for BPSK at `ebn0_db` and code rate `rate`.
pub fn noise_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

/// BPSK-modulates `codeword` (0 → +1, 1 → −1), adds Gaussian noise and
/// returns the channel LLRs `2y/σ²`.
pub fn awgn_llr(codeword: &BitVector, ebn0_db: f64, rate: f64, seed: u64) -> LlrVector {
    awgn_llr_with(codeword, ebn0_db, rate, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn awgn_llr_with<R: Rng + ?Sized>(
    codeword: &BitVector,
    ebn0_db: f64,
    rate: f64,
    rng: &mut R,
) -> LlrVector {
    let sigma = noise_sigma(ebn0_db, rate);
    let scale = 2.0 / (sigma * sigma);
    let values = (0..codeword.len())
        .map(|i| {
            let x = if codeword.get(i) { -1.0 } else { 1.0 };
            let noise: f64 = rng.sample(StandardNormal);
            clamp(scale * (x + sigma * noise))
        })
        .collect();
    LlrVector { values }
}

/// `a ⊞ b = 2 atanh(tanh(a/2) tanh(b/2))` in log-domain form.
#[inline]
pub fn box_plus_pair(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = a.abs().min(b.abs());
    let v = sign * m + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p();
    clamp(v)
}

/// Box-plus of all operands; a single operand is returned unchanged.
pub fn box_plus(llrs: &[f64]) -> f64 {
    let (&first, rest) = llrs.split_first().expect("box_plus needs at least one operand");
    rest.iter().fold(first, |acc, &l| box_plus_pair(acc, l))
}

/// LLRs of `T·x` from LLRs of `x`: entry `j` is the box-plus of the inputs
/// selected by row `j` of `T`.
pub fn preprocess_llrs(t: &BitMatrix, llr: &LlrVector) -> Result<LlrVector> {
    if t.cols() != llr.len() || !t.is_square() {
        return Err(Error::DimensionMismatch {
            op: "preprocess_llrs",
            left: t.shape(),
            right: (llr.len(), 1),
        });
    }
    let mut out = Vec::with_capacity(t.rows());
    let mut ops = Vec::new();
    for j in 0..t.rows() {
        ops.clear();
        ops.extend(t.row_support(j).into_iter().map(|i| llr.values[i]));
        out.push(if ops.is_empty() { 0.0 } else { box_plus(&ops) });
    }
    Ok(LlrVector { values: out })
}

/// Same as [`preprocess_llrs`] for an automorphism.
pub fn preprocess_with(aut: &GeneralizedAutomorphism, llr: &LlrVector) -> Result<LlrVector> {
    preprocess_llrs(aut.t(), llr)
}

/// Result of decoding one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub hard_bits: BitVector,
    /// The decision satisfies every parity check.
    pub is_codeword: bool,
    pub iterations_used: usize,
    /// Ensemble path that produced the decision.
    pub path_index: usize,
    /// Correlation of the decision with the channel LLRs.
    pub correlation: f64,
}

/// Anything that turns channel LLRs into a decision.
pub trait FrameDecoder: Send + Sync {
    fn decode(&self, llr: &LlrVector) -> DecodeOutcome;

    /// Short name such as `BP-30` or `GAED-3-BP-10`.
    fn label(&self) -> String;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[allow(clippy::excessive_precision)]
    const BOX_PLUS_ONE_ONE: f64 = 0.433_780_830_483_027_187;

    #[test]
    fn box_plus_reference_value() {
        assert!((box_plus(&[1.0, 1.0]) - BOX_PLUS_ONE_ONE).abs() < 1e-12);
        assert!((box_plus(&[-1.0, 1.0]) + BOX_PLUS_ONE_ONE).abs() < 1e-12);
    }

    #[test]
    fn box_plus_edge_cases() {
        assert_eq!(box_plus(&[3.25]), 3.25);
        assert_eq!(box_plus(&[-0.7]), -0.7);
        assert_eq!(box_plus(&[2.0, 0.0, 5.0]), 0.0);
        assert_eq!(box_plus(&[0.0, -4.0]), 0.0);
        // Saturated inputs behave like a sign product.
        assert_eq!(box_plus(&[25.0, -25.0]), -box_plus(&[25.0, 25.0]));
        assert!(box_plus(&[25.0, 25.0]) > 24.0);
    }

    #[test]
    fn box_plus_matches_tanh_rule() {
        for &(a, b) in &[(0.3, 0.9), (-2.0, 1.5), (4.0, -7.0), (0.01, 0.02)] {
            let direct = 2.0 * ((a / 2.0f64).tanh() * (b / 2.0f64).tanh()).atanh();
            assert!((box_plus_pair(a, b) - direct).abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn identity_and_permutation_preprocessing() {
        let l = LlrVector::new(vec![1.5, -0.25, 3.0, -7.5]).unwrap();
        assert_eq!(preprocess_llrs(&BitMatrix::identity(4), &l).unwrap(), l);
        let p = BitMatrix::permutation(&[2, 0, 3, 1]);
        let out = preprocess_llrs(&p, &l).unwrap();
        assert_eq!(out.hard_decision(), p.mul_vec(&l.hard_decision()));
        for j in 0..4 {
            let i = p.row_support(j)[0];
            assert_eq!(out.values()[j].to_bits(), l.values()[i].to_bits());
        }
    }

    #[test]
    fn two_ones_row() {
        let t = BitMatrix::from_strs(&["11", "01"]);
        let out = preprocess_llrs(&t, &LlrVector::new(vec![1.0, 1.0]).unwrap()).unwrap();
        assert!((out.values()[0] - BOX_PLUS_ONE_ONE).abs() < 1e-12);
        assert_eq!(out.values()[1], 1.0);
        assert!(preprocess_llrs(&t, &LlrVector::new(vec![1.0]).unwrap()).is_err());
    }

    #[test]
    fn noiseless_limit_keeps_signs() {
        let x = BitVector::from_bits(&[0, 1, 1, 0, 1, 0, 0, 1]);
        let l = awgn_llr(&x, 60.0, 0.5, 7);
        assert_eq!(l.hard_decision(), x);
        assert!(l.values().iter().all(|v| v.abs() <= LLR_CLAMP));
    }

    #[test]
    fn zero_codeword_llrs_positive_on_average() {
        let x = BitVector::zeros(1000);
        let l = awgn_llr(&x, 1.0, 0.5, 3);
        let mean = l.values().iter().sum::<f64>() / 1000.0;
        // E[L] = 2/σ² = 4·R·Eb/N0 ≈ 2.52
        assert!((mean - 4.0 * 0.5 * 10f64.powf(0.1)).abs() < 0.3, "{mean}");
    }

    #[test]
    fn nan_rejected_and_clamped() {
        assert!(LlrVector::new(vec![f64::NAN]).is_err());
        let l = LlrVector::new(vec![100.0, -1e9]).unwrap();
        assert_eq!(l.values(), &[LLR_CLAMP, -LLR_CLAMP]);
    }
}
