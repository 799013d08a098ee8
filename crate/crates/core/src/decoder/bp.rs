use super::{clamp, DecodeOutcome, FrameDecoder, LlrVector, LLR_CLAMP};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Normalized min-sum settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpConfig {
    pub iterations: usize,
    /// Scale applied to check-to-variable messages.
    pub normalization: f64,
    /// Stop as soon as the hard decision has zero syndrome.
    pub early_stop: bool,
}

impl BpConfig {
    pub fn new(iterations: usize) -> Self {
        BpConfig {
            iterations,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("BP needs at least one iteration".into()));
        }
        if !(self.normalization > 0.0 && self.normalization <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "normalization {} outside (0, 1]",
                self.normalization
            )));
        }
        Ok(())
    }
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            iterations: 30,
            normalization: 0.75,
            early_stop: true,
        }
    }
}

/// Flooding normalized min-sum on a fixed Tanner graph. The parity-check
/// matrix may have redundant rows.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: usize,
    /// Edges grouped by check: edges `check_start[c]..check_start[c + 1]`.
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    cfg: BpConfig,
}

impl BpDecoder {
    pub fn new(h: &BitMatrix, cfg: BpConfig) -> Result<Self> {
        cfg.validate()?;
        if h.rows() == 0 || h.is_zero() {
            return Err(Error::EmptyGraph);
        }
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.weight());
        for r in 0..h.rows() {
            check_start.push(edge_var.len());
            edge_var.extend(h.row_support(r));
        }
        check_start.push(edge_var.len());
        Ok(BpDecoder {
            n: h.cols(),
            check_start,
            edge_var,
            cfg,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn config(&self) -> &BpConfig {
        &self.cfg
    }

    fn checks(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.check_start.windows(2).map(|w| w[0]..w[1])
    }

    pub fn syndrome_is_zero(&self, x: &BitVector) -> bool {
        self.checks()
            .all(|edges| !edges.fold(false, |acc, e| acc ^ x.get(self.edge_var[e])))
    }

    pub fn run(&self, llr: &LlrVector) -> DecodeOutcome {
        assert_eq!(llr.len(), self.n, "LLR length does not match the graph");
        let channel = llr.values();
        let alpha = self.cfg.normalization;
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0; self.edge_var.len()];
        let mut posterior = channel.to_vec();
        let mut hard = llr.hard_decision();
        let mut iterations = 0;

        for _ in 0..self.cfg.iterations {
            iterations += 1;
            for edges in self.checks() {
                let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                let mut negative = false;
                for e in edges.clone() {
                    let m = v2c[e];
                    negative ^= m < 0.0;
                    let a = m.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        arg = e;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for e in edges {
                    let mag = if e == arg { min2 } else { min1 };
                    let neg = negative ^ (v2c[e] < 0.0);
                    let m = (alpha * mag).min(LLR_CLAMP);
                    c2v[e] = if neg { -m } else { m };
                }
            }
            posterior.copy_from_slice(channel);
            for (e, &v) in self.edge_var.iter().enumerate() {
                posterior[v] += c2v[e];
            }
            for (e, &v) in self.edge_var.iter().enumerate() {
                v2c[e] = clamp(posterior[v] - c2v[e]);
            }
            hard = BitVector::from_bools(&posterior.iter().map(|&p| p < 0.0).collect::<Vec<_>>());
            if self.cfg.early_stop && self.syndrome_is_zero(&hard) {
                break;
            }
        }
        let is_codeword = self.syndrome_is_zero(&hard);
        DecodeOutcome {
            correlation: llr.correlation(&hard),
            hard_bits: hard,
            is_codeword,
            iterations_used: iterations,
            path_index: 0,
        }
    }
}

impl FrameDecoder for BpDecoder {
    fn decode(&self, llr: &LlrVector) -> DecodeOutcome {
        self.run(llr)
    }

    fn label(&self) -> String {
        format!("BP-{}", self.cfg.iterations)
    }
}

/// One-shot min-sum decoding of `llr` on the Tanner graph of `h`.
pub fn bp_min_sum(h: &BitMatrix, llr: &LlrVector, cfg: &BpConfig) -> Result<DecodeOutcome> {
    if h.cols() != llr.len() {
        return Err(Error::DimensionMismatch {
            op: "bp_min_sum",
            left: h.shape(),
            right: (llr.len(), 1),
        });
    }
    Ok(BpDecoder::new(h, *cfg)?.run(llr))
}
