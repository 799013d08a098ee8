//! Monte-Carlo frame error rate sweeps.
//!
//! Frames are drawn in fixed-size batches. Frame `i` at SNR index `s` uses
//! its own ChaCha stream keyed by `(seed, s, i)`, so the counts for a given
//! configuration do not depend on the number of worker threads.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::automorphism::GeneralizedAutomorphism;
use crate::code::{low_weight_dual_search, DualWordPool, LinearCode};
use crate::decoder::{
    awgn_llr_with, BpConfig, BpDecoder, FrameDecoder, Gaed, OsdDecoder, RedundantRowDecoder,
};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, Echelon};
use crate::io::toml_error;

pub const CSV_HEADER: &str = "ebno_db,frames,frame_errors,bit_errors,fer,ci95,elapsed_s";
const BATCH: usize = 256;

/// Decoder family and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DecoderSpec {
    Bp(BpConfig),
    /// One path per exponent `e`, decoding with `T^e`.
    Gaed {
        bp: BpConfig,
        powers: Vec<i64>,
    },
    Redundant {
        bp: BpConfig,
        ell: usize,
    },
    Osd {
        order: usize,
    },
}

impl DecoderSpec {
    /// Builds the decoder; `aut` is required for the ensemble decoder.
    pub fn build(
        &self,
        code: &LinearCode,
        aut: Option<&GeneralizedAutomorphism>,
        seed: u64,
    ) -> Result<Box<dyn FrameDecoder>> {
        Ok(match self {
            DecoderSpec::Bp(cfg) => Box::new(BpDecoder::new(code.h(), *cfg)?),
            DecoderSpec::Gaed { bp, powers } => {
                let t = aut.ok_or_else(|| {
                    Error::InvalidParameter("the ensemble decoder needs an automorphism".into())
                })?;
                let paths = powers.iter().map(|&e| t.power(e)).collect();
                Box::new(Gaed::new(code, paths, *bp)?)
            }
            DecoderSpec::Redundant { bp, ell } => {
                let pool = redundant_pool(code, *ell, seed)?;
                Box::new(RedundantRowDecoder::new(code, &pool, *ell, *bp)?)
            }
            DecoderSpec::Osd { order } => Box::new(OsdDecoder::new(code, *order)?),
        })
    }
}

/// Lightest `ell·(n-k)` dual words; the code's own rows are put first if the
/// lightest words alone do not span the dual.
pub fn redundant_pool(code: &LinearCode, ell: usize, seed: u64) -> Result<DualWordPool> {
    let r = code.n() - code.k();
    let target = ell * r;
    let found = low_weight_dual_search(code, target, code.n(), seed);
    let mut span = Echelon::new(code.n());
    let rank = found.words().iter().filter(|w| span.insert(w)).count();
    if rank == r {
        return Ok(found);
    }
    let mut words = code.h().row_vectors();
    for w in found.words() {
        if words.len() == target {
            break;
        }
        if !words.contains(w) {
            words.push(w.clone());
        }
    }
    DualWordPool::new(code, words)
}

/// Stopping rule and randomness for a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub ebn0_db: Vec<f64>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    pub workers: usize,
    /// Transmit uniformly random codewords instead of the all-zero word.
    pub random_codewords: bool,
}

impl SweepParams {
    pub fn validate(&self) -> Result<()> {
        if self.ebn0_db.is_empty() || self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "ebn0_db must be a non-empty list of numbers".into(),
            ));
        }
        if self.ebn0_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "ebn0_db must be strictly increasing".into(),
            ));
        }
        if self.min_frame_errors == 0 || self.max_frames == 0 || self.workers == 0 {
            return Err(Error::InvalidParameter(
                "min_frame_errors, max_frames and workers must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One SNR point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FerRecord {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ci95_halfwidth: f64,
    pub elapsed_s: f64,
}

impl FerRecord {
    fn new(ebn0_db: f64, frames: u64, frame_errors: u64, bit_errors: u64, elapsed_s: f64) -> Self {
        let fer = frame_errors as f64 / frames as f64;
        FerRecord {
            ebn0_db,
            frames,
            frame_errors,
            bit_errors,
            fer,
            ci95_halfwidth: 1.96 * (fer * (1.0 - fer) / frames as f64).sqrt(),
            elapsed_s,
        }
    }

    pub fn ci_low(&self) -> f64 {
        self.fer - self.ci95_halfwidth
    }

    pub fn ci_high(&self) -> f64 {
        self.fer + self.ci95_halfwidth
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            format_g(self.ebn0_db),
            self.frames,
            self.frame_errors,
            self.bit_errors,
            format_g(self.fer),
            format_g(self.ci95_halfwidth),
            format_g(self.elapsed_s)
        )
    }
}

/// `%g`-style formatting with six significant digits.
pub fn format_g(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_fraction(&format!("{x:.*}", (5 - exp) as usize)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn to_csv(records: &[FerRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

fn frame_rng(seed: u64, snr_index: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (snr_index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(frame);
    rng
}

fn simulate_frame(
    code: &LinearCode,
    decoder: &dyn FrameDecoder,
    ebn0_db: f64,
    random_codewords: bool,
    mut rng: ChaCha8Rng,
) -> (bool, u64) {
    let x = if random_codewords {
        let u = BitVector::from_bools(&(0..code.k()).map(|_| rng.random::<bool>()).collect::<Vec<_>>());
        code.encode(&u).expect("length k")
    } else {
        BitVector::zeros(code.n())
    };
    let llr = awgn_llr_with(&x, ebn0_db, code.rate(), &mut rng);
    let out = decoder.decode(&llr);
    let mut diff = out.hard_bits;
    diff.xor_assign(&x);
    let bits = diff.weight() as u64;
    (bits > 0, bits)
}

/// Runs one sweep point after another; `on_record` sees each finished point.
pub fn run_sweep(
    code: &LinearCode,
    decoder: &dyn FrameDecoder,
    params: &SweepParams,
    mut on_record: impl FnMut(&FerRecord),
) -> Result<Vec<FerRecord>> {
    params.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut records = Vec::with_capacity(params.ebn0_db.len());
    for (s, &ebn0) in params.ebn0_db.iter().enumerate() {
        let start = Instant::now();
        let (mut frames, mut errors, mut bit_errors) = (0u64, 0u64, 0u64);
        while errors < params.min_frame_errors && frames < params.max_frames {
            let batch = (params.max_frames - frames).min(BATCH as u64);
            let (e, b) = pool.install(|| {
                (frames..frames + batch)
                    .into_par_iter()
                    .map(|f| {
                        let (err, bits) = simulate_frame(
                            code,
                            decoder,
                            ebn0,
                            params.random_codewords,
                            frame_rng(params.seed, s, f),
                        );
                        (err as u64, bits)
                    })
                    .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
            });
            frames += batch;
            errors += e;
            bit_errors += b;
        }
        let rec = FerRecord::new(ebn0, frames, errors, bit_errors, start.elapsed().as_secs_f64());
        on_record(&rec);
        records.push(rec);
    }
    Ok(records)
}

fn default_min_frame_errors() -> u64 {
    300
}
fn default_max_frames() -> u64 {
    10_000_000
}
fn default_workers() -> usize {
    1
}
fn default_iterations() -> usize {
    BpConfig::default().iterations
}
fn default_normalization() -> f64 {
    BpConfig::default().normalization
}
fn default_true() -> bool {
    true
}
fn default_powers() -> Vec<i64> {
    vec![0, 1, -1]
}
fn default_ell() -> usize {
    3
}
fn default_order() -> usize {
    2
}

/// Flat TOML configuration of the `simulate` command.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Bundle directory holding `H` and `T`, relative to the config file.
    pub code_dir: String,
    pub ebn0_db: Vec<f64>,
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    #[serde(default = "default_max_frames")]
    pub max_frames: u64,
    /// One of `bp`, `gaed`, `rr`, `osd`.
    pub decoder: String,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_normalization")]
    pub normalization: f64,
    #[serde(default = "default_true")]
    pub early_stop: bool,
    /// Exponents of `T` used as ensemble paths.
    #[serde(default = "default_powers")]
    pub powers: Vec<i64>,
    #[serde(default = "default_ell")]
    pub ell: usize,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub random_codewords: bool,
    /// When false, the elapsed-time column is written as 0 so that output is
    /// byte-reproducible.
    #[serde(default = "default_true")]
    pub report_elapsed: bool,
    #[serde(default)]
    pub output: Option<String>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text).map_err(|e| toml_error(text, e))?;
        cfg.params().validate()?;
        cfg.decoder_spec()?;
        Ok(cfg)
    }

    pub fn params(&self) -> SweepParams {
        SweepParams {
            ebn0_db: self.ebn0_db.clone(),
            min_frame_errors: self.min_frame_errors,
            max_frames: self.max_frames,
            seed: self.seed,
            workers: self.workers,
            random_codewords: self.random_codewords,
        }
    }

    pub fn decoder_spec(&self) -> Result<DecoderSpec> {
        let bp = BpConfig {
            iterations: self.iterations,
            normalization: self.normalization,
            early_stop: self.early_stop,
        };
        let spec = match self.decoder.as_str() {
            "bp" => DecoderSpec::Bp(bp),
            "gaed" => {
                if self.powers.is_empty() {
                    return Err(Error::EmptyEnsemble);
                }
                DecoderSpec::Gaed {
                    bp,
                    powers: self.powers.clone(),
                }
            }
            "rr" => DecoderSpec::Redundant { bp, ell: self.ell },
            "osd" => return Ok(DecoderSpec::Osd { order: self.order }),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown decoder {other:?}, expected bp, gaed, rr or osd"
                )))
            }
        };
        bp.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::tests::hamming74;

    #[test]
    fn g_formatting() {
        assert_eq!(format_g(0.0), "0");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(2.5), "2.5");
        assert_eq!(format_g(0.0123456789), "0.0123457");
        assert_eq!(format_g(0.0001), "0.0001");
        assert_eq!(format_g(0.00001234), "1.234e-05");
        assert_eq!(format_g(123456.0), "123456");
        assert_eq!(format_g(1234567.0), "1.23457e+06");
        assert_eq!(format_g(-3.5), "-3.5");
        assert_eq!(format_g(1.0 / 3.0), "0.333333");
    }

    #[test]
    fn ci_formula() {
        let r = FerRecord::new(2.0, 1000, 100, 250, 0.0);
        assert_eq!(r.fer, 0.1);
        assert!((r.ci95_halfwidth - 1.96 * (0.09f64 / 1000.0).sqrt()).abs() < 1e-15);
    }

    fn params(workers: usize) -> SweepParams {
        SweepParams {
            ebn0_db: vec![1.0, 3.0],
            min_frame_errors: 50,
            max_frames: 20_000,
            seed: 11,
            workers,
            random_codewords: false,
        }
    }

    #[test]
    fn counts_independent_of_worker_count() {
        let code = hamming74();
        let dec = BpDecoder::new(code.h(), BpConfig::new(5)).unwrap();
        let strip = |v: Vec<FerRecord>| -> Vec<(u64, u64, u64)> {
            v.into_iter()
                .map(|r| (r.frames, r.frame_errors, r.bit_errors))
                .collect()
        };
        let one = strip(run_sweep(&code, &dec, &params(1), |_| {}).unwrap());
        let two = strip(run_sweep(&code, &dec, &params(2), |_| {}).unwrap());
        assert_eq!(one, two);
        assert!(one.iter().all(|&(f, e, _)| e >= 50 && f % BATCH as u64 == 0));
    }

    #[test]
    fn max_frames_caps_the_run() {
        let code = hamming74();
        let dec = BpDecoder::new(code.h(), BpConfig::new(5)).unwrap();
        let p = SweepParams {
            ebn0_db: vec![8.0],
            min_frame_errors: 1_000,
            max_frames: 300,
            ..params(1)
        };
        let recs = run_sweep(&code, &dec, &p, |_| {}).unwrap();
        assert_eq!(recs[0].frames, 300);
    }

    #[test]
    fn config_parsing() {
        let cfg = SweepConfig::parse(
            "code_dir = \"c\"\nebn0_db = [1.0, 1.5]\ndecoder = \"gaed\"\niterations = 10\n",
        )
        .unwrap();
        assert_eq!(cfg.min_frame_errors, 300);
        assert_eq!(
            cfg.decoder_spec().unwrap(),
            DecoderSpec::Gaed {
                bp: BpConfig::new(10),
                powers: vec![0, 1, -1]
            }
        );
        for bad in [
            "code_dir = \"c\"\nebn0_db = [2.0, 1.0]\ndecoder = \"bp\"\n",
            "code_dir = \"c\"\nebn0_db = []\ndecoder = \"bp\"\n",
            "code_dir = \"c\"\nebn0_db = [1.0]\ndecoder = \"sp\"\n",
            "code_dir = \"c\"\nebn0_db = [1.0]\ndecoder = \"bp\"\nmin_frame_errors = 0\n",
            "code_dir = \"c\"\nebn0_db = [1.0]\ndecoder = \"bp\"\nunknown = 1\n",
            "code_dir = \"c\"\nebn0_db = [1.0]\ndecoder = \"bp\"\nnormalization = 1.5\n",
        ] {
            assert!(SweepConfig::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_layout() {
        let r = FerRecord::new(1.5, 2000, 300, 1234, 0.0);
        assert_eq!(
            to_csv(&[r]),
            format!("{CSV_HEADER}\n1.5,2000,300,1234,0.15,0.0156493,0\n")
        );
    }
}
