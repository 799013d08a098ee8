use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use genaut::automorphism::{
    construct_with, verify_automorphism, Ccm, ConstructionParams, GeneralizedAutomorphism,
};
use genaut::code::{min_distance, LinearCode};
use genaut::io::{read_bundle, read_matrix, write_bundle, Manifest};
use genaut::sim::{run_sweep, SweepConfig, CSV_HEADER};
use genaut::{BitMatrix, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "genaut",
    version,
    about = "Codes with generalized automorphisms and their ensemble decoders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a code together with a generalized automorphism.
    Construct {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        k: usize,
        /// Extra ones in the sampled matrix beyond a permutation.
        #[arg(short, long, default_value_t = 0)]
        delta: usize,
        #[arg(short, long, default_value_t = 0)]
        seed: u64,
        /// Output directory for the matrices and manifest.
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_resamples: usize,
        /// Reject codes whose minimum distance is below this.
        #[arg(long, default_value_t = 0)]
        min_distance: usize,
        /// Reject samples that would shorten the code.
        #[arg(long)]
        keep_length: bool,
        /// Dual words offered to the parity-check optimizer (default 8(n-k)).
        #[arg(long)]
        pool_size: Option<usize>,
        #[arg(long, default_value_t = 16)]
        trials: usize,
    },
    /// Run a Monte-Carlo FER sweep described by a TOML file.
    Simulate { config: PathBuf },
    /// Check the automorphism and characterization matrix stored in a bundle.
    Verify { code_dir: PathBuf },
    /// Minimum distance of the code defined by a parity-check matrix file.
    Dmin { matrix: PathBuf },
}

/// Error carrying the process exit status.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn new(code: u8, err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            err: err.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::BudgetExhausted { .. }) => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
        Failure { code, err }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Construct {
            n,
            k,
            delta,
            seed,
            out,
            max_resamples,
            min_distance,
            keep_length,
            pool_size,
            trials,
        } => {
            let p = ConstructionParams {
                max_resamples,
                pool_size,
                optimization_trials: trials,
                min_distance,
                keep_length,
                ..ConstructionParams::new(n, k, delta, seed)
            };
            construct(&p, &out)
        }
        Command::Simulate { config } => simulate(&config),
        Command::Verify { code_dir } => verify(&code_dir),
        Command::Dmin { matrix } => dmin(&matrix),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn construct(p: &ConstructionParams, out: &Path) -> Result<(), Failure> {
    if p.k == 0 || p.k >= p.n {
        return Err(Failure::new(
            EXIT_USAGE,
            anyhow::anyhow!("need 0 < k < n, got n={} k={}", p.n, p.k),
        ));
    }
    if p.max_resamples == 0 || p.optimization_trials == 0 {
        return Err(Failure::new(
            EXIT_USAGE,
            anyhow::anyhow!("max-resamples and trials must be positive"),
        ));
    }
    let c = construct_with(p)?;
    let manifest = Manifest::from_construction(&c, p.delta, p.seed);
    write_bundle(out, &c, &manifest).with_context(|| format!("writing {}", out.display()))?;
    let r = &c.report;
    eprintln!(
        "constructed ({}, {}) code after {} attempts ({} ordering, {} reduction, {} shortened, {} distance rejections)",
        c.code.n(),
        c.code.k(),
        r.attempts,
        r.ordering_failures,
        r.reduction_failures,
        r.shortened_rejections,
        r.distance_rejections
    );
    print!("{}", manifest.to_toml());
    Ok(())
}

fn load_code(dir: &Path) -> anyhow::Result<(LinearCode, GeneralizedAutomorphism)> {
    let b = read_bundle(dir).with_context(|| format!("reading bundle {}", dir.display()))?;
    let code = LinearCode::from_pcm(b.h).context("parity-check matrix")?;
    if !verify_automorphism(&code, &b.t)? {
        anyhow::bail!("T in {} is not an automorphism of the code", dir.display());
    }
    Ok((code, GeneralizedAutomorphism::new(b.t)?))
}

fn simulate(path: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg = SweepConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let (code, aut) = load_code(&base.join(&cfg.code_dir))?;
    let decoder = cfg.decoder_spec()?.build(&code, Some(&aut), cfg.seed)?;
    eprintln!(
        "simulating {} on a ({}, {}) code",
        decoder.label(),
        code.n(),
        code.k()
    );

    let mut sink: Box<dyn Write> = match &cfg.output {
        Some(out) => {
            let out = base.join(out);
            Box::new(fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?)
        }
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(sink, "{CSV_HEADER}").context("writing output")?;
    let mut write_err = None;
    run_sweep(&code, decoder.as_ref(), &cfg.params(), |rec| {
        let mut rec = rec.clone();
        if !cfg.report_elapsed {
            rec.elapsed_s = 0.0;
        }
        if let Err(e) = writeln!(sink, "{}", rec.csv_row()).and_then(|_| sink.flush()) {
            write_err.get_or_insert(e);
        }
    })?;
    match write_err {
        Some(e) => Err(anyhow::Error::from(e).context("writing output").into()),
        None => Ok(()),
    }
}

fn verify(dir: &Path) -> Result<(), Failure> {
    let b = read_bundle(dir).with_context(|| format!("reading bundle {}", dir.display()))?;
    let code = LinearCode::from_pcm(b.h.clone()).context("parity-check matrix")?;
    let n = code.n();
    let mut failed = 0;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    };

    check("code", true, format!("n={} k={}", n, code.k()));
    if let Some(h) = &b.h_alist {
        check("alist", *h == b.h, "H.alist matches H.txt".into());
    }
    let t_ok = b.t.shape() == (n, n) && verify_automorphism(&code, &b.t)?;
    check("automorphism", t_ok, "H·T·Gᵀ = 0 with T invertible".into());

    let omega = b.t.weight();
    check(
        "weight",
        true,
        format!("omega(T)={omega} delta(T)={}", omega as i64 - n as i64),
    );
    if t_ok {
        let aut = GeneralizedAutomorphism::new(b.t.clone())?;
        if let Some(t_inv) = &b.t_inv {
            check("inverse", t_inv == aut.t_inv(), "Tinv·T = I".into());
        }
        if let Some(t2) = &b.t2 {
            let sq = aut.power(2);
            let ok = t2 == sq.t() && verify_automorphism(&code, t2)?;
            check("square", ok, "T2 = T·T and is an automorphism".into());
        }
        if let Some(m) = &b.manifest {
            let ok = m.n == n
                && m.k == code.k()
                && m.omega_t == omega
                && m.omega_t_inv == aut.t_inv().weight()
                && m.omega_t2 == aut.power(2).omega();
            check(
                "manifest",
                ok,
                format!("omega(Tinv)={} omega(T2)={}", m.omega_t_inv, m.omega_t2),
            );
        }
    }
    match b.a {
        Some(a) if a.shape() == (n, n) => match Ccm::new(&code, a.clone()) {
            Ok(ccm) => {
                check("ccm", true, "H·A = [I | 0]".into());
                check(
                    "ccm-inverse",
                    ccm.contains_pcm(code.h()),
                    "top rows of A⁻¹ equal H".into(),
                );
            }
            Err(e) => check("ccm", false, e.to_string()),
        },
        Some(a) => check("ccm", false, format!("A is {}x{}", a.rows(), a.cols())),
        None => check("ccm", false, "A.txt missing".into()),
    }

    if failed > 0 {
        return Err(Failure::new(
            EXIT_INVALID,
            anyhow::anyhow!("{failed} check(s) failed"),
        ));
    }
    Ok(())
}

fn dmin(path: &Path) -> Result<(), Failure> {
    let h: BitMatrix = read_matrix(path).with_context(|| format!("reading {}", path.display()))?;
    let code = LinearCode::from_pcm(h)?;
    println!("{}", min_distance(&code)?);
    Ok(())
}
