//! `sixpow`: command line driver for the sums-of-two-sixth-powers pipeline.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use sixpow_core::io::{read_generators, read_klist, write_klist};
use sixpow_core::local::enumerate_locally_solvable;
use sixpow_core::maps::map_by_id;
use sixpow_core::mwsieve::{run_sieve, SieveConfig, SieveStage, DEFAULT_STAGES};
use sixpow_core::repfind::{find_representations, verify_family, verify_representation};
use sixpow_core::theta::{
    certificate_targets, combination_coeffs, h_coeffs_at, rank_zero_certificate, HCoefficients, HSeries, ThetaWeights,
};
use sixpow_core::{Error, MwSubgroup};

#[derive(Parser)]
#[command(name = "sixpow", version, about = "Which integers are sums of two rational sixth powers?")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List sixth-power-free k <= MAX for which x^6 + y^6 = k z^6 is everywhere locally solvable.
    Local {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drop odd k whose curve y^2 = x^3 + k^3 is certified to have rank zero.
    Theta {
        /// Largest theta coefficient index available.
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        klist: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-k certificate log: `k k' C(k') verdict`.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Compute all coefficients up to LIMIT instead of only the needed ones.
        #[arg(long)]
        dense: bool,
        /// Write the dense coefficient array (implies --dense).
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run the Mordell-Weil sieve for one k.
    Mwsieve {
        #[arg(long)]
        k: u64,
        /// Generator file (`k tag r X1 Y1 Z1 ...` per line).
        #[arg(long)]
        gens: PathBuf,
        /// Map number 1-10; default picks the codomain of least rank.
        #[arg(long)]
        map: Option<usize>,
        /// Largest modulus N on the default ladder 2, 4, 12, 84.
        #[arg(long, default_value_t = 84)]
        nmax: u64,
        /// Largest prime used.
        #[arg(long, default_value_t = 1021)]
        pmax: u64,
        /// Explicit ladder `mult:cap,...`, overriding --nmax.
        #[arg(long)]
        stages: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Representations k = (a/m)^6 + (b/m)^6 with denominator m.
    Repfind {
        #[arg(long)]
        m: u64,
    },
    /// Check the infinite family of non-integral representations.
    Family {
        #[arg(long, default_value_t = -1000, allow_hyphen_values = true)]
        tmin: i64,
        #[arg(long, default_value_t = 1000, allow_hyphen_values = true)]
        tmax: i64,
    },
    /// Exact check of a^6 + b^6 = k m^6.
    VerifyRep {
        k: BigInt,
        a: BigInt,
        b: BigInt,
        m: BigInt,
    },
}

/// Exit status with a message for stderr.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::Parse { .. } => 1,
            Error::PatchCoverage { .. } | Error::Invariant(_) => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure { code: 2, msg: e.to_string() }),
    }
}

fn cmd_local(max: u64, out: Option<&Path>) -> Result<(), Failure> {
    let ks = enumerate_locally_solvable(max);
    emit(out, &write_klist(&ks))
}

fn cached_dense(limit: u64) -> Result<HSeries, Failure> {
    let cache = std::env::var_os("SIXPOW_CACHE_DIR").map(|d| PathBuf::from(d).join(format!("theta-eigen-{limit}.bin")));
    if let Some(path) = &cache {
        if let Ok(bytes) = fs::read(path) {
            if let Ok(h) = HSeries::read_dump(&bytes[..]) {
                if h.limit() == limit && h.weights() == ThetaWeights::EIGENFORM {
                    return Ok(h);
                }
            }
        }
    }
    let h = combination_coeffs(limit, ThetaWeights::EIGENFORM)?;
    if let Some(path) = cache {
        let mut buf = Vec::new();
        h.write_dump(&mut buf).map_err(|e| input(e.to_string()))?;
        // the cache is an optimization; failing to write it is not an error
        let _ = fs::write(path, buf);
    }
    Ok(h)
}

fn cmd_theta(
    limit: u64,
    klist: &Path,
    out: Option<&Path>,
    log: Option<&Path>,
    dense: bool,
    dump: Option<&Path>,
) -> Result<(), Failure> {
    let ks = read_klist(&read(klist)?)?;
    let odd: Vec<u64> = ks.iter().copied().filter(|k| k % 2 == 1).collect();
    let coeffs: Box<dyn HCoefficients> = if dense || dump.is_some() {
        let h = cached_dense(limit)?;
        if let Some(path) = dump {
            let mut f = fs::File::create(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            h.write_dump(&mut f).map_err(|e| input(e.to_string()))?;
        }
        Box::new(h)
    } else {
        let targets: BTreeSet<u64> = certificate_targets(&odd).into_iter().filter(|&n| n <= limit).collect();
        Box::new(h_coeffs_at(&targets, ThetaWeights::EIGENFORM)?)
    };
    let mut survivors = Vec::with_capacity(ks.len());
    let mut log_text = String::new();
    for &k in &ks {
        if k % 2 == 0 || k % 3 == 0 {
            survivors.push(k);
            continue;
        }
        let cert = rank_zero_certificate(k, &Bounded { inner: coeffs.as_ref(), limit })?;
        log_text.push_str(&format!("{cert}\n"));
        if cert.verdict != sixpow_core::theta::RankZeroVerdict::CertifiedRankZero {
            survivors.push(k);
        }
    }
    if let Some(path) = log {
        emit(Some(path), &log_text)?;
    }
    emit(out, &write_klist(&survivors))
}

/// Hides coefficients beyond the requested limit.
struct Bounded<'a> {
    inner: &'a dyn HCoefficients,
    limit: u64,
}

impl HCoefficients for Bounded<'_> {
    fn weights(&self) -> ThetaWeights {
        self.inner.weights()
    }

    fn h_coeff(&self, n: u64) -> Option<i64> {
        if n > self.limit {
            None
        } else {
            self.inner.h_coeff(n)
        }
    }
}

fn parse_stages(spec: &str) -> Result<Vec<SieveStage>, Failure> {
    spec.split(',')
        .map(|part| {
            let (m, c) = part
                .split_once(':')
                .ok_or_else(|| input(format!("stage {part:?} is not `multiplier:cap`")))?;
            let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| input(format!("bad number in stage {part:?}")));
            Ok(SieveStage { multiplier: parse(m)?, prime_cap: parse(c)? })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_mwsieve(
    k: u64,
    gens: &Path,
    map: Option<usize>,
    nmax: u64,
    pmax: u64,
    stages: Option<&str>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let records: Vec<_> = read_generators(&read(gens)?)?.into_iter().filter(|r| r.k == k).collect();
    if records.is_empty() {
        return Err(input(format!("no generators for k = {k} in {}", gens.display())));
    }
    let candidates = records
        .iter()
        .map(|r| Ok((r.tag, r.subgroup()?)))
        .collect::<Result<Vec<(_, MwSubgroup)>, Error>>()?;
    let (map_spec, sub) = match map {
        Some(id) => {
            let spec = map_by_id(id)?;
            let sub = candidates
                .iter()
                .filter(|(t, _)| *t == spec.codomain())
                .map(|(_, s)| s)
                .min_by_key(|s| s.rank())
                .ok_or_else(|| input(format!("no generators on {} for map {id}", spec.codomain())))?;
            (spec, sub)
        }
        None => sixpow_core::mwsieve::choose_curve(&candidates).ok_or_else(|| input("no usable generators"))?,
    };
    let ladder = match stages {
        Some(s) => parse_stages(s)?,
        None => {
            let mut n = 1;
            DEFAULT_STAGES
                .iter()
                .take_while(|s| {
                    n *= s.multiplier;
                    n <= nmax
                })
                .copied()
                .collect()
        }
    };
    let mut config = SieveConfig::new(k, map_spec.id(), sub.clone())?.with_stages(ladder)?;
    config.max_prime = pmax;
    let outcome = run_sieve(&config)?;
    let mut text = format!("# k={k} map={} codomain={} rank={}\n", map_spec.id(), map_spec.codomain(), sub.rank());
    for line in outcome.transcript() {
        text.push_str(&line);
        text.push('\n');
    }
    emit(out, &text)
}

fn cmd_repfind(m: u64) -> Result<(), Failure> {
    let reps = find_representations(m)?;
    let text: String = reps.iter().map(|r| format!("{r}\n")).collect();
    emit(None, &text)
}

fn cmd_family(tmin: i64, tmax: i64) -> Result<(), Failure> {
    if tmin > tmax {
        return Err(input("empty t range"));
    }
    let report = verify_family(tmin..=tmax);
    let poly: Vec<String> = report.polynomial.iter().map(|c| c.to_string()).collect();
    let failures = report.witnesses.iter().filter(|w| !w.2).count();
    let text = format!(
        "polynomial {}\nintegral {}\ncongruence {}\nfive_excluded {}\nchecked {} failures {}\n{}\n",
        poly.join(" "),
        report.integral,
        report.congruence,
        report.five_excluded,
        report.witnesses.len(),
        failures,
        if report.passed() { "OK" } else { "FAIL" }
    );
    emit(None, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure { code: 2, msg: "family check failed".into() })
    }
}

fn cmd_verify_rep(k: &BigInt, a: &BigInt, b: &BigInt, m: &BigInt) -> Result<(), Failure> {
    if verify_representation(k, a, b, m) {
        emit(None, "OK\n")
    } else {
        emit(None, "FAIL\n")?;
        Err(Failure { code: 1, msg: format!("{a}^6 + {b}^6 != {k} * {m}^6") })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| input(e.to_string()))?;
    }
    match cli.command {
        Command::Local { max, out } => cmd_local(max, out.as_deref()),
        Command::Theta { limit, klist, out, log, dense, dump } => {
            cmd_theta(limit, &klist, out.as_deref(), log.as_deref(), dense, dump.as_deref())
        }
        Command::Mwsieve { k, gens, map, nmax, pmax, stages, out } => {
            cmd_mwsieve(k, &gens, map, nmax, pmax, stages.as_deref(), out.as_deref())
        }
        Command::Repfind { m } => cmd_repfind(m),
        Command::Family { tmin, tmax } => cmd_family(tmin, tmax),
        Command::VerifyRep { k, a, b, m } => cmd_verify_rep(&k, &a, &b, &m),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sixpow: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
