//! Command-line front end and the JSONL classification cache.

use std::collections::{BTreeMap, HashSet};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::criteria::{
    alternating_in, classify, is_llt_reducible, llt_witness_pair, mh_parameters, n_statistic, ClassificationRecord,
    Store,
};
use crate::error::{Error, Result};
use crate::homcalc::{ehom_specht_basis, Straightener};
use crate::mh::{summarize, verify_mainhom, verify_cancellations, MhParams, Regime};
use crate::partition::{enumerate_partitions, parse_partition, Partition};

/// Exit code for success or a verified claim.
pub const EXIT_OK: i32 = 0;
/// Exit code for a failed verification or an exhausted budget.
pub const EXIT_FAILED: i32 = 1;
/// Exit code for invalid input.
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "specht", version, about = "Reducibility of Specht modules at q = -1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify one partition, e.g. `4,4,2` or `3,2^3`.
    Classify {
        partition: String,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        /// Add a `details` object describing the witnesses that fired.
        #[arg(long)]
        witnesses: bool,
    },
    /// Classify every partition of `n`, one JSON line each, then a summary line.
    Survey {
        n: usize,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        /// JSONL cache file, read at start and appended to at the end.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Build the explicit homomorphism for `(s, s', f, g)` and check it.
    VerifyMainhom {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        sp: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        g: usize,
        /// Also check the case-by-case cancellation statements (odd regime).
        #[arg(long)]
        cancellations: bool,
        /// Rewrite budget; overrides the environment variable.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// The N-statistic of an alternating partition inside `lambda`.
    Nstat { lambda: String, mu: String },
    /// The 2-regularization of a partition.
    Regularize { lambda: String },
    /// Dimension of the homomorphisms from `S^mu` to `S^lambda` built from semistandard tableaux.
    Homdim {
        mu: String,
        lambda: String,
        #[arg(long)]
        budget: Option<u64>,
    },
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_verification_failure() {
                EXIT_FAILED
            } else {
                EXIT_INVALID
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            code
        }
    }
}

fn straightener(budget: Option<u64>) -> Result<Straightener> {
    let st = Straightener::from_env()?;
    Ok(match budget {
        Some(b) => st.with_budget(b),
        None => st,
    })
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{v}").map_err(|e| Error::Io(e.to_string()))
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Classify { partition, characteristic, witnesses } => {
            let lambda = parse_partition(&partition)?;
            let store = Store::new();
            let record = classify(&lambda, characteristic, &store)?;
            let mut v = serde_json::to_value(&record).map_err(|e| Error::Io(e.to_string()))?;
            if witnesses {
                v["details"] = witness_details(&lambda);
            }
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Survey { n, characteristic, cache } => {
            survey(n, characteristic, cache.as_deref(), out, err)?;
            Ok(EXIT_OK)
        }
        Command::VerifyMainhom { s, sp, f, g, cancellations, budget } => {
            let params = MhParams::new(s, sp, f, g)?;
            let st = straightener(budget)?;
            let start = Instant::now();
            let report = verify_mainhom(&st, &params, true)?;
            let mut ok = report.verified();
            let mut v = json!({
                "params": {"s": s, "s_prime": sp, "f": f, "g": g},
                "mu": report.mu,
                "lambda": report.lambda,
                "support_size": report.support_size,
                "nonzero": report.nonzero,
                "all_semistandard": report.all_semistandard,
                "excluded_terms": report.excluded_terms,
                "pairs_total": report.pairs_total,
                "pairs_checked": report.pairs_checked,
                "pairs_failed": report.pairs_failed,
                "unexpected_pairs": report.unexpected_pairs,
            });
            if cancellations && params.regime()? == Regime::Odd {
                let c = verify_cancellations(&st, &params)?;
                let summary: BTreeMap<String, Value> = summarize(&c)
                    .into_iter()
                    .map(|(k, (checked, failed))| (k, json!({"checked": checked, "failed": failed})))
                    .collect();
                ok &= c.mismatches().is_empty();
                v["cancellations"] = json!(summary);
            }
            v["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            emit(out, &v)?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Nstat { lambda, mu } => {
            let lambda = parse_partition(&lambda)?;
            let mu = parse_partition(&mu)?;
            emit(out, &json!(n_statistic(&lambda, &mu)?))?;
            Ok(EXIT_OK)
        }
        Command::Regularize { lambda } => {
            let lambda = parse_partition(&lambda)?;
            emit(out, &json!(lambda.regularize().parts()))?;
            Ok(EXIT_OK)
        }
        Command::Homdim { mu, lambda, budget } => {
            let mu = parse_partition(&mu)?;
            let lambda = parse_partition(&lambda)?;
            let st = straightener(budget)?;
            let basis = ehom_specht_basis(&st, &mu, &lambda)?;
            emit(out, &json!(basis.dimension()))?;
            Ok(EXIT_OK)
        }
    }
}

fn witness_details(lambda: &Partition) -> Value {
    let mut d = serde_json::Map::new();
    for (key, shape) in [("self", lambda.clone()), ("conjugate", lambda.conjugate())] {
        let mut entry = serde_json::Map::new();
        if let Some(m) = mh_parameters(&shape) {
            entry.insert(
                "mh".into(),
                json!({"x": m.x, "s": m.s, "s_prime": m.s_prime, "f": m.f, "g": m.g}),
            );
        }
        if is_llt_reducible(&shape) {
            if let Ok((mu, mu_tilde)) = llt_witness_pair(&shape) {
                let pair = json!({
                    "mu": mu.parts(),
                    "mu_tilde": mu_tilde.parts(),
                    "alternating": alternating_in(&mu, &shape) && alternating_in(&mu_tilde, &shape),
                });
                entry.insert("llt".into(), pair);
            }
        }
        d.insert(key.into(), Value::Object(entry));
    }
    Value::Object(d)
}

/// Reads a JSONL cache into `store`, returning the keys present. Lines that do
/// not parse are skipped with a warning.
pub fn load_cache(path: &Path, store: &Store, err: &mut dyn Write) -> Result<HashSet<(Partition, u64)>> {
    let mut keys = HashSet::new();
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(keys),
        Err(e) => return Err(Error::Io(format!("{}: {e}", path.display()))),
    };
    for (no, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ClassificationRecord>(&line) {
            Ok(rec) => {
                keys.insert((rec.partition.clone(), rec.char));
                store.insert(rec);
            }
            Err(e) => {
                let _ = writeln!(err, "warning: skipping cache line {}: {e}", no + 1);
            }
        }
    }
    Ok(keys)
}

/// Appends records to the cache, one complete line per write.
pub fn append_cache(path: &Path, records: &[ClassificationRecord]) -> Result<()> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    for r in records {
        let mut line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(|e| Error::Io(e.to_string()))?;
    }
    Ok(())
}

/// Classifies all partitions of `n` in reverse lexicographic order.
pub fn survey_records(n: usize, p: u64, store: &Store) -> Result<Vec<ClassificationRecord>> {
    let parts: Vec<Partition> = enumerate_partitions(n).collect();
    parts.par_iter().map(|l| classify(l, p, store)).collect()
}

fn survey(n: usize, p: u64, cache: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let start = Instant::now();
    let store = Store::new();
    let cached = match cache.map(|path| load_cache(path, &store, err)) {
        Some(Ok(keys)) => keys,
        Some(Err(e)) => {
            let _ = writeln!(err, "warning: cache not read: {e}");
            HashSet::new()
        }
        None => HashSet::new(),
    };
    let records = survey_records(n, p, &store)?;
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for r in &records {
        emit(out, &serde_json::to_value(r).map_err(|e| Error::Io(e.to_string()))?)?;
        *counts.entry(r.verdict.as_str()).or_default() += 1;
    }
    emit(
        out,
        &json!({"summary": {"char": p, "n": n, "records": records.len(), "verdicts": counts},
                "elapsed_ms": start.elapsed().as_millis() as u64}),
    )?;
    if let Some(path) = cache {
        let fresh: Vec<ClassificationRecord> = records
            .into_iter()
            .filter(|r| !cached.contains(&(r.partition.clone(), r.char)))
            .collect();
        if let Err(e) = append_cache(path, &fresh) {
            let _ = writeln!(err, "warning: cache not updated: {e}");
        }
    }
    Ok(())
}
