//! Command-line front end: exact stopping-set and weight enumerators,
//! coefficient tables, and a peeling decoder for erasure-channel
//! analysis.
//!
//! Results go to stdout; warnings and errors go to stderr.  Exit codes:
//! 0 success, 2 domain/usage error, 3 input format error, 4 resource cap
//! exceeded.  All outputs are deterministic byte-for-byte for a given
//! command line and input, regardless of `--workers`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use stopset::combinatorics::BTable;
use stopset::enumerator::{
    brute_force_stopping, brute_force_weight, hamming_stopping_closed_form_with,
    hamming_stopping_doublesum, inclusion_exclusion_stopping, Enumerator, MAX_BRUTE_FORCE_COLS,
    MAX_INCLUSION_EXCLUSION_ROWS,
};
use stopset::matrix::{BitMatrix, MAX_HAMMING_M};
use stopset::peeling::{
    exact_failure_probability, exhaustive_failure_profile, monte_carlo_failure, peel,
    DecodeStatus, ErasurePattern,
};
use stopset::Error;

/// Environment variable that lowers the brute-force column cap below the
/// built-in limit.
const MAX_BRUTE_N_ENV: &str = "STOPSET_MAX_BRUTE_N";

/// Without `--upto`, the Hamming closed forms refuse to print more
/// coefficients than this: the full vector has `2^m` entries and the cost
/// per entry grows quadratically in the index.
const MAX_DEFAULT_HAMMING_COEFFS: usize = 256;

#[derive(Parser)]
#[command(name = "stopset", version, about = "Exact stopping-set and weight enumerators for binary parity-check matrices")]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stopping-set enumerator of the Hamming parity-check matrix with
    /// parameter m (m rows, 2^m - 1 columns).
    Hamming {
        /// Hamming parameter m.
        #[arg(long)]
        m: u32,

        /// Computation route.
        #[arg(long, value_enum, default_value = "theorem2")]
        method: HammingMethod,

        /// Print coefficients only up to this size (default: all).
        #[arg(long, value_name = "L")]
        upto: Option<usize>,
    },

    /// Stopping-set or codeword-weight enumerator of a matrix read from a
    /// file (one row per line, characters 0/1).
    Enumerate {
        /// Path to the parity-check matrix.
        matrix: PathBuf,

        /// Which subsets to count.
        #[arg(long, value_enum, default_value = "stopping")]
        kind: EnumKind,

        /// Computation route; weight enumerators support only `brute`.
        #[arg(long, value_enum, default_value = "brute")]
        method: EnumMethod,
    },

    /// Table of the b(q, v) coefficients used by the Hamming closed form.
    Btable {
        /// Largest q (row index).
        #[arg(long, default_value_t = 7)]
        qmax: usize,

        /// Largest v (column index).
        #[arg(long, default_value_t = 7)]
        vmax: usize,
    },

    /// Run the peeling decoder on one erasure pattern.
    Peel {
        /// Path to the parity-check matrix.
        matrix: PathBuf,

        /// Comma-separated 1-based erased column indices (may be empty).
        #[arg(long, value_name = "LIST")]
        erase: String,
    },

    /// Decoding failure probability on the binary erasure channel with
    /// erasure probability epsilon.
    Bec {
        /// Path to the parity-check matrix.
        matrix: PathBuf,

        /// Per-column erasure probability in [0, 1].
        #[arg(long)]
        epsilon: f64,

        /// Compute the exact probability from the full failure census
        /// (requires at most 20 columns).
        #[arg(long, conflicts_with_all = ["trials", "seed"])]
        exact: bool,

        /// Estimate by Monte Carlo with this many trials.
        #[arg(long)]
        trials: Option<u64>,

        /// Random seed for Monte Carlo (default 0).
        #[arg(long, requires = "trials")]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HammingMethod {
    /// Closed form with m only in the exponents; fastest for large m.
    Theorem2,
    /// Double sum over row-subset cardinality and partition size.
    Doublesum,
    /// Generic row-subset inclusion-exclusion on the materialized matrix.
    InclusionExclusion,
    /// Direct enumeration of all 2^n column subsets (n <= 31, so m <= 5).
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumKind {
    /// Count stopping sets.
    Stopping,
    /// Count codeword supports.
    Weight,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumMethod {
    /// Direct enumeration of all 2^n column subsets (n <= 31).
    Brute,
    /// Row-subset inclusion-exclusion (r <= 20, any n).
    InclusionExclusion,
}

/// CLI-level error: a library error, or an I/O failure naming the file.
enum CliError {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "cannot read {}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Domain(_)) => 2,
            CliError::Lib(Error::Format { .. }) => 3,
            CliError::Io(..) => 3,
            CliError::Lib(Error::Resource(_)) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        // Fixing the pool size keeps runs comparable; results are
        // identical for any worker count by construction.
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: cannot configure {workers} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Hamming { m, method, upto } => run_hamming(*m, *method, *upto, cli.format),
        Command::Enumerate {
            matrix,
            kind,
            method,
        } => run_enumerate(matrix, *kind, *method, cli.format),
        Command::Btable { qmax, vmax } => run_btable(*qmax, *vmax, cli.format),
        Command::Peel { matrix, erase } => run_peel(matrix, erase, cli.format),
        Command::Bec {
            matrix,
            epsilon,
            exact,
            trials,
            seed,
        } => run_bec(matrix, *epsilon, *exact, *trials, *seed, cli.format),
    }
}

fn read_matrix(path: &Path) -> Result<BitMatrix, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    Ok(BitMatrix::parse(&text)?)
}

/// Effective brute-force column cap: the built-in limit, optionally
/// lowered via the environment.
fn check_brute_force_cols(n: usize) -> Result<(), Error> {
    let cap = match std::env::var(MAX_BRUTE_N_ENV) {
        Err(_) => MAX_BRUTE_FORCE_COLS,
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| {
                Error::Domain(format!(
                    "{MAX_BRUTE_N_ENV} must be a nonnegative integer, got {v:?}"
                ))
            })?
            .min(MAX_BRUTE_FORCE_COLS),
    };
    if n > cap {
        return Err(Error::Resource(format!(
            "brute force over {n} columns exceeds the cap of {cap} \
             (built-in limit {MAX_BRUTE_FORCE_COLS}, lower it via {MAX_BRUTE_N_ENV})"
        )));
    }
    Ok(())
}

fn run_hamming(
    m: u32,
    method: HammingMethod,
    upto: Option<usize>,
    format: Format,
) -> Result<String, CliError> {
    // Reject bad m uniformly across methods, without materializing the
    // matrix (it can be huge even when m is valid).
    if !(2..=MAX_HAMMING_M).contains(&m) {
        return Err(Error::Domain(format!(
            "Hamming parameter m must satisfy 2 <= m <= {MAX_HAMMING_M}, got {m}"
        ))
        .into());
    }
    let n = (1usize << m) - 1;
    let l_max = match upto {
        Some(l) => {
            if l > n {
                return Err(Error::Domain(format!(
                    "--upto {l} exceeds n = 2^{m} - 1 = {n}"
                ))
                .into());
            }
            l
        }
        None => n,
    };

    let coeffs: Vec<BigInt> = match method {
        HammingMethod::Theorem2 => {
            check_default_span(m, n, upto)?;
            let btable = BTable::with_capacity(l_max);
            (0..=l_max)
                .map(|l| hamming_stopping_closed_form_with(m, l, &btable))
                .collect::<Result<_, _>>()?
        }
        HammingMethod::Doublesum => {
            check_default_span(m, n, upto)?;
            (0..=l_max)
                .map(|l| hamming_stopping_doublesum(m, l))
                .collect::<Result<_, _>>()?
        }
        HammingMethod::InclusionExclusion => {
            // Preflight the row cap so an over-wide matrix is never built.
            if m as usize > MAX_INCLUSION_EXCLUSION_ROWS {
                return Err(Error::Resource(format!(
                    "row-subset inclusion-exclusion covers r <= \
                     {MAX_INCLUSION_EXCLUSION_ROWS} rows, got r = {m}"
                ))
                .into());
            }
            let h = BitMatrix::hamming(m)?;
            let e = inclusion_exclusion_stopping(&h)?;
            e.coeffs()[..=l_max].to_vec()
        }
        HammingMethod::Brute => {
            check_brute_force_cols(n)?;
            if m >= 5 {
                eprintln!(
                    "warning: brute force enumerates 2^{n} column subsets; \
                     expect a long runtime at m = {m}"
                );
            }
            let h = BitMatrix::hamming(m)?;
            let e = brute_force_stopping(&h)?;
            e.coeffs()[..=l_max].to_vec()
        }
    };
    Ok(render_coefficients(n, &coeffs, format))
}

/// Refuses to print an enormous default coefficient span; an explicit
/// `--upto` always wins.
fn check_default_span(m: u32, n: usize, upto: Option<usize>) -> Result<(), Error> {
    if upto.is_none() && n + 1 > MAX_DEFAULT_HAMMING_COEFFS {
        return Err(Error::Domain(format!(
            "the full coefficient vector for m = {m} has {} entries; \
             pass --upto to bound the output",
            n + 1
        )));
    }
    Ok(())
}

fn run_enumerate(
    path: &Path,
    kind: EnumKind,
    method: EnumMethod,
    format: Format,
) -> Result<String, CliError> {
    let h = read_matrix(path)?;
    let e: Enumerator = match (kind, method) {
        (EnumKind::Stopping, EnumMethod::Brute) => {
            check_brute_force_cols(h.cols())?;
            brute_force_stopping(&h)?
        }
        (EnumKind::Stopping, EnumMethod::InclusionExclusion) => inclusion_exclusion_stopping(&h)?,
        (EnumKind::Weight, EnumMethod::Brute) => {
            check_brute_force_cols(h.cols())?;
            brute_force_weight(&h)?
        }
        (EnumKind::Weight, EnumMethod::InclusionExclusion) => {
            return Err(Error::Domain(
                "weight enumerators support only --method brute".into(),
            )
            .into());
        }
    };
    Ok(render_coefficients(e.n(), e.coeffs(), format))
}

#[derive(Serialize)]
struct CoefficientsWire<'a> {
    n: usize,
    coeffs: Vec<&'a str>,
}

/// Renders an enumerator prefix.  JSON keeps the true `n` even when the
/// coefficient list is truncated by `--upto`.
fn render_coefficients(n: usize, coeffs: &[BigInt], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for (l, c) in coeffs.iter().enumerate() {
                out.push_str(&format!("{l} {c}\n"));
            }
            out
        }
        Format::Csv => {
            let mut out = String::new();
            for (l, c) in coeffs.iter().enumerate() {
                out.push_str(&format!("{l},{c}\n"));
            }
            out
        }
        Format::Json => {
            let decimal: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            let wire = CoefficientsWire {
                n,
                coeffs: decimal.iter().map(String::as_str).collect(),
            };
            let mut s = serde_json::to_string(&wire).expect("serialization cannot fail");
            s.push('\n');
            s
        }
    }
}

#[derive(Serialize)]
struct BTableWire {
    qmax: usize,
    vmax: usize,
    values: Vec<Vec<String>>,
}

fn run_btable(qmax: usize, vmax: usize, format: Format) -> Result<String, CliError> {
    const CAP: usize = 64;
    if qmax > CAP || vmax > CAP {
        return Err(Error::Domain(format!(
            "coefficient table indices are capped at {CAP}, got qmax = {qmax}, vmax = {vmax}"
        ))
        .into());
    }
    let table = BTable::with_capacity(qmax.max(vmax));
    let values: Vec<Vec<String>> = (0..=qmax)
        .map(|q| (0..=vmax).map(|v| table.get(q, v).to_string()).collect())
        .collect();
    Ok(match format {
        Format::Text => {
            // Right-aligned grid with q labels down the side and v labels
            // across the top.
            let mut widths: Vec<usize> = (0..=vmax).map(|v| format!("v={v}").len()).collect();
            for row in &values {
                for (v, cell) in row.iter().enumerate() {
                    widths[v] = widths[v].max(cell.len());
                }
            }
            let label_width = format!("q={qmax}").len();
            let mut out = String::new();
            out.push_str(&" ".repeat(label_width));
            for (v, &w) in widths.iter().enumerate() {
                out.push_str(&format!("  {:>w$}", format!("v={v}")));
            }
            out.push('\n');
            for (q, row) in values.iter().enumerate() {
                out.push_str(&format!("{:<label_width$}", format!("q={q}")));
                for (cell, &w) in row.iter().zip(&widths) {
                    out.push_str(&format!("  {cell:>w$}"));
                }
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut out = String::new();
            for (q, row) in values.iter().enumerate() {
                for (v, cell) in row.iter().enumerate() {
                    out.push_str(&format!("{q},{v},{cell}\n"));
                }
            }
            out
        }
        Format::Json => {
            let wire = BTableWire { qmax, vmax, values };
            let mut s = serde_json::to_string(&wire).expect("serialization cannot fail");
            s.push('\n');
            s
        }
    })
}

fn parse_erasure_list(list: &str, n: usize) -> Result<ErasurePattern, Error> {
    let mut indices = Vec::new();
    for token in list.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let idx: usize = token.parse().map_err(|_| Error::Format {
            line: 1,
            msg: format!("erasure list entry {token:?} is not a positive integer"),
        })?;
        indices.push(idx);
    }
    ErasurePattern::new(&indices, n)
}

#[derive(Serialize)]
struct PeelWire {
    status: &'static str,
    steps: usize,
    residual: Vec<usize>,
}

fn run_peel(path: &Path, erase: &str, format: Format) -> Result<String, CliError> {
    let h = read_matrix(path)?;
    let pattern = parse_erasure_list(erase, h.cols())?;
    let outcome = peel(&h, &pattern);
    let status = match outcome.status {
        DecodeStatus::Recovered => "recovered",
        DecodeStatus::Stuck => "stuck",
    };
    let joined = |sep: &str| {
        outcome
            .residual
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(sep)
    };
    Ok(match format {
        Format::Text => match outcome.status {
            DecodeStatus::Recovered => format!("recovered steps={}\n", outcome.steps),
            DecodeStatus::Stuck => {
                format!("stuck steps={} residual={}\n", outcome.steps, joined(","))
            }
        },
        Format::Csv => format!("{status},{},{}\n", outcome.steps, joined(";")),
        Format::Json => {
            let wire = PeelWire {
                status,
                steps: outcome.steps,
                residual: outcome.residual.clone(),
            };
            let mut s = serde_json::to_string(&wire).expect("serialization cannot fail");
            s.push('\n');
            s
        }
    })
}

#[derive(Serialize)]
struct BecExactWire {
    epsilon: f64,
    exact: f64,
}

#[derive(Serialize)]
struct BecEstimateWire {
    epsilon: f64,
    estimate: f64,
    std_error: f64,
    failures: u64,
    trials: u64,
    seed: u64,
}

fn run_bec(
    path: &Path,
    epsilon: f64,
    exact: bool,
    trials: Option<u64>,
    seed: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    let h = read_matrix(path)?;
    if exact {
        let profile = exhaustive_failure_profile(&h)?;
        let p = exact_failure_probability(&profile, epsilon)?;
        return Ok(match format {
            Format::Text => format!("epsilon={epsilon} exact={p}\n"),
            Format::Csv => format!("{epsilon},{p}\n"),
            Format::Json => {
                let wire = BecExactWire { epsilon, exact: p };
                let mut s = serde_json::to_string(&wire).expect("serialization cannot fail");
                s.push('\n');
                s
            }
        });
    }
    let Some(trials) = trials else {
        return Err(Error::Domain(
            "choose --exact or --trials N for the Monte Carlo estimate".into(),
        )
        .into());
    };
    let seed = seed.unwrap_or(0);
    let mc = monte_carlo_failure(&h, epsilon, trials, seed)?;
    Ok(match format {
        Format::Text => format!(
            "epsilon={epsilon} estimate={} std_error={} failures={} trials={} seed={seed}\n",
            mc.estimate, mc.std_error, mc.failures, mc.trials
        ),
        Format::Csv => format!(
            "{epsilon},{},{},{},{},{seed}\n",
            mc.estimate, mc.std_error, mc.failures, mc.trials
        ),
        Format::Json => {
            let wire = BecEstimateWire {
                epsilon,
                estimate: mc.estimate,
                std_error: mc.std_error,
                failures: mc.failures,
                trials: mc.trials,
                seed,
            };
            let mut s = serde_json::to_string(&wire).expect("serialization cannot fail");
            s.push('\n');
            s
        }
    })
}
