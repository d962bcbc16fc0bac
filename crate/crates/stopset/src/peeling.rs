//! Peeling decoder for the binary erasure channel, plus exact and
//! Monte Carlo failure statistics.
//!
//! The decoder repeatedly looks for a check (row) in which exactly one
//! participating column is still erased; that column is then resolved.
//! It stops when no such row exists.  The decoder gets stuck short of
//! full recovery precisely when the erasure pattern contains a nonempty
//! stopping set, and the residual pattern it leaves behind is itself a
//! stopping set — the largest one inside the original pattern, which is
//! why the outcome does not depend on the order in which rows are
//! processed.  The default schedule (lowest row index first) makes runs
//! byte-for-byte reproducible; an explicit schedule variant exists so
//! tests can verify order independence.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// Largest column count accepted by the exhaustive failure census.
pub const MAX_EXHAUSTIVE_COLS: usize = 20;

/// Number of trials drawn from one random stream; Monte Carlo results are
/// a deterministic function of (seed, trial count) because stream `b`
/// always simulates trials `b*BATCH .. (b+1)*BATCH`, independent of how
/// batches are scheduled across workers.
const MONTE_CARLO_BATCH: u64 = 4096;

/// A set of erased column positions, 1-based, kept sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    indices: Vec<usize>,
}

impl ErasurePattern {
    /// Builds a pattern from 1-based column indices, validating them
    /// against the column count `n`.  Duplicates are collapsed.
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        let indices = crate::matrix::normalize_index_set(indices, n, "column")?;
        Ok(ErasurePattern { indices })
    }

    /// The erased positions, ascending and 1-based.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of erased positions.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Whether nothing is erased.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Terminal state of a peeling run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// Every erased position was resolved.
    Recovered,
    /// No remaining row checks exactly one erased position.
    Stuck,
}

/// Result of a peeling run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Erased positions still unresolved at the end, ascending, 1-based.
    /// Empty exactly when `status` is `Recovered`.
    pub residual: Vec<usize>,
    /// Number of single-position resolution steps performed; always
    /// `|pattern| - |residual|`.
    pub steps: usize,
}

impl DecodeOutcome {
    /// Whether decoding resolved every erased position.
    pub fn is_recovered(&self) -> bool {
        self.status == DecodeStatus::Recovered
    }
}

/// Core peeling loop on bit-packed words.  `rows` is the row priority
/// order; `erased` is mutated into the residual.  Returns the number of
/// resolution steps.
fn peel_words(rows: &[&[u64]], erased: &mut [u64]) -> usize {
    let mut steps = 0usize;
    'scan: loop {
        for row in rows {
            let mut weight = 0u32;
            let mut hit_word = 0usize;
            for (w, (&rw, &ew)) in row.iter().zip(erased.iter()).enumerate() {
                let and = rw & ew;
                if and != 0 {
                    weight += and.count_ones();
                    if weight > 1 {
                        break;
                    }
                    hit_word = w;
                }
            }
            if weight == 1 {
                erased[hit_word] &= !(row[hit_word] & erased[hit_word]);
                steps += 1;
                continue 'scan;
            }
        }
        return steps;
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

fn pattern_to_words(pattern: &ErasurePattern, n: usize) -> Vec<u64> {
    let mut words = vec![0u64; words_for(n)];
    for &idx in pattern.indices() {
        words[(idx - 1) / 64] |= 1u64 << ((idx - 1) % 64);
    }
    words
}

fn words_to_indices(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in words.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            out.push(w * 64 + b + 1);
            bits &= bits - 1;
        }
    }
    out
}

/// Runs the peeling decoder with the deterministic default schedule:
/// rows are tried lowest index first, restarting from the first row after
/// every resolution.
///
/// The pattern must have been built for a matrix with `h.cols()` columns
/// (asserted).
pub fn peel(h: &BitMatrix, erased: &ErasurePattern) -> DecodeOutcome {
    let schedule: Vec<usize> = (1..=h.rows()).collect();
    peel_with_schedule(h, erased, &schedule).expect("identity schedule is always valid")
}

/// Runs the peeling decoder trying rows in the priority order given by
/// `schedule`, a permutation of the 1-based row indices.  The status and
/// residual never depend on the schedule; only the trace of intermediate
/// resolutions does.
pub fn peel_with_schedule(
    h: &BitMatrix,
    erased: &ErasurePattern,
    schedule: &[usize],
) -> Result<DecodeOutcome> {
    let r = h.rows();
    let mut seen = vec![false; r];
    if schedule.len() != r {
        return Err(Error::domain(format!(
            "schedule lists {} rows but the matrix has {r}",
            schedule.len()
        )));
    }
    for &row in schedule {
        if row == 0 || row > r || seen[row - 1] {
            return Err(Error::domain(format!(
                "schedule must be a permutation of 1..={r}, offending entry {row}"
            )));
        }
        seen[row - 1] = true;
    }
    if let Some(&max) = erased.indices().last() {
        assert!(
            max <= h.cols(),
            "erasure pattern indexes column {max} of a {}-column matrix",
            h.cols()
        );
    }

    let rows: Vec<&[u64]> = schedule.iter().map(|&i| h.row_words(i - 1)).collect();
    let mut words = pattern_to_words(erased, h.cols());
    let steps = peel_words(&rows, &mut words);
    let residual = words_to_indices(&words);
    Ok(DecodeOutcome {
        status: if residual.is_empty() {
            DecodeStatus::Recovered
        } else {
            DecodeStatus::Stuck
        },
        residual,
        steps,
    })
}

/// Failure census of a matrix under peeling: `count(l)` is the number of
/// erasure patterns of size `l` on which the decoder gets stuck.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureProfile {
    counts: Vec<BigInt>,
}

impl FailureProfile {
    /// Number of columns of the underlying matrix.
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    /// Number of size-`l` erasure patterns that fail.  Panics if `l > n`.
    pub fn count(&self, l: usize) -> &BigInt {
        &self.counts[l]
    }

    /// All counts, index `l` = pattern size.
    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }
}

/// Census over all `2^n` erasure patterns; requires `n <= 20`.
///
/// Deterministic regardless of worker count: per-range tallies are
/// combined by addition.
pub fn exhaustive_failure_profile(h: &BitMatrix) -> Result<FailureProfile> {
    let n = h.cols();
    if n > MAX_EXHAUSTIVE_COLS {
        return Err(Error::resource(format!(
            "exhaustive failure census covers n <= {MAX_EXHAUSTIVE_COLS} columns, got n = {n}"
        )));
    }
    let rows: Vec<u32> = (0..h.rows()).map(|i| h.row_mask32(i)).collect();
    let chunk_bits = 14.min(n as u32);
    let chunk = 1u64 << chunk_bits;
    let chunks = (1u64 << n) / chunk;
    let bins = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = [0u64; 21];
            for mask in c * chunk..(c + 1) * chunk {
                let mask = mask as u32;
                if peel_mask(&rows, mask) != 0 {
                    local[mask.count_ones() as usize] += 1;
                }
            }
            local
        })
        .reduce(
            || [0u64; 21],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x += y;
                }
                a
            },
        );
    Ok(FailureProfile {
        counts: bins[..=n].iter().map(|&c| BigInt::from(c)).collect(),
    })
}

/// Mask-specialized peeling for matrices with at most 32 columns; returns
/// the residual mask.
fn peel_mask(rows: &[u32], mut erased: u32) -> u32 {
    'scan: loop {
        for &row in rows {
            let hit = row & erased;
            if hit.count_ones() == 1 {
                erased &= !hit;
                continue 'scan;
            }
        }
        return erased;
    }
}

/// Exact decoding failure probability when every column is erased
/// independently with probability `epsilon`:
///
/// ```text
/// P(fail) = sum_l count(l) epsilon^l (1 - epsilon)^(n-l).
/// ```
pub fn exact_failure_probability(profile: &FailureProfile, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let n = profile.n();
    let mut p = 0.0f64;
    for (l, count) in profile.counts().iter().enumerate() {
        let c = count.to_f64().expect("census counts fit in f64");
        p += c * epsilon.powi(l as i32) * (1.0 - epsilon).powi((n - l) as i32);
    }
    Ok(p)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::domain(format!(
            "erasure probability must lie in [0, 1], got {epsilon}"
        )));
    }
    Ok(())
}

/// Monte Carlo estimate of the decoding failure probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    /// Fraction of trials on which the decoder got stuck.
    pub estimate: f64,
    /// Binomial standard error `sqrt(p(1-p)/trials)`.
    pub std_error: f64,
    /// Number of failing trials.
    pub failures: u64,
    /// Number of trials simulated.
    pub trials: u64,
}

/// Estimates the failure probability by simulating `trials` random
/// erasure patterns (each column erased independently with probability
/// `epsilon`) and peeling each one.
///
/// Trials are partitioned into fixed-size batches, one counter-mode
/// random stream per batch, so the result depends only on `(seed,
/// epsilon, trials)` — not on the number of worker threads.  Requires
/// `trials >= 1`.
pub fn monte_carlo_failure(
    h: &BitMatrix,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    check_epsilon(epsilon)?;
    if trials == 0 {
        return Err(Error::domain("trial count must be at least 1"));
    }
    let n = h.cols();
    let rows: Vec<&[u64]> = (0..h.rows()).map(|i| h.row_words(i)).collect();
    let batches = trials.div_ceil(MONTE_CARLO_BATCH);
    let failures: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let batch_trials = MONTE_CARLO_BATCH.min(trials - b * MONTE_CARLO_BATCH);
            let mut erased = vec![0u64; words_for(n)];
            let mut failed = 0u64;
            for _ in 0..batch_trials {
                erased.fill(0);
                for j in 0..n {
                    if rng.random::<f64>() < epsilon {
                        erased[j / 64] |= 1u64 << (j % 64);
                    }
                }
                peel_words(&rows, &mut erased);
                if erased.iter().any(|&w| w != 0) {
                    failed += 1;
                }
            }
            failed
        })
        .sum();
    let estimate = failures as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(MonteCarloEstimate {
        estimate,
        std_error,
        failures,
        trials,
    })
}
