//! Stopping-set and codeword-weight enumerators.
//!
//! For a binary parity-check matrix `H` with `r` rows and `n` columns:
//!
//! * a column subset `S` is a *stopping set* if the submatrix of `H` on
//!   the columns in `S` has no row of weight exactly one;
//! * `S` *supports a codeword* if every row of that submatrix has even
//!   weight (equivalently, the indicator vector of `S` is in the kernel
//!   of `H` over GF(2)).
//!
//! `S_l` counts stopping sets of size `l` and `A_l` counts codeword
//! supports of size `l`; every codeword support is a stopping set, so
//! `A_l <= S_l` termwise.  The empty set is both, hence `S_0 = A_0 = 1`.
//!
//! Routes implemented here:
//!
//! * [`brute_force_stopping`] / [`brute_force_weight`]: direct subset
//!   enumeration, exact for any matrix with at most 31 columns;
//! * [`inclusion_exclusion_stopping`]: for each row subset `T`, count
//!   column subsets whose restriction to `T` is "bad" in a controlled way
//!   and alternate signs over `T`; exact for any matrix with at most 20
//!   rows, any number of columns;
//! * closed forms for the full-rank parity-check matrix of the binary
//!   Hamming code with parameter `m` ([`hamming_stopping_closed_form`],
//!   [`hamming_stopping_doublesum`], [`hamming_stopping_size3`],
//!   [`hamming_codewords_of_weight`]), plus two-sided bounds and exact
//!   rational ratios describing the large-`m` behaviour.
//!
//! All routes return exact big integers and are cross-checked against one
//! another in the test suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, exact_div, factorial, BTable, StirlingTables};
use crate::error::{Error, Result};
use crate::matrix::{normalize_index_set, BitMatrix};

/// Largest column count accepted by the brute-force subset enumeration.
pub const MAX_BRUTE_FORCE_COLS: usize = 31;

/// Largest row count accepted by the row-subset inclusion–exclusion route.
pub const MAX_INCLUSION_EXCLUSION_ROWS: usize = 20;

/// A size enumerator: coefficient `l` counts the column subsets of size
/// `l` with some property (stopping sets, or codeword supports).
///
/// The coefficient vector always has length `n + 1` where `n` is the
/// column count of the underlying matrix, and every coefficient is a
/// nonnegative exact integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumerator {
    coeffs: Vec<BigInt>,
}

/// Serialized form: `n` plus all coefficients as decimal strings, so that
/// arbitrarily large counts survive JSON readers that only have doubles.
#[derive(Serialize, Deserialize)]
struct EnumeratorWire {
    n: usize,
    coeffs: Vec<String>,
}

impl Enumerator {
    /// Wraps a coefficient vector; index `l` counts subsets of size `l`.
    /// The vector must be nonempty and nonnegative.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain(
                "enumerator needs at least the size-0 coefficient",
            ));
        }
        if let Some(c) = coeffs.iter().find(|c| c.is_negative()) {
            return Err(Error::domain(format!(
                "enumerator coefficients must be nonnegative, got {c}"
            )));
        }
        Ok(Enumerator { coeffs })
    }

    fn from_u64_counts(counts: &[u64]) -> Self {
        Enumerator {
            coeffs: counts.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Number of columns of the underlying matrix.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient for subsets of size `l`.  Panics if `l > n`.
    pub fn coeff(&self, l: usize) -> &BigInt {
        &self.coeffs[l]
    }

    /// All coefficients, index `l` = subset size.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Smallest `l >= 1` with a nonzero coefficient: the minimum stopping
    /// set size or minimum codeword weight.  `None` when only the empty
    /// set qualifies.
    pub fn min_positive_support(&self) -> Option<usize> {
        (1..self.coeffs.len()).find(|&l| !self.coeffs[l].is_zero())
    }

    /// Sum of all coefficients.  For a weight enumerator this is the
    /// number of codewords, `2^(n - rank(H))`.
    pub fn total(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Compact JSON: `{"n":7,"coeffs":["1","0",...]}`.  Deterministic
    /// byte-for-byte for a given enumerator.
    pub fn to_json_string(&self) -> String {
        let wire = EnumeratorWire {
            n: self.n(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        };
        serde_json::to_string(&wire).expect("enumerator serialization cannot fail")
    }

    /// Parses the JSON produced by [`Enumerator::to_json_string`].
    pub fn from_json_str(s: &str) -> Result<Self> {
        let wire: EnumeratorWire = serde_json::from_str(s)
            .map_err(|e| Error::format(e.line().max(1), format!("invalid enumerator JSON: {e}")))?;
        if wire.coeffs.len() != wire.n + 1 {
            return Err(Error::format(
                1,
                format!(
                    "enumerator JSON lists {} coefficients but n = {}",
                    wire.coeffs.len(),
                    wire.n
                ),
            ));
        }
        let mut coeffs = Vec::with_capacity(wire.coeffs.len());
        for c in &wire.coeffs {
            let value: BigInt = c.parse().map_err(|_| {
                Error::format(1, format!("coefficient {c:?} is not a decimal integer"))
            })?;
            coeffs.push(value);
        }
        Self::from_coeffs(coeffs).map_err(|e| match e {
            Error::Domain(msg) => Error::format(1, msg),
            other => other,
        })
    }

    /// CSV rows `l,count`, one per coefficient, with a trailing newline.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (l, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{l},{c}\n"));
        }
        out
    }
}

/// Runs the subset enumeration shared by the brute-force routes: counts
/// masks satisfying `keep`, binned by popcount.  Deterministic regardless
/// of worker count because per-range bins are combined by addition.
fn brute_force_counts(
    h: &BitMatrix,
    keep: impl Fn(&[u32], u32) -> bool + Sync,
) -> Result<Vec<u64>> {
    let n = h.cols();
    if n > MAX_BRUTE_FORCE_COLS {
        return Err(Error::resource(format!(
            "brute-force enumeration covers n <= {MAX_BRUTE_FORCE_COLS} columns, got n = {n}"
        )));
    }
    let rows: Vec<u32> = (0..h.rows()).map(|i| h.row_mask32(i)).collect();
    let chunk_bits = 16.min(n as u32);
    let chunk = 1u64 << chunk_bits;
    let chunks = (1u64 << n) / chunk;
    let bins = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = [0u64; 32];
            for mask in c * chunk..(c + 1) * chunk {
                let mask = mask as u32;
                if keep(&rows, mask) {
                    local[mask.count_ones() as usize] += 1;
                }
            }
            local
        })
        .reduce(
            || [0u64; 32],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x += y;
                }
                a
            },
        );
    Ok(bins[..=n].to_vec())
}

/// Stopping-set enumerator by direct enumeration of all `2^n` column
/// subsets.  Requires `n <= 31`.
pub fn brute_force_stopping(h: &BitMatrix) -> Result<Enumerator> {
    let counts = brute_force_counts(h, |rows, mask| {
        rows.iter().all(|&r| (r & mask).count_ones() != 1)
    })?;
    Ok(Enumerator::from_u64_counts(&counts))
}

/// Codeword-weight enumerator by direct enumeration of all `2^n` column
/// subsets.  Requires `n <= 31`.
pub fn brute_force_weight(h: &BitMatrix) -> Result<Enumerator> {
    let counts = brute_force_counts(h, |rows, mask| {
        rows.iter().all(|&r| (r & mask).count_ones() % 2 == 0)
    })?;
    Ok(Enumerator::from_u64_counts(&counts))
}

/// Per-row-subset statistics used by [`inclusion_exclusion_stopping`].
///
/// For a fixed 1-based row subset `T` of a matrix `H`:
///
/// * `zero_columns` is the number of columns of `H` whose restriction to
///   the rows in `T` is all-zero (all `n` columns when `T` is empty);
/// * `type_counts[p]` is the number of `p`-element column subsets whose
///   restriction to `T` has every row of weight exactly one and no
///   all-zero column.  For empty `T` this is `1` at `p = 0` and `0`
///   otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverStats {
    pub zero_columns: usize,
    pub type_counts: Vec<BigInt>,
}

/// Computes [`CoverStats`] for the row subset `t_set` (1-based), with
/// `type_counts` filled for `p = 0..=p_max`.  Requires `p_max <= n`.
///
/// Column subsets counted by `type_counts[p]` consist of columns whose
/// `T`-restrictions are nonzero and partition the rows of `T`; the count
/// is obtained by a subset-convolution over restriction patterns, then
/// divided by `p!` (orderings of a selection), which is exact because the
/// patterns in one selection are pairwise distinct.
pub fn cover_stats(h: &BitMatrix, t_set: &[usize], p_max: usize) -> Result<CoverStats> {
    let n = h.cols();
    if p_max > n {
        return Err(Error::domain(format!(
            "type-count limit p_max = {p_max} exceeds column count n = {n}"
        )));
    }
    let t_rows = normalize_index_set(t_set, h.rows(), "row")?;
    let t = t_rows.len();

    // Restriction pattern of every column: bit i is the entry in row
    // t_rows[i].
    let full: usize = (1usize << t) - 1;
    let mut pattern_counts = vec![0u64; 1 << t];
    for j in 0..n {
        let mut pattern = 0usize;
        for (i, &row) in t_rows.iter().enumerate() {
            if h.bit(row - 1, j) {
                pattern |= 1 << i;
            }
        }
        pattern_counts[pattern] += 1;
    }
    let zero_columns = pattern_counts[0] as usize;
    let present: Vec<(usize, u64)> = (1..=full)
        .filter(|&p| pattern_counts[p] > 0)
        .map(|p| (p, pattern_counts[p]))
        .collect();

    // ordered[mask] = number of ordered selections of p distinct columns
    // whose patterns are nonzero, pairwise disjoint, and union to `mask`.
    let p_hi = p_max.min(t);
    let mut type_counts = vec![BigInt::zero(); p_max + 1];
    let mut prev = vec![BigInt::zero(); 1 << t];
    prev[0] = BigInt::one();
    type_counts[0] = if t == 0 { BigInt::one() } else { BigInt::zero() };
    for p in 1..=p_hi {
        let mut cur = vec![BigInt::zero(); 1 << t];
        for mask in 0..=full {
            let mut acc = BigInt::zero();
            for &(pattern, count) in &present {
                if pattern & mask == pattern {
                    let rest = &prev[mask & !pattern];
                    if !rest.is_zero() {
                        acc += rest * count;
                    }
                }
            }
            cur[mask] = acc;
        }
        type_counts[p] = exact_div(&cur[full], &factorial(p));
        prev = cur;
    }
    Ok(CoverStats {
        zero_columns,
        type_counts,
    })
}

/// Stopping-set enumerator by inclusion–exclusion over row subsets.
///
/// For each row subset `T`, a column subset is "counted at `T`" when its
/// restriction to `T` splits into `p` columns forming a pattern partition
/// of `T` plus `l - p` columns that vanish on `T`; summing with sign
/// `(-1)^|T|` leaves exactly the subsets in which no row restricts to
/// weight one:
///
/// ```text
/// S_l = sum_T (-1)^|T| sum_p  type_counts_T[p] * C(zero_columns_T, l-p).
/// ```
///
/// Works for any column count but enumerates `2^r` row subsets, so it
/// requires `r <= 20`.
pub fn inclusion_exclusion_stopping(h: &BitMatrix) -> Result<Enumerator> {
    let r = h.rows();
    let n = h.cols();
    if r > MAX_INCLUSION_EXCLUSION_ROWS {
        return Err(Error::resource(format!(
            "row-subset inclusion-exclusion covers r <= {MAX_INCLUSION_EXCLUSION_ROWS} rows, got r = {r}"
        )));
    }
    let mut acc = vec![BigInt::zero(); n + 1];
    for t_mask in 0u32..(1u32 << r) {
        let t_set: Vec<usize> = (0..r).filter(|i| (t_mask >> i) & 1 == 1).map(|i| i + 1).collect();
        let t = t_set.len();
        let stats = cover_stats(h, &t_set, t.min(n))?;
        let z = stats.zero_columns;

        // C(z, j) for j = 0..=n.
        let mut binom_z = vec![BigInt::zero(); n + 1];
        binom_z[0] = BigInt::one();
        for j in 0..n.min(z) {
            binom_z[j + 1] = exact_div(&(&binom_z[j] * (z - j)), &BigInt::from(j + 1));
        }

        let negative = t % 2 == 1;
        for l in 0..=n {
            let mut inner = BigInt::zero();
            for (p, y) in stats.type_counts.iter().enumerate().take(l + 1) {
                if y.is_zero() {
                    continue;
                }
                inner += y * &binom_z[l - p];
            }
            if negative {
                acc[l] -= inner;
            } else {
                acc[l] += inner;
            }
        }
    }
    Ok(Enumerator::from_coeffs(acc)
        .expect("internal invariant violated: inclusion-exclusion produced a negative count"))
}

/// Validates Hamming closed-form parameters and returns `n = 2^m - 1`.
fn check_hamming_params(m: u32, l: usize) -> Result<u64> {
    if !(2..=62).contains(&m) {
        return Err(Error::domain(format!(
            "Hamming parameter m must satisfy 2 <= m <= 62, got {m}"
        )));
    }
    let n = (1u64 << m) - 1;
    if l as u64 > n {
        return Err(Error::domain(format!(
            "size l = {l} exceeds n = 2^{m} - 1 = {n}"
        )));
    }
    Ok(n)
}

/// `S_l` for the Hamming parity-check matrix with parameter `m`, by the
/// double sum over row-subset cardinality `t` and partition size `p`:
///
/// ```text
/// S_l = sum_{t=0}^{m} (-1)^t C(m,t)
///       sum_{p=0}^{l} S(t,p) 2^((m-t)p) C(2^(m-t) - 1, l-p),
/// ```
///
/// where `S(t,p)` is the Stirling number of the second kind.  This is the
/// row-subset inclusion–exclusion of [`inclusion_exclusion_stopping`]
/// collapsed by symmetry: for Hamming matrices the per-subset statistics
/// depend only on `t = |T|`.
pub fn hamming_stopping_doublesum(m: u32, l: usize) -> Result<BigInt> {
    check_hamming_params(m, l)?;
    let tables = StirlingTables::with_capacity(m as usize);
    let mut sum = BigInt::zero();
    for t in 0..=m as usize {
        let mut inner = BigInt::zero();
        for p in 0..=l.min(t) {
            let stirling = tables.second(t, p).expect("table covers t <= m");
            if stirling.is_zero() {
                continue;
            }
            let sub_n = (1u64 << (m as usize - t)) - 1;
            let tail = binomial(sub_n as usize, (l - p) as i64);
            if tail.is_zero() {
                continue;
            }
            inner += stirling * (tail << ((m as usize - t) * p));
        }
        let term = binomial(m as usize, t as i64) * inner;
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    assert!(
        !sum.is_negative(),
        "internal invariant violated: S_{l} came out negative for m = {m}"
    );
    Ok(sum)
}

/// `S_l` for the Hamming parity-check matrix with parameter `m`, by the
/// closed form in which `m` appears only as an exponent:
///
/// ```text
/// l! * S_l = sum_{q=0}^{l} sum_{v=q}^{min(2q,l)}
///            (-1)^v C(l,v) b(q,v) (2^(l-q) - (l-v))^m.
/// ```
///
/// Uses the caller's precomputed [`BTable`], which must have capacity at
/// least `l` (panics otherwise); the division by `l!` is asserted exact.
pub fn hamming_stopping_closed_form_with(m: u32, l: usize, btable: &BTable) -> Result<BigInt> {
    check_hamming_params(m, l)?;
    assert!(
        btable.capacity() >= l,
        "coefficient table capacity {} is too small for l = {l}",
        btable.capacity()
    );
    // C(l, v) for v = 0..=l, built once for the whole double sum.
    let mut binom_l = Vec::with_capacity(l + 1);
    binom_l.push(BigInt::one());
    for v in 0..l {
        binom_l.push(exact_div(&(&binom_l[v] * (l - v)), &BigInt::from(v + 1)));
    }
    let mut sum = BigInt::zero();
    for q in 0..=l {
        for v in q..=(2 * q).min(l) {
            let b = btable.get(q, v);
            if b.is_zero() {
                continue;
            }
            // 2^(l-q) > l - q >= l - v, so the base is always positive.
            let base = (BigInt::one() << (l - q)) - BigInt::from(l - v);
            debug_assert!(base.is_positive());
            let term = &binom_l[v] * b * base.pow(m);
            if v % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
    }
    let result = exact_div(&sum, &factorial(l));
    assert!(
        !result.is_negative(),
        "internal invariant violated: S_{l} came out negative for m = {m}"
    );
    Ok(result)
}

/// [`hamming_stopping_closed_form_with`] with a freshly built coefficient
/// table; convenient for one-off evaluations.
pub fn hamming_stopping_closed_form(m: u32, l: usize) -> Result<BigInt> {
    check_hamming_params(m, l)?;
    hamming_stopping_closed_form_with(m, l, &BTable::with_capacity(l))
}

/// `S_3` for the Hamming parity-check matrix with parameter `m`, by the
/// dedicated closed form `S_3 = (5^m - 3^(m+1) + 2^(m+1)) / 6`.
pub fn hamming_stopping_size3(m: u32) -> Result<BigInt> {
    // l = 3 <= n holds for every valid m, so only m needs checking.
    check_hamming_params(m, 0)?;
    let value = BigInt::from(5).pow(m) - BigInt::from(3).pow(m + 1) + (BigInt::one() << (m + 1));
    Ok(exact_div(&value, &BigInt::from(6)))
}

/// `A_l`, the number of weight-`l` codewords of the Hamming code with
/// parameter `m`:
///
/// ```text
/// A_l = ( C(n,l) + (-1)^ceil(l/2) * n * C((n-1)/2, floor(l/2)) ) / (n+1),
/// ```
///
/// with `n = 2^m - 1`.  The division is asserted exact.
pub fn hamming_codewords_of_weight(m: u32, l: usize) -> Result<BigInt> {
    let n = check_hamming_params(m, l)?;
    let half = ((n - 1) / 2) as usize;
    let correction = BigInt::from(n) * binomial(half, (l / 2) as i64);
    let value = if (l + 1) / 2 % 2 == 1 {
        binomial(n as usize, l as i64) - correction
    } else {
        binomial(n as usize, l as i64) + correction
    };
    let result = exact_div(&value, &BigInt::from(n + 1));
    assert!(
        !result.is_negative(),
        "internal invariant violated: A_{l} came out negative for m = {m}"
    );
    Ok(result)
}

/// A quantity with proven two-sided bounds: `lower <= middle <= upper`
/// whenever the implementation is correct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sandwich {
    pub lower: BigInt,
    pub middle: BigInt,
    pub upper: BigInt,
}

impl Sandwich {
    /// Whether the bounds hold.
    pub fn is_ordered(&self) -> bool {
        self.lower <= self.middle && self.middle <= self.upper
    }
}

/// Two-sided bounds for `l! * S_l` on the Hamming matrix with parameter
/// `m`:
///
/// ```text
/// (2^l - l)^m - (l + C(l,2)) 2^((l-1)m)
///     <= l! * S_l <= (2^l - l)^m.
/// ```
///
/// The middle value is computed exactly via
/// [`hamming_stopping_closed_form`].  Requires `2 <= l <= n`.
pub fn stopping_sandwich(m: u32, l: usize) -> Result<Sandwich> {
    check_hamming_params(m, l)?;
    if l < 2 {
        return Err(Error::domain(format!("sandwich bounds need l >= 2, got {l}")));
    }
    let upper = ((BigInt::one() << l) - BigInt::from(l)).pow(m);
    let slack = BigInt::from(l) + binomial(l, 2);
    let lower = &upper - slack * (BigInt::one() << ((l - 1) * m as usize));
    let middle = factorial(l) * hamming_stopping_closed_form(m, l)?;
    Ok(Sandwich {
        lower,
        middle,
        upper,
    })
}

/// Two-sided bounds for `l! * A_l` on the Hamming matrix with parameter
/// `m`:
///
/// ```text
/// 2^((l-1)m) - (l + C(l,2)) 2^((l-2)m)
///     <= l! * A_l <= 2^((l-1)m).
/// ```
///
/// Requires `2 <= l <= n`.
pub fn weight_sandwich(m: u32, l: usize) -> Result<Sandwich> {
    check_hamming_params(m, l)?;
    if l < 2 {
        return Err(Error::domain(format!("sandwich bounds need l >= 2, got {l}")));
    }
    let upper = BigInt::one() << ((l - 1) * m as usize);
    let slack = BigInt::from(l) + binomial(l, 2);
    let lower = &upper - slack * (BigInt::one() << ((l - 2) * m as usize));
    let middle = factorial(l) * hamming_codewords_of_weight(m, l)?;
    Ok(Sandwich {
        lower,
        middle,
        upper,
    })
}

/// Exact ratio `l! * S_l / (2^l - l)^m`, which tends to 1 as `m` grows
/// with `l` fixed.  Requires `l >= 2`.
pub fn stopping_asymptotic_ratio(m: u32, l: usize) -> Result<BigRational> {
    check_hamming_params(m, l)?;
    if l < 2 {
        return Err(Error::domain(format!("asymptotic ratio needs l >= 2, got {l}")));
    }
    let numerator = factorial(l) * hamming_stopping_closed_form(m, l)?;
    let denominator = ((BigInt::one() << l) - BigInt::from(l)).pow(m);
    Ok(BigRational::new(numerator, denominator))
}

/// Exact ratio `l! * A_l / 2^((l-1)m)`, which tends to 1 as `m` grows
/// with `l` fixed.  Requires `l >= 2`.
pub fn weight_asymptotic_ratio(m: u32, l: usize) -> Result<BigRational> {
    check_hamming_params(m, l)?;
    if l < 2 {
        return Err(Error::domain(format!("asymptotic ratio needs l >= 2, got {l}")));
    }
    let numerator = factorial(l) * hamming_codewords_of_weight(m, l)?;
    let denominator = BigInt::one() << ((l - 1) * m as usize);
    Ok(BigRational::new(numerator, denominator))
}
