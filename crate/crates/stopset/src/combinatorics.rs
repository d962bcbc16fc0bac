//! Exact integer combinatorics: binomials, factorials, Stirling numbers of
//! both kinds, and the integer coefficient family `b(q, v)` that appears in
//! the closed-form stopping-set counts for Hamming codes.
//!
//! Everything here is exact `BigInt` arithmetic.  Divisions that are
//! mathematically guaranteed to be exact are checked with an assertion:
//! a nonzero remainder can only mean an implementation bug, so it panics
//! rather than returning an error.
//!
//! The `b(q, v)` family is deliberately computed by three independent
//! routes — an alternating sum over Stirling numbers of the first kind, a
//! two-term recursion, and an explicit sum of reciprocals over constrained
//! index tuples — so each implementation cross-checks the others in tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Divides exactly, panicking if the division leaves a remainder.
/// Use only where exactness is a mathematical invariant.
pub(crate) fn exact_div(numerator: &BigInt, denominator: &BigInt) -> BigInt {
    let (quot, rem) = numerator.div_rem(denominator);
    assert!(
        rem.is_zero(),
        "internal invariant violated: {numerator} is not divisible by {denominator}"
    );
    quot
}

/// Binomial coefficient `C(n, k)` as a `BigInt`; zero when `k < 0` or
/// `k > n`.
pub fn binomial(n: usize, k: i64) -> BigInt {
    if k < 0 || k as u128 > n as u128 {
        return BigInt::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut result = BigInt::one();
    for i in 0..k {
        result *= n - i;
        result = exact_div(&result, &BigInt::from(i + 1));
    }
    result
}

/// `n!` as a `BigInt`.
pub fn factorial(n: usize) -> BigInt {
    let mut result = BigInt::one();
    for i in 2..=n {
        result *= i;
    }
    result
}

/// Precomputed triangles of Stirling numbers of the first kind (signed,
/// `s(n, k)`) and the second kind (`S(n, k)`), for all `0 <= k <= n <=
/// max_n`.
///
/// First kind: `s(n, k)` are the coefficients of the falling factorial,
/// `x(x-1)...(x-n+1) = sum_k s(n, k) x^k`, built by
/// `s(n+1, k) = s(n, k-1) - n*s(n, k)`.
///
/// Second kind: `S(n, k)` counts partitions of an `n`-set into `k`
/// nonempty blocks, built by `S(n+1, k) = k*S(n, k) + S(n, k-1)`.
pub struct StirlingTables {
    max_n: usize,
    first: Vec<Vec<BigInt>>,
    second: Vec<Vec<BigInt>>,
}

impl StirlingTables {
    /// Builds both triangles up to `n = max_n`.
    pub fn with_capacity(max_n: usize) -> Self {
        let mut first: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        let mut second: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        first.push(vec![BigInt::one()]);
        second.push(vec![BigInt::one()]);
        for n in 0..max_n {
            let mut frow = Vec::with_capacity(n + 2);
            let mut srow = Vec::with_capacity(n + 2);
            for k in 0..=n + 1 {
                let prev = |row: &Vec<BigInt>, k: usize| {
                    row.get(k).cloned().unwrap_or_else(BigInt::zero)
                };
                let f_km1 = if k == 0 { BigInt::zero() } else { prev(&first[n], k - 1) };
                let s_km1 = if k == 0 { BigInt::zero() } else { prev(&second[n], k - 1) };
                frow.push(f_km1 - BigInt::from(n) * prev(&first[n], k));
                srow.push(BigInt::from(k) * prev(&second[n], k) + s_km1);
            }
            first.push(frow);
            second.push(srow);
        }
        StirlingTables {
            max_n,
            first,
            second,
        }
    }

    /// Largest `n` the tables cover.
    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// Signed Stirling number of the first kind `s(n, k)`; zero for
    /// `k > n` and for `k = 0` with `n >= 1`.  Errors if `n` exceeds the
    /// table capacity.
    pub fn first(&self, n: usize, k: usize) -> Result<BigInt> {
        self.lookup(&self.first, n, k)
    }

    /// Stirling number of the second kind `S(n, k)`; zero for `k > n` and
    /// for `k = 0` with `n >= 1`.  Errors if `n` exceeds the table
    /// capacity.
    pub fn second(&self, n: usize, k: usize) -> Result<BigInt> {
        self.lookup(&self.second, n, k)
    }

    fn lookup(&self, table: &[Vec<BigInt>], n: usize, k: usize) -> Result<BigInt> {
        if n > self.max_n {
            return Err(Error::resource(format!(
                "Stirling table covers n <= {}, got n = {n}",
                self.max_n
            )));
        }
        Ok(table[n].get(k).cloned().unwrap_or_else(BigInt::zero))
    }
}

/// Stirling number of the second kind by the explicit alternating sum
/// `S(n, k) = (1/k!) * sum_{i=0}^{k} (-1)^i C(k, i) (k-i)^n`.
///
/// Independent of the recurrence in [`StirlingTables`]; the division by
/// `k!` is asserted exact.
pub fn stirling_second_explicit(n: usize, k: usize) -> BigInt {
    let mut sum = BigInt::zero();
    for i in 0..=k {
        let term = binomial(k, i as i64) * BigInt::from(k - i).pow(n as u32);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    exact_div(&sum, &factorial(k))
}

/// Rectangular table of the integer coefficients `b(q, v)` for
/// `0 <= q, v <= capacity`, filled by the recursion
///
/// ```text
/// b(q, v) = v*b(q-1, v-1) - (v-1)*b(q-1, v-2)      for 1 <= q < v,
/// ```
///
/// with boundary values `b(q, v) = 0` for `q > v` or `0 = q < v`, and
/// `b(q, q) = q!`.
pub struct BTable {
    capacity: usize,
    values: Vec<Vec<BigInt>>,
}

impl BTable {
    /// Fills the table for all `q, v` up to `capacity` inclusive.
    pub fn with_capacity(capacity: usize) -> Self {
        let mut values: Vec<Vec<BigInt>> = Vec::with_capacity(capacity + 1);
        for q in 0..=capacity {
            let mut row = Vec::with_capacity(capacity + 1);
            for v in 0..=capacity {
                let value = if q > v || (q == 0 && v > 0) {
                    BigInt::zero()
                } else if q == v {
                    factorial(q)
                } else {
                    // 1 <= q < v, so the q-1 row is complete and v >= 2.
                    let prev: &Vec<BigInt> = &values[q - 1];
                    BigInt::from(v) * &prev[v - 1] - BigInt::from(v - 1) * &prev[v - 2]
                };
                row.push(value);
            }
            values.push(row);
        }
        BTable { capacity, values }
    }

    /// Largest index the table covers.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// `b(q, v)`.  Panics if either index exceeds the capacity.
    pub fn get(&self, q: usize, v: usize) -> &BigInt {
        &self.values[q][v]
    }
}

/// `b(q, v)` from its defining alternating sum over Stirling numbers of
/// the first kind:
///
/// ```text
/// b(q, v) = sum_{p=0}^{v} (-1)^p C(v, p) s(p+1, p-q+1),
/// ```
///
/// where terms with `p - q + 1 <= 0` vanish.
pub fn b_definition(q: usize, v: usize) -> BigInt {
    let tables = StirlingTables::with_capacity(v + 1);
    let mut sum = BigInt::zero();
    for p in q..=v {
        let term = binomial(v, p as i64)
            * tables
                .first(p + 1, p - q + 1)
                .expect("table sized to cover p+1 <= v+1");
        if p % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// `b(q, v)` via the recursion in [`BTable`].
pub fn b_recursive(q: usize, v: usize) -> BigInt {
    BTable::with_capacity(q.max(v)).get(q, v).clone()
}

/// `b(q, v)` from the explicit reciprocal sum
///
/// ```text
/// b(q, v) = (-1)^(v-q) v! * sum over 0 = k_0 < k_1 < ... < k_(v-q) <
///           k_(v-q+1) = v + 2, consecutive gaps >= 2, of
///           1 / (k_1 * k_2 * ... * k_(v-q)),
/// ```
///
/// evaluated in exact rational arithmetic.  The sum of reciprocals times
/// `v!` is asserted to be an integer.  Returns zero when `v < q` (the
/// other routes' boundary case) and when `v > 2q` (no tuple satisfies the
/// gap constraints).
pub fn b_explicit(q: usize, v: usize) -> BigInt {
    if v < q {
        return BigInt::zero();
    }
    let len = v - q;
    let mut sum = BigRational::zero();
    let mut chosen: Vec<usize> = Vec::with_capacity(len);
    walk_gap_tuples(len, 0, v, &mut chosen, &mut sum);
    let signed = if len % 2 == 0 { sum } else { -sum };
    let value = signed * BigRational::from_integer(factorial(v));
    assert!(
        value.is_integer(),
        "internal invariant violated: b({q}, {v}) evaluated to non-integer {value}"
    );
    value.to_integer()
}

/// Extends a partial tuple `k_1 < ... < k_i` (all gaps >= 2, values <= v)
/// by `remaining` more entries, accumulating `prod 1/k_i` for every
/// completed tuple.  The final gap to `v + 2` is enforced by the `<= v`
/// bound on each entry.
fn walk_gap_tuples(
    remaining: usize,
    prev: usize,
    v: usize,
    chosen: &mut Vec<usize>,
    sum: &mut BigRational,
) {
    if remaining == 0 {
        let product = chosen
            .iter()
            .fold(BigInt::one(), |acc, &k| acc * BigInt::from(k));
        *sum += BigRational::new(BigInt::one(), product);
        return;
    }
    // Leave room for the remaining entries, each at least 2 above its
    // predecessor, with the last one at most v.
    let hi = v.saturating_sub(2 * (remaining - 1));
    let lo = prev + 2;
    let mut k = lo;
    while k <= hi {
        chosen.push(k);
        walk_gap_tuples(remaining - 1, k, v, chosen, sum);
        chosen.pop();
        k += 1;
    }
}
