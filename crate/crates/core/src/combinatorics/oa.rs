use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use super::MAX_OA_ROWS;
use crate::error::{invalid, Error, Result};
use crate::math::{pow, subsets};

/// An `OA_λ(m, q, s)`: `λ·q^s` rows over the alphabet `[q]`, with `m` columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrthogonalArray {
    rows: Vec<Vec<u32>>,
    alphabet: u32,
    strength: u32,
    index: u32,
}

impl OrthogonalArray {
    /// Wraps rows with claimed parameters. Shape and alphabet are checked;
    /// the orthogonality claim is left to [`verify_oa`].
    pub fn new(rows: Vec<Vec<u32>>, alphabet: u32, strength: u32, index: u32) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return invalid("an OA needs at least one row and one column");
        }
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return invalid("OA rows have different lengths");
        }
        if rows.iter().flatten().any(|&x| x == 0 || x > alphabet) {
            return invalid(format!("OA entries must lie in [1,{alphabet}]"));
        }
        if strength as usize > m {
            return invalid(format!("strength {strength} exceeds {m} columns"));
        }
        let expected = index as u128 * pow(alphabet as u64, strength as u64);
        if rows.len() as u128 != expected {
            return invalid(format!("{} rows, but λq^s = {expected}", rows.len()));
        }
        Ok(Self {
            rows,
            alphabet,
            strength,
            index,
        })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Entry `A(j,u)` with 1-based `j` and `u`.
    pub fn get(&self, j: usize, u: usize) -> u32 {
        self.rows[j - 1][u - 1]
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> u32 {
        self.rows[0].len() as u32
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn strength(&self) -> u32 {
        self.strength
    }

    pub fn index(&self) -> u32 {
        self.index
    }
}

impl fmt::Display for OrthogonalArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "OA_{}({},{},{}), {} rows",
            self.index,
            self.num_columns(),
            self.alphabet,
            self.strength,
            self.rows.len()
        )?;
        for r in &self.rows {
            writeln!(f, "{}", crate::math::compact(r))?;
        }
        Ok(())
    }
}

fn guard_rows(q: u32, s: u32) -> Result<()> {
    if pow(q as u64, s as u64) > MAX_OA_ROWS {
        return invalid(format!("q^s = {q}^{s} exceeds the guard 2^20"));
    }
    Ok(())
}

/// Every vector of `[q]^m` in lexicographic order.
pub fn trivial_oa(m: u32, q: u32) -> Result<OrthogonalArray> {
    if m == 0 || q < 2 {
        return invalid(format!("need m ≥ 1 and q ≥ 2, got m={m}, q={q}"));
    }
    guard_rows(q, m)?;
    let rows = (0..m).map(|_| 1..=q).multi_cartesian_product().collect();
    OrthogonalArray::new(rows, q, m, 1)
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Evaluations of all polynomials of degree `< s` over `GF(q)` at the points
/// `0, 1, …, m−1`. Rows follow the coefficient vectors in lexicographic order
/// (constant term first). For `s = m` the result is [`trivial_oa`].
pub fn linear_oa(m: u32, q: u32, s: u32) -> Result<OrthogonalArray> {
    if !is_prime(q) {
        return invalid(format!("q={q} is not prime"));
    }
    if s == 0 || s > m {
        return invalid(format!("need 1 ≤ s ≤ m, got s={s}, m={m}"));
    }
    if s == m {
        return trivial_oa(m, q);
    }
    if m > q {
        return Err(Error::Unsupported(format!(
            "linear OA needs m ≤ q when s < m (m={m}, q={q}); use trivial_oa or the catalog"
        )));
    }
    guard_rows(q, s)?;
    let rows = (0..s)
        .map(|_| 0..q)
        .multi_cartesian_product()
        .map(|coeffs| {
            (0..m)
                .map(|x| {
                    let mut acc = 0u64;
                    for &c in coeffs.iter().rev() {
                        acc = (acc * x as u64 + c as u64) % q as u64;
                    }
                    acc as u32 + 1
                })
                .collect()
        })
        .collect();
    OrthogonalArray::new(rows, q, s, 1)
}

/// Zero-sum array of strength `m−1`: the first `m−1` coordinates range over
/// `[q]^{m−1}` (first coordinate varying fastest) and the last makes the
/// 0-based coordinate sum vanish mod `q`. Works for any `q ≥ 2`.
pub fn parity_oa(m: u32, q: u32) -> Result<OrthogonalArray> {
    if m < 2 || q < 2 {
        return invalid(format!("need m ≥ 2 and q ≥ 2, got m={m}, q={q}"));
    }
    guard_rows(q, m - 1)?;
    let rows = (0..m - 1)
        .map(|_| 0..q)
        .multi_cartesian_product()
        .map(|mut free| {
            free.reverse();
            let sum: u32 = free.iter().sum();
            free.push((q - sum % q) % q);
            free.into_iter().map(|x| x + 1).collect()
        })
        .collect();
    OrthogonalArray::new(rows, q, m - 1, 1)
}

/// Outcome of [`verify_oa`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OaReport {
    pub passed: bool,
    pub row_count_matches: bool,
    /// Column set, tuple and its count for the first failing projection.
    pub first_violation: Option<(Vec<u32>, Vec<u32>, usize)>,
}

/// Checks every `s`-column projection for exactly `λ` copies of each tuple.
pub fn verify_oa(oa: &OrthogonalArray, s: u32, lambda: u32) -> OaReport {
    let q = oa.alphabet();
    let m = oa.num_columns();
    let row_count_matches = oa.num_rows() as u128 == lambda as u128 * pow(q as u64, s as u64);
    let mut report = OaReport {
        passed: false,
        row_count_matches,
        first_violation: None,
    };
    if s > m {
        return report;
    }
    for cols in subsets(m, s as usize) {
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for r in oa.rows() {
            let key = cols.iter().map(|&u| r[u as usize - 1]).collect();
            *counts.entry(key).or_default() += 1;
        }
        for tuple in (0..s).map(|_| 1..=q).multi_cartesian_product() {
            let c = counts.get(&tuple).copied().unwrap_or(0);
            if c != lambda as usize {
                report.first_violation = Some((cols, tuple, c));
                return report;
            }
        }
    }
    report.passed = row_count_matches;
    report
}
