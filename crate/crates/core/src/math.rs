//! Exact arithmetic helpers shared by the formula evaluators.

use itertools::Itertools;
use num_rational::Ratio;

/// Exact rational used for loads and memory ratios.
pub type Rational = Ratio<i128>;

/// Serializes a rational as the string `p/q` (or `p` when integral).
pub fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn ser_rationals<S: serde::Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(|r| r.to_string()))
}

/// Binomial coefficient, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    num_integer::binomial(n as u128, k as u128)
}

/// Same as [`binom`] but as a signed value for formulas with subtraction.
pub fn binom_i(n: u64, k: u64) -> i128 {
    binom(n, k) as i128
}

pub fn pow(base: u64, exp: u64) -> u128 {
    (base as u128).pow(exp as u32)
}

pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub fn subsets(n: u32, k: usize) -> Vec<Vec<u32>> {
    (1..=n).combinations(k).collect()
}

/// Renders a subset the way the tables do: `{1,2}`.
pub fn braces(set: &[u32]) -> String {
    format!("{{{}}}", set.iter().join(","))
}

/// Concatenated digits, `124`; separated by `.` if any element exceeds 9.
pub fn compact(set: &[u32]) -> String {
    if set.iter().all(|&x| x < 10) {
        set.iter().join("")
    } else {
        set.iter().join(".")
    }
}

/// Decimal approximation with three significant digits.
pub fn sig3(r: &Rational) -> String {
    sig_digits(to_f64(r), 3)
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn sig_digits(x: f64, digits: i32) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Scientific notation with two significant digits, e.g. `9.2e10`.
pub fn sci2(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let mut mantissa = x / 10f64.powi(exp);
    let mut exp = exp;
    if (mantissa * 10.0).round() >= 100.0 {
        mantissa /= 10.0;
        exp += 1;
    }
    format!("{mantissa:.1}e{exp}")
}

/// log10 of C(n,k), for subpacketizations too large for any integer type.
pub fn log10_binom(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k)
        .map(|i| ((n - i) as f64).log10() - ((i + 1) as f64).log10())
        .sum()
}

/// Scientific rendering from a base-10 logarithm.
pub fn sci2_from_log10(l: f64) -> String {
    let exp = l.floor();
    let mantissa = 10f64.powf(l - exp);
    let rounded = (mantissa * 10.0).round() / 10.0;
    if rounded >= 10.0 {
        format!("1.0e{}", exp as i64 + 1)
    } else {
        format!("{rounded:.1}e{}", exp as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(7, 3), 35);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(0, 0), 1);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(sig3(&ratio(16, 3)), "5.33");
        assert_eq!(sig3(&ratio(61, 125)), "0.488");
        assert_eq!(sig3(&ratio(3, 1)), "3.00");
        assert_eq!(sci2(3.0 * 5f64.powi(15)), "9.2e10");
        assert_eq!(sci2(99_999.0), "1.0e5");
        assert_eq!(sci2_from_log10((3.0 * 5f64.powi(15)).log10()), "9.2e10");
    }

    #[test]
    fn subset_order() {
        assert_eq!(subsets(4, 2)[..3], [vec![1, 2], vec![1, 3], vec![1, 4]]);
        assert_eq!(subsets(3, 0), vec![Vec::<u32>::new()]);
    }
}
