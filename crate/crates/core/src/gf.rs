//! Arithmetic in GF(2^16) with the primitive polynomial
//! `x^16 + x^12 + x^3 + x + 1`, plus the Cauchy matrices and linear solver
//! used by MDS-coded delivery.

use std::sync::OnceLock;

/// Reduction polynomial, including the `x^16` term.
pub const POLY: u32 = 0x1100B;
/// Number of field elements.
pub const ORDER: usize = 1 << 16;

struct Tables {
    exp: Vec<u16>,
    log: Vec<u16>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut exp = vec![0u16; 2 * ORDER];
        let mut log = vec![0u16; ORDER];
        let mut x: u32 = 1;
        for (i, e) in exp.iter_mut().take(ORDER - 1).enumerate() {
            *e = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & 0x10000 != 0 {
                x ^= POLY;
            }
        }
        for i in ORDER - 1..2 * ORDER {
            exp[i] = exp[i - (ORDER - 1)];
        }
        Tables { exp, log }
    })
}

pub fn mul(a: u16, b: u16) -> u16 {
    if a == 0 || b == 0 {
        return 0;
    }
    let t = tables();
    t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
}

/// Multiplicative inverse; panics on zero.
pub fn inv(a: u16) -> u16 {
    assert!(a != 0, "zero has no inverse");
    let t = tables();
    t.exp[(ORDER - 1) - t.log[a as usize] as usize]
}

/// `dst ^= c · src`, word by word.
pub fn mul_add(dst: &mut [u16], c: u16, src: &[u16]) {
    if c == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d ^= mul(c, s);
    }
}

/// `rows × cols` Cauchy matrix `1/(x_i + y_j)` with `x_i = i`, `y_j = rows + j`.
/// Every square submatrix is invertible. Needs `rows + cols ≤ 2^16`.
pub fn cauchy(rows: usize, cols: usize) -> Vec<Vec<u16>> {
    assert!(rows + cols <= ORDER, "Cauchy matrix needs rows + cols ≤ 2^16");
    (0..rows)
        .map(|i| (0..cols).map(|j| inv(i as u16 ^ (rows + j) as u16)).collect())
        .collect()
}

/// Solves `A·X = B` for a square `A` over GF(2^16), where each row of `B` is
/// a vector of words. Returns `None` if `A` is singular.
pub fn solve(mut a: Vec<Vec<u16>>, mut b: Vec<Vec<u16>>) -> Option<Vec<Vec<u16>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = inv(a[col][col]);
        for x in a[col].iter_mut() {
            *x = mul(*x, p);
        }
        for x in b[col].iter_mut() {
            *x = mul(*x, p);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let c = a[r][col];
                let (pivot_a, pivot_b) = (a[col].clone(), b[col].clone());
                mul_add(&mut a[r], c, &pivot_a);
                mul_add(&mut b[r], c, &pivot_b);
            }
        }
    }
    Some(b)
}

pub fn bytes_to_words(bytes: &[u8]) -> Vec<u16> {
    bytes.chunks(2).map(|c| u16::from_le_bytes([c[0], *c.get(1).unwrap_or(&0)])).collect()
}

pub fn words_to_bytes(words: &[u16], len: usize) -> Vec<u8> {
    let mut out: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    out.truncate(len);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Shift-and-add multiplication, independent of the tables.
    fn slow_mul(a: u16, b: u16) -> u16 {
        let (mut a, mut b, mut acc) = (a as u32, b as u32, 0u32);
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & 0x10000 != 0 {
                a ^= POLY;
            }
        }
        acc as u16
    }

    #[test]
    fn tables_match_shift_and_add() {
        for (a, b) in [(1, 1), (2, 0x8000), (0x1234, 0xabcd), (0xffff, 0xffff), (3, 7)] {
            assert_eq!(mul(a, b), slow_mul(a, b));
        }
        for a in (1..=u16::MAX).step_by(97) {
            assert_eq!(mul(a, inv(a)), 1);
            assert_eq!(mul(a, 0x5a5a), slow_mul(a, 0x5a5a));
        }
    }

    #[test]
    fn generator_has_full_order() {
        let t = tables();
        let mut seen = vec![false; ORDER];
        for &e in &t.exp[..ORDER - 1] {
            assert!(!seen[e as usize]);
            seen[e as usize] = true;
        }
        assert!(!seen[0]);
    }

    #[test]
    fn cauchy_submatrices_solve() {
        let g = cauchy(4, 6);
        let cols = [1usize, 3, 4, 5];
        let a: Vec<Vec<u16>> = g.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        let x: Vec<Vec<u16>> = (0..4).map(|i| vec![i as u16 * 31 + 7, 1000 + i as u16]).collect();
        let b: Vec<Vec<u16>> = a
            .iter()
            .map(|row| {
                let mut acc = vec![0u16; 2];
                for (c, xi) in row.iter().zip(&x) {
                    mul_add(&mut acc, *c, xi);
                }
                acc
            })
            .collect();
        assert_eq!(solve(a, b).unwrap(), x);
    }

    #[test]
    fn word_round_trip() {
        let bytes = [1u8, 2, 3, 4, 5];
        assert_eq!(words_to_bytes(&bytes_to_words(&bytes), 5), bytes);
    }
}
