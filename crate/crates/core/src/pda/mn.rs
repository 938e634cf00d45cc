use std::collections::HashMap;

use super::{Entry, Pda};
use crate::error::{invalid, Result};
use crate::math::subsets;

/// The shared-link PDA with `K` users and `μK = t`: rows are the `t`-subsets
/// `D` of `[K]` in lexicographic order, and cell `(D,k)` is a star when
/// `k ∈ D`, otherwise the lexicographic rank of `D ∪ {k}` among the
/// `(t+1)`-subsets.
///
/// ```
/// use macc::pda::{mn_pda, pda_stats};
///
/// let p = mn_pda(4, 2)?;
/// assert_eq!(p.to_text(), "* * 1 2\n* 1 * 3\n* 2 3 *\n1 * * 4\n2 * 4 *\n3 4 * *\n");
/// assert_eq!(pda_stats(&p)?.to_string(), "(4,6,3,4)");
/// # Ok::<(), macc::Error>(())
/// ```
pub fn mn_pda(k: u32, t: u32) -> Result<Pda<u32>> {
    if t > k || k == 0 {
        return invalid(format!("need 0 ≤ t ≤ K and K ≥ 1, got K={k}, t={t}"));
    }
    if k > crate::combinatorics::MAX_POINTS {
        return invalid(format!("K={k} exceeds the guard of 24 users"));
    }
    let rank: HashMap<Vec<u32>, u32> = subsets(k, t as usize + 1)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i as u32 + 1))
        .collect();
    let rows = subsets(k, t as usize)
        .into_iter()
        .map(|d| {
            (1..=k)
                .map(|user| {
                    if d.contains(&user) {
                        Entry::Star
                    } else {
                        let mut s = d.clone();
                        s.push(user);
                        s.sort_unstable();
                        Entry::Id(rank[&s])
                    }
                })
                .collect()
        })
        .collect();
    Pda::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::binom;
    use crate::pda::{pda_stats, verify_pda};

    #[test]
    fn endpoints() {
        let p = mn_pda(5, 0).unwrap();
        assert_eq!(p.to_text(), "1 2 3 4 5\n");
        let p = mn_pda(5, 5).unwrap();
        assert_eq!(p.to_text(), "* * * * *\n");
        assert!(verify_pda(&p).degenerate);
        assert!(mn_pda(3, 4).is_err());
    }

    #[test]
    fn stated_parameters() {
        for k in 2..=10u32 {
            for t in 0..=k {
                let p = mn_pda(k, t).unwrap();
                let r = verify_pda(&p);
                assert!(r.passed, "K={k} t={t}");
                let st = pda_stats(&p).unwrap();
                let (k64, t64) = (k as u64, t as u64);
                let z = if t == 0 { 0 } else { binom(k64 - 1, t64 - 1) };
                assert_eq!(st.f as u128, binom(k64, t64));
                assert_eq!(st.z as u128, z);
                assert_eq!(st.s as u128, binom(k64, t64 + 1));
                for cells in p.cells_by_id().values() {
                    assert_eq!(cells.len() as u32, t + 1);
                }
            }
        }
    }
}
