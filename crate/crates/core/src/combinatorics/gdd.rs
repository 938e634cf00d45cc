use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::math::{binom, pow, ratio, subsets, Rational};

/// A point `(u, v)`: group `u ∈ [m]`, position `v ∈ [q]` inside the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub group: u32,
    pub value: u32,
}

impl Point {
    pub const fn new(group: u32, value: u32) -> Self {
        Self { group, value }
    }

    /// Flat index `(u−1)q + v`.
    pub fn flatten(self, q: u32) -> u32 {
        (self.group - 1) * q + self.value
    }

    pub fn unflatten(gamma: u32, q: u32) -> Self {
        Self::new((gamma - 1) / q + 1, (gamma - 1) % q + 1)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.group, self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GddTag {
    pub t: u32,
    pub lambda: u32,
}

/// `m` groups of `q` points with transversal blocks of a common size `L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupDivisibleDesign {
    num_groups: u32,
    group_size: u32,
    block_size: u32,
    blocks: Vec<Vec<Point>>,
    tag: Option<GddTag>,
}

impl GroupDivisibleDesign {
    /// Builds a GDD, sorting each block by group. Rejects blocks that meet a
    /// group twice.
    pub fn new(num_groups: u32, group_size: u32, blocks: Vec<Vec<Point>>) -> Result<Self> {
        if num_groups == 0 || group_size == 0 {
            return invalid("need m ≥ 1 and q ≥ 1");
        }
        if blocks.is_empty() {
            return invalid("a GDD needs at least one block");
        }
        let block_size = blocks[0].len() as u32;
        if block_size == 0 {
            return invalid("blocks must be non-empty");
        }
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, mut b) in blocks.into_iter().enumerate() {
            b.sort_unstable();
            if b.len() as u32 != block_size {
                return invalid(format!("block {} has size {}, expected {block_size}", i + 1, b.len()));
            }
            if b.iter().any(|p| p.group == 0 || p.group > num_groups || p.value == 0 || p.value > group_size) {
                return invalid(format!("block {} leaves the {num_groups}×{group_size} frame", i + 1));
            }
            if b.windows(2).any(|w| w[0].group == w[1].group) {
                return invalid(format!("block {} meets a group twice", i + 1));
            }
            sorted.push(b);
        }
        Ok(Self {
            num_groups,
            group_size,
            block_size,
            blocks: sorted,
            tag: None,
        })
    }

    pub fn with_tag(mut self, t: u32, lambda: u32) -> Self {
        self.tag = Some(GddTag { t, lambda });
        self
    }

    pub fn num_groups(&self) -> u32 {
        self.num_groups
    }

    pub fn group_size(&self) -> u32 {
        self.group_size
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    pub fn tag(&self) -> Option<GddTag> {
        self.tag
    }

    /// Group indices `ψ(B)` of block `k`.
    pub fn psi(&self, k: usize) -> Vec<u32> {
        self.blocks[k].iter().map(|p| p.group).collect()
    }

    /// Value vector `φ(B)` of block `k`.
    pub fn phi(&self, k: usize) -> Vec<u32> {
        self.blocks[k].iter().map(|p| p.value).collect()
    }

    /// Blocks as subsets of `[mq]` via `γ = (u−1)q + v`.
    pub fn flattened_blocks(&self) -> Vec<Vec<u32>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|p| p.flatten(self.group_size)).collect())
            .collect()
    }

    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        c.blocks.sort();
        c
    }
}

impl fmt::Display for GroupDivisibleDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            Some(tag) => writeln!(
                f,
                "{}-({},{},{},{}) GDD, {} blocks",
                tag.t,
                self.num_groups,
                self.group_size,
                self.block_size,
                tag.lambda,
                self.blocks.len()
            )?,
            None => writeln!(f, "GDD with {} groups of size {}, {} blocks", self.num_groups, self.group_size, self.blocks.len())?,
        }
        for b in &self.blocks {
            writeln!(f, "{}", b.iter().join(""))?;
        }
        Ok(())
    }
}

/// Outcome of [`verify_gdd`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GddReport {
    pub passed: bool,
    pub transversal: bool,
    /// `λ·C(m,t)·q^t / C(L,t)`.
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub expected_blocks: Rational,
    pub block_count_matches: bool,
    /// First transversal `t`-set (groups lexicographic, then values) with wrong coverage.
    pub first_violation: Option<(Vec<Point>, usize)>,
}

/// Checks transversality, coverage of every transversal `t`-set and the block count.
pub fn verify_gdd(gdd: &GroupDivisibleDesign, t: u32, lambda: u32) -> GddReport {
    let (m, q, l) = (gdd.num_groups(), gdd.group_size(), gdd.block_size());
    let transversal = gdd.blocks().iter().all(|b| b.windows(2).all(|w| w[0].group < w[1].group));
    let mut report = GddReport {
        passed: false,
        transversal,
        expected_blocks: ratio(0, 1),
        block_count_matches: false,
        first_violation: None,
    };
    if t == 0 || t > l || l > m {
        return report;
    }
    report.expected_blocks = ratio(
        lambda as i128 * (binom(m as u64, t as u64) * pow(q as u64, t as u64)) as i128,
        binom(l as u64, t as u64) as i128,
    );
    report.block_count_matches = report.expected_blocks == ratio(gdd.num_blocks() as i128, 1);

    let mut coverage: HashMap<Vec<Point>, usize> = HashMap::new();
    for b in gdd.blocks() {
        for sub in b.iter().copied().combinations(t as usize) {
            *coverage.entry(sub).or_default() += 1;
        }
    }
    'outer: for groups in subsets(m, t as usize) {
        for values in (0..t).map(|_| 1..=q).multi_cartesian_product() {
            let set: Vec<Point> = groups.iter().zip(&values).map(|(&u, &v)| Point::new(u, v)).collect();
            let c = coverage.get(&set).copied().unwrap_or(0);
            if c != lambda as usize {
                report.first_violation = Some((set, c));
                break 'outer;
            }
        }
    }
    report.passed = transversal && report.first_violation.is_none() && report.block_count_matches;
    report
}

/// The `t-(m,q,t,1)` GDD whose blocks are all transversal `t`-sets, in
/// lexicographic order of their point lists.
pub fn transversal_gdd(m: u32, q: u32, t: u32) -> Result<GroupDivisibleDesign> {
    if t == 0 || t > m || q == 0 {
        return invalid(format!("need 1 ≤ t ≤ m and q ≥ 1, got m={m}, q={q}, t={t}"));
    }
    let count = binom(m as u64, t as u64) * pow(q as u64, t as u64);
    if count > super::MAX_OA_ROWS {
        return invalid(format!("transversal GDD would have {count} blocks"));
    }
    let mut blocks = Vec::new();
    for groups in subsets(m, t as usize) {
        for values in (0..t).map(|_| 1..=q).multi_cartesian_product() {
            blocks.push(groups.iter().zip(&values).map(|(&u, &v)| Point::new(u, v)).collect::<Vec<_>>());
        }
    }
    blocks.sort();
    Ok(GroupDivisibleDesign::new(m, q, blocks)?.with_tag(t, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(u: u32, v: u32) -> Point {
        Point::new(u, v)
    }

    #[test]
    fn transversal_blocks_in_order() {
        let g = transversal_gdd(3, 2, 2).unwrap();
        assert_eq!(g.num_blocks(), 12);
        assert_eq!(g.blocks()[0], [p(1, 1), p(2, 1)]);
        assert_eq!(g.blocks()[1], [p(1, 1), p(2, 2)]);
        assert_eq!(g.blocks()[2], [p(1, 1), p(3, 1)]);
        assert_eq!(g.blocks()[4], [p(1, 2), p(2, 1)]);
        assert_eq!(g.blocks()[11], [p(2, 2), p(3, 2)]);
        assert!(verify_gdd(&g, 2, 1).passed);
        assert_eq!(transversal_gdd(2, 1, 2).unwrap().blocks(), [vec![p(1, 1), p(2, 1)]]);
        assert_eq!(transversal_gdd(4, 2, 2).unwrap().num_blocks(), 24);
    }

    #[test]
    fn rejects_non_transversal_blocks() {
        assert!(GroupDivisibleDesign::new(2, 2, vec![vec![p(1, 1), p(1, 2)]]).is_err());
    }

    #[test]
    fn flattening() {
        assert_eq!(p(2, 1).flatten(2), 3);
        assert_eq!(Point::unflatten(6, 2), p(3, 2));
        assert_eq!(Point::unflatten(1, 3), p(1, 1));
    }
}
