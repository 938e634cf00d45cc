use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::MAX_POINTS;
use crate::error::{invalid, Result};
use crate::math::{binom, ratio, subsets, Rational};

/// Claimed parameters of a `t-(Γ,L,λ)` design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignTag {
    pub t: u32,
    pub lambda: u32,
}

/// A family of `L`-subsets (blocks) of the point set `[Γ]`.
///
/// Blocks are stored sorted; the block list keeps the order it was given in,
/// since that order labels the users of a caching scheme.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Design {
    num_points: u32,
    block_size: u32,
    blocks: Vec<Vec<u32>>,
    tag: Option<DesignTag>,
}

impl Design {
    /// Builds a design from raw blocks, sorting each block.
    pub fn new(num_points: u32, blocks: Vec<Vec<u32>>) -> Result<Self> {
        if num_points == 0 {
            return invalid("a design needs at least one point");
        }
        if blocks.is_empty() {
            return invalid("a design needs at least one block");
        }
        let block_size = blocks[0].len() as u32;
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, b) in blocks.into_iter().enumerate() {
            let mut b = b;
            b.sort_unstable();
            if b.len() as u32 != block_size {
                return invalid(format!("block {} has size {}, expected {block_size}", i + 1, b.len()));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return invalid(format!("block {} repeats a point", i + 1));
            }
            if b.iter().any(|&x| x == 0 || x > num_points) {
                return invalid(format!("block {} leaves [1,{num_points}]", i + 1));
            }
            sorted.push(b);
        }
        if block_size == 0 {
            return invalid("blocks must be non-empty");
        }
        Ok(Self {
            num_points,
            block_size,
            blocks: sorted,
            tag: None,
        })
    }

    /// Attaches a `t-(Γ,L,λ)` claim. The claim is checked by
    /// [`verify_t_design`], not here.
    pub fn with_tag(mut self, t: u32, lambda: u32) -> Self {
        self.tag = Some(DesignTag { t, lambda });
        self
    }

    pub fn without_tag(mut self) -> Self {
        self.tag = None;
        self
    }

    pub fn num_points(&self) -> u32 {
        self.num_points
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &[u32] {
        &self.blocks[k]
    }

    pub fn tag(&self) -> Option<DesignTag> {
        self.tag
    }

    /// The same design with its block list sorted lexicographically.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        c.blocks.sort();
        c
    }

    /// Applies a permutation of the points (`perm[x-1]` is the image of `x`).
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (1..=self.num_points).collect::<Vec<_>>() {
            return invalid("relabeling must be a permutation of the points");
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| perm[x as usize - 1]).collect())
            .collect();
        let mut d = Design::new(self.num_points, blocks)?;
        d.tag = self.tag;
        Ok(d)
    }

    /// How often each point occurs, indexed by point - 1.
    pub fn point_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_points as usize];
        for b in &self.blocks {
            for &x in b {
                counts[x as usize - 1] += 1;
            }
        }
        counts
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(tag) = self.tag {
            writeln!(
                f,
                "{}-({},{},{}) design, {} blocks",
                tag.t,
                self.num_points,
                self.block_size,
                tag.lambda,
                self.blocks.len()
            )?;
        } else {
            writeln!(f, "design on {} points, {} blocks of size {}", self.num_points, self.blocks.len(), self.block_size)?;
        }
        for b in &self.blocks {
            writeln!(f, "{}", crate::math::compact(b))?;
        }
        Ok(())
    }
}

/// All `L`-subsets of `[Γ]`, an `L-(Γ,L,1)` design.
pub fn complete_design(num_points: u32, block_size: u32) -> Result<Design> {
    if block_size == 0 || block_size > num_points {
        return invalid(format!("need 1 ≤ L ≤ Γ, got L={block_size}, Γ={num_points}"));
    }
    if num_points > MAX_POINTS {
        return invalid(format!("Γ={num_points} exceeds the guard Γ ≤ {MAX_POINTS}"));
    }
    let blocks = subsets(num_points, block_size as usize);
    Ok(Design::new(num_points, blocks)?.with_tag(block_size, 1))
}

/// Outcome of [`verify_t_design`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TDesignReport {
    pub passed: bool,
    pub t: u32,
    pub lambda: u32,
    /// Occurrences per point, when all points occur equally often.
    pub replication: Option<usize>,
    /// `λ_{t'}` for `t' = 0..=t`, from the design parameters.
    #[serde(serialize_with = "crate::math::ser_rationals")]
    pub lambda_by_strength: Vec<Rational>,
    /// First `t`-subset (lexicographic) whose coverage differs from λ.
    pub first_violation: Option<(Vec<u32>, usize)>,
}

/// `λ_{t'} = λ·C(Γ−t', t−t') / C(L−t', t−t')`.
pub fn lambda_at(gamma: u32, l: u32, t: u32, lambda: u32, tp: u32) -> Rational {
    let num = lambda as i128 * binom((gamma - tp) as u64, (t - tp) as u64) as i128;
    let den = binom((l - tp) as u64, (t - tp) as u64) as i128;
    ratio(num, den)
}

/// Exhaustively counts the blocks through every `t`-subset of the points.
pub fn verify_t_design(design: &Design, t: u32, lambda: u32) -> TDesignReport {
    let l = design.block_size();
    let gamma = design.num_points();
    let mut report = TDesignReport {
        passed: false,
        t,
        lambda,
        replication: None,
        lambda_by_strength: Vec::new(),
        first_violation: None,
    };
    let counts = design.point_counts();
    if counts.iter().all_equal() {
        report.replication = counts.first().copied();
    }
    if t == 0 || t > l {
        return report;
    }
    report.lambda_by_strength = (0..=t).map(|tp| lambda_at(gamma, l, t, lambda, tp)).collect();

    let mut coverage: HashMap<Vec<u32>, usize> = HashMap::new();
    for b in design.blocks() {
        for sub in b.iter().copied().combinations(t as usize) {
            *coverage.entry(sub).or_default() += 1;
        }
    }
    for sub in subsets(gamma, t as usize) {
        let c = coverage.get(&sub).copied().unwrap_or(0);
        if c != lambda as usize {
            report.first_violation = Some((sub, c));
            return report;
        }
    }
    report.passed = true;
    report
}

/// Necessary divisibility conditions: `C(L−i,t−i) | λ·C(Γ−i,t−i)` for
/// `0 ≤ i < t`. A `false` result rules the design out; `true` does not
/// promise existence.
pub fn check_divisibility(t: u32, l: u32, lambda: u32, gamma: u32) -> bool {
    if t > l || l > gamma {
        return false;
    }
    (0..t).all(|i| {
        let num = lambda as u128 * binom((gamma - i) as u64, (t - i) as u64);
        let den = binom((l - i) as u64, (t - i) as u64);
        num % den == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_designs() {
        let d = complete_design(4, 2).unwrap();
        assert_eq!(
            d.blocks(),
            [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]].map(|b| b.to_vec())
        );
        assert_eq!(complete_design(7, 3).unwrap().num_blocks(), 35);
        assert_eq!(complete_design(5, 5).unwrap().blocks(), [vec![1, 2, 3, 4, 5]]);
        assert!(complete_design(3, 4).is_err());
        assert!(verify_t_design(&complete_design(5, 2).unwrap(), 2, 1).passed);
    }

    #[test]
    fn divisibility() {
        assert!(check_divisibility(2, 3, 1, 7));
        assert!(!check_divisibility(2, 3, 1, 8));
        assert!(check_divisibility(1, 3, 1, 9));
        assert!(check_divisibility(2, 3, 1, 9));
        assert!(check_divisibility(2, 4, 2, 7));
    }

    #[test]
    fn block_validation() {
        assert!(Design::new(3, vec![vec![1, 2], vec![3]]).is_err());
        assert!(Design::new(3, vec![vec![1, 1]]).is_err());
        assert!(Design::new(3, vec![vec![1, 4]]).is_err());
        let d = Design::new(3, vec![vec![3, 1]]).unwrap();
        assert_eq!(d.block(0), [1, 3]);
    }

    #[test]
    fn lambda_by_strength_recovers_block_count() {
        let d = complete_design(6, 3).unwrap();
        let r = verify_t_design(&d, 2, 4);
        assert_eq!(r.lambda_by_strength[0], ratio(20, 1));
        assert_eq!(r.lambda_by_strength[1], ratio(10, 1));
    }
}
