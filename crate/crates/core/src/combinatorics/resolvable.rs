use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::math::{compact, subsets};

/// A design on `[v]` whose blocks split into parallel classes, each class a
/// partition of `[v]` into `q = v/k` blocks of size `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolvableDesign {
    num_points: u32,
    block_size: u32,
    classes: Vec<Vec<Vec<u32>>>,
}

impl ResolvableDesign {
    pub fn new(num_points: u32, classes: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        if num_points == 0 || classes.is_empty() || classes[0].is_empty() {
            return invalid("a resolvable design needs points and at least one non-empty class");
        }
        let block_size = classes[0][0].len() as u32;
        let mut sorted = Vec::with_capacity(classes.len());
        for (u, class) in classes.into_iter().enumerate() {
            let mut seen = vec![false; num_points as usize];
            let mut blocks = Vec::with_capacity(class.len());
            for mut b in class {
                b.sort_unstable();
                if b.len() as u32 != block_size {
                    return invalid(format!("class {} has a block of size {}, expected {block_size}", u + 1, b.len()));
                }
                for &x in &b {
                    if x == 0 || x > num_points || std::mem::replace(&mut seen[x as usize - 1], true) {
                        return invalid(format!("class {} is not a partition of [{num_points}]", u + 1));
                    }
                }
                blocks.push(b);
            }
            if seen.iter().any(|s| !s) {
                return invalid(format!("class {} does not cover [{num_points}]", u + 1));
            }
            sorted.push(blocks);
        }
        Ok(Self {
            num_points,
            block_size,
            classes: sorted,
        })
    }

    pub fn num_points(&self) -> u32 {
        self.num_points
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    /// Blocks per class, `q = v/k`.
    pub fn blocks_per_class(&self) -> u32 {
        self.num_points / self.block_size
    }

    pub fn num_classes(&self) -> u32 {
        self.classes.len() as u32
    }

    pub fn classes(&self) -> &[Vec<Vec<u32>>] {
        &self.classes
    }

    /// Block `A_{u,v}` with 1-based class and position.
    pub fn block(&self, u: u32, v: u32) -> &[u32] {
        &self.classes[u as usize - 1][v as usize - 1]
    }

    /// The common size of all `t`-wise cross intersections, if there is one.
    pub fn cross_index(&self, t: u32) -> Option<usize> {
        let q = self.blocks_per_class();
        let mut common = None;
        for classes in subsets(self.num_classes(), t as usize) {
            for choice in (0..t).map(|_| 1..=q).multi_cartesian_product() {
                let size = (1..=self.num_points)
                    .filter(|x| classes.iter().zip(&choice).all(|(&u, &v)| self.block(u, v).contains(x)))
                    .count();
                match common {
                    None => common = Some(size),
                    Some(c) if c != size => return None,
                    _ => {}
                }
            }
        }
        common
    }

    /// The design with classes sorted and blocks sorted inside each class.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        for class in &mut c.classes {
            class.sort();
        }
        c.classes.sort();
        c
    }
}

impl fmt::Display for ResolvableDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "resolvable design on {} points, {} classes of {} blocks",
            self.num_points,
            self.num_classes(),
            self.blocks_per_class()
        )?;
        for class in &self.classes {
            writeln!(f, "{}", class.iter().map(|b| compact(b)).join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    pub passed: bool,
    /// `(class, block)` choices and their intersection size for the first failure.
    pub first_violation: Option<(Vec<(u32, u32)>, usize)>,
}

/// Checks that any `t` blocks from `t` distinct classes meet in exactly `lambda_t` points.
pub fn verify_cross(rd: &ResolvableDesign, t: u32, lambda_t: usize) -> CrossReport {
    let q = rd.blocks_per_class();
    if t == 0 || t > rd.num_classes() {
        return CrossReport {
            passed: false,
            first_violation: None,
        };
    }
    for classes in subsets(rd.num_classes(), t as usize) {
        for choice in (0..t).map(|_| 1..=q).multi_cartesian_product() {
            let size = (1..=rd.num_points())
                .filter(|x| classes.iter().zip(&choice).all(|(&u, &v)| rd.block(u, v).contains(x)))
                .count();
            if size != lambda_t {
                return CrossReport {
                    passed: false,
                    first_violation: Some((classes.iter().copied().zip(choice).collect(), size)),
                };
            }
        }
    }
    CrossReport {
        passed: true,
        first_violation: None,
    }
}
