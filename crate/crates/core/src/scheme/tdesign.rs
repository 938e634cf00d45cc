//! Schemes whose users are the blocks of a `t-(Γ,L,λ)` design.
//!
//! Each file is split into `C(Γ,μΓ)` subfiles `W_{n,D}`, one per
//! `μΓ`-subset `D` of the cache-nodes, and each subfile into `C(L,t)` packets
//! `W^T_{n,D}`. Node `γ` stores every packet with `γ ∈ D`. User `B` reads the
//! nodes in `B`, so it holds packet `(D,T)` iff `B ∩ D ≠ ∅`. A missing packet
//! `(D,T)` of user `B` travels in the message named `D ∪ B(T)`, where `B(T)`
//! picks the elements of `B` at the positions in `T`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::MaccScheme;
use crate::combinatorics::{verify_t_design, Design};
use crate::error::{invalid, Error, Result};
use crate::grid::StarGrid;
use crate::math::{binom, binom_i, braces, compact, ratio, subsets, Rational};
use crate::pda::{Entry, MessageId, Pda, TextTable};

/// Parameters of the t-design scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SchemeParams {
    pub gamma: u32,
    pub l: u32,
    pub t: u32,
    pub lambda: u32,
    pub mu_gamma: u32,
}

impl SchemeParams {
    pub fn new(gamma: u32, l: u32, t: u32, lambda: u32, mu_gamma: u32) -> Result<Self> {
        if t == 0 || t > l || l > gamma {
            return invalid(format!("need 1 ≤ t ≤ L ≤ Γ, got t={t}, L={l}, Γ={gamma}"));
        }
        if lambda == 0 {
            return invalid("λ must be positive");
        }
        if gamma > crate::combinatorics::MAX_POINTS {
            return invalid(format!("Γ={gamma} exceeds the guard Γ ≤ 24"));
        }
        if mu_gamma > gamma - l {
            return invalid(format!("μΓ={mu_gamma} violates μΓ ≤ Γ−L={}", gamma - l));
        }
        let num = lambda as u128 * binom(gamma as u64, t as u64);
        if num % binom(l as u64, t as u64) != 0 {
            return invalid(format!("C(L,t) does not divide λ·C(Γ,t) for t={t}, L={l}, Γ={gamma}, λ={lambda}"));
        }
        Ok(Self {
            gamma,
            l,
            t,
            lambda,
            mu_gamma,
        })
    }

    /// Reads `t` and `λ` from the design's tag.
    pub fn from_design(design: &Design, mu_gamma: u32) -> Result<Self> {
        let tag = design
            .tag()
            .ok_or_else(|| Error::InvalidInput("the design carries no t-(Γ,L,λ) tag".into()))?;
        Self::new(design.num_points(), design.block_size(), tag.t, tag.lambda, mu_gamma)
    }

    fn c(n: u32, k: u32) -> i128 {
        binom_i(n as u64, k as u64)
    }

    /// Users `K = λ·C(Γ,t)/C(L,t)`.
    pub fn k(&self) -> u128 {
        (self.lambda as i128 * Self::c(self.gamma, self.t) / Self::c(self.l, self.t)) as u128
    }

    /// Subpacketization `F = C(Γ,μΓ)·C(L,t)`.
    pub fn f(&self) -> u128 {
        (Self::c(self.gamma, self.mu_gamma) * Self::c(self.l, self.t)) as u128
    }

    /// Stars per user column, `(C(Γ,μΓ) − C(Γ−L,μΓ))·C(L,t)`.
    pub fn z(&self) -> u128 {
        let (g, l, m) = (self.gamma, self.l, self.mu_gamma);
        ((Self::c(g, m) - Self::c(g - l, m)) * Self::c(l, self.t)) as u128
    }

    /// Node memory ratio `M/N = μΓ/Γ`.
    pub fn memory_ratio(&self) -> Rational {
        ratio(self.mu_gamma as i128, self.gamma as i128)
    }

    /// Fraction of each file a user can read, `Z/F`.
    pub fn user_memory_ratio(&self) -> Rational {
        ratio(self.z() as i128, self.f() as i128)
    }

    /// Upper bound on the number of messages: `λ·C(Γ,t+μΓ) − K·C(L,t+μΓ)`,
    /// and `K·C(L,t)` when nothing is cached.
    pub fn delivery_bound(&self) -> u128 {
        if self.mu_gamma == 0 {
            return self.k() * binom(self.l as u64, self.t as u64);
        }
        let top = self.t + self.mu_gamma;
        (self.lambda as i128 * Self::c(self.gamma, top) - self.k() as i128 * Self::c(self.l, top)) as u128
    }
}

/// `S′ = Σ_{i=1}^{μΓ−1} C(L,t+i)·C(Γ−L,μΓ−i)`: the `(t+μΓ)`-subsets `S` with
/// `t+1 ≤ |S ∩ B| < t+μΓ` for a fixed block `B`.
pub fn redundancy_count(params: &SchemeParams) -> u128 {
    let p = params;
    (1..p.mu_gamma)
        .map(|i| binom(p.l as u64, (p.t + i) as u64) * binom((p.gamma - p.l) as u64, (p.mu_gamma - i) as u64))
        .sum()
}

/// Load after the MDS reduction:
/// `[λ·C(Γ,t+μΓ) − λ·S′ − K·C(L,t+μΓ)] / (C(L,t)·C(Γ,μΓ))`.
///
/// At `μΓ = 0` nothing is cached and the load is `K`.
pub fn theorem1_load(params: &SchemeParams) -> Rational {
    if params.mu_gamma == 0 {
        return ratio(params.k() as i128, 1);
    }
    let reduced = params.delivery_bound() as i128 - params.lambda as i128 * redundancy_count(params) as i128;
    ratio(reduced, params.f() as i128)
}

/// Shared-link tradeoff: `M/N = 1 − C(Γ−L,μΓ)/C(Γ,μΓ)` and the load
/// `[λ·C(Γ,t+μΓ) − K·C(L,t+μΓ)] / (C(L,t)·C(Γ,μΓ))`, i.e. the user memory and
/// bound load of the multiaccess scheme seen as a `K`-user shared-link scheme.
pub fn corollary1_shared_link(params: &SchemeParams) -> (Rational, Rational) {
    let memory = ratio(1, 1)
        - ratio(
            binom_i((params.gamma - params.l) as u64, params.mu_gamma as u64),
            binom_i(params.gamma as u64, params.mu_gamma as u64),
        );
    if params.mu_gamma == 0 {
        return (memory, ratio(params.k() as i128, 1));
    }
    (memory, ratio(params.delivery_bound() as i128, params.f() as i128))
}

/// Message name `D ∪ B(T)`, with an occurrence counter when `λ > 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubsetLabel {
    pub set: Vec<u32>,
    pub occurrence: Option<u32>,
}

impl fmt::Display for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.occurrence {
            Some(n) => write!(f, "{},{n}", compact(&self.set)),
            None => f.write_str(&compact(&self.set)),
        }
    }
}

impl MessageId for SubsetLabel {}

/// Row label `(D, T)`: cached node subset and packet positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RowLabel {
    pub d: Vec<u32>,
    pub t: Vec<u32>,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", braces(&self.d), braces(&self.t))
    }
}

/// The three arrays of the t-design scheme.
#[derive(Debug, Clone)]
pub struct CachingScheme {
    params: SchemeParams,
    design: Design,
    rows: Vec<RowLabel>,
    node_placement: StarGrid,
    user_retrieve: StarGrid,
    labelled: Pda<SubsetLabel>,
    delivery: Pda<u32>,
    labels: Vec<SubsetLabel>,
}

/// Rows `(D,T)`: `T` over `C([L],t)` in lexicographic order, then `D` over `C([Γ],μΓ)`.
fn row_labels(p: &SchemeParams) -> Vec<RowLabel> {
    let ds = subsets(p.gamma, p.mu_gamma as usize);
    subsets(p.l, p.t as usize)
        .into_iter()
        .flat_map(|t| ds.iter().map(move |d| RowLabel { d: d.clone(), t: t.clone() }))
        .collect()
}

fn disjoint(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// `C((D,T),γ) = *` iff `γ ∈ D`.
pub fn build_node_placement(params: &SchemeParams) -> StarGrid {
    let rows = row_labels(params);
    StarGrid::from_fn(rows.len(), params.gamma as usize, |j, g| rows[j].d.contains(&(g as u32 + 1)))
}

/// `U((D,T),B) = *` iff `B ∩ D ≠ ∅`.
pub fn build_user_retrieve(design: &Design, mu_gamma: u32) -> Result<StarGrid> {
    let params = SchemeParams::from_design(design, mu_gamma)?;
    let rows = row_labels(&params);
    Ok(StarGrid::from_fn(rows.len(), design.num_blocks(), |j, k| {
        !disjoint(&rows[j].d, design.block(k))
    }))
}

/// The user-delivery array with structured message names.
///
/// For `λ = 1` cell `((D,T),B)` with `D ∩ B = ∅` carries `D ∪ B(T)`. For
/// `λ > 1` it carries `(D ∪ B(T), n)` where `n` counts earlier cells with the
/// same pair `(D, B(T))`, scanning each column top to bottom and the columns
/// left to right.
pub fn build_user_delivery(design: &Design, mu_gamma: u32) -> Result<Pda<SubsetLabel>> {
    let params = SchemeParams::from_design(design, mu_gamma)?;
    let report = verify_t_design(design, params.t, params.lambda);
    if !report.passed {
        let (sub, count) = report.first_violation.unwrap_or_default();
        return Err(Error::InconsistentDesign(format!(
            "{} lies in {count} blocks, the tag claims {}",
            braces(&sub),
            params.lambda
        )));
    }
    let rows = row_labels(&params);
    let f = rows.len();
    let k = design.num_blocks();
    let mut cells = vec![Entry::Star; f * k];
    let mut counters: HashMap<(Vec<u32>, Vec<u32>), u32> = HashMap::new();
    for (col, block) in design.blocks().iter().enumerate() {
        for (j, row) in rows.iter().enumerate() {
            if !disjoint(&row.d, block) {
                continue;
            }
            let bt: Vec<u32> = row.t.iter().map(|&h| block[h as usize - 1]).collect();
            let mut set: Vec<u32> = row.d.iter().chain(&bt).copied().collect();
            set.sort_unstable();
            let occurrence = (params.lambda > 1).then(|| {
                let n = counters.entry((row.d.clone(), bt)).or_default();
                *n += 1;
                *n
            });
            cells[j * k + col] = Entry::Id(SubsetLabel { set, occurrence });
        }
    }
    Pda::new(cells.chunks(k).map(<[_]>::to_vec).collect())
}

impl CachingScheme {
    /// Builds `C`, `U` and `Q` for a tagged design and cache-node subset size `μΓ`.
    ///
    /// ```
    /// use macc::combinatorics::catalog_design;
    /// use macc::scheme::{theorem1_load, CachingScheme};
    ///
    /// let fano = catalog_design("fano-7-3-1")?;
    /// let scheme = CachingScheme::build(&fano, 1)?;
    /// assert_eq!(scheme.stats().to_string(), "(7,21,9,28)");
    /// assert_eq!(theorem1_load(scheme.params()).to_string(), "4/3");
    /// # Ok::<(), macc::Error>(())
    /// ```
    pub fn build(design: &Design, mu_gamma: u32) -> Result<Self> {
        let params = SchemeParams::from_design(design, mu_gamma)?;
        let labelled = build_user_delivery(design, mu_gamma)?;
        let (delivery, labels) = labelled.canonicalize();
        Ok(Self {
            params,
            design: design.clone(),
            rows: row_labels(&params),
            node_placement: build_node_placement(&params),
            user_retrieve: build_user_retrieve(design, mu_gamma)?,
            labelled,
            delivery,
            labels,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn row_labels(&self) -> &[RowLabel] {
        &self.rows
    }

    /// `Q` with message names `D ∪ B(T)`.
    pub fn labelled_delivery(&self) -> &Pda<SubsetLabel> {
        &self.labelled
    }

    /// Name of canonical message id `s`.
    pub fn label(&self, s: u32) -> &SubsetLabel {
        &self.labels[s as usize - 1]
    }

    pub fn stats(&self) -> crate::pda::PdaStats {
        crate::pda::pda_stats(&self.delivery).expect("user-delivery arrays have uniform stars")
    }

    /// Counted `S`, the closed-form bound, and whether the bound is strict.
    pub fn delivery_count(&self) -> DeliveryCount {
        let counted = self.delivery.num_ids() as u128;
        let bound = self.params.delivery_bound();
        DeliveryCount {
            counted,
            bound,
            below_bound: counted < bound,
        }
    }

    fn header(&self) -> (String, Vec<String>) {
        ("D,T".into(), self.design.blocks().iter().map(|b| format!("U{}", compact(b))).collect())
    }

    /// `Q` in the table layout (`*` for stars, names for messages).
    pub fn render_delivery(&self) -> TextTable {
        let (corner, columns) = self.header();
        TextTable {
            corner,
            columns,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(j, r)| {
                    let cells = self.labelled.row(j).iter().map(|c| c.id().map_or("*".into(), |l| l.to_string()));
                    (r.to_string(), cells.collect())
                })
                .collect(),
        }
    }

    /// `U` in the table layout (`*` and `.`).
    pub fn render_retrieve(&self) -> TextTable {
        let (corner, columns) = self.header();
        self.grid_table(corner, columns, &self.user_retrieve)
    }

    /// `C` in the table layout.
    pub fn render_placement(&self) -> TextTable {
        let columns = (1..=self.params.gamma).map(|g| format!("C{g}")).collect();
        self.grid_table("D,T".into(), columns, &self.node_placement)
    }

    fn grid_table(&self, corner: String, columns: Vec<String>, grid: &StarGrid) -> TextTable {
        TextTable {
            corner,
            columns,
            rows: self.rows.iter().map(|r| r.to_string()).zip(grid.row_strings()).collect(),
        }
    }
}

/// Counted number of messages against the closed-form bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeliveryCount {
    pub counted: u128,
    pub bound: u128,
    pub below_bound: bool,
}

impl MaccScheme for CachingScheme {
    fn node_placement(&self) -> &StarGrid {
        &self.node_placement
    }

    fn user_retrieve(&self) -> &StarGrid {
        &self.user_retrieve
    }

    fn delivery(&self) -> &Pda<u32> {
        &self.delivery
    }

    fn user_nodes(&self, user: usize) -> Vec<usize> {
        self.design.block(user).iter().map(|&g| g as usize - 1).collect()
    }

    fn mds_redundancy(&self) -> usize {
        (self.params.lambda as u128 * redundancy_count(&self.params)) as usize
    }

    fn claimed_load(&self) -> Option<Rational> {
        Some(ratio(self.delivery.num_ids() as i128, self.delivery.num_rows() as i128))
    }
}

/// Ids of the messages user `user` (0-based block index) can rebuild from
/// what it retrieves: every cell carrying the id lies in a row where the
/// user's column is a star.
pub fn known_messages(scheme: &CachingScheme, user: usize) -> BTreeSet<u32> {
    let q = &scheme.delivery;
    q.cells_by_id()
        .into_iter()
        .filter(|(_, cells)| cells.iter().all(|&(j, _)| q.is_star(j, user)))
        .map(|(&s, _)| s)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{catalog_design, complete_design};
    use crate::pda::verify_pda;

    #[test]
    fn params_guard_mu_gamma() {
        let err = SchemeParams::new(7, 3, 2, 1, 5).unwrap_err();
        assert!(err.to_string().contains("Γ−L=4"));
        assert!(SchemeParams::new(8, 3, 2, 1, 1).is_err());
    }

    #[test]
    fn fano_counts() {
        let p = SchemeParams::new(7, 3, 2, 1, 1).unwrap();
        assert_eq!((p.k(), p.f(), p.z(), p.delivery_bound()), (7, 21, 9, 28));
        assert_eq!(theorem1_load(&p), ratio(4, 3));
        assert_eq!(corollary1_shared_link(&p), (ratio(3, 7), ratio(4, 3)));
        assert_eq!(redundancy_count(&p), 0);
    }

    #[test]
    fn biplane_counts() {
        let p = SchemeParams::new(7, 4, 2, 2, 1).unwrap();
        assert_eq!((p.k(), p.f(), p.z(), p.delivery_bound()), (7, 42, 24, 42));
        assert_eq!(theorem1_load(&p), ratio(1, 1));
        assert_eq!(corollary1_shared_link(&p), (ratio(4, 7), ratio(1, 1)));
    }

    #[test]
    fn affine_redundancy() {
        let p = SchemeParams::new(9, 3, 2, 1, 2).unwrap();
        assert_eq!(redundancy_count(&p), 6);
        assert_eq!(p.delivery_bound(), 126);
        assert_eq!(theorem1_load(&p), ratio(120, 108));
    }

    #[test]
    fn corollary1_closed_form() {
        // C(Γ−μΓ,t)/(C(t+μΓ,t)C(L,t)) − C(Γ,t)C(L,t+μΓ)/(C(Γ,μΓ)C(L,t)²) for λ = 1.
        for (g, l, t) in [(7u32, 3u32, 2u32), (9, 3, 2), (15, 3, 2), (8, 4, 3)] {
            for mu in 1..=g - l {
                let p = SchemeParams::new(g, l, t, 1, mu).unwrap();
                let c = |n: u32, k: u32| binom_i(n as u64, k as u64);
                let closed = ratio(c(g - mu, t), c(t + mu, t) * c(l, t))
                    - ratio(c(g, t) * c(l, t + mu), c(g, mu) * c(l, t) * c(l, t));
                assert_eq!(corollary1_shared_link(&p).1, closed, "Γ={g} L={l} t={t} μΓ={mu}");
            }
        }
    }

    #[test]
    fn uncached_endpoint() {
        let fano = catalog_design("fano-7-3-1").unwrap();
        let s = CachingScheme::build(&fano, 0).unwrap();
        assert_eq!(s.stats().to_string(), "(7,3,0,21)");
        assert_eq!(theorem1_load(s.params()), ratio(7, 1));
        assert!(build_node_placement(s.params()).column_star_counts().iter().all(|&c| c == 0));
    }

    #[test]
    fn fano_scheme_arrays() {
        let fano = catalog_design("fano-7-3-1").unwrap();
        let s = CachingScheme::build(&fano, 1).unwrap();
        assert!(verify_pda(s.delivery()).passed);
        assert!(s.node_placement().column_star_counts().iter().all(|&c| c == 3));
        assert!(s.node_placement().row_star_counts().iter().all(|&c| c == 1));
        assert!(s.user_retrieve().column_star_counts().iter().all(|&c| c == 9));
        assert_eq!(s.label(1).to_string(), "123");
        for user in 0..7 {
            assert!(known_messages(&s, user).is_empty());
        }
        assert!(!s.delivery_count().below_bound);
    }

    #[test]
    fn untagged_and_inconsistent_designs() {
        let d = catalog_design("gdd-dual-example").unwrap();
        assert!(CachingScheme::build(&d, 1).is_err());
        let bad = complete_design(7, 3).unwrap().with_tag(2, 1);
        assert!(matches!(CachingScheme::build(&bad, 1), Err(Error::InconsistentDesign(_))));
    }
}
