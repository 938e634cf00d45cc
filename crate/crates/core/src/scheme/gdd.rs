//! Schemes whose users are the blocks of a `t`-GDD, with packets placed by an
//! orthogonal array.
//!
//! Cache-node `(u,v)` sits in group `u`. With an `OA(m,q,s)` the file is cut
//! into `q^s` subfiles, one per OA row `j`, and node `(u,v)` stores subfile
//! `j` iff `A(j,u) = v`, so every node stores a `1/q` fraction. User `B`
//! reaches the nodes of its block; it misses subfile `j` exactly when the OA
//! row disagrees with the block's values `φ(B)` on every group `ψ(B)`, i.e.
//! when their Hamming distance is `L`.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use super::MaccScheme;
use crate::combinatorics::{verify_gdd, GroupDivisibleDesign, OrthogonalArray, Point};
use crate::error::{invalid, Error, Result};
use crate::grid::StarGrid;
use crate::math::{binom, braces, compact, pow, ratio, subsets, Rational};
use crate::pda::{Entry, MessageId, Pda, TextTable};

/// Parameters of the GDD scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GddSchemeParams {
    pub m: u32,
    pub q: u32,
    pub l: u32,
    pub t: u32,
    pub s: u32,
}

impl GddSchemeParams {
    pub fn new(m: u32, q: u32, l: u32, t: u32, s: u32) -> Result<Self> {
        if !(1 <= t && t <= l && l <= s && s <= m) {
            return invalid(format!("need 1 ≤ t ≤ L ≤ s ≤ m, got t={t}, L={l}, s={s}, m={m}"));
        }
        if q < 2 {
            return invalid(format!("need q ≥ 2, got q={q}"));
        }
        let users = binom(m as u64, t as u64) * pow(q as u64, t as u64);
        if users % binom(l as u64, t as u64) != 0 {
            return invalid(format!("C(L,t) does not divide C(m,t)·q^t for m={m}, q={q}, L={l}, t={t}"));
        }
        Ok(Self { m, q, l, t, s })
    }

    /// Cache-nodes `Γ = mq`.
    pub fn gamma(&self) -> u32 {
        self.m * self.q
    }

    /// Users `K = C(m,t)·q^t / C(L,t)`.
    pub fn k(&self) -> u128 {
        binom(self.m as u64, self.t as u64) * pow(self.q as u64, self.t as u64) / self.c_lt()
    }

    /// Subpacketization `F = q^s·C(L,t)`.
    pub fn f(&self) -> u128 {
        pow(self.q as u64, self.s as u64) * self.c_lt()
    }

    /// Stars per user column, `(q^s − (q−1)^L·q^{s−L})·C(L,t)`.
    pub fn z(&self) -> u128 {
        let (q, l, s) = (self.q as u64, self.l as u64, self.s as u64);
        (pow(q, s) - pow(q - 1, l) * pow(q, s - l)) * self.c_lt()
    }

    /// Upper bound `(q−1)^t·q^m` on the number of messages.
    pub fn delivery_bound(&self) -> u128 {
        pow(self.q as u64 - 1, self.t as u64) * pow(self.q as u64, self.m as u64)
    }

    /// Node memory ratio `1/q`.
    pub fn node_memory(&self) -> Rational {
        ratio(1, self.q as i128)
    }

    /// Fraction of each file a user can read, `1 − (q−1)^L/q^L`.
    pub fn coverage(&self) -> Rational {
        let (q, l) = (self.q as u64, self.l as u64);
        ratio(1, 1) - ratio(pow(q - 1, l) as i128, pow(q, l) as i128)
    }

    fn c_lt(&self) -> u128 {
        binom(self.l as u64, self.t as u64)
    }
}

/// Memory ratios and load of the GDD scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem2Point {
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub node_memory: Rational,
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub coverage: Rational,
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub load: Rational,
}

/// `(1/q, 1 − (q−1)^L/q^L, q^{m−s}(q−1)^t / C(L,t))`.
pub fn theorem2_load(params: &GddSchemeParams) -> Theorem2Point {
    let p = params;
    let num = pow(p.q as u64, (p.m - p.s) as u64) * pow(p.q as u64 - 1, p.t as u64);
    Theorem2Point {
        node_memory: p.node_memory(),
        coverage: p.coverage(),
        load: ratio(num as i128, p.c_lt() as i128),
    }
}

/// Exact `S` for the listed parameter families, otherwise the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SCount {
    /// `L = t`, `s = m−1`: `S = (q−1)^t·q^{m−1}`.
    ParityFamily(u128),
    /// `L = t`, `s + t = m`, `s > t`: `S = (q^t−1)·q^{m−t}`.
    ComplementFamily(u128),
    /// Any other case: `S ≤ (q−1)^t·q^m`.
    Bound(u128),
}

impl SCount {
    pub fn value(self) -> u128 {
        match self {
            SCount::ParityFamily(s) | SCount::ComplementFamily(s) | SCount::Bound(s) => s,
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, SCount::Bound(_))
    }
}

/// Shared-link view of the GDD scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corollary2 {
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub memory: Rational,
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub load: Rational,
    pub s: SCount,
}

/// `M/N = 1 − (q−1)^L/q^L` with the exact load `S/F` for the two listed
/// families and the bound `q^{m−s}(q−1)^t/C(L,t)` otherwise.
pub fn corollary2_shared_link(params: &GddSchemeParams) -> Corollary2 {
    let p = params;
    let (q, m, t) = (p.q as u64, p.m as u64, p.t as u64);
    let s = if p.l == p.t && p.s + 1 == p.m {
        SCount::ParityFamily(pow(q - 1, t) * pow(q, m - 1))
    } else if p.l == p.t && p.s + p.t == p.m && p.s > p.t {
        SCount::ComplementFamily((pow(q, t) - 1) * pow(q, m - t))
    } else {
        SCount::Bound(p.delivery_bound())
    };
    let load = if s.is_exact() {
        ratio(s.value() as i128, p.f() as i128)
    } else {
        theorem2_load(p).load
    };
    Corollary2 {
        memory: p.coverage(),
        load,
        s,
    }
}

/// Loads of the cross-resolvable scheme and of the GDD scheme at `L = t`,
/// `s = m−1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MrComparison {
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub r_mr: Rational,
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub r_th2: Rational,
    /// `r_th2 / r_mr = 2^t / C(m,t)`.
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub ratio: Rational,
    /// `t ≤ m/2`, the range where the comparison is meant to apply.
    pub in_range: bool,
}

/// `R_MR = C(m,t)·((q−1)/2)^t` against `(q−1)^t`.
pub fn mr_comparison(m: u32, q: u32, t: u32) -> Result<MrComparison> {
    if t == 0 || t > m || q < 2 {
        return invalid(format!("need 1 ≤ t ≤ m and q ≥ 2, got m={m}, q={q}, t={t}"));
    }
    let qm1 = pow(q as u64 - 1, t as u64) as i128;
    let r_mr = ratio(binom(m as u64, t as u64) as i128 * qm1, pow(2, t as u64) as i128);
    let r_th2 = ratio(qm1, 1);
    Ok(MrComparison {
        ratio: r_th2 / r_mr,
        r_mr,
        r_th2,
        in_range: 2 * t <= m,
    })
}

/// Message name `(e, n_e)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VectorLabel {
    pub e: Vec<u32>,
    pub n: u32,
}

impl fmt::Display for VectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            f.write_str(&compact(&self.e))
        } else {
            write!(f, "{},{}", compact(&self.e), self.n)
        }
    }
}

impl MessageId for VectorLabel {}

/// Row label `(j, T)` for OA row `j` and packet positions `T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GddRowLabel {
    pub j: usize,
    pub t: Vec<u32>,
}

/// The three arrays of the GDD scheme.
#[derive(Debug, Clone)]
pub struct GddCachingScheme {
    params: GddSchemeParams,
    gdd: GroupDivisibleDesign,
    oa: OrthogonalArray,
    rows: Vec<GddRowLabel>,
    node_placement: StarGrid,
    user_retrieve: StarGrid,
    labelled: Pda<VectorLabel>,
    delivery: Pda<u32>,
}

/// Rows `(j,T)`: `T` over `C([L],t)` lexicographically, then OA rows in order.
fn row_labels(oa: &OrthogonalArray, l: u32, t: u32) -> Vec<GddRowLabel> {
    subsets(l, t as usize)
        .into_iter()
        .flat_map(|ts| (1..=oa.num_rows()).map(move |j| GddRowLabel { j, t: ts.clone() }))
        .collect()
}

/// `C((j,T),(u,v)) = *` iff `A(j,u) = v`; columns ordered by `(u−1)q + v`.
pub fn build_gdd_node_placement(oa: &OrthogonalArray, l: u32, t: u32) -> StarGrid {
    let rows = row_labels(oa, l, t);
    let q = oa.alphabet();
    StarGrid::from_fn(rows.len(), (oa.num_columns() * q) as usize, |r, g| {
        let p = Point::unflatten(g as u32 + 1, q);
        oa.get(rows[r].j, p.group as usize) == p.value
    })
}

fn distance(oa: &OrthogonalArray, j: usize, block: &[Point]) -> u32 {
    block.iter().filter(|p| oa.get(j, p.group as usize) != p.value).count() as u32
}

fn check_frame(gdd: &GroupDivisibleDesign, oa: &OrthogonalArray) -> Result<()> {
    if gdd.num_groups() != oa.num_columns() || gdd.group_size() != oa.alphabet() {
        return Err(Error::InvalidInput(format!(
            "GDD frame {}×{} does not match OA with {} columns over [{}]",
            gdd.num_groups(),
            gdd.group_size(),
            oa.num_columns(),
            oa.alphabet()
        )));
    }
    Ok(())
}

/// `U((j,T),B) = *` iff `d(A(j,ψ(B)), φ(B)) < L`.
pub fn build_gdd_user_retrieve(gdd: &GroupDivisibleDesign, oa: &OrthogonalArray, t: u32) -> Result<StarGrid> {
    check_frame(gdd, oa)?;
    let rows = row_labels(oa, gdd.block_size(), t);
    let l = gdd.block_size();
    Ok(StarGrid::from_fn(rows.len(), gdd.num_blocks(), |r, k| {
        distance(oa, rows[r].j, &gdd.blocks()[k]) < l
    }))
}

/// The user-delivery array with names `(e, n_e)`: `e` takes the block's
/// values on the groups `ψ(B)(h)`, `h ∈ T`, and the OA row elsewhere; `n_e`
/// counts occurrences of `e` within the column, top to bottom.
pub fn build_gdd_user_delivery(gdd: &GroupDivisibleDesign, oa: &OrthogonalArray, t: u32) -> Result<Pda<VectorLabel>> {
    check_frame(gdd, oa)?;
    let l = gdd.block_size();
    if t == 0 || t > l {
        return invalid(format!("need 1 ≤ t ≤ L={l}, got t={t}"));
    }
    if let Some(tag) = gdd.tag() {
        if tag.lambda != 1 {
            return Err(Error::Unsupported(format!(
                "the GDD construction needs λ=1, the design is tagged λ={}",
                tag.lambda
            )));
        }
    }
    let report = verify_gdd(gdd, t, 1);
    if !report.passed {
        return Err(Error::InconsistentDesign(format!("not a {t}-GDD with λ=1: {report:?}")));
    }
    let rows = row_labels(oa, l, t);
    let k = gdd.num_blocks();
    let mut cells = vec![Entry::Star; rows.len() * k];
    for (col, block) in gdd.blocks().iter().enumerate() {
        let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
        for (r, row) in rows.iter().enumerate() {
            if distance(oa, row.j, block) < l {
                continue;
            }
            let mut e = oa.rows()[row.j - 1].clone();
            for &h in &row.t {
                let p = block[h as usize - 1];
                e[p.group as usize - 1] = p.value;
            }
            let n = seen.entry(e.clone()).or_default();
            *n += 1;
            cells[r * k + col] = Entry::Id(VectorLabel { e, n: *n });
        }
    }
    Pda::new(cells.chunks(k).map(<[_]>::to_vec).collect())
}

fn point_label(p: &Point, q: u32, m: u32) -> String {
    if q < 10 && m < 10 {
        format!("{}{}", p.group, p.value)
    } else {
        p.to_string()
    }
}

impl GddCachingScheme {
    /// Builds `C`, `U` and `Q` from a `t`-GDD with `λ = 1` and an OA of index 1
    /// on the same `m × q` frame.
    ///
    /// ```
    /// use macc::combinatorics::{catalog_oa, transversal_gdd};
    /// use macc::scheme::GddCachingScheme;
    ///
    /// let gdd = transversal_gdd(3, 2, 2)?;
    /// let oa = catalog_oa("example-3-2-2")?;
    /// let scheme = GddCachingScheme::build(&gdd, &oa, 2)?;
    /// assert_eq!(scheme.stats().to_string(), "(12,4,3,4)");
    /// # Ok::<(), macc::Error>(())
    /// ```
    pub fn build(gdd: &GroupDivisibleDesign, oa: &OrthogonalArray, t: u32) -> Result<Self> {
        check_frame(gdd, oa)?;
        if oa.index() != 1 {
            return Err(Error::Unsupported(format!("OA index {} ≠ 1", oa.index())));
        }
        let params = GddSchemeParams::new(gdd.num_groups(), gdd.group_size(), gdd.block_size(), t, oa.strength())?;
        let labelled = build_gdd_user_delivery(gdd, oa, t)?;
        let (delivery, _) = labelled.canonicalize();
        Ok(Self {
            params,
            gdd: gdd.clone(),
            oa: oa.clone(),
            rows: row_labels(oa, params.l, t),
            node_placement: build_gdd_node_placement(oa, params.l, t),
            user_retrieve: build_gdd_user_retrieve(gdd, oa, t)?,
            labelled,
            delivery,
        })
    }

    pub fn params(&self) -> &GddSchemeParams {
        &self.params
    }

    pub fn gdd(&self) -> &GroupDivisibleDesign {
        &self.gdd
    }

    pub fn oa(&self) -> &OrthogonalArray {
        &self.oa
    }

    pub fn row_labels(&self) -> &[GddRowLabel] {
        &self.rows
    }

    pub fn labelled_delivery(&self) -> &Pda<VectorLabel> {
        &self.labelled
    }

    pub fn stats(&self) -> crate::pda::PdaStats {
        crate::pda::pda_stats(&self.delivery).expect("user-delivery arrays have uniform stars")
    }

    fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| format!("{} ({},{})", compact(&self.oa.rows()[r.j - 1]), r.j, braces(&r.t)))
            .collect()
    }

    fn user_columns(&self) -> Vec<String> {
        let (q, m) = (self.params.q, self.params.m);
        self.gdd
            .blocks()
            .iter()
            .map(|b| format!("U{}", b.iter().map(|p| point_label(p, q, m)).join(",")))
            .collect()
    }

    pub fn render_delivery(&self) -> TextTable {
        let rows = self
            .row_strings()
            .into_iter()
            .enumerate()
            .map(|(r, label)| {
                let cells = self.labelled.row(r).iter().map(|c| c.id().map_or("*".into(), |l| l.to_string()));
                (label, cells.collect())
            })
            .collect();
        TextTable {
            corner: "A (j,T)".into(),
            columns: self.user_columns(),
            rows,
        }
    }

    pub fn render_retrieve(&self) -> TextTable {
        TextTable {
            corner: "A (j,T)".into(),
            columns: self.user_columns(),
            rows: self.row_strings().into_iter().zip(self.user_retrieve.row_strings()).collect(),
        }
    }

    pub fn render_placement(&self) -> TextTable {
        let (q, m) = (self.params.q, self.params.m);
        let columns = (1..=self.params.gamma())
            .map(|g| format!("C{}", point_label(&Point::unflatten(g, q), q, m)))
            .collect();
        TextTable {
            corner: "A (j,T)".into(),
            columns,
            rows: self.row_strings().into_iter().zip(self.node_placement.row_strings()).collect(),
        }
    }
}

impl MaccScheme for GddCachingScheme {
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
        self.gdd.blocks()[user]
            .iter()
            .map(|p| p.flatten(self.params.q) as usize - 1)
            .collect()
    }

    fn claimed_load(&self) -> Option<Rational> {
        Some(ratio(self.delivery.num_ids() as i128, self.delivery.num_rows() as i128))
    }
}
