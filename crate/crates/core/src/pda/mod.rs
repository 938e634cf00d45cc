//! Placement delivery arrays.
//!
//! A `(K,F,Z,S)` PDA is an `F×K` array whose cells are either a star or a
//! message id, such that
//!
//! * C1: every column holds exactly `Z` stars,
//! * C2: every id in the id set occurs,
//! * C3: two cells carrying the same id lie in distinct rows and columns, and
//!   the two cells crossing them are stars.
//!
//! Row `j` is packet `j` of every file; column `k` is user `k`. A star at
//! `(j,k)` means user `k` holds packet `j`; id `s` at `(j,k)` means packet `j`
//! of the file user `k` wants travels inside multicast message `s`.

mod mn;
mod render;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

pub use mn::mn_pda;
pub use render::TextTable;

use crate::error::{Error, Result};
use crate::math::{ratio, Rational};

/// A PDA cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry<I> {
    Star,
    Id(I),
}

impl<I> Entry<I> {
    pub fn is_star(&self) -> bool {
        matches!(self, Entry::Star)
    }

    pub fn id(&self) -> Option<&I> {
        match self {
            Entry::Star => None,
            Entry::Id(i) => Some(i),
        }
    }
}

/// Message ids. Integer ids are expected to be exactly `1..=S`.
pub trait MessageId: Clone + Ord + Hash + fmt::Debug + fmt::Display {
    /// Position in a numbered id set, if the id type is numeric.
    fn ordinal(&self) -> Option<u64> {
        None
    }
}

impl MessageId for u32 {
    fn ordinal(&self) -> Option<u64> {
        Some(*self as u64)
    }
}

/// An `F×K` array over `{*} ∪ ids`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda<I = u32> {
    rows: usize,
    cols: usize,
    cells: Vec<Entry<I>>,
}

impl<I: MessageId> Pda<I> {
    /// Builds a PDA from its rows. The array must be rectangular and
    /// non-empty; the PDA conditions are checked by [`verify_pda`].
    pub fn new(rows: Vec<Vec<Entry<I>>>) -> Result<Self> {
        let f = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if f == 0 || k == 0 {
            return Err(Error::InvalidInput("a PDA needs at least one row and one column".into()));
        }
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput("PDA rows have different lengths".into()));
        }
        Ok(Self {
            rows: f,
            cols: k,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    /// Subpacketization `F`.
    pub fn num_rows(&self) -> usize {
        self.rows
    }

    /// Number of users `K`.
    pub fn num_cols(&self) -> usize {
        self.cols
    }

    /// Cell at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &Entry<I> {
        &self.cells[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Entry<I>] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn is_star(&self, row: usize, col: usize) -> bool {
        self.get(row, col).is_star()
    }

    /// Stars in each column.
    pub fn column_star_counts(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|k| (0..self.rows).filter(|&j| self.is_star(j, k)).count())
            .collect()
    }

    /// Distinct ids in first-occurrence order of a row-major scan.
    pub fn ids(&self) -> Vec<I> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for c in &self.cells {
            if let Entry::Id(i) = c {
                if seen.insert(i, ()).is_none() {
                    out.push(i.clone());
                }
            }
        }
        out
    }

    /// Number of distinct ids `S`.
    pub fn num_ids(&self) -> usize {
        self.cells
            .iter()
            .filter_map(Entry::id)
            .collect::<std::collections::HashSet<_>>()
            .len()
    }

    /// Cells `(row, col)` of every id, each list in row-major order.
    pub fn cells_by_id(&self) -> BTreeMap<&I, Vec<(usize, usize)>> {
        let mut map: BTreeMap<&I, Vec<(usize, usize)>> = BTreeMap::new();
        for (idx, c) in self.cells.iter().enumerate() {
            if let Entry::Id(i) = c {
                map.entry(i).or_default().push((idx / self.cols, idx % self.cols));
            }
        }
        map
    }

    /// Renames ids to `1..=S` by first occurrence in a row-major scan.
    /// Returns the renamed array and the original id of each new id.
    pub fn canonicalize(&self) -> (Pda<u32>, Vec<I>) {
        let labels = self.ids();
        let index: HashMap<&I, u32> = labels.iter().enumerate().map(|(n, i)| (i, n as u32 + 1)).collect();
        let cells = self
            .cells
            .iter()
            .map(|c| match c {
                Entry::Star => Entry::Star,
                Entry::Id(i) => Entry::Id(index[i]),
            })
            .collect();
        let pda = Pda {
            rows: self.rows,
            cols: self.cols,
            cells,
        };
        (pda, labels)
    }

    pub fn map_ids<J: MessageId>(&self, f: impl Fn(&I) -> J) -> Pda<J> {
        Pda {
            rows: self.rows,
            cols: self.cols,
            cells: self
                .cells
                .iter()
                .map(|c| match c {
                    Entry::Star => Entry::Star,
                    Entry::Id(i) => Entry::Id(f(i)),
                })
                .collect(),
        }
    }

    /// Reorders rows and columns: new row `j` is old row `row_perm[j]`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let cells = row_perm
            .iter()
            .flat_map(|&j| col_perm.iter().map(move |&k| (j, k)))
            .map(|(j, k)| self.get(j, k).clone())
            .collect();
        Pda {
            rows: self.rows,
            cols: self.cols,
            cells,
        }
    }

    /// Plain rendering: one line per row, cells separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for j in 0..self.rows {
            let line: Vec<String> = self.row(j).iter().map(cell_text).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

fn cell_text<I: fmt::Display>(c: &Entry<I>) -> String {
    match c {
        Entry::Star => "*".into(),
        Entry::Id(i) => i.to_string(),
    }
}

impl<I: MessageId> fmt::Display for Pda<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The first condition found to fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// C1: a column's star count differs from the first column's.
    StarCount { col: usize, stars: usize, expected: usize },
    /// C2: a numbered id in `1..=S` never occurs, or an id lies outside it.
    MissingId { id: u64 },
    /// C3a: an id repeats within a row.
    RepeatInRow { id: String, row: usize },
    /// C3a: an id repeats within a column.
    RepeatInColumn { id: String, col: usize },
    /// C3b: a crossing cell of two equal ids is not a star.
    Crossing { id: String, a: (usize, usize), b: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StarCount { col, stars, expected } => {
                write!(f, "C1: column {} has {stars} stars, column 1 has {expected}", col + 1)
            }
            Violation::MissingId { id } => write!(f, "C2: id {id} is missing or out of range"),
            Violation::RepeatInRow { id, row } => write!(f, "C3a: id {id} repeats in row {}", row + 1),
            Violation::RepeatInColumn { id, col } => write!(f, "C3a: id {id} repeats in column {}", col + 1),
            Violation::Crossing { id, a, b } => write!(
                f,
                "C3b: id {id} at ({},{}) and ({},{}) without stars at the crossings",
                a.0 + 1,
                a.1 + 1,
                b.0 + 1,
                b.1 + 1
            ),
        }
    }
}

/// Result of checking Definition 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdaReport {
    pub passed: bool,
    pub k: usize,
    pub f: usize,
    /// Stars per column when uniform.
    pub z: Option<usize>,
    pub s: usize,
    pub c1: bool,
    pub c2: bool,
    pub c3a: bool,
    pub c3b: bool,
    /// `S = 0` or `Z = F`.
    pub degenerate: bool,
    #[serde(serialize_with = "ser_violation")]
    pub first_violation: Option<Violation>,
}

fn ser_violation<S: serde::Serializer>(v: &Option<Violation>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// Checks C1–C3 and reports `(K,F,Z,S)`.
pub fn verify_pda<I: MessageId>(p: &Pda<I>) -> PdaReport {
    let (f, k) = (p.num_rows(), p.num_cols());
    let stars = p.column_star_counts();
    let mut first = None;

    let c1 = match stars.iter().position(|&z| z != stars[0]) {
        None => true,
        Some(col) => {
            first.get_or_insert(Violation::StarCount {
                col,
                stars: stars[col],
                expected: stars[0],
            });
            false
        }
    };

    let by_id = p.cells_by_id();
    let s = by_id.len();
    let mut c2 = true;
    if by_id.keys().all(|i| i.ordinal().is_some()) {
        let mut present = vec![false; s];
        for i in by_id.keys() {
            match i.ordinal() {
                Some(o) if o >= 1 && o as usize <= s => present[o as usize - 1] = true,
                Some(o) => {
                    c2 = false;
                    first.get_or_insert(Violation::MissingId { id: o });
                }
                None => {}
            }
        }
        if let Some(missing) = present.iter().position(|&b| !b) {
            c2 = false;
            first.get_or_insert(Violation::MissingId { id: missing as u64 + 1 });
        }
    }

    let (mut c3a, mut c3b) = (true, true);
    for (id, cells) in &by_id {
        for (x, &a) in cells.iter().enumerate() {
            for &b in &cells[x + 1..] {
                if a.0 == b.0 {
                    c3a = false;
                    first.get_or_insert(Violation::RepeatInRow {
                        id: id.to_string(),
                        row: a.0,
                    });
                } else if a.1 == b.1 {
                    c3a = false;
                    first.get_or_insert(Violation::RepeatInColumn {
                        id: id.to_string(),
                        col: a.1,
                    });
                } else if !p.is_star(a.0, b.1) || !p.is_star(b.0, a.1) {
                    c3b = false;
                    first.get_or_insert(Violation::Crossing {
                        id: id.to_string(),
                        a,
                        b,
                    });
                }
            }
        }
    }

    let z = c1.then(|| stars[0]);
    PdaReport {
        passed: c1 && c2 && c3a && c3b,
        k,
        f,
        z,
        s,
        c1,
        c2,
        c3a,
        c3b,
        degenerate: s == 0 || z == Some(f),
        first_violation: first,
    }
}

/// `(K, F, Z, S)` with the load `S/F` and the coded caching gain `K(F−Z)/S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdaStats {
    pub k: usize,
    pub f: usize,
    pub z: usize,
    pub s: usize,
    #[serde(serialize_with = "crate::math::ser_rational")]
    pub load: Rational,
    /// Undefined when `S = 0`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub gain: Option<Rational>,
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

impl fmt::Display for PdaStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.f, self.z, self.s)
    }
}

/// Parameters and exact load of a PDA with uniform star counts.
pub fn pda_stats<I: MessageId>(p: &Pda<I>) -> Result<PdaStats> {
    let stars = p.column_star_counts();
    if let Some(col) = stars.iter().position(|&z| z != stars[0]) {
        return Err(Error::NotAPda(format!(
            "column {} has {} stars, column 1 has {}",
            col + 1,
            stars[col],
            stars[0]
        )));
    }
    let (k, f, z, s) = (p.num_cols(), p.num_rows(), stars[0], p.num_ids());
    Ok(PdaStats {
        k,
        f,
        z,
        s,
        load: ratio(s as i128, f as i128),
        gain: (s > 0).then(|| ratio((k * (f - z)) as i128, s as i128)),
    })
}
