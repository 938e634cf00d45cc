//! JSON interchange. All indices are 1-based.
//!
//! ```text
//! {"type":"design","points":7,"blocks":[[1,2,4],...],"t":2,"lambda":1}
//! {"type":"gdd","m":3,"q":2,"blocks":[[[1,1],[2,1]],...]}
//! {"type":"oa","q":2,"s":2,"rows":[[1,1,1],...]}
//! {"type":"pda","F":6,"K":4,"cells":[["*","*",1,2],...]}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::combinatorics::{Design, GroupDivisibleDesign, OrthogonalArray, Point};
use crate::error::{Error, Result};
use crate::math::pow;
use crate::pda::{Entry, Pda, TextTable};
use crate::scheme::{CachingScheme, GddCachingScheme};

/// Any object the interchange format can carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Object {
    Design(DesignWire),
    Gdd(GddWire),
    Oa(OaWire),
    Pda(PdaWire),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignWire {
    pub points: u32,
    pub blocks: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GddWire {
    pub m: u32,
    pub q: u32,
    pub blocks: Vec<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OaWire {
    pub q: u32,
    pub s: u32,
    pub rows: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdaWire {
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub cells: Vec<Vec<Cell>>,
}

/// A PDA cell on the wire: `"*"` or a positive integer id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Id(u32),
    Star(String),
}

/// Parses any interchange object.
pub fn parse(text: &str) -> Result<Object> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json(object: &Object) -> String {
    serde_json::to_string_pretty(object).expect("wire types serialize")
}

impl DesignWire {
    pub fn from_design(d: &Design) -> Self {
        Self {
            points: d.num_points(),
            blocks: d.blocks().to_vec(),
            t: d.tag().map(|g| g.t),
            lambda: d.tag().map(|g| g.lambda),
        }
    }

    pub fn to_design(&self) -> Result<Design> {
        let d = Design::new(self.points, self.blocks.clone())?;
        Ok(match (self.t, self.lambda) {
            (Some(t), Some(l)) => d.with_tag(t, l),
            (Some(t), None) => d.with_tag(t, 1),
            (None, _) => d,
        })
    }
}

impl GddWire {
    pub fn from_gdd(g: &GroupDivisibleDesign) -> Self {
        Self {
            m: g.num_groups(),
            q: g.group_size(),
            blocks: g.blocks().iter().map(|b| b.iter().map(|p| [p.group, p.value]).collect()).collect(),
            t: g.tag().map(|x| x.t),
            lambda: g.tag().map(|x| x.lambda),
        }
    }

    pub fn to_gdd(&self) -> Result<GroupDivisibleDesign> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&[group, value]| Point { group, value }).collect())
            .collect();
        let g = GroupDivisibleDesign::new(self.m, self.q, blocks)?;
        Ok(match self.t {
            Some(t) => g.with_tag(t, self.lambda.unwrap_or(1)),
            None => g,
        })
    }
}

impl OaWire {
    pub fn from_oa(oa: &OrthogonalArray) -> Self {
        Self {
            q: oa.alphabet(),
            s: oa.strength(),
            rows: oa.rows().to_vec(),
        }
    }

    /// The index is `rows / q^s`.
    pub fn to_oa(&self) -> Result<OrthogonalArray> {
        let base = pow(self.q as u64, self.s as u64);
        let n = self.rows.len() as u128;
        if base == 0 || n % base != 0 {
            return Err(Error::InvalidInput(format!("{n} rows is not a multiple of q^s = {base}")));
        }
        OrthogonalArray::new(self.rows.clone(), self.q, self.s, (n / base) as u32)
    }
}

impl PdaWire {
    pub fn from_pda(p: &Pda<u32>) -> Self {
        Self {
            f: p.num_rows(),
            k: p.num_cols(),
            cells: (0..p.num_rows())
                .map(|j| {
                    p.row(j)
                        .iter()
                        .map(|c| match c {
                            Entry::Star => Cell::Star("*".into()),
                            Entry::Id(s) => Cell::Id(*s),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_pda(&self) -> Result<Pda<u32>> {
        if self.cells.len() != self.f || self.cells.iter().any(|r| r.len() != self.k) {
            return Err(Error::InvalidInput(format!("cells do not form a {}×{} array", self.f, self.k)));
        }
        let rows = self
            .cells
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Id(0) => Err(Error::InvalidInput("message ids start at 1".into())),
                        Cell::Id(s) => Ok(Entry::Id(*s)),
                        Cell::Star(s) if s == "*" => Ok(Entry::Star),
                        Cell::Star(s) => Err(Error::InvalidInput(format!("unknown cell {s:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Pda::new(rows)
    }
}

fn table_json(t: &TextTable) -> Value {
    json!({
        "corner": t.corner,
        "columns": t.columns,
        "rows": t.rows.iter().map(|(label, cells)| json!({"label": label, "cells": cells})).collect::<Vec<_>>(),
    })
}

/// `{"params", "stats", "C", "U", "Q"}` for a t-design scheme. `Q` carries the
/// canonical PDA and the name of every id.
pub fn scheme_bundle(scheme: &CachingScheme) -> Value {
    use crate::scheme::MaccScheme;
    let q = scheme.delivery();
    let labels: Vec<String> = (1..=q.num_ids() as u32).map(|s| scheme.label(s).to_string()).collect();
    json!({
        "params": scheme.params(),
        "design": Object::Design(DesignWire::from_design(scheme.design())),
        "stats": scheme.stats(),
        "S": scheme.delivery_count(),
        "C": table_json(&scheme.render_placement()),
        "U": table_json(&scheme.render_retrieve()),
        "Q": {"pda": Object::Pda(PdaWire::from_pda(q)), "labels": labels, "table": table_json(&scheme.render_delivery())},
    })
}

/// The same bundle for a GDD scheme, with the GDD and OA attached.
pub fn gdd_scheme_bundle(scheme: &GddCachingScheme) -> Value {
    use crate::scheme::MaccScheme;
    let (_, labels) = scheme.labelled_delivery().canonicalize();
    json!({
        "params": scheme.params(),
        "gdd": Object::Gdd(GddWire::from_gdd(scheme.gdd())),
        "oa": Object::Oa(OaWire::from_oa(scheme.oa())),
        "stats": scheme.stats(),
        "S": {"counted": scheme.delivery().num_ids(), "bound": scheme.params().delivery_bound()},
        "C": table_json(&scheme.render_placement()),
        "U": table_json(&scheme.render_retrieve()),
        "Q": {
            "pda": Object::Pda(PdaWire::from_pda(scheme.delivery())),
            "labels": labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "table": table_json(&scheme.render_delivery()),
        },
    })
}
