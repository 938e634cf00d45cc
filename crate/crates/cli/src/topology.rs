//! Scheme construction from command-line topology flags.

use anyhow::Result;
use serde_json::Value;

use macc::combinatorics::{
    catalog_design, catalog_oa, complete_design, dual_of_resolvable, linear_oa, oa_to_resolvable, parity_oa,
    transversal_gdd, trivial_oa, GroupDivisibleDesign, OrthogonalArray,
};
use macc::io;
use macc::scheme::{redundancy_count, theorem1_load, CachingScheme, GddCachingScheme};
use macc::Error;

use crate::args::{OaKind, Topology};

pub enum Built {
    Design(CachingScheme),
    Gdd(GddCachingScheme),
}

impl Built {
    pub fn bundle(&self) -> Value {
        match self {
            Built::Design(s) => io::scheme_bundle(s),
            Built::Gdd(s) => io::gdd_scheme_bundle(s),
        }
    }

    /// `(K,F,Z,S), R=S/F` followed by the message count against its bound.
    pub fn summary(&self) -> String {
        match self {
            Built::Design(s) => {
                let stats = s.stats();
                let count = s.delivery_count();
                let p = s.params();
                format!(
                    "{stats}, R={}\nS={} (bound {})\nMDS: λS′={}, R={}\n",
                    stats.load,
                    count.counted,
                    count.bound,
                    p.lambda as u128 * redundancy_count(p),
                    theorem1_load(p)
                )
            }
            Built::Gdd(s) => {
                let stats = s.stats();
                format!("{stats}, R={}\nS={} (bound {})\n", stats.load, stats.s, s.params().delivery_bound())
            }
        }
    }

    pub fn render(&self) -> String {
        let (c, u, q) = match self {
            Built::Design(s) => (s.render_placement(), s.render_retrieve(), s.render_delivery()),
            Built::Gdd(s) => (s.render_placement(), s.render_retrieve(), s.render_delivery()),
        };
        format!("\nC\n{c}\nU\n{u}\nQ\n{q}")
    }
}

fn missing(flag: &str) -> anyhow::Error {
    Error::InvalidParameters(format!("{flag} is required for this topology")).into()
}

/// Blocks are the rows of the zero-sum OA(m,q,m−1); a (m−1)-GDD with L = m.
pub fn dual_parity_gdd(m: u32, q: u32) -> Result<GroupDivisibleDesign> {
    let rd = oa_to_resolvable(&parity_oa(m, q)?)?;
    Ok(dual_of_resolvable(&rd)?.with_tag(m - 1, 1))
}

pub fn build(t: &Topology) -> Result<Built> {
    let design = if let Some(name) = &t.design {
        Some(catalog_design(name)?)
    } else if let Some([g, l]) = t.complete {
        Some(complete_design(g, l)?)
    } else if let Some(path) = &t.design_file {
        Some(crate::load_design(path)?)
    } else {
        None
    };
    if let Some(d) = design {
        let mu = t.mu_gamma.ok_or_else(|| missing("--mu-gamma"))?;
        return Ok(Built::Design(CachingScheme::build(&d, mu)?));
    }
    let (gdd, strength) = if let Some([m, q, s]) = t.gdd_transversal {
        (transversal_gdd(m, q, s)?, s)
    } else if let Some([m, q]) = t.gdd_dual_parity {
        (dual_parity_gdd(m, q)?, m - 1)
    } else {
        let path = t.gdd_file.as_ref().expect("clap enforces a topology");
        let g = crate::load_gdd(path)?;
        let strength = t.t.or(g.tag().map(|x| x.t)).ok_or_else(|| missing("--t"))?;
        (g, strength)
    };
    let oa = placement_oa(t, gdd.num_groups(), gdd.group_size())?;
    Ok(Built::Gdd(GddCachingScheme::build(&gdd, &oa, strength)?))
}

fn placement_oa(t: &Topology, m: u32, q: u32) -> Result<OrthogonalArray> {
    if let Some(path) = &t.oa_file {
        return crate::load_oa(path);
    }
    let kind = t.oa.unwrap_or(OaKind::Trivial);
    let s = t.s.unwrap_or(match kind {
        OaKind::Parity => m - 1,
        _ => m,
    });
    let oa = match kind {
        OaKind::Trivial if s == m => trivial_oa(m, q)?,
        OaKind::Trivial | OaKind::Parity if s + 1 == m => parity_oa(m, q)?,
        OaKind::Trivial => {
            return Err(Error::InvalidParameters(format!(
                "--oa trivial needs s=m={m} or s=m−1; use --oa linear for s={s}"
            ))
            .into())
        }
        OaKind::Parity => {
            return Err(Error::InvalidParameters(format!("the zero-sum OA has strength m−1={}, not {s}", m - 1)).into())
        }
        OaKind::Linear => linear_oa(m, q, s)?,
        OaKind::Example => catalog_oa("example-3-2-2")?,
    };
    Ok(oa)
}
