//! Congruent copies, the arrow relation `R -> (P)_r`, and diameter-Ramsey
//! witness constructions.

mod gadget;
mod witness;

pub use gadget::{mod8_color, obtuse_gadget_audit, GadgetConfig, GadgetReport, GadgetShape, Placement};
pub use witness::{
    acute_triangle_witness, almost_regular_embedding, right_triangle_witness, EmbeddingWitness, Factor,
    PairCheck, WitnessReport,
};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::chromatic::{Coloring, Decision, Solver};
use crate::constructions::regular_simplex;
use crate::error::{Error, Result};
use crate::exact::int;
use crate::geometry::{Matcher, PointSet, SqDistMatrix};
use crate::hypergraph::Hypergraph;
use crate::par;

/// All subsets of a host congruent to a pattern, as sorted index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyFamily {
    pub host_size: usize,
    pub pattern_size: usize,
    pub copies: Vec<Vec<usize>>,
}

impl CopyFamily {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// The copies as hyperedges on the host's vertices.
    pub fn as_hypergraph(&self) -> Hypergraph {
        Hypergraph::uniform(self.host_size, self.pattern_size.max(1), self.copies.clone()).unwrap()
    }
}

pub fn congruent_copies(host: &PointSet, pattern: &PointSet) -> CopyFamily {
    congruent_copies_sq(&host.sq_dist_matrix(), &pattern.sq_dist_matrix())
}

pub fn congruent_copies_sq(host: &SqDistMatrix, pattern: &SqDistMatrix) -> CopyFamily {
    let mut family = CopyFamily { host_size: host.len(), pattern_size: pattern.len(), copies: Vec::new() };
    if pattern.is_empty() {
        return family;
    }
    let Some(matcher) = Matcher::new(pattern, host, false) else {
        return family;
    };
    let per_root = par::map_slice(matcher.roots(), |&root| {
        let mut found = BTreeSet::new();
        matcher.run(Some(root), &mut |m| {
            let mut s = m.to_vec();
            s.sort_unstable();
            found.insert(s);
            true
        });
        found
    });
    let all: BTreeSet<Vec<usize>> = per_root.into_iter().flatten().collect();
    family.copies = all.into_iter().collect();
    family
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrowResult {
    pub arrows: bool,
    pub copies: usize,
    /// An `r`-coloring of the host without monochromatic copies.
    pub evading: Option<Coloring>,
}

/// Decides `R -> (P)_r`: every `r`-coloring of the host has a monochromatic
/// copy of the pattern.
pub fn arrows(host: &PointSet, pattern: &PointSet, r: usize) -> Result<ArrowResult> {
    arrows_sq(&host.sq_dist_matrix(), &pattern.sq_dist_matrix(), r)
}

pub fn arrows_sq(host: &SqDistMatrix, pattern: &SqDistMatrix, r: usize) -> Result<ArrowResult> {
    arrows_with(&congruent_copies_sq(host, pattern), r, &Solver::default())
}

pub fn arrows_with(family: &CopyFamily, r: usize, solver: &Solver) -> Result<ArrowResult> {
    if r == 0 {
        return Err(Error::InvalidParameter("need at least one color".into()));
    }
    let h = family.as_hypergraph();
    match solver.decide(&h, r) {
        Decision::Colorable(c) => Ok(ArrowResult { arrows: false, copies: family.len(), evading: Some(c) }),
        Decision::NotColorable => Ok(ArrowResult { arrows: true, copies: family.len(), evading: None }),
        Decision::Exhausted { nodes } => Err(Error::BudgetExhausted(nodes)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexArrowReport {
    pub pattern_dim: usize,
    pub colors: usize,
    pub host_vertices: usize,
    /// `rd + 1 > rd`: some color class holds `d + 1` vertices.
    pub pigeonhole: bool,
    /// Exact arrow decision, run when the host has at most 12 vertices.
    pub exact: Option<bool>,
}

/// Host for the regular `d`-simplex with `r` colors: the regular
/// `rd`-simplex of the same side.
pub fn simplex_arrow_witness(d: usize, r: usize) -> Result<(PointSet, SimplexArrowReport)> {
    if d < 1 || r < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 1 and r >= 2; got ({d}, {r})")));
    }
    let m = r * d + 1;
    let host = regular_simplex(m, 1.0)?;
    let exact = if m <= 12 {
        let h = SqDistMatrix::regular_simplex(m, &int(1));
        let p = SqDistMatrix::regular_simplex(d + 1, &int(1));
        Some(arrows_sq(&h, &p, r)?.arrows)
    } else {
        None
    };
    let report = SimplexArrowReport { pattern_dim: d, colors: r, host_vertices: m, pigeonhole: m > r * d, exact };
    Ok((host, report))
}
