//! Diameter graphs `H_2(P)` and diameter hypergraphs `H_r(P)`.

use serde::Serialize;

use crate::constructions::{kahn_kalai, partitions, PartitionPoint};
use crate::error::{Error, Result};
use crate::geometry::{PointSet, SqDistMatrix};
use crate::hypergraph::{r_cliques, Hypergraph};

/// Graph on the points joining the pairs that attain the diameter.
pub fn diameter_graph(p: &PointSet) -> Result<Hypergraph> {
    if p.len() < 2 {
        return Err(Error::InvalidPointSet("diameter graph needs at least two points".into()));
    }
    Ok(diameter_graph_sq(&p.sq_dist_matrix()))
}

pub fn diameter_graph_sq(m: &SqDistMatrix) -> Hypergraph {
    let pairs = m.diameter().pairs.into_iter().map(|(i, j)| vec![i, j]).collect();
    Hypergraph::uniform(m.len(), 2, pairs).unwrap()
}

/// `H_r(P)`: the `r`-cliques of the diameter graph.
pub fn diameter_hypergraph(p: &PointSet, r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    Ok(diameter_hypergraph_sq(&p.sq_dist_matrix(), r))
}

pub fn diameter_hypergraph_sq(m: &SqDistMatrix, r: usize) -> Hypergraph {
    let g = diameter_graph_sq(m);
    if r == 2 {
        return g;
    }
    Hypergraph::uniform(m.len(), r, r_cliques(&g.adjacency(), r)).unwrap()
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectionFactReport {
    pub n: usize,
    pub r: usize,
    pub equal: bool,
    pub hypergraph_edges: usize,
    pub enumerated_families: usize,
    /// A family found by one side but not the other, as partition labels.
    pub counterexample: Option<Vec<String>>,
}

/// Compares `H_r` of the Kahn–Kalai set with a direct search for
/// `r`-families of partitions whose sides pairwise meet in `n/2` elements.
pub fn verify_intersection_fact(n: usize, r: usize) -> Result<IntersectionFactReport> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    let points = kahn_kalai(n)?;
    let parts = partitions(n)?;
    let h = diameter_hypergraph(&points, r)?;
    let mut families = Vec::new();
    let mut cur = Vec::with_capacity(r);
    half_intersecting(&parts, n / 2, r, 0, &mut cur, &mut families);
    let equal = h.edges() == families.as_slice();
    let counterexample = if equal {
        None
    } else {
        let only_h = h.edges().iter().find(|e| !families.contains(e));
        let only_f = families.iter().find(|f| !h.contains_edge(f));
        only_h.or(only_f).map(|fam| fam.iter().map(|&i| parts[i].label()).collect())
    };
    Ok(IntersectionFactReport {
        n,
        r,
        equal,
        hypergraph_edges: h.num_edges(),
        enumerated_families: families.len(),
        counterexample,
    })
}

fn half_intersecting(
    parts: &[PartitionPoint],
    half: usize,
    r: usize,
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == r {
        out.push(cur.clone());
        return;
    }
    for i in start..parts.len() {
        if cur.iter().all(|&j| parts[j].intersection(&parts[i]) == half) {
            cur.push(i);
            half_intersecting(parts, half, r, i + 1, cur, out);
            cur.pop();
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HopfPannwitzReport {
    pub points: usize,
    pub diameter_pairs: usize,
    pub holds: bool,
    pub attained: bool,
    /// Pairs within ten tolerances of the diameter that were not counted.
    pub near_pairs: usize,
}

/// Checks that a planar set has at most `|P|` diameter pairs.
pub fn hopf_pannwitz_audit(p: &PointSet) -> Result<HopfPannwitzReport> {
    if p.dim() != 2 {
        return Err(Error::InvalidPointSet(format!("planar set required, got dimension {}", p.dim())));
    }
    if p.len() < 2 {
        return Err(Error::InvalidPointSet("need at least two points".into()));
    }
    let d = p.diameter();
    let k = d.pairs.len();
    Ok(HopfPannwitzReport {
        points: p.len(),
        diameter_pairs: k,
        holds: k <= p.len(),
        attained: k == p.len(),
        near_pairs: d.near_pairs.len(),
    })
}
