//! Exact hypergraph coloring: no edge may be monochromatic.

use serde::Serialize;

use crate::diameter::diameter_hypergraph_sq;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::hypergraph::{Bitset, Hypergraph};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    colors: Vec<usize>,
    num_colors: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        let num_colors = colors.iter().max().map_or(0, |m| m + 1);
        Self { colors, num_colors }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }
}

/// Every edge sees at least two colors. A coloring of the wrong length is
/// never proper.
pub fn is_proper(h: &Hypergraph, c: &Coloring) -> bool {
    c.colors.len() == h.n_vertices()
        && h.edges().iter().all(|e| e.iter().any(|&v| c.colors[v] != c.colors[e[0]]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Reject `k` below the size of a greedy clique in the 2-edges.
    pub clique_bound: bool,
    /// Stop after this many search nodes. Budgeted runs are sequential.
    pub node_limit: Option<u64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { clique_bound: true, node_limit: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Colorable(Coloring),
    NotColorable,
    Exhausted { nodes: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChromaticNumber {
    pub chi: usize,
    pub witness: Coloring,
}

/// A proper `k`-coloring or `None`. The witness is the lexicographically
/// least proper coloring along the solver's vertex order.
pub fn colorable(h: &Hypergraph, k: usize) -> Option<Coloring> {
    match Solver::default().decide(h, k) {
        Decision::Colorable(c) => Some(c),
        _ => None,
    }
}

pub fn chromatic_number(h: &Hypergraph) -> Result<ChromaticNumber> {
    Solver::default().chromatic_number(h)
}

#[derive(Debug, Clone, Default)]
pub struct Solver {
    pub options: SolverOptions,
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Self { options }
    }

    /// Vertices by descending degree, ties by index.
    pub fn vertex_order(h: &Hypergraph) -> Vec<usize> {
        let deg = h.degrees();
        let mut order: Vec<usize> = (0..h.n_vertices()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
        order
    }

    pub fn decide(&self, h: &Hypergraph, k: usize) -> Decision {
        let n = h.n_vertices();
        if n == 0 {
            return Decision::Colorable(Coloring::new(Vec::new()));
        }
        if k == 0 || h.edges().iter().any(|e| e.len() == 1) {
            return Decision::NotColorable;
        }
        if self.options.clique_bound && greedy_clique(&h.adjacency()) > k {
            return Decision::NotColorable;
        }
        let incidence = h.incidence();
        let order = Self::vertex_order(h);
        let fresh = || Search::new(h, &incidence, &order, k, self.options.node_limit);

        if self.options.node_limit.is_some() || par::workers() == 1 {
            let mut s = fresh();
            return match s.dfs(0, 0) {
                Ok(true) => Decision::Colorable(s.coloring()),
                Ok(false) => Decision::NotColorable,
                Err(()) => Decision::Exhausted { nodes: s.nodes },
            };
        }

        // Split into lexicographically ordered prefixes; the first prefix
        // (in order) that extends wins, so the witness is schedule-free.
        let target = 8 * par::workers();
        let mut depth = 0;
        let mut prefixes = vec![(Vec::new(), 0usize)];
        while depth < n && prefixes.len() < target {
            depth += 1;
            let mut s = fresh();
            let mut next = Vec::new();
            s.collect_prefixes(0, 0, depth, &mut Vec::new(), &mut next);
            let done = next.len() == prefixes.len();
            prefixes = next;
            if done || prefixes.is_empty() {
                break;
            }
        }
        let found = par::find_map_first(&prefixes, |(prefix, used)| {
            let mut s = fresh();
            for (pos, &c) in prefix.iter().enumerate() {
                let ok = s.assign(order[pos], c);
                debug_assert!(ok);
            }
            match s.dfs(prefix.len(), *used) {
                Ok(true) => Some(s.coloring()),
                _ => None,
            }
        });
        match found {
            Some(c) => Decision::Colorable(c),
            None => Decision::NotColorable,
        }
    }

    /// Smallest `k` with a proper `k`-coloring, counting up from the clique
    /// lower bound (when enabled).
    pub fn chromatic_number(&self, h: &Hypergraph) -> Result<ChromaticNumber> {
        if let Some(e) = h.edges().iter().find(|e| e.len() == 1) {
            return Err(Error::SingletonEdge(e.clone()));
        }
        let n = h.n_vertices();
        let mut k = match (n, h.num_edges()) {
            (0, _) => 0,
            (_, 0) => 1,
            _ => 2,
        };
        if self.options.clique_bound {
            k = k.max(greedy_clique(&h.adjacency()));
        }
        loop {
            match self.decide(h, k) {
                Decision::Colorable(witness) => return Ok(ChromaticNumber { chi: k, witness }),
                Decision::NotColorable => k += 1,
                Decision::Exhausted { nodes } => return Err(Error::BudgetExhausted(nodes)),
            }
        }
    }
}

/// Size of a clique found greedily from every start vertex.
fn greedy_clique(adj: &[Bitset]) -> usize {
    let mut best = if adj.is_empty() { 0 } else { 1 };
    for v in 0..adj.len() {
        let mut size = 1;
        let mut cand = adj[v].clone();
        while let Some(u) = cand.iter().max_by_key(|&u| (adj[u].and_count(&cand), std::cmp::Reverse(u))) {
            size += 1;
            cand = cand.and(&adj[u]);
        }
        best = best.max(size);
    }
    best
}

const NONE: usize = usize::MAX;

struct Search<'a> {
    k: usize,
    edges: &'a [Vec<usize>],
    incidence: &'a [Vec<usize>],
    order: &'a [usize],
    color: Vec<usize>,
    assigned: Vec<u32>,
    // per edge, per color: assigned vertices with that color
    counts: Vec<u32>,
    // per vertex, per color: edges currently forbidding that color
    forbid: Vec<u32>,
    forbid_distinct: Vec<u32>,
    trail: Vec<(usize, usize)>,
    nodes: u64,
    limit: Option<u64>,
}

impl<'a> Search<'a> {
    fn new(h: &'a Hypergraph, incidence: &'a [Vec<usize>], order: &'a [usize], k: usize, limit: Option<u64>) -> Self {
        let n = h.n_vertices();
        let m = h.num_edges();
        Self {
            k,
            edges: h.edges(),
            incidence,
            order,
            color: vec![NONE; n],
            assigned: vec![0; m],
            counts: vec![0; m * k],
            forbid: vec![0; n * k],
            forbid_distinct: vec![0; n],
            trail: Vec::new(),
            nodes: 0,
            limit,
        }
    }

    fn coloring(&self) -> Coloring {
        Coloring::new(self.color.clone())
    }

    /// Colors `v` with `c` and propagates. Returns `false` on a monochromatic
    /// edge or an emptied domain; the caller must still call `unassign`.
    fn assign(&mut self, v: usize, c: usize) -> bool {
        let k = self.k;
        self.color[v] = c;
        for &e in &self.incidence[v] {
            self.assigned[e] += 1;
            self.counts[e * k + c] += 1;
        }
        let mut ok = true;
        for &e in &self.incidence[v] {
            let size = self.edges[e].len() as u32;
            let same = self.counts[e * k + c];
            if same == size {
                ok = false;
            } else if self.assigned[e] == size - 1 && same == size - 1 {
                let u = *self.edges[e].iter().find(|&&u| self.color[u] == NONE).unwrap();
                self.forbid[u * k + c] += 1;
                if self.forbid[u * k + c] == 1 {
                    self.forbid_distinct[u] += 1;
                    if self.forbid_distinct[u] as usize == k {
                        ok = false;
                    }
                }
                self.trail.push((u, c));
            }
        }
        ok
    }

    fn unassign(&mut self, v: usize, c: usize, mark: usize) {
        let k = self.k;
        while self.trail.len() > mark {
            let (u, d) = self.trail.pop().unwrap();
            self.forbid[u * k + d] -= 1;
            if self.forbid[u * k + d] == 0 {
                self.forbid_distinct[u] -= 1;
            }
        }
        for &e in &self.incidence[v] {
            self.assigned[e] -= 1;
            self.counts[e * k + c] -= 1;
        }
        self.color[v] = NONE;
    }

    /// Restricted-growth search from position `pos` with `used` colors so
    /// far. `Err` means the node budget ran out.
    fn dfs(&mut self, pos: usize, used: usize) -> std::result::Result<bool, ()> {
        if pos == self.order.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.limit.is_some_and(|l| self.nodes > l) {
            return Err(());
        }
        let v = self.order[pos];
        for c in 0..self.k.min(used + 1) {
            if self.forbid[v * self.k + c] > 0 {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(v, c) && self.dfs(pos + 1, used.max(c + 1))? {
                return Ok(true);
            }
            self.unassign(v, c, mark);
        }
        Ok(false)
    }

    fn collect_prefixes(
        &mut self,
        pos: usize,
        used: usize,
        depth: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, usize)>,
    ) {
        if pos == depth {
            out.push((cur.clone(), used));
            return;
        }
        let v = self.order[pos];
        for c in 0..self.k.min(used + 1) {
            if self.forbid[v * self.k + c] > 0 {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(v, c) {
                cur.push(c);
                self.collect_prefixes(pos + 1, used.max(c + 1), depth, cur, out);
                cur.pop();
            }
            self.unassign(v, c, mark);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainRow {
    pub r: usize,
    pub edges: usize,
    pub chi: usize,
    /// `ceil(chi(H_2) / (r - 1))`
    pub bound: usize,
    pub chain_ok: bool,
    pub bound_ok: bool,
    /// The coloring obtained by merging `r - 1` color classes of an optimal
    /// coloring of `H_2` is proper on `H_r`.
    pub grouped_proper: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub points: usize,
    pub rows: Vec<ChainRow>,
    pub holds: bool,
}

pub const CHAIN_AUDIT_MAX_POINTS: usize = 40;

/// Checks `chi(H_r) <= chi(H_{r-1})` and `chi(H_r) <= ceil(chi(H_2)/(r-1))`
/// for `2 <= r <= r_max`.
pub fn chain_audit(p: &PointSet, r_max: usize) -> Result<ChainReport> {
    chain_audit_with(p, r_max, &Solver::default(), CHAIN_AUDIT_MAX_POINTS)
}

pub fn chain_audit_with(p: &PointSet, r_max: usize, solver: &Solver, max_points: usize) -> Result<ChainReport> {
    if p.len() < 2 {
        return Err(Error::InvalidPointSet("need at least two points".into()));
    }
    if p.len() > max_points {
        return Err(Error::TooLarge(format!("{} points exceed the audit limit {max_points}", p.len())));
    }
    if r_max < 2 {
        return Err(Error::InvalidParameter(format!("r_max must be at least 2, got {r_max}")));
    }
    let m = p.sq_dist_matrix();
    let mut rows: Vec<ChainRow> = Vec::new();
    let mut base: Option<ChromaticNumber> = None;
    for r in 2..=r_max {
        let h = diameter_hypergraph_sq(&m, r);
        let res = solver.chromatic_number(&h)?;
        let chi2 = base.as_ref().map_or(res.chi, |b| b.chi);
        let bound = chi2.div_ceil(r - 1);
        let grouped = Coloring::new(
            base.as_ref().unwrap_or(&res).witness.colors().iter().map(|&c| c / (r - 1)).collect(),
        );
        rows.push(ChainRow {
            r,
            edges: h.num_edges(),
            chi: res.chi,
            bound,
            chain_ok: rows.last().is_none_or(|prev| res.chi <= prev.chi),
            bound_ok: res.chi <= bound,
            grouped_proper: is_proper(&h, &grouped),
        });
        if base.is_none() {
            base = Some(res);
        }
    }
    let holds = rows.iter().all(|r| r.chain_ok && r.bound_ok && r.grouped_proper);
    Ok(ChainReport { points: p.len(), rows, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{kneser_points, regular_polygon, regular_simplex};
    use crate::diameter::diameter_graph;

    fn brute_chi(h: &Hypergraph) -> usize {
        let n = h.n_vertices();
        for k in 1..=n.max(1) {
            let total = (k as u64).pow(n as u32);
            for code in 0..total {
                let mut x = code;
                let colors = (0..n)
                    .map(|_| {
                        let c = (x % k as u64) as usize;
                        x /= k as u64;
                        c
                    })
                    .collect();
                if is_proper(h, &Coloring::new(colors)) {
                    return k;
                }
            }
        }
        unreachable!()
    }

    fn petersen() -> Hypergraph {
        diameter_graph(&kneser_points(2, 2, 2).unwrap()).unwrap()
    }

    #[test]
    fn proper_checks() {
        let k3 = Hypergraph::complete_graph(3);
        assert!(!is_proper(&k3, &Coloring::new(vec![0, 0, 1])));
        assert!(is_proper(&k3, &Coloring::new(vec![0, 1, 2])));
        assert!(!is_proper(&k3, &Coloring::new(vec![0, 1])));
    }

    #[test]
    fn petersen_is_three_chromatic() {
        let h = petersen();
        assert_eq!(colorable(&h, 2), None);
        let c = colorable(&h, 3).unwrap();
        assert!(is_proper(&h, &c));
        assert_eq!(chromatic_number(&h).unwrap().chi, 3);
    }

    #[test]
    fn fano_and_complete_graphs() {
        let fano = Hypergraph::fano_plane();
        let res = chromatic_number(&fano).unwrap();
        assert_eq!(res.chi, 3);
        assert!(is_proper(&fano, &res.witness));
        for m in 1..=7 {
            assert_eq!(chromatic_number(&Hypergraph::complete_graph(m)).unwrap().chi, m);
        }
    }

    #[test]
    fn edge_cases() {
        let empty = Hypergraph::new(4, vec![]).unwrap();
        assert_eq!(colorable(&empty, 1), Some(Coloring::new(vec![0; 4])));
        assert_eq!(chromatic_number(&empty).unwrap().chi, 1);
        let single = Hypergraph::new(3, vec![vec![1], vec![0, 2]]).unwrap();
        assert!(matches!(chromatic_number(&single), Err(Error::SingletonEdge(_))));
        assert_eq!(colorable(&single, 3), None);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        // brute-force the least proper coloring along the solver order
        let h = Hypergraph::new(6, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![0, 5], vec![1, 4]]).unwrap();
        let order = Solver::vertex_order(&h);
        let mut best: Option<Vec<usize>> = None;
        for code in 0..3u64.pow(6) {
            let mut x = code;
            let mut colors = vec![0; 6];
            // position p of the order is the p-th most significant digit
            for p in (0..6).rev() {
                colors[order[p]] = (x % 3) as usize;
                x /= 3;
            }
            if is_proper(&h, &Coloring::new(colors.clone())) {
                best = Some(colors);
                break;
            }
        }
        assert_eq!(colorable(&h, 3).unwrap().colors(), best.unwrap().as_slice());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let s = Solver::new(SolverOptions { clique_bound: false, node_limit: Some(3) });
        assert!(matches!(s.decide(&petersen(), 2), Decision::Exhausted { .. }));
        assert!(matches!(s.chromatic_number(&petersen()), Err(Error::BudgetExhausted(_))));
    }

    #[test]
    fn matches_brute_force_on_small_hypergraphs() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..60 {
            let n = 3 + trial % 6;
            let m = 1 + (next() % 12) as usize;
            let edges = (0..m)
                .map(|_| {
                    let size = 2 + (next() % 2) as usize;
                    let mut e: Vec<usize> = Vec::new();
                    while e.len() < size {
                        let v = (next() % n as u64) as usize;
                        if !e.contains(&v) {
                            e.push(v);
                        }
                    }
                    e
                })
                .collect();
            let h = Hypergraph::new(n, edges).unwrap();
            let expect = brute_chi(&h);
            for clique_bound in [true, false] {
                let s = Solver::new(SolverOptions { clique_bound, node_limit: None });
                let res = s.chromatic_number(&h).unwrap();
                assert_eq!(res.chi, expect, "{h:?}");
                assert!(is_proper(&h, &res.witness));
            }
        }
    }

    #[test]
    fn chain_audit_simplex_and_heptagon() {
        let rep = chain_audit(&regular_simplex(6, 1.0).unwrap(), 3).unwrap();
        assert!(rep.holds);
        assert_eq!((rep.rows[0].chi, rep.rows[1].chi), (6, 3));
        let rep = chain_audit(&regular_polygon(7, 1.0).unwrap(), 3).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.rows[0].chi, 3);
        assert_eq!(rep.rows[1].edges, 0);
    }
}
