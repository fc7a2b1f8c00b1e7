//! Finite hypergraphs, adjacency bitsets and clique enumeration.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::SCHEMA_VERSION;
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    uniformity: Option<usize>,
}

impl Hypergraph {
    /// Sorts each edge and the edge list, drops duplicate edges. Edges must
    /// be nonempty, within `0..n`, and free of repeated vertices.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            if e.is_empty() {
                return Err(Error::InvalidParameter("empty hyperedge".into()));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("hyperedge {e:?} repeats a vertex")));
            }
            if e[e.len() - 1] >= n {
                return Err(Error::InvalidParameter(format!("hyperedge {e:?} exceeds vertex count {n}")));
            }
            set.insert(e);
        }
        let edges: Vec<Vec<usize>> = set.into_iter().collect();
        let uniformity = match edges.first() {
            Some(e) if edges.iter().all(|f| f.len() == e.len()) => Some(e.len()),
            _ => None,
        };
        Ok(Self { n, edges, uniformity })
    }

    /// Like [`Hypergraph::new`] but records `r` even when there are no edges,
    /// and rejects edges of any other size.
    pub fn uniform(n: usize, r: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("uniformity must be positive".into()));
        }
        if let Some(e) = edges.iter().find(|e| e.len() != r) {
            return Err(Error::InvalidParameter(format!("hyperedge {e:?} is not of size {r}")));
        }
        let mut h = Self::new(n, edges)?;
        h.uniformity = Some(r);
        Ok(h)
    }

    pub fn complete_graph(m: usize) -> Self {
        let edges = (0..m).flat_map(|i| (i + 1..m).map(move |j| vec![i, j])).collect();
        Self::uniform(m, 2, edges).unwrap()
    }

    /// The Fano plane as a triple system on `0..7`.
    pub fn fano_plane() -> Self {
        let lines = (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
        Self::uniform(7, 3, lines).unwrap()
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).is_ok()
    }

    /// Number of edges through each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    /// Edge indices through each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Bitset adjacency of the 2-element edges.
    pub fn adjacency(&self) -> Vec<Bitset> {
        let mut adj = vec![Bitset::new(self.n); self.n];
        for e in self.edges.iter().filter(|e| e.len() == 2) {
            adj[e[0]].insert(e[1]);
            adj[e[1]].insert(e[0]);
        }
        adj
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n || (0..self.n).any(|v| !perm.contains(&v)) {
            return Err(Error::InvalidParameter("relabeling must be a permutation".into()));
        }
        let edges = self.edges.iter().map(|e| e.iter().map(|&v| perm[v]).collect()).collect();
        let mut h = Self::new(self.n, edges)?;
        h.uniformity = self.uniformity;
        Ok(h)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "r": self.uniformity,
            "edges": self.edges,
        })
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        if let Some(s) = doc.get("schema") {
            if s.as_u64() != Some(SCHEMA_VERSION) {
                return Err(Error::Parse(format!("unsupported schema {s}")));
            }
        }
        let n = doc
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing vertex count \"n\"".into()))? as usize;
        let edges = doc
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"edges\" array".into()))?
            .iter()
            .map(|e| {
                e.as_array()
                    .ok_or_else(|| Error::Parse(format!("edge {e} is not an array")))?
                    .iter()
                    .map(|v| v.as_u64().map(|v| v as usize).ok_or_else(|| Error::Parse(format!("bad vertex {v}"))))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        match doc.get("r").and_then(Value::as_u64) {
            Some(r) => Self::uniform(n, r as usize, edges),
            None => Self::new(n, edges),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&doc)
    }
}

/// Fixed-size bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn and(&self, other: &Bitset) -> Bitset {
        Bitset { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn and_not(&self, other: &Bitset) -> Bitset {
        Bitset { words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect() }
    }

    pub fn and_count(&self, other: &Bitset) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// All maximal cliques (Bron–Kerbosch with pivoting), each sorted, in
/// lexicographic order. The outer level splits by lowest vertex and runs
/// in parallel.
pub fn maximal_cliques(adj: &[Bitset]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let per_vertex = par::map_range(n, |v| {
        let mut later = Bitset::new(n);
        let mut earlier = Bitset::new(n);
        for u in adj[v].iter() {
            if u > v {
                later.insert(u);
            } else {
                earlier.insert(u);
            }
        }
        let mut out = Vec::new();
        let mut r = vec![v];
        bron_kerbosch(adj, &mut r, later, earlier, &mut out);
        out
    });
    let mut all: Vec<Vec<usize>> = per_vertex
        .into_iter()
        .flatten()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    all.sort();
    all
}

fn bron_kerbosch(adj: &[Bitset], r: &mut Vec<usize>, mut p: Bitset, mut x: Bitset, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| (adj[u].and_count(&p), std::cmp::Reverse(u)))
        .unwrap();
    let branch: Vec<usize> = p.and_not(&adj[pivot]).iter().collect();
    for v in branch {
        r.push(v);
        bron_kerbosch(adj, r, p.and(&adj[v]), x.and(&adj[v]), out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// Vertex sets of all `r`-cliques, sorted, each listed once.
pub fn r_cliques(adj: &[Bitset], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return Vec::new();
    }
    if r == 1 {
        return (0..adj.len()).map(|v| vec![v]).collect();
    }
    let mut set = BTreeSet::new();
    for c in maximal_cliques(adj) {
        if c.len() < r {
            continue;
        }
        for s in crate::constructions::k_subsets(c.len(), r) {
            set.insert(s.iter().map(|&i| c[i]).collect::<Vec<usize>>());
        }
    }
    set.into_iter().collect()
}
