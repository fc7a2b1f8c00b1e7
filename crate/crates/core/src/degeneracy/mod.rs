//! Numerical evidence for `t`-degeneracy: how little a regular `t`-simplex
//! of side `diam(P)` through a point of `P` must enlarge the diameter.

mod stiefel;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::diameter::diameter_graph;
use crate::error::{Error, Result};
use crate::geometry::{angle_at, sq, PointSet};
use crate::hypergraph::r_cliques;
use crate::par;
use crate::rng::{in_ball, random_orthogonal, trial_rng, unit_vector};
use stiefel::{minimize_max, Schedule};

pub const DEFAULT_RESTARTS: usize = 50;
pub const DEFAULT_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionProblem {
    base: PointSet,
    anchor: usize,
    t: usize,
    ambient_dim: usize,
    side: f64,
}

impl ExtensionProblem {
    /// Side is `diam(base)`; the search space defaults to `R^{dim + t}`.
    pub fn new(base: PointSet, anchor: usize, t: usize) -> Result<Self> {
        let ambient_dim = base.dim() + t;
        Self::with_ambient_dim(base, anchor, t, ambient_dim)
    }

    /// Any `ambient_dim >= max(dim(base), t)` is accepted; smaller spaces
    /// constrain the simplex further.
    pub fn with_ambient_dim(base: PointSet, anchor: usize, t: usize, ambient_dim: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        if base.len() < 2 || anchor >= base.len() {
            return Err(Error::InvalidParameter(format!(
                "anchor {anchor} is not a point of a set with {} points (need at least 2)",
                base.len()
            )));
        }
        if ambient_dim < base.dim().max(t) {
            return Err(Error::InvalidParameter(format!(
                "ambient dimension {ambient_dim} is below max(dim {}, t {t})",
                base.dim()
            )));
        }
        let side = base.diameter().value;
        Ok(Self { base, anchor, t, ambient_dim, side })
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    fn padded(&self, i: usize) -> Vec<f64> {
        let mut p = self.base.point_f64(i);
        p.resize(self.ambient_dim, 0.0);
        p
    }

    /// Columns `c_k` with `c_k . c_l = 1/2` (k != l) and `|c_k| = 1`; the
    /// free vertices are `anchor + side * W c_k`.
    fn simplex_frame(&self) -> DMatrix<f64> {
        let t = self.t;
        let g = DMatrix::from_fn(t, t, |i, j| if i == j { 1.0 } else { 0.5 });
        g.cholesky().expect("simplex Gram matrix is positive definite").l().transpose()
    }

    fn vertices(&self, w: &DMatrix<f64>, frame: &DMatrix<f64>) -> Vec<Vec<f64>> {
        let a = self.padded(self.anchor);
        let dirs = w * frame;
        (0..self.t)
            .map(|k| (0..self.ambient_dim).map(|r| a[r] + self.side * dirs[(r, k)]).collect())
            .collect()
    }

    /// `diam(P ∪ S)` for the free vertices `vertices` (the anchor is implied),
    /// after checking they span a regular simplex of side `diam(P)` with it.
    pub fn extension_value(&self, vertices: &[Vec<f64>]) -> Result<f64> {
        if vertices.len() != self.t || vertices.iter().any(|v| v.len() != self.ambient_dim) {
            return Err(Error::InvalidParameter(format!(
                "expected {} vertices in dimension {}",
                self.t, self.ambient_dim
            )));
        }
        let err = self.constraint_error(vertices);
        if err > 1e-8 {
            return Err(Error::ConstraintViolated(format!("simplex sides off by {err:.3e} (relative)")));
        }
        Ok(self.raw_value(vertices))
    }

    fn raw_value(&self, vertices: &[Vec<f64>]) -> f64 {
        let mut m = self.side * self.side;
        for i in 0..self.base.len() {
            let p = self.padded(i);
            for v in vertices {
                m = m.max(sq(&p, v));
            }
        }
        m.sqrt()
    }

    /// Largest relative deviation of a side of `{anchor} ∪ vertices` from
    /// `diam(P)`.
    pub fn constraint_error(&self, vertices: &[Vec<f64>]) -> f64 {
        let mut all = vec![self.padded(self.anchor)];
        all.extend(vertices.iter().cloned());
        let mut err: f64 = 0.0;
        for i in 0..all.len() {
            for j in 0..i {
                err = err.max((sq(&all[i], &all[j]).sqrt() - self.side).abs() / self.side);
            }
        }
        err
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionResult {
    /// Best `diam(P ∪ S)` found: an upper bound on the true minimum.
    pub value: f64,
    /// The free vertices of the best simplex.
    pub vertices: Vec<Vec<f64>>,
    pub restart_values: Vec<f64>,
    pub constraint_error: f64,
}

/// Multi-start search for the regular `t`-simplex through the anchor that
/// least enlarges the diameter.
pub fn min_extension_diameter(prob: &ExtensionProblem, restarts: usize, seed: u64) -> Result<ExtensionResult> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let frame = prob.simplex_frame();
    let a = prob.padded(prob.anchor);
    let others: Vec<Vec<f64>> = (0..prob.base.len()).filter(|&i| i != prob.anchor).map(|i| prob.padded(i)).collect();
    let side = prob.side;
    let (d, t) = (prob.ambient_dim, prob.t);
    let runs = minimize_max(d, t, restarts, seed, &Schedule::default(), side * side, |w| {
        let dirs = w * &frame;
        let mut vals = Vec::with_capacity(others.len() * t);
        let mut grads = Vec::with_capacity(others.len() * t);
        for k in 0..t {
            let s: Vec<f64> = (0..d).map(|r| a[r] + side * dirs[(r, k)]).collect();
            for b in &others {
                vals.push(sq(&s, b));
                let diff = DMatrix::from_fn(d, 1, |r, _| 2.0 * side * (s[r] - b[r]));
                grads.push(diff * frame.column(k).transpose());
            }
        }
        (vals, grads)
    });
    let restart_values: Vec<f64> = runs
        .iter()
        .map(|r| prob.raw_value(&prob.vertices(&r.w, &frame)))
        .collect();
    let best = restart_values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::OptimizerFailed(format!("{restarts} restarts produced no finite value")))?;
    let vertices = prob.vertices(&runs[best].w, &frame);
    Ok(ExtensionResult {
        value: restart_values[best],
        constraint_error: prob.constraint_error(&vertices),
        vertices,
        restart_values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Supported,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorVerdict {
    pub anchor: usize,
    pub value: f64,
    pub verdict: Verdict,
    /// Points of `P` that complete a regular simplex through the anchor.
    pub counterexample: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyEvidence {
    pub t: usize,
    pub diam: f64,
    pub margin: f64,
    pub anchors: Vec<AnchorVerdict>,
    pub degenerate_evidence: bool,
}

/// Per anchor: SUPPORTED when no simplex found keeps the diameter within
/// `margin`, REFUTED when one keeps it (up to the set's tolerance).
pub fn is_t_degenerate_evidence(
    p: &PointSet,
    t: usize,
    margin: f64,
    restarts: usize,
    seed: u64,
) -> Result<DegeneracyEvidence> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let cliques = r_cliques(&diameter_graph(p)?.adjacency(), t + 1);
    let anchors = (0..p.len())
        .map(|anchor| verdict_with(p, anchor, t, margin, restarts, seed, &cliques))
        .collect::<Result<Vec<_>>>()?;
    let degenerate_evidence = anchors.iter().any(|a| a.verdict == Verdict::Supported);
    Ok(DegeneracyEvidence { t, diam: p.diameter().value, margin, anchors, degenerate_evidence })
}

/// The verdict of [`is_t_degenerate_evidence`] for one anchor.
pub fn anchor_verdict(
    p: &PointSet,
    anchor: usize,
    t: usize,
    margin: f64,
    restarts: usize,
    seed: u64,
) -> Result<AnchorVerdict> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let cliques = r_cliques(&diameter_graph(p)?.adjacency(), t + 1);
    verdict_with(p, anchor, t, margin, restarts, seed, &cliques)
}

fn verdict_with(
    p: &PointSet,
    anchor: usize,
    t: usize,
    margin: f64,
    restarts: usize,
    seed: u64,
    cliques: &[Vec<usize>],
) -> Result<AnchorVerdict> {
    let diam = p.diameter().value;
    let tol = p.tolerance().max(1e-9);
    if let Some(c) = cliques.iter().find(|c| c.contains(&anchor)) {
        return Ok(AnchorVerdict {
            anchor,
            value: diam,
            verdict: Verdict::Refuted,
            counterexample: Some(c.iter().copied().filter(|&i| i != anchor).collect()),
        });
    }
    let prob = ExtensionProblem::new(p.clone(), anchor, t)?;
    let res = min_extension_diameter(&prob, restarts, seed)?;
    let verdict = if res.value > diam + margin {
        Verdict::Supported
    } else if res.value <= diam * (1.0 + tol) {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    };
    Ok(AnchorVerdict { anchor, value: res.value, verdict, counterexample: None })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSample {
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub p3: Vec<f64>,
    pub q: Vec<f64>,
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma150Report {
    pub trials: usize,
    pub seed: u64,
    pub violations: usize,
    pub max_angle: f64,
    pub worst: Option<LemmaSample>,
    pub holds: bool,
}

/// Angle slack allowed above 150 degrees.
pub const LEMMA150_SLACK: f64 = 1e-6;

/// Samples triangles `p1p2p3` and points `q` with
/// `max(p2q, p3q) <= p1q <= p2p3` in dimensions 2..=5 and checks that the
/// angle at `p1` is at most 150 degrees.
pub fn lemma150_audit(trials: usize, seed: u64) -> Result<Lemma150Report> {
    let samples = par::map_range(trials, |i| {
        let mut rng = trial_rng(seed, i as u64);
        let dim = 2 + i % 4;
        loop {
            // q at the origin and p1q = 1
            let p1 = unit_vector(&mut rng, dim);
            let inner = |rng: &mut rand_chacha::ChaCha8Rng| {
                if rng.random_bool(0.5) {
                    unit_vector(rng, dim)
                } else {
                    in_ball(rng, dim, 1.0)
                }
            };
            let p2 = inner(&mut rng);
            let p3 = inner(&mut rng);
            let q = vec![0.0; dim];
            let (p1q, p2q, p3q) = (sq(&p1, &q).sqrt(), sq(&p2, &q).sqrt(), sq(&p3, &q).sqrt());
            if p2q.max(p3q) > p1q + 1e-12 || p1q > sq(&p2, &p3).sqrt() + 1e-12 {
                continue;
            }
            let Ok(angle) = angle_at(&p1, &p2, &p3) else {
                continue;
            };
            return LemmaSample { p1, p2, p3, q, angle };
        }
    });
    let violations = samples.iter().filter(|s| s.angle > 150.0 + LEMMA150_SLACK).count();
    let worst = samples.into_iter().max_by(|a, b| a.angle.total_cmp(&b.angle));
    Ok(Lemma150Report {
        trials,
        seed,
        violations,
        max_angle: worst.as_ref().map_or(0.0, |w| w.angle),
        worst,
        holds: violations == 0,
    })
}

/// Coordinates `x_i(j)` of the tetrahedron vertices in the first six axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct T5Witness {
    /// 1-based vertex index.
    pub i: usize,
    /// 1-based axis index.
    pub j: usize,
    pub value: f64,
    /// `|p_i - e_j| = sqrt(3 - 2 x_i(j))`.
    pub distance: f64,
}

fn check_tetrahedron(tetra: &[Vec<f64>]) -> Result<()> {
    if tetra.len() != 3 {
        return Err(Error::InvalidParameter(format!("need 3 points, got {}", tetra.len())));
    }
    let d = tetra[0].len();
    if d < 6 || tetra.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidParameter("points must share a dimension of at least 6".into()));
    }
    let zero = vec![0.0; d];
    for i in 0..3 {
        let mut pairs = vec![sq(&tetra[i], &zero)];
        pairs.extend((0..i).map(|j| sq(&tetra[i], &tetra[j])));
        if let Some(bad) = pairs.into_iter().find(|v| (v - 2.0).abs() > 2e-9) {
            return Err(Error::ConstraintViolated(format!(
                "squared distance {bad} where 2 is required (point {})",
                i + 1
            )));
        }
    }
    Ok(())
}

/// The smallest coordinate `x_i(j)`, `i <= 3`, `j <= 6`, of a tetrahedron
/// `{0, p1, p2, p3}` with all squared sides 2. A value below 1/2 means
/// `p_i` is farther than `sqrt 2` from `e_j`.
pub fn theorem5_witness(tetra: &[Vec<f64>]) -> Result<T5Witness> {
    check_tetrahedron(tetra)?;
    let mut best = T5Witness { i: 1, j: 1, value: f64::INFINITY, distance: 0.0 };
    for (i, p) in tetra.iter().enumerate() {
        for (j, &x) in p.iter().take(6).enumerate() {
            if x < best.value {
                best = T5Witness { i: i + 1, j: j + 1, value: x, distance: 0.0 };
            }
        }
    }
    best.distance = (3.0 - 2.0 * best.value).sqrt();
    Ok(best)
}

/// `e7 + e8, e7 + e9, e8 + e9` in `R^9`.
pub fn canonical_tetrahedron() -> Vec<Vec<f64>> {
    [(6, 7), (6, 8), (7, 8)]
        .iter()
        .map(|&(a, b)| {
            let mut v = vec![0.0; 9];
            v[a] = 1.0;
            v[b] = 1.0;
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct T5AuditReport {
    pub trials: usize,
    pub seed: u64,
    /// Trials whose smallest coordinate was not below 1/2.
    pub failures: usize,
    pub max_min_value: f64,
    pub holds: bool,
}

/// Applies random orthogonal maps of `R^9` to the canonical tetrahedron and
/// checks each image has a coordinate below 1/2.
pub fn theorem5_audit(trials: usize, seed: u64) -> Result<T5AuditReport> {
    let base = canonical_tetrahedron();
    let values = par::map_range(trials, |i| {
        let q = random_orthogonal(&mut trial_rng(seed, i as u64), 9);
        let tetra: Vec<Vec<f64>> = base
            .iter()
            .map(|p| (0..9).map(|r| (0..9).map(|c| q[(r, c)] * p[c]).sum()).collect())
            .collect();
        theorem5_witness(&tetra).map(|w| w.value)
    });
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let failures = values.iter().filter(|&&v| v >= 0.5).count();
    Ok(T5AuditReport {
        trials,
        seed,
        failures,
        max_min_value: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        holds: failures == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversaryReport {
    pub restarts: usize,
    pub seed: u64,
    /// Largest `min_{i,j} x_i(j)` found.
    pub best_min_x: f64,
    pub tetrahedron: Vec<Vec<f64>>,
}

/// Searches for a tetrahedron maximizing its smallest coordinate
/// `x_i(j)`, writing `p_i = U c_i` with `U` a `9 x 3` orthonormal frame.
pub fn theorem5_adversary(restarts: usize, seed: u64) -> Result<AdversaryReport> {
    if restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let c = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
    let runs = minimize_max(9, 3, restarts, seed, &Schedule::default(), 1.0, |u| {
        let p = u * c.transpose();
        let mut vals = Vec::with_capacity(18);
        let mut grads = Vec::with_capacity(18);
        for i in 0..3 {
            for j in 0..6 {
                vals.push(-p[(j, i)]);
                let mut g = DMatrix::zeros(9, 3);
                for k in 0..3 {
                    g[(j, k)] = -c[(i, k)];
                }
                grads.push(g);
            }
        }
        (vals, grads)
    });
    let best = runs
        .iter()
        .filter(|r| r.value.is_finite())
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::OptimizerFailed("no finite adversary value".into()))?;
    let p = &best.w * c.transpose();
    let tetrahedron = (0..3).map(|i| p.column(i).iter().copied().collect()).collect();
    Ok(AdversaryReport { restarts, seed, best_min_x: -best.value, tetrahedron })
}
