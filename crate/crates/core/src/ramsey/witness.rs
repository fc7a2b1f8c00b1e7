//! Product witnesses `R = F_1 x ... x F_m` containing a congruent copy of a
//! pattern with `diam(R) = diam(P)`.
//!
//! Squared distances in a product add over the factors, so everything is
//! checked exactly on the factors' squared-distance matrices; the host is
//! only materialized on request.

use num::{Signed, Zero};
use serde::Serialize;

use crate::constructions::SimplexSpec;
use crate::error::{Error, Result};
use crate::exact::{self, binomial, int, Rational};
use crate::geometry::{cartesian_product, embeddings, find_congruence_sq, PointSet, SqDistMatrix};

/// Hosts up to this size are materialized by [`EmbeddingWitness::verify`]
/// for the containment search.
pub const MATERIALIZE_LIMIT: u128 = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub name: String,
    /// Exact squared distances of the factor's vertices.
    pub side_sq: SqDistMatrix,
    /// A float realization of the factor.
    pub coords: PointSet,
}

impl Factor {
    fn new(name: String, side_sq: SqDistMatrix) -> Result<Self> {
        let coords = SimplexSpec::from_squared(side_sq.clone())?.realize()?;
        Ok(Self { name, side_sq, coords })
    }

    pub fn len(&self) -> usize {
        self.side_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side_sq.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingWitness {
    pub factors: Vec<Factor>,
    /// `embedded[k][f]`: the vertex of factor `f` used by the `k`-th point.
    pub embedded: Vec<Vec<usize>>,
    /// Squared distances of the pattern, in the order of `embedded`.
    pub pattern: SqDistMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub expected: String,
    pub actual: String,
    pub exact_match: bool,
    pub float_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub factors: Vec<String>,
    pub host_points: u128,
    pub host_diam_sq: String,
    pub pattern_diam_sq: String,
    pub diam_equal: bool,
    pub pairs_exact: bool,
    pub max_float_rel_error: f64,
    pub congruent: bool,
    /// Containment search in the materialized host (small hosts only).
    pub contained: Option<bool>,
    pub checks: Vec<PairCheck>,
    pub ok: bool,
}

impl EmbeddingWitness {
    /// Merges coincident vertices inside each factor, drops one-point
    /// factors and repeated pattern points.
    fn assemble(raw: Vec<(String, SqDistMatrix, Vec<usize>)>, pattern: SqDistMatrix) -> Result<Self> {
        let n = pattern.len();
        let keep: Vec<usize> = (0..n)
            .filter(|&k| (0..k).all(|l| !pattern.get_exact(k, l).is_some_and(Zero::is_zero)))
            .collect();
        let pattern = pattern.submatrix(&keep);
        let mut factors = Vec::new();
        let mut columns: Vec<Vec<usize>> = Vec::new();
        for (name, m, idx) in raw {
            let reps: Vec<usize> = (0..m.len())
                .filter(|&v| (0..v).all(|u| !m.get_exact(u, v).is_some_and(Zero::is_zero)))
                .collect();
            if reps.len() < 2 {
                continue;
            }
            let rep_of = |v: usize| {
                reps.iter()
                    .position(|&u| u == v || m.get_exact(u, v).is_some_and(Zero::is_zero))
                    .unwrap()
            };
            columns.push(keep.iter().map(|&k| rep_of(idx[k])).collect());
            factors.push(Factor::new(name, m.submatrix(&reps))?);
        }
        let embedded = (0..keep.len()).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
        Ok(Self { factors, embedded, pattern })
    }

    pub fn host_size(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, f| acc.saturating_mul(f.len() as u128))
    }

    /// `diam^2` of a product is the sum of the factors' `diam^2`.
    pub fn host_diam_sq(&self) -> Rational {
        self.factors
            .iter()
            .map(|f| f.side_sq.max_sq().as_exact().cloned().unwrap())
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn host_diam_sq_f64(&self) -> f64 {
        self.factors.iter().map(|f| f.coords.diameter().value_sq.to_f64()).sum()
    }

    /// Exact squared distances between the embedded points.
    pub fn embedded_sq(&self) -> SqDistMatrix {
        SqDistMatrix::from_exact_fn(self.embedded.len(), |k, l| {
            self.factors
                .iter()
                .enumerate()
                .map(|(f, fac)| fac.side_sq.get_exact(self.embedded[k][f], self.embedded[l][f]).unwrap().clone())
                .fold(Rational::zero(), |a, b| a + b)
        })
    }

    /// Float coordinates of the embedded points (factor blocks concatenated).
    pub fn embedded_points_f64(&self) -> Vec<Vec<f64>> {
        self.embedded
            .iter()
            .map(|tuple| {
                tuple
                    .iter()
                    .zip(&self.factors)
                    .flat_map(|(&v, f)| f.coords.point_f64(v))
                    .collect()
            })
            .collect()
    }

    /// Flat host index of a factor tuple (first factor varies slowest).
    pub fn host_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.factors).fold(0, |acc, (&v, f)| acc * f.len() + v)
    }

    /// Exact squared distances of the whole host.
    pub fn host_sq(&self, limit: u128) -> Result<SqDistMatrix> {
        self.check_limit(limit)?;
        Ok(self
            .factors
            .iter()
            .map(|f| f.side_sq.clone())
            .reduce(|a, b| a.product(&b))
            .unwrap_or_else(|| SqDistMatrix::from_exact_fn(1, |_, _| int(0))))
    }

    /// Float coordinates of the whole host.
    pub fn host_points(&self, limit: u128) -> Result<PointSet> {
        self.check_limit(limit)?;
        match self.factors.iter().map(|f| f.coords.clone()).reduce(|a, b| cartesian_product(&a, &b).unwrap()) {
            Some(p) => Ok(p),
            None => PointSet::float(vec![vec![0.0]]),
        }
    }

    fn check_limit(&self, limit: u128) -> Result<()> {
        if self.host_size() > limit {
            return Err(Error::TooLarge(format!("host has {} points (limit {limit})", self.host_size())));
        }
        Ok(())
    }

    pub fn pair_checks(&self) -> Vec<PairCheck> {
        let actual = self.embedded_sq();
        let pts = self.embedded_points_f64();
        let n = self.embedded.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let want = self.pattern.get_exact(i, j).unwrap();
                let got = actual.get_exact(i, j).unwrap();
                let w = exact::to_f64(want);
                let float_sq: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                out.push(PairCheck {
                    i,
                    j,
                    expected: exact::format(want),
                    actual: exact::format(got),
                    exact_match: want == got,
                    float_rel_error: (float_sq - w).abs() / w.abs().max(1.0),
                });
            }
        }
        out
    }

    pub fn verify(&self) -> WitnessReport {
        let checks = self.pair_checks();
        let host_diam_sq = self.host_diam_sq();
        let pattern_diam_sq = self.pattern.max_sq().as_exact().cloned().unwrap();
        let embedded = self.embedded_sq();
        let congruent = find_congruence_sq(&embedded, &self.pattern).is_some();
        let contained = self.host_sq(MATERIALIZE_LIMIT).ok().map(|host| {
            let mut found = false;
            embeddings(&self.pattern, &host, |_| {
                found = true;
                false
            });
            found
        });
        let diam_equal = host_diam_sq == pattern_diam_sq;
        let pairs_exact = checks.iter().all(|c| c.exact_match);
        let max_float_rel_error = checks.iter().map(|c| c.float_rel_error).fold(0.0, f64::max);
        let ok = diam_equal && pairs_exact && congruent && contained != Some(false) && max_float_rel_error <= 1e-9;
        WitnessReport {
            factors: self.factors.iter().map(|f| f.name.clone()).collect(),
            host_points: self.host_size(),
            host_diam_sq: exact::format(&host_diam_sq),
            pattern_diam_sq: exact::format(&pattern_diam_sq),
            diam_equal,
            pairs_exact,
            max_float_rel_error,
            congruent,
            contained,
            checks,
            ok,
        }
    }
}

/// Right triangle with legs `l1`, `l2` inside `A x B`, where `A` and `B` are
/// regular simplices with `r + 1` vertices and sides `l1`, `l2` (each arrows
/// its leg with `r` colors). A zero leg leaves a segment.
pub fn right_triangle_witness(l1: &Rational, l2: &Rational, r: usize) -> Result<EmbeddingWitness> {
    right_triangle_witness_sq(&(l1 * l1), &(l2 * l2), r)
}

pub fn right_triangle_witness_sq(l1_sq: &Rational, l2_sq: &Rational, r: usize) -> Result<EmbeddingWitness> {
    if l1_sq.is_negative() || l2_sq.is_negative() || (l1_sq.is_zero() && l2_sq.is_zero()) {
        return Err(Error::InvalidParameter("legs must be nonnegative and not both zero".into()));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("need at least one color".into()));
    }
    let a = SqDistMatrix::regular_simplex(r + 1, l1_sq);
    let b = SqDistMatrix::regular_simplex(r + 1, l2_sq);
    let hyp = l1_sq + l2_sq;
    let pattern = SqDistMatrix::from_exact_fn(3, |i, j| match (i, j) {
        (1, 0) => l1_sq.clone(),
        (2, 1) => l2_sq.clone(),
        _ => hyp.clone(),
    });
    EmbeddingWitness::assemble(
        vec![("A".into(), a, vec![0, 1, 1]), ("B".into(), b, vec![0, 0, 1])],
        pattern,
    )
}

/// Acute (or right) triangle with sides `a <= b <= c` inside `T0 x S`: `T0`
/// the right triangle with legs `sqrt(c^2 - a^2)`, `sqrt(c^2 - b^2)` and `S`
/// the equilateral triangle of side `sqrt(a^2 + b^2 - c^2)`.
pub fn acute_triangle_witness(a: &Rational, b: &Rational, c: &Rational) -> Result<EmbeddingWitness> {
    acute_triangle_witness_sq(&(a * a), &(b * b), &(c * c))
}

pub fn acute_triangle_witness_sq(a_sq: &Rational, b_sq: &Rational, c_sq: &Rational) -> Result<EmbeddingWitness> {
    let mut s = [a_sq.clone(), b_sq.clone(), c_sq.clone()];
    s.sort();
    let [a2, b2, c2] = s;
    if !a2.is_positive() {
        return Err(Error::InvalidParameter("sides must be positive".into()));
    }
    let x2 = &a2 + &b2 - &c2;
    if x2.is_negative() {
        return Err(Error::ObtuseTriangle { excess: exact::format(&x2) });
    }
    let l1 = &c2 - &a2;
    let l2 = &c2 - &b2;
    // u0 is the right-angle corner, u1 ends leg l1, u2 ends leg l2
    let t0 = SqDistMatrix::from_exact_fn(3, |i, j| match (i, j) {
        (1, 0) => l1.clone(),
        (2, 0) => l2.clone(),
        _ => &l1 + &l2,
    });
    let eq = SqDistMatrix::regular_simplex(3, &x2);
    // A, B, C with BC = a, AC = b, AB = c
    let pattern = SqDistMatrix::from_exact_fn(3, |i, j| match (i, j) {
        (1, 0) => c2.clone(),
        (2, 0) => b2.clone(),
        _ => a2.clone(),
    });
    EmbeddingWitness::assemble(
        vec![("T0".into(), t0, vec![1, 2, 0]), ("S".into(), eq, vec![0, 1, 2])],
        pattern,
    )
}

fn approx_string(v: &Rational) -> String {
    let s = format!("{:.12}", exact::to_f64(v));
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Embeds a nearly regular simplex, scaled to diameter 1, in
/// `T0 x prod S_ij` with `T0` regular on `n` vertices (side `a`) and each
/// `S_ij` regular on `n - 1` vertices (side `x_ij = sqrt(1 - p_ip_j^2)`).
/// Requires `sum p_ip_j^2 >= C(n,2) - 1`.
pub fn almost_regular_embedding(spec: &SimplexSpec) -> Result<EmbeddingWitness> {
    let n = spec.len();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    spec.realize()?;
    let raw = spec.exact_side_sq()?;
    let max = raw.max_sq().as_exact().cloned().unwrap();
    let side = SqDistMatrix::from_exact_fn(n, |i, j| raw.get_exact(i, j).unwrap() / &max);
    let mut sum = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            sum += side.get_exact(i, j).unwrap();
        }
    }
    let required = int(binomial(n, 2) as i64 - 1);
    if sum < required {
        return Err(Error::SumConditionViolated {
            sum: approx_string(&sum),
            required: exact::format(&required),
            deficit: approx_string(&(&sum - &required)),
        });
    }
    let a_sq = &sum - &required;
    let mut raw_factors = vec![("T0".to_string(), SqDistMatrix::regular_simplex(n, &a_sq), (0..n).collect())];
    for i in 0..n {
        for j in i + 1..n {
            let x_sq = int(1) - side.get_exact(i, j).unwrap();
            let mut next = 1;
            let idx = (0..n)
                .map(|k| {
                    if k == i || k == j {
                        0
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect();
            raw_factors.push((format!("S{}{}", i + 1, j + 1), SqDistMatrix::regular_simplex(n - 1, &x_sq), idx));
        }
    }
    EmbeddingWitness::assemble(raw_factors, side)
}
