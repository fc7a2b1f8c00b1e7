use std::cmp::Ordering;

use num::{Signed, Zero};
use serde_json::Value;

use super::{PointSet, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::par;

/// `|a - b| <= eps * max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, eps: f64) -> bool {
    (a - b).abs() <= eps * 1f64.max(a.abs()).max(b.abs())
}

/// A squared length, exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(v) => exact::to_f64(v),
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(v) => Some(v),
            Scalar::Float(_) => None,
        }
    }

    /// Exact values serialize as `"n/d"` strings, floats as numbers.
    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Exact(v) => Value::String(exact::format(v)),
            Scalar::Float(v) => Value::from(*v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SqEntries {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Symmetric matrix of squared pairwise distances. All congruence and
/// diameter questions are answered from this matrix alone.
#[derive(Debug, Clone, PartialEq)]
pub struct SqDistMatrix {
    n: usize,
    entries: SqEntries,
    tolerance: f64,
}

/// Largest distance of a set together with the pairs attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct Diameter {
    pub value_sq: Scalar,
    pub value: f64,
    pub pairs: Vec<(usize, usize)>,
    /// Float mode only: pairs that miss the diameter threshold by less than
    /// ten times the tolerance.
    pub near_pairs: Vec<(usize, usize)>,
}

impl SqDistMatrix {
    pub fn from_points(points: &PointSet) -> Self {
        let n = points.len();
        let entries = if points.is_exact() {
            let rows = par::map_range(n, |i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::zero()
                        } else {
                            points.sq_dist_exact(i, j).unwrap()
                        }
                    })
                    .collect::<Vec<_>>()
            });
            SqEntries::Exact(rows.into_iter().flatten().collect())
        } else {
            let rows = par::map_range(n, |i| {
                (0..n)
                    .map(|j| if i == j { 0.0 } else { points.sq_dist_f64(i, j) })
                    .collect::<Vec<_>>()
            });
            SqEntries::Float(rows.into_iter().flatten().collect())
        };
        Self {
            n,
            entries,
            tolerance: points.tolerance(),
        }
    }

    /// Exact matrix from a symmetric entry function (only `j < i` is queried).
    pub fn from_exact_fn(n: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut e = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..i {
                let v = f(i, j);
                e[i * n + j] = v.clone();
                e[j * n + i] = v;
            }
        }
        Self {
            n,
            entries: SqEntries::Exact(e),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn from_float_fn(n: usize, tolerance: f64, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut e = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let v = f(i, j);
                e[i * n + j] = v;
                e[j * n + i] = v;
            }
        }
        Self {
            n,
            entries: SqEntries::Float(e),
            tolerance,
        }
    }

    /// Intrinsic matrix of a regular simplex with `m` vertices and squared
    /// side `side_sq`.
    pub fn regular_simplex(m: usize, side_sq: &Rational) -> Self {
        Self::from_exact_fn(m, |_, _| side_sq.clone())
    }

    /// Matrix of `A x B`: `d((i,j),(k,l)) = A[i][k] + B[j][l]`, index `i*|B| + j`.
    pub fn product(&self, other: &SqDistMatrix) -> SqDistMatrix {
        let (na, nb) = (self.n, other.n);
        let n = na * nb;
        let tolerance = self.tolerance.max(other.tolerance);
        match (&self.entries, &other.entries) {
            (SqEntries::Exact(a), SqEntries::Exact(b)) => Self::from_exact_fn(n, |x, y| {
                &a[(x / nb) * na + y / nb] + &b[(x % nb) * nb + y % nb]
            }),
            _ => Self::from_float_fn(n, tolerance, |x, y| {
                self.get_f64(x / nb, y / nb) + other.get_f64(x % nb, y % nb)
            }),
        }
    }

    pub fn submatrix(&self, indices: &[usize]) -> SqDistMatrix {
        let k = indices.len();
        match &self.entries {
            SqEntries::Exact(_) => {
                Self::from_exact_fn(k, |i, j| self.get_exact(indices[i], indices[j]).unwrap().clone())
            }
            SqEntries::Float(_) => {
                Self::from_float_fn(k, self.tolerance, |i, j| self.get_f64(indices[i], indices[j]))
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, SqEntries::Exact(_))
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn entries(&self) -> &SqEntries {
        &self.entries
    }

    pub fn get_f64(&self, i: usize, j: usize) -> f64 {
        match &self.entries {
            SqEntries::Exact(e) => exact::to_f64(&e[i * self.n + j]),
            SqEntries::Float(e) => e[i * self.n + j],
        }
    }

    pub fn get_exact(&self, i: usize, j: usize) -> Option<&Rational> {
        match &self.entries {
            SqEntries::Exact(e) => Some(&e[i * self.n + j]),
            SqEntries::Float(_) => None,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match &self.entries {
            SqEntries::Exact(e) => Scalar::Exact(e[i * self.n + j].clone()),
            SqEntries::Float(e) => Scalar::Float(e[i * self.n + j]),
        }
    }

    /// Float copy of the matrix.
    pub fn to_float(&self) -> SqDistMatrix {
        Self::from_float_fn(self.n, self.tolerance, |i, j| self.get_f64(i, j))
    }

    /// Checks zero diagonal, symmetry, non-negativity and the triangle
    /// inequality on the square roots (up to tolerance in float mode).
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.get_f64(i, i) != 0.0 {
                return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let symmetric = match &self.entries {
                    SqEntries::Exact(e) => e[i * n + j] == e[j * n + i],
                    SqEntries::Float(e) => e[i * n + j] == e[j * n + i],
                };
                if !symmetric {
                    return Err(Error::InvalidParameter(format!("asymmetric at ({i},{j})")));
                }
                let negative = match &self.entries {
                    SqEntries::Exact(e) => e[i * n + j].is_negative(),
                    SqEntries::Float(e) => e[i * n + j] < 0.0,
                };
                if negative {
                    return Err(Error::InvalidParameter(format!("negative entry at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                let dij = self.get_f64(i, j).sqrt();
                for k in 0..n {
                    let via = self.get_f64(i, k).sqrt() + self.get_f64(k, j).sqrt();
                    if dij > via * (1.0 + self.tolerance) + self.tolerance {
                        return Err(Error::InvalidParameter(format!(
                            "triangle inequality fails for ({i},{j}) via {k}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest squared entry.
    pub fn max_sq(&self) -> Scalar {
        match &self.entries {
            SqEntries::Exact(e) => {
                Scalar::Exact(e.iter().max().cloned().unwrap_or_else(Rational::zero))
            }
            SqEntries::Float(e) => Scalar::Float(e.iter().copied().fold(0.0, f64::max)),
        }
    }

    /// Whether `(i, j)` attains the diameter. Exact mode compares exactly;
    /// float mode accepts distances `>= diam * (1 - eps)`.
    pub fn is_diametral(&self, i: usize, j: usize, max_sq: &Scalar) -> bool {
        if i == j {
            return false;
        }
        match (&self.entries, max_sq) {
            (SqEntries::Exact(e), Scalar::Exact(m)) => &e[i * self.n + j] == m && !m.is_zero(),
            _ => {
                let m = max_sq.to_f64();
                m > 0.0 && self.get_f64(i, j).sqrt() >= m.sqrt() * (1.0 - self.tolerance)
            }
        }
    }

    pub fn diameter(&self) -> Diameter {
        let max_sq = self.max_sq();
        let mut pairs = Vec::new();
        let mut near_pairs = Vec::new();
        let dmax = max_sq.to_f64().sqrt();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.is_diametral(i, j, &max_sq) {
                    pairs.push((i, j));
                } else if !self.is_exact()
                    && self.get_f64(i, j).sqrt() >= dmax * (1.0 - 10.0 * self.tolerance)
                {
                    near_pairs.push((i, j));
                }
            }
        }
        Diameter {
            value: dmax,
            value_sq: max_sq,
            pairs,
            near_pairs,
        }
    }

    /// Labels every entry of every matrix with a distance class shared across
    /// all of them: two entries get the same label iff they are equal (exact)
    /// or fall in one tolerance cluster (float). Matrices of mixed modes are
    /// compared as floats.
    pub fn joint_classes(matrices: &[&SqDistMatrix]) -> Vec<Vec<u32>> {
        let all_exact = matrices.iter().all(|m| m.is_exact());
        let mut keyed: Vec<(usize, usize)> = matrices
            .iter()
            .enumerate()
            .flat_map(|(mi, m)| (0..m.n * m.n).map(move |e| (mi, e)))
            .collect();
        let mut labels: Vec<Vec<u32>> = matrices.iter().map(|m| vec![0; m.n * m.n]).collect();
        if all_exact {
            let val = |&(mi, e): &(usize, usize)| match &matrices[mi].entries {
                SqEntries::Exact(v) => &v[e],
                SqEntries::Float(_) => unreachable!(),
            };
            keyed.sort_by(|a, b| val(a).cmp(val(b)));
            let mut class = 0u32;
            for w in 0..keyed.len() {
                if w > 0 && val(&keyed[w]) != val(&keyed[w - 1]) {
                    class += 1;
                }
                labels[keyed[w].0][keyed[w].1] = class;
            }
        } else {
            let eps = matrices.iter().map(|m| m.tolerance).fold(0.0, f64::max);
            let val = |&(mi, e): &(usize, usize)| {
                let m = matrices[mi];
                m.get_f64(e / m.n, e % m.n)
            };
            keyed.sort_by(|a, b| val(a).partial_cmp(&val(b)).unwrap_or(Ordering::Equal));
            let mut class = 0u32;
            let mut anchor = f64::NAN;
            for w in 0..keyed.len() {
                let v = val(&keyed[w]);
                if w > 0 && !approx_eq(v, anchor, eps) {
                    class += 1;
                    anchor = v;
                } else if w == 0 {
                    anchor = v;
                }
                labels[keyed[w].0][keyed[w].1] = class;
            }
        }
        labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn approx_eq_is_scale_aware() {
        assert!(approx_eq(1e6, 1e6 + 1e-4, 1e-9));
        assert!(!approx_eq(1e6, 1e6 + 1e-2, 1e-9));
        assert!(approx_eq(0.0, 5e-10, 1e-9));
        assert!(!approx_eq(0.0, 5e-9, 1e-9));
    }

    #[test]
    fn single_point_has_zero_diameter() {
        let p = PointSet::float(vec![vec![1.0, 2.0]]).unwrap();
        let d = p.diameter();
        assert_eq!(d.value, 0.0);
        assert!(d.pairs.is_empty());
    }

    #[test]
    fn product_matrix_matches_coordinates() {
        let a = PointSet::from_integers(vec![vec![0, 0], vec![1, 2], vec![3, 1]]).unwrap();
        let b = PointSet::from_integers(vec![vec![0], vec![5]]).unwrap();
        let direct = super::super::cartesian_product(&a, &b).unwrap().sq_dist_matrix();
        let via = a.sq_dist_matrix().product(&b.sq_dist_matrix());
        assert_eq!(direct, via);
    }

    #[test]
    fn near_pairs_are_flagged() {
        let m = SqDistMatrix::from_float_fn(3, 1e-9, |i, j| match (i, j) {
            (1, 0) => 1.0,
            (2, 0) => 1.0 - 1e-8,
            _ => 0.5,
        });
        let d = m.diameter();
        assert_eq!(d.pairs, vec![(0, 1)]);
        assert_eq!(d.near_pairs, vec![(0, 2)]);
    }

    #[test]
    fn validate_catches_triangle_violation() {
        let m = SqDistMatrix::from_exact_fn(3, |i, j| match (i, j) {
            (2, 0) => int(9),
            _ => int(1),
        });
        assert!(m.validate().is_err());
        assert!(SqDistMatrix::regular_simplex(4, &int(2)).validate().is_ok());
    }

    #[test]
    fn joint_classes_agree_across_matrices() {
        let a = SqDistMatrix::regular_simplex(3, &int(2));
        let b = SqDistMatrix::from_exact_fn(2, |_, _| int(2));
        let labels = SqDistMatrix::joint_classes(&[&a, &b]);
        assert_eq!(labels[0][1], labels[1][1]);
        assert_eq!(labels[0][0], labels[1][0]);
        assert_ne!(labels[0][0], labels[0][1]);
    }
}
