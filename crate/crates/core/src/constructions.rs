//! Generators for the named point-set families.

use nalgebra::DMatrix;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, binomial, Rational};
use crate::geometry::{cartesian_product, PointSet, SqDistMatrix};

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(m, k));
    if k > m {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn set_label(elements: impl IntoIterator<Item = usize>) -> String {
    let inner: Vec<String> = elements.into_iter().map(|e| (e + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// A balanced partition `[2n] = X ∪ Y`, stored once through the side `X`
/// that contains the first element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionPoint {
    n: usize,
    x_mask: u64,
}

impl PartitionPoint {
    pub fn new(n: usize, x_mask: u64) -> Result<Self> {
        if n == 0 || 2 * n > 64 {
            return Err(Error::InvalidParameter(format!("n = {n} out of range")));
        }
        let full = if 2 * n == 64 { u64::MAX } else { (1u64 << (2 * n)) - 1 };
        if x_mask & !full != 0 || x_mask.count_ones() as usize != n {
            return Err(Error::InvalidParameter(format!("{x_mask:#b} is not an {n}-subset of [{}]", 2 * n)));
        }
        // canonical side contains element 1
        let x_mask = if x_mask & 1 == 1 { x_mask } else { full & !x_mask };
        Ok(Self { n, x_mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn y_mask(&self) -> u64 {
        let full = if 2 * self.n == 64 { u64::MAX } else { (1u64 << (2 * self.n)) - 1 };
        full & !self.x_mask
    }

    /// `t = |X ∩ X'|` for the canonical sides.
    pub fn intersection(&self, other: &PartitionPoint) -> usize {
        (self.x_mask & other.x_mask).count_ones() as usize
    }

    /// 0/1 coordinates indexed by the 2-subsets of `[2n]` in lexicographic
    /// order: 1 exactly when the pair is split by the partition.
    pub fn coordinates(&self) -> Vec<i64> {
        let m = 2 * self.n;
        let mut out = Vec::with_capacity(binomial(m, 2));
        for a in 0..m {
            for b in a + 1..m {
                let split = ((self.x_mask >> a) & 1) != ((self.x_mask >> b) & 1);
                out.push(split as i64);
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let m = 2 * self.n;
        let x = (0..m).filter(|&e| (self.x_mask >> e) & 1 == 1);
        let y = (0..m).filter(|&e| (self.x_mask >> e) & 1 == 0);
        format!("{}|{}", set_label(x), set_label(y))
    }
}

/// All balanced partitions of `[2n]`, ordered lexicographically by the side
/// containing element 1.
pub fn partitions(n: usize) -> Result<Vec<PartitionPoint>> {
    if n == 0 || 2 * n > 64 {
        return Err(Error::InvalidParameter(format!("n = {n} out of range")));
    }
    k_subsets(2 * n - 1, n - 1)
        .into_iter()
        .map(|rest| {
            let mask = rest.iter().fold(1u64, |m, &e| m | 1 << (e + 1));
            PartitionPoint::new(n, mask)
        })
        .collect()
}

/// Largest `n` accepted by [`kahn_kalai`]; `n = 8` already gives 6435
/// points in 120 dimensions.
pub const KAHN_KALAI_MAX_N: usize = 8;

/// The Kahn–Kalai set for even `n`: one 0/1 point in `R^{C(2n,2)}` per
/// balanced partition of `[2n]`. Diameter is `n`.
pub fn kahn_kalai(n: usize) -> Result<PointSet> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n must be even and at least 2, got {n}")));
    }
    if n > KAHN_KALAI_MAX_N {
        return Err(Error::TooLarge(format!("kahn_kalai({n}) has more than 10^5 points")));
    }
    let parts = partitions(n)?;
    PointSet::from_integers(parts.iter().map(PartitionPoint::coordinates).collect())?
        .with_labels(parts.iter().map(PartitionPoint::label).collect())
}

/// Ambient dimension `d = rn + (k-1)(r-1)` of the Kneser configuration.
pub fn kneser_dimension(n: usize, k: usize, r: usize) -> usize {
    r * n + (k - 1) * (r - 1)
}

pub const KNESER_MAX_POINTS: usize = 200_000;

/// Characteristic vectors of all `n`-subsets of `[d]`, `d = rn + (k-1)(r-1)`.
pub fn kneser_points(n: usize, k: usize, r: usize) -> Result<PointSet> {
    if n < 1 || k < 2 || r < 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1, k >= 2, r >= 2; got ({n}, {k}, {r})"
        )));
    }
    let d = kneser_dimension(n, k, r);
    if binomial(d, n) > KNESER_MAX_POINTS {
        return Err(Error::TooLarge(format!("C({d}, {n}) points")));
    }
    let subsets = k_subsets(d, n);
    let points = subsets
        .iter()
        .map(|s| {
            let mut v = vec![0; d];
            for &e in s {
                v[e] = 1;
            }
            v
        })
        .collect();
    PointSet::from_integers(points)?.with_labels(subsets.iter().map(|s| set_label(s.iter().copied())).collect())
}

/// Regular simplex with `m` vertices and side `side`, centered at the
/// origin of `R^{m-1}` (Helmert coordinates).
pub fn regular_simplex(m: usize, side: f64) -> Result<PointSet> {
    if m == 0 || !(side > 0.0) {
        return Err(Error::InvalidParameter(format!("need m >= 1 and side > 0; got ({m}, {side})")));
    }
    if m == 1 {
        return PointSet::float(vec![vec![0.0]]);
    }
    let scale = side / 2f64.sqrt();
    let points = (0..m)
        .map(|j| {
            (1..m)
                .map(|k| {
                    let norm = ((k * (k + 1)) as f64).sqrt();
                    let h = match j.cmp(&k) {
                        std::cmp::Ordering::Less => 1.0,
                        std::cmp::Ordering::Equal => -(k as f64),
                        std::cmp::Ordering::Greater => 0.0,
                    };
                    scale * h / norm
                })
                .collect()
        })
        .collect();
    PointSet::float(points)
}

pub fn regular_polygon(n: usize, circumradius: f64) -> Result<PointSet> {
    if n < 3 || !(circumradius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need n >= 3 and circumradius > 0; got ({n}, {circumradius})"
        )));
    }
    let points = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            vec![circumradius * a.cos(), circumradius * a.sin()]
        })
        .collect();
    PointSet::float(points)?.with_labels((1..=n).map(|k| format!("p{k}")).collect())
}

/// Vertices of the box with the given rational side lengths (exact).
pub fn brick(lengths: &[Rational]) -> Result<PointSet> {
    if lengths.is_empty() || lengths.iter().any(|l| !l.is_positive()) {
        return Err(Error::InvalidParameter("brick needs positive side lengths".into()));
    }
    lengths.iter().try_fold(None::<PointSet>, |acc, l| {
        let seg = PointSet::exact(vec![vec![Rational::zero()], vec![l.clone()]])?;
        Ok(Some(match acc {
            None => seg,
            Some(p) => cartesian_product(&p, &seg)?,
        }))
    })
    .map(Option::unwrap)
}

/// Float version of [`brick`] for irrational side lengths.
pub fn brick_f64(lengths: &[f64]) -> Result<PointSet> {
    if lengths.is_empty() || lengths.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidParameter("brick needs positive side lengths".into()));
    }
    lengths.iter().try_fold(None::<PointSet>, |acc, &l| {
        let seg = PointSet::float(vec![vec![0.0], vec![l]])?;
        Ok(Some(match acc {
            None => seg,
            Some(p) => cartesian_product(&p, &seg)?,
        }))
    })
    .map(Option::unwrap)
}

/// The origin of `R^6` together with the six unit coordinate vectors.
pub fn theorem5_set() -> PointSet {
    let mut points = vec![vec![0i64; 6]];
    for j in 0..6 {
        let mut v = vec![0; 6];
        v[j] = 1;
        points.push(v);
    }
    let labels = std::iter::once("p0".to_string())
        .chain((1..=6).map(|j| format!("q{j}")))
        .collect();
    PointSet::from_integers(points).unwrap().with_labels(labels).unwrap()
}

/// Regular heptagon `R = p1..p7` and its obtuse triangle `P = {p1, p2, p4}`.
pub fn heptagon_config(circumradius: f64) -> Result<(PointSet, PointSet)> {
    let r = regular_polygon(7, circumradius)?;
    let p = r.select(&[0, 1, 3])?;
    Ok((r, p))
}

/// Indices of the heptagon triples `{p_i, p_{i+1}, p_{i+3}}`, a copy of
/// the Fano plane.
pub fn heptagon_fano_triples() -> Vec<Vec<usize>> {
    (0..7)
        .map(|i| {
            let mut t = vec![i, (i + 1) % 7, (i + 3) % 7];
            t.sort_unstable();
            t
        })
        .collect()
}

/// Abstract simplex given by its squared side lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSpec {
    side_sq: SqDistMatrix,
}

impl SimplexSpec {
    /// From squared sides; requires zero diagonal, symmetry and positive
    /// off-diagonal entries. Realizability is checked by [`SimplexSpec::realize`].
    pub fn from_squared(side_sq: SqDistMatrix) -> Result<Self> {
        let n = side_sq.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty simplex".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (side_sq.get(i, j), side_sq.get(j, i));
                if a != b {
                    return Err(Error::InvalidParameter(format!("side matrix asymmetric at ({i},{j})")));
                }
                let positive = match side_sq.get_exact(i, j) {
                    Some(v) => v.is_positive(),
                    None => side_sq.get_f64(i, j) > 0.0,
                };
                if i == j && side_sq.get_f64(i, i) != 0.0 {
                    return Err(Error::InvalidParameter(format!("nonzero diagonal at {i}")));
                }
                if i != j && !positive {
                    return Err(Error::InvalidParameter(format!("side ({i},{j}) must be positive")));
                }
            }
        }
        Ok(Self { side_sq })
    }

    /// From a full matrix of side lengths (floats).
    pub fn from_side_lengths(sides: &[Vec<f64>]) -> Result<Self> {
        let n = sides.len();
        if sides.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("side matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if sides[i][j] != sides[j][i] {
                    return Err(Error::InvalidParameter(format!("side matrix asymmetric at ({i},{j})")));
                }
            }
        }
        Self::from_squared(SqDistMatrix::from_float_fn(n, crate::geometry::DEFAULT_TOLERANCE, |i, j| {
            sides[i][j] * sides[i][j]
        }))
    }

    /// Exact squared sides from rational side lengths.
    pub fn from_rational_sides(sides: &[Vec<Rational>]) -> Result<Self> {
        let n = sides.len();
        if sides.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("side matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if sides[i][j] != sides[j][i] {
                    return Err(Error::InvalidParameter(format!("side matrix asymmetric at ({i},{j})")));
                }
            }
        }
        Self::from_squared(SqDistMatrix::from_exact_fn(n, |i, j| &sides[i][j] * &sides[i][j]))
    }

    /// Triangle with sides `bc = a`, `ac = b`, `ab = c` on vertices
    /// `(A, B, C) = (0, 1, 2)`.
    pub fn triangle(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::from_side_lengths(&[vec![0.0, c, b], vec![c, 0.0, a], vec![b, a, 0.0]])
    }

    pub fn len(&self) -> usize {
        self.side_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side_sq.is_empty()
    }

    pub fn side_sq(&self) -> &SqDistMatrix {
        &self.side_sq
    }

    /// Gram matrix of the vertices with vertex 0 moved to the origin.
    pub fn gram(&self) -> DMatrix<f64> {
        let n = self.len();
        let d = &self.side_sq;
        DMatrix::from_fn(n - 1, n - 1, |i, j| {
            (d.get_f64(0, i + 1) + d.get_f64(0, j + 1) - d.get_f64(i + 1, j + 1)) / 2.0
        })
    }

    /// Coordinates reproducing the squared sides, via the eigendecomposition
    /// of the Gram matrix. Eigenvalues down to `-1e-8 * λ_max` are clamped
    /// to zero so near-degenerate simplices still realize.
    pub fn realize(&self) -> Result<PointSet> {
        let n = self.len();
        if n == 1 {
            return PointSet::float(vec![vec![0.0]]);
        }
        let eig = self.gram().symmetric_eigen();
        let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        let threshold = 1e-8 * lmax.max(f64::MIN_POSITIVE);
        if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < -threshold) {
            return Err(Error::NotRealizable { eigenvalue: bad, threshold });
        }
        let dim = n - 1;
        let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
        let mut points = vec![vec![0.0; dim]];
        for i in 0..dim {
            points.push((0..dim).map(|k| eig.eigenvectors[(i, k)] * roots[k]).collect());
        }
        PointSet::float_with_tolerance(points, self.side_sq.tolerance())
    }

    /// Largest squared side, exact when the spec is.
    pub fn diam_sq(&self) -> crate::geometry::Scalar {
        self.side_sq.max_sq()
    }

    /// Exact squared sides; float specs are converted exactly (dyadic).
    pub fn exact_side_sq(&self) -> Result<SqDistMatrix> {
        if self.side_sq.is_exact() {
            return Ok(self.side_sq.clone());
        }
        let n = self.len();
        let mut vals = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                vals[i * n + j] = exact::from_f64(self.side_sq.get_f64(i, j))?;
            }
        }
        Ok(SqDistMatrix::from_exact_fn(n, |i, j| vals[i * n + j].clone()))
    }
}
