//! Point sets, squared-distance matrices, congruence testing and products.

mod congruence;
mod json;
mod metric;

pub(crate) use congruence::Matcher;
pub use congruence::{embeddings, find_congruence, find_congruence_sq, CongruenceMap};
pub use json::SCHEMA_VERSION;
pub use metric::{approx_eq, Diameter, Scalar, SqDistMatrix, SqEntries};

use std::collections::HashSet;

use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Relative tolerance used by float point sets unless configured otherwise.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Exact(Vec<Vec<Rational>>),
    Float(Vec<Vec<f64>>),
}

/// A finite labeled point set in some `R^d`, either with exact rational
/// coordinates or float coordinates compared up to a relative tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Coords,
    labels: Option<Vec<String>>,
    tolerance: f64,
    // Exact sets whose coordinates are all small integers keep a copy here
    // so squared distances can be summed in i128.
    ints: Option<Vec<Vec<i64>>>,
}

impl PointSet {
    pub fn exact(points: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = check_dims(points.iter().map(Vec::len))?;
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p) {
                return Err(Error::InvalidPointSet(format!("point {i} is a duplicate")));
            }
        }
        let ints = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| {
                        if x.is_integer() {
                            x.numer().to_i64().filter(|v| v.unsigned_abs() < 1 << 30)
                        } else {
                            None
                        }
                    })
                    .collect::<Option<Vec<i64>>>()
            })
            .collect::<Option<Vec<_>>>();
        Ok(Self {
            dim,
            coords: Coords::Exact(points),
            labels: None,
            tolerance: DEFAULT_TOLERANCE,
            ints,
        })
    }

    /// Exact point set from integer coordinates.
    pub fn from_integers(points: Vec<Vec<i64>>) -> Result<Self> {
        Self::exact(
            points
                .into_iter()
                .map(|p| p.into_iter().map(exact::int).collect())
                .collect(),
        )
    }

    pub fn float(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::float_with_tolerance(points, DEFAULT_TOLERANCE)
    }

    pub fn float_with_tolerance(points: Vec<Vec<f64>>, tolerance: f64) -> Result<Self> {
        let dim = check_dims(points.iter().map(Vec::len))?;
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must lie in (0, 1), got {tolerance}"
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPointSet("non-finite coordinate".into()));
        }
        let set = Self {
            dim,
            coords: Coords::Float(points),
            labels: None,
            tolerance,
            ints: None,
        };
        for i in 0..set.len() {
            for j in 0..i {
                if set.sq_dist_f64(i, j) <= tolerance {
                    return Err(Error::InvalidPointSet(format!(
                        "points {j} and {i} coincide within tolerance"
                    )));
                }
            }
        }
        Ok(set)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidPointSet(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coords::Exact(p) => p.len(),
            Coords::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        match self.coords {
            Coords::Exact(_) => Mode::Exact,
            Coords::Float(_) => Mode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode() == Mode::Exact
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn point_f64(&self, i: usize) -> Vec<f64> {
        match &self.coords {
            Coords::Exact(p) => p[i].iter().map(exact::to_f64).collect(),
            Coords::Float(p) => p[i].clone(),
        }
    }

    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point_f64(i)).collect()
    }

    /// Float copy of this set (labels and tolerance kept).
    pub fn to_float(&self) -> PointSet {
        PointSet {
            dim: self.dim,
            coords: Coords::Float(self.points_f64()),
            labels: self.labels.clone(),
            tolerance: self.tolerance,
            ints: None,
        }
    }

    /// Subset in the given index order.
    pub fn select(&self, indices: &[usize]) -> Result<PointSet> {
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i].clone()).collect());
        let mut out = match &self.coords {
            Coords::Exact(p) => PointSet::exact(indices.iter().map(|&i| p[i].clone()).collect())?,
            Coords::Float(p) => PointSet::float_with_tolerance(
                indices.iter().map(|&i| p[i].clone()).collect(),
                self.tolerance,
            )?,
        };
        out.labels = labels;
        Ok(out)
    }

    /// Exact squared distance; `None` for float sets.
    pub fn sq_dist_exact(&self, i: usize, j: usize) -> Option<Rational> {
        if let Some(ints) = &self.ints {
            let s: i128 = ints[i]
                .iter()
                .zip(&ints[j])
                .map(|(a, b)| {
                    let d = (*a - *b) as i128;
                    d * d
                })
                .sum();
            return Some(Rational::from_integer(s.into()));
        }
        match &self.coords {
            Coords::Exact(p) => Some(
                p[i].iter()
                    .zip(&p[j])
                    .fold(Rational::zero(), |acc, (a, b)| {
                        let d = a - b;
                        acc + &d * &d
                    }),
            ),
            Coords::Float(_) => None,
        }
    }

    pub fn sq_dist_f64(&self, i: usize, j: usize) -> f64 {
        match &self.coords {
            Coords::Float(p) => p[i]
                .iter()
                .zip(&p[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum(),
            Coords::Exact(_) => exact::to_f64(&self.sq_dist_exact(i, j).unwrap()),
        }
    }

    pub fn sq_dist_matrix(&self) -> SqDistMatrix {
        SqDistMatrix::from_points(self)
    }

    pub fn diameter(&self) -> Diameter {
        self.sq_dist_matrix().diameter()
    }
}

fn check_dims(mut lens: impl Iterator<Item = usize>) -> Result<usize> {
    let dim = lens
        .next()
        .ok_or_else(|| Error::InvalidPointSet("no points".into()))?;
    if dim == 0 {
        return Err(Error::InvalidPointSet("dimension must be at least 1".into()));
    }
    if lens.any(|d| d != dim) {
        return Err(Error::InvalidPointSet("points have differing dimensions".into()));
    }
    Ok(dim)
}

/// `P x Q`, ordered with the `P` index varying slowest. Exact when both
/// factors are exact.
pub fn cartesian_product(p: &PointSet, q: &PointSet) -> Result<PointSet> {
    let labels = match (p.labels(), q.labels()) {
        (Some(a), Some(b)) => Some(
            a.iter()
                .flat_map(|x| b.iter().map(move |y| format!("{x}x{y}")))
                .collect(),
        ),
        _ => None,
    };
    let mut out = match (&p.coords, &q.coords) {
        (Coords::Exact(a), Coords::Exact(b)) => PointSet::exact(
            a.iter()
                .flat_map(|x| b.iter().map(move |y| x.iter().chain(y).cloned().collect()))
                .collect(),
        )?,
        _ => {
            let (a, b) = (p.points_f64(), q.points_f64());
            PointSet::float_with_tolerance(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| x.iter().chain(y).copied().collect()))
                    .collect(),
                p.tolerance.max(q.tolerance),
            )?
        }
    };
    out.labels = labels;
    Ok(out)
}

/// Angle of the triangle `apex, b, c` at `apex`, in degrees.
pub fn angle_at(apex: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
    if apex.len() != b.len() || apex.len() != c.len() {
        return Err(Error::InvalidParameter("dimension mismatch".into()));
    }
    let ab = sq(apex, b);
    let ac = sq(apex, c);
    let bc = sq(b, c);
    if ab == 0.0 || ac == 0.0 {
        return Err(Error::Degenerate("zero-length side at the apex".into()));
    }
    let cos = ((ab + ac - bc) / (2.0 * (ab * ac).sqrt())).clamp(-1.0, 1.0);
    Ok(cos.acos().to_degrees())
}

/// Circumcenter of a non-degenerate triangle in any dimension.
pub fn circumcenter(a: &[f64], b: &[f64], c: &[f64]) -> Result<Vec<f64>> {
    let u: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = c.iter().zip(a).map(|(x, y)| x - y).collect();
    let uu = dot(&u, &u);
    let vv = dot(&v, &v);
    let uv = dot(&u, &v);
    let det = uu * vv - uv * uv;
    if det <= 1e-14 * uu * vv {
        return Err(Error::Degenerate("collinear triangle has no circumcenter".into()));
    }
    // o = a + s u + t v with o.u = uu/2 and o.v = vv/2 relative to a
    let s = (vv * uu - uv * vv) / (2.0 * det);
    let t = (uu * vv - uv * uu) / (2.0 * det);
    Ok(a.iter()
        .zip(u.iter().zip(&v))
        .map(|(p, (x, y))| p + s * x + t * y)
        .collect())
}

pub(crate) fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
