//! Congruence of finite sets as distance-labeled matching.
//!
//! Two finite sets are congruent iff some bijection preserves every squared
//! distance, so matching runs on `SqDistMatrix` class labels and never looks
//! at coordinates.

use super::{PointSet, SqDistMatrix};

/// Injective map from pattern indices to host indices preserving all
/// squared distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceMap {
    pub mapping: Vec<usize>,
}

impl CongruenceMap {
    /// Re-checks every pair against the two matrices.
    pub fn verify(&self, pattern: &SqDistMatrix, host: &SqDistMatrix) -> bool {
        let labels = SqDistMatrix::joint_classes(&[pattern, host]);
        let (pn, hn) = (pattern.len(), host.len());
        self.mapping.len() == pn
            && (0..pn).all(|i| {
                (0..pn).all(|j| {
                    labels[0][i * pn + j] == labels[1][self.mapping[i] * hn + self.mapping[j]]
                })
            })
    }
}

pub(crate) struct Matcher {
    pn: usize,
    hn: usize,
    pattern: Vec<u32>,
    host: Vec<u32>,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
}

impl Matcher {
    /// `bijective` demands equal sizes and equal row multisets; otherwise
    /// pattern rows need only be sub-multisets of host rows.
    pub(crate) fn new(pattern: &SqDistMatrix, host: &SqDistMatrix, bijective: bool) -> Option<Self> {
        let (pn, hn) = (pattern.len(), host.len());
        if pn > hn || (bijective && pn != hn) {
            return None;
        }
        let mut labels = SqDistMatrix::joint_classes(&[pattern, host]);
        let host_labels = labels.pop().unwrap();
        let pattern_labels = labels.pop().unwrap();
        let row = |l: &[u32], n: usize, i: usize| {
            let mut r: Vec<u32> = (0..n).filter(|&j| j != i).map(|j| l[i * n + j]).collect();
            r.sort_unstable();
            r
        };
        let host_rows: Vec<Vec<u32>> = (0..hn).map(|h| row(&host_labels, hn, h)).collect();
        let candidates: Vec<Vec<usize>> = (0..pn)
            .map(|p| {
                let pr = row(&pattern_labels, pn, p);
                (0..hn)
                    .filter(|&h| {
                        if bijective {
                            host_rows[h] == pr
                        } else {
                            is_submultiset(&pr, &host_rows[h])
                        }
                    })
                    .collect()
            })
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            return None;
        }
        // Fewest candidates first; ties go to the vertex with the most
        // equidistant partners (largest class in its row).
        let equal_degree = |p: usize| {
            let r = row(&pattern_labels, pn, p);
            let mut best = 0;
            let mut run = 0;
            for w in 0..r.len() {
                run = if w > 0 && r[w] == r[w - 1] { run + 1 } else { 1 };
                best = best.max(run);
            }
            best
        };
        let mut order: Vec<usize> = (0..pn).collect();
        order.sort_by_key(|&p| (candidates[p].len(), std::cmp::Reverse(equal_degree(p)), p));
        Some(Self {
            pn,
            hn,
            pattern: pattern_labels,
            host: host_labels,
            order,
            candidates,
        })
    }

    /// Host candidates of the first pattern vertex in matching order.
    pub(crate) fn roots(&self) -> &[usize] {
        if self.pn == 0 {
            &[]
        } else {
            &self.candidates[self.order[0]]
        }
    }

    /// Visits every distance-preserving injective map whose first matched
    /// vertex goes to `root` (or every map when `root` is `None`). The
    /// visitor returns `false` to stop. Returns `false` if stopped.
    pub(crate) fn run(&self, root: Option<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if self.pn == 0 {
            return visit(&[]);
        }
        let mut mapping = vec![usize::MAX; self.pn];
        let mut used = vec![false; self.hn];
        match root {
            Some(h) => {
                mapping[self.order[0]] = h;
                used[h] = true;
                self.extend(1, &mut mapping, &mut used, visit)
            }
            None => self.extend(0, &mut mapping, &mut used, visit),
        }
    }

    fn extend(
        &self,
        depth: usize,
        mapping: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == self.pn {
            return visit(mapping);
        }
        let p = self.order[depth];
        for &h in &self.candidates[p] {
            if used[h] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&q| {
                self.pattern[p * self.pn + q] == self.host[h * self.hn + mapping[q]]
            });
            if !consistent {
                continue;
            }
            mapping[p] = h;
            used[h] = true;
            let go_on = self.extend(depth + 1, mapping, used, visit);
            used[h] = false;
            mapping[p] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn is_submultiset(small: &[u32], big: &[u32]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Visits every distance-preserving injective map from `pattern` into
/// `host`; the visitor returns `false` to stop early.
pub fn embeddings(pattern: &SqDistMatrix, host: &SqDistMatrix, mut visit: impl FnMut(&[usize]) -> bool) {
    if let Some(m) = Matcher::new(pattern, host, false) {
        m.run(None, &mut visit);
    }
}

pub fn find_congruence_sq(p: &SqDistMatrix, q: &SqDistMatrix) -> Option<CongruenceMap> {
    let matcher = Matcher::new(p, q, true)?;
    let mut found = None;
    matcher.run(None, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found.map(|mapping| CongruenceMap { mapping })
}

/// A distance-preserving bijection from `p` onto `q`, if the sets are
/// congruent. Ambient dimensions may differ.
pub fn find_congruence(p: &PointSet, q: &PointSet) -> Option<CongruenceMap> {
    find_congruence_sq(&p.sq_dist_matrix(), &q.sq_dist_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::geometry::PointSet;

    #[test]
    fn permuted_copy_is_found() {
        let p = PointSet::from_integers(vec![vec![0, 0], vec![2, 0], vec![0, 1], vec![5, 5]]).unwrap();
        let q = p.select(&[3, 1, 0, 2]).unwrap();
        let map = find_congruence(&p, &q).unwrap();
        assert!(map.verify(&p.sq_dist_matrix(), &q.sq_dist_matrix()));
        assert_eq!(map.mapping, vec![2, 1, 3, 0]);
    }

    #[test]
    fn different_segments_are_not_congruent() {
        let a = PointSet::from_integers(vec![vec![0], vec![1]]).unwrap();
        let b = PointSet::from_integers(vec![vec![0], vec![2]]).unwrap();
        assert!(find_congruence(&a, &b).is_none());
    }

    #[test]
    fn size_mismatch_is_not_congruent() {
        let a = PointSet::from_integers(vec![vec![0], vec![1]]).unwrap();
        let b = PointSet::from_integers(vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(find_congruence(&a, &b).is_none());
    }

    #[test]
    fn right_triangle_sits_in_brick_corner() {
        // legs 3 and 4 against the corner triple of the 3x4 rectangle in 3-space
        let tri = PointSet::float(vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let corner =
            PointSet::from_integers(vec![vec![0, 0, 7], vec![3, 0, 7], vec![3, 4, 7]]).unwrap();
        assert!(find_congruence(&tri, &corner).is_some());
    }

    #[test]
    fn embeddings_count_symmetries() {
        let simplex = SqDistMatrix::regular_simplex(3, &int(1));
        let mut count = 0;
        embeddings(&simplex, &simplex, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 6);
    }
}
