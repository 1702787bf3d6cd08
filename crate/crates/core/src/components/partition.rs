use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ifs::Cuboid;
use crate::scalar::Scalar;
use crate::union_find::UnionFind;

/// Finite set of distinct points of `R^d`, in order of first occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<S> {
    dim: usize,
    points: Vec<Vec<S>>,
}

impl<S: Scalar> PointSet<S> {
    /// Drops repeated points. Every point must have the same positive
    /// number of coordinates.
    pub fn new(points: Vec<Vec<S>>) -> Result<Self> {
        let dim = points.first().map_or(1, Vec::len);
        if dim == 0 {
            return Err(Error::Components("points need at least one coordinate".into()));
        }
        let mut kept: Vec<Vec<S>> = Vec::with_capacity(points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Components(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if !kept.contains(&p) {
                kept.push(p);
            }
        }
        Ok(PointSet { dim, points: kept })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn dist_sq(&self, i: usize, j: usize) -> S {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| {
                let t = a.clone() - b.clone();
                t.clone() * t
            })
            .fold(S::zero(), |acc, x| acc + x)
    }

    /// Each point as a degenerate box.
    pub fn as_cuboids(&self) -> Vec<Cuboid<S>> {
        self.points.iter().map(|p| Cuboid::point(p)).collect()
    }
}

/// The `delta`-connected components of a finite family of boxes or points.
///
/// Only squared quantities are stored, so the partition stays exact even
/// when `delta` itself is irrational.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentPartition<S> {
    pub delta_sq: S,
    /// Object indices, each block ascending, blocks ordered by first member.
    pub blocks: Vec<Vec<usize>>,
    /// Squared diameter of the union of each block.
    pub diam_sq: Vec<S>,
}

impl<S: Scalar> ComponentPartition<S> {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn max_diam_sq(&self) -> S {
        self.diam_sq
            .iter()
            .cloned()
            .reduce(S::max_of)
            .unwrap_or_else(S::zero)
    }

    /// `(lo, hi)` bracketing the diameter of block `i`.
    pub fn diam_bracket(&self, i: usize, digits: u32) -> (S, S) {
        self.diam_sq[i].sqrt_bracket(digits)
    }

    /// Block index of every object.
    pub fn labels(&self) -> Vec<usize> {
        let n = self.blocks.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                out[i] = b;
            }
        }
        out
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Self) -> bool {
        let labels = coarser.labels();
        self.blocks
            .iter()
            .all(|block| block.iter().all(|&i| labels[i] == labels[block[0]]))
    }
}

pub fn delta_components<S: Scalar>(objects: &[Cuboid<S>], delta: &S) -> Result<ComponentPartition<S>> {
    if !delta.is_positive() {
        return Err(Error::NonPositiveDelta(delta.to_string()));
    }
    delta_components_sq(objects, &(delta.clone() * delta.clone()))
}

/// As [`delta_components`], with the threshold given as `delta^2`.
pub fn delta_components_sq<S: Scalar>(
    objects: &[Cuboid<S>],
    delta_sq: &S,
) -> Result<ComponentPartition<S>> {
    if !delta_sq.is_positive() {
        return Err(Error::NonPositiveDelta(format!("sqrt({delta_sq})")));
    }
    let dim = objects.first().map_or(0, Cuboid::dim);
    if let Some(i) = objects.iter().position(|b| b.dim() != dim) {
        return Err(Error::Components(format!(
            "object {i} has dimension {}, expected {dim}",
            objects[i].dim()
        )));
    }
    let approx = Approx::new(objects, delta_sq);
    let mut uf = UnionFind::new(objects.len());
    for (i, j) in adjacency(objects, delta_sq, &approx) {
        uf.union(i, j);
    }
    let blocks = uf.blocks();
    let diam_sq = blocks
        .par_iter()
        .map(|block| block_diam_sq(objects, block, &approx))
        .collect();
    Ok(ComponentPartition {
        delta_sq: delta_sq.clone(),
        blocks,
        diam_sq,
    })
}

pub fn point_components<S: Scalar>(points: &PointSet<S>, delta: &S) -> Result<ComponentPartition<S>> {
    delta_components(&points.as_cuboids(), delta)
}

/// Floating-point shadow of the objects used to skip exact comparisons
/// that are decided with a wide margin.
struct Approx {
    lo: Vec<Vec<f64>>,
    hi: Vec<Vec<f64>>,
    delta_sq: f64,
    /// Absolute error bound on any squared distance computed in `f64`.
    tol: f64,
    enabled: bool,
}

impl Approx {
    fn new<S: Scalar>(objects: &[Cuboid<S>], delta_sq: &S) -> Self {
        let lo: Vec<Vec<f64>> = objects
            .iter()
            .map(|b| b.sides.iter().map(|s| s.lo.to_f64()).collect())
            .collect();
        let hi: Vec<Vec<f64>> = objects
            .iter()
            .map(|b| b.sides.iter().map(|s| s.hi.to_f64()).collect())
            .collect();
        let m = lo
            .iter()
            .chain(&hi)
            .flatten()
            .fold(0.0f64, |acc, x| acc.max(x.abs()));
        let d = objects.first().map_or(1, Cuboid::dim) as f64;
        let dsq = delta_sq.to_f64();
        let eps = f64::EPSILON;
        let tol = 64.0 * (d + d * d) * m * m * eps + 4.0 * dsq * eps;
        let enabled = S::EXACT
            && m.is_finite()
            && m < 1e100
            && (m == 0.0 || m > 1e-100)
            && dsq.is_normal()
            && tol.is_finite();
        Approx {
            lo,
            hi,
            delta_sq: dsq,
            tol,
            enabled,
        }
    }

    fn dist_sq(&self, i: usize, j: usize) -> f64 {
        (0..self.lo[i].len())
            .map(|c| {
                let g = (self.lo[j][c] - self.hi[i][c])
                    .max(self.lo[i][c] - self.hi[j][c])
                    .max(0.0);
                g * g
            })
            .sum()
    }

    fn max_dist_sq(&self, i: usize, j: usize) -> f64 {
        (0..self.lo[i].len())
            .map(|c| {
                let l = (self.hi[j][c] - self.lo[i][c]).max(self.hi[i][c] - self.lo[j][c]);
                l * l
            })
            .sum()
    }
}

fn adjacency<S: Scalar>(objects: &[Cuboid<S>], delta_sq: &S, approx: &Approx) -> Vec<(usize, usize)> {
    let n = objects.len();
    if n < 2 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        objects[a].sides[0]
            .lo
            .partial_cmp(&objects[b].sides[0].lo)
            .unwrap_or(Ordering::Equal)
    });
    let close = |i: usize, j: usize| -> bool {
        if approx.enabled {
            let f = approx.dist_sq(i, j);
            if f < approx.delta_sq - approx.tol {
                return true;
            }
            if f > approx.delta_sq + approx.tol {
                return false;
            }
        }
        objects[i].dist_sq(&objects[j]) <= *delta_sq
    };
    // The first-coordinate gap alone exceeds delta; it only grows along
    // `order`.
    let beyond = |i: usize, j: usize| -> bool {
        if approx.enabled {
            let g = approx.lo[j][0] - approx.hi[i][0];
            return g > 0.0 && g * g > approx.delta_sq + approx.tol;
        }
        let g = objects[j].sides[0].lo.clone() - objects[i].sides[0].hi.clone();
        g.is_positive() && g.clone() * g > *delta_sq
    };
    (0..n)
        .into_par_iter()
        .map(|pos| {
            let i = order[pos];
            let mut out = Vec::new();
            for &j in &order[pos + 1..] {
                if beyond(i, j) {
                    break;
                }
                if close(i, j) {
                    out.push((i, j));
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Exact squared diameter of a union of boxes: the largest corner-to-corner
/// distance over all pairs in the block.
fn block_diam_sq<S: Scalar>(objects: &[Cuboid<S>], block: &[usize], approx: &Approx) -> S {
    if block.len() == 1 {
        return objects[block[0]].diam_sq();
    }
    if objects[block[0]].dim() == 1 {
        let lo = block
            .iter()
            .map(|&i| objects[i].sides[0].lo.clone())
            .reduce(S::min_of)
            .expect("non-empty block");
        let hi = block
            .iter()
            .map(|&i| objects[i].sides[0].hi.clone())
            .reduce(S::max_of)
            .expect("non-empty block");
        let l = hi - lo;
        return l.clone() * l;
    }
    if !approx.enabled {
        let mut best = S::zero();
        for (p, &i) in block.iter().enumerate() {
            for &j in &block[p..] {
                best = S::max_of(best, objects[i].max_dist_sq(&objects[j]));
            }
        }
        return best;
    }

    // Bound each box's reach by its farthest distance to the block's hull,
    // visit boxes in decreasing reach, and stop once no pair can compete.
    let d = approx.lo[block[0]].len();
    let hull_lo: Vec<f64> = (0..d)
        .map(|c| block.iter().map(|&i| approx.lo[i][c]).fold(f64::INFINITY, f64::min))
        .collect();
    let hull_hi: Vec<f64> = (0..d)
        .map(|c| block.iter().map(|&i| approx.hi[i][c]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let reach = |i: usize| -> f64 {
        (0..d)
            .map(|c| {
                let l = (hull_hi[c] - approx.lo[i][c]).max(approx.hi[i][c] - hull_lo[c]);
                l * l
            })
            .sum()
    };
    let mut ranked: Vec<(f64, usize)> = block.iter().map(|&i| (reach(i), i)).collect();
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    let mut best = 0.0f64;
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (p, &(ra, i)) in ranked.iter().enumerate() {
        if ra < best - approx.tol {
            break;
        }
        for &(rb, j) in &ranked[p..] {
            if rb < best - approx.tol {
                break;
            }
            let f = approx.max_dist_sq(i, j);
            if f >= best - approx.tol {
                candidates.push((f, i, j));
                best = best.max(f);
            }
        }
    }
    candidates
        .into_iter()
        .filter(|&(f, _, _)| f >= best - approx.tol)
        .map(|(_, i, j)| objects[i].max_dist_sq(&objects[j]))
        .reduce(S::max_of)
        .expect("at least one candidate pair")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ifs::Interval;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn line(xs: &[(i64, i64)]) -> PointSet<Rational> {
        PointSet::new(xs.iter().map(|&(p, d)| vec![q(p, d)]).collect()).unwrap()
    }

    #[test]
    fn points_on_a_line() {
        let pts = line(&[(0, 1), (1, 20), (1, 10), (1, 2)]);
        let part = point_components(&pts, &q(3, 50)).unwrap();
        assert_eq!(part.blocks, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(part.diam_sq, vec![q(1, 100), q(0, 1)]);
    }

    #[test]
    fn duplicates_are_dropped() {
        let pts = line(&[(0, 1), (1, 2), (2, 4)]);
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn single_object() {
        let b = Cuboid::new(vec![Interval::new(q(0, 1), q(1, 3)), Interval::new(q(0, 1), q(1, 6))]);
        let part = delta_components(std::slice::from_ref(&b), &q(1, 1000)).unwrap();
        assert_eq!(part.len(), 1);
        assert_eq!(part.max_diam_sq(), b.diam_sq());
    }

    #[test]
    fn rejects_non_positive_delta() {
        let pts = line(&[(0, 1)]);
        assert!(matches!(
            point_components(&pts, &q(0, 1)),
            Err(Error::NonPositiveDelta(_))
        ));
        assert!(matches!(
            point_components(&pts, &q(-1, 2)),
            Err(Error::NonPositiveDelta(_))
        ));
    }

    #[test]
    fn lg5_depth_one_boxes() {
        let boxes = fixtures::lg5().cylinders(1, 100).unwrap();
        let part = delta_components(&boxes, &q(1, 10)).unwrap();
        assert_eq!(part.blocks, vec![vec![0], vec![1], vec![2], vec![3], vec![4]]);
        let part = delta_components(&boxes, &q(1, 6)).unwrap();
        assert_eq!(part.blocks, vec![vec![0, 2], vec![1, 3], vec![4]]);
        let part = delta_components(&boxes, &q(1, 5)).unwrap();
        assert_eq!(part.blocks, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn diameter_spans_corners() {
        let a = Cuboid::new(vec![Interval::new(q(0, 1), q(1, 4)), Interval::new(q(0, 1), q(1, 4))]);
        let b = Cuboid::new(vec![Interval::new(q(1, 4), q(1, 2)), Interval::new(q(1, 4), q(1, 2))]);
        let part = delta_components(&[a, b], &q(1, 100)).unwrap();
        assert_eq!(part.len(), 1);
        assert_eq!(part.max_diam_sq(), q(1, 2));
        let (lo, hi) = part.diam_bracket(0, 6);
        assert!(lo.clone() * lo <= q(1, 2) && q(1, 2) <= hi.clone() * hi);
    }

    #[test]
    fn refinement() {
        let pts = line(&[(0, 1), (1, 10), (3, 10), (1, 1)]);
        let fine = point_components(&pts, &q(1, 10)).unwrap();
        let coarse = point_components(&pts, &q(1, 5)).unwrap();
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
    }
}
