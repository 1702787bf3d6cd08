use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ifs::Cuboid;
use crate::scalar::Scalar;

use super::partition::{delta_components_sq, PointSet};

/// Looks for distinct points `x_0, ..., x_n` with
/// `|x_i - x_{i+1}| <= delta0 * |x_0 - x_n|` for every step.
///
/// Returns the indices of one such sequence, or `None` when none exists.
pub fn delta0_sequence_exists<S: Scalar>(points: &PointSet<S>, delta0: &S) -> Result<Option<Vec<usize>>> {
    if !delta0.is_positive() {
        return Err(Error::NonPositiveDelta(delta0.to_string()));
    }
    delta0_sequence_exists_sq(points, &(delta0.clone() * delta0.clone()))
}

/// As [`delta0_sequence_exists`], with the constant given as `delta0^2`.
pub fn delta0_sequence_exists_sq<S: Scalar>(
    points: &PointSet<S>,
    delta0_sq: &S,
) -> Result<Option<Vec<usize>>> {
    if !delta0_sq.is_positive() {
        return Err(Error::NonPositiveDelta(format!("sqrt({delta0_sq})")));
    }
    let n = points.len();
    if n < 2 {
        return Err(Error::Components(format!(
            "a sequence needs at least 2 distinct points, got {n}"
        )));
    }
    let dist: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| points.dist_sq(i, j)).collect())
        .collect();

    // The relation is symmetric, so unordered endpoint pairs suffice.
    for start in 0..n {
        for end in start + 1..n {
            let step_sq = delta0_sq.clone() * dist[start][end].clone();
            if let Some(path) = chain(&dist, start, end, &step_sq) {
                return Ok(Some(path));
            }
        }
    }
    Ok(None)
}

/// Shortest chain from `start` to `end` with squared steps `<= step_sq`.
fn chain<S: Scalar>(dist: &[Vec<S>], start: usize, end: usize, step_sq: &S) -> Option<Vec<usize>> {
    let n = dist.len();
    let mut prev = vec![usize::MAX; n];
    prev[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if u == end {
            let mut path = vec![end];
            let mut v = end;
            while v != start {
                v = prev[v];
                path.push(v);
            }
            path.reverse();
            return Some(path);
        }
        for v in 0..n {
            if prev[v] == usize::MAX && dist[u][v] <= *step_sq {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Distinct positive squared distances between objects, ascending. The
/// component structure can only change at these thresholds.
pub fn critical_deltas_sq<S: Scalar>(objects: &[Cuboid<S>]) -> Vec<S> {
    let mut out: Vec<S> = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        for b in &objects[i + 1..] {
            let d = a.dist_sq(b);
            if d.is_positive() {
                out.push(d);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    out.dedup();
    out
}

/// Largest `diam(U)^2 / delta^2` over the components at every given
/// squared threshold.
pub fn max_ratio_sq<S: Scalar>(objects: &[Cuboid<S>], deltas_sq: &[S]) -> Result<S> {
    let mut best = S::zero();
    for d in deltas_sq {
        let part = delta_components_sq(objects, d)?;
        best = S::max_of(best, part.max_diam_sq() / d.clone());
    }
    Ok(best)
}

/// Exact `sup_{delta > 0} max diam(U)^2 / delta^2` for a finite point set.
///
/// The partition is constant between consecutive critical thresholds, so
/// the supremum is attained at one of them.
pub fn uniform_constant_sq<S: Scalar>(points: &PointSet<S>) -> Result<S> {
    let objects = points.as_cuboids();
    max_ratio_sq(&objects, &critical_deltas_sq(&objects))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn line(xs: &[(i64, i64)]) -> PointSet<Rational> {
        PointSet::new(xs.iter().map(|&(p, d)| vec![q(p, d)]).collect()).unwrap()
    }

    #[test]
    fn evenly_spaced_chain() {
        let pts = line(&[(0, 1), (3, 10), (3, 5), (1, 1)]);
        let seq = delta0_sequence_exists(&pts, &q(2, 5)).unwrap().unwrap();
        assert_eq!(seq, vec![0, 1, 2, 3]);
    }

    #[test]
    fn two_points() {
        let pts = line(&[(0, 1), (1, 1)]);
        assert_eq!(delta0_sequence_exists(&pts, &q(1, 2)).unwrap(), None);
        assert_eq!(delta0_sequence_exists(&pts, &q(1, 1)).unwrap(), Some(vec![0, 1]));
        assert_eq!(delta0_sequence_exists(&pts, &q(3, 1)).unwrap(), Some(vec![0, 1]));
    }

    #[test]
    fn needs_two_points() {
        let pts = line(&[(1, 2), (1, 2)]);
        assert!(matches!(
            delta0_sequence_exists(&pts, &q(1, 2)),
            Err(Error::Components(_))
        ));
    }

    #[test]
    fn critical_values_and_supremum() {
        let pts = line(&[(0, 1), (1, 10), (1, 1)]);
        let crit = critical_deltas_sq(&pts.as_cuboids());
        assert_eq!(crit, vec![q(1, 100), q(81, 100), q(1, 1)]);
        // At delta = 1/10 the block {0, 1/10} has ratio 1; at delta = 9/10
        // everything merges, ratio 1/(9/10).
        assert_eq!(uniform_constant_sq(&pts).unwrap(), q(100, 81));
    }
}
