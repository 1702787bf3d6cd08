use crate::error::{Error, Result};
use crate::ifs::Cuboid;
use crate::scalar::{pow, Scalar};

use super::chains::critical_deltas_sq;
use super::partition::delta_components_sq;

#[derive(Debug, Clone, PartialEq)]
pub struct UnionBoundReport<S> {
    /// `(9C)^(2^(n-1)) / 9` for `n` sets.
    pub constant: S,
    /// Number of thresholds examined in `[min delta, max delta]`.
    pub checked: usize,
    /// Largest `diam(U)^2 / delta^2` seen on the union.
    pub worst_ratio_sq: S,
    pub holds: bool,
}

/// Checks that the union of `n` sets, each with all `delta`-components of
/// diameter at most `C * delta`, has components of diameter at most
/// `(9C)^(2^(n-1)) / 9 * delta`.
///
/// Both hypothesis and conclusion are tested on the whole range
/// `[min deltas, max deltas]`: besides the supplied values, every critical
/// threshold inside the range is visited, which makes the check exact.
pub fn check_union_bound<S: Scalar>(
    sets: &[Vec<Cuboid<S>>],
    deltas: &[S],
    c: &S,
) -> Result<UnionBoundReport<S>> {
    if sets.is_empty() || sets.iter().any(Vec::is_empty) {
        return Err(Error::Components("union bound needs non-empty sets".into()));
    }
    if *c < S::one() {
        return Err(Error::Components(format!("constant C = {c} must be at least 1")));
    }
    if let Some(d) = deltas.iter().find(|d| !d.is_positive()) {
        return Err(Error::NonPositiveDelta(d.to_string()));
    }
    let lo = deltas.iter().cloned().reduce(S::min_of).ok_or_else(|| {
        Error::Components("union bound needs at least one delta".into())
    })?;
    let hi = deltas.iter().cloned().reduce(S::max_of).expect("non-empty");
    let (lo_sq, hi_sq) = (lo.clone() * lo, hi.clone() * hi);
    let thresholds = |objects: &[Cuboid<S>]| -> Vec<S> {
        let mut out: Vec<S> = deltas.iter().map(|d| d.clone() * d.clone()).collect();
        out.extend(
            critical_deltas_sq(objects)
                .into_iter()
                .filter(|t| *t >= lo_sq && *t <= hi_sq),
        );
        out.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
        out.dedup();
        out
    };

    let c_sq = c.clone() * c.clone();
    for (k, set) in sets.iter().enumerate() {
        for t in thresholds(set) {
            let part = delta_components_sq(set, &t)?;
            if part.max_diam_sq() > c_sq.clone() * t.clone() {
                return Err(Error::UnionPrecondition {
                    set: k,
                    delta_sq: t.to_string(),
                });
            }
        }
    }

    let nine = S::from_int(9);
    let constant = pow(&(nine.clone() * c.clone()), 1usize << (sets.len() - 1)) / nine;
    let k_sq = constant.clone() * constant.clone();
    let union: Vec<Cuboid<S>> = sets.iter().flatten().cloned().collect();
    let ts = thresholds(&union);
    let mut worst = S::zero();
    for t in &ts {
        let part = delta_components_sq(&union, t)?;
        worst = S::max_of(worst, part.max_diam_sq() / t.clone());
    }
    Ok(UnionBoundReport {
        holds: worst <= k_sq,
        constant,
        checked: ts.len(),
        worst_ratio_sq: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn two_points() {
        let sets = vec![vec![Cuboid::point(&[q(0, 1)])], vec![Cuboid::point(&[q(1, 1)])]];
        let r = check_union_bound(&sets, &[q(1, 2)], &q(1, 1)).unwrap();
        assert!(r.holds);
        assert_eq!(r.constant, q(9, 1));
        assert_eq!(r.worst_ratio_sq, q(0, 1));
    }

    #[test]
    fn single_set_keeps_its_constant() {
        let sets = vec![vec![Cuboid::point(&[q(0, 1)]), Cuboid::point(&[q(1, 1)])]];
        let r = check_union_bound(&sets, &[q(1, 4), q(2, 1)], &q(1, 1)).unwrap();
        assert_eq!(r.constant, q(1, 1));
        assert!(r.holds);
    }

    #[test]
    fn precondition_is_reported_separately() {
        // At delta = 1/2 the chain 0, 1/2, 1 has diameter 1 > 1 * 1/2.
        let set: Vec<_> = [q(0, 1), q(1, 2), q(1, 1)].iter().map(|x| Cuboid::point(std::slice::from_ref(x))).collect();
        let err = check_union_bound(&[set], &[q(1, 2)], &q(1, 1)).unwrap_err();
        assert!(matches!(err, Error::UnionPrecondition { set: 0, .. }));
    }
}
