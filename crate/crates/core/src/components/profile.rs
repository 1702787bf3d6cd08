use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ifs::{validate_lg, SpongeIfs};
use crate::scalar::Scalar;

use super::partition::delta_components;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow<S> {
    pub delta: S,
    pub num_components: usize,
    pub max_diam_sq: S,
    /// `(max diam / delta)^2`.
    pub ratio_sq: S,
}

/// Largest component diameter of the depth-`depth` cylinder boxes at each
/// `delta`. Rows come back in the order of `deltas`.
pub fn component_diameter_profile<S: Scalar>(
    ifs: &SpongeIfs<S>,
    depth: usize,
    deltas: &[S],
    cap: usize,
) -> Result<Vec<ProfileRow<S>>> {
    let report = validate_lg(ifs);
    if !report.lg_type() {
        return Err(Error::NotLalleyGatzouras(report.summary()));
    }
    if depth == 0 {
        return Err(Error::Components("profile depth must be at least 1".into()));
    }
    if let Some(d) = deltas.iter().find(|d| !d.is_positive()) {
        return Err(Error::NonPositiveDelta(d.to_string()));
    }
    let boxes = ifs.cylinders(depth, cap)?;
    deltas
        .par_iter()
        .map(|delta| {
            let part = delta_components(&boxes, delta)?;
            let max_diam_sq = part.max_diam_sq();
            Ok(ProfileRow {
                delta: delta.clone(),
                num_components: part.len(),
                ratio_sq: max_diam_sq.clone() / (delta.clone() * delta.clone()),
                max_diam_sq,
            })
        })
        .collect()
}

/// Running maximum of the ratio, the empirical estimate of `M0^2`.
pub fn max_profile_ratio_sq<S: Scalar>(rows: &[ProfileRow<S>]) -> S {
    rows.iter()
        .map(|r| r.ratio_sq.clone())
        .reduce(S::max_of)
        .unwrap_or_else(S::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ifs::parse_ifs;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn single_map() {
        let ifs: SpongeIfs<Rational> = parse_ifs("dim 2\nmap 1/2 0 ; 1/3 0").unwrap();
        let rows = component_diameter_profile(&ifs, 2, &[q(1, 2), q(1, 8)], 100).unwrap();
        for r in &rows {
            assert_eq!(r.num_components, 1);
            assert_eq!(r.max_diam_sq, q(1, 16) + q(1, 81));
        }
        assert_eq!(rows[1].ratio_sq, (q(1, 16) + q(1, 81)) * q(64, 1));
    }

    #[test]
    fn guards() {
        let lg5 = fixtures::lg5();
        assert!(matches!(
            component_diameter_profile(&lg5, 9, &[q(1, 8)], 1000),
            Err(Error::ResourceCap { .. })
        ));
        assert!(matches!(
            component_diameter_profile(&fixtures::overlapping(), 1, &[q(1, 8)], 1000),
            Err(Error::NotLalleyGatzouras(_))
        ));
    }
}
