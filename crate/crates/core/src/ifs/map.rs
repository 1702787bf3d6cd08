use std::fmt;

use crate::error::{Error, Result};
use crate::ifs::geometry::{Cuboid, Interval};
use crate::scalar::Scalar;

/// One-dimensional contraction `x -> ratio * x + offset` with `0 < ratio < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap<S> {
    ratio: S,
    offset: S,
}

impl<S: Scalar> AffineMap<S> {
    pub fn new(ratio: S, offset: S) -> Result<Self> {
        if !(ratio > S::zero() && ratio < S::one()) {
            return Err(Error::RatioOutOfRange {
                line: 0,
                ratio: ratio.to_string(),
            });
        }
        Ok(AffineMap { ratio, offset })
    }

    pub fn ratio(&self) -> &S {
        &self.ratio
    }

    pub fn offset(&self) -> &S {
        &self.offset
    }

    pub fn apply(&self, x: &S) -> S {
        self.ratio.clone() * x.clone() + self.offset.clone()
    }

    pub fn image(&self, interval: &Interval<S>) -> Interval<S> {
        Interval::new(self.apply(&interval.lo), self.apply(&interval.hi))
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        AffineMap {
            ratio: self.ratio.clone() * other.ratio.clone(),
            offset: self.apply(&other.offset),
        }
    }

    /// Image of `[0, 1]`.
    pub fn unit_image(&self) -> Interval<S> {
        Interval::new(self.offset.clone(), self.offset.clone() + self.ratio.clone())
    }

    /// Membership in the family of affine maps sending `[0,1]` into itself.
    pub fn is_unit_preserving(&self) -> bool {
        self.offset >= S::zero() && self.offset.clone() + self.ratio.clone() <= S::one()
    }

    pub fn fixed_point(&self) -> S {
        self.offset.clone() / (S::one() - self.ratio.clone())
    }
}

impl<S: fmt::Display> fmt::Display for AffineMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.ratio, self.offset)
    }
}

/// Diagonal affine map of `R^d`, one [`AffineMap`] per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMap<S> {
    coords: Vec<AffineMap<S>>,
}

impl<S: Scalar> DiagonalMap<S> {
    pub fn new(coords: Vec<AffineMap<S>>) -> Self {
        DiagonalMap { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[AffineMap<S>] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &AffineMap<S> {
        &self.coords[i]
    }

    pub fn ratios(&self) -> impl Iterator<Item = &S> + '_ {
        self.coords.iter().map(AffineMap::ratio)
    }

    pub fn apply(&self, point: &[S]) -> Vec<S> {
        self.coords.iter().zip(point).map(|(m, x)| m.apply(x)).collect()
    }

    pub fn image(&self, cuboid: &Cuboid<S>) -> Cuboid<S> {
        Cuboid::new(
            self.coords
                .iter()
                .zip(&cuboid.sides)
                .map(|(m, side)| m.image(side))
                .collect(),
        )
    }

    pub fn compose(&self, other: &Self) -> Self {
        DiagonalMap::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.compose(b))
                .collect(),
        )
    }

    /// Keeps the first `len` coordinates.
    pub fn truncate(&self, len: usize) -> Self {
        DiagonalMap::new(self.coords[..len].to_vec())
    }

    /// Keeps coordinates `from..`.
    pub fn tail(&self, from: usize) -> Self {
        DiagonalMap::new(self.coords[from..].to_vec())
    }

    pub fn is_unit_preserving(&self) -> bool {
        self.coords.iter().all(AffineMap::is_unit_preserving)
    }

    /// The unique fixed point, coordinate by coordinate.
    pub fn fixed_point(&self) -> Vec<S> {
        self.coords.iter().map(AffineMap::fixed_point).collect()
    }
}

impl<S: fmt::Display> fmt::Display for DiagonalMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn am(r: (i64, i64), o: (i64, i64)) -> AffineMap<Rational> {
        AffineMap::new(q(r.0, r.1), q(o.0, o.1)).unwrap()
    }

    #[test]
    fn rejects_non_contractions() {
        assert!(AffineMap::new(q(3, 2), q(0, 1)).is_err());
        assert!(AffineMap::new(q(1, 1), q(0, 1)).is_err());
        assert!(AffineMap::new(q(0, 1), q(0, 1)).is_err());
        assert!(AffineMap::new(q(-1, 2), q(0, 1)).is_err());
    }

    #[test]
    fn fixed_points() {
        // LG4 phi_0 and phi_3
        let phi0 = DiagonalMap::new(vec![am((1, 4), (0, 1)), am((1, 6), (0, 1))]);
        assert_eq!(phi0.fixed_point(), vec![q(0, 1), q(0, 1)]);
        let phi3 = DiagonalMap::new(vec![am((1, 6), (5, 6)), am((1, 9), (8, 9))]);
        assert_eq!(phi3.fixed_point(), vec![q(1, 1), q(1, 1)]);
        assert_eq!(am((1, 2), (1, 4)).fixed_point(), q(1, 2));
    }

    #[test]
    fn composition_matches_application() {
        let f = am((1, 3), (1, 2));
        let g = am((2, 5), (1, 7));
        let x = q(3, 11);
        assert_eq!(f.compose(&g).apply(&x), f.apply(&g.apply(&x)));
    }

    #[test]
    fn unit_preservation() {
        assert!(am((1, 2), (1, 2)).is_unit_preserving());
        assert!(!am((1, 2), (3, 5)).is_unit_preserving());
        assert!(!am((1, 2), (-1, 5)).is_unit_preserving());
    }
}
