use std::fmt;

use crate::scalar::Scalar;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Interval<S> {
    /// # Panics
    ///
    /// Panics if `lo > hi`.
    pub fn new(lo: S, hi: S) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn unit() -> Self {
        Interval::new(S::zero(), S::one())
    }

    pub fn point(x: S) -> Self {
        Interval::new(x.clone(), x)
    }

    pub fn len(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Whether the open interiors intersect. Shared endpoints do not count.
    pub fn interiors_overlap(&self, other: &Self) -> bool {
        !self.is_degenerate()
            && !other.is_degenerate()
            && self.lo < other.hi
            && other.lo < self.hi
    }

    /// Distance between the two sets; zero when they meet.
    pub fn gap(&self, other: &Self) -> S {
        let left = other.lo.clone() - self.hi.clone();
        let right = self.lo.clone() - other.hi.clone();
        S::max_of(S::zero(), S::max_of(left, right))
    }
}

impl<S: fmt::Display> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Axis-aligned box, a product of closed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Cuboid<S> {
    pub sides: Vec<Interval<S>>,
}

impl<S: Scalar> Cuboid<S> {
    pub fn new(sides: Vec<Interval<S>>) -> Self {
        Cuboid { sides }
    }

    pub fn unit(dim: usize) -> Self {
        Cuboid::new(vec![Interval::unit(); dim])
    }

    pub fn point(coords: &[S]) -> Self {
        Cuboid::new(coords.iter().cloned().map(Interval::point).collect())
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// Shortest side length.
    pub fn width(&self) -> S {
        self.sides
            .iter()
            .map(Interval::len)
            .reduce(S::min_of)
            .unwrap_or_else(S::zero)
    }

    /// Squared Euclidean distance between the two boxes as sets.
    pub fn dist_sq(&self, other: &Self) -> S {
        self.sides
            .iter()
            .zip(&other.sides)
            .map(|(a, b)| {
                let g = a.gap(b);
                g.clone() * g
            })
            .fold(S::zero(), |acc, x| acc + x)
    }

    /// Squared diameter (the main diagonal).
    pub fn diam_sq(&self) -> S {
        self.sides
            .iter()
            .map(|s| {
                let l = s.len();
                l.clone() * l
            })
            .fold(S::zero(), |acc, x| acc + x)
    }

    /// Largest squared distance between a point of `self` and a point of
    /// `other`.
    pub fn max_dist_sq(&self, other: &Self) -> S {
        self.sides
            .iter()
            .zip(&other.sides)
            .map(|(a, b)| {
                let l = S::max_of(b.hi.clone() - a.lo.clone(), a.hi.clone() - b.lo.clone());
                l.clone() * l
            })
            .fold(S::zero(), |acc, x| acc + x)
    }

    pub fn interiors_overlap(&self, other: &Self) -> bool {
        self.sides
            .iter()
            .zip(&other.sides)
            .all(|(a, b)| a.interiors_overlap(b))
    }

    pub fn contains_cuboid(&self, other: &Self) -> bool {
        self.sides
            .iter()
            .zip(&other.sides)
            .all(|(a, b)| a.contains_interval(b))
    }

    /// Drops coordinates beyond `len`.
    pub fn truncate(&self, len: usize) -> Self {
        Cuboid::new(self.sides[..len].to_vec())
    }

    /// Appends `side` as a new last coordinate.
    pub fn extend(&self, side: Interval<S>) -> Self {
        let mut sides = self.sides.clone();
        sides.push(side);
        Cuboid::new(sides)
    }
}

impl<S: fmt::Display> fmt::Display for Cuboid<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, side) in self.sides.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{side}")?;
        }
        Ok(())
    }
}
