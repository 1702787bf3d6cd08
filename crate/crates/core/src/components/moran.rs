use crate::error::{Error, Result};
use crate::ifs::{AffineMap, Interval};
use crate::scalar::{usize_scalar, Scalar};
use crate::tree::FiberIfs;

/// A finite family `F_0, ..., F_{p-1}` of simple IFS on `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleIfsFamily<S> {
    members: Vec<Vec<AffineMap<S>>>,
}

impl<S: Scalar> SimpleIfsFamily<S> {
    /// Each member is sorted by offset and must map `[0,1]` into itself with
    /// pairwise disjoint open images.
    pub fn new(members: Vec<Vec<AffineMap<S>>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Components("family has no members".into()));
        }
        let mut sorted = Vec::with_capacity(members.len());
        for (j, mut maps) in members.into_iter().enumerate() {
            if maps.is_empty() {
                return Err(Error::Components(format!("member {j} has no maps")));
            }
            maps.sort_by(|a, b| a.offset().partial_cmp(b.offset()).expect("comparable"));
            let images: Vec<Interval<S>> = maps.iter().map(AffineMap::unit_image).collect();
            if !maps.iter().all(AffineMap::is_unit_preserving)
                || images.windows(2).any(|w| w[0].hi > w[1].lo)
            {
                return Err(Error::Components(format!("member {j} is not a simple IFS of [0,1]")));
            }
            sorted.push(maps);
        }
        Ok(SimpleIfsFamily { members: sorted })
    }

    pub fn from_fibers(fibers: &[FiberIfs<S>]) -> Result<Self> {
        Self::new(fibers.iter().map(|f| f.labels.clone()).collect())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, j: usize) -> &[AffineMap<S>] {
        &self.members[j]
    }

    pub fn alpha(&self, j: usize) -> S {
        self.ratios(j).reduce(S::min_of).expect("non-empty member")
    }

    pub fn beta(&self, j: usize) -> S {
        self.ratios(j).reduce(S::max_of).expect("non-empty member")
    }

    /// Total length of `F_j([0,1])`.
    pub fn measure(&self, j: usize) -> S {
        self.ratios(j).fold(S::zero(), |acc, r| acc + r)
    }

    pub fn count(&self, j: usize) -> usize {
        self.members[j].len()
    }

    /// Longest gap of `F_j([0,1]) ∪ {0, 1}`.
    pub fn biggest_gap(&self, j: usize) -> S {
        let images: Vec<Interval<S>> = self.members[j].iter().map(AffineMap::unit_image).collect();
        let mut best = images[0].lo.clone();
        for w in images.windows(2) {
            best = S::max_of(best, w[1].lo.clone() - w[0].hi.clone());
        }
        S::max_of(best, S::one() - images[images.len() - 1].hi.clone())
    }

    /// The attractor of `F_j` is all of `[0,1]`.
    pub fn tiles(&self, j: usize) -> bool {
        self.measure(j) == S::one()
    }

    pub fn alpha_star(&self) -> S {
        (0..self.len()).map(|j| self.alpha(j)).reduce(S::min_of).expect("non-empty")
    }

    pub fn beta_star(&self) -> S {
        (0..self.len()).map(|j| self.beta(j)).reduce(S::max_of).expect("non-empty")
    }

    pub fn l_star(&self) -> S {
        (0..self.len()).map(|j| self.measure(j)).reduce(S::max_of).expect("non-empty")
    }

    pub fn n_star(&self) -> usize {
        (0..self.len()).map(|j| self.count(j)).max().expect("non-empty")
    }

    /// `(1 - L*) / (N* + 2)`, a lower bound for every member's biggest gap.
    pub fn g_star(&self) -> S {
        (S::one() - self.l_star()) / usize_scalar(self.n_star() + 2)
    }

    fn ratios(&self, j: usize) -> impl Iterator<Item = S> + '_ {
        self.members[j].iter().map(|m| m.ratio().clone())
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&j| j >= self.len()) {
            Some(j) => Err(Error::Components(format!(
                "member index {j} out of range for a family of {}",
                self.len()
            ))),
            None => Ok(()),
        }
    }

    /// `F_j` applied to a sorted interval list; the result stays sorted.
    fn hutchinson(&self, j: usize, intervals: &[Interval<S>]) -> Vec<Interval<S>> {
        self.members[j]
            .iter()
            .flat_map(|m| intervals.iter().map(move |iv| m.image(iv)))
            .collect()
    }
}

/// `E_w = F_{w_1} o ... o F_{w_k}([0,1])` as its sorted basic intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct PreMoranSet<S> {
    pub word: Vec<usize>,
    pub intervals: Vec<Interval<S>>,
}

pub fn pre_moran_intervals<S: Scalar>(
    family: &SimpleIfsFamily<S>,
    word: &[usize],
    cap: usize,
) -> Result<PreMoranSet<S>> {
    if word.is_empty() {
        return Err(Error::Components("pre-Moran word must be non-empty".into()));
    }
    PreMoranSet::unit().prepend(family, word, cap)
}

impl<S: Scalar> PreMoranSet<S> {
    /// `[0,1]` itself, the set of the empty word.
    pub fn unit() -> Self {
        PreMoranSet {
            word: Vec::new(),
            intervals: vec![Interval::unit()],
        }
    }

    /// The set of `prefix ++ self.word`.
    pub fn prepend(&self, family: &SimpleIfsFamily<S>, prefix: &[usize], cap: usize) -> Result<Self> {
        family.check_word(prefix)?;
        let count = prefix
            .iter()
            .fold(self.intervals.len() as u128, |acc, &j| {
                acc.saturating_mul(family.count(j) as u128)
            });
        if count > cap as u128 {
            return Err(Error::ResourceCap {
                requested: count,
                cap,
            });
        }
        let mut intervals = self.intervals.clone();
        for &j in prefix.iter().rev() {
            intervals = family.hutchinson(j, &intervals);
        }
        let mut word = prefix.to_vec();
        word.extend_from_slice(&self.word);
        Ok(PreMoranSet { word, intervals })
    }

    /// Lengths of the `delta`-components, left to right.
    pub fn component_lengths(&self, delta: &S) -> Vec<S> {
        let mut out = Vec::new();
        let mut start = self.intervals[0].lo.clone();
        for w in self.intervals.windows(2) {
            if w[1].lo.clone() - w[0].hi.clone() > *delta {
                out.push(w[0].hi.clone() - start);
                start = w[1].lo.clone();
            }
        }
        out.push(self.intervals[self.intervals.len() - 1].hi.clone() - start);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoranReport<S> {
    pub admissible: bool,
    /// Smallest admissible delta, `(g*/alpha*) * prod beta_{w_j}`.
    pub threshold: S,
    /// `(2 / (g* alpha*) + 1) * delta`.
    pub bound: S,
    pub max_component_diam: S,
    pub holds: bool,
}

/// Compares the largest `delta`-component of a pre-Moran set with the
/// linear bound that holds once `delta` is admissible.
pub fn check_moran_bound<S: Scalar>(
    family: &SimpleIfsFamily<S>,
    word: &[usize],
    delta: &S,
    cap: usize,
) -> Result<MoranReport<S>> {
    let mut reports = check_moran_bounds(family, word, std::slice::from_ref(delta), cap)?;
    Ok(reports.pop().expect("one delta"))
}

/// [`check_moran_bound`] over a grid of scales, building the set once.
pub fn check_moran_bounds<S: Scalar>(
    family: &SimpleIfsFamily<S>,
    word: &[usize],
    deltas: &[S],
    cap: usize,
) -> Result<Vec<MoranReport<S>>> {
    if let Some(d) = deltas.iter().find(|d| !d.is_positive()) {
        return Err(Error::NonPositiveDelta(d.to_string()));
    }
    if let Some(j) = (0..family.len()).find(|&j| family.tiles(j)) {
        return Err(Error::Components(format!("member {j} tiles [0,1]")));
    }
    let set = pre_moran_intervals(family, word, cap)?;
    let g = family.g_star();
    let alpha = family.alpha_star();
    let threshold = word
        .iter()
        .fold(g.clone() / alpha.clone(), |acc, &j| acc * family.beta(j));
    let slope = S::from_int(2) / (g * alpha) + S::one();
    Ok(deltas
        .iter()
        .map(|delta| {
            let bound = slope.clone() * delta.clone();
            let max_component_diam = set
                .component_lengths(delta)
                .into_iter()
                .reduce(S::max_of)
                .expect("non-empty set");
            MoranReport {
                admissible: *delta >= threshold,
                threshold: threshold.clone(),
                holds: max_component_diam <= bound,
                bound,
                max_component_diam,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn quarters() -> SimpleIfsFamily<Rational> {
        let maps = vec![
            AffineMap::new(q(1, 4), q(0, 1)).unwrap(),
            AffineMap::new(q(1, 4), q(3, 4)).unwrap(),
        ];
        SimpleIfsFamily::new(vec![maps]).unwrap()
    }

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval<Rational> {
        Interval::new(q(a.0, a.1), q(b.0, b.1))
    }

    #[test]
    fn family_constants() {
        let f = quarters();
        assert_eq!(f.alpha_star(), q(1, 4));
        assert_eq!(f.beta_star(), q(1, 4));
        assert_eq!(f.l_star(), q(1, 2));
        assert_eq!(f.n_star(), 2);
        assert_eq!(f.g_star(), q(1, 8));
        assert_eq!(f.biggest_gap(0), q(1, 2));
        assert!(!f.tiles(0));
    }

    #[test]
    fn one_and_two_applications() {
        let f = quarters();
        let e = pre_moran_intervals(&f, &[0], 100).unwrap();
        assert_eq!(e.intervals, vec![iv((0, 1), (1, 4)), iv((3, 4), (1, 1))]);
        let e = pre_moran_intervals(&f, &[0, 0], 100).unwrap();
        assert_eq!(
            e.intervals,
            vec![
                iv((0, 1), (1, 16)),
                iv((3, 16), (1, 4)),
                iv((3, 4), (13, 16)),
                iv((15, 16), (1, 1))
            ]
        );
    }

    #[test]
    fn moran_bound_examples() {
        let f = quarters();
        let r = check_moran_bound(&f, &[0, 0], &q(1, 32), 100).unwrap();
        assert!(r.admissible);
        assert_eq!(r.threshold, q(1, 32));
        assert_eq!(r.bound, q(65, 32));
        assert_eq!(r.max_component_diam, q(1, 16));
        assert!(r.holds);

        let r = check_moran_bound(&f, &[0], &q(1, 1), 100).unwrap();
        assert_eq!(r.bound, q(65, 1));
        assert!(r.admissible && r.holds);

        let r = check_moran_bound(&f, &[0, 0, 0], &q(1, 1000), 100).unwrap();
        assert!(!r.admissible);
    }

    #[test]
    fn rejects_tiling_members_and_bad_words() {
        let halves = vec![
            AffineMap::new(q(1, 2), q(0, 1)).unwrap(),
            AffineMap::new(q(1, 2), q(1, 2)).unwrap(),
        ];
        let f = SimpleIfsFamily::new(vec![halves]).unwrap();
        assert!(f.tiles(0));
        assert!(check_moran_bound(&f, &[0], &q(1, 2), 100).is_err());
        assert!(pre_moran_intervals(&quarters(), &[1], 100).is_err());
        assert!(pre_moran_intervals(&quarters(), &[], 100).is_err());
        assert!(matches!(
            pre_moran_intervals(&quarters(), &[0; 8], 100),
            Err(Error::ResourceCap { requested: 256, cap: 100 })
        ));
    }

    #[test]
    fn overlapping_members_are_rejected() {
        let maps = vec![
            AffineMap::new(q(1, 2), q(0, 1)).unwrap(),
            AffineMap::new(q(1, 2), q(1, 4)).unwrap(),
        ];
        assert!(SimpleIfsFamily::new(vec![maps]).is_err());
    }
}
