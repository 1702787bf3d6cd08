use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::ifs::{Cuboid, Interval, SpongeIfs};
use crate::scalar::Scalar;
use crate::tree::build_labeled_tree;

use super::moran::{pre_moran_intervals, SimpleIfsFamily};

/// The `delta`-approximate square along a word.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSquare<S> {
    pub cuboid: Cuboid<S>,
    /// `depths[j]` is the smallest `l` with `prod_{k <= l} ratio(e_k, j) < delta`.
    pub depths: Vec<usize>,
}

pub fn approx_square<S: Scalar>(ifs: &SpongeIfs<S>, word: &[usize], delta: &S) -> Result<ApproxSquare<S>> {
    if !delta.is_positive() {
        return Err(Error::NonPositiveDelta(delta.to_string()));
    }
    if let Some(&e) = word.iter().find(|&&e| e >= ifs.len()) {
        return Err(Error::SymbolOutOfRange {
            index: e,
            len: ifs.len(),
        });
    }
    let mut sides = Vec::with_capacity(ifs.dim());
    let mut depths = Vec::with_capacity(ifs.dim());
    for j in 0..ifs.dim() {
        let mut prod = S::one();
        let depth = word.iter().position(|&e| {
            prod = prod.clone() * ifs.map(e).coord(j).ratio().clone();
            prod < *delta
        });
        let Some(depth) = depth.map(|p| p + 1) else {
            return Err(Error::Components(format!(
                "word of length {} is too short: coordinate {j} never drops below delta = {delta}",
                word.len()
            )));
        };
        let side = word[..depth]
            .iter()
            .rev()
            .fold(Interval::unit(), |iv, &e| ifs.map(e).coord(j).image(&iv));
        sides.push(side);
        depths.push(depth);
    }
    Ok(ApproxSquare {
        cuboid: Cuboid::new(sides),
        depths,
    })
}

fn cmp_cuboids<S: Scalar>(a: &Cuboid<S>, b: &Cuboid<S>) -> Ordering {
    a.sides
        .iter()
        .zip(&b.sides)
        .map(|(x, y)| {
            x.lo.partial_cmp(&y.lo)
                .expect("comparable")
                .then(x.hi.partial_cmp(&y.hi).expect("comparable"))
        })
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Checks that the depth-`k` cylinders coincide with the products of the
/// depth-`k` cylinders of the projection onto the first `d - 1`
/// coordinates and the pre-Moran sets of the fiber family along the same
/// word.
pub fn check_product_decomposition<S: Scalar>(ifs: &SpongeIfs<S>, k: usize, cap: usize) -> Result<bool> {
    let d = ifs.dim();
    if d < 2 {
        return Err(Error::Components("product decomposition needs dimension at least 2".into()));
    }
    let tree = build_labeled_tree(ifs)?;
    let mut lhs = ifs.cylinders(k, cap)?;

    let proj = ifs.major_projection(d - 1)?;
    let fibers: Vec<_> = tree
        .level(d - 1)
        .iter()
        .map(|v| tree.fiber_ifs(v))
        .collect::<Result<_>>()?;
    let family = SimpleIfsFamily::from_fibers(&fibers)?;

    let mut rhs = Vec::with_capacity(lhs.len());
    let p = proj.len();
    let mut word = vec![0usize; k];
    loop {
        let base = proj.cylinder_box(&word)?;
        let fiber_part = if k == 0 {
            vec![Interval::unit()]
        } else {
            pre_moran_intervals(&family, &word, cap)?.intervals
        };
        rhs.extend(fiber_part.into_iter().map(|iv| base.extend(iv)));
        if rhs.len() > cap {
            return Err(Error::ResourceCap {
                requested: rhs.len() as u128,
                cap,
            });
        }
        // Odometer over (projected symbols)^k.
        let Some(pos) = word.iter().rposition(|&e| e + 1 < p) else {
            break;
        };
        word[pos] += 1;
        word[pos + 1..].iter_mut().for_each(|e| *e = 0);
    }

    lhs.sort_by(cmp_cuboids);
    rhs.sort_by(cmp_cuboids);
    lhs.dedup();
    rhs.dedup();
    Ok(lhs == rhs)
}
