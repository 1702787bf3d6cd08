use crate::error::{Error, Result};
use crate::ifs::Interval;
use crate::scalar::{pow, Scalar};

use super::tree::CantorTree;

/// A node `F_sigma`: either a whole `J_alpha` or the hull of the
/// consecutive children `J_{alpha k1}, ..., J_{alpha k2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Whole(Vec<usize>),
    Range(Vec<usize>, usize, usize),
}

impl Piece {
    fn range(alpha: &[usize], k1: usize, k2: usize) -> Piece {
        if k1 == k2 {
            let mut w = alpha.to_vec();
            w.push(k1);
            Piece::Whole(w)
        } else {
            Piece::Range(alpha.to_vec(), k1, k2)
        }
    }

    fn interval<S: Scalar>(&self, tree: &CantorTree<S>) -> Interval<S> {
        match self {
            Piece::Whole(w) => tree.interval(w),
            Piece::Range(alpha, k1, k2) => {
                let mut w = alpha.clone();
                w.push(*k1);
                let lo = tree.interval(&w).lo;
                *w.last_mut().expect("non-empty") = *k2;
                Interval::new(lo, tree.interval(&w).hi)
            }
        }
    }

    /// Splits off the leftmost constituent cylinder.
    fn children(&self, m: usize) -> (Piece, Piece) {
        match self {
            Piece::Whole(alpha) => {
                let mut first = alpha.clone();
                first.push(0);
                (Piece::Whole(first), Piece::range(alpha, 1, m - 1))
            }
            Piece::Range(alpha, k1, k2) => {
                let mut first = alpha.clone();
                first.push(*k1);
                (Piece::Whole(first), Piece::range(alpha, k1 + 1, *k2))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryCantorTree<S> {
    pub depth: usize,
    /// `T = L / r*`.
    pub t: S,
    /// `levels[n]` lists `F_sigma` for `|sigma| = n`, left to right.
    pub levels: Vec<Vec<Interval<S>>>,
    /// Nodes where `|F_{sigma 0}| / |F_{sigma 1}|` leaves `[1/T, T]`.
    pub balance_violations: usize,
    /// `gap_ratio_table[n]` is the minimum over `|sigma| = n` of
    /// `|F_{sigma 0}| / dist(F_{sigma 0}, F_{sigma 1})`, ignoring touching
    /// pairs; `None` when every pair at that level touches.
    pub gap_ratio_table: Vec<Option<S>>,
    /// `(r*/L) gamma^n` lower bounds for the table, `gamma = min_j phi'_{j,1}/phi'_{j,2}`.
    pub gap_ratio_bounds: Vec<S>,
}

impl<S: Scalar> BinaryCantorTree<S> {
    pub fn balanced(&self) -> bool {
        self.balance_violations == 0
    }

    /// Levels where the minimum gap ratio falls below its bound.
    pub fn gap_ratio_failures(&self) -> Vec<usize> {
        self.gap_ratio_table
            .iter()
            .zip(&self.gap_ratio_bounds)
            .enumerate()
            .filter(|(_, (v, b))| v.as_ref().is_some_and(|v| v < *b))
            .map(|(n, _)| n)
            .collect()
    }
}

/// Regroups the `m`-ary construction into a binary one by repeatedly
/// splitting off the leftmost cylinder, down to `depth` binary levels.
pub fn to_binary_tree<S: Scalar>(tree: &CantorTree<S>, depth: usize, cap: usize) -> Result<BinaryCantorTree<S>> {
    let sys = tree.system();
    let consts = tree.constants();
    let m = sys.m();
    if m < 2 {
        return Err(Error::Cantor("binary conversion needs at least two maps".into()));
    }
    let gamma = sys
        .gamma()
        .ok_or_else(|| Error::Cantor("binary conversion needs dimension at least 2".into()))?;
    let nodes = 1u128.checked_shl(depth as u32 + 1).unwrap_or(u128::MAX);
    if nodes > cap as u128 {
        return Err(Error::ResourceCap {
            requested: nodes,
            cap,
        });
    }
    let t = consts.l.clone() / sys.r_star.clone();
    let base = sys.r_star.clone() / consts.l.clone();

    let mut pieces = vec![Piece::Whole(Vec::new())];
    let mut levels = vec![vec![pieces[0].interval(tree)]];
    let mut balance_violations = 0;
    let mut gap_ratio_table = Vec::with_capacity(depth);
    let mut gap_ratio_bounds = Vec::with_capacity(depth);
    for n in 0..depth {
        let mut next = Vec::with_capacity(2 * pieces.len());
        let mut intervals = Vec::with_capacity(2 * pieces.len());
        let mut best: Option<S> = None;
        for piece in &pieces {
            let (left, right) = piece.children(m);
            let (f0, f1) = (left.interval(tree), right.interval(tree));
            let (l0, l1) = (f0.len(), f1.len());
            if sys.r_star.clone() * l1.clone() > consts.l.clone() * l0.clone()
                || sys.r_star.clone() * l0.clone() > consts.l.clone() * l1
            {
                balance_violations += 1;
            }
            let dist = f1.lo.clone() - f0.hi.clone();
            if dist.is_positive() {
                let ratio = l0 / dist;
                best = Some(match best {
                    Some(b) => S::min_of(b, ratio),
                    None => ratio,
                });
            }
            intervals.push(f0);
            intervals.push(f1);
            next.push(left);
            next.push(right);
        }
        gap_ratio_table.push(best);
        gap_ratio_bounds.push(base.clone() * pow(&gamma, n));
        levels.push(intervals);
        pieces = next;
    }
    Ok(BinaryCantorTree {
        depth,
        t,
        levels,
        balance_violations,
        gap_ratio_table,
        gap_ratio_bounds,
    })
}
