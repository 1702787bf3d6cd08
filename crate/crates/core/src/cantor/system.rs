use crate::classify::attractor_is_unit_interval;
use crate::error::{Error, Result};
use crate::ifs::SpongeIfs;
use crate::scalar::Scalar;
use crate::tree::build_labeled_tree;

/// A system whose root fiber tiles `[0,1]` with all `m` maps and whose
/// other fibers are singletons, with its maps sorted left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialSystem<S> {
    pub base: SpongeIfs<S>,
    /// `base.map(k)` is input map `order[k]`.
    pub order: Vec<usize>,
    /// Fixed point of the leftmost map.
    pub a: Vec<S>,
    /// Fixed point of the rightmost map.
    pub b: Vec<S>,
    /// `a_points[j] = phi_j(a)`.
    pub a_points: Vec<Vec<S>>,
    /// `b_points[j] = phi_j(b)`.
    pub b_points: Vec<Vec<S>>,
    /// `deltas[j - 1] = a_j - b_{j-1}` for `j = 1..m`.
    pub deltas: Vec<Vec<S>>,
    /// First non-zero coordinate (0-based) of each delta, `None` when the
    /// delta vanishes.
    pub tau: Vec<Option<usize>>,
    /// Smallest first-coordinate ratio.
    pub r_star: S,
}

impl<S: Scalar> SpecialSystem<S> {
    pub fn m(&self) -> usize {
        self.base.len()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Paper-style index of `tau_j`: 1-based coordinate, or 0 when the
    /// delta vanishes.
    pub fn tau_index(&self, j: usize) -> usize {
        self.tau[j - 1].map_or(0, |c| c + 1)
    }

    /// `phi'_{word, coord}`, with the empty product equal to 1.
    pub fn deriv(&self, word: &[usize], coord: usize) -> S {
        word.iter().fold(S::one(), |acc, &e| {
            acc * self.base.map(e).coord(coord).ratio().clone()
        })
    }

    /// `phi'_{word, tau_j}`, zero when `tau_j` is undefined.
    pub fn tau_deriv(&self, word: &[usize], j: usize) -> S {
        match self.tau[j - 1] {
            Some(c) => self.deriv(word, c),
            None => S::zero(),
        }
    }

    /// `phi_word(p)`.
    pub fn apply_word(&self, word: &[usize], p: &[S]) -> Vec<S> {
        word.iter()
            .rev()
            .fold(p.to_vec(), |x, &e| self.base.map(e).apply(&x))
    }

    /// `min_j phi'_{j,1} / phi'_{j,2}`.
    pub fn gamma(&self) -> Option<S> {
        (self.dim() >= 2).then(|| {
            (0..self.m())
                .map(|j| {
                    let m = self.base.map(j);
                    m.coord(0).ratio().clone() / m.coord(1).ratio().clone()
                })
                .reduce(S::min_of)
                .expect("at least one map")
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesConstants<S> {
    /// `s[j - 1] = sum_i phi'_{i, tau_j}`, zero when `tau_j` is undefined.
    pub s: Vec<S>,
    /// `1 + sum_j 1 / (1 - s_j)` over the defined `tau_j`.
    pub l: S,
    /// Direct partial sum of the defining series and an upper bracket.
    pub truncated: (S, S),
    /// Word length up to which the partial sum was taken.
    pub truncation_depth: usize,
}

/// Word budget for the direct partial sum of the series.
const SERIES_WORDS: usize = 2_000;

pub fn analyze_special_system<S: Scalar>(ifs: &SpongeIfs<S>) -> Result<(SpecialSystem<S>, SeriesConstants<S>)> {
    let tree = build_labeled_tree(ifs)?;
    let fibers = tree.all_fiber_ifs();
    let root = &fibers[0];
    if root.len() != ifs.len() {
        return Err(Error::Cantor(format!(
            "root fiber has {} maps, the system has {}",
            root.len(),
            ifs.len()
        )));
    }
    if !attractor_is_unit_interval(root) {
        return Err(Error::Cantor("root fiber does not tile [0,1]".into()));
    }
    if let Some(g) = fibers[1..].iter().find(|g| g.len() != 1) {
        return Err(Error::Cantor(format!(
            "fiber of vertex {} has {} maps, expected 1",
            g.owner,
            g.len()
        )));
    }

    let mut order: Vec<usize> = (0..ifs.len()).collect();
    order.sort_by(|&x, &y| {
        ifs.map(x)
            .coord(0)
            .offset()
            .partial_cmp(ifs.map(y).coord(0).offset())
            .expect("comparable")
    });
    let base = ifs.permuted(&order)?;
    let m = base.len();
    let a = base.map(0).fixed_point();
    let b = base.map(m - 1).fixed_point();
    let a_points: Vec<Vec<S>> = base.maps().iter().map(|f| f.apply(&a)).collect();
    let b_points: Vec<Vec<S>> = base.maps().iter().map(|f| f.apply(&b)).collect();
    let deltas: Vec<Vec<S>> = (1..m)
        .map(|j| {
            a_points[j]
                .iter()
                .zip(&b_points[j - 1])
                .map(|(x, y)| x.clone() - y.clone())
                .collect()
        })
        .collect();
    let tau: Vec<Option<usize>> = deltas
        .iter()
        .map(|v| v.iter().position(|x| !x.is_zero()))
        .collect();
    if let Some(j) = tau.iter().position(|t| *t == Some(0)) {
        return Err(Error::Cantor(format!(
            "delta_{} has a non-zero first coordinate",
            j + 1
        )));
    }
    let r_star = base
        .maps()
        .iter()
        .map(|f| f.coord(0).ratio().clone())
        .reduce(S::min_of)
        .expect("at least one map");
    let sys = SpecialSystem {
        base,
        order,
        a,
        b,
        a_points,
        b_points,
        deltas,
        tau,
        r_star,
    };

    let s: Vec<S> = sys
        .tau
        .iter()
        .map(|t| match t {
            Some(c) => (0..m).fold(S::zero(), |acc, i| {
                acc + sys.base.map(i).coord(*c).ratio().clone()
            }),
            None => S::zero(),
        })
        .collect();
    let defined = || {
        sys.tau
            .iter()
            .zip(&s)
            .filter(|(t, _)| t.is_some())
            .map(|(_, s)| s.clone())
    };
    if let Some(bad) = defined().find(|x| *x >= S::one()) {
        return Err(Error::Cantor(format!("series ratio {bad} is not below 1")));
    }
    let l = defined().fold(S::one(), |acc, x| acc + S::one() / (S::one() - x));

    // Direct partial sum over words, then the geometric tail as upper bracket.
    let depth = (0..)
        .take_while(|&n| (m as u128).pow(n as u32) <= SERIES_WORDS as u128 && n <= 10)
        .last()
        .unwrap_or(0);
    let mut lower = S::one();
    let mut level: Vec<Vec<S>> = vec![vec![S::one(); sys.dim()]];
    for n in 0..=depth {
        for derivs in &level {
            for t in sys.tau.iter().flatten() {
                lower = lower + derivs[*t].clone();
            }
        }
        if n < depth {
            level = level
                .iter()
                .flat_map(|v| {
                    sys.base.maps().iter().map(move |f| {
                        v.iter()
                            .zip(f.ratios())
                            .map(|(x, r)| x.clone() * r.clone())
                            .collect()
                    })
                })
                .collect();
        }
    }
    let tail = defined().fold(S::zero(), |acc, x| {
        let mut p = S::one();
        for _ in 0..=depth {
            p = p * x.clone();
        }
        acc + p / (S::one() - x)
    });
    let upper = lower.clone() + tail;
    if S::EXACT && !(lower <= l && l <= upper) {
        return Err(Error::Cantor(format!(
            "closed form {l} outside the truncated bracket [{lower}, {upper}]"
        )));
    }

    Ok((
        sys,
        SeriesConstants {
            s,
            l,
            truncated: (lower, upper),
            truncation_depth: depth,
        },
    ))
}
