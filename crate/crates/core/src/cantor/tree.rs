use crate::error::{Error, Result};
use crate::ifs::Interval;
use crate::scalar::Scalar;

use super::system::{SeriesConstants, SpecialSystem};

/// `|J_word| = phi'_{word,1} + sum_j phi'_{word,tau_j} / (1 - s_j)`.
pub fn cylinder_length<S: Scalar>(sys: &SpecialSystem<S>, consts: &SeriesConstants<S>, word: &[usize]) -> S {
    let derivs: Vec<S> = (0..sys.dim()).map(|c| sys.deriv(word, c)).collect();
    length_from_derivs(sys, consts, &derivs)
}

fn length_from_derivs<S: Scalar>(sys: &SpecialSystem<S>, consts: &SeriesConstants<S>, derivs: &[S]) -> S {
    sys.tau
        .iter()
        .zip(&consts.s)
        .filter_map(|(t, s)| t.map(|c| derivs[c].clone() / (S::one() - s.clone())))
        .fold(derivs[0].clone(), |acc, x| acc + x)
}

fn gap_from_derivs<S: Scalar>(sys: &SpecialSystem<S>, derivs: &[S], j: usize) -> S {
    sys.tau[j - 1].map_or_else(S::zero, |c| derivs[c].clone())
}

/// The `m`-ary interval construction `J_word` over all words up to `depth`.
#[derive(Debug, Clone)]
pub struct CantorTree<S> {
    sys: SpecialSystem<S>,
    consts: SeriesConstants<S>,
    depth: usize,
    /// `levels[k]` lists `J_word` for `|word| = k` in lexicographic order.
    levels: Vec<Vec<Interval<S>>>,
}

pub fn build_cantor_tree<S: Scalar>(
    sys: &SpecialSystem<S>,
    consts: &SeriesConstants<S>,
    depth: usize,
    cap: usize,
) -> Result<CantorTree<S>> {
    if sys.tau.iter().all(Option::is_none) {
        return Err(Error::Cantor(
            "every delta vanishes, so the construction degenerates to an interval".into(),
        ));
    }
    let m = sys.m();
    let total: u128 = (0..=depth as u32).map(|k| (m as u128).saturating_pow(k)).sum();
    if total > cap as u128 {
        return Err(Error::ResourceCap {
            requested: total,
            cap,
        });
    }
    let d = sys.dim();
    let mut levels = vec![vec![Interval::new(S::zero(), consts.l.clone())]];
    let mut derivs: Vec<Vec<S>> = vec![vec![S::one(); d]];
    for _ in 0..depth {
        let parents = levels.last().expect("root level");
        let mut next = Vec::with_capacity(parents.len() * m);
        let mut next_derivs = Vec::with_capacity(parents.len() * m);
        for (parent, pd) in parents.iter().zip(&derivs) {
            let mut pos = parent.lo.clone();
            for (i, f) in sys.base.maps().iter().enumerate() {
                if i > 0 {
                    pos = pos + gap_from_derivs(sys, pd, i);
                }
                let cd: Vec<S> = pd
                    .iter()
                    .zip(f.ratios())
                    .map(|(x, r)| x.clone() * r.clone())
                    .collect();
                let end = pos.clone() + length_from_derivs(sys, consts, &cd);
                next.push(Interval::new(pos, end.clone()));
                next_derivs.push(cd);
                pos = end;
            }
        }
        levels.push(next);
        derivs = next_derivs;
    }
    Ok(CantorTree {
        sys: sys.clone(),
        consts: consts.clone(),
        depth,
        levels,
    })
}

impl<S: Scalar> CantorTree<S> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn system(&self) -> &SpecialSystem<S> {
        &self.sys
    }

    pub fn constants(&self) -> &SeriesConstants<S> {
        &self.consts
    }

    pub fn level(&self, k: usize) -> &[Interval<S>] {
        &self.levels[k]
    }

    fn index(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &e| acc * self.sys.m() + e)
    }

    /// `J_word`, looked up when stored and computed along the path otherwise.
    pub fn interval(&self, word: &[usize]) -> Interval<S> {
        if word.len() <= self.depth {
            return self.levels[word.len()][self.index(word)].clone();
        }
        let mut cur = self.levels[self.depth][self.index(&word[..self.depth])].clone();
        for k in self.depth..word.len() {
            let prefix = &word[..k];
            let mut pos = cur.lo.clone();
            let mut child = prefix.to_vec();
            for i in 0..word[k] {
                child.push(i);
                pos = pos + cylinder_length(&self.sys, &self.consts, &child) + self.gap(prefix, i + 1);
                child.pop();
            }
            child.push(word[k]);
            let len = cylinder_length(&self.sys, &self.consts, &child);
            cur = Interval::new(pos.clone(), pos + len);
        }
        cur
    }

    /// Gap `g_{word,j}` between `J_{word (j-1)}` and `J_{word j}`.
    pub fn gap(&self, word: &[usize], j: usize) -> S {
        self.sys.tau_deriv(word, j)
    }

    /// Verifies `|J_w| = sum_i |J_{wi}| + sum_j g_{w,j}`, the end-point
    /// alignment of the outer children and the prescribed gaps at every
    /// stored internal node. Returns the number of nodes checked.
    pub fn check_additivity(&self) -> Result<usize> {
        let m = self.sys.m();
        let mut checked = 0;
        for k in 0..self.depth {
            for (idx, parent) in self.levels[k].iter().enumerate() {
                let word = self.word_of(k, idx);
                let kids = &self.levels[k + 1][idx * m..(idx + 1) * m];
                let mut total = S::zero();
                for (i, kid) in kids.iter().enumerate() {
                    total = total + kid.len();
                    if i > 0 {
                        let g = self.gap(&word, i);
                        if kid.lo.clone() - kids[i - 1].hi.clone() != g {
                            return Err(self.fail(&word, "gap"));
                        }
                        total = total + g;
                    }
                }
                if total != parent.len()
                    || kids[0].lo != parent.lo
                    || kids[m - 1].hi != parent.hi
                {
                    return Err(self.fail(&word, "additivity"));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }

    /// Checks `|J_w| <= L * phi'_{w,1}` for every stored non-empty word.
    pub fn check_length_bound(&self) -> Result<usize> {
        let mut checked = 0;
        for k in 1..=self.depth {
            for (idx, iv) in self.levels[k].iter().enumerate() {
                let word = self.word_of(k, idx);
                if iv.len() > self.consts.l.clone() * self.sys.deriv(&word, 0) {
                    return Err(self.fail(&word, "length bound"));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }

    pub(crate) fn word_of(&self, k: usize, mut idx: usize) -> Vec<usize> {
        let m = self.sys.m();
        let mut word = vec![0; k];
        for slot in word.iter_mut().rev() {
            *slot = idx % m;
            idx /= m;
        }
        word
    }

    fn fail(&self, word: &[usize], what: &str) -> Error {
        Error::Cantor(format!("{what} fails at word {word:?}"))
    }
}
