use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{usize_scalar, Scalar};
use crate::Rational;

use super::system::{SeriesConstants, SpecialSystem};
use super::tree::CantorTree;

/// Digits used when bracketing square roots.
const SQRT_DIGITS: u32 = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzConstants<S> {
    /// `min(|pi_1(a - b)|, min_j |pi_{tau_j}(a_j - b_{j-1})|)`.
    pub c0: S,
    /// `c1^2 = d^2 |a - b|^2`.
    pub c1_sq: S,
    pub c1_bracket: (S, S),
    /// `C' = L / r*`.
    pub c_prime: S,
    /// Bracket of the bi-Lipschitz constant
    /// `C0 = max(c1, (1 + 2 c1 L (1 + 2C') + 2 c0 L (1 + 2C')) / c0)`.
    pub big_c0: (S, S),
}

fn sub<S: Scalar>(x: &[S], y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect()
}

fn norm_sq<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.clone() * x.clone())
}

pub fn lipschitz_constants<S: Scalar>(sys: &SpecialSystem<S>, consts: &SeriesConstants<S>) -> LipschitzConstants<S> {
    let ab = sub(&sys.a, &sys.b);
    let c0 = sys
        .deltas
        .iter()
        .zip(&sys.tau)
        .filter_map(|(delta, t)| t.map(|c| delta[c].abs()))
        .fold(ab[0].abs(), S::min_of);
    let d = usize_scalar::<S>(sys.dim());
    let c1_sq = d.clone() * d * norm_sq(&ab);
    let c1_bracket = c1_sq.sqrt_bracket(SQRT_DIGITS);
    let c_prime = consts.l.clone() / sys.r_star.clone();
    let k = consts.l.clone() * (S::one() + S::from_int(2) * c_prime.clone());
    let two = S::from_int(2);
    let formula = |c1: &S| -> S {
        let v = (S::one() + two.clone() * c1.clone() * k.clone() + two.clone() * c0.clone() * k.clone())
            / c0.clone();
        S::max_of(c1.clone(), v)
    };
    let big_c0 = (formula(&c1_bracket.0), formula(&c1_bracket.1));
    LipschitzConstants {
        c0,
        c1_sq,
        c1_bracket,
        c_prime,
        big_c0,
    }
}

/// Checks `c0 phi'_{w,1} <= |phi_w(a) - phi_w(b)| <= c1 phi'_{w,1}` and the
/// analogous bounds with `phi'_{w,tau_j}` for `phi_w(a_j) - phi_w(b_{j-1})`,
/// for every non-empty word of length at most `depth`. Squared values are
/// compared. Returns the number of words checked.
pub fn check_endpoint_bounds<S: Scalar>(
    sys: &SpecialSystem<S>,
    lip: &LipschitzConstants<S>,
    depth: usize,
) -> Result<usize> {
    let m = sys.m();
    let c0_sq = lip.c0.clone() * lip.c0.clone();
    let within = |dist_sq: &S, deriv: &S| -> bool {
        let dd = deriv.clone() * deriv.clone();
        c0_sq.clone() * dd.clone() <= *dist_sq && *dist_sq <= lip.c1_sq.clone() * dd
    };
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut checked = 0;
    for _ in 0..depth {
        words = words
            .iter()
            .flat_map(|w| {
                (0..m).map(move |e| {
                    let mut v = w.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
        for w in &words {
            let x = sys.apply_word(w, &sys.a);
            let y = sys.apply_word(w, &sys.b);
            if !within(&norm_sq(&sub(&x, &y)), &sys.deriv(w, 0)) {
                return Err(Error::Cantor(format!("endpoint bound fails at word {w:?}")));
            }
            for j in 1..m {
                let x = sys.apply_word(w, &sys.a_points[j]);
                let y = sys.apply_word(w, &sys.b_points[j - 1]);
                let dist_sq = norm_sq(&sub(&x, &y));
                let ok = match sys.tau[j - 1] {
                    Some(c) => within(&dist_sq, &sys.deriv(w, c)),
                    None => dist_sq.is_zero(),
                };
                if !ok {
                    return Err(Error::Cantor(format!(
                        "junction bound fails at word {w:?}, j = {j}"
                    )));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilipschitzReport<S> {
    /// Pairs with `x != y` that were compared.
    pub pairs: usize,
    /// Pairs with `x == y`; these must also have `u == v`.
    pub identified: usize,
    pub min_ratio_sq: S,
    pub max_ratio_sq: S,
    /// `1 / c1^2`.
    pub bound_low_sq: S,
    /// Bracket of `C0`.
    pub bound_high: (S, S),
    pub violations: usize,
    /// Words `(alpha, beta)` of the first violating pair in enumeration order.
    pub first_violation: Option<(Vec<usize>, Vec<usize>)>,
    pub pass: bool,
}

/// Compares `|u - v| / |x - y|` against `[1/c1, C0]` for
/// `x = phi_alpha(a)`, `y = phi_beta(b)`, `u` the left end of `J_alpha` and
/// `v` the right end of `J_beta`, over all `alpha, beta` of length `depth`.
///
/// Shorter words are covered: `phi_alpha(a) = phi_{alpha 0}(a)` and
/// `J_alpha` shares its left end with `J_{alpha 0}`; symmetrically for `b`.
pub fn bilipschitz_check<S: Scalar>(
    tree: &CantorTree<S>,
    lip: &LipschitzConstants<S>,
    depth: usize,
    cap: usize,
) -> Result<BilipschitzReport<S>> {
    let sys = tree.system();
    let m = sys.m();
    let count = (m as u128).saturating_pow(depth as u32);
    if count > cap as u128 {
        return Err(Error::ResourceCap {
            requested: count,
            cap,
        });
    }
    let count = count as usize;
    let words: Vec<Vec<usize>> = (0..count).map(|i| tree.word_of(depth, i)).collect();
    let rat = |v: &S| v.to_rational();
    let xs: Vec<Vec<Rational>> = words
        .par_iter()
        .map(|w| sys.apply_word(w, &sys.a).iter().map(rat).collect())
        .collect();
    let ys: Vec<Vec<Rational>> = words
        .par_iter()
        .map(|w| sys.apply_word(w, &sys.b).iter().map(rat).collect())
        .collect();
    let us: Vec<Rational> = words.iter().map(|w| rat(&tree.interval(w).lo)).collect();
    let vs: Vec<Rational> = words.iter().map(|w| rat(&tree.interval(w).hi)).collect();

    // Scale everything to integers over one common denominator.
    let denom = xs
        .iter()
        .chain(&ys)
        .flatten()
        .chain(&us)
        .chain(&vs)
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scale = |r: &Rational| -> BigInt { r.numer() * (&denom / r.denom()) };
    let xi: Vec<Vec<BigInt>> = xs.iter().map(|p| p.iter().map(scale).collect()).collect();
    let yi: Vec<Vec<BigInt>> = ys.iter().map(|p| p.iter().map(scale).collect()).collect();
    let ui: Vec<BigInt> = us.iter().map(scale).collect();
    let vi: Vec<BigInt> = vs.iter().map(scale).collect();

    let c1_sq = lip.c1_sq.to_rational();
    let c0_lo = lip.big_c0.0.to_rational();
    let c0_lo_sq = &c0_lo * &c0_lo;
    let (p1, q1) = (c1_sq.numer().clone(), c1_sq.denom().clone());
    let (p2, q2) = (c0_lo_sq.numer().clone(), c0_lo_sq.denom().clone());

    #[derive(Default)]
    struct Acc {
        pairs: usize,
        identified: usize,
        violations: usize,
        first: Option<(usize, usize)>,
        min: Option<(f64, usize, usize)>,
        max: Option<(f64, usize, usize)>,
    }

    let partial: Vec<Acc> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut acc = Acc::default();
            for j in 0..count {
                let dx: BigInt = xi[i]
                    .iter()
                    .zip(&yi[j])
                    .map(|(a, b)| {
                        let t = a - b;
                        &t * &t
                    })
                    .sum();
                let du = {
                    let t = &ui[i] - &vi[j];
                    &t * &t
                };
                if dx.is_zero() {
                    acc.identified += 1;
                    if !du.is_zero() {
                        acc.violations += 1;
                        acc.first.get_or_insert((i, j));
                    }
                    continue;
                }
                acc.pairs += 1;
                let low_ok = &q1 * &dx <= &p1 * &du;
                let high_ok = &q2 * &du <= &p2 * &dx;
                if !(low_ok && high_ok) {
                    acc.violations += 1;
                    acc.first.get_or_insert((i, j));
                }
                let r = du.to_f64().unwrap_or(f64::INFINITY) / dx.to_f64().unwrap_or(f64::INFINITY);
                if acc.min.is_none_or(|(v, _, _)| r < v) {
                    acc.min = Some((r, i, j));
                }
                if acc.max.is_none_or(|(v, _, _)| r > v) {
                    acc.max = Some((r, i, j));
                }
            }
            acc
        })
        .collect();

    let mut total = Acc::default();
    for a in partial {
        total.pairs += a.pairs;
        total.identified += a.identified;
        total.violations += a.violations;
        if total.first.is_none() {
            total.first = a.first;
        }
        if let Some(c) = a.min {
            if total.min.is_none_or(|(v, _, _)| c.0 < v) {
                total.min = Some(c);
            }
        }
        if let Some(c) = a.max {
            if total.max.is_none_or(|(v, _, _)| c.0 > v) {
                total.max = Some(c);
            }
        }
    }

    let exact_ratio = |pair: Option<(f64, usize, usize)>| -> S {
        pair.map_or_else(S::zero, |(_, i, j)| {
            let dx: Rational = xs[i]
                .iter()
                .zip(&ys[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let du = (&us[i] - &vs[j]) * (&us[i] - &vs[j]);
            S::from_rational(&(du / dx))
        })
    };
    Ok(BilipschitzReport {
        pairs: total.pairs,
        identified: total.identified,
        min_ratio_sq: exact_ratio(total.min),
        max_ratio_sq: exact_ratio(total.max),
        bound_low_sq: S::one() / lip.c1_sq.clone(),
        bound_high: lip.big_c0.clone(),
        violations: total.violations,
        first_violation: total.first.map(|(i, j)| (words[i].clone(), words[j].clone())),
        pass: total.violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{analyze_special_system, build_cantor_tree};
    use crate::fixtures;
    use crate::ifs::parse_ifs;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    #[test]
    fn lg4_constants() {
        let (sys, c) = analyze_special_system(&fixtures::lg4()).unwrap();
        let lip = lipschitz_constants(&sys, &c);
        assert_eq!(lip.c0, q(1, 3));
        assert_eq!(lip.c1_sq, q(8, 1));
        assert_eq!(lip.c_prime, q(7356, 73));
        assert!(lip.big_c0.0 <= lip.big_c0.1);
        assert!(lip.c1_bracket.0.clone() * lip.c1_bracket.0.clone() <= q(8, 1));
        assert_eq!(check_endpoint_bounds(&sys, &lip, 4).unwrap(), 4 + 16 + 64 + 256);
    }

    #[test]
    fn root_pair() {
        let (sys, c) = analyze_special_system(&fixtures::lg4()).unwrap();
        let lip = lipschitz_constants(&sys, &c);
        let tree = build_cantor_tree(&sys, &c, 2, 1000).unwrap();
        // At depth 0 the only pair is x = a, y = b, u = 0, v = L.
        let r = bilipschitz_check(&tree, &lip, 0, 10).unwrap();
        assert_eq!(r.pairs, 1);
        assert_eq!(r.min_ratio_sq, q(613 * 613, 73 * 73 * 2));
        assert!(r.pass);
    }

    #[test]
    fn identified_pairs_are_skipped() {
        // a = (0,0), b = (1,1); phi_1(a) = phi_0(b) = (1/3, 1/9).
        let ifs = parse_ifs::<Rational>(
            "dim 2\nmap 1/3 0 ; 1/9 0\nmap 1/3 1/3 ; 1/9 1/9\nmap 1/3 2/3 ; 1/9 8/9",
        )
        .unwrap();
        let (sys, c) = analyze_special_system(&ifs).unwrap();
        assert_eq!(sys.tau, vec![None, Some(1)]);
        let lip = lipschitz_constants(&sys, &c);
        let tree = build_cantor_tree(&sys, &c, 3, 1000).unwrap();
        let r = bilipschitz_check(&tree, &lip, 3, 1000).unwrap();
        assert!(r.identified > 0);
        assert!(r.pass, "{r:?}");
    }
}
