//! Independent brute-force oracles checked against the library, and the
//! regression values they produced.

use num_traits::{Signed, Zero};
use udsponge::cantor::{
    analyze_special_system, bilipschitz_check, build_cantor_tree, lipschitz_constants, to_binary_tree,
};
use udsponge::components::{
    approx_square, check_moran_bound, component_diameter_profile, delta0_sequence_exists, delta_components,
    pre_moran_intervals, point_components, PointSet, SimpleIfsFamily,
};
use udsponge::fixtures;
use udsponge::ifs::{Cuboid, Interval};
use udsponge::tree::build_labeled_tree;
use udsponge::Rational;

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn qs(s: &str) -> Rational {
    udsponge::scalar::parse_rational(s).unwrap()
}

/// Squared box distance, coordinate by coordinate.
fn box_dist_sq(a: &Cuboid<Rational>, b: &Cuboid<Rational>) -> Rational {
    a.sides
        .iter()
        .zip(&b.sides)
        .map(|(x, y)| {
            let g = [x.lo.clone() - y.hi.clone(), y.lo.clone() - x.hi.clone(), Rational::zero()]
                .into_iter()
                .max()
                .unwrap();
            g.clone() * g
        })
        .sum()
}

/// Squared distance between the farthest corners of two boxes.
fn box_far_sq(a: &Cuboid<Rational>, b: &Cuboid<Rational>) -> Rational {
    a.sides
        .iter()
        .zip(&b.sides)
        .map(|(x, y)| {
            let g = std::cmp::max((x.hi.clone() - y.lo.clone()).abs(), (y.hi.clone() - x.lo.clone()).abs());
            g.clone() * g
        })
        .sum()
}

/// Components by repeated flooding over the full distance matrix, sorted
/// by smallest member, with squared diameters.
fn oracle_components(boxes: &[Cuboid<Rational>], delta: &Rational) -> Vec<(Vec<usize>, Rational)> {
    let n = boxes.len();
    let d_sq = delta.clone() * delta.clone();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut block = vec![s];
        let mut i = 0;
        while i < block.len() {
            let u = block[i];
            for v in 0..n {
                if !seen[v] && box_dist_sq(&boxes[u], &boxes[v]) <= d_sq {
                    seen[v] = true;
                    block.push(v);
                }
            }
            i += 1;
        }
        block.sort();
        let mut diam = Rational::zero();
        for &a in &block {
            for &b in &block {
                diam = diam.max(box_far_sq(&boxes[a], &boxes[b]));
            }
        }
        out.push((block, diam));
    }
    out
}

fn library_components(boxes: &[Cuboid<Rational>], delta: &Rational) -> Vec<(Vec<usize>, Rational)> {
    let part = delta_components(boxes, delta).unwrap();
    let mut out: Vec<(Vec<usize>, Rational)> = part
        .blocks
        .iter()
        .zip(&part.diam_sq)
        .map(|(b, d)| {
            let mut b = b.clone();
            b.sort();
            (b, d.clone())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn components_match_the_flooding_oracle() {
    let deltas = [q(1, 2), q(1, 10), q(1, 20), q(1, 50), q(1, 200)];
    for ifs in [fixtures::lg5(), fixtures::lg4(), fixtures::bedford_mcmullen()] {
        for depth in 1..=2 {
            let boxes = ifs.cylinders(depth, 1000).unwrap();
            for delta in &deltas {
                assert_eq!(library_components(&boxes, delta), oracle_components(&boxes, delta));
            }
        }
    }
}

#[test]
fn lg5_depth_one_blocks() {
    let boxes = fixtures::lg5().cylinders(1, 10).unwrap();
    let blocks = oracle_components(&boxes, &q(1, 10));
    // Vertical gaps 1/3 and 1/5, horizontal gap 1/6: all separate.
    assert_eq!(
        blocks.iter().map(|b| b.0.clone()).collect::<Vec<_>>(),
        vec![vec![0], vec![1], vec![2], vec![3], vec![4]]
    );
    // The columns are 1/6 apart, so every box joins at delta = 1/5.
    let blocks = oracle_components(&boxes, &q(1, 5));
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0].1, q(1, 1) + q(1, 1));
    assert_eq!(library_components(&boxes, &q(1, 5)), blocks);
}

#[test]
fn point_set_blocks() {
    let pts = PointSet::new(vec![vec![q(0, 1)], vec![q(1, 20)], vec![q(1, 10)], vec![q(1, 2)]]).unwrap();
    let part = point_components(&pts, &q(3, 50)).unwrap();
    let mut blocks = part.blocks.clone();
    blocks.iter_mut().for_each(|b| b.sort());
    blocks.sort();
    assert_eq!(blocks, vec![vec![0, 1, 2], vec![3]]);
    assert_eq!(part.max_diam_sq(), q(1, 100));
}

#[test]
fn chain_examples() {
    let pts = PointSet::new([(0, 1), (3, 10), (3, 5), (1, 1)].iter().map(|&(p, d)| vec![q(p, d)]).collect()).unwrap();
    assert!(delta0_sequence_exists(&pts, &q(2, 5)).unwrap().is_some());
    let pair = PointSet::new(vec![vec![q(0, 1)], vec![q(1, 1)]]).unwrap();
    assert!(delta0_sequence_exists(&pair, &q(1, 2)).unwrap().is_none());
    assert!(delta0_sequence_exists(&pair, &q(1, 1)).unwrap().is_some());
}

/// Ratios `(max diam / delta)^2` on the depth-4 grid, frozen from the oracle.
fn profile_ratios(ifs: &udsponge::Ifs) -> Vec<Rational> {
    let grid = [q(1, 8), q(1, 16), q(1, 32), q(1, 64)];
    let rows = component_diameter_profile(ifs, 4, &grid, 10_000).unwrap();
    let boxes = ifs.cylinders(4, 10_000).unwrap();
    for row in &rows {
        let oracle = oracle_components(&boxes, &row.delta);
        assert_eq!(row.num_components, oracle.len());
        assert_eq!(row.max_diam_sq, oracle.iter().map(|b| b.1.clone()).max().unwrap());
    }
    rows.into_iter().map(|r| r.ratio_sq).collect()
}

#[test]
fn lg5_profile_regression() {
    let ratios = profile_ratios(&fixtures::lg5());
    let frozen: Vec<Rational> = LG5_PROFILE.iter().map(|s| qs(s)).collect();
    assert_eq!(ratios, frozen);
}

#[test]
fn lg4_profile_regression() {
    let ratios = profile_ratios(&fixtures::lg4());
    let frozen: Vec<Rational> = LG4_PROFILE.iter().map(|s| qs(s)).collect();
    assert_eq!(ratios, frozen);
    assert!(ratios.windows(2).all(|w| w[0] < w[1]));
}

const LG5_PROFILE: [&str; 4] = ["464/25", "320/9", "8704/225", "7424/225"];
const LG4_PROFILE: [&str; 4] = ["20", "40", "68", "640/9"];

#[test]
fn pre_moran_examples() {
    let quarters = SimpleIfsFamily::new(vec![vec![
        udsponge::Map1::new(q(1, 4), q(0, 1)).unwrap(),
        udsponge::Map1::new(q(1, 4), q(3, 4)).unwrap(),
    ]])
    .unwrap();
    let set = pre_moran_intervals(&quarters, &[0, 0], 100).unwrap();
    let ends: Vec<(Rational, Rational)> = set.intervals.iter().map(|iv| (iv.lo.clone(), iv.hi.clone())).collect();
    assert_eq!(
        ends,
        vec![(q(0, 1), q(1, 16)), (q(3, 16), q(1, 4)), (q(3, 4), q(13, 16)), (q(15, 16), q(1, 1))]
    );
    let r = check_moran_bound(&quarters, &[0, 0], &q(1, 32), 100).unwrap();
    assert!(r.admissible && r.holds);
    assert_eq!(r.bound, q(65, 32));
    assert_eq!(r.max_component_diam, q(1, 16));

    let tree = build_labeled_tree(&fixtures::lg5()).unwrap();
    let fibers: Vec<_> = tree.all_fiber_ifs().into_iter().skip(1).collect();
    let family = SimpleIfsFamily::from_fibers(&fibers).unwrap();
    let set = pre_moran_intervals(&family, &[1, 0], 100).unwrap();
    assert_eq!(set.intervals.len(), 6);
}

#[test]
fn approximate_squares() {
    let sq = approx_square(&fixtures::lg5(), &[0; 6], &q(1, 10)).unwrap();
    assert_eq!(sq.depths, vec![3, 2]);
    assert_eq!(sq.cuboid.sides[0], Interval::new(q(0, 1), q(1, 27)));
    assert_eq!(sq.cuboid.sides[1], Interval::new(q(0, 1), q(1, 36)));
    let sq = approx_square(&fixtures::lg5(), &[1; 6], &q(1, 10)).unwrap();
    assert_eq!(sq.depths, vec![3, 2]);
    assert_eq!(sq.cuboid.sides[1].len(), q(1, 100));
    let sq = approx_square(&fixtures::lg4(), &[0; 6], &q(1, 5)).unwrap();
    assert_eq!(sq.depths, vec![2, 1]);
    assert_eq!(sq.cuboid.sides[0].len(), q(1, 16));
    assert_eq!(sq.cuboid.sides[1].len(), q(1, 6));
}

/// `J_w` rebuilt from lengths alone: children are laid out left to right
/// with the prescribed gaps.
#[test]
fn cantor_intervals_from_lengths() {
    let (sys, c) = analyze_special_system(&fixtures::lg4()).unwrap();
    let tree = build_cantor_tree(&sys, &c, 3, 1000).unwrap();
    let len = |w: &[usize]| udsponge::cantor::cylinder_length(&sys, &c, w);
    let mut stack = vec![(Vec::<usize>::new(), q(0, 1))];
    while let Some((w, lo)) = stack.pop() {
        let iv = tree.interval(&w);
        assert_eq!(iv.lo, lo);
        assert_eq!(iv.hi, lo.clone() + len(&w));
        if w.len() < 3 {
            let mut pos = lo;
            for i in 0..sys.m() {
                if i > 0 {
                    pos += sys.tau_deriv(&w, i);
                }
                let mut child = w.clone();
                child.push(i);
                let next = pos.clone() + len(&child);
                stack.push((child, pos));
                pos = next;
            }
        }
    }
}

#[test]
fn lg4_bilipschitz_regression() {
    let (sys, c) = analyze_special_system(&fixtures::lg4()).unwrap();
    let tree = build_cantor_tree(&sys, &c, 4, 10_000).unwrap();
    let lip = lipschitz_constants(&sys, &c);
    let r = bilipschitz_check(&tree, &lip, 4, 100_000).unwrap();
    assert!(r.pass);
    assert_eq!(r.pairs, 65536);
    assert_eq!(r.min_ratio_sq, q(2917264, 1369553));
    assert_eq!(r.max_ratio_sq, q(45846441, 181186));
    assert!(r.min_ratio_sq > r.bound_low_sq);
    assert!(r.max_ratio_sq < r.bound_high.0.clone() * r.bound_high.0.clone());
}

#[test]
fn lg4_binary_tree() {
    let (sys, c) = analyze_special_system(&fixtures::lg4()).unwrap();
    let tree = build_cantor_tree(&sys, &c, 4, 10_000).unwrap();
    let bin = to_binary_tree(&tree, 8, 10_000).unwrap();
    assert_eq!(bin.t, q(7356, 73));
    assert!(bin.balanced());
    assert!(bin.gap_ratio_failures().is_empty());
}
