//! Uniform disconnectedness and the conformal dimension class.
//!
//! A Lalley-Gatzouras sponge is uniformly disconnected exactly when no fiber
//! IFS of its labeled tree has `[0,1]` as attractor; in that case its
//! conformal dimension is 0, otherwise it is at least 1. It is exactly 1 when
//! the root fiber tiles `[0,1]` with all `N` maps and every deeper fiber is a
//! singleton.

use crate::error::{Error, Result};
use crate::ifs::{AffineMap, DiagonalMap, SpongeIfs};
use crate::scalar::Scalar;
use crate::tree::{build_labeled_tree, FiberIfs, LabeledTree, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimClass {
    Zero,
    AtLeastOne,
    ExactlyOne,
}

impl DimClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DimClass::Zero => "Zero",
            DimClass::AtLeastOne => "AtLeastOne",
            DimClass::ExactlyOne => "ExactlyOne",
        }
    }
}

/// The three equivalent characterizations; they always agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalentStatements {
    pub uniformly_disconnected: bool,
    pub projections_totally_disconnected: bool,
    pub no_fiber_attractor_is_unit_interval: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberVerdict<S> {
    pub fiber: FiberIfs<S>,
    pub ratio_sum: S,
    pub tiles: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification<S> {
    pub uniformly_disconnected: bool,
    pub conformal_dim_class: DimClass,
    /// First vertex, breadth first, whose fiber attractor is `[0,1]`.
    pub witness: Option<Vertex<S>>,
    pub equivalent_statements: EquivalentStatements,
    pub fiber_report: Vec<FiberVerdict<S>>,
}

/// Whether the images of `[0,1]` under a simple IFS tile `[0,1]` exactly.
pub fn attractor_is_unit_interval<S: Scalar>(fiber: &FiberIfs<S>) -> bool {
    let images = fiber.images();
    match (images.first(), images.last()) {
        (Some(first), Some(last)) => {
            first.lo == S::zero()
                && last.hi == S::one()
                && images.windows(2).all(|w| w[0].hi == w[1].lo)
        }
        _ => false,
    }
}

/// Root fiber has all `N` maps and tiles `[0,1]`; every other fiber is a
/// singleton.
pub fn satisfies_simple_ifs_hypotheses<S: Scalar>(
    ifs: &SpongeIfs<S>,
    tree: &LabeledTree<S>,
) -> bool {
    let fibers = tree.all_fiber_ifs();
    let root = &fibers[0];
    root.len() == ifs.len()
        && attractor_is_unit_interval(root)
        && fibers[1..].iter().all(|g| g.len() == 1)
}

pub fn classify<S: Scalar>(ifs: &SpongeIfs<S>) -> Result<Classification<S>> {
    let tree = build_labeled_tree(ifs)?;
    let fiber_report: Vec<FiberVerdict<S>> = tree
        .all_fiber_ifs()
        .into_iter()
        .map(|fiber| FiberVerdict {
            ratio_sum: fiber.ratio_sum(),
            tiles: attractor_is_unit_interval(&fiber),
            fiber,
        })
        .collect();
    let witness = fiber_report
        .iter()
        .find(|v| v.tiles)
        .map(|v| v.fiber.owner.clone());
    let ud = witness.is_none();
    let class = if ud {
        DimClass::Zero
    } else if satisfies_simple_ifs_hypotheses(ifs, &tree) {
        DimClass::ExactlyOne
    } else {
        DimClass::AtLeastOne
    };
    Ok(Classification {
        uniformly_disconnected: ud,
        conformal_dim_class: class,
        witness,
        equivalent_statements: EquivalentStatements {
            uniformly_disconnected: ud,
            projections_totally_disconnected: ud,
            no_fiber_attractor_is_unit_interval: ud,
        },
        fiber_report,
    })
}

/// Maps of `ifs` whose first `prefix.rank()` coordinates equal `prefix`.
fn maps_above<'a, S: Scalar>(
    ifs: &'a SpongeIfs<S>,
    prefix: &'a Vertex<S>,
) -> impl Iterator<Item = &'a DiagonalMap<S>> + 'a {
    let s = prefix.rank();
    ifs.maps()
        .iter()
        .filter(move |m| m.coords()[..s] == *prefix.maps())
}

/// Fiber of `vertex` computed straight from the map list.
fn direct_fiber<S: Scalar>(ifs: &SpongeIfs<S>, vertex: &Vertex<S>) -> FiberIfs<S> {
    let s = vertex.rank();
    let mut labels: Vec<AffineMap<S>> = Vec::new();
    for m in maps_above(ifs, vertex) {
        let h = m.coord(s).clone();
        if !labels.contains(&h) {
            labels.push(h);
        }
    }
    FiberIfs::new(vertex.clone(), labels)
}

/// A vertical segment `{base} x [0,1]` contained in the attractor.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSegment<S> {
    pub base: Vec<S>,
    /// 0-based coordinate along which the segment runs (always `dim - 1`).
    pub axis: usize,
}

/// The segment produced by a rank `d-1` vertex whose fiber tiles `[0,1]`.
///
/// Only the fiber of `witness` is inspected, so the system need not be of
/// Lalley-Gatzouras type.
pub fn line_segment_witness<S: Scalar>(
    ifs: &SpongeIfs<S>,
    witness: &Vertex<S>,
) -> Result<LineSegment<S>> {
    let d = ifs.dim();
    if witness.rank() + 1 != d {
        return Err(Error::Witness(format!(
            "witness {witness} has rank {}, expected {}",
            witness.rank(),
            d - 1
        )));
    }
    let fiber = direct_fiber(ifs, witness);
    if fiber.is_empty() {
        return Err(Error::Witness(format!("{witness} is not a vertex of the system")));
    }
    if !fiber.is_simple() || !attractor_is_unit_interval(&fiber) {
        return Err(Error::Witness(format!(
            "fiber of {witness} does not tile [0,1]"
        )));
    }
    Ok(LineSegment {
        base: witness.fixed_point(),
        axis: d - 1,
    })
}

/// A copy of an exactly-one-dimensional sponge sitting inside a
/// non-uniformly-disconnected one: `{anchor} x attractor(sub_ifs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subsystem<S> {
    pub prefix_maps: Vec<AffineMap<S>>,
    pub sub_ifs: SpongeIfs<S>,
    /// Fixed point of the prefix maps; `None` when the prefix is empty.
    pub anchor_point: Option<Vec<S>>,
    /// Input index of the map chosen for each `h_j`.
    pub chosen_maps: Vec<usize>,
}

/// Picks, for every label `h_j` of the witness fiber, the first input map
/// extending `(witness, h_j)` and keeps its coordinates from the witness
/// rank on.
pub fn extract_subsystem<S: Scalar>(
    ifs: &SpongeIfs<S>,
    witness: &Vertex<S>,
) -> Result<Subsystem<S>> {
    let tree = build_labeled_tree(ifs)?;
    let fiber = tree.fiber_ifs(witness)?;
    if !attractor_is_unit_interval(&fiber) {
        return Err(Error::Witness(format!(
            "fiber of {witness} does not tile [0,1]"
        )));
    }
    let s = witness.rank();
    let mut maps = Vec::with_capacity(fiber.len());
    let mut chosen = Vec::with_capacity(fiber.len());
    for h in &fiber.labels {
        let (index, m) = ifs
            .maps()
            .iter()
            .enumerate()
            .find(|(_, m)| m.coords()[..s] == *witness.maps() && m.coord(s) == h)
            .expect("every fiber label comes from some map");
        maps.push(m.tail(s));
        chosen.push(index);
    }
    let sub_ifs = SpongeIfs::new(ifs.dim() - s, maps)?;
    let sub = classify(&sub_ifs)?;
    if sub.conformal_dim_class != DimClass::ExactlyOne {
        return Err(Error::Witness(format!(
            "extracted subsystem classified as {}",
            sub.conformal_dim_class.as_str()
        )));
    }
    Ok(Subsystem {
        prefix_maps: witness.maps().to_vec(),
        sub_ifs,
        anchor_point: (s > 0).then(|| witness.fixed_point()),
        chosen_maps: chosen,
    })
}

/// Classifies and, for non-uniformly-disconnected systems, extracts the
/// subsystem at the breadth-first witness.
pub fn witness_subsystem<S: Scalar>(ifs: &SpongeIfs<S>) -> Result<Subsystem<S>> {
    let c = classify(ifs)?;
    match c.witness {
        Some(w) => extract_subsystem(ifs, &w),
        None => Err(Error::NoWitness),
    }
}
