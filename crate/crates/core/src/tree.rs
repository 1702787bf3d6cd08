//! The labeled tree of a Lalley-Gatzouras system and its fiber IFS.
//!
//! Level `l` holds the distinct maps of the major projection onto the first
//! `l` coordinates. A vertex `g` of level `l + 1` is an offspring of `f` at
//! level `l` when `g = (f, h)`; `h` is the label of the edge. The labels of
//! the offspring of `f` form the fiber IFS `G(f)`, a simple IFS of `[0,1]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ifs::{validate_lg, AffineMap, Interval, SpongeIfs};
use crate::scalar::Scalar;

/// A vertex, identified by its coefficient tuple. The root has no maps.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex<S> {
    maps: Vec<AffineMap<S>>,
}

impl<S: Scalar> Vertex<S> {
    pub fn root() -> Self {
        Vertex { maps: Vec::new() }
    }

    pub fn new(maps: Vec<AffineMap<S>>) -> Self {
        Vertex { maps }
    }

    pub fn rank(&self) -> usize {
        self.maps.len()
    }

    pub fn is_root(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[AffineMap<S>] {
        &self.maps
    }

    /// The edge label leading into this vertex.
    pub fn label(&self) -> Option<&AffineMap<S>> {
        self.maps.last()
    }

    pub fn parent(&self) -> Option<Vertex<S>> {
        (!self.is_root()).then(|| Vertex::new(self.maps[..self.maps.len() - 1].to_vec()))
    }

    pub fn child(&self, label: AffineMap<S>) -> Vertex<S> {
        let mut maps = self.maps.clone();
        maps.push(label);
        Vertex::new(maps)
    }

    /// Fixed point of the projected map, one coordinate per rank.
    pub fn fixed_point(&self) -> Vec<S> {
        self.maps.iter().map(AffineMap::fixed_point).collect()
    }
}

impl<S: fmt::Display> fmt::Display for Vertex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.maps.is_empty() {
            return write!(f, "root");
        }
        write!(f, "(")?;
        for (i, m) in self.maps.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// The fiber IFS `G(owner)`: labels of the owner's offspring, ordered by the
/// left endpoint of their image of `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberIfs<S> {
    pub owner: Vertex<S>,
    pub labels: Vec<AffineMap<S>>,
}

impl<S: Scalar> FiberIfs<S> {
    pub fn new(owner: Vertex<S>, mut labels: Vec<AffineMap<S>>) -> Self {
        labels.sort_by(|a, b| a.offset().partial_cmp(b.offset()).expect("comparable"));
        FiberIfs { owner, labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Images of `[0,1]`, left to right.
    pub fn images(&self) -> Vec<Interval<S>> {
        self.labels.iter().map(AffineMap::unit_image).collect()
    }

    pub fn ratio_sum(&self) -> S {
        self.labels
            .iter()
            .fold(S::zero(), |acc, m| acc + m.ratio().clone())
    }

    /// Images lie in `[0,1]` and have disjoint interiors.
    pub fn is_simple(&self) -> bool {
        let images = self.images();
        self.labels.iter().all(AffineMap::is_unit_preserving)
            && images.windows(2).all(|w| w[0].hi <= w[1].lo)
    }
}

#[derive(Debug, Clone)]
pub struct LabeledTree<S> {
    dim: usize,
    /// `levels[l]` lists the rank-`l` vertices in order of first occurrence.
    levels: Vec<Vec<Vertex<S>>>,
    /// `children[l][i]` indexes into `levels[l + 1]`, sorted by label.
    children: Vec<Vec<Vec<usize>>>,
}

/// Builds the tree of a validated system.
pub fn build_labeled_tree<S: Scalar>(ifs: &SpongeIfs<S>) -> Result<LabeledTree<S>> {
    let report = validate_lg(ifs);
    if !report.lg_type() {
        return Err(Error::NotLalleyGatzouras(report.summary()));
    }
    let dim = ifs.dim();
    let mut levels = vec![vec![Vertex::root()]];
    for level in 1..=dim {
        let proj = ifs.major_projection(level)?;
        levels.push(
            proj.maps()
                .iter()
                .map(|m| Vertex::new(m.coords().to_vec()))
                .collect(),
        );
    }

    let mut children = Vec::with_capacity(dim);
    for level in 0..dim {
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); levels[level].len()];
        for (ci, child) in levels[level + 1].iter().enumerate() {
            let parent = child.parent().expect("non-root");
            let pi = levels[level]
                .iter()
                .position(|v| *v == parent)
                .expect("projection of a projected map is present");
            kids[pi].push(ci);
        }
        for list in &mut kids {
            list.sort_by(|&a, &b| {
                let la = levels[level + 1][a].label().expect("non-root").offset();
                let lb = levels[level + 1][b].label().expect("non-root").offset();
                la.partial_cmp(lb).expect("comparable")
            });
        }
        children.push(kids);
    }
    Ok(LabeledTree {
        dim,
        levels,
        children,
    })
}

impl<S: Scalar> LabeledTree<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> &[Vec<Vertex<S>>] {
        &self.levels
    }

    pub fn level(&self, rank: usize) -> &[Vertex<S>] {
        &self.levels[rank]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    fn locate(&self, vertex: &Vertex<S>) -> Result<(usize, usize)> {
        let rank = vertex.rank();
        self.levels
            .get(rank)
            .and_then(|lvl| lvl.iter().position(|v| v == vertex))
            .map(|i| (rank, i))
            .ok_or_else(|| Error::UnknownVertex(vertex.to_string()))
    }

    pub fn contains(&self, vertex: &Vertex<S>) -> bool {
        self.locate(vertex).is_ok()
    }

    /// Offspring of `vertex`, ordered by the left endpoint of their label image.
    pub fn offspring(&self, vertex: &Vertex<S>) -> Result<Vec<&Vertex<S>>> {
        let (rank, i) = self.locate(vertex)?;
        if rank == self.dim {
            return Ok(Vec::new());
        }
        Ok(self.children[rank][i]
            .iter()
            .map(|&c| &self.levels[rank + 1][c])
            .collect())
    }

    pub fn fiber_ifs(&self, vertex: &Vertex<S>) -> Result<FiberIfs<S>> {
        let (rank, _) = self.locate(vertex)?;
        if rank == self.dim {
            return Err(Error::LeafVertex(vertex.to_string(), rank));
        }
        let labels = self
            .offspring(vertex)?
            .into_iter()
            .map(|v| v.label().expect("non-root").clone())
            .collect();
        Ok(FiberIfs::new(vertex.clone(), labels))
    }

    /// Every fiber IFS of rank `0..dim`, breadth first.
    pub fn all_fiber_ifs(&self) -> Vec<FiberIfs<S>> {
        self.levels[..self.dim]
            .iter()
            .flatten()
            .map(|v| self.fiber_ifs(v).expect("internal vertex"))
            .collect()
    }
}
