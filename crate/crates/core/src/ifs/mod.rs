//! Diagonal affine iterated function systems on the unit cube.

mod geometry;
mod map;
mod parse;
mod validate;

use std::fmt;

pub use geometry::{Cuboid, Interval};
pub use map::{AffineMap, DiagonalMap};
pub use parse::parse_ifs;
pub use validate::{validate_lg, ValidationReport, Violation};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A diagonal self-affine IFS `{phi_0, ..., phi_{N-1}}` on `R^dim`.
///
/// Maps keep their input order; words index into it starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SpongeIfs<S> {
    dim: usize,
    maps: Vec<DiagonalMap<S>>,
}

impl<S: Scalar> SpongeIfs<S> {
    pub fn new(dim: usize, maps: Vec<DiagonalMap<S>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension(dim.to_string()));
        }
        if maps.is_empty() {
            return Err(Error::Empty);
        }
        for (index, m) in maps.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::MapDimension {
                    index,
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        for second in 1..maps.len() {
            if let Some(first) = maps[..second].iter().position(|m| *m == maps[second]) {
                return Err(Error::DuplicateMap { first, second });
            }
        }
        Ok(SpongeIfs { dim, maps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[DiagonalMap<S>] {
        &self.maps
    }

    pub fn map(&self, index: usize) -> &DiagonalMap<S> {
        &self.maps[index]
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&e| e >= self.maps.len()) {
            Some(&index) => Err(Error::SymbolOutOfRange {
                index,
                len: self.maps.len(),
            }),
            None => Ok(()),
        }
    }

    /// `phi_{e_1} o ... o phi_{e_n}` as a single diagonal map, or `None`
    /// for the empty word.
    pub fn word_map(&self, word: &[usize]) -> Result<Option<DiagonalMap<S>>> {
        self.check_word(word)?;
        Ok(word
            .iter()
            .map(|&e| self.maps[e].clone())
            .reduce(|acc, m| acc.compose(&m)))
    }

    /// The cylinder `phi_word([0,1]^d)`.
    pub fn cylinder_box(&self, word: &[usize]) -> Result<Cuboid<S>> {
        self.check_word(word)?;
        // Apply innermost first.
        Ok(word
            .iter()
            .rev()
            .fold(Cuboid::unit(self.dim), |b, &e| self.maps[e].image(&b)))
    }

    /// All cylinders of a given depth, in lexicographic word order.
    pub fn cylinders(&self, depth: usize, cap: usize) -> Result<Vec<Cuboid<S>>> {
        let count = (self.maps.len() as u128).saturating_pow(depth as u32);
        if count > cap as u128 {
            return Err(Error::ResourceCap {
                requested: count,
                cap,
            });
        }
        let mut level = vec![Cuboid::unit(self.dim)];
        for _ in 0..depth {
            // phi_e applied on the outside keeps the order lexicographic.
            level = self
                .maps
                .iter()
                .flat_map(|m| level.iter().map(move |b| m.image(b)))
                .collect();
        }
        Ok(level)
    }

    /// The major projection IFS onto the first `level` coordinates, with
    /// duplicate maps merged in order of first occurrence.
    pub fn major_projection(&self, level: usize) -> Result<SpongeIfs<S>> {
        let (maps, _) = self.projection_with_origins(level)?;
        Ok(SpongeIfs {
            dim: level,
            maps,
        })
    }

    /// Projected maps together with, for each, the index of the first
    /// original map that produced it.
    pub(crate) fn projection_with_origins(
        &self,
        level: usize,
    ) -> Result<(Vec<DiagonalMap<S>>, Vec<usize>)> {
        if level == 0 || level > self.dim {
            return Err(Error::LevelOutOfRange {
                level,
                dim: self.dim,
            });
        }
        let mut maps: Vec<DiagonalMap<S>> = Vec::new();
        let mut origins = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            let t = m.truncate(level);
            if !maps.contains(&t) {
                maps.push(t);
                origins.push(i);
            }
        }
        Ok((maps, origins))
    }

    /// Converts every coefficient to another scalar type.
    pub fn convert<T: Scalar>(&self) -> SpongeIfs<T> {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                DiagonalMap::new(
                    m.coords()
                        .iter()
                        .map(|c| {
                            AffineMap::new(
                                T::from_rational(&c.ratio().to_rational()),
                                T::from_rational(&c.offset().to_rational()),
                            )
                            .expect("ratio stays in (0,1)")
                        })
                        .collect(),
                )
            })
            .collect();
        SpongeIfs {
            dim: self.dim,
            maps,
        }
    }

    /// A copy with the maps listed in the given order.
    pub fn permuted(&self, order: &[usize]) -> Result<SpongeIfs<S>> {
        SpongeIfs::new(self.dim, order.iter().map(|&i| self.maps[i].clone()).collect())
    }

    /// The subsystem made of the maps at `indices`.
    pub fn subsystem(&self, indices: &[usize]) -> Result<SpongeIfs<S>> {
        self.check_word(indices)?;
        self.permuted(indices)
    }
}

/// Serializes in the text format accepted by [`parse_ifs`].
impl<S: fmt::Display> fmt::Display for SpongeIfs<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        for m in &self.maps {
            writeln!(f, "map {m}")?;
        }
        Ok(())
    }
}
