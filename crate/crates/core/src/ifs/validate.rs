use crate::ifs::{Cuboid, SpongeIfs};
use crate::scalar::Scalar;

/// A single failed Lalley-Gatzouras condition. Map indices are 0-based
/// positions in the input system; coordinates are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Ratio outside `(0,1)`.
    Contraction { map: usize, coord: usize },
    /// Coordinate image leaves `[0,1]`.
    UnitCube { map: usize, coord: usize },
    /// `ratio[coord] <= ratio[coord + 1]`.
    Ordering { map: usize, coord: usize },
    /// Open images of two maps of the level-`level` major projection
    /// intersect. `first`/`second` are the input maps that first produce
    /// the two projected maps.
    Overlap {
        level: usize,
        first: usize,
        second: usize,
    },
}

impl Violation {
    pub fn tag(&self) -> &'static str {
        match self {
            Violation::Contraction { .. } => "contraction",
            Violation::UnitCube { .. } => "unit_cube",
            Violation::Ordering { .. } => "coordinate_ordering",
            Violation::Overlap { .. } => "neat_projection",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub contraction_ok: bool,
    pub unit_cube_ok: bool,
    pub coordinate_ordering_ok: bool,
    pub neat_projection_ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// All four conditions hold.
    pub fn lg_type(&self) -> bool {
        self.contraction_ok
            && self.unit_cube_ok
            && self.coordinate_ordering_ok
            && self.neat_projection_ok
    }

    pub fn summary(&self) -> String {
        let failing: Vec<&str> = [
            (self.contraction_ok, "contraction"),
            (self.unit_cube_ok, "unit_cube"),
            (self.coordinate_ordering_ok, "coordinate_ordering"),
            (self.neat_projection_ok, "neat_projection"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect();
        if failing.is_empty() {
            "ok".to_string()
        } else {
            format!("failing conditions: {}", failing.join(", "))
        }
    }
}

/// Checks contraction, unit-cube containment, coordinate ordering, and the
/// neat projection condition. Nothing is thrown; every failure is listed.
pub fn validate_lg<S: Scalar>(ifs: &SpongeIfs<S>) -> ValidationReport {
    let mut violations = Vec::new();

    for (i, m) in ifs.maps().iter().enumerate() {
        for (c, coord) in m.coords().iter().enumerate() {
            if !(coord.ratio() > &S::zero() && coord.ratio() < &S::one()) {
                violations.push(Violation::Contraction { map: i, coord: c });
            }
            if !coord.is_unit_preserving() {
                violations.push(Violation::UnitCube { map: i, coord: c });
            }
        }
        for c in 0..m.dim().saturating_sub(1) {
            if m.coord(c).ratio() <= m.coord(c + 1).ratio() {
                violations.push(Violation::Ordering { map: i, coord: c });
            }
        }
    }

    for level in 1..=ifs.dim() {
        let (maps, origins) = ifs
            .projection_with_origins(level)
            .expect("level within 1..=dim");
        let unit = Cuboid::unit(level);
        let images: Vec<Cuboid<S>> = maps.iter().map(|m| m.image(&unit)).collect();
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                if images[a].interiors_overlap(&images[b]) {
                    violations.push(Violation::Overlap {
                        level,
                        first: origins[a],
                        second: origins[b],
                    });
                }
            }
        }
    }

    let has = |tag: &str| violations.iter().any(|v| v.tag() == tag);
    ValidationReport {
        contraction_ok: !has("contraction"),
        unit_cube_ok: !has("unit_cube"),
        coordinate_ordering_ok: !has("coordinate_ordering"),
        neat_projection_ok: !has("neat_projection"),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ifs::parse_ifs;
    use crate::Rational;

    #[test]
    fn fixtures_are_lg() {
        for ifs in [fixtures::lg5(), fixtures::lg4(), fixtures::bedford_mcmullen()] {
            let report = validate_lg(&ifs);
            assert!(report.lg_type(), "{:?}", report.violations);
            assert!(report.violations.is_empty());
        }
    }

    #[test]
    fn increasing_ratios_fail_ordering() {
        let ifs: SpongeIfs<Rational> = parse_ifs("dim 2\nmap 1/6 0 ; 1/3 0").unwrap();
        let report = validate_lg(&ifs);
        assert!(!report.coordinate_ordering_ok);
        assert!(report.neat_projection_ok);
        assert_eq!(report.violations, vec![Violation::Ordering { map: 0, coord: 0 }]);
        assert!(!report.lg_type());
    }

    #[test]
    fn overlapping_projection() {
        // (0,1/2) and (1/4,3/4) intersect on the first axis.
        let ifs: SpongeIfs<Rational> =
            parse_ifs("dim 2\nmap 1/2 0 ; 1/3 0\nmap 1/2 1/4 ; 1/3 2/3").unwrap();
        let report = validate_lg(&ifs);
        assert!(!report.neat_projection_ok);
        assert!(report.coordinate_ordering_ok);
        assert_eq!(
            report.violations,
            vec![Violation::Overlap {
                level: 1,
                first: 0,
                second: 1
            }]
        );
    }

    #[test]
    fn shared_faces_are_allowed() {
        let ifs: SpongeIfs<Rational> =
            parse_ifs("dim 2\nmap 1/2 0 ; 1/3 0\nmap 1/2 1/2 ; 1/3 0").unwrap();
        assert!(validate_lg(&ifs).lg_type());
    }

    #[test]
    fn outside_unit_cube() {
        let ifs: SpongeIfs<Rational> = parse_ifs("dim 1\nmap 1/2 3/4").unwrap();
        let report = validate_lg(&ifs);
        assert!(!report.unit_cube_ok);
        assert_eq!(report.violations, vec![Violation::UnitCube { map: 0, coord: 0 }]);
    }
}
