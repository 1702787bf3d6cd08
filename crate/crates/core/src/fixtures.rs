//! Systems shipped with the crate, parsed from `fixtures/*.ifs`.

use crate::ifs::{parse_ifs, SpongeIfs};
use crate::Rational;

pub const LG5: &str = include_str!("../fixtures/lg5.ifs");
pub const LG4: &str = include_str!("../fixtures/lg4.ifs");
pub const BEDFORD_MCMULLEN: &str = include_str!("../fixtures/bedford_mcmullen.ifs");
pub const OVERLAPPING: &str = include_str!("../fixtures/overlapping.ifs");

/// Five-map carpet; uniformly disconnected.
pub fn lg5() -> SpongeIfs<Rational> {
    parse_ifs(LG5).expect("lg5 fixture parses")
}

/// Four-map carpet with a tiling root fiber and singleton rank-1 fibers.
pub fn lg4() -> SpongeIfs<Rational> {
    parse_ifs(LG4).expect("lg4 fixture parses")
}

/// 3 x 5 Bedford-McMullen carpet with six cells.
pub fn bedford_mcmullen() -> SpongeIfs<Rational> {
    parse_ifs(BEDFORD_MCMULLEN).expect("bedford-mcmullen fixture parses")
}

/// Parses but fails the neat projection condition.
pub fn overlapping() -> SpongeIfs<Rational> {
    parse_ifs(OVERLAPPING).expect("overlapping fixture parses")
}

/// All shipped fixtures with their file names.
pub fn all() -> Vec<(&'static str, &'static str)> {
    vec![
        ("lg5.ifs", LG5),
        ("lg4.ifs", LG4),
        ("bedford_mcmullen.ifs", BEDFORD_MCMULLEN),
        ("overlapping.ifs", OVERLAPPING),
    ]
}
