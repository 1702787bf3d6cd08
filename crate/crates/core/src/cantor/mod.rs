//! Interval models of the attractor of special systems and the
//! bi-Lipschitz comparison with the attractor.

mod binary;
mod lipschitz;
mod system;
mod tree;

pub use binary::{to_binary_tree, BinaryCantorTree};
pub use lipschitz::{
    bilipschitz_check, check_endpoint_bounds, lipschitz_constants, BilipschitzReport, LipschitzConstants,
};
pub use system::{analyze_special_system, SeriesConstants, SpecialSystem};
pub use tree::{build_cantor_tree, cylinder_length, CantorTree};
