//! Brute-force geometric oracles: `delta`-components of finite families of
//! boxes and points, `delta0`-sequences, pre-Moran sets, approximate squares
//! and the diameter bounds built on them.

mod chains;
mod moran;
mod partition;
mod profile;
mod square;
mod union;

pub use chains::{
    critical_deltas_sq, delta0_sequence_exists, delta0_sequence_exists_sq, max_ratio_sq,
    uniform_constant_sq,
};
pub use moran::{check_moran_bound, check_moran_bounds, pre_moran_intervals, MoranReport, PreMoranSet, SimpleIfsFamily};
pub use partition::{
    delta_components, delta_components_sq, point_components, ComponentPartition, PointSet,
};
pub use profile::{component_diameter_profile, max_profile_ratio_sq, ProfileRow};
pub use square::{approx_square, check_product_decomposition, ApproxSquare};
pub use union::{check_union_bound, UnionBoundReport};

/// Default limit on the number of enumerated objects.
pub const DEFAULT_CAP: usize = 200_000;
