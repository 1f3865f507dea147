//! Analysis on compact p-adic groups with exact arithmetic: Mahler
//! expansions of continuous functions, truncated distribution algebras with
//! sound tail accounting, coordinate charts of congruence groups, and the
//! transport maps between charts of nested groups.

pub mod basis;
pub mod dist;
pub mod error;
pub mod gluing;
pub mod mahler;

pub use basis::{Chart, ChartCoords};
pub use dist::{DistSeries, MultiIndex, NormExponent, SeriesShape, Tail};
pub use error::{Error, Result};
pub use gluing::{tree_pair_map, GluingMap};
pub use mahler::{
    decay_margins, eval_mahler, forward_differences, mahler_coeffs, poly_values, power_to_mahler,
    stirling2, DecayReport,
};
