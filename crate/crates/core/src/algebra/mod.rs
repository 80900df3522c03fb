//! Finite fields, quadratic nearfields and Stein's quasigroup construction of
//! division sudokus with many synchronized partitions.

pub mod construct;
pub mod field;
pub mod nearfield;
pub mod subspace;

pub use construct::{
    construction_report, default_c, stein_field_square, stein_nearfield_square, ConstructionKind,
    ConstructionReport,
};
pub use field::GaloisField;
pub use nearfield::QuadraticNearfield;
pub use subspace::{coset_partition, good_subspaces, intersection_conditions, subspaces, Subspace};
