//! Exact computations on the matching arrangement of a graph and the
//! LP-orientations of its matching polytope.
//!
//! The pipeline runs from a [`Graph`] to its [`Arrangement`] of alternating
//! path and even-cycle hyperplanes, the [`Region`]s of that arrangement and
//! its [`CharPoly`], the Edmonds inequality system and [`Skeleton`] of the
//! matching polytope, and finally the [`Orientation`]s induced on the
//! skeleton by linear functionals. [`verify_bijection`] checks that regions
//! and LP-orientations correspond one to one.
//!
//! All arithmetic is exact.

pub mod arrangement;
pub mod error;
pub mod graph;
pub mod orientation;
pub mod polytope;

pub use arrangement::charpoly::{characteristic_polynomial, count_complement, CharPoly};
pub use arrangement::region::{enumerate_regions, Region};
pub use arrangement::{
    build_matching_arrangement, region_of_point, sequence_to_hyperplane, Arrangement, Hyperplane, Sign,
};
pub use error::{Error, Result};
pub use graph::{
    enumerate_matchings, enumerate_sequences, parse_graph, EdgeSeq, EdgeSetKind, Graph, Matching, SequenceKind,
    DEFAULT_SEQUENCE_CAP,
};
pub use orientation::{
    enumerate_lp_orientations, orient_by_functional, orientation_properties, verify_bijection, BijectionReport,
    Direction, Orientation, OrientationProperties,
};
pub use polytope::{
    brute_force_vertices, build_skeleton, check_matchings_feasible, edmonds_inequalities, hyperplane_to_skeleton_edge,
    matching_to_vertex, InequalitySystem, Row, RowKind, Skeleton,
};

/// Exact rational scalar used for points and functionals.
pub type Rational = num_rational::BigRational;
