//! Maximum spanning trees of planar point sets under arbitrary norms.
//!
//! The crate builds the furthest-neighbor graph of a point set, stitches its
//! components into the unique maximum spanning tree, solves the
//! min-max-diameter 2-clustering problem on top of that tree, and provides a
//! perturbation procedure that makes all pairwise distances distinct in
//! strictly convex norms. Brute-force oracles for every construction live
//! next to the fast paths, and [`invariants`] exposes the structural
//! properties of the graph and the tree as executable checks.
//!
//! ```
//! use mxst_core::{mxst_mpsy, NormSpec, PointSet, Vec2};
//!
//! let pts = PointSet::new(vec![
//!     Vec2::new(0.0, 0.0),
//!     Vec2::new(3.0, 0.0),
//!     Vec2::new(0.0, 4.0),
//! ])?;
//! let (tree, _) = mxst_mpsy(&NormSpec::euclidean(), &pts, 1e-9)?;
//! assert_eq!(tree.total_weight, 9.0);
//! # Ok::<(), mxst_core::Error>(())
//! ```

pub mod clustering;
pub mod error;
pub mod fng;
pub mod geometry;
pub mod invariants;
pub mod mxst;
pub mod norm;
pub mod perturb;
pub mod points;
pub mod random;
pub mod vec2;

pub use clustering::{
    diameter, separating_line, stabbing_line, two_clustering, two_clustering_bruteforce, Bipartition, Line,
};
pub use error::{Error, Result};
pub use fng::{build_fng, furthest_neighbor, order_components, ComponentCycle, FNGraph};
pub use geometry::{
    convex_hull, is_convex_quadrilateral, orientation, point_in_triangle, segments_properly_intersect, HullIndex,
    Orientation, Segment,
};
pub use mxst::{
    mxst_bruteforce, mxst_mpsy, mxst_mpsy_detailed, validate_tree, ConnectingEdgeReport, MxstRun, SpanningTree,
    WeightedEdge,
};
pub use norm::{
    bisector_point, birkhoff_orthogonal, distance, evaluate_norm, is_strictly_convex, sample_bisector, BisectorSample,
    NormKind, NormSpec, DEFAULT_TOL,
};
pub use perturb::{perturb_distinct, PerturbReport, PerturbStep};
pub use points::{detect_ties, min_distance_gap, pairwise_distances, DistanceTable, PointSet, Tie};
pub use vec2::Vec2;
