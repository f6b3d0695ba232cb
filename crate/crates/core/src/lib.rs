//! Planar curve algorithms: Fréchet distances, free-space diagrams,
//! globally optimal and bi-criteria polyline simplification, and p-mean
//! representative curves of trajectory sets.
//!
//! The crate is organised in five modules:
//!
//! - [`geom`]: exact-tolerance planar primitives (points, segments,
//!   polylines, disk/segment intersections).
//! - [`frechet`]: free-space diagrams, the Fréchet decision problem and
//!   distance value, monotone matchings, and the discrete Fréchet DP.
//! - [`simplify`]: the event-graph machinery for min-k / min-ε
//!   simplification, the bi-criteria algorithm, and baseline simplifiers.
//! - [`pmean`]: p-mean representative curves of curve sets.
//! - [`oracle`]: deliberately slow brute-force references used by tests.

pub mod frechet;
pub mod geom;
pub mod oracle;
pub mod pmean;
pub mod simplify;

pub use frechet::{
    decide_frechet, discrete_frechet, frechet_distance, frechet_matching, FreeSpaceCell,
    FreeSpaceDiagram, Matching,
};
pub use geom::{
    ball_segment_intersection, collinear_continuation, point_segment_distance, Point, Polyline,
    Segment, Tolerance,
};
pub use pmean::{PExponent, PMeanResult};
pub use simplify::{SimplificationResult, VertexMode};
