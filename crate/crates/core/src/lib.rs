//! Hyperbolic cone structures on link complements.
//!
//! The crate solves the log-form gluing equations of an ideal triangulation,
//! deforms the complete structure along rays in meridian-trace space to cone
//! structures with prescribed cone angles, and tracks volume and degeneration
//! along the way. A separate [`metriclab`] module checks the curvature sign of
//! explicit warped-product metrics used to smooth cone singularities and
//! flatten cusps.
//!
//! Conventions used throughout:
//! - an elliptic element of rotation angle `θ` has trace `±2 cos(θ/2)`;
//! - the meridian log-holonomy of a cone structure with angle `θ` is `iθ`,
//!   and `0` at the complete (cusped) structure;
//! - cone angles are in radians.

// Negated comparisons reject NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuation;
pub mod error;
pub mod metriclab;
pub mod mobius;
pub mod quadrature;
pub mod triangulation;
pub mod volume;

pub use continuation::{
    continue_to_angles, continue_to_traces, injectivity_proxy, solve_complete, sweep, trace_map, AngleMode,
    ConeTarget, ContinuationOptions, ContinuationPath, ContinuationSample, ExtendedAck, PathStatus, SweepMode, SweepRow,
};
pub use error::{Error, Result};
pub use mobius::{all_elliptic_probe, BoundaryPoint, IsometryClass, MobiusTransform};
pub use triangulation::{euclidean_cone_surface_check, load, GluingSystem, IdealTriangulation, ShapeAssignment};
pub use volume::{lobachevsky, nu, tetra_volume, volume_report, VolumeReport};
