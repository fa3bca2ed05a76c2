//! Weak inverse mean curvature flow on warped products `dr^2 + f(r)^2 g_S`.
//!
//! * [`warped`]: the manifold model, sphere areas, volumes, mean curvature.
//! * [`symmetric`]: exact rotationally symmetric weak solutions and their jumps.
//! * [`discrete`]: cell complexes, the `J` functional, min-cut minimizers and
//!   exhaustive oracles, certification of discretized solutions.
//! * [`hull`]: least-area problems and strictly outward minimizing hulls.
//! * [`profile`]: isoperimetric profiles and non-degeneracy diagnostics.
//! * [`bounds`]: a-priori radius bounds on sublevel sets.
//! * [`conic`]: exhaustion by conic cutoffs and the limit solution.
//! * [`scenario`]: JSON scenarios and the pipelines behind the `imcf` binary.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod conic;
pub mod discrete;
pub mod error;
pub mod hull;
pub mod profile;
pub mod quadrature;
pub mod scenario;
pub mod symmetric;
pub mod warped;

pub use error::{Error, Result};
pub use profile::{IsoProfile, StrongProfile};
pub use symmetric::{solve, SymmetricSolution};
pub use warped::{SampledWarp, Warp, WarpedManifold};
