//! Numeric iterated monodromy actions of complex polynomials.
//!
//! The preimage tree of a basepoint `t` is encoded by words through
//! connecting paths `ℓ_x` from `t` to the preimages of `t`. Generator loops
//! around postcritical points act on the tree by path lifting; comparing the
//! resulting permutations with a presentation verifies a wreath recursion,
//! and lifting the loops `ℓ_x γ_x ℓ_y⁻¹` infers one.

mod action;
mod geometry;
mod julia;
mod lambda;
mod lift;
mod path;
mod poly;

pub use action::{
    infer_recursion, loop_permutations, monodromy_permutations, verify_recursion, MonodromyAction,
    VerifyReport,
};
pub use geometry::{default_geometry, detour_segment, DetourSide, Geometry, GeometryOptions, LOOP_RADIUS_FACTOR};
pub use julia::{cloud_csv, directed_hausdorff, hausdorff, julia_cloud};
pub use lambda::{build_lambda, PreimageTree, EPS_MATCH, MIN_SEPARATION, RATIO_TEST};
pub use lift::{lift_chain, lift_chain_path, lift_path, LiftOptions, ENDPOINT_TOLERANCE};
pub use path::Polyline;
pub use poly::{polynomial_roots, PolynomialMap};
