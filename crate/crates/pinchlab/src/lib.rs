//! Numerical laboratory for curvature-pinched mean curvature flow.
//!
//! The crate is organized around five subsystems:
//!
//! * [`frame`] — pointwise algebra of the (vector-valued) second fundamental
//!   form at a single point of an immersed submanifold: principal-normal
//!   decomposition, normal curvature, reaction and gradient identities, and
//!   the commutator estimates used in non-convex regions.
//! * [`constants`] — every explicit dimensional constant of the estimates
//!   (`c_n`, `delta`, `sigma`, `C0`, `gamma0`, `C1`, ...), the Young-constant
//!   optimizer, and the constraint system that pins the admissible pinching
//!   ratio.
//! * [`exact`] — closed-form solution families (round spheres, generalized
//!   cylinders, codimension-two sphere products) with analytic curvature,
//!   shrinker residuals, and pinching classification.
//! * [`flow`] — reduced flows (sphere-product ODE, rotationally symmetric
//!   profile PDE) with per-step curvature diagnostics and estimate monitors.
//! * [`gaussian`] — Gaussian-weighted integrals, discrete monotonicity
//!   checks, the `F`/`J` comparison functionals, and the ancient-ODE
//!   rigidity bound.
//!
//! Randomized verification suites live in [`suites`]; they shard across
//! threads when the `parallel` feature (default) is enabled and fall back to
//! a sequential driver otherwise. Identical seeds produce identical reports
//! in either mode.

pub mod constants;
pub mod exact;
pub mod flow;
pub mod frame;
pub mod gaussian;
pub mod linalg;
pub mod parallel;
pub mod sample;
pub mod suites;

pub use frame::{Dimensions, FrameError, GradSffTensor, SffTensor};
