//! Scalars, linear algebra, LP feasibility with certificates, and small
//! cone geometry.

pub mod hull;
pub mod linalg;
pub mod lp;
pub mod rays;
pub mod scalar;

pub use hull::{conic_decompose, in_convex_hull, ConicResult, HullResult};
pub use linalg::{nullspace, rank, solve_in_span};
pub use lp::{LinearProgram, LpOutcome};
pub use rays::{extreme_rays, RAY_DIM_LIMIT};
pub use scalar::{Scalar, Tolerance};

pub use num_rational::BigRational as Rational;
