//! Exact computation with exponential tropical varieties: framed polyhedral
//! sets in `C^n`, their boundary and positivity, dual fans, stable
//! intersections, Monge-Ampère measures of piecewise-linear functions and
//! the vanishing criterion for mixed Monge-Ampère measures.

pub mod current;
pub mod degeneracy;
pub mod dual_fan;
pub mod error;
pub mod exterior;
pub mod framed;
pub mod intersection;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod monge;
pub mod polyhedron;
pub mod scalar;

pub use error::{EtvError, Result};
