//! Exact intersection theory on the special fibers of the minimal regular
//! model of the Fermat curve `x^N + y^N = z^N`, for `N` odd, squarefree and
//! composite, together with the resulting bounds on the self-intersection of
//! the relative dualizing sheaf.

pub mod bounds;
pub mod check;
pub mod divisor_calc;
pub mod error;
pub mod fermat_model;
pub mod fiber_graph;
pub mod numtheory;
pub mod polyarith;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
