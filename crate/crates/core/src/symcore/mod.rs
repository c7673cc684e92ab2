//! Exact rational-function arithmetic, linear elimination and generic rank.

pub mod chart;
pub mod expr;
pub mod linsolve;
pub mod poly;
pub mod rank;
pub mod scalar;

pub use chart::{Chart, Coordinate, Names, Role};
pub use expr::{normalize, parse_expr, scalar, Expr, ParseError};
pub use linsolve::{solve_linear, LinearSolveResult};
pub use poly::{Monomial, Poly, Rat, Var};
pub use rank::{random_rank, DEFAULT_SAMPLES};
pub use scalar::Scalar;

/// True iff the canonical numerator vanishes.
pub fn is_zero(s: &Scalar) -> bool {
    s.is_zero()
}

pub fn partial(s: &Scalar, v: Var) -> Scalar {
    s.partial(v)
}
