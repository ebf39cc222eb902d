//! Complex linear algebra, polynomial roots and the tolerance policy.

pub mod matrix;
pub mod poly;
pub mod tolerance;

pub use matrix::{det, rank_factorize, solve_linear, CMatrix, LinearSolution, RankFactorization, C64};
pub use poly::{poly_roots, Poly};
pub use tolerance::{ToleranceContext, ToleranceProfile};
