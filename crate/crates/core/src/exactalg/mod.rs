//! Exact scalar, sparse-polynomial and truncated-series arithmetic with
//! residue extraction: the algebraic substrate of every other module.

pub mod poly;
pub mod rational;
pub mod ring;
pub mod series;

pub use poly::{MultiPoly, PolyVar};
pub use rational::{binom, binom_general, factorial, Rational};
pub use ring::Ring;
pub use series::{laurent_div, Series, Var, ORD_INF};
