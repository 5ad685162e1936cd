//! Exact interval certificates for convex hulls of graph-quadratic functions.

// Errors carry the offending exact values; boxing them buys nothing here.
#![allow(clippy::result_large_err)]

pub mod envelope;
pub mod graph;
pub mod interval;
pub mod lp;
pub mod rational;
pub mod relax;
pub mod split;
pub mod verify;
pub mod wheel;

pub use graph::{Family, Graph, GraphError};
pub use interval::{IntervalError, IntervalSet};
pub use rational::{Rational, RationalError};
pub use relax::{Assignment, LinearSystem, Relation, Row, RowFamily, Var, ZRow};
