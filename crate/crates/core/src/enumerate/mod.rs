//! Curve enumeration: self-intersection numbers, simple closed geodesics and
//! Markoff-type tuples.

pub mod intersect;
pub mod markoff;
pub mod simple;

pub use intersect::{is_simple, self_intersection_number, IntersectionCount, SimplicityTester};
pub use markoff::{markoff_bruteforce, markoff_orbit, vieta_move, MarkoffConfig, MarkoffTuple};
pub use simple::{enumerate_simple, CurveRecord, SidedFilter, SimpleCurves};
