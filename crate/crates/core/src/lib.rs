//! Exact dynamics on finite metric spaces.
//!
//! Spaces carry rational distance tables, systems are index maps over them,
//! and every decision procedure works with exact arithmetic and strict
//! inequalities: balls are open, δ-steps satisfy `d(f(x), y) < δ`.
//!
//! ```
//! use dynlab_core::builders::cantor;
//! use dynlab_core::decide::{max_delta, Budget};
//! use dynlab_core::rational::q;
//!
//! let t = cantor(2).unwrap();
//! let best = max_delta(&t, &q("1/2"), Budget::default()).unwrap();
//! assert_eq!(best.value, q("1/9"));
//! ```

pub mod builders;
pub mod decide;
pub mod orbit;
pub mod rational;
pub mod recurrence;
pub mod space;
pub mod system;

pub use rational::{q, Rational, Threshold};
pub use space::{FiniteMetricSpace, PointId};
pub use system::SystemMap;
