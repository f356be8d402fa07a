//! Metric geometry on Denjoy domains.
//!
//! A Denjoy domain is a plane domain `Ω = ℂ \ E` whose boundary `E` lies on
//! the real axis. This crate works with such domains through their gaps (the
//! open intervals of `Ω ∩ ℝ`) and provides:
//!
//! * boundary distance `δ` and the Beardon–Pommerenke function `β`
//!   ([`GapDomain`]),
//! * the quasihyperbolic density `1/δ` and two densities bracketing the
//!   hyperbolic metric, with path lengths by adaptive quadrature
//!   ([`density`]),
//! * approximate geodesics from shortest paths on a boundary-graded quadtree
//!   followed by polyline refinement ([`solver`]),
//! * Gromov hyperbolicity criteria in terms of gap sequences, and numerical
//!   diagnostics for domains the criteria do not decide ([`hyperbolicity`]).
//!
//! ```
//! use denjoy::{GapDomain, PlanePoint};
//! use denjoy::density::{path_length, MetricKind};
//! use denjoy::path::PolylinePath;
//!
//! // the slit plane ℂ \ (−∞, 0]
//! let slit = GapDomain::from_pairs(&[(0.0, f64::INFINITY)]).unwrap();
//! let seg = PolylinePath::segment(PlanePoint::new(0.0, 1.0), PlanePoint::new(0.0, 2.0)).unwrap();
//! let k = path_length(&slit, &seg, MetricKind::Quasihyperbolic, 1e-10).unwrap();
//! assert!((k - 2f64.ln()).abs() < 1e-9);
//! ```

pub mod density;
pub mod domain;
pub mod error;
pub mod generator;
pub mod hyperbolicity;
pub mod io;
pub mod path;
pub mod quadrature;
pub mod quasigeodesic;
pub mod solver;

/// A point of the complex plane.
pub type PlanePoint = num_complex::Complex64;

pub use domain::{BoundaryDistance, Component, Ext, Gap, GapDomain};
pub use error::{Error, Result};
pub use generator::GeneratorSpec;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/domains.md")]
    mod domains {}
    #[doc = include_str!("../../../book/src/densities.md")]
    mod densities {}
    #[doc = include_str!("../../../book/src/geodesics.md")]
    mod geodesics {}
    #[doc = include_str!("../../../book/src/hyperbolicity.md")]
    mod hyperbolicity {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
