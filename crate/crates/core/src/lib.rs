//! Exact geometry-of-numbers toolkit for origin-symmetric convex bodies.
//!
//! The crate answers three questions about the integer points of a body `C`
//! exactly, and certifies every answer:
//!
//! * [`genpos`] builds large sets of lattice points of `C` in general position
//!   (no `n` of them linearly dependent) by lifting a discrete moment curve
//!   over a prime field into `C`.
//! * [`cover`] builds a small family of hyperplanes through the origin whose
//!   union contains `C ∩ Zⁿ`, with normals taken from a digit box spanned by
//!   the successive-minima vectors of the polar body.
//! * [`census`] enumerates the hyperplanes spanned by lattice points of a ball
//!   and measures their number and average lattice-point load.
//!
//! [`oracle`] solves the underlying covering and general-position problems by
//! exhaustive search on small instances, and [`lattice`] provides exact
//! enumeration and successive minima.
//!
//! All comparisons are exact: values of quadratic gauges are carried as
//! squared rationals ([`GaugeValue`]), and irrational roots are bracketed by
//! certified rational [`Enclosure`]s.

#![allow(clippy::needless_range_loop)]

pub mod census;
pub mod cover;
pub mod error;
pub mod genpos;
pub mod geometry;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod primes;
pub mod rational;

pub use census::{CensusReport, ClaimStats};
pub use cover::{CoverFamily, Hyperplane, MChoice, PolarMinimaProfile};
pub use error::{Error, Result};
pub use genpos::{GenPosCertificate, LowerBoundReport};
pub use geometry::{Body, BodyDescriptor, Family, GaugeValue, IntBox};
pub use lattice::{Budget, MinimaProfile, OrthogonalLattice};
pub use oracle::OracleResult;
pub use rational::{Enclosure, Rational};
