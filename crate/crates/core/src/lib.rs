//! Finite-scale machinery for group actions on hyperbolic spaces.
//!
//! Everything here is pure computation over `alloc`; IO, file formats and the
//! experiment driver live in the `hypactions` crate.
//!
//! * [`group`]: free groups, Baumslag-Solitar groups and Cayley balls.
//! * [`metric`]: pseudo-lengths, Gromov products, the four-point estimator,
//!   comparators and the cone-off construction.
//! * [`lox`]: translation lengths, quasi-axes, equivalence witnesses and the
//!   isotropy probe.
//! * [`compression`]: compressed generating sets, exact compressed word
//!   lengths and the order embedding of prefix sequences.
//! * [`quasimorphism`]: Brooks and exponent-sum quasi-morphisms, defects,
//!   homogenization and anisotropy certificates.
//! * [`sl2`]: exact `SL2` over quadratic fields and its action on `H^2`.
//! * [`tight_span`]: the injective hull of a finite metric space.
#![no_std]

extern crate alloc;

pub mod compression;
pub mod group;
pub mod lox;
pub mod metric;
pub mod quasimorphism;
pub mod sl2;
pub mod tight_span;

/// Absolute tolerance used for floating comparisons against zero.
pub const ABS_TOL: f64 = 1e-12;

pub use group::{
    enumerate_ball, Ball, BaumslagSolitar, BsElement, FreeGroup, FreeWord, Generator, Group,
};
pub use metric::{FiniteMetricSpace, PseudoLength};
