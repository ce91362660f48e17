//! Twisted group algebras `ℂ(Γ,σ)` for finitely generated groups with a
//! `U(1)`-valued 2-cocycle: exact multiplier arithmetic, twisted convolution,
//! projective representations, traces, finite-dimensional eta invariants and
//! spectral flow, the transfer from group to cyclic cocycles, rapid-decay
//! norms, and projections built from trivializing covers.

pub mod algebra;
pub mod cli;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod group;
pub mod linalg;
pub mod mishchenko;
pub mod multiplier;
pub mod phase;
pub mod report;
pub mod representations;
pub mod sampling;
pub mod spectral;
pub mod suites;
pub mod traces;

pub use error::{Error, Result};
pub use group::{Character, FiniteGroup, GroupDescriptor, GroupElement, Homomorphism};
pub use phase::Phase;
