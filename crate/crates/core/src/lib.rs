//! Combinatorial geometry of finite function classes.
//!
//! The crate computes, exactly where possible and with explicit bounds where
//! not:
//!
//! * the fat-shattering dimension `v(F, t)` of a class ([`dimension`]);
//! * integer cells of coordinate convex hulls and the cell content
//!   `Σ(A)` ([`lattice`]);
//! * Lorentz norms, the tower norm and comparison functions ([`lorentz`]);
//! * packing and covering numbers and the resulting entropies ([`packing`]);
//! * separating trees ([`trees`]);
//! * Gaussian and Rademacher suprema, entropy and dimension integrals
//!   ([`processes`]);
//! * M-estimates and coordinate sections of symmetric polytopes
//!   ([`sections`]).
//!
//! [`suites`] bundles the seeded property suites that check the inequalities
//! linking these quantities, with constants pinned in [`calibration`].

pub mod calibration;
pub mod class;
mod combin;
pub mod clique;
pub mod dimension;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod lorentz;
pub mod packing;
pub mod processes;
pub mod sections;
pub mod simplex;
pub mod suites;
pub mod trees;

pub use class::{affine_image, load_class, lp_norm, Format, FunctionClass, Measure, Seed};
pub use error::{Error, Result};
