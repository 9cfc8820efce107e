//! Exact invariants, resolution and classification of parametrised curve
//! singularities (multi-germs) over the rationals.
//!
//! All arithmetic is exact: rational coefficients of arbitrary precision,
//! optionally polynomial in one deformation parameter `s`. The crate provides
//!
//! - truncated formal power series and polynomial substitution ([`series`]),
//! - analytic invariants of multi-germs computed by jet linear algebra:
//!   multiplicity, value semigroup, delta invariant, embedding dimension,
//!   tangent data, planar 2-jets, wedge decomposition ([`germ`]),
//! - embedded resolution of plane germs by iterated blow-up, multiplicity
//!   sequences, satellite points, modality and A-D-E recognition ([`plane`]),
//! - a machine-readable catalogue of normal forms with defining equations,
//!   an adjacency graph, and entry verification ([`atlas`]),
//! - one-parameter deformation families over Q`[s]` with exact specialization
//!   and congruence checks ([`deform`]),
//! - a classifier deciding simplicity of an input parametrisation
//!   ([`classify`]),
//! - the germ notation parser and printer ([`notation`]).

pub mod rat;

pub mod coeff;
pub mod series;

pub mod linalg;

pub mod germ;
pub mod plane;

pub mod notation;

pub mod deform;

pub mod atlas;

pub mod classify;

pub use germ::{Branch, MultiGerm, SemigroupData, Signature};
pub use series::{MPoly, Series, Var};
