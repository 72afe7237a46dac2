//! Finite-truncation laboratory for differences of spectral projections.
//!
//! Given self-adjoint `T` and a finite-rank (or compact) self-adjoint `S`,
//! the central object is
//!
//! ```text
//! D(λ) = E_(-∞,λ)(T + S) − E_(-∞,λ)(T)
//! ```
//!
//! computed on finite truncations. The crate builds the operators
//! ([`gallery`]), computes and decomposes `D(λ)` ([`lab`]), handles the
//! Hankel side ([`hankel`]), the resolvent reduction of semibounded
//! problems ([`cayley`]), the spectral-measure picture of rank-one
//! perturbations ([`liaw_treil`]) and batch experiments ([`experiment`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod cayley;
pub mod gallery;
pub mod hankel;
pub mod lab;
pub mod liaw_treil;
pub mod spectral;

pub use error::{LabError, Result};
pub use spectral::{
    eig_sym, min_singular_value, numerical_kernel_dim, spectral_projector, EigSystem,
    IntervalKind, Projector, SymOp, TiePolicy,
};
