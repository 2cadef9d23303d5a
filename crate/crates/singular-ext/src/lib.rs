//! Finite-rank singular perturbations of a lower-semibounded self-adjoint
//! operator, in diagonal (spectral) form.
//!
//! The crate builds the model space for a perturbation of order `m` and rank
//! `d`, equips it with an indefinite Gram metric, and exposes two extension
//! pictures: an operator model acting on the full model space and a linear
//! relation model acting over its minimal subspace. On top of those it
//! provides boundary maps, gamma fields, Weyl functions, Krein-Naimark and
//! compressed resolvent formulas, and Nevanlinna-Pick diagnostics.
//!
//! All series are truncated at a configurable level `N`; evaluations carry
//! tail reports so callers can tell a converged value from a truncation
//! artifact.

pub mod boundary;
pub mod cli;
pub mod conditions;
pub mod config;
pub mod error;
pub mod model;
pub mod nevanlinna;
pub mod operator_model;
pub mod relation_model;
pub mod report;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
