//! Bounds on temporal quantum correlations.
//!
//! Sequential projective measurements on a single system produce correlations
//! that are richer than spatial ones but still bounded away from the algebraic
//! maximum. This crate computes those bounds with two semidefinite programs:
//!
//! * the correlation-matrix program for expressions built from two-measurement
//!   correlators of ±1 observables ([`sdp::solve_correlation`]), and
//! * the moment-matrix program over leave-one-out projector words for arbitrary
//!   sequential probabilities ([`moment::build_problem`], [`sdp::solve_moment_ipm`],
//!   [`sdp::solve_moment_admm`]).
//!
//! Alongside the quantum value it computes the memoryless classical value and the
//! algebraic maximum over deterministic strategies with memory ([`classical`]),
//! and turns optimal solutions into explicit Hilbert-space realizations that are
//! replayed through a Lüders measurement simulator ([`realize`]).

pub mod catalog;
pub mod classical;
pub mod cli;
pub mod error;
pub mod moment;
pub mod numerics;
pub mod opalg;
pub mod realize;
pub mod regions;
pub mod scenario;
pub mod sdp;

pub use error::{Error, Result};
pub use moment::{MomentIndex, MomentProblem};
pub use numerics::SymMatrix;
pub use opalg::{Letter, LinComb, Word};
pub use realize::QuantumRealization;
pub use scenario::{ObjectiveTerm, Scenario, TermKind};
pub use sdp::{CorrelationProblem, SdpSolution};
