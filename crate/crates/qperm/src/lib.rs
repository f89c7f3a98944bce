//! Exact Weingarten calculus over quantum permutation groups and
//! transitivity analysis of flat matrix models.
//!
//! The crate has two halves that meet in the middle:
//!
//! * An exact side: set partitions, Gram matrices G(p, q) = n^{|p v q|},
//!   and their big-rational inverses, giving Haar-state moments of the
//!   coordinates of S_N and its free analogue S_N^+ ([`weingarten`]),
//!   plus honest finite-group averaging for comparison ([`permgroup`]).
//! * A numerical side: flat magic unitaries built from complex Hadamard
//!   matrices, Weyl systems, and finite groups ([`generators`]), and the
//!   transfer-matrix machinery that decides how transitive such a model
//!   is ([`models`]).
//!
//! Everything downstream of the exact side is bit-reproducible; the
//! numerical side pins its tolerances in [`models::AnalysisConfig`].

pub mod partitions;
pub(crate) mod exact;
pub mod generators;
pub mod graphs;
pub(crate) mod linalg;
pub mod models;
pub mod permgroup;
pub mod weingarten;
