//! Entanglement and assistance measures for small multipartite quantum
//! states, plus mechanical checkers for the power-weighted polygamy
//! inequalities those measures satisfy.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`] — dense complex tensor-product linear algebra
//!   (partial trace/transpose, Hermitian eigensystems, PSD square roots,
//!   Haar sampling);
//! * [`measures`] — closed-form pure-state measures and directly computable
//!   mixed-state quantities (concurrence, entropy, negativity, Wootters);
//! * [`roof`] — ensemble optimization over all pure-state decompositions of
//!   a density operator, in both the minimizing and maximizing direction;
//! * [`assistance`] — "of assistance" quantities: concurrence of assistance,
//!   its block-sum upper bound, entanglement of assistance, SCRENoA;
//! * [`checker`] — classification and residual computation for the polygamy
//!   inequality family;
//! * [`states`] — constructors for the named state families used throughout.

pub mod assistance;
pub mod checker;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod roof;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, DensityOperator, StateVector, SubsystemLayout};
pub use measures::Bipartition;
pub use roof::{Ensemble, RoofConfig, RoofDirection, RoofResult};
