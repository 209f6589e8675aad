//! Semi-cyclic quantum invariants of links carrying a representation into the
//! Borel subgroup of `SL2(C)`, presented as colored braid closures.
//!
//! The pipeline: colors `(kappa, eps)` on the strands of a braid that are fixed
//! by the Yang-Baxter action ([`braid`], [`group`]) determine semi-cyclic
//! modules of the small quantum group at `xi = exp(2 pi i / N)`
//! ([`semicyclic`]). Holonomy braidings between them compose to a braid
//! operator whose modified Markov trace is the invariant ([`invariant`]).

pub mod braid;
pub mod error;
pub mod group;
pub mod invariant;
pub mod json;
pub mod qnum;
pub mod semicyclic;
pub mod verify;

pub use braid::{BraidWord, ColorTuple};
pub use error::{Error, Result};
pub use group::GStarColor;
pub use invariant::{ado_invariant, conjecture_compare, invariant, InvariantResult};
pub use qnum::{RootContext, C64};
pub use semicyclic::{holonomy_matrix, SemicyclicParams};
