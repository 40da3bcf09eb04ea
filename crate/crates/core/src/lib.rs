//! Finite-alphabet toolkit for studying joint source-channel coding under a
//! distortion constraint plus a realism ("perception") constraint.
//!
//! The crate is organized in four layers:
//!
//! - [`probcore`]: distributions, channels, joint laws, distortion tables and
//!   the information measures everything else is built on.
//! - [`perception`]: block-level perception measure families together with
//!   executable checks of the regularity assumptions they are expected to
//!   satisfy (sub-decomposability, TV-continuity, convexity).
//! - [`rdp`]: numerical solvers — channel capacity, the weak-sense
//!   rate-distortion-perception region, and the no-common-randomness
//!   perfect-realism oracle.
//! - [`schemes`]: executable coding schemes (uncoded, zero-rate realism,
//!   quantize-and-restore, common-randomness synthesis, separated pipelines,
//!   concatenation) with exact and Monte Carlo evaluators plus converse and
//!   coupling audits.
//!
//! All randomness in the crate flows from a single 64-bit seed through the
//! tagged substream discipline in [`seed`], so every result is reproducible
//! regardless of evaluation order.

pub mod error;
pub mod perception;
pub mod probcore;
pub mod rdp;
pub mod schemes;
pub mod seed;

pub use error::{CoreError, Result};
