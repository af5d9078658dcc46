//! Combinatorial framed-link diagrams for surgery presentations of 3-manifolds,
//! together with the moves (Reidemeister moves, handle slides, helper-circle
//! gadgets) needed to unlink a marked pattern link from the surgery curves, and
//! the exact integer linear algebra used to certify the result.
//!
//! The central objects:
//!
//! * [`diagram::Diagram`] — a planar-diagram (PD-style) description of a framed
//!   link with per-component roles, the single source of truth for everything.
//! * [`homology`] — linking numbers, the linking-framing matrix, Smith normal
//!   form over arbitrary-precision integers, and first homology of the surgered
//!   manifold.
//! * [`moves`] — diagram rewriting with an append-only, replayable trace.
//! * [`unlink`] — the unlinking pipeline and its certificate format.
//! * [`groups`] — Wirtinger presentations, Fox calculus, and derived-series
//!   membership checks for curves in the link exterior.

pub mod diagram;
pub mod error;
pub mod groups;
pub mod homology;
pub mod moves;
pub mod oracle;
pub mod unlink;

pub use error::{Error, Result};
