//! Deterministic numerical laboratory for FR3 integrated sensing and
//! communication (ISAC) studies.
//!
//! The crate is organized around a shared physical substrate ([`array`]:
//! uniform linear arrays, near-/far-field steering, beampatterns) and a set
//! of analyses built on top of it:
//!
//! * [`squint`] — intra- and inter-beam squint of fixed phase-shifter
//!   beamformers operated away from their design carrier.
//! * [`estimation`] — Fisher information and Cramér-Rao bounds for joint
//!   near-field (range, angle) estimation, the Fraunhofer boundary, and a
//!   channel-hardening Monte Carlo check.
//! * [`alignment`] — two-tier hierarchical beam alignment (coarse low-band
//!   scan, fine upper-band refinement).
//! * [`raas`] — slot-based scheduling of radar sensing windows under a
//!   cellular frame grid with pairwise interference control.
//! * [`payload`] — deterministic-random tradeoff instrumentation: OFDM frame
//!   synthesis, constellation kurtosis, and ambiguity-function sidelobe
//!   statistics.
//! * [`tracking`] — a drone-localization case study composing link budgets,
//!   estimation bounds, and squint losses into RMSE-vs-distance curves.
//!
//! Everything is pure and deterministic: Monte Carlo operations take explicit
//! seeds and derive independent per-trial streams, so results do not depend
//! on execution order or thread count.

// `!(x > 0.0)` guards reject NaN along with non-positive values; the
// un-negated comparison would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alignment;
pub mod array;
pub mod estimation;
pub mod mc;
pub mod payload;
pub mod raas;
pub mod squint;
pub mod tracking;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
