//! Forward error correction with staircase and product codes.
//!
//! Building blocks:
//!
//! - [`bch`]: extended, shortened binary BCH component codes with
//!   syndrome-based bounded-distance decoding (BDD).
//! - [`modem`]: Gray-labeled M-PAM over AWGN with exact per-bit LLRs.
//! - [`staircase`] / [`window`]: the streaming staircase encoder and the
//!   sliding-window iterative decoder.
//! - [`sabm`]: soft-aided bit marking — LLR-derived bit marks drive
//!   miscorrection detection and bit-flip retries in the last window pair.
//! - [`product`]: square product codes with the same component decoders.
//! - [`genie`]: simulation-only reference decoders with access to the
//!   transmitted truth.
//! - [`metrics`], [`sim`]: error-floor estimates, complexity accounting, and
//!   the deterministic Monte-Carlo harness behind the `sabm-sim` CLI.
//!
//! The [`reference`] module holds deliberately naive reference
//! implementations (polynomial long division, exhaustive sphere search,
//! two-sum LLRs) used by the self-test suite to cross-check the fast paths.

pub mod bch;
pub mod bits;
pub mod genie;
pub mod gf;
pub mod metrics;
pub mod modem;
pub mod product;
pub mod reference;
pub mod sabm;
pub mod selftest;
pub mod sim;
pub mod staircase;
pub mod window;

use thiserror::Error;

/// Errors surfaced by code construction and the simulation harness.
#[derive(Debug, Error)]
pub enum CodeError {
    /// Requested code parameters do not describe a constructible code.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// Caller passed data of the wrong shape (length, grid, config field).
    #[error("usage error: {0}")]
    Usage(String),
}
