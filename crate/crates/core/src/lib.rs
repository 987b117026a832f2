//! Precoded polar product codes.
//!
//! Component codes are polar codes with dynamic frozen bits (precoded polar
//! codes). Two of them form a product code whose rows and columns are
//! decoded alternately with soft-output SCL decoding and extrinsic exchange.
//!
//! Modules, bottom-up:
//! - [`gf2`]: packed binary vectors and matrices
//! - [`polar`]: component code specs, encoding, membership, catalog, spec files
//! - [`scl`]: SC / SCL decoding and list-based soft output
//! - [`oracle`]: exhaustive WEF, ML and exact APP references
//! - [`product`]: product composition, 2-D encoding, truncated union bound
//! - [`turbo`]: iterative row/column decoding
//! - [`channel`]: BPSK over AWGN and the Monte Carlo error-rate harness
//! - `cli`: the `polarprod` command line (feature `cli`)

pub mod channel;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod polar;
pub mod product;
pub mod scl;
pub mod turbo;

pub use error::{Error, Result};
