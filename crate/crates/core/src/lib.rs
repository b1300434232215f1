//! Super quantum discord of two-qubit X states under weak measurements.
//!
//! The discord under a weak measurement of strength `x` on subsystem B is
//! computed from a one-variable reduction: the optimization over all
//! measurement bases collapses onto the objective F(z) on [0, 1], which is
//! minimized by a safeguarded grid + Newton scheme with closed-form endpoint
//! fast paths as cross-checks. Phase-damping dynamics and an independent
//! operator-level brute-force oracle round out the crate.
//!
//! The typical pipeline:
//!
//! ```
//! use sqdx::{weakmeas::FContext, sqd::super_quantum_discord, xstate};
//!
//! let state = xstate::example_three();
//! let ctx = FContext::new(state.bloch(), 3.0).unwrap();
//! let report = super_quantum_discord(&ctx).unwrap();
//! assert!((report.sqd - 0.1332).abs() < 5e-4);
//! assert!((report.opt.z_hat - 0.47747).abs() < 1e-4);
//! ```

pub mod channel;
pub mod entropy;
pub mod format;
pub mod mat;
pub mod optimizer;
pub mod oracle;
pub mod sqd;
pub mod weakmeas;
pub mod xstate;

pub use channel::DampingParams;
pub use optimizer::{Case, CaseLabel, Method, OptimizationResult};
pub use sqd::SqdReport;
pub use weakmeas::FContext;
pub use xstate::{BlochX, SpectrumX, XDensityMatrix};
