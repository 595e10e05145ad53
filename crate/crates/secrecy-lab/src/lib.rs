//! Average secrecy capacity of a vehicle-to-vehicle link under co-channel
//! interference and double-Rayleigh fading.
//!
//! The library evaluates the MGF-form capacity pipeline: closed-form moment
//! generating functions of the fading/interference variates, a two-panel
//! adaptive quadrature for the semi-infinite capacity integral, and a
//! seeded Monte-Carlo oracle that cross-checks every analytic quantity.
//!
//! The longer guide with derivations lives in `book/`; the snippets there
//! mirror the doc-tests below.
//!
//! # Quick start
//!
//! ```
//! use secrecy_lab::capacity::{average_secrecy_capacity, QuadratureConfig};
//! use secrecy_lab::channel::SystemParams;
//!
//! let params = SystemParams::default(); // P_s = P_K = 10 W, r_D = 4 m, ...
//! let r = average_secrecy_capacity(&params, &QuadratureConfig::default()).unwrap();
//! assert!(r.c_d > r.c_e);
//! assert!((r.c_s - (r.c_d - r.c_e)).abs() < 1e-15);
//! ```
//!
//! Cross-checking against the Monte-Carlo estimator:
//!
//! ```
//! use secrecy_lab::channel::SystemParams;
//! use secrecy_lab::montecarlo::estimate_capacities;
//!
//! let params = SystemParams::default();
//! let mc = estimate_capacities(&params, 50_000, 42).unwrap();
//! // the clamped estimator dominates the raw difference
//! assert!(mc.c_s_max.mean >= mc.c_s_diff.mean);
//! // identical seed and sample count reproduce bit-identically
//! let again = estimate_capacities(&params, 50_000, 42).unwrap();
//! assert_eq!(mc.c_d.mean.to_bits(), again.c_d.mean.to_bits());
//! ```

pub mod capacity;
pub mod channel;
pub mod cli;
pub mod error;
pub mod mgf;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
