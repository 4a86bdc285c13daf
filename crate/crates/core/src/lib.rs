//! Success probability and harvested energy for simultaneous wireless
//! information and power transfer in 3-D Poisson bipolar networks whose
//! transmitters use sectorized antenna arrays.
//!
//! The crate has two independent routes to every metric:
//!
//! * [`analytics`] evaluates closed forms built on the interference Laplace
//!   transform and mean in [`interference`];
//! * [`montecarlo`] simulates the network directly.
//!
//! [`experiments`] sweeps either route over one parameter and writes CSV.
//! The `swipt` binary exposes all of it on the command line.

pub mod analytics;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod interference;
pub mod montecarlo;
pub mod network;
pub mod quadrature;
pub mod units;

pub use error::{Error, Result};
pub use network::{Scheme, SystemParams};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/units.md")]
    mod units {}
    #[doc = include_str!("../../../book/src/interference.md")]
    mod interference {}
    #[doc = include_str!("../../../book/src/sectorization.md")]
    mod sectorization {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
}
