//! Simulation and optimisation toolkit for robotic aerial base stations
//! (RABS): drones that perch on lampposts to serve as small cells.
//!
//! The crate compares perching RABS against hovering, tethered and
//! laser-powered aerial base stations on coverage and 24 h energy, and
//! against static micro base stations on day-long traffic offloading.
//!
//! - [`scenario`]: area, user drops, lamppost grid, seeded substreams
//! - [`channel`]: air-to-ground and urban street-canyon path loss, coverage radius
//! - [`platform`]: platform kinds, feasible regions, laser, gripper, endurance, noise
//! - [`placement`]: single-disk placement and lamppost subset selection
//! - [`energy`]: 24 h energy ledgers and recharge counts
//! - [`traffic`]: spatio-temporal demand, per-epoch redeployment, static baseline
//! - [`harness`]: Monte Carlo driver, JSON config, CSV output

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod energy;
mod error;
pub mod harness;
pub mod placement;
pub mod platform;
pub mod scenario;
pub mod traffic;

pub use error::{Error, Result};
