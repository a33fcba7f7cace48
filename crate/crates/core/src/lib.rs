//! Trajectory-coherent states of the damped (Caldirola–Kanai) oscillator.
//!
//! Closed-form classical and variational trajectories, Fock and coherent
//! states on them, their observables and uncertainty products, and a set of
//! independent numerical checks.

pub mod battery;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod kernel;
pub mod observables;
pub mod params;
pub mod quad;
pub mod states;
pub mod verify;

pub use error::{Result, TcsError};
pub use params::{OscParams, Regime};
