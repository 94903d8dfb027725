//! Solver library for spherically symmetric isothermal fluid flows on the
//! exterior of a Schwarzschild black hole.
//!
//! The library is organised around a family of models parametrised by the
//! inverse light speed `eps`, the sound speed `k`, and the rescaled mass `m`
//! (so the geometric mass is `M = eps^2 m`).  It provides:
//!
//! * algebraic building blocks for the balance law (conserved variables,
//!   fluxes, geometric sources, wave speeds, Riemann invariants) in [`model`];
//! * smooth, sonic-crossing and shock-bearing steady flows in [`steady`];
//! * an exact Riemann solver with shock and rarefaction wave curves in
//!   [`riemann`];
//! * a generalized Riemann solver that propagates piecewise-steady data over
//!   one time slab in [`grp`];
//! * a well-balanced random-choice (Glimm-type) time stepper in [`scheme`];
//! * limiting regimes (non-relativistic, stiff, flat-space) and consistency
//!   diagnostics in [`limits`];
//! * the acceptance checks shared by the test suite and the CLI in
//!   [`acceptance`].

pub mod acceptance;
pub mod error;
pub mod grp;
pub mod limits;
pub mod model;
pub mod riemann;
mod roots;
pub mod scheme;
pub mod steady;

pub use error::{Error, Result};
pub use model::{FluidState, ModelKind, PhysParams};
