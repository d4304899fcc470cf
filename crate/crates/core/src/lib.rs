//! Gradient-based coverage control for aerial swarms with pan-tilt-zoom
//! cameras and uncertain positions.
//!
//! The pipeline runs [`sensing`] (footprints and quality), [`partition`]
//! (who covers what), [`objective`] (the coverage score), [`control`] (its
//! gradient per agent) and [`sim`] (scenarios, the stepper and outputs), all
//! on top of the planar geometry in [`geom2d`].

pub mod control;
pub mod error;
pub mod geom2d;
pub mod objective;
pub mod partition;
pub mod sensing;
pub mod sim;

pub use error::{Error, Result};
