//! Exact solutions of the zero-surface-tension Muskat (two-phase Hele-Shaw)
//! problem for interfaces that stay within one of four algebraic families:
//! circles, ellipses, Neumann's ovals and Cassini's ovals.
//!
//! The interface is described through its Schwarz function ([`curves`]).
//! The complex potentials of both fluids follow from the time derivative of
//! the Schwarz function; their singularities and branch cuts carry the
//! two-phase mother body ([`motherbody`]), i.e. the line and point
//! distributions of sinks and sources that keep the interface in its
//! family. [`fields`] evaluates pressures and velocities, [`evolution`]
//! advances the shape under a prescribed flux and [`verify`] certifies the
//! closed forms numerically. [`cli`] backs the `muskat` binary.

pub mod cli;
pub mod curves;
pub mod error;
pub mod evolution;
pub mod fields;
pub mod motherbody;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use curves::{Mobility, Shape, ShapeRates};
pub use error::{MuskatError, Result};
pub use evolution::{FluxSchedule, TerminalEvent, Trajectory};
pub use fields::FieldSample;
pub use motherbody::{CutSupport, MotherBody, WeightedSupport};
