//! Psi-series asymptotics for quadratic recurrences on random trees.

pub mod ars;
pub mod connect;
pub mod error;
pub mod integrable;
pub mod numeric;
pub mod ode_models;
pub mod par;
pub mod psi_engine;
pub mod recurrences;
pub mod transfer;

pub use error::{Error, Result};
pub use numeric::{BigReal, FormalSeries, TauPoly};
pub use rug::{Integer, Rational};
