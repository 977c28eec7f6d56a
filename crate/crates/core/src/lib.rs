//! Simulator for autonomous stabilization of a parametrically coupled
//! transmon–cavity system.
//!
//! The physics modules are generic over the floating point type through
//! [`scalar::Real`]; the aliases below fix it to `f64`, which is what the
//! experiments and the command line tool use.

pub mod calibration;
pub mod circuit;
pub mod dressed;
pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod lindblad;
pub mod ode;
pub mod qop;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type QOperator = qop::Operator<f64>;
pub type DensityMatrix = qop::DensityMatrix<f64>;
pub type KetState = qop::KetState<f64>;
pub type Liouvillian = lindblad::Liouvillian<f64>;
pub type EvolutionResult = lindblad::EvolutionResult<f64>;
pub type CircuitParams = circuit::CircuitParams<f64>;
pub type TwoModeModel = circuit::TwoModeModel<f64>;
pub type SystemParams = hamiltonian::SystemParams<f64>;
pub type DriveSettings = hamiltonian::DriveSettings<f64>;
pub type StabilizationAxis = dressed::StabilizationAxis<f64>;
pub type DressedRates = dressed::DressedRates<f64>;
