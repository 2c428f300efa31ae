//! Arbitrary state preparation with `m`-bit binary precision via multi-controlled
//! tagging and a controlled measurement.
//!
//! The pipeline is [`approx::decompose`] → [`encoder::compile`] →
//! [`encoder::Circuit::execute`], with [`oracle`] providing an independent
//! projector-algebra path and closed-form stage predictions to check against.

pub mod approx;
pub mod encoder;
pub mod error;
pub mod gate;
pub mod layout;
pub mod oracle;
pub mod resources;
pub mod state;

pub use approx::{decompose, fidelity, reconstruct, BitPlan, Normalization, TargetState};
pub use encoder::{compile, compile_with, parse_circuit, Circuit, CompileOptions, Stage};
pub use error::{Error, Result};
pub use gate::{Control, Gate};
pub use layout::{RegisterLayout, DEFAULT_MAX_QUBITS};
pub use oracle::{naive_success_probability, predict_stage, run_projector_path, StageId, StagePrediction};
pub use resources::{analyze, ResourceReport};
pub use state::StateVector;

pub use num_complex::Complex64;
