//! Decoherence of a polarizable particle whose dipole coupling to the
//! zero-point modes between two conducting plates is switched on and off
//! suddenly.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: cosine integral `Ci`, its entire companion `Cin`, and the
//!   angular kernel `J(x) = ∫(1-u²)e^{ixu}du`.
//! * [`kernel`]: the closed-form image-sum series for the decoherence
//!   exponent with a UV cutoff, its no-cutoff limit and the plate variant.
//! * [`modesum`]: brute-force quadrature of the same exponent, one image
//!   index `m` at a time, used as an independent oracle.
//! * [`cavityfield`]: coherent-state amplitudes on a discrete cavity mode
//!   grid and their overlap.
//! * [`feasibility`]: SI inputs (molecule, laser, cavity) to dimensionless
//!   parameters and order-of-magnitude verdicts.

pub mod cavityfield;
pub mod constants;
mod error;
pub mod feasibility;
pub mod kernel;
pub mod modesum;
mod quadrature;
pub mod specfun;
mod sum;

pub use error::{Error, Result};
pub use kernel::{DecoherenceResult, DimensionlessParams, SeriesPolicy};
pub use modesum::QuadratureSpec;
