//! Exact solutions of a two-component nonlinear Schrodinger equation with time-modulated
//! balanced loss-gain, linear coupling and space-time modulated cubic nonlinearities,
//! together with independent residual, conservation and time-evolution checks.

pub mod error;
pub mod evolve;
pub mod fd;
pub mod grid;
pub mod lossgain;
pub mod modulation;
pub mod output;
pub mod quadrature;
pub mod scalar;
pub mod solutions;
pub mod specfun;
pub mod susy;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex = num_complex::Complex<f64>;
pub type ComplexMatrix2 = lossgain::ComplexMatrix2<f64>;
pub type CouplingConfig = lossgain::CouplingConfig<f64>;
pub type Mu0Family = lossgain::Mu0Family<f64>;
pub type SpectralRegime = lossgain::SpectralRegime<f64>;
pub type AmplitudeVector = modulation::AmplitudeVector<f64>;
pub type ModulationSpec = modulation::ModulationSpec<f64>;
pub type FieldExpr = modulation::FieldExpr<f64>;
pub type SpaceTimeField = modulation::SpaceTimeField<f64>;
pub type TimeExpr = modulation::TimeExpr<f64>;
pub type EllipticModulus = specfun::EllipticModulus<f64>;

pub use grid::GridSpec;
pub use solutions::{ExactSolution, FamilySpec, PotentialSpec};
pub use susy::Superpotential;
