//! Ideal Bose gas in a 3-D power-law trap with a linear-in-momentum
//! dispersion correction `alpha |p|`, `alpha = xi1 m c / (2 M_p)`.
//!
//! The crate computes the condensation temperature and its shift, the
//! semiclassical spatial density, particle-number fluctuations above and
//! below the transition, and the bound on `|xi1|` implied by a given
//! resolution on the relative temperature shift. An independent
//! brute-force phase-space quadrature ([`oracle`]) checks the first-order
//! analytic results.
//!
//! Every routine is generic over the scalar type ([`Real`]); the aliases at
//! the crate root fix it to `f64`, which SI magnitudes require.
// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod condensation;
pub mod error;
pub mod fluctuations;
pub mod model;
mod num;
pub mod oracle;
pub mod quad;
pub mod roots;
pub mod specfun;

pub use error::{Error, Result};
pub use num::{rel_diff, Real};

pub use bounds::BoundResult;
pub use condensation::{TcMethod, TcResult, ThermoPoint};
pub use fluctuations::{Anomaly, FluctuationReport, Regime};
pub use model::{BoseGas, Exponent, PhysicalConstants, PowerLawTrap, Species, TrapSubspace};
pub use oracle::QuadratureSpec;
pub use specfun::Accuracy;

pub type Constants = model::PhysicalConstants<f64>;
pub type Particle = model::Species<f64>;
pub type Subspace = model::TrapSubspace<f64>;
pub type Trap = model::PowerLawTrap<f64>;
pub type Gas = model::BoseGas<f64>;
pub type Point = condensation::ThermoPoint<f64>;
pub type Tc = condensation::TcResult<f64>;
pub type Fluctuations = fluctuations::FluctuationReport<f64>;
pub type Bound = bounds::BoundResult<f64>;
pub type OracleSpec = oracle::QuadratureSpec<f64>;
