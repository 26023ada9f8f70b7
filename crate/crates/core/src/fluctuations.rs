//! Grand-canonical particle-number fluctuations and isothermal
//! compressibility.
//!
//! With the condensate taken as non-fluctuating, the variance is
//! `kT dN_e/dmu`:
//!
//! ```text
//! var = [g_{gamma-1}(z) - delta(T) g_{gamma-3/2}(z)] / zeta(gamma) (T/T_0)^gamma N
//! ```
//!
//! Below `T_c` the fugacity is pinned at 1 and the Bose functions become zeta
//! values. `zeta(gamma - 3/2)` diverges for `gamma <= 5/2` and `zeta(gamma - 1)`
//! for `gamma <= 2`; both are regularized by evaluating at the fugacity
//! `exp(-(eps_min - m alpha^2/2) / k T_c)` set by the lowest single-particle
//! energy `eps_min`.

use crate::condensation::{deformation_strength, TcResult};
use crate::error::{Error, Result};
use crate::model::{BoseGas, Exponent};
use crate::num::Real;
use crate::specfun::{bose_fn, riemann_zeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anomaly {
    Normal,
    Anomalous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationReport<F> {
    pub temperature: F,
    pub variance: F,
    /// `variance / N`
    pub normalized_variance: F,
    /// Filled by [`FluctuationReport::with_compressibility`] (Pa^-1).
    pub compressibility: Option<F>,
    pub regime: Regime,
    pub anomaly: Anomaly,
    pub regularized: bool,
    pub epsilon_min: Option<F>,
    /// Fugacity used in the Bose functions (1 below `T_c` unless regularized).
    pub fugacity: F,
}

impl<F: Real> FluctuationReport<F> {
    /// Attaches `kappa_T` for mean density `rho` (m^-3).
    pub fn with_compressibility(mut self, rho: F, n_total: F, k_boltzmann: F) -> Result<Self> {
        self.compressibility = Some(isothermal_compressibility(
            &self,
            rho,
            n_total,
            self.temperature,
            k_boltzmann,
        )?);
        Ok(self)
    }
}

/// `anomalous` iff `gamma <= 5/2` and `alpha != 0`.
pub fn classify_anomaly<F: Real>(gamma: F, alpha: F) -> Anomaly {
    if gamma <= F::lit(2.5) && alpha != F::zero() {
        Anomaly::Anomalous
    } else {
        Anomaly::Normal
    }
}

fn bracket_factor<F: Real>(temperature: F, t0: F, gamma: F, n_total: F) -> F {
    (temperature / t0).powf(gamma) * n_total
}

fn check_inputs<F: Real>(temperature: F, t0: F, n_total: F) -> Result<()> {
    if !(temperature > F::zero() && temperature.is_finite()) {
        return Err(Error::domain(
            "fluctuations",
            format!("temperature must be positive, got {temperature}"),
        ));
    }
    if !(t0 > F::zero() && t0.is_finite()) {
        return Err(Error::domain("fluctuations", format!("T0 must be positive, got {t0}")));
    }
    if !(n_total >= F::one()) {
        return Err(Error::domain(
            "fluctuations",
            format!("particle number must be at least 1, got {n_total}"),
        ));
    }
    Ok(())
}

/// Variance above `T_c` at fugacity `z < 1`. Always normal.
pub fn variance_above_tc<F: Real>(
    gas: &BoseGas<F>,
    temperature: F,
    fugacity: F,
    n_total: F,
    t0: F,
) -> Result<FluctuationReport<F>> {
    check_inputs(temperature, t0, n_total)?;
    if !(fugacity >= F::zero() && fugacity < F::one()) {
        return Err(Error::domain(
            "variance above T_c",
            format!("fugacity must lie in [0, 1), got {fugacity}"),
        ));
    }
    let gamma = gas.gamma();
    let kt = gas.constants.k_boltzmann * temperature;
    let zeta = riemann_zeta(gamma)?;
    let mut bracket = bose_fn(gamma - F::one(), fugacity)?;
    if gas.alpha() != F::zero() {
        bracket = bracket - deformation_strength(gas, kt) * bose_fn(gamma - F::lit(1.5), fugacity)?;
    }
    let variance = bracket / zeta * bracket_factor(temperature, t0, gamma, n_total);
    Ok(FluctuationReport {
        temperature,
        variance,
        normalized_variance: variance / n_total,
        compressibility: None,
        regime: Regime::Above,
        anomaly: Anomaly::Normal,
        regularized: false,
        epsilon_min: None,
        fugacity,
    })
}

/// Variance below `T_c`.
///
/// Without `epsilon_min` the zeta-function form is used, which requires
/// `gamma > 2` and, when `alpha != 0`, `gamma > 5/2`. With `epsilon_min` both
/// terms are evaluated at the regularized fugacity
/// `exp(-(epsilon_min - m alpha^2/2) / k T_c)`, `T_c` being the deformed value.
pub fn variance_below_tc<F: Real>(
    gas: &BoseGas<F>,
    temperature: F,
    n_total: F,
    tc: &TcResult<F>,
    epsilon_min: Option<F>,
) -> Result<FluctuationReport<F>> {
    check_inputs(temperature, tc.t0, n_total)?;
    if !(temperature < tc.tc) {
        return Err(Error::domain(
            "variance below T_c",
            format!(
                "temperature {:e} K is not below T_c = {:e} K",
                temperature.as_f64(),
                tc.tc.as_f64()
            ),
        ));
    }
    let gamma = gas.gamma();
    let alpha = gas.alpha();
    let kt = gas.constants.k_boltzmann * temperature;
    let anomaly = classify_anomaly(gamma, alpha);
    let lead_order = gamma - F::one();
    let alpha_order = gamma - F::lit(1.5);
    let needs_regularization = lead_order <= F::one() || anomaly == Anomaly::Anomalous;

    let (fugacity, regularized) = match epsilon_min {
        Some(eps) => {
            if !(eps > F::zero() && eps.is_finite()) {
                return Err(Error::domain(
                    "variance below T_c",
                    format!("epsilon_min must be positive, got {eps}"),
                ));
            }
            let gap = eps - gas.alpha_energy();
            if !(gap > F::zero()) {
                return Err(Error::domain(
                    "variance below T_c",
                    format!(
                        "epsilon_min {:e} J must exceed m alpha^2 / 2 = {:e} J",
                        eps.as_f64(),
                        gas.alpha_energy().as_f64()
                    ),
                ));
            }
            ((-gap / (gas.constants.k_boltzmann * tc.tc)).exp(), true)
        }
        None if needs_regularization => {
            let which = if lead_order <= F::one() {
                format!("zeta(gamma - 1) = zeta({}) diverges", lead_order)
            } else {
                format!("zeta(gamma - 3/2) = zeta({}) diverges for alpha != 0", alpha_order)
            };
            return Err(Error::RegularizationRequired(format!(
                "gamma = {gamma}: {which}; supply epsilon_min"
            )));
        }
        None => (F::one(), false),
    };

    let zeta = riemann_zeta(gamma)?;
    let mut bracket = bose_fn(lead_order, fugacity)?;
    if alpha != F::zero() {
        bracket = bracket - deformation_strength(gas, kt) * bose_fn(alpha_order, fugacity)?;
    }
    let variance = bracket / zeta * bracket_factor(temperature, tc.t0, gamma, n_total);
    Ok(FluctuationReport {
        temperature,
        variance,
        normalized_variance: variance / n_total,
        compressibility: None,
        regime: Regime::Below,
        anomaly,
        regularized,
        epsilon_min: if regularized { epsilon_min } else { None },
        fugacity,
    })
}

/// `kappa_T = variance / (rho N k T)`.
pub fn isothermal_compressibility<F: Real>(
    report: &FluctuationReport<F>,
    rho: F,
    n_total: F,
    temperature: F,
    k_boltzmann: F,
) -> Result<F> {
    for (name, v) in [("rho", rho), ("N", n_total), ("T", temperature)] {
        if !(v > F::zero() && v.is_finite()) {
            return Err(Error::domain(
                "compressibility",
                format!("{name} must be positive, got {v}"),
            ));
        }
    }
    Ok(report.variance / (rho * n_total * k_boltzmann * temperature))
}

/// Lowest-energy estimate: per subspace the minimum over `r` of
/// `hbar^2 / (2 m r^2) + A (r / a)^s`, summed.
///
/// The minimiser is `r^{s+2} = hbar^2 a^s / (m A s)`; a hard wall gives
/// `hbar^2 / (2 m a^2)`.
pub fn default_epsilon_min<F: Real>(gas: &BoseGas<F>) -> F {
    let hbar = gas.constants.hbar;
    let m = gas.mass();
    gas.trap
        .subspaces()
        .iter()
        .map(|sub| {
            let a = sub.length_scale();
            let kinetic = |r: F| hbar * hbar / (F::lit(2.0) * m * r * r);
            match sub.exponent() {
                Exponent::Finite(s) => {
                    let big_a = sub.energy_scale();
                    // Work in units of a to keep the powers in range.
                    let x = (hbar * hbar / (m * big_a * s * a * a)).powf(F::one() / (s + F::lit(2.0)));
                    kinetic(x * a) + big_a * x.powf(s)
                }
                Exponent::Infinite => kinetic(a),
            }
        })
        .fold(F::zero(), |acc, e| acc + e)
}
