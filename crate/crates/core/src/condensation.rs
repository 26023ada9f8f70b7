//! Number equation, spatial density, condensation temperature and its shift.
//!
//! Integrating the Bose factor of `p^2/2m + alpha p + U(r)` over momentum and
//! keeping terms through first order in `alpha` gives
//!
//! ```text
//! N - N0 = lambda^-3 V_B(kT) [ g_gamma(z) - delta(T) g_{gamma-1/2}(z) ]
//! delta(T) = alpha sqrt(8 m / (pi k T))
//! ```
//!
//! where `V_B(kT) = int d^3r exp(-U/kT)` and `lambda` is the thermal
//! wavelength. At `z = 1` this fixes the deformed `T_c` through
//! `x^gamma - b x^{gamma-1/2} = 1`, `x = T_c / T_0`,
//! `b = delta(T_0) zeta(gamma-1/2) / zeta(gamma)`.

use std::ops::Neg;

use log::warn;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::model::{BoseGas, Exponent};
use crate::num::Real;
use crate::roots::{brent, geometric_bracket, RootOptions};
use crate::specfun::{bose_fn, riemann_zeta};

/// `m alpha^2 / 2` above this fraction of `kT` makes the first-order
/// expansion suspect.
pub const SMALLNESS_LIMIT: f64 = 0.01;

/// Temperature and fugacity of a grand-canonical state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint<F> {
    temperature: F,
    fugacity: F,
}

impl<F: Real> ThermoPoint<F> {
    pub fn new(temperature: F, fugacity: F) -> Result<Self> {
        if !(temperature > F::zero() && temperature.is_finite()) {
            return Err(Error::domain(
                "thermo point",
                format!("temperature must be positive, got {temperature}"),
            ));
        }
        if !(fugacity >= F::zero() && fugacity <= F::one()) {
            return Err(Error::domain(
                "thermo point",
                format!("fugacity must lie in [0, 1], got {fugacity}"),
            ));
        }
        Ok(Self { temperature, fugacity })
    }

    /// From a chemical potential `mu <= 0` in joules.
    pub fn from_chemical_potential(temperature: F, mu: F, k_boltzmann: F) -> Result<Self> {
        Self::new(temperature, (mu / (k_boltzmann * temperature)).exp())
    }

    pub fn temperature(&self) -> F {
        self.temperature
    }

    pub fn fugacity(&self) -> F {
        self.fugacity
    }

    /// `mu = kT ln z`; `-inf` at `z = 0`.
    pub fn chemical_potential(&self, k_boltzmann: F) -> F {
        k_boltzmann * self.temperature * self.fugacity.ln()
    }
}

/// How [`solve_tc`] obtained `T_c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcMethod {
    /// Root of the implicit first-order condensation condition.
    Implicit,
    /// Pure box: the condition involves `zeta(1)`, the closed-form box-limit
    /// shift is used instead.
    BoxLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcResult<F> {
    pub t0: F,
    pub tc: F,
    /// `(T_c - T_0) / T_0`
    pub rel_shift: F,
    pub alpha: F,
    pub gamma: F,
    /// `m alpha^2 / 2` over `k T_c`.
    pub smallness_ratio: F,
    pub method: TcMethod,
}

/// `(m / (2 pi hbar^2))^{3/2}`, i.e. `lambda^-3 (kT)^{-3/2}`.
fn inverse_wavelength_cubed<F: Real>(gas: &BoseGas<F>, kt: F) -> F {
    let hbar = gas.constants.hbar;
    (gas.mass() * kt / (F::TAU() * hbar * hbar)).powf(F::lit(1.5))
}

/// `alpha sqrt(8 m / (pi kT))`: relative weight of the first-order term.
pub fn deformation_strength<F: Real>(gas: &BoseGas<F>, kt: F) -> F {
    gas.alpha() * (F::lit(8.0) * gas.mass() / (F::PI() * kt)).sqrt()
}

/// `m alpha^2 / (2 kT)`.
pub fn smallness_ratio<F: Real>(gas: &BoseGas<F>, temperature: F) -> F {
    gas.alpha_energy() / (gas.constants.k_boltzmann * temperature)
}

fn check_smallness<F: Real>(gas: &BoseGas<F>, temperature: F) {
    let ratio = smallness_ratio(gas, temperature);
    if ratio > F::lit(SMALLNESS_LIMIT) {
        warn!(
            "m alpha^2 / 2 is {:.3e} of kT; the first-order expansion is not reliable",
            ratio.as_f64()
        );
    }
}

/// Particle number at `point` through first order in `alpha`, with `n0`
/// particles in the ground state.
pub fn number_of_particles<F: Real>(gas: &BoseGas<F>, point: &ThermoPoint<F>, n0: F) -> Result<F> {
    check_smallness(gas, point.temperature);
    let kt = gas.constants.k_boltzmann * point.temperature;
    let gamma = gas.gamma();
    let z = point.fugacity;
    if z == F::one() && gamma <= F::lit(1.5) {
        return Err(Error::divergence(
            "number equation",
            "g_gamma(1) with gamma <= 1 is infinite",
        ));
    }
    let scale = inverse_wavelength_cubed(gas, kt) * gas.trap.boltzmann_volume(kt);
    let mut bracket = bose_fn(gamma, z)?;
    let alpha = gas.alpha();
    if alpha != F::zero() {
        let g = bose_fn(gamma - F::lit(0.5), z).map_err(|e| match e {
            Error::Divergence { detail, .. } => Error::divergence("number equation", detail),
            other => other,
        })?;
        bracket = bracket - deformation_strength(gas, kt) * g;
    }
    Ok(n0 + scale * bracket)
}

/// Semiclassical number density (m^-3) at one radial coordinate per
/// subspace, through second order in `alpha`:
/// `lambda^-3 g_{3/2}(w) - alpha lambda^-2 (2m / (pi hbar)) g_1(w)
///  + alpha^2 lambda^-1 (m^2 / (2 pi hbar^2)) g_{1/2}(w)`,
/// `w = exp((mu + m alpha^2/2 - U(r)) / kT)`.
pub fn spatial_density<F: Real>(gas: &BoseGas<F>, point: &ThermoPoint<F>, radii: &[F]) -> Result<F> {
    check_smallness(gas, point.temperature);
    let u = gas.trap.potential(radii)?;
    if point.fugacity == F::zero() || u == F::infinity() {
        return Ok(F::zero());
    }
    let kt = gas.constants.k_boltzmann * point.temperature;
    let mu = point.chemical_potential(gas.constants.k_boltzmann);
    let exponent = (mu + gas.alpha_energy() - u) / kt;
    if exponent > F::zero() {
        return Err(Error::domain(
            "spatial density",
            format!("effective fugacity exceeds 1 (ln w = {:e})", exponent.as_f64()),
        ));
    }
    let w = exponent.exp();
    let hbar = gas.constants.hbar;
    let m = gas.mass();
    let alpha = gas.alpha();
    let inv_lambda = (m * kt / (F::TAU() * hbar * hbar)).sqrt();
    let mut n = inv_lambda.powi(3) * bose_fn(F::lit(1.5), w)?;
    if alpha != F::zero() {
        let linear = alpha * inv_lambda * inv_lambda * F::lit(2.0) * m / (F::PI() * hbar);
        let quadratic = alpha * alpha * inv_lambda * m * m / (F::TAU() * hbar * hbar);
        n = n - linear * bose_fn(F::one(), w)? + quadratic * bose_fn(F::lit(0.5), w)?;
    }
    Ok(n)
}

fn check_count<F: Real>(n_total: F) -> Result<()> {
    if !(n_total >= F::one() && n_total.is_finite()) {
        return Err(Error::domain(
            "particle number",
            format!("must be at least 1, got {n_total}"),
        ));
    }
    Ok(())
}

/// Undeformed condensation temperature (K),
/// `k T_0 = [N V_char (2 pi hbar^2 / m)^{3/2} / zeta(gamma)]^{1/gamma}`.
pub fn t0<F: Real>(gas: &BoseGas<F>, n_total: F) -> Result<F> {
    check_count(n_total)?;
    let gamma = gas.gamma();
    if !(gamma > F::one()) {
        return Err(Error::domain(
            "t0",
            format!("zeta(gamma) requires gamma > 1, got {gamma}"),
        ));
    }
    let hbar = gas.constants.hbar;
    let ln_kt = (n_total.ln()
        + gas.trap.characteristic_volume().ln()
        + F::lit(1.5) * (F::TAU() * hbar * hbar / gas.mass()).ln()
        - riemann_zeta(gamma)?.ln())
        / gamma;
    Ok(ln_kt.exp() / gas.constants.k_boltzmann)
}

/// `b = delta(T_0) zeta(gamma - 1/2) / zeta(gamma)`.
fn shift_coefficient<F: Real>(gas: &BoseGas<F>, t0: F) -> Result<F> {
    let gamma = gas.gamma();
    let kt0 = gas.constants.k_boltzmann * t0;
    let ratio = riemann_zeta(gamma - F::lit(0.5))? / riemann_zeta(gamma)?;
    Ok(deformation_strength(gas, kt0) * ratio)
}

/// Box-limit shift `alpha 2 m (V zeta(3))^{1/3} / (3 hbar) N^{-1/3}` with
/// `V = 1 / V_char`.
fn box_limit_shift<F: Real>(gas: &BoseGas<F>, n_total: F) -> Result<F> {
    let volume = F::one() / gas.trap.characteristic_volume();
    let third = F::one() / F::lit(3.0);
    Ok(
        gas.alpha() * F::lit(2.0) * gas.mass() * (volume * riemann_zeta(F::lit(3.0))?).powf(third)
            / (F::lit(3.0) * gas.constants.hbar)
            * n_total.powf(-third),
    )
}

/// First-order relative shift `(T_c - T_0)/T_0 = b / gamma`, which scales as
/// `N^{-1/(2 gamma)}`. For a pure box the closed-form box-limit expression is
/// returned.
pub fn rel_shift_first_order<F: Real>(gas: &BoseGas<F>, n_total: F) -> Result<F> {
    let t0 = t0(gas, n_total)?;
    if gas.trap.is_pure_box() {
        return box_limit_shift(gas, n_total);
    }
    Ok(shift_coefficient(gas, t0)? / gas.gamma())
}

/// Deformed condensation temperature from
/// `(kT_c)^gamma = (kT_0)^gamma + alpha sqrt(8m/pi) zeta(gamma-1/2)/zeta(gamma) (kT_c)^{gamma-1/2}`.
///
/// The root is bracketed in `[T_0/2, 2 T_0]`, widened up to `[T_0/16, 16 T_0]`.
pub fn solve_tc<F: Real>(gas: &BoseGas<F>, n_total: F) -> Result<TcResult<F>> {
    let t0 = t0(gas, n_total)?;
    let gamma = gas.gamma();
    let alpha = gas.alpha();
    let finish = |tc: F, rel_shift: F, method| {
        let res = TcResult {
            t0,
            tc,
            rel_shift,
            alpha,
            gamma,
            smallness_ratio: smallness_ratio(gas, tc),
            method,
        };
        if res.smallness_ratio > F::lit(SMALLNESS_LIMIT) {
            warn!("m alpha^2 / 2 is {:.3e} of kT_c", res.smallness_ratio.as_f64());
        }
        res
    };
    if alpha == F::zero() {
        return Ok(finish(t0, F::zero(), TcMethod::Implicit));
    }
    if gas.trap.is_pure_box() {
        let rel = box_limit_shift(gas, n_total)?;
        return Ok(finish(t0 * (F::one() + rel), rel, TcMethod::BoxLimit));
    }
    let b = shift_coefficient(gas, t0)?;
    let exponent = gamma - F::lit(0.5);
    // x = 1 + y; (x^gamma - 1) via expm1 keeps tiny shifts resolvable.
    let residual = |y: F| -> Result<F> {
        let lx = y.ln_1p();
        Ok((gamma * lx).exp_m1() - b * (exponent * lx).exp())
    };
    let factors: Vec<F> = [2.0, 4.0, 8.0, 16.0].iter().map(|&w| F::lit(w)).collect();
    let (lo, hi) = geometric_bracket(|x: F| residual(x - F::one()), F::one(), &factors).map_err(|e| match e {
        Error::Convergence { detail, .. } => Error::convergence("solve_tc", format!("b = {:e}: {detail}", b.as_f64())),
        other => other,
    })?;
    let opts = RootOptions {
        abs_tol: F::zero(),
        rel_tol: F::lit(1e-12),
        max_iter: 200,
    };
    let root = brent(residual, lo - F::one(), hi - F::one(), &opts)?;
    Ok(finish(t0 * (F::one() + root.x), root.x, TcMethod::Implicit))
}

/// Exponent of `N` in the spherical-trap shift, `-s / (3 (s + 2))`, and
/// `-1/3` for the box. Works for any exact number type.
pub fn spherical_shift_exponent<T>(s: Exponent<T>) -> T
where
    T: Num + Copy + Neg<Output = T>,
{
    let two = T::one() + T::one();
    let three = two + T::one();
    match s {
        Exponent::Finite(s) => -(s / (three * (s + two))),
        Exponent::Infinite => -(T::one() / three),
    }
}

/// Fugacity at which the first-order number equation (no condensate)
/// yields `n_total` at `temperature`. Fails below `T_c`.
pub fn solve_fugacity<F: Real>(gas: &BoseGas<F>, temperature: F, n_total: F) -> Result<F> {
    check_count(n_total)?;
    let excess = |w: F| -> Result<F> {
        let point = ThermoPoint::new(temperature, (-w).exp())?;
        Ok(number_of_particles(gas, &point, F::zero())? / n_total - F::one())
    };
    // At w = 0 the gas must hold at least n_total excited particles.
    let saturated = match excess(F::zero()) {
        Ok(v) => v,
        Err(Error::Divergence { .. }) => F::infinity(),
        Err(e) => return Err(e),
    };
    if saturated <= F::zero() {
        return Err(Error::domain(
            "solve_fugacity",
            format!(
                "temperature {:e} K is at or below the condensation point",
                temperature.as_f64()
            ),
        ));
    }
    let mut lo = F::zero();
    let mut hi = F::one();
    while excess(hi)? > F::zero() {
        lo = hi;
        hi = hi * F::lit(2.0);
        if hi > F::lit(1e6) {
            return Err(Error::convergence("solve_fugacity", "fugacity underflow"));
        }
    }
    if lo == F::zero() {
        // Avoid evaluating at exactly z = 1 inside Brent.
        lo = hi;
        loop {
            lo = lo * F::lit(1e-3);
            if lo < F::min_positive_value() {
                return Err(Error::convergence(
                    "solve_fugacity",
                    "could not bracket fugacity near 1",
                ));
            }
            if excess(lo)? > F::zero() {
                break;
            }
        }
    }
    let root = brent(excess, lo, hi, &RootOptions::default())?;
    Ok((-root.x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PhysicalConstants, PowerLawTrap, Species, TrapSubspace};
    use num_rational::Ratio;

    const MASS: f64 = 15e-26;
    const ZETA3: f64 = 1.202_056_903_159_594_3;

    fn isotropic(omega: f64, xi1: f64) -> BoseGas<f64> {
        let c = PhysicalConstants::default();
        let trap = PowerLawTrap::anisotropic_harmonic([omega; 3], MASS, &c).unwrap();
        BoseGas::new(trap, Species::new(MASS, xi1).unwrap())
    }

    fn k39_trap(xi1: f64) -> BoseGas<f64> {
        let c = PhysicalConstants::default();
        let trap = PowerLawTrap::anisotropic_harmonic([10.0, 10.0, 20.0], MASS, &c).unwrap();
        BoseGas::new(trap, Species::new(MASS, xi1).unwrap())
    }

    #[test]
    fn harmonic_t0_closed_form() {
        let omega = 2.0 * std::f64::consts::PI * 100.0;
        let gas = isotropic(omega, 0.0);
        let n = 1e5;
        let kt = gas.constants.k_boltzmann * t0(&gas, n).unwrap();
        let expected = gas.constants.hbar * omega * (n / ZETA3).cbrt();
        assert!((kt - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn t0_scaling_and_small_n() {
        let gas = k39_trap(0.0);
        let r = t0(&gas, 8e6).unwrap() / t0(&gas, 1e6).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        let one = t0(&gas, 1.0).unwrap();
        assert!(one > 0.0 && one.is_finite());
        assert!(matches!(t0(&gas, 0.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn number_equation_harmonic_saturation() {
        let omega = 2.0 * std::f64::consts::PI * 50.0;
        let gas = isotropic(omega, 0.0);
        let temperature = 2e-7;
        let point = ThermoPoint::new(temperature, 1.0).unwrap();
        let n = number_of_particles(&gas, &point, 7.0).unwrap();
        let x = gas.constants.k_boltzmann * temperature / (gas.constants.hbar * omega);
        assert!((n - 7.0 - ZETA3 * x.powi(3)).abs() / n < 1e-12);
        let empty = ThermoPoint::new(temperature, 0.0).unwrap();
        assert_eq!(number_of_particles(&gas, &empty, 3.0).unwrap(), 3.0);
    }

    #[test]
    fn number_equation_linear_in_alpha() {
        let point = ThermoPoint::new(1e-7, 0.7).unwrap();
        let n = |xi: f64| number_of_particles(&k39_trap(xi), &point, 0.0).unwrap();
        let (n0, n1, n2) = (n(0.0), n(1e4), n(2e4));
        let d1 = n1 - n0;
        let d2 = n2 - n0;
        assert!(d1 < 0.0);
        assert!((d2 / d1 - 2.0).abs() < 1e-6);
        // Slope matches -delta g_{gamma-1/2} times the scale.
        let gas = k39_trap(1e4);
        let kt = gas.constants.k_boltzmann * 1e-7;
        let g = bose_fn(2.5, 0.7).unwrap() / bose_fn(3.0, 0.7).unwrap();
        let expected = -deformation_strength(&gas, kt) * g * n0;
        assert!((d1 - expected).abs() / expected.abs() < 1e-9);
    }

    #[test]
    fn density_reductions() {
        let gas0 = k39_trap(0.0);
        let t = 3e-7;
        let point = ThermoPoint::new(t, 0.8).unwrap();
        let c = &gas0.constants;
        let lambda = (2.0 * std::f64::consts::PI * c.hbar.powi(2) / (MASS * c.k_boltzmann * t)).sqrt();
        let r = [1e-6, 0.0, 2e-6];
        let u = gas0.trap.potential(&r).unwrap();
        let w = 0.8 * (-u / (c.k_boltzmann * t)).exp();
        let n = spatial_density(&gas0, &point, &r).unwrap();
        assert!((n - bose_fn(1.5, w).unwrap() / lambda.powi(3)).abs() / n < 1e-12);
        let far = spatial_density(&gas0, &point, &[1.0, 1.0, 1.0]).unwrap();
        assert!(far < 1e-200);
    }

    #[test]
    fn density_quadratic_in_alpha() {
        let point = ThermoPoint::new(3e-7, 0.5).unwrap();
        let r = [2e-6, 1e-6, 0.0];
        let d = |xi: f64| spatial_density(&k39_trap(xi), &point, &r).unwrap();
        // Ratio of second differences at steps 2 xi and xi is 4 up to O(xi^2),
        // the remainder coming from the even alpha dependence of the fugacity.
        let deviation = |xi: f64| {
            let c1 = d(xi) + d(-xi) - 2.0 * d(0.0);
            let c2 = d(2.0 * xi) + d(-2.0 * xi) - 2.0 * d(0.0);
            assert!(c1 > 0.0);
            c2 / c1 - 4.0
        };
        let (big, small) = (deviation(2e5), deviation(1e5));
        assert!(big.abs() < 2e-2, "{big}");
        assert!((big / small - 4.0).abs() < 0.2, "{}", big / small);
    }

    #[test]
    fn density_rejects_oversaturation() {
        let gas = k39_trap(0.0);
        let point = ThermoPoint::new(3e-7, 1.0).unwrap();
        assert!(spatial_density(&gas, &point, &[0.0, 0.0, 0.0]).is_ok());
        let deformed = k39_trap(1e3);
        assert!(matches!(
            spatial_density(&deformed, &point, &[0.0, 0.0, 0.0]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn tc_equals_t0_without_deformation() {
        let r = solve_tc(&k39_trap(0.0), 1e6).unwrap();
        assert_eq!(r.tc, r.t0);
        assert_eq!(r.rel_shift, 0.0);
    }

    #[test]
    fn tc_sign_follows_alpha() {
        for &xi in &[1.0, 1e3, 1e6] {
            assert!(solve_tc(&k39_trap(xi), 1e6).unwrap().rel_shift > 0.0);
            assert!(solve_tc(&k39_trap(-xi), 1e6).unwrap().rel_shift < 0.0);
        }
    }

    #[test]
    fn tc_first_order_richardson() {
        // Discrepancy to the linearised shift is O(alpha^2).
        let n = 1e6;
        let gap = |xi: f64| {
            let gas = k39_trap(xi);
            solve_tc(&gas, n).unwrap().rel_shift - rel_shift_first_order(&gas, n).unwrap()
        };
        let r = gap(1e4) / gap(5e3);
        assert!((r - 4.0).abs() < 0.05, "ratio {r}");
    }

    #[test]
    fn tc_bracket_failure_reports() {
        let res = solve_tc(&k39_trap(1e12), 1e6);
        assert!(matches!(res, Err(Error::Convergence { .. })), "{res:?}");
    }

    #[test]
    fn k39_shift_magnitude() {
        let s = rel_shift_first_order(&k39_trap(1.0), 1e6).unwrap();
        assert!((s.log10() + 6.0).abs() < 1.0, "{s}");
    }

    #[test]
    fn isotropic_closed_form_shift() {
        // zeta(5/2) / (3 zeta(3)^{5/6}) (8 m / (hbar w pi))^{1/2} N^{-1/6} alpha
        let omega = 2.0 * std::f64::consts::PI * 30.0;
        let gas = isotropic(omega, 1.0);
        let n: f64 = 1e7;
        let zeta52 = 1.341_487_257_250_917_2;
        let c = &gas.constants;
        let expected = gas.alpha() * zeta52 / (3.0 * ZETA3.powf(5.0 / 6.0))
            * (8.0 * MASS / (c.hbar * omega * std::f64::consts::PI)).sqrt()
            * n.powf(-1.0 / 6.0);
        let got = rel_shift_first_order(&gas, n).unwrap();
        assert!((got - expected).abs() / expected < 1e-10);
    }

    #[test]
    fn box_shift_uses_limit_form() {
        let v = 1e-12;
        let trap = PowerLawTrap::spherical_box(v).unwrap();
        let gas = BoseGas::new(trap, Species::new(MASS, 1.0).unwrap());
        let n: f64 = 1e6;
        let expected = gas.alpha() * 2.0 * MASS * (v * ZETA3).cbrt() / (3.0 * gas.constants.hbar) * n.powf(-1.0 / 3.0);
        let got = rel_shift_first_order(&gas, n).unwrap();
        assert!((got - expected).abs() / expected < 1e-10);
        let tc = solve_tc(&gas, n).unwrap();
        assert_eq!(tc.method, TcMethod::BoxLimit);
        assert_eq!(tc.gamma, 1.5);
    }

    #[test]
    fn box_number_equation_diverges_at_saturation() {
        let trap = PowerLawTrap::spherical_box(1e-12).unwrap();
        let gas = BoseGas::new(trap, Species::new(MASS, 1.0).unwrap());
        let point = ThermoPoint::new(1e-7, 1.0).unwrap();
        assert!(matches!(
            number_of_particles(&gas, &point, 0.0),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn spherical_exponents_exact() {
        let r = |n: i64| Exponent::Finite(Ratio::from_integer(n));
        assert_eq!(spherical_shift_exponent(r(1)), Ratio::new(-1, 9));
        assert_eq!(spherical_shift_exponent(r(2)), Ratio::new(-1, 6));
        assert_eq!(spherical_shift_exponent(r(3)), Ratio::new(-1, 5));
        assert_eq!(spherical_shift_exponent(r(6)), Ratio::new(-1, 4));
        assert_eq!(
            spherical_shift_exponent::<Ratio<i64>>(Exponent::Infinite),
            Ratio::new(-1, 3)
        );
        let s = 2.7f64;
        let gamma = 1.5 + 3.0 / s;
        assert!((spherical_shift_exponent(Exponent::Finite(s)) + 1.0 / (2.0 * gamma)).abs() < 1e-15);
    }

    #[test]
    fn fugacity_inversion() {
        let gas = k39_trap(100.0);
        let n = 1e6;
        let tc = solve_tc(&gas, n).unwrap().tc;
        let t = 1.3 * tc;
        let z = solve_fugacity(&gas, t, n).unwrap();
        assert!(z > 0.0 && z < 1.0);
        let back = number_of_particles(&gas, &ThermoPoint::new(t, z).unwrap(), 0.0).unwrap();
        assert!((back - n).abs() / n < 1e-10);
        assert!(matches!(solve_fugacity(&gas, 0.9 * tc, n), Err(Error::Domain { .. })));
    }

    #[test]
    fn cylindrical_trap_runs() {
        let c = PhysicalConstants::default();
        let trap = PowerLawTrap::new(vec![
            TrapSubspace::oscillator_scaled(2, Exponent::Finite(4.0), 60.0, MASS, &c).unwrap(),
            TrapSubspace::harmonic(1, 60.0, MASS, &c).unwrap(),
        ])
        .unwrap();
        let gas = BoseGas::new(trap, Species::new(MASS, 1.0).unwrap());
        assert_eq!(gas.gamma(), 2.5);
        let r = solve_tc(&gas, 1e6).unwrap();
        assert!(r.rel_shift > 0.0 && r.tc.is_finite());
    }
}
