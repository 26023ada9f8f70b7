//! Gamma, Riemann zeta and Bose–Einstein functions.
//!
//! `g_nu(z) = sum_{k>=1} z^k / k^nu` is evaluated by the power series for
//! `z <= 0.99` and by quadrature of its integral representation
//! `g_nu(z) = 1/Gamma(nu) int_0^inf x^(nu-1) / (e^(x - ln z) - 1) dx`
//! above, where the series needs too many terms.

use crate::error::{Error, Result};
use crate::num::Real;
use crate::quad::{try_integrate, QuadOptions};

/// Fugacity above which [`bose_fn`] switches from the series to quadrature.
pub const SERIES_SWITCH: f64 = 0.99;

/// Accuracy target for the special functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy<F> {
    rel_tol: F,
    max_terms: usize,
}

impl<F: Real> Accuracy<F> {
    /// `rel_tol` must lie in `(0, 1e-6]`, `max_terms` must be at least 100.
    pub fn new(rel_tol: F, max_terms: usize) -> Result<Self> {
        if !(rel_tol > F::zero() && rel_tol <= F::lit(1e-6)) {
            return Err(Error::Invalid(format!(
                "rel_tol must lie in (0, 1e-6], got {}",
                rel_tol
            )));
        }
        if max_terms < 100 {
            return Err(Error::Invalid(format!(
                "max_terms must be at least 100, got {max_terms}"
            )));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> F {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl<F: Real> Default for Accuracy<F> {
    fn default() -> Self {
        // Never tighter than a few ulps of the scalar type.
        let floor = F::epsilon() * F::lit(8.0);
        Self {
            rel_tol: F::lit(1e-10).max(floor),
            max_terms: 100_000,
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<F: Real>(x: F) -> F {
    let mut acc = F::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + F::lit(c) / (x + F::lit(i as f64));
    }
    acc
}

/// Gamma function for `x > 0`.
pub fn gamma_fn<F: Real>(x: F) -> Result<F> {
    if !(x > F::zero()) || !x.is_finite() {
        return Err(Error::domain(
            "gamma",
            format!("argument must be positive and finite, got {}", x),
        ));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive<F: Real>(x: F) -> F {
    let half = F::lit(0.5);
    if x < half {
        // Reflection keeps the Lanczos sum in its accurate range.
        return F::PI() / ((F::PI() * x).sin() * gamma_positive(F::one() - x));
    }
    let y = x - F::one();
    let t = y + F::lit(LANCZOS_G) + half;
    (F::TAU()).sqrt() * t.powf(y + half) * (-t).exp() * lanczos_sum(y)
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma<F: Real>(x: F) -> Result<F> {
    if !(x > F::zero()) || !x.is_finite() {
        return Err(Error::domain(
            "ln_gamma",
            format!("argument must be positive and finite, got {}", x),
        ));
    }
    let half = F::lit(0.5);
    if x < half {
        return Ok((F::PI() / (F::PI() * x).sin()).ln() - ln_gamma(F::one() - x)?);
    }
    let y = x - F::one();
    let t = y + F::lit(LANCZOS_G) + half;
    Ok(half * F::TAU().ln() + (y + half) * t.ln() - t + lanczos_sum(y).ln())
}

// B_{2j} / (2j)!
const EM_COEFFS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3_617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
];

/// Riemann zeta function for real `nu > 1`, default accuracy.
pub fn riemann_zeta<F: Real>(nu: F) -> Result<F> {
    riemann_zeta_with(nu, &Accuracy::default())
}

/// Riemann zeta by Euler–Maclaurin summation with a 12-term head.
pub fn riemann_zeta_with<F: Real>(nu: F, acc: &Accuracy<F>) -> Result<F> {
    if !(nu > F::one()) {
        return Err(Error::domain("riemann_zeta", format!("requires nu > 1, got {}", nu)));
    }
    if nu == F::infinity() {
        return Ok(F::one());
    }
    if nu > F::lit(40.0) {
        let mut sum = F::one();
        for k in 2..acc.max_terms {
            let term = F::lit(k as f64).powf(-nu);
            sum = sum + term;
            if term < acc.rel_tol * F::lit(0.01) {
                break;
            }
        }
        return Ok(sum);
    }
    let head = 12usize;
    let n = F::lit(head as f64);
    let mut sum = F::zero();
    // Smallest terms first.
    for k in (1..head).rev() {
        sum = sum + F::lit(k as f64).powf(-nu);
    }
    let n_pow = n.powf(-nu);
    sum = sum + n * n_pow / (nu - F::one()) + F::lit(0.5) * n_pow;

    // Rising factorial nu (nu+1) ... (nu+2j-2) times n^{-nu-2j+1}.
    let mut rising = nu;
    let mut n_power = n_pow / n;
    for (j, &c) in EM_COEFFS.iter().enumerate() {
        let term = F::lit(c) * rising * n_power;
        sum = sum + term;
        if term.abs() < acc.rel_tol * F::lit(1e-3) * sum {
            return Ok(sum);
        }
        let k = F::lit((2 * j + 1) as f64);
        rising = rising * (nu + k) * (nu + k + F::one());
        n_power = n_power / (n * n);
    }
    Ok(sum)
}

fn check_bose_args<F: Real>(nu: F, z: F) -> Result<()> {
    if !(nu > F::zero()) || !nu.is_finite() {
        return Err(Error::domain("bose_fn", format!("order must be positive, got {}", nu)));
    }
    if !(z >= F::zero() && z <= F::one()) {
        return Err(Error::domain(
            "bose_fn",
            format!("fugacity must lie in [0, 1], got {}", z),
        ));
    }
    if z == F::one() && nu <= F::one() {
        return Err(Error::divergence(
            "bose_fn",
            format!("g_nu(1) diverges for nu <= 1 (nu = {})", nu),
        ));
    }
    Ok(())
}

/// Bose–Einstein function `g_nu(z)` for `nu > 0`, `0 <= z <= 1`, default accuracy.
pub fn bose_fn<F: Real>(nu: F, z: F) -> Result<F> {
    bose_fn_with(nu, z, &Accuracy::default())
}

pub fn bose_fn_with<F: Real>(nu: F, z: F, acc: &Accuracy<F>) -> Result<F> {
    check_bose_args(nu, z)?;
    if z == F::zero() {
        return Ok(F::zero());
    }
    if z == F::one() {
        return riemann_zeta_with(nu, acc);
    }
    if z <= F::lit(SERIES_SWITCH) {
        bose_series(nu, z, acc)
    } else {
        bose_integral(nu, z, acc)
    }
}

/// Direct power series `sum z^k / k^nu`, valid for `0 <= z < 1`.
pub fn bose_series<F: Real>(nu: F, z: F, acc: &Accuracy<F>) -> Result<F> {
    check_bose_args(nu, z)?;
    if z == F::one() {
        return Err(Error::domain("bose_series", "series route requires z < 1"));
    }
    if z == F::zero() {
        return Ok(F::zero());
    }
    // Terms decrease monotonically, so the tail after term k is bounded by
    // term_k * z / (1 - z).
    let tail_factor = z / (F::one() - z);
    let mut sum = F::zero();
    let mut zk = F::one();
    for k in 1..=acc.max_terms {
        zk = zk * z;
        let term = zk * F::lit(k as f64).powf(-nu);
        sum = sum + term;
        if term * tail_factor <= F::lit(0.1) * acc.rel_tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy {
        what: "bose_series",
        estimate: sum.as_f64(),
        error: (zk * tail_factor).as_f64(),
    })
}

/// Quadrature of the integral representation, valid for `0 <= z < 1`.
///
/// For `nu >= 1/2` the substitution `x = t^2` makes the integrand
/// `2 t^(2 nu - 1) / expm1(t^2 + w)` smooth at the origin; for smaller orders
/// `x = t^(1/nu)` removes the singular weight entirely. Here `w = -ln z`.
pub fn bose_integral<F: Real>(nu: F, z: F, acc: &Accuracy<F>) -> Result<F> {
    check_bose_args(nu, z)?;
    if z == F::one() {
        return Err(Error::domain("bose_integral", "integral route requires z < 1"));
    }
    if z == F::zero() {
        return Ok(F::zero());
    }
    let w = -z.ln();
    let x_max = F::lit(80.0) + F::lit(4.0) * nu;
    let opts = QuadOptions::relative((acc.rel_tol * F::lit(0.1)).max(F::epsilon() * F::lit(100.0)));
    let two = F::lit(2.0);
    let half = F::lit(0.5);
    if nu >= half {
        let power = two * nu - F::one();
        let t_max = x_max.sqrt();
        let breaks = [w.sqrt(), F::one()];
        let integrand = |t: F| {
            let denom = (t * t + w).exp_m1();
            let weight = if power == F::zero() { F::one() } else { t.powf(power) };
            Ok(two * weight / denom)
        };
        let q = try_integrate(integrand, F::zero(), t_max, &breaks, &opts)?;
        Ok(q.value / gamma_positive(nu))
    } else {
        let inv = F::one() / nu;
        let t_max = x_max.powf(nu);
        let breaks = [w.powf(nu), F::one()];
        let integrand = |t: F| Ok(F::one() / (t.powf(inv) + w).exp_m1());
        let q = try_integrate(integrand, F::zero(), t_max, &breaks, &opts)?;
        Ok(q.value / gamma_positive(nu + F::one()))
    }
}
