//! Brute-force evaluation of the unexpanded semiclassical phase-space
//! integral
//!
//! ```text
//! N = (2 pi hbar)^-3 int d^3r d^3p 1 / (exp((p^2/2m + alpha p + U(r) - mu)/kT) - 1)
//! ```
//!
//! by nested adaptive quadrature: one radial level per trap subspace, the
//! momentum magnitude innermost. Nothing here touches the Bose-function
//! series or the closed-form Gamma factors of the analytic path; the angular
//! integrals are the unit-sphere areas `2, 2 pi, 4 pi`.
//!
//! Coordinates are scaled to thermal units: `u = p / sqrt(2 m kT)` and
//! `v = r / r_T` with `U(r_T) = kT`, so the exponent reads
//! `u^2 + a u + sum v_i^{s_i} - mu/kT` with `a = alpha sqrt(2m / kT)`.

use crate::error::{Error, Result};
use crate::model::{BoseGas, Exponent, TrapSubspace};
use crate::num::Real;
use crate::quad::{try_integrate, QuadOptions};
use crate::roots::{brent, geometric_bracket, RootOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<F> {
    rel_tol: F,
    momentum_cutoff_factor: F,
    radial_cutoff_factor: F,
}

impl<F: Real> QuadratureSpec<F> {
    /// The momentum cutoff is `factor * sqrt(2 m kT)`. The radial cutoff is
    /// placed where `U = factor^2 kT`, i.e. `factor^{2/s}` thermal radii
    /// (`factor` thermal radii for a harmonic subspace).
    pub fn new(rel_tol: F, momentum_cutoff_factor: F, radial_cutoff_factor: F) -> Result<Self> {
        if !(rel_tol > F::zero() && rel_tol <= F::lit(1e-6)) {
            return Err(Error::Invalid(format!(
                "oracle rel_tol must lie in (0, 1e-6], got {rel_tol}"
            )));
        }
        for (name, v) in [("momentum", momentum_cutoff_factor), ("radial", radial_cutoff_factor)] {
            if !(v >= F::lit(10.0) && v.is_finite()) {
                return Err(Error::Invalid(format!(
                    "{name} cutoff factor must be at least 10, got {v}"
                )));
            }
        }
        Ok(Self {
            rel_tol,
            momentum_cutoff_factor,
            radial_cutoff_factor,
        })
    }

    pub fn rel_tol(&self) -> F {
        self.rel_tol
    }

    pub fn momentum_cutoff_factor(&self) -> F {
        self.momentum_cutoff_factor
    }

    pub fn radial_cutoff_factor(&self) -> F {
        self.radial_cutoff_factor
    }

    pub fn with_rel_tol(self, rel_tol: F) -> Result<Self> {
        Self::new(rel_tol, self.momentum_cutoff_factor, self.radial_cutoff_factor)
    }

    pub fn with_cutoffs(self, momentum: F, radial: F) -> Result<Self> {
        Self::new(self.rel_tol, momentum, radial)
    }

    fn quad(&self) -> QuadOptions<F> {
        QuadOptions::relative(self.rel_tol)
    }
}

impl<F: Real> Default for QuadratureSpec<F> {
    fn default() -> Self {
        Self {
            rel_tol: F::lit(1e-9).max(F::epsilon() * F::lit(1e3)),
            momentum_cutoff_factor: F::lit(10.0),
            radial_cutoff_factor: F::lit(10.0),
        }
    }
}

fn sphere_area<F: Real>(n: u8) -> F {
    match n {
        1 => F::lit(2.0),
        2 => F::TAU(),
        _ => F::lit(2.0) * F::TAU(),
    }
}

/// One radial level in thermal units.
struct Level<F> {
    weight_power: i32,
    exponent: Option<F>,
    v_max: F,
}

/// Dimensionless phase-space problem at one temperature.
struct Scaled<F> {
    prefactor: F,
    levels: Vec<Level<F>>,
    drift: F,
    beta_mu: F,
    u_max: F,
}

fn thermal_radius<F: Real>(sub: &TrapSubspace<F>, kt: F) -> F {
    sub.radius_at_energy(kt)
}

fn scale<F: Real>(gas: &BoseGas<F>, temperature: F, mu: F, spec: &QuadratureSpec<F>) -> Result<Scaled<F>> {
    if !(temperature > F::zero() && temperature.is_finite()) {
        return Err(Error::domain(
            "oracle",
            format!("temperature must be positive, got {temperature}"),
        ));
    }
    let c = &gas.constants;
    let kt = c.k_boltzmann * temperature;
    let m = gas.mass();
    let p_th = (F::lit(2.0) * m * kt).sqrt();
    let drift = gas.alpha() * p_th / kt;
    // Minimum over u >= 0 of u^2 + drift u.
    let floor = if drift < F::zero() {
        -drift * drift / F::lit(4.0)
    } else {
        F::zero()
    };
    let raw = mu / kt;
    if raw > floor + F::lit(16.0) * F::epsilon() * floor.abs() {
        return Err(Error::domain(
            "oracle",
            format!(
                "chemical potential {:e} J lies above the spectrum minimum {:e} J",
                mu.as_f64(),
                (floor * kt).as_f64()
            ),
        ));
    }
    let beta_mu = raw.min(floor);
    let h = F::TAU() * c.hbar;
    let mut prefactor = F::lit(2.0) * F::TAU() * (p_th / h).powi(3);
    let mut levels = Vec::new();
    for sub in gas.trap.subspaces() {
        let radius = match sub.exponent() {
            Exponent::Finite(_) => thermal_radius(sub, kt),
            Exponent::Infinite => sub.length_scale(),
        };
        prefactor = prefactor * sphere_area::<F>(sub.n()) * radius.powi(i32::from(sub.n()));
        let (exponent, v_max) = match sub.exponent() {
            Exponent::Finite(s) => (Some(s), spec.radial_cutoff_factor.powf(F::lit(2.0) / s)),
            Exponent::Infinite => (None, F::one()),
        };
        levels.push(Level {
            weight_power: i32::from(sub.n()) - 1,
            exponent,
            v_max,
        });
    }
    let u_max = spec.momentum_cutoff_factor + drift.abs();
    Ok(Scaled {
        prefactor,
        levels,
        drift,
        beta_mu,
        u_max,
    })
}

impl<F: Real> Scaled<F> {
    fn momentum_breaks(&self) -> Vec<F> {
        let mut b = vec![F::one()];
        if self.drift < F::zero() {
            b.push(-self.drift / F::lit(2.0));
        }
        b
    }

    fn bose_momentum(&self, potential: F, opts: &QuadOptions<F>) -> Result<F> {
        let offset = potential - self.beta_mu;
        let drift = self.drift;
        let breaks = self.momentum_breaks();
        let q = try_integrate(
            |u: F| {
                let e = u * u + drift * u + offset;
                if e <= F::zero() {
                    return Err(Error::domain("oracle", "integrand pole reached"));
                }
                Ok(u * u / e.exp_m1())
            },
            F::zero(),
            self.u_max,
            &breaks,
            opts,
        )?;
        Ok(q.value)
    }

    /// `floors[i]` is the absolute tolerance of level `i`; an error `d` in
    /// a level-`i` value costs at most `d` times the outer weight measure.
    fn nested(&self, index: usize, potential: F, rel_tol: F, floors: &[F]) -> Result<F> {
        let opts = QuadOptions::relative(rel_tol).with_abs_tol(floors[index]);
        let Some(level) = self.levels.get(index) else {
            return self.bose_momentum(potential, &opts);
        };
        let breaks = [F::one()];
        let q = try_integrate(
            |v: F| {
                let u = match level.exponent {
                    Some(s) => v.powf(s),
                    None => F::zero(),
                };
                let inner = self.nested(index + 1, potential + u, rel_tol, floors)?;
                Ok(v.powi(level.weight_power) * inner)
            },
            F::zero(),
            level.v_max,
            &breaks,
            &opts,
        )?;
        Ok(q.value)
    }

    fn floors(&self, target: F) -> Vec<F> {
        let mut floors = vec![target];
        let mut measure = F::one();
        for level in &self.levels {
            let p = F::lit(f64::from(level.weight_power + 1));
            measure = measure * level.v_max.powf(p) / p;
            floors.push(target / measure);
        }
        floors
    }

    /// Coarse pass fixes the absolute scale; the fine pass then ignores
    /// regions that cannot move the total by `rel_tol`.
    fn integral(&self, rel_tol: F) -> Result<F> {
        let zero = vec![F::zero(); self.levels.len() + 1];
        let coarse_tol = F::lit(1e-2).max(rel_tol);
        let coarse = self.nested(0, F::zero(), coarse_tol, &zero)?;
        if rel_tol >= coarse_tol {
            return Ok(coarse);
        }
        let floors = self.floors(F::lit(0.1) * rel_tol * coarse.abs());
        self.nested(0, F::zero(), rel_tol, &floors)
    }
}

/// Lowest single-particle energy: 0 for `alpha >= 0`, `-m alpha^2 / 2`
/// (at `|p| = m |alpha|`) otherwise.
pub fn spectrum_infimum<F: Real>(gas: &BoseGas<F>) -> F {
    if gas.alpha() < F::zero() {
        -gas.alpha_energy()
    } else {
        F::zero()
    }
}

/// Full phase-space particle number at temperature `temperature` (K) and
/// chemical potential `mu` (J), `mu` not above [`spectrum_infimum`].
pub fn full_number_quadrature<F: Real>(gas: &BoseGas<F>, temperature: F, mu: F, spec: &QuadratureSpec<F>) -> Result<F> {
    let scaled = scale(gas, temperature, mu, spec)?;
    Ok(scaled.prefactor * scaled.integral(spec.rel_tol)?)
}

/// Momentum-space integral of the Bose factor at a fixed position, i.e. the
/// number density (m^-3) without any expansion in `alpha`.
pub fn full_density_quadrature<F: Real>(
    gas: &BoseGas<F>,
    temperature: F,
    mu: F,
    radii: &[F],
    spec: &QuadratureSpec<F>,
) -> Result<F> {
    let scaled = scale(gas, temperature, mu, spec)?;
    let u = gas.trap.potential(radii)?;
    if u == F::infinity() {
        return Ok(F::zero());
    }
    let kt = gas.constants.k_boltzmann * temperature;
    let p_th = (F::lit(2.0) * gas.mass() * kt).sqrt();
    let h = F::TAU() * gas.constants.hbar;
    let pre = F::lit(2.0) * F::TAU() * (p_th / h).powi(3);
    Ok(pre * scaled.bose_momentum(u / kt, &spec.quad())?)
}

/// Second route: expands the Bose factor as `sum_j exp(-j (eps - mu)/kT)`, so
/// each term factorises into one-dimensional Boltzmann integrals. Converges
/// geometrically for `mu` strictly below the spectrum minimum.
pub fn full_number_series<F: Real>(
    gas: &BoseGas<F>,
    temperature: F,
    mu: F,
    spec: &QuadratureSpec<F>,
    max_terms: usize,
) -> Result<F> {
    let scaled = scale(gas, temperature, mu, spec)?;
    let opts = spec.quad();
    let cut = spec.momentum_cutoff_factor;
    let rcut = spec.radial_cutoff_factor;
    let drift = scaled.drift;
    let u0 = if drift < F::zero() {
        -drift / F::lit(2.0)
    } else {
        F::zero()
    };
    let mut sum = F::zero();
    let mut previous = F::infinity();
    for j in 1..=max_terms {
        let jf = F::lit(j as f64);
        let width = F::one() / jf.sqrt();
        let breaks = [u0, u0 + width];
        let momentum = try_integrate(
            |u: F| Ok(u * u * (-jf * (u * u + drift * u - scaled.beta_mu)).exp()),
            F::zero(),
            u0 + cut * width,
            &breaks,
            &opts,
        )?
        .value;
        let mut term = momentum;
        for level in &scaled.levels {
            let radial = match level.exponent {
                Some(s) => {
                    let v_max = (rcut * rcut / jf).powf(F::one() / s);
                    try_integrate(
                        |v: F| Ok(v.powi(level.weight_power) * (-jf * v.powf(s)).exp()),
                        F::zero(),
                        v_max,
                        &[],
                        &opts,
                    )?
                    .value
                }
                None => F::one() / F::lit(f64::from(level.weight_power + 1)),
            };
            term = term * radial;
        }
        sum = sum + term;
        let ratio = term / previous;
        previous = term;
        if j > 2 && ratio < F::one() {
            let tail = term * ratio / (F::one() - ratio);
            if tail < F::lit(0.1) * spec.rel_tol * sum {
                return Ok(scaled.prefactor * (sum + tail));
            }
        }
    }
    Err(Error::Accuracy {
        what: "oracle series",
        estimate: (scaled.prefactor * sum).as_f64(),
        error: (scaled.prefactor * previous).as_f64(),
    })
}

/// Condensation temperature of the full model: the `T` at which
/// [`full_number_quadrature`] at `mu = spectrum_infimum` holds `n_total`.
/// `guess` seeds the bracket search.
pub fn oracle_tc<F: Real>(gas: &BoseGas<F>, n_total: F, guess: F, spec: &QuadratureSpec<F>) -> Result<F> {
    if !(n_total >= F::one()) {
        return Err(Error::domain(
            "oracle_tc",
            format!("particle number must be at least 1, got {n_total}"),
        ));
    }
    if !(guess > F::zero() && guess.is_finite()) {
        return Err(Error::domain(
            "oracle_tc",
            format!("guess must be a positive temperature, got {guess}"),
        ));
    }
    let mu = spectrum_infimum(gas);
    // N grows like T^gamma, so ln N is near linear in ln T.
    let mut residual = |t: F| -> Result<F> {
        let n = full_number_quadrature(gas, t, mu, spec)?;
        Ok((n / n_total).ln())
    };
    let factors: Vec<F> = [1.02, 1.1, 1.5, 3.0, 10.0].iter().map(|&w| F::lit(w)).collect();
    let (lo, hi) = geometric_bracket(&mut residual, guess, &factors)?;
    let opts = RootOptions {
        abs_tol: spec.rel_tol * F::lit(0.1),
        rel_tol: F::zero(),
        max_iter: 100,
    };
    let root = brent(
        |x: F| residual(guess * x.exp()),
        (lo / guess).ln(),
        (hi / guess).ln(),
        &opts,
    )?;
    Ok(guess * root.x.exp())
}
