//! Physical constants, the deformed particle species and the power-law trap.
//!
//! A trap is a list of radial subspaces of dimension `n_i` with
//! `U(r) = sum_i A_i |r_i / a_i|^{s_i}` and `sum_i n_i = 3`. A subspace with
//! an infinite exponent is a hard wall at `|r_i| = a_i`.

use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::num::Real;
use crate::specfun::gamma_fn;

const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// SI constants. The default Planck mass is `1.2e28 eV / c^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<F> {
    pub hbar: F,
    pub k_boltzmann: F,
    pub c_light: F,
    pub planck_mass: F,
}

impl<F: Real> Default for PhysicalConstants<F> {
    fn default() -> Self {
        let c = 299_792_458.0f64;
        Self {
            hbar: F::lit(1.054_571_817e-34),
            k_boltzmann: F::lit(1.380_649e-23),
            c_light: F::lit(c),
            planck_mass: F::lit(1.2e28 * ELECTRON_VOLT / (c * c)),
        }
    }
}

impl<F: Real> PhysicalConstants<F> {
    pub fn new(hbar: F, k_boltzmann: F, c_light: F, planck_mass: F) -> Result<Self> {
        for (name, v) in [
            ("hbar", hbar),
            ("k_boltzmann", k_boltzmann),
            ("c_light", c_light),
            ("planck_mass", planck_mass),
        ] {
            if !(v > F::zero() && v.is_finite()) {
                return Err(Error::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            hbar,
            k_boltzmann,
            c_light,
            planck_mass,
        })
    }
}

/// Boson of mass `mass` (kg) with linear dispersion deformation `xi1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Species<F> {
    mass: F,
    xi1: F,
}

impl<F: Real> Species<F> {
    pub fn new(mass: F, xi1: F) -> Result<Self> {
        if !(mass > F::zero() && mass.is_finite()) {
            return Err(Error::Invalid(format!("mass must be positive, got {mass}")));
        }
        if !xi1.is_finite() {
            return Err(Error::Invalid(format!("xi1 must be finite, got {xi1}")));
        }
        Ok(Self { mass, xi1 })
    }

    pub fn mass(&self) -> F {
        self.mass
    }

    pub fn xi1(&self) -> F {
        self.xi1
    }

    pub fn with_xi1(self, xi1: F) -> Self {
        Self { xi1, ..self }
    }

    /// Velocity scale `alpha = xi1 m c / (2 M_p)` multiplying `|p|` in the
    /// single-particle energy.
    pub fn alpha(&self, constants: &PhysicalConstants<F>) -> F {
        self.xi1 * self.mass * constants.c_light / (F::lit(2.0) * constants.planck_mass)
    }
}

/// Trap exponent `s`; `Infinite` marks a hard-wall (box) subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinite,
}

impl<T: Num + Copy> Exponent<T> {
    /// `n / s`, zero for a hard wall.
    pub fn ratio(&self, n: T) -> T {
        match *self {
            Exponent::Finite(s) => n / s,
            Exponent::Infinite => T::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Exponent<U> {
        match self {
            Exponent::Finite(s) => Exponent::Finite(f(s)),
            Exponent::Infinite => Exponent::Infinite,
        }
    }
}

/// One radial subspace of the trap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapSubspace<F> {
    n: u8,
    exponent: Exponent<F>,
    energy_scale: F,
    length_scale: F,
}

impl<F: Real> TrapSubspace<F> {
    /// Raw `(n, s, A, a)` with `A` in joules and `a` in metres.
    pub fn new(n: u8, exponent: Exponent<F>, energy_scale: F, length_scale: F) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Invalid(format!("sub-dimension must be 1, 2 or 3, got {n}")));
        }
        if let Exponent::Finite(s) = exponent {
            if !(s > F::zero() && s.is_finite()) {
                return Err(Error::Invalid(format!("exponent must be positive, got {s}")));
            }
        }
        for (name, v) in [("energy scale", energy_scale), ("length scale", length_scale)] {
            if !(v > F::zero() && v.is_finite()) {
                return Err(Error::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            n,
            exponent,
            energy_scale,
            length_scale,
        })
    }

    /// Harmonic subspace with `A = hbar omega / 2`, `a = sqrt(hbar / (m omega))`,
    /// `omega` in rad/s. The exponent may differ from 2 to build the
    /// power-law family sharing the oscillator scales.
    pub fn oscillator_scaled(
        n: u8,
        exponent: Exponent<F>,
        omega: F,
        mass: F,
        constants: &PhysicalConstants<F>,
    ) -> Result<Self> {
        if !(omega > F::zero() && omega.is_finite()) {
            return Err(Error::Invalid(format!(
                "angular frequency must be positive, got {omega}"
            )));
        }
        if !(mass > F::zero()) {
            return Err(Error::Invalid(format!("mass must be positive, got {mass}")));
        }
        let hbar = constants.hbar;
        Self::new(n, exponent, hbar * omega / F::lit(2.0), (hbar / (mass * omega)).sqrt())
    }

    pub fn harmonic(n: u8, omega: F, mass: F, constants: &PhysicalConstants<F>) -> Result<Self> {
        Self::oscillator_scaled(n, Exponent::Finite(F::lit(2.0)), omega, mass, constants)
    }

    /// Hard wall enclosing an `n`-dimensional ball of the given measure (m^n).
    pub fn hard_wall(n: u8, measure: F) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Invalid(format!("sub-dimension must be 1, 2 or 3, got {n}")));
        }
        if !(measure > F::zero() && measure.is_finite()) {
            return Err(Error::Invalid(format!("box measure must be positive, got {measure}")));
        }
        let radius = (measure / unit_ball_volume::<F>(n)).powf(F::one() / F::lit(f64::from(n)));
        Self::new(n, Exponent::Infinite, F::one(), radius)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn exponent(&self) -> Exponent<F> {
        self.exponent
    }

    pub fn with_exponent(self, exponent: Exponent<F>) -> Result<Self> {
        Self::new(self.n, exponent, self.energy_scale, self.length_scale)
    }

    pub fn energy_scale(&self) -> F {
        self.energy_scale
    }

    pub fn length_scale(&self) -> F {
        self.length_scale
    }

    fn dim(&self) -> F {
        F::lit(f64::from(self.n))
    }

    /// `n / s`, zero for a hard wall.
    pub fn dimension_ratio(&self) -> F {
        self.exponent.ratio(self.dim())
    }

    /// Potential energy at radial coordinate `r >= 0`; infinite beyond a wall.
    pub fn potential(&self, r: F) -> F {
        let x = r.abs() / self.length_scale;
        match self.exponent {
            Exponent::Finite(s) => self.energy_scale * x.powf(s),
            Exponent::Infinite if x <= F::one() => F::zero(),
            Exponent::Infinite => F::infinity(),
        }
    }

    /// Radius where `U = energy`; the wall radius for a hard wall.
    pub fn radius_at_energy(&self, energy: F) -> F {
        match self.exponent {
            Exponent::Finite(s) => self.length_scale * (energy / self.energy_scale).powf(F::one() / s),
            Exponent::Infinite => self.length_scale,
        }
    }
}

/// Volume of the unit ball in `n` dimensions, `pi^{n/2} / Gamma(n/2 + 1)`.
pub fn unit_ball_volume<F: Real>(n: u8) -> F {
    match n {
        1 => F::lit(2.0),
        2 => F::PI(),
        3 => F::lit(4.0) * F::PI() / F::lit(3.0),
        _ => {
            let half_n = F::lit(f64::from(n)) / F::lit(2.0);
            F::PI().powf(half_n) / gamma_fn(half_n + F::one()).expect("positive argument")
        }
    }
}

/// Power-law trap: one to three subspaces whose dimensions add up to 3.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawTrap<F> {
    subspaces: Vec<TrapSubspace<F>>,
}

impl<F: Real> PowerLawTrap<F> {
    pub fn new(subspaces: Vec<TrapSubspace<F>>) -> Result<Self> {
        if subspaces.is_empty() || subspaces.len() > 3 {
            return Err(Error::Invalid(format!(
                "a trap needs 1 to 3 subspaces, got {}",
                subspaces.len()
            )));
        }
        let total: u32 = subspaces.iter().map(|s| u32::from(s.n)).sum();
        if total != 3 {
            return Err(Error::Invalid(format!("sub-dimensions must add up to 3, got {total}")));
        }
        Ok(Self { subspaces })
    }

    /// Cartesian harmonic trap with angular frequencies `omegas` (rad/s).
    pub fn anisotropic_harmonic(omegas: [F; 3], mass: F, constants: &PhysicalConstants<F>) -> Result<Self> {
        let subs = omegas
            .iter()
            .map(|&w| TrapSubspace::harmonic(1, w, mass, constants))
            .collect::<Result<Vec<_>>>()?;
        Self::new(subs)
    }

    /// Spherical trap `U = A |r / a|^s`.
    pub fn spherical(exponent: Exponent<F>, energy_scale: F, length_scale: F) -> Result<Self> {
        Self::new(vec![TrapSubspace::new(3, exponent, energy_scale, length_scale)?])
    }

    /// Spherical box of volume `volume` (m^3).
    pub fn spherical_box(volume: F) -> Result<Self> {
        Self::new(vec![TrapSubspace::hard_wall(3, volume)?])
    }

    pub fn subspaces(&self) -> &[TrapSubspace<F>] {
        &self.subspaces
    }

    /// Replaces the exponent of subspace `index`.
    pub fn with_exponent(&self, index: usize, exponent: Exponent<F>) -> Result<Self> {
        let mut subs = self.subspaces.clone();
        let sub = subs
            .get_mut(index)
            .ok_or_else(|| Error::Invalid(format!("no subspace at index {index}")))?;
        *sub = sub.with_exponent(exponent)?;
        Self::new(subs)
    }

    /// Shape parameter `gamma = 3/2 + sum n_l / s_l`.
    pub fn shape_parameter(&self) -> F {
        self.subspaces
            .iter()
            .fold(F::lit(1.5), |acc, s| acc + s.dimension_ratio())
    }

    /// `C = prod_l pi^{n_l/2} / Gamma(n_l/2 + 1)`, the product of unit-ball
    /// volumes of the radial subspaces (8 for any Cartesian trap).
    pub fn geometric_constant(&self) -> F {
        self.subspaces
            .iter()
            .fold(F::one(), |acc, s| acc * unit_ball_volume::<F>(s.n))
    }

    /// `V_char = prod A^{n/s} a^{-n} / (C prod Gamma(n/s + 1))`; for a pure
    /// box this is the inverse box volume.
    pub fn characteristic_volume(&self) -> F {
        let mut num = F::one();
        for s in &self.subspaces {
            let ratio = s.dimension_ratio();
            let gamma = gamma_fn(ratio + F::one()).expect("positive argument");
            num = num * s.energy_scale.powf(ratio) * s.length_scale.powf(-s.dim()) / gamma;
        }
        num / self.geometric_constant()
    }

    /// Configuration-space Boltzmann integral `int d^3r exp(-U / kT)`
    /// in closed form, `C prod a^n (kT/A)^{n/s} Gamma(n/s + 1)`.
    pub fn boltzmann_volume(&self, kt: F) -> F {
        let mut acc = self.geometric_constant();
        for s in &self.subspaces {
            let ratio = s.dimension_ratio();
            let gamma = gamma_fn(ratio + F::one()).expect("positive argument");
            let energy = if s.exponent.is_infinite() {
                F::one()
            } else {
                kt / s.energy_scale
            };
            acc = acc * s.length_scale.powf(s.dim()) * energy.powf(ratio) * gamma;
        }
        acc
    }

    /// Volume of the region where `U(r) <= energy`,
    /// `C prod a^n (energy / A)^{n/s}`. For a spherical trap this is
    /// `4 pi R^3 / 3` with `U(R) = energy`.
    pub fn volume_below(&self, energy: F) -> F {
        let mut acc = self.geometric_constant();
        for s in &self.subspaces {
            let ratio = s.dimension_ratio();
            let e = if s.exponent.is_infinite() {
                F::one()
            } else {
                energy / s.energy_scale
            };
            acc = acc * s.length_scale.powf(s.dim()) * e.powf(ratio);
        }
        acc
    }

    /// `U(r)` for one radial coordinate per subspace.
    pub fn potential(&self, radii: &[F]) -> Result<F> {
        if radii.len() != self.subspaces.len() {
            return Err(Error::Invalid(format!(
                "expected {} radial coordinates, got {}",
                self.subspaces.len(),
                radii.len()
            )));
        }
        Ok(self
            .subspaces
            .iter()
            .zip(radii)
            .fold(F::zero(), |acc, (s, &r)| acc + s.potential(r)))
    }

    pub fn is_pure_box(&self) -> bool {
        self.subspaces.iter().all(|s| s.exponent.is_infinite())
    }
}

/// Trap, species and constants bundled for the thermodynamic routines.
#[derive(Debug, Clone, PartialEq)]
pub struct BoseGas<F> {
    pub trap: PowerLawTrap<F>,
    pub species: Species<F>,
    pub constants: PhysicalConstants<F>,
}

impl<F: Real> BoseGas<F> {
    pub fn new(trap: PowerLawTrap<F>, species: Species<F>) -> Self {
        Self {
            trap,
            species,
            constants: PhysicalConstants::default(),
        }
    }

    pub fn with_constants(mut self, constants: PhysicalConstants<F>) -> Self {
        self.constants = constants;
        self
    }

    pub fn with_xi1(&self, xi1: F) -> Self {
        Self {
            species: self.species.with_xi1(xi1),
            ..self.clone()
        }
    }

    pub fn with_trap(&self, trap: PowerLawTrap<F>) -> Self {
        Self { trap, ..self.clone() }
    }

    pub fn alpha(&self) -> F {
        self.species.alpha(&self.constants)
    }

    pub fn mass(&self) -> F {
        self.species.mass()
    }

    pub fn gamma(&self) -> F {
        self.trap.shape_parameter()
    }

    /// `m alpha^2 / 2`, the depth of the spectrum below zero for `alpha < 0`.
    pub fn alpha_energy(&self) -> F {
        let a = self.alpha();
        F::lit(0.5) * self.mass() * a * a
    }
}

/// Shape parameter over any exact number type, e.g. `Ratio<i64>`.
pub fn shape_parameter_exact<T>(subspaces: &[(T, Exponent<T>)]) -> T
where
    T: Num + Copy + Zero,
{
    let three_halves = (T::one() + T::one() + T::one()) / (T::one() + T::one());
    subspaces.iter().fold(three_halves, |acc, (n, s)| acc + s.ratio(*n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn consts() -> PhysicalConstants<f64> {
        PhysicalConstants::default()
    }

    const MASS: f64 = 15e-26;

    #[test]
    fn planck_mass_default() {
        let m = consts().planck_mass;
        assert!((m - 2.139e-8).abs() / 2.139e-8 < 1e-3, "{m}");
    }

    #[test]
    fn alpha_values() {
        let c = consts();
        assert_eq!(Species::new(MASS, 0.0).unwrap().alpha(&c), 0.0);
        let a = Species::new(MASS, 1.0).unwrap().alpha(&c);
        // xi1 m c / (2 M_p) = 15e-26 * 299792458 / (2 * 2.1391e-8)
        let expected = 15e-26 * 299_792_458.0 / (2.0 * 1.2e28 * 1.602_176_634e-19 / 299_792_458f64.powi(2));
        assert!((a - expected).abs() / expected < 1e-14);
        assert!((a - 1.051e-9).abs() < 1e-12);
        assert_eq!(Species::new(MASS, -1.0).unwrap().alpha(&c), -a);
    }

    #[test]
    fn species_validation() {
        assert!(Species::new(0.0, 1.0).is_err());
        assert!(Species::new(-1.0f64, 1.0).is_err());
        assert!(Species::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn shape_parameter_anchors() {
        let c = consts();
        let h = PowerLawTrap::anisotropic_harmonic([10.0, 10.0, 20.0], MASS, &c).unwrap();
        assert_eq!(h.shape_parameter(), 3.0);
        assert_eq!(PowerLawTrap::spherical_box(1e-9).unwrap().shape_parameter(), 1.5);
        let lin = PowerLawTrap::spherical(Exponent::Finite(1.0), 1e-30, 1e-6).unwrap();
        assert_eq!(lin.shape_parameter(), 4.5);
    }

    #[test]
    fn geometric_constant_anchors() {
        let c = consts();
        let h = PowerLawTrap::anisotropic_harmonic([1.0, 2.0, 3.0], MASS, &c).unwrap();
        assert_eq!(h.geometric_constant(), 8.0);
        let sph = PowerLawTrap::spherical(Exponent::Finite(2.0), 1.0, 1.0).unwrap();
        assert!((sph.geometric_constant() - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
        let cyl = PowerLawTrap::new(vec![
            TrapSubspace::new(2, Exponent::Finite(2.0), 1.0, 1.0).unwrap(),
            TrapSubspace::new(1, Exponent::Finite(4.0), 1.0, 1.0).unwrap(),
        ])
        .unwrap();
        assert!((cyl.geometric_constant() - 2.0 * std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn trap_validation() {
        let one = TrapSubspace::new(1, Exponent::Finite(2.0), 1.0, 1.0).unwrap();
        assert!(PowerLawTrap::new(vec![one, one]).is_err());
        assert!(PowerLawTrap::new(vec![one; 4]).is_err());
        assert!(PowerLawTrap::<f64>::new(vec![]).is_err());
        assert!(TrapSubspace::new(0, Exponent::Finite(2.0), 1.0, 1.0).is_err());
        assert!(TrapSubspace::new(1, Exponent::Finite(-2.0), 1.0, 1.0).is_err());
        assert!(TrapSubspace::new(1, Exponent::Finite(2.0), 0.0, 1.0).is_err());
        assert!(TrapSubspace::new(1, Exponent::Finite(2.0), 1.0, -1.0).is_err());
    }

    #[test]
    fn box_is_inverse_volume() {
        let v: f64 = 3.7e-12;
        let b = PowerLawTrap::spherical_box(v).unwrap();
        assert!((b.characteristic_volume() * v - 1.0).abs() < 1e-12);
        // Cartesian box of side L: each wall at a = L/2, C = 8.
        let l: f64 = 2e-4;
        let cart = PowerLawTrap::new(vec![TrapSubspace::hard_wall(1, l).unwrap(); 3]).unwrap();
        assert!((cart.characteristic_volume() * l.powi(3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_lengths_scales_vchar() {
        let subs = |a: f64| {
            PowerLawTrap::new(
                (0..3)
                    .map(|i| TrapSubspace::new(1, Exponent::Finite(2.0), 1e-30 * (i + 1) as f64, a).unwrap())
                    .collect(),
            )
            .unwrap()
        };
        let r = subs(2e-6).characteristic_volume() / subs(1e-6).characteristic_volume();
        assert!((r - 0.125).abs() < 1e-14);
    }

    #[test]
    fn reorder_invariance() {
        let a = TrapSubspace::<f64>::new(2, Exponent::Finite(3.0), 2e-30, 1e-6).unwrap();
        let b = TrapSubspace::new(1, Exponent::Finite(1.5), 5e-31, 3e-6).unwrap();
        let t1 = PowerLawTrap::new(vec![a, b]).unwrap();
        let t2 = PowerLawTrap::new(vec![b, a]).unwrap();
        assert!((t1.geometric_constant() - t2.geometric_constant()).abs() < 1e-14);
        let (v1, v2) = (t1.characteristic_volume(), t2.characteristic_volume());
        assert!((v1 - v2).abs() / v1 < 1e-14);
    }

    #[test]
    fn exact_shape_parameter() {
        let r = |n: i64, d: i64| Ratio::new(n, d);
        let harmonic = [(r(1, 1), Exponent::Finite(r(2, 1))); 3];
        assert_eq!(shape_parameter_exact(&harmonic), r(3, 1));
        let cyl = [
            (r(2, 1), Exponent::Finite(r(4, 1))),
            (r(1, 1), Exponent::Finite(r(2, 1))),
        ];
        assert_eq!(shape_parameter_exact(&cyl), r(5, 2));
        assert_eq!(shape_parameter_exact(&[(r(3, 1), Exponent::Infinite)]), r(3, 2));
    }

    #[test]
    fn oscillator_scales() {
        let c = consts();
        let w = 2.0 * std::f64::consts::PI * 100.0;
        let s = TrapSubspace::harmonic(1, w, MASS, &c).unwrap();
        // A (r/a)^2 = m w^2 r^2 / 2
        let r = 3e-6;
        let u = s.potential(r);
        assert!((u - 0.5 * MASS * w * w * r * r).abs() / u < 1e-13);
        assert!((s.radius_at_energy(u) - r).abs() / r < 1e-13);
    }

    #[test]
    fn volume_below_spherical() {
        let t = PowerLawTrap::spherical(Exponent::Finite(2.0), 2.0, 1.0).unwrap();
        // U(R) = 2 R^2 = 8 -> R = 2
        let v = t.volume_below(8.0);
        assert!((v - 4.0 / 3.0 * std::f64::consts::PI * 8.0).abs() < 1e-12);
    }
}
