//! JSON run configuration and its resolution into SI model objects.

use std::fmt;
use std::path::Path;

use deformed_bec::{Constants, Exponent, Gas, OracleSpec, Particle, Subspace, Trap};
use serde::Deserialize;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<deformed_bec::Error> for ConfigError {
    fn from(e: deformed_bec::Error) -> Self {
        ConfigError(e.to_string())
    }
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub species: SpeciesConfig,
    pub trap: Vec<SubspaceConfig>,
    pub n_total: f64,
    #[serde(rename = "temperature_K")]
    pub temperature_k: Option<f64>,
    pub fugacity: Option<f64>,
    pub resolution: Option<f64>,
    #[serde(rename = "epsilon_min_J")]
    pub epsilon_min_j: Option<f64>,
    pub rho_m3: Option<f64>,
    pub quadrature: Option<QuadratureConfig>,
    pub density: Option<DensityConfig>,
    pub scan: Option<ScanConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub mass_kg: f64,
    pub xi1: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceConfig {
    pub n: u8,
    pub s: Option<ExponentConfig>,
    pub raw: Option<RawScales>,
    pub harmonic: Option<HarmonicScales>,
    #[serde(rename = "box")]
    pub wall: Option<BoxScales>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum ExponentConfig {
    Value(f64),
    Word(InfWord),
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub enum InfWord {
    #[serde(rename = "inf")]
    Inf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScales {
    #[serde(rename = "A_J")]
    pub energy_j: f64,
    pub a_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum FrequencyUnit {
    #[serde(rename = "rad/s")]
    RadPerSecond,
    #[serde(rename = "Hz")]
    Hertz,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicScales {
    pub frequency: f64,
    pub unit: FrequencyUnit,
}

/// `volume` is the measure of the subspace ball: a length for `n = 1`, an
/// area for `n = 2`, a volume for `n = 3`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxScales {
    pub volume: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: Option<f64>,
    pub momentum_cutoff_factor: Option<f64>,
    pub radial_cutoff_factor: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub points: Option<usize>,
    /// Largest radius, in thermal radii of each subspace.
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum ScanAxis {
    N,
    #[serde(rename = "s1")]
    S1,
    #[serde(rename = "xi1")]
    Xi1,
    T,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

/// Subspace after unit conversion, kept for echoing.
#[derive(Debug, Clone)]
pub struct ResolvedSubspace {
    pub n: u8,
    pub exponent: Exponent<f64>,
    pub energy_j: f64,
    pub length_m: f64,
    /// Angular frequency when given as harmonic shorthand.
    pub omega_rad_s: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub gas: Gas,
    pub subspaces: Vec<ResolvedSubspace>,
    pub n_total: f64,
    pub quadrature: OracleSpec,
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("invalid config {}: {e}", path.display())))
}

fn positive(name: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be positive and finite, got {v}")))
    }
}

fn exponent(cfg: Option<ExponentConfig>, index: usize) -> Result<Option<Exponent<f64>>, ConfigError> {
    match cfg {
        None => Ok(None),
        Some(ExponentConfig::Word(InfWord::Inf)) => Ok(Some(Exponent::Infinite)),
        Some(ExponentConfig::Value(s)) => Ok(Some(Exponent::Finite(positive(&format!("trap[{index}].s"), s)?))),
    }
}

fn subspace(cfg: &SubspaceConfig, index: usize, mass: f64, c: &Constants) -> Result<ResolvedSubspace, ConfigError> {
    let given = [cfg.raw.is_some(), cfg.harmonic.is_some(), cfg.wall.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(bad(format!("trap[{index}] needs exactly one of raw, harmonic, box")));
    }
    let s = exponent(cfg.s, index)?;
    let built = if let Some(raw) = &cfg.raw {
        let s = s.ok_or_else(|| bad(format!("trap[{index}].s is required with raw scales")))?;
        let energy = positive(&format!("trap[{index}].raw.A_J"), raw.energy_j)?;
        let length = positive(&format!("trap[{index}].raw.a_m"), raw.a_m)?;
        (Subspace::new(cfg.n, s, energy, length)?, None)
    } else if let Some(h) = &cfg.harmonic {
        let value = positive(&format!("trap[{index}].harmonic.frequency"), h.frequency)?;
        let omega = match h.unit {
            FrequencyUnit::RadPerSecond => value,
            FrequencyUnit::Hertz => 2.0 * std::f64::consts::PI * value,
        };
        let s = s.unwrap_or(Exponent::Finite(2.0));
        if s.is_infinite() {
            return Err(bad(format!("trap[{index}]: harmonic shorthand needs a finite s")));
        }
        (Subspace::oscillator_scaled(cfg.n, s, omega, mass, c)?, Some(omega))
    } else {
        let b = cfg.wall.as_ref().expect("checked above");
        if matches!(s, Some(Exponent::Finite(_))) {
            return Err(bad(format!("trap[{index}]: box shorthand implies s = \"inf\"")));
        }
        let measure = positive(&format!("trap[{index}].box.volume"), b.volume)?;
        (Subspace::hard_wall(cfg.n, measure)?, None)
    };
    let (sub, omega_rad_s) = built;
    Ok(ResolvedSubspace {
        n: sub.n(),
        exponent: sub.exponent(),
        energy_j: sub.energy_scale(),
        length_m: sub.length_scale(),
        omega_rad_s,
    })
}

fn quadrature(cfg: Option<&QuadratureConfig>) -> Result<OracleSpec, ConfigError> {
    let d = OracleSpec::default();
    let Some(q) = cfg else { return Ok(d) };
    Ok(OracleSpec::new(
        q.rel_tol.unwrap_or(d.rel_tol()),
        q.momentum_cutoff_factor.unwrap_or(d.momentum_cutoff_factor()),
        q.radial_cutoff_factor.unwrap_or(d.radial_cutoff_factor()),
    )?)
}

impl Resolved {
    pub fn new(config: RunConfig) -> Result<Self, ConfigError> {
        let c = Constants::default();
        let mass = positive("species.mass_kg", config.species.mass_kg)?;
        if !config.species.xi1.is_finite() {
            return Err(bad("species.xi1 must be finite"));
        }
        if !(config.n_total >= 1.0 && config.n_total.is_finite()) {
            return Err(bad(format!("n_total must be at least 1, got {}", config.n_total)));
        }
        for (name, v) in [
            ("temperature_K", config.temperature_k),
            ("resolution", config.resolution),
            ("epsilon_min_J", config.epsilon_min_j),
            ("rho_m3", config.rho_m3),
        ] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if let Some(z) = config.fugacity {
            if !(z > 0.0 && z <= 1.0) {
                return Err(bad(format!("fugacity must lie in (0, 1], got {z}")));
            }
        }
        let subspaces = config
            .trap
            .iter()
            .enumerate()
            .map(|(i, s)| subspace(s, i, mass, &c))
            .collect::<Result<Vec<_>, _>>()?;
        let quadrature = quadrature(config.quadrature.as_ref())?;
        let gas = build_gas(&subspaces, mass, config.species.xi1)?;
        let n_total = config.n_total;
        Ok(Self {
            config,
            gas,
            subspaces,
            n_total,
            quadrature,
        })
    }

    /// Copy with the first subspace exponent replaced, keeping its scales.
    pub fn with_first_exponent(&self, s: f64) -> Result<Self, ConfigError> {
        let mut out = self.clone();
        let first = out.subspaces.first_mut().ok_or_else(|| bad("trap is empty"))?;
        first.exponent = Exponent::Finite(positive("scan s1", s)?);
        out.gas = build_gas(&out.subspaces, self.gas.mass(), self.gas.species.xi1())?;
        Ok(out)
    }

    pub fn with_xi1(&self, xi1: f64) -> Self {
        let mut out = self.clone();
        out.gas = self.gas.with_xi1(xi1);
        out.config.species.xi1 = xi1;
        out
    }

    pub fn with_n_total(&self, n: f64) -> Self {
        let mut out = self.clone();
        out.n_total = n;
        out.config.n_total = n;
        out
    }

    pub fn with_temperature(&self, t: f64) -> Self {
        let mut out = self.clone();
        out.config.temperature_k = Some(t);
        out
    }

    pub fn require_temperature(&self) -> Result<f64, ConfigError> {
        self.config
            .temperature_k
            .ok_or_else(|| bad("this command needs temperature_K"))
    }
}

fn build_gas(subspaces: &[ResolvedSubspace], mass: f64, xi1: f64) -> Result<Gas, ConfigError> {
    let subs = subspaces
        .iter()
        .map(|s| Subspace::new(s.n, s.exponent, s.energy_j, s.length_m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Gas::new(Trap::new(subs)?, Particle::new(mass, xi1)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Resolved, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        Resolved::new(cfg)
    }

    const HARMONIC: &str = r#"{
        "species": {"mass_kg": 1.5e-25, "xi1": 1.0},
        "trap": [
            {"n": 1, "harmonic": {"frequency": 10, "unit": "rad/s"}},
            {"n": 1, "harmonic": {"frequency": 10, "unit": "rad/s"}},
            {"n": 1, "harmonic": {"frequency": 20, "unit": "rad/s"}}
        ],
        "n_total": 1e6
    }"#;

    #[test]
    fn harmonic_shorthand() {
        let r = parse(HARMONIC).unwrap();
        assert_eq!(r.gas.gamma(), 3.0);
        assert_eq!(r.subspaces[2].omega_rad_s, Some(20.0));
    }

    #[test]
    fn hertz_converts() {
        let r = parse(&HARMONIC.replace("rad/s", "Hz")).unwrap();
        assert!((r.subspaces[0].omega_rad_s.unwrap() - 20.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(parse(&HARMONIC.replace("\"unit\": \"rad/s\"", "\"unit\": \"kHz\"")).is_err());
        assert!(parse(&HARMONIC.replace("\"n_total\"", "\"bogus\": 1, \"n_total\"")).is_err());
        assert!(parse(&HARMONIC.replace("{\"n\": 1, \"harmonic\"", "{\"n\": 2, \"harmonic\"")).is_err());
        let both = HARMONIC.replacen(
            "{\"n\": 1, \"harmonic\"",
            "{\"n\": 1, \"box\": {\"volume\": 1e-5}, \"harmonic\"",
            1,
        );
        assert!(parse(&both).is_err());
        assert!(parse(&HARMONIC.replace("1.5e-25", "-1.5e-25")).is_err());
    }

    #[test]
    fn box_and_raw() {
        let text = r#"{
            "species": {"mass_kg": 1.5e-25, "xi1": 0.0},
            "trap": [{"n": 3, "s": "inf", "box": {"volume": 1e-12}}],
            "n_total": 1e5
        }"#;
        let r = parse(text).unwrap();
        assert_eq!(r.gas.gamma(), 1.5);
        let raw = r#"{
            "species": {"mass_kg": 1.5e-25, "xi1": 0.0},
            "trap": [{"n": 2, "s": 4, "raw": {"A_J": 1e-30, "a_m": 1e-6}}, {"n": 1, "s": "inf", "raw": {"A_J": 1, "a_m": 1e-5}}],
            "n_total": 1e5
        }"#;
        assert_eq!(parse(raw).unwrap().gas.gamma(), 2.0);
        assert!(parse(&raw.replace("\"s\": 4, ", "")).is_err());
    }
}
