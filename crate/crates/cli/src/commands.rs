//! One function per subcommand. Each returns a renderable [`Output`].

use deformed_bec::condensation::{self, rel_shift_first_order, solve_fugacity, solve_tc, TcMethod};
use deformed_bec::fluctuations::{default_epsilon_min, variance_above_tc, variance_below_tc, Anomaly, Regime};
use deformed_bec::oracle::oracle_tc;
use deformed_bec::{bounds, Error, Exponent, Tc};
use rayon::prelude::*;

use crate::config::{ConfigError, Resolved, ScanAxis, ScanConfig};
use crate::record::{inputs, Output, Record, Value};

#[derive(Debug)]
pub enum CommandError {
    Config(ConfigError),
    Numeric(Error),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Config(e) => write!(f, "configuration error: {e}"),
            CommandError::Numeric(e) => write!(f, "numerical error: {e}"),
        }
    }
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e)
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Numeric(e)
    }
}

type Outcome<T> = Result<T, CommandError>;

fn method_name(m: TcMethod) -> &'static str {
    match m {
        TcMethod::Implicit => "implicit",
        TcMethod::BoxLimit => "box-limit",
    }
}

fn tc_fields(r: &Resolved, tc: &Tc) -> Outcome<Record> {
    let mut rec = Record::default();
    rec.push("t0_K", tc.t0);
    rec.push("tc_K", tc.tc);
    rec.push("rel_shift", tc.rel_shift);
    rec.push("rel_shift_first_order", rel_shift_first_order(&r.gas, r.n_total)?);
    rec.push("smallness_ratio", tc.smallness_ratio);
    rec.push("first_order_valid", tc.smallness_ratio <= condensation::SMALLNESS_LIMIT);
    rec.push("method", method_name(tc.method));
    Ok(rec)
}

pub fn tc(r: &Resolved) -> Outcome<Output> {
    let tc = solve_tc(&r.gas, r.n_total)?;
    Ok(Output::Single {
        command: "tc",
        inputs: inputs(r),
        result: tc_fields(r, &tc)?,
    })
}

fn bound_fields(r: &Resolved) -> Outcome<Record> {
    let resolution = r.config.resolution.unwrap_or(bounds::DEFAULT_RESOLUTION);
    let b = bounds::xi1_bound(&r.gas, r.n_total, resolution)?;
    let mut rec = Record::default();
    rec.push("resolution", b.resolution);
    rec.push("shift_per_xi1", b.shift_per_xi1);
    rec.push("xi1_bound", b.xi1_bound);
    Ok(rec)
}

pub fn bound(r: &Resolved) -> Outcome<Output> {
    Ok(Output::Single {
        command: "bound",
        inputs: inputs(r),
        result: bound_fields(r)?,
    })
}

fn fugacity_at(r: &Resolved, t: f64) -> Outcome<f64> {
    match r.config.fugacity {
        Some(z) => Ok(z),
        None => Ok(solve_fugacity(&r.gas, t, r.n_total)?),
    }
}

pub fn density(r: &Resolved) -> Outcome<Output> {
    let t = r.require_temperature()?;
    let z = fugacity_at(r, t)?;
    let grid = r.config.density.clone().unwrap_or(crate::config::DensityConfig {
        points: None,
        t_max: None,
    });
    let points = grid.points.unwrap_or(41);
    let t_max = grid.t_max.unwrap_or(3.0);
    if points < 2 || !(t_max > 0.0 && t_max.is_finite()) {
        return Err(ConfigError("density needs points >= 2 and t_max > 0".into()).into());
    }
    let kt = r.gas.constants.k_boltzmann * t;
    let scales: Vec<f64> = r
        .gas
        .trap
        .subspaces()
        .iter()
        .map(|s| match s.exponent() {
            Exponent::Finite(_) => s.radius_at_energy(kt),
            Exponent::Infinite => s.length_scale(),
        })
        .collect();
    let point = condensation::ThermoPoint::new(t, z)?;
    let mut rows = Vec::with_capacity(points);
    for k in 0..points {
        let frac = t_max * k as f64 / (points - 1) as f64;
        let radii: Vec<f64> = scales.iter().map(|&s| frac * s).collect();
        let mut rec = Record::default();
        rec.push("t_thermal", frac);
        for (i, x) in radii.iter().enumerate() {
            rec.push(format!("r{}_m", i + 1), *x);
        }
        rec.push("potential_J", r.gas.trap.potential(&radii)?);
        rec.push("density_m3", condensation::spatial_density(&r.gas, &point, &radii)?);
        rows.push(rec);
    }
    let mut head = inputs(r);
    head.push("temperature_K", t);
    head.push("fugacity", z);
    Ok(Output::Table {
        command: "density",
        inputs: head,
        rows,
    })
}

fn fluct_fields(r: &Resolved) -> Outcome<Record> {
    let t = r.require_temperature()?;
    let tc = solve_tc(&r.gas, r.n_total)?;
    let report = if t >= tc.tc {
        let z = fugacity_at(r, t)?;
        variance_above_tc(&r.gas, t, z, r.n_total, tc.t0)?
    } else {
        match (
            variance_below_tc(&r.gas, t, r.n_total, &tc, r.config.epsilon_min_j),
            r.config.epsilon_min_j,
        ) {
            (Err(Error::RegularizationRequired(_)), None) => {
                variance_below_tc(&r.gas, t, r.n_total, &tc, Some(default_epsilon_min(&r.gas)))?
            }
            (other, _) => other?,
        }
    };
    let (rho, rho_source) = match r.config.rho_m3 {
        Some(rho) => (rho, "config"),
        None => {
            let kt = r.gas.constants.k_boltzmann * t;
            (r.n_total / r.gas.trap.volume_below(kt), "thermal volume")
        }
    };
    let report = report.with_compressibility(rho, r.n_total, r.gas.constants.k_boltzmann)?;
    let mut rec = Record::default();
    rec.push("temperature_K", t);
    rec.push("t0_K", tc.t0);
    rec.push("tc_K", tc.tc);
    rec.push(
        "regime",
        match report.regime {
            Regime::Above => "above",
            Regime::Below => "below",
        },
    );
    rec.push(
        "anomaly",
        match report.anomaly {
            Anomaly::Normal => "normal",
            Anomaly::Anomalous => "anomalous",
        },
    );
    rec.push("regularized", report.regularized);
    rec.push("epsilon_min_J", report.epsilon_min);
    rec.push("fugacity", report.fugacity);
    rec.push("variance", report.variance);
    rec.push("normalized_variance", report.normalized_variance);
    rec.push("rho_m3", rho);
    rec.push("rho_source", rho_source);
    rec.push("compressibility_Pa-1", report.compressibility);
    Ok(rec)
}

pub fn fluct(r: &Resolved) -> Outcome<Output> {
    Ok(Output::Single {
        command: "fluct",
        inputs: inputs(r),
        result: fluct_fields(r)?,
    })
}

fn grid(scan: &ScanConfig) -> Result<Vec<f64>, ConfigError> {
    if scan.points == 0 || !scan.start.is_finite() || !scan.stop.is_finite() {
        return Err(ConfigError("scan needs points >= 1 and finite start/stop".into()));
    }
    if scan.log && !(scan.start > 0.0 && scan.stop > 0.0) {
        return Err(ConfigError("log scan needs positive start and stop".into()));
    }
    if scan.points == 1 {
        return Ok(vec![scan.start]);
    }
    let steps = (scan.points - 1) as f64;
    Ok((0..scan.points)
        .map(|k| {
            let f = k as f64 / steps;
            if scan.log {
                (scan.start.ln() + f * (scan.stop / scan.start).ln()).exp()
            } else {
                scan.start + f * (scan.stop - scan.start)
            }
        })
        .collect())
}

fn scan_row(base: &Resolved, axis: ScanAxis, value: f64) -> Outcome<Record> {
    let r = match axis {
        ScanAxis::N => {
            if !(value >= 1.0) {
                return Err(ConfigError(format!("scan N value {value} is below 1")).into());
            }
            base.with_n_total(value)
        }
        ScanAxis::S1 => base.with_first_exponent(value)?,
        ScanAxis::Xi1 => base.with_xi1(value),
        ScanAxis::T => {
            if !(value > 0.0) {
                return Err(ConfigError(format!("scan T value {value} is not positive")).into());
            }
            base.with_temperature(value)
        }
    };
    let mut rec = inputs(&r);
    match axis {
        ScanAxis::T => rec.extend(fluct_fields(&r)?),
        _ => {
            let tc = solve_tc(&r.gas, r.n_total)?;
            rec.extend(tc_fields(&r, &tc)?);
            rec.extend(bound_fields(&r)?);
        }
    }
    Ok(rec)
}

pub fn scan(r: &Resolved) -> Outcome<Output> {
    let scan = r
        .config
        .scan
        .clone()
        .ok_or_else(|| ConfigError("scan command needs a scan section".into()))?;
    if scan.axis == ScanAxis::S1 && r.subspaces[0].exponent.is_infinite() {
        return Err(ConfigError("s1 scan needs a finite first subspace (not a box)".into()).into());
    }
    let values = grid(&scan)?;
    // Collect keeps input order whatever the completion order.
    let rows = values
        .par_iter()
        .map(|&v| scan_row(r, scan.axis, v))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Outcome<Vec<_>>>()?;
    let mut head = Record::default();
    head.push(
        "scan_axis",
        match scan.axis {
            ScanAxis::N => "N",
            ScanAxis::S1 => "s1",
            ScanAxis::Xi1 => "xi1",
            ScanAxis::T => "T",
        },
    );
    head.push("scan_log", scan.log);
    Ok(Output::Table {
        command: "scan",
        inputs: head,
        rows,
    })
}

pub fn oracle_check(r: &Resolved) -> Outcome<Output> {
    let spec = r.quadrature;
    let flat = r.gas.with_xi1(0.0);
    let t0 = condensation::t0(&flat, r.n_total)?;
    let oracle_t0 = oracle_tc(&flat, r.n_total, t0, &spec)?;
    let tc = solve_tc(&r.gas, r.n_total)?;
    let oracle_deformed = oracle_tc(&r.gas, r.n_total, tc.tc, &spec)?;
    let first = rel_shift_first_order(&r.gas, r.n_total)?;
    let oracle_shift = oracle_deformed / oracle_t0 - 1.0;
    let xi = r.gas.species.xi1();
    let mut rec = Record::default();
    rec.push("quadrature_rel_tol", spec.rel_tol());
    rec.push("momentum_cutoff_factor", spec.momentum_cutoff_factor());
    rec.push("radial_cutoff_factor", spec.radial_cutoff_factor());
    rec.push("t0_K", t0);
    rec.push("oracle_t0_K", oracle_t0);
    rec.push("t0_rel_gap", (oracle_t0 / t0 - 1.0).abs());
    rec.push("tc_K", tc.tc);
    rec.push("oracle_tc_K", oracle_deformed);
    rec.push("rel_shift_first_order", first);
    rec.push("rel_shift_implicit", tc.rel_shift);
    rec.push("rel_shift_oracle", oracle_shift);
    rec.push("shift_discrepancy", oracle_shift - first);
    let consistent = if xi == 0.0 {
        oracle_shift.abs() < 1e3 * spec.rel_tol()
    } else {
        oracle_shift.signum() == xi.signum()
    };
    rec.push("sign_consistent", Value::Flag(consistent));
    Ok(Output::Single {
        command: "oracle-check",
        inputs: inputs(r),
        result: rec,
    })
}
