//! Bound on `|xi1|` from a resolution on the relative `T_c` shift.

use crate::condensation::rel_shift_first_order;
use crate::error::{Error, Result};
use crate::model::BoseGas;
use crate::num::Real;

/// Default shift resolution: 1% of an order-unity relative temperature.
pub const DEFAULT_RESOLUTION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult<F> {
    pub xi1_bound: F,
    /// `d (Delta T_c / T_0) / d xi1` at first order.
    pub shift_per_xi1: F,
    pub resolution: F,
    pub gamma: F,
    pub mass: F,
    pub n_total: F,
}

/// `|xi1| <~ resolution / |shift_per_xi1|`. The `xi1` carried by `gas` is
/// ignored.
pub fn xi1_bound<F: Real>(gas: &BoseGas<F>, n_total: F, resolution: F) -> Result<BoundResult<F>> {
    if !(resolution > F::zero() && resolution.is_finite()) {
        return Err(Error::domain(
            "xi1 bound",
            format!("resolution must be positive, got {resolution}"),
        ));
    }
    let unit = gas.with_xi1(F::one());
    let shift_per_xi1 = rel_shift_first_order(&unit, n_total)?;
    if shift_per_xi1 == F::zero() || !shift_per_xi1.is_finite() {
        return Err(Error::domain(
            "xi1 bound",
            format!("degenerate sensitivity {shift_per_xi1}"),
        ));
    }
    Ok(BoundResult {
        xi1_bound: resolution / shift_per_xi1.abs(),
        shift_per_xi1,
        resolution,
        gamma: gas.gamma(),
        mass: gas.mass(),
        n_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PhysicalConstants, PowerLawTrap, Species};

    fn gas(xi1: f64) -> BoseGas<f64> {
        let c = PhysicalConstants::default();
        let trap = PowerLawTrap::anisotropic_harmonic([10.0, 10.0, 20.0], 15e-26, &c).unwrap();
        BoseGas::new(trap, Species::new(15e-26, xi1).unwrap())
    }

    #[test]
    fn bound_ladder_order_of_magnitude() {
        for (n, expected) in [(1e6, 4.0), (1e9, 5.0), (1e18, 6.0)] {
            let b = xi1_bound(&gas(0.0), n, DEFAULT_RESOLUTION).unwrap();
            assert!(
                (b.xi1_bound.log10() - expected).abs() <= 1.0,
                "N = {n}: {}",
                b.xi1_bound
            );
        }
    }

    #[test]
    fn linear_in_resolution_and_sign_blind() {
        let a = xi1_bound(&gas(3.0), 1e6, 1e-2).unwrap();
        let b = xi1_bound(&gas(-7.0), 1e6, 2e-2).unwrap();
        assert!((b.xi1_bound / a.xi1_bound - 2.0).abs() < 1e-14);
        assert_eq!(a.shift_per_xi1, b.shift_per_xi1);
    }

    #[test]
    fn rejects_bad_resolution() {
        assert!(xi1_bound(&gas(1.0), 1e6, 0.0).is_err());
        assert!(xi1_bound(&gas(1.0), 1e6, -1.0).is_err());
        assert!(xi1_bound(&gas(1.0), 0.0, 1e-2).is_err());
    }
}
