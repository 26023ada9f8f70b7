//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol * |I|)`. The error heuristic is
//! the QUADPACK one (`resasc * min(1, (200 |K - G| / resasc)^1.5)`), floored by
//! a round-off term. Subdivision is deterministic, so repeated calls return
//! bit-identical results.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::num::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions<F> {
    pub abs_tol: F,
    pub rel_tol: F,
    pub max_intervals: usize,
}

impl<F: Real> QuadOptions<F> {
    pub fn relative(rel_tol: F) -> Self {
        Self {
            abs_tol: F::zero(),
            rel_tol,
            max_intervals: 4000,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: F) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

impl<F: Real> Default for QuadOptions<F> {
    fn default() -> Self {
        Self::relative(F::lit(1e-10))
    }
}

/// Outcome of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<F> {
    pub value: F,
    pub abs_error: F,
    pub evaluations: usize,
}

struct Segment<F> {
    lo: F,
    hi: F,
    value: F,
    error: F,
}

impl<F: Real> PartialEq for Segment<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<F: Real> Eq for Segment<F> {}

impl<F: Real> PartialOrd for Segment<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Real> Ord for Segment<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken by position so the subdivision order is total.
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.lo.partial_cmp(&self.lo).unwrap_or(Ordering::Equal))
    }
}

fn gk15<F, E>(f: &mut E, lo: F, hi: F) -> Result<(F, F)>
where
    F: Real,
    E: FnMut(F) -> Result<F>,
{
    let half = F::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let abs_half = half_len.abs();

    let fc = f(center)?;
    let mut res_k = fc * F::lit(WGK[7]);
    let mut res_g = fc * F::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [F::zero(); 7];
    let mut fv2 = [F::zero(); 7];
    for j in 0..7 {
        let dx = half_len * F::lit(XGK[j]);
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let w = F::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + F::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = F::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + F::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half_len;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half_len).abs();
    if res_asc != F::zero() && err != F::zero() {
        let scale = (F::lit(200.0) * err / res_asc).powf(F::lit(1.5));
        err = res_asc * scale.min(F::one());
    }
    let round_off = F::lit(50.0) * F::epsilon() * res_abs;
    if round_off > err {
        err = round_off;
    }
    if !value.is_finite() {
        return Err(Error::domain(
            "quadrature",
            format!("non-finite integrand on [{}, {}]", lo.as_f64(), hi.as_f64()),
        ));
    }
    Ok((value, err))
}

/// Integrates a fallible integrand over `[lo, hi]` split at `breaks`.
///
/// Break points outside the open interval are ignored.
pub fn try_integrate<F, E>(mut f: E, lo: F, hi: F, breaks: &[F], opts: &QuadOptions<F>) -> Result<Quadrature<F>>
where
    F: Real,
    E: FnMut(F) -> Result<F>,
{
    if lo == hi {
        return Ok(Quadrature {
            value: F::zero(),
            abs_error: F::zero(),
            evaluations: 0,
        });
    }
    if !(lo < hi) {
        return Err(Error::domain("quadrature", "lower bound must not exceed upper bound"));
    }
    let mut edges = vec![lo];
    let mut inner: Vec<F> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    inner.dedup();
    edges.extend(inner);
    edges.push(hi);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let (value, error) = gk15(&mut f, w[0], w[1])?;
        evaluations += 15;
        heap.push(Segment {
            lo: w[0],
            hi: w[1],
            value,
            error,
        });
    }

    loop {
        // Re-summing keeps the totals free of accumulated cancellation.
        let (total, total_err) = heap
            .iter()
            .fold((F::zero(), F::zero()), |(v, e), s| (v + s.value, e + s.error));
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            return Ok(Quadrature {
                value: total,
                abs_error: total_err,
                evaluations,
            });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Accuracy {
                what: "adaptive quadrature",
                estimate: total.as_f64(),
                error: total_err.as_f64(),
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = F::lit(0.5) * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Interval at machine resolution; cannot refine further.
            return Err(Error::Accuracy {
                what: "adaptive quadrature",
                estimate: total.as_f64(),
                error: total_err.as_f64(),
            });
        }
        let (v1, e1) = gk15(&mut f, worst.lo, mid)?;
        let (v2, e2) = gk15(&mut f, mid, worst.hi)?;
        evaluations += 30;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
    }
}

/// Integrates an infallible integrand over `[lo, hi]`.
pub fn integrate<F, E>(mut f: E, lo: F, hi: F, opts: &QuadOptions<F>) -> Result<Quadrature<F>>
where
    F: Real,
    E: FnMut(F) -> F,
{
    try_integrate(|x| Ok(f(x)), lo, hi, &[], opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x: f64| x.powi(5) - 3.0 * x * x, 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((q.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        assert_eq!(q.evaluations, 15);
    }

    #[test]
    fn endpoint_singularity() {
        // int_0^1 x^{-1/2} = 2
        let q = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &QuadOptions::relative(1e-10)).unwrap();
        assert!((q.value - 2.0).abs() < 1e-9, "{}", q.value);
    }

    #[test]
    fn gaussian_with_breakpoint() {
        let opts = QuadOptions::relative(1e-12);
        let q = try_integrate(|x: f64| Ok((-x * x).exp()), -10.0, 10.0, &[0.0], &opts).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sharp_peak_f32() {
        let q = integrate(|x: f32| 1.0 / (1e-4 + x * x), -1.0, 1.0, &QuadOptions::relative(1e-5)).unwrap();
        let exact = 2.0 * (1.0f32 / 1e-2).atan() / 1e-2;
        assert!((q.value - exact).abs() / exact < 1e-4);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let opts = QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-15,
            max_intervals: 3,
        };
        match integrate(|x: f64| (1.0 / x).sin() * x.powf(-0.9), 1e-6, 1.0, &opts) {
            Err(Error::Accuracy { estimate, .. }) => assert!(estimate.is_finite()),
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn integrand_error_propagates() {
        let r = try_integrate(
            |_x: f64| Err(Error::Invalid("boom".into())),
            0.0,
            1.0,
            &[],
            &QuadOptions::default(),
        );
        assert!(matches!(r, Err(Error::Invalid(_))));
    }
}
