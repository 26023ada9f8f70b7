//! Bracketed scalar root finding (Brent's bisection / secant / inverse
//! quadratic hybrid).

use crate::error::{Error, Result};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<F> {
    pub x: F,
    pub residual: F,
    pub iterations: usize,
}

/// Stopping rule: the bracket half-width must fall below
/// `2 eps |x| + abs_tol / 2 + rel_tol |x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions<F> {
    pub abs_tol: F,
    pub rel_tol: F,
    pub max_iter: usize,
}

impl<F: Real> Default for RootOptions<F> {
    fn default() -> Self {
        Self {
            abs_tol: F::zero(),
            rel_tol: F::lit(1e-12),
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[a, b]`; `f(a)` and `f(b)` must differ in sign.
pub fn brent<F, E>(mut f: E, a: F, b: F, opts: &RootOptions<F>) -> Result<Root<F>>
where
    F: Real,
    E: FnMut(F) -> Result<F>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == F::zero() {
        return Ok(Root {
            x: a,
            residual: fa,
            iterations: 0,
        });
    }
    if fb == F::zero() {
        return Ok(Root {
            x: b,
            residual: fb,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::convergence(
            "brent",
            format!(
                "no sign change on [{:e}, {:e}]: f = ({:e}, {:e})",
                a.as_f64(),
                b.as_f64(),
                fa.as_f64(),
                fb.as_f64()
            ),
        ));
    }
    let two = F::lit(2.0);
    let half = F::lit(0.5);
    let three = F::lit(3.0);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * F::epsilon() * b.abs() + half * opts.abs_tol + opts.rel_tol * b.abs();
        let m = half * (c - b);
        if m.abs() <= tol || fb == F::zero() {
            return Ok(Root {
                x: b,
                residual: fb,
                iterations: iter,
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = F::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - F::one()));
                q = (qa - F::one()) * (r - F::one()) * (s - F::one());
            }
            if p > F::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol { b + d } else { b + tol * m.signum() };
        fb = f(b)?;
    }
    Err(Error::convergence(
        "brent",
        format!(
            "no convergence after {} iterations, last x = {:e}",
            opts.max_iter,
            b.as_f64()
        ),
    ))
}

/// Widens `[center / w, center * w]` for each factor `w` in turn until `f`
/// changes sign across it. Requires `center > 0`.
pub fn geometric_bracket<F, E>(mut f: E, center: F, factors: &[F]) -> Result<(F, F)>
where
    F: Real,
    E: FnMut(F) -> Result<F>,
{
    let mut tried = Vec::new();
    for &w in factors {
        let (lo, hi) = (center / w, center * w);
        let (flo, fhi) = (f(lo)?, f(hi)?);
        if flo.signum() != fhi.signum() || flo == F::zero() || fhi == F::zero() {
            return Ok((lo, hi));
        }
        tried.push(format!(
            "[{:e}, {:e}] -> ({:e}, {:e})",
            lo.as_f64(),
            hi.as_f64(),
            flo.as_f64(),
            fhi.as_f64()
        ));
    }
    Err(Error::convergence(
        "bracket search",
        format!("no sign change: {}", tried.join("; ")),
    ))
}
