//! Bracketed root finding and golden-section minimization.

use crate::error::{Error, Result};

/// Final state of a bracketed root search. `lower` and `upper` enclose a
/// sign change of the function (or one of them is an exact zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub root: f64,
    pub lower: f64,
    pub upper: f64,
}

const MAX_ROOT_ITERATIONS: usize = 200;

/// Root of `g` on `[lower, upper]` by Brent's bisection/secant/inverse
/// quadratic hybrid. Stops once the bracket is narrower than `tol`.
pub fn find_root<G: Fn(f64) -> f64>(g: G, lower: f64, upper: f64, tol: f64) -> Result<f64> {
    try_find_root_bracket(|x| Ok(g(x)), lower, upper, tol).map(|r| r.root)
}

/// Fallible-objective variant of [`find_root`] that also returns the final
/// bracket.
pub fn try_find_root_bracket<G: FnMut(f64) -> Result<f64>>(
    mut g: G,
    lower: f64,
    upper: f64,
    tol: f64,
) -> Result<RootBracket> {
    if !(lower.is_finite() && upper.is_finite() && lower < upper) {
        return Err(Error::Precondition(format!(
            "root bracket must be finite with lower < upper, got [{lower}, {upper}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let mut a = lower;
    let mut b = upper;
    let mut fa = g(a)?;
    let mut fb = g(b)?;
    if fa == 0.0 {
        return Ok(RootBracket { root: a, lower: a, upper: a });
    }
    if fb == 0.0 {
        return Ok(RootBracket { root: b, lower: b, upper: b });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::InvalidBracket {
            lower,
            upper,
            g_lower: fa,
            g_upper: fb,
        });
    }

    // b is the best estimate, c the opposite-sign end of the bracket.
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ROOT_ITERATIONS {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(RootBracket { root: b, lower: lo, upper: hi });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = g(b)?;
    }
    Err(Error::NonConvergence {
        estimate: b,
        error_bound: (c - b).abs(),
    })
}

/// Golden-section search for the minimum of a unimodal `h` on
/// `[lower, upper]`. Returns `(argmin, min_value)`.
pub fn minimize_scalar<H: Fn(f64) -> f64>(h: H, lower: f64, upper: f64, tol: f64) -> Result<(f64, f64)> {
    try_minimize_scalar(|x| Ok(h(x)), lower, upper, tol)
}

pub fn try_minimize_scalar<H: FnMut(f64) -> Result<f64>>(
    mut h: H,
    lower: f64,
    upper: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(lower.is_finite() && upper.is_finite() && lower < upper) {
        return Err(Error::Precondition(format!(
            "minimization domain must be finite with lower < upper, got [{lower}, {upper}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lower, upper);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = h(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = h(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Evaluates `h` on `points` equally spaced nodes spanning `[lower, upper]`
/// and checks that the values fall to a single minimum and then rise.
///
/// `rel_slack` absorbs evaluation noise. Returns the grid on success and
/// [`Error::NotUnimodal`] carrying the grid otherwise.
pub fn check_unimodal<H: FnMut(f64) -> Result<f64>>(
    mut h: H,
    lower: f64,
    upper: f64,
    points: usize,
    rel_slack: f64,
) -> Result<Vec<(f64, f64)>> {
    if points < 3 {
        return Err(Error::Precondition("unimodality grid needs at least 3 points".into()));
    }
    let step = (upper - lower) / (points - 1) as f64;
    let grid = (0..points)
        .map(|i| {
            let x = if i + 1 == points { upper } else { lower + step * i as f64 };
            h(x).map(|v| (x, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let argmin = grid
        .iter()
        .enumerate()
        .min_by(|(_, p), (_, q)| p.1.total_cmp(&q.1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let slack = |v: f64| rel_slack * v.abs().max(f64::MIN_POSITIVE);
    let falling = grid[..=argmin].windows(2).all(|w| w[1].1 <= w[0].1 + slack(w[0].1));
    let rising = grid[argmin..].windows(2).all(|w| w[1].1 + slack(w[1].1) >= w[0].1);
    if falling && rising {
        Ok(grid)
    } else {
        Err(Error::NotUnimodal { grid })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn sqrt_two() {
        let r = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn half_pi() {
        let r = find_root(f64::cos, 1.0, 2.0, 1e-14).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn same_sign_bracket_is_rejected() {
        let err = find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::InvalidBracket { .. }));
    }

    #[test]
    fn final_bracket_contains_sign_change() {
        let g = |x: f64| x.powi(3) - 0.3 * x - 0.1;
        let r = try_find_root_bracket(|x| Ok(g(x)), -0.2, 2.0, 1e-9).unwrap();
        assert!(g(r.lower) * g(r.upper) <= 0.0);
        assert!(r.upper - r.lower <= 1e-9 + 4.0 * f64::EPSILON);
    }

    #[test]
    fn exact_zero_at_endpoint() {
        assert_eq!(find_root(|x| x, 0.0, 1.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn parabola_minimum() {
        let (x, v) = minimize_scalar(|x| (x - 1.0).powi(2) + 3.0, 0.0, 2.0, 1e-8).unwrap();
        assert!((x - 1.0).abs() < 1e-7);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn minimum_on_boundary() {
        let (x, _) = minimize_scalar(|x| x, 0.0, 1.0, 1e-8).unwrap();
        assert!(x < 1e-7);
    }

    #[test]
    fn unimodality_grid() {
        assert!(check_unimodal(|x| Ok((x - 0.3).powi(2)), 0.0, 1.0, 64, 0.0).is_ok());
        let err = check_unimodal(|x| Ok((6.0 * x).sin()), 0.0, 3.0, 64, 0.0).unwrap_err();
        assert!(matches!(err, Error::NotUnimodal { grid } if grid.len() == 64));
    }
}
