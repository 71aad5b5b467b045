//! Scalar root finding: Brent's method and log-spaced bracket scans.

use crate::error::{Error, Result};

/// Finds a root of `f` in `[a, b]` where `f(a)` and `f(b)` differ in sign.
///
/// Stops when the bracket width falls below `rel_tol * max(|x|, tiny)`.
pub fn brent<F>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRoot(format!("no sign change on [{a}, {b}]")));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..300 {
        if fb == 0.0 {
            return Ok(b);
        }
        let tol = rel_tol * b.abs().max(1e-300);
        if (b - a).abs() <= tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let out_of_range = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0 || (b - c).abs() < tol
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0 || (c - d).abs() < tol
        };
        if out_of_range || slow || !s.is_finite() {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::Numerical("Brent iteration did not converge".into()))
}

/// Returns every sign-change bracket of `f` on a log-spaced grid over
/// `[lo, hi]` (both positive). Points where `f` fails are skipped.
pub fn log_brackets<F>(f: F, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let n = points.max(2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..n {
        let x = (llo + (lhi - llo) * k as f64 / (n - 1) as f64).exp();
        let v = match f(x) {
            Ok(v) if v.is_finite() => v,
            _ => {
                prev = None;
                continue;
            }
        };
        if let Some((px, pv)) = prev {
            if v == 0.0 || pv.signum() != v.signum() {
                out.push((px, x));
            }
        }
        prev = Some((x, v));
    }
    out
}
