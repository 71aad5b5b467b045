//! Adaptive Simpson quadrature with a relative error target.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`.
///
/// The tolerance is taken relative to the magnitude of a coarse initial
/// estimate, so scaling `f` by a constant leaves the subdivision unchanged.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("non-finite integration bounds [{a}, {b}]")));
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    // Scale from a 17-point sweep so near-cancelling integrands still get a
    // meaningful absolute target.
    let mut scale = 0.0f64;
    for k in 0..=16 {
        let x = a + (b - a) * k as f64 / 16.0;
        scale = scale.max(f(x)?.abs());
    }
    let tol = rel_tol * (scale * (b - a).abs()).max(whole.abs()).max(f64::MIN_POSITIVE);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::Numerical(format!("non-finite integrand on [{a}, {b}]")));
    }
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Integrates over `[a, b]`, splitting at every knot strictly inside the
/// interval (piecewise-linear tables have kinks there).
pub fn adaptive_simpson_split<F>(f: F, a: f64, b: f64, knots: &[f64], rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = knots.iter().copied().filter(|&k| k > lo && k < hi).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    let mut left = lo;
    for c in cuts.into_iter().chain(std::iter::once(hi)) {
        total += adaptive_simpson(&f, left, c, rel_tol)?;
        left = c;
    }
    Ok(sign * total)
}
