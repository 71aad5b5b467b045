//! Fourth-order central finite differences.

/// Step used for a derivative at `x`: relative to the magnitude of `x`, with
/// an absolute floor so that Pa-scale and K-scale arguments both work.
pub fn step_for(x: f64) -> f64 {
    (1e-6 * x.abs()).max(1e-9)
}

/// Five-point central difference of `f` at `x`.
pub fn central4<F>(f: F, x: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let h = step_for(x);
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Same as [`central4`] for a fallible function.
pub fn try_central4<F, E>(f: F, x: f64) -> Result<f64, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let h = step_for(x);
    Ok((f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quartics() {
        let f = |x: f64| 3.0 * x.powi(4) - x.powi(3) + 2.0 * x - 7.0;
        let df = |x: f64| 12.0 * x.powi(3) - 3.0 * x.powi(2) + 2.0;
        for &x in &[0.3, 1.0, 4.5] {
            let got = central4(f, x);
            assert!((got - df(x)).abs() <= 1e-6 * df(x).abs().max(1.0), "{got} vs {}", df(x));
        }
    }

    #[test]
    fn pascal_scale_argument() {
        let f = |p: f64| (p / 1e5).ln();
        let got = central4(f, 2.5e5);
        assert!((got - 1.0 / 2.5e5).abs() <= 1e-10 / 2.5e5 * 1e4);
    }
}
