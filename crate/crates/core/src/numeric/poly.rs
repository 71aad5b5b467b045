//! Dense real polynomials with coefficients in ascending order.

use nalgebra::DMatrix;

/// Polynomial `c[0] + c[1] x + ... + c[n] x^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// `a x + b`.
    pub fn linear(a: f64, b: f64) -> Self {
        Poly(vec![b, a])
    }

    pub fn one() -> Self {
        Poly::constant(1.0)
    }

    /// Degree after dropping exact trailing zeros (zero polynomial has degree 0).
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn trimmed(&self) -> Self {
        let mut c = self.0.clone();
        c.truncate(self.degree() + 1);
        Poly(c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Poly::constant(0.0);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|k| self.0.get(k).copied().unwrap_or(0.0) - other.0.get(k).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    /// Coefficients reversed with respect to degree `n`: `x^n p(1/x)`.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c = vec![0.0; n + 1];
        for (k, &v) in self.0.iter().enumerate().take(n + 1) {
            c[n - k] = v;
        }
        Poly(c)
    }

    /// Real roots from the companion-matrix spectrum, polished by Newton.
    ///
    /// An eigenvalue counts as real when its imaginary part is below
    /// `1e-7 * max(1, |re|)`.
    pub fn real_roots(&self) -> Vec<f64> {
        let p = self.trimmed();
        let n = p.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = p.0[n];
        let mut comp = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -p.0[i] / lead;
        }
        let eig = comp.complex_eigenvalues();
        let dp = p.derivative();
        let mut roots: Vec<f64> = eig
            .iter()
            .filter(|z| z.im.abs() <= 1e-7 * z.re.abs().max(1.0))
            .map(|z| p.polish(&dp, z.re))
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
        roots
    }

    fn polish(&self, dp: &Poly, mut x: f64) -> f64 {
        for _ in 0..20 {
            let d = dp.eval(x);
            if d == 0.0 {
                break;
            }
            let step = self.eval(x) / d;
            if !step.is_finite() {
                break;
            }
            x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1e-300) {
                break;
            }
        }
        x
    }
}
