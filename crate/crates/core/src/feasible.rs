//! Composition paths that realize a prescribed quotient along a curve.
//!
//! Amounts are tied to one pivot species by `n_i = (nu_i / nu_p) n_p + d_i`,
//! so every path moves along the reaction direction. The quotient then
//! becomes a rational function of `x = 1 / n_p`, and the path is obtained by
//! continuing a root of `q(x) = Q_target(t)` in `t`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::numeric::poly::Poly;
use crate::thermo::ReactionSystem;

/// Affine linkage of every amount to the pivot amount.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkageOffsets {
    pivot: usize,
    /// `nu_i / nu_pivot`; zero for a fixed solvent.
    slope: Vec<f64>,
    /// mol
    offset: Vec<f64>,
}

impl LinkageOffsets {
    /// Offsets that pass through the reference amounts `n_ref`.
    pub fn from_state(system: &ReactionSystem, n_ref: &[f64], pivot: Option<usize>) -> Result<Self> {
        if n_ref.len() != system.len() {
            return Err(Error::Config("reference amounts do not match the species list".into()));
        }
        if let Some(v) = n_ref.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::Config(format!("reference amount {v} is not positive")));
        }
        let pivot = match pivot {
            Some(p) => p,
            None => select_pivot(system)?,
        };
        let slope = slopes(system, pivot)?;
        let offset = n_ref.iter().zip(&slope).map(|(n, a)| n - a * n_ref[pivot]).collect::<Vec<_>>();
        let mut offsets = LinkageOffsets { pivot, slope, offset };
        offsets.offset[pivot] = 0.0;
        Ok(offsets)
    }

    /// Offsets given directly; the pivot's own offset must be zero.
    pub fn new(system: &ReactionSystem, pivot: usize, offset: Vec<f64>) -> Result<Self> {
        if offset.len() != system.len() {
            return Err(Error::Config("offsets do not match the species list".into()));
        }
        let slope = slopes(system, pivot)?;
        if offset[pivot] != 0.0 {
            return Err(Error::Config("the pivot offset must be zero".into()));
        }
        if let Some((i, _)) = slope.iter().enumerate().find(|(i, a)| **a == 0.0 && !(offset[*i] > 0.0)) {
            return Err(Error::Config(format!("fixed species {i} needs a positive amount")));
        }
        Ok(LinkageOffsets { pivot, slope, offset })
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offset
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slope
    }

    /// All amounts for a given pivot amount.
    pub fn amounts(&self, n_pivot: f64) -> Vec<f64> {
        self.slope.iter().zip(&self.offset).map(|(a, d)| a * n_pivot + d).collect()
    }

    fn perturbed(&self, k: usize) -> Self {
        let mut out = self.clone();
        for (i, d) in out.offset.iter_mut().enumerate() {
            if i != self.pivot && self.slope[i] != 0.0 {
                *d *= 1.0 + 1e-9 * (k * (i + 1)) as f64;
            }
        }
        out
    }
}

fn slopes(system: &ReactionSystem, pivot: usize) -> Result<Vec<f64>> {
    let nu = system.nu();
    if pivot >= nu.len() || nu[pivot] == 0.0 {
        return Err(Error::Config(format!("pivot {pivot} must be a species with nonzero nu")));
    }
    Ok(nu.iter().map(|v| if *v == 0.0 { 0.0 } else { v / nu[pivot] }).collect())
}

fn integer_exponents(system: &ReactionSystem) -> Result<Vec<i32>> {
    system
        .exponents()
        .iter()
        .map(|e| {
            let r = e.round();
            if (e - r).abs() > 1e-12 || r.abs() > 64.0 {
                Err(Error::Config(format!("exponent {e} must be a small integer for path construction")))
            } else {
                Ok(r as i32)
            }
        })
        .collect()
}

/// Chooses the pivot: a reacting species whose removal leaves a nonzero
/// stoichiometric sum, preferring one that sits in the denominator of the
/// (possibly inverted) quotient, highest index first.
pub fn select_pivot(system: &ReactionSystem) -> Result<usize> {
    let nu = system.nu();
    let e = integer_exponents(system)?;
    let sign = if e.iter().sum::<i32>() < 0 { -1 } else { 1 };
    let total: f64 = nu.iter().sum();
    let moving: Vec<usize> = (0..nu.len()).filter(|&i| nu[i] != 0.0).collect();
    let score = |i: usize| (total - nu[i] != 0.0, sign * e[i] < 0, i);
    moving
        .into_iter()
        .max_by_key(|&i| score(i))
        .ok_or_else(|| Error::Config("no species can serve as pivot".into()))
}

/// Polynomial form of the quotient in `x = 1 / n_pivot` and the starting
/// root.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalProfile {
    pub offsets: LinkageOffsets,
    /// Quotient exponents after the reciprocal transform.
    pub exponents: Vec<i32>,
    /// True when the quotient was inverted to make the exponent sum
    /// non-negative.
    pub reciprocal: bool,
    /// `q(x) = num(x) / den(x)`.
    pub num: Poly,
    pub den: Poly,
    /// Open interval of `x` keeping every amount positive.
    pub x_interval: (f64, f64),
    /// Starting root.
    pub x0: f64,
    pub target0: f64,
    /// Positive real roots of `num` and `den`, for diagnostics.
    pub num_roots: Vec<f64>,
    pub den_roots: Vec<f64>,
    /// Every admissible root of `q(x) = target0`, ascending.
    pub admissible_roots: Vec<f64>,
}

impl RationalProfile {
    /// Transformed target for a quotient value.
    fn target(&self, q: f64) -> f64 {
        if self.reciprocal { 1.0 / q } else { q }
    }

    /// `ln q(x)` and its derivative.
    fn log_q(&self, x: f64) -> (f64, f64) {
        let (n, d) = (self.num.eval(x), self.den.eval(x));
        let (dn, dd) = (self.num.derivative().eval(x), self.den.derivative().eval(x));
        ((n / d).ln(), dn / n - dd / d)
    }

    pub fn amounts_at(&self, x: f64) -> Vec<f64> {
        self.offsets.amounts(1.0 / x)
    }

    /// Human-readable table of the polynomial roots.
    pub fn root_table(&self) -> String {
        root_table(&self.num_roots, &self.den_roots, self.x_interval, &self.admissible_roots)
    }
}

fn root_table(num: &[f64], den: &[f64], interval: (f64, f64), adm: &[f64]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "admissible x = 1/n_pivot interval: ({}, {})", interval.0, interval.1);
    let _ = writeln!(s, "numerator roots:   {num:?}");
    let _ = writeln!(s, "denominator roots: {den:?}");
    let _ = write!(s, "admissible roots:  {adm:?}");
    s
}

/// Assembles the rational profile for `q(x) = target0` and selects the
/// largest admissible root (the smallest pivot amount).
pub fn build_profile(system: &ReactionSystem, offsets: &LinkageOffsets, target0: f64) -> Result<RationalProfile> {
    if !(target0 > 0.0 && target0.is_finite()) {
        return Err(Error::Config(format!("target quotient must be positive, got {target0}")));
    }
    let mut last = None;
    for attempt in 0..4 {
        let off = if attempt == 0 { offsets.clone() } else { offsets.perturbed(attempt) };
        match build_once(system, &off, target0)? {
            Ok(profile) => return Ok(profile),
            Err(collision) => {
                log::debug!("root collision at x={collision}; perturbing offsets (attempt {attempt})");
                last = Some(collision);
            }
        }
    }
    Err(Error::ConstructionFailed(format!(
        "numerator and denominator share the root x={} after 3 perturbations",
        last.unwrap_or(f64::NAN)
    )))
}

/// Inner result is `Err(root)` on a numerator/denominator collision.
fn build_once(
    system: &ReactionSystem,
    offsets: &LinkageOffsets,
    target0: f64,
) -> Result<std::result::Result<RationalProfile, f64>> {
    let mut e = integer_exponents(system)?;
    let w: i32 = e.iter().sum();
    let reciprocal = w < 0;
    if reciprocal {
        e.iter_mut().for_each(|v| *v = -*v);
    }
    let w = w.unsigned_abs();
    let b: f64 = offsets.slope.iter().sum();
    let s: f64 = offsets.offset.iter().sum();
    let mut num = Poly::one();
    let mut den = Poly::linear(b, s).pow(w);
    for (i, &ei) in e.iter().enumerate() {
        let f = Poly::linear(offsets.slope[i], offsets.offset[i]);
        if ei > 0 {
            num = num.mul(&f.pow(ei as u32));
        } else if ei < 0 {
            den = den.mul(&f.pow((-ei) as u32));
        }
    }
    let m = num.degree().max(den.degree());
    let num = num.reversed(m);
    let den = den.reversed(m);

    // a_i + d_i x > 0 for x > 0.
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for (a, d) in offsets.slope.iter().zip(&offsets.offset) {
        if *d > 0.0 {
            lo = lo.max(-a / d);
        } else if *d < 0.0 {
            hi = hi.min(-a / d);
        } else if !(*a > 0.0) {
            hi = lo;
        }
    }
    let positive = |r: Vec<f64>| r.into_iter().filter(|x| *x > 0.0).collect::<Vec<_>>();
    let num_roots = positive(num.real_roots());
    let den_roots = positive(den.real_roots());
    if let Some(&c) = num_roots
        .iter()
        .find(|x| den_roots.iter().any(|y| (*x - y).abs() <= 1e-9 * x.abs().max(1e-300)))
    {
        return Ok(Err(c));
    }
    if !(hi > lo) {
        return Err(Error::ConstructionFailed(format!(
            "no pivot amount keeps every species positive\n{}",
            root_table(&num_roots, &den_roots, (lo, hi), &[])
        )));
    }
    let tq = if reciprocal { 1.0 / target0 } else { target0 };
    let poly = num.sub(&den.scale(tq));
    let mut admissible: Vec<f64> = poly.real_roots().into_iter().filter(|x| *x > lo && *x < hi).collect();
    admissible.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let Some(&x0) = admissible.last() else {
        return Err(Error::ConstructionFailed(format!(
            "q(x) never attains {target0} on the admissible interval\n{}",
            root_table(&num_roots, &den_roots, (lo, hi), &[])
        )));
    };
    let mut profile = RationalProfile {
        offsets: offsets.clone(),
        exponents: e,
        reciprocal,
        num,
        den,
        x_interval: (lo, hi),
        x0,
        target0,
        num_roots,
        den_roots,
        admissible_roots: admissible,
    };
    profile.x0 = newton_log(&profile, x0, tq.ln()).unwrap_or(x0);
    Ok(Ok(profile))
}

/// Newton iteration on `ln q(x) - ln_target`, kept inside the admissible
/// interval.
fn newton_log(profile: &RationalProfile, mut x: f64, ln_target: f64) -> Option<f64> {
    let (lo, hi) = profile.x_interval;
    for _ in 0..80 {
        let (f, df) = profile.log_q(x);
        let r = f - ln_target;
        if !(r.is_finite() && df.is_finite()) || df == 0.0 {
            return None;
        }
        let mut xn = x - r / df;
        if xn <= lo {
            xn = 0.5 * (x + lo);
        } else if xn >= hi {
            xn = if hi.is_finite() { 0.5 * (x + hi) } else { 2.0 * x };
        }
        let dx = (xn - x).abs();
        x = xn;
        if dx <= 1e-13 * x.abs() {
            let (f, _) = profile.log_q(x);
            return ((f - ln_target).abs() <= 1e-10).then_some(x);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchStatus {
    Complete,
    /// The branch left the admissible region; samples end at `t_last`.
    Truncated { t_last: f64, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasiblePath {
    pub t: Vec<f64>,
    pub amounts: Vec<Vec<f64>>,
    /// Target quotient at each sample.
    pub target: Vec<f64>,
    pub status: BranchStatus,
}

/// Continues the starting root of `profile` along `t_grid`.
///
/// `q_target(t)` gives the quotient to realize; `q_target(t_grid[0])` should
/// equal the profile's starting target.
pub fn continue_branch<F>(profile: &RationalProfile, q_target: F, t_grid: &[f64]) -> Result<FeasiblePath>
where
    F: Fn(f64) -> Result<f64>,
{
    let (_, d0) = profile.log_q(profile.x0);
    if !(d0.abs() * profile.x0 > 1e-10) {
        return Err(Error::BranchSingular { derivative: d0 });
    }
    let mut out = FeasiblePath { t: Vec::new(), amounts: Vec::new(), target: Vec::new(), status: BranchStatus::Complete };
    let Some(&t_first) = t_grid.first() else {
        return Ok(out);
    };
    let mut x = profile.x0;
    let mut t_prev = t_first;
    let mut q_prev = profile.target0;
    for &t in t_grid {
        let q = q_target(t)?;
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::Domain(format!("target quotient {q} at t={t} is not positive")));
        }
        // An unchanged target keeps the previous root exactly.
        let next = if q == q_prev { Some(x) } else { advance(profile, &q_target, x, t_prev, t, 0)? };
        match next {
            Some(xn) => {
                let n = profile.amounts_at(xn);
                if n.iter().any(|v| !(*v > 0.0)) {
                    out.status = BranchStatus::Truncated { t_last: t_prev, reason: format!("an amount reached zero at t={t}") };
                    break;
                }
                x = xn;
                q_prev = q;
                out.t.push(t);
                out.amounts.push(n);
                out.target.push(q);
                t_prev = t;
            }
            None => {
                out.status = BranchStatus::Truncated {
                    t_last: t_prev,
                    reason: format!("the branch left the positive region before t={t}"),
                };
                break;
            }
        }
    }
    Ok(out)
}

/// Moves the root from `t0` to `t1`, halving the step when Newton fails.
fn advance<F>(profile: &RationalProfile, q_target: &F, x: f64, t0: f64, t1: f64, depth: u32) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let q = q_target(t1)?;
    if let Some(xn) = newton_log(profile, x, profile.target(q).ln()) {
        return Ok(Some(xn));
    }
    if depth >= 12 || t0 == t1 {
        return Ok(None);
    }
    let mid = 0.5 * (t0 + t1);
    match advance(profile, q_target, x, t0, mid, depth + 1)? {
        Some(xm) => advance(profile, q_target, xm, mid, t1, depth + 1),
        None => Ok(None),
    }
}
