//! Resonance lattices of the model ends, multiset unions for surfaces, the
//! counting function and its quadratic growth fit.

use crate::error::{Error, Result};
use crate::twist::TwistSpec;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;

/// Points closer than this (relative to `max(1, |s|)`) are merged when the
/// lattice cannot be keyed exactly.
pub const MERGE_TOL: f64 = 1e-9;
const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

impl Resonance {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Resonances with `|s| < radius`, sorted by real then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceSet {
    pub radius: f64,
    pub resonances: Vec<Resonance>,
    by_modulus: Vec<(f64, u64)>,
}

impl ResonanceSet {
    pub fn new(radius: f64, mut resonances: Vec<Resonance>) -> Self {
        // adding +0 turns -0 into +0, which total_cmp and the printed output would otherwise keep apart
        for r in &mut resonances {
            r.re += 0.0;
            r.im += 0.0;
        }
        resonances.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut mods: Vec<(f64, u32)> = resonances.iter().map(|r| (r.re.hypot(r.im), r.mult)).collect();
        mods.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut acc = 0u64;
        let by_modulus = mods
            .into_iter()
            .map(|(m, k)| {
                acc += k as u64;
                (m, acc)
            })
            .collect();
        ResonanceSet {
            radius,
            resonances,
            by_modulus,
        }
    }

    /// Total multiplicity.
    pub fn total(&self) -> u64 {
        self.by_modulus.last().map_or(0, |v| v.1)
    }

    /// `N(r)`: resonances with `|s| < r`, counted with multiplicity.
    pub fn count(&self, r: f64) -> Result<u64> {
        if r > self.radius {
            return Err(Error::RadiusExceeded {
                requested: r,
                enumerated: self.radius,
            });
        }
        let i = self.by_modulus.partition_point(|v| v.0 < r);
        Ok(if i == 0 { 0 } else { self.by_modulus[i - 1].1 })
    }
}

pub fn counting_function(set: &ResonanceSet, r: f64) -> Result<u64> {
    set.count(r)
}

/// How angles are represented before forming the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleBranch {
    /// `theta` in `[0, 1)`.
    Unit,
    /// `theta` in `[-1/2, 1/2)`.
    Centered,
}

fn rational(x: f64) -> Option<(i64, i64)> {
    // continued fraction convergents
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let (h2, k2) = (a as i64 * h1 + h0, a as i64 * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            return None;
        }
        if (h2 as f64 / k2 as f64 - x).abs() <= 1e-14 {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = v - a;
        if f == 0.0 {
            return None;
        }
        v = 1.0 / f;
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

struct Shape {
    start: i64,
    step: i64,
}

const CYLINDER: Shape = Shape { start: 0, step: 1 };
const FUNNEL: Shape = Shape { start: 1, step: 2 };

fn branch_theta(theta: f64, branch: AngleBranch) -> f64 {
    match branch {
        AngleBranch::Centered if theta >= 0.5 => theta - 1.0,
        _ => theta,
    }
}

fn lattice(ell: f64, twist: &TwistSpec, radius: f64, shape: Shape, branch: AngleBranch) -> Result<ResonanceSet> {
    twist.validate()?;
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::Spec(format!("length {ell} must be positive")));
    }
    if !(radius >= 0.0) {
        return Err(Error::domain("radius must be non-negative"));
    }
    let omega = 2.0 * PI / ell;
    let r2 = radius * radius;
    let rats: Option<Vec<(i64, i64)>> = if twist.is_unitary() {
        twist.angles.iter().map(|a| rational(a.theta)).collect()
    } else {
        None
    };
    let lcm = rats.as_ref().and_then(|rs| {
        rs.iter().try_fold(1i64, |l, &(_, q)| {
            let m = l / gcd(l, q) * q;
            (m <= MAX_DENOMINATOR).then_some(m)
        })
    });
    match (rats, lcm) {
        (Some(rs), Some(den)) => {
            // exact keys (n, numerator of the imaginary part over den)
            let maps: Vec<HashMap<(i64, i64), u32>> = twist
                .angles
                .par_iter()
                .zip(rs.par_iter())
                .map(|(a, &(p, q))| {
                    let mut map = HashMap::new();
                    let mut num = p * (den / q);
                    if branch_theta(a.theta, branch) < 0.0 {
                        num -= den;
                    }
                    for_each_point(omega, radius, &shape, 0.0, num as f64 / den as f64, |n, sign, m| {
                        let key = (n, sign * (num + m * den));
                        *map.entry(key).or_insert(0) += a.mult;
                    });
                    map
                })
                .collect();
            let mut total: HashMap<(i64, i64), u32> = HashMap::new();
            for m in maps {
                for (k, v) in m {
                    *total.entry(k).or_insert(0) += v;
                }
            }
            let res = total
                .into_iter()
                .filter_map(|((n, num), mult)| {
                    let re = -((shape.start + shape.step * n) as f64);
                    let im = omega * num as f64 / den as f64;
                    (re * re + im * im < r2).then_some(Resonance { re, im, mult })
                })
                .collect();
            Ok(ResonanceSet::new(radius, res))
        }
        _ => {
            let mut pts: Vec<Resonance> = Vec::new();
            for a in &twist.angles {
                let th = branch_theta(a.theta, branch);
                for sign in [1i64, -1] {
                    let shift = sign as f64 * a.log_abs / ell;
                    for_each_point(omega, radius, &shape, shift, th, |n, sg, m| {
                        if sg != sign {
                            return;
                        }
                        let re = -((shape.start + shape.step * n) as f64) + shift;
                        let im = sign as f64 * omega * (th + m as f64);
                        if re * re + im * im < r2 {
                            pts.push(Resonance { re, im, mult: a.mult });
                        }
                    });
                }
            }
            Ok(ResonanceSet::new(radius, cluster(pts)))
        }
    }
}

/// Calls `f(n, sign, m)` for every lattice point
/// `-(start + step n) + shift + sign i omega (theta + m)` that may lie in the disc.
fn for_each_point<F: FnMut(i64, i64, i64)>(omega: f64, radius: f64, shape: &Shape, shift: f64, theta: f64, mut f: F) {
    let mut n = 0i64;
    loop {
        let re = -((shape.start + shape.step * n) as f64) + shift;
        if re <= -radius {
            break;
        }
        if re < radius {
            let h = (radius * radius - re * re).sqrt() / omega;
            let lo = (-h - theta).floor() as i64;
            let hi = (h - theta).ceil() as i64;
            for sign in [1i64, -1] {
                for m in lo..=hi {
                    f(n, sign, m);
                }
            }
        }
        n += 1;
    }
}

fn cluster(mut pts: Vec<Resonance>) -> Vec<Resonance> {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Resonance> = Vec::with_capacity(pts.len());
    let mut near_misses = 0usize;
    for p in pts {
        let tol = MERGE_TOL * p.re.hypot(p.im).max(1.0);
        // candidates share the real part up to tol and are sorted by imaginary part after it
        let hit = out
            .iter_mut()
            .rev()
            .take_while(|q| p.re - q.re <= tol)
            .find(|q| (q.re - p.re).abs() <= tol && (q.im - p.im).abs() <= tol);
        match hit {
            Some(q) => q.mult += p.mult,
            None => {
                if let Some(q) = out.last() {
                    let d = (q.re - p.re).hypot(q.im - p.im);
                    if d > tol && d < 1e3 * tol {
                        near_misses += 1;
                    }
                }
                out.push(p)
            }
        }
    }
    if near_misses > 0 {
        log::warn!("{near_misses} resonance pairs lie just outside the merge tolerance");
    }
    out
}

/// Resonances `-n + p (rho_j + 2 pi i (theta_j + m)) / ell`, `n >= 0`, `p = +-1`.
pub fn cylinder_resonances(ell: f64, twist: &TwistSpec, radius: f64) -> Result<ResonanceSet> {
    lattice(ell, twist, radius, CYLINDER, AngleBranch::Unit)
}

pub fn cylinder_resonances_with_branch(
    ell: f64,
    twist: &TwistSpec,
    radius: f64,
    branch: AngleBranch,
) -> Result<ResonanceSet> {
    lattice(ell, twist, radius, CYLINDER, branch)
}

/// Resonances `-(1 + 2n) + p (rho_j + 2 pi i (theta_j + m)) / ell`.
pub fn funnel_resonances(ell: f64, twist: &TwistSpec, radius: f64) -> Result<ResonanceSet> {
    lattice(ell, twist, radius, FUNNEL, AngleBranch::Unit)
}

pub fn funnel_resonances_with_branch(
    ell: f64,
    twist: &TwistSpec,
    radius: f64,
    branch: AngleBranch,
) -> Result<ResonanceSet> {
    lattice(ell, twist, radius, FUNNEL, branch)
}

/// The cusp has a single resonance at `1/2` carrying the multiplicity of the
/// eigenvalue 1, or none.
pub fn cusp_resonances(twist: &TwistSpec) -> Result<ResonanceSet> {
    twist.validate()?;
    if !twist.is_unitary() {
        return Err(Error::domain("cusp twists must be unitary"));
    }
    let d = twist.trivial_multiplicity();
    let res = if d > 0 {
        vec![Resonance {
            re: 0.5,
            im: 0.0,
            mult: d,
        }]
    } else {
        Vec::new()
    };
    Ok(ResonanceSet::new(f64::INFINITY, res))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunnelSpec {
    pub ell: f64,
    pub twist: TwistSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspSpec {
    pub twist: TwistSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderSpec {
    pub ell: f64,
    pub twist: TwistSpec,
}

/// A surface described by its ends, each with its own twist.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SurfaceSpec {
    #[serde(default)]
    pub funnels: Vec<FunnelSpec>,
    #[serde(default)]
    pub cusps: Vec<CuspSpec>,
    #[serde(default)]
    pub cylinders: Vec<CylinderSpec>,
}

impl SurfaceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SurfaceSpec = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.funnels.is_empty() && self.cusps.is_empty() && self.cylinders.is_empty() {
            return Err(Error::Spec("surface has no ends".into()));
        }
        for e in self
            .funnels
            .iter()
            .map(|f| (f.ell, &f.twist))
            .chain(self.cylinders.iter().map(|c| (c.ell, &c.twist)))
        {
            if !(e.0 > 0.0) || !e.0.is_finite() {
                return Err(Error::Spec(format!("length {} must be positive", e.0)));
            }
            e.1.validate()?;
        }
        for c in &self.cusps {
            c.twist.validate()?;
            if !c.twist.is_unitary() {
                return Err(Error::Spec("cusp twists must be unitary".into()));
            }
        }
        Ok(())
    }

    fn end_sets(&self, radius: f64) -> Result<Vec<ResonanceSet>> {
        let mut jobs: Vec<Box<dyn Fn() -> Result<ResonanceSet> + Send + Sync + '_>> = Vec::new();
        for f in &self.funnels {
            jobs.push(Box::new(move || funnel_resonances(f.ell, &f.twist, radius)));
        }
        for c in &self.cylinders {
            jobs.push(Box::new(move || cylinder_resonances(c.ell, &c.twist, radius)));
        }
        for c in &self.cusps {
            jobs.push(Box::new(move || cusp_resonances(&c.twist)));
        }
        jobs.par_iter().map(|j| j()).collect()
    }
}

/// Multiset union of the resonances of all ends with `|s| < radius`.
pub fn surface_resonances(spec: &SurfaceSpec, radius: f64) -> Result<ResonanceSet> {
    spec.validate()?;
    let sets = spec.end_sets(radius)?;
    let mut map: HashMap<(u64, u64), Resonance> = HashMap::new();
    for set in sets {
        for r in set.resonances.into_iter().filter(|r| r.re.hypot(r.im) < radius) {
            map.entry((r.re.to_bits(), r.im.to_bits()))
                .and_modify(|e| e.mult += r.mult)
                .or_insert(r);
        }
    }
    Ok(ResonanceSet::new(radius, map.into_values().collect()))
}

/// `(r_i, N(r_i))` at `r_i = r_max i / n`, `i = 1..=n`.
pub fn census(spec: &SurfaceSpec, r_max: f64, n_samples: usize) -> Result<Vec<(f64, u64)>> {
    let radii: Vec<f64> = (1..=n_samples).map(|i| r_max * i as f64 / n_samples as f64).collect();
    census_at(spec, &radii)
}

/// `(r_i, N(r_i))` on `n` evenly spaced radii from `r_min` to `r_max`.
pub fn census_between(spec: &SurfaceSpec, r_min: f64, r_max: f64, n: usize) -> Result<Vec<(f64, u64)>> {
    if n < 2 || !(r_min < r_max) {
        return Err(Error::domain("census needs at least two radii and r_min < r_max"));
    }
    let radii: Vec<f64> = (0..n)
        .map(|i| r_min + (r_max - r_min) * i as f64 / (n - 1) as f64)
        .collect();
    census_at(spec, &radii)
}

pub fn census_at(spec: &SurfaceSpec, radii: &[f64]) -> Result<Vec<(f64, u64)>> {
    spec.validate()?;
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let sets = spec.end_sets(r_max)?;
    radii
        .iter()
        .map(|&r| Ok((r, sets.iter().map(|s| s.count(r)).sum::<Result<u64>>()?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// Least-squares `c` in `N(r) ~ c r^2`.
    pub coefficient: f64,
    /// `(max - min) / c` over the sampled `N(r) / r^2`.
    pub rel_spread: f64,
}

pub fn growth_fit(table: &[(f64, u64)]) -> Result<GrowthFit> {
    let pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|p| p.0 > 0.0)
        .map(|&(r, n)| (r, n as f64))
        .collect();
    if pts.len() < 5 {
        return Err(Error::domain("growth fit needs at least five positive radii"));
    }
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    if hi < 4.0 * lo {
        return Err(Error::domain("growth fit needs radii spanning a factor of four"));
    }
    let num: f64 = pts.iter().map(|(r, n)| n * r * r).sum();
    let den: f64 = pts.iter().map(|(r, _)| r.powi(4)).sum();
    let c = num / den;
    let ratios = pts.iter().map(|(r, n)| n / (r * r));
    let (mn, mx) = ratios.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    Ok(GrowthFit {
        coefficient: c,
        rel_spread: if c > 0.0 { (mx - mn) / c } else { 0.0 },
    })
}
