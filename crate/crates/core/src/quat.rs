//! Real quaternions and the three-unknown power-sum system over them with
//! right-hand sides `0, v, 1`, `v = v₁ + v₂ i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::{cardano, power_sums_to_cubic};
use crate::exactnum::UPoly;
use crate::matrix::Mat;

pub const RESIDUAL_TOL: f64 = 1e-9;
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuatError {
    #[error("v2 must be positive, got {0}")]
    NonPositiveV2(f64),
    #[error("right-hand sides do not commute")]
    NotCommuting,
    #[error("no positive root of the existence polynomial for v1 = {0}")]
    NoPositiveRoot(f64),
    #[error("sign variant fails the system, residual {0:e}")]
    VariantFailed(f64),
}

/// `x1 + x2 i + x3 j + x4 k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Quaternion { x1, x2, x3, x4 }
    }

    pub fn real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Quaternion::new(x[0], x[1], x[2], x[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    /// `re + im ρ` for a unit pure quaternion `ρ`.
    pub fn from_complex(z: Complex64, rho: [f64; 3]) -> Self {
        Quaternion::new(z.re, z.im * rho[0], z.im * rho[1], z.im * rho[2])
    }

    pub fn imag(self) -> [f64; 3] {
        [self.x2, self.x3, self.x4]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.x1, -self.x2, -self.x3, -self.x4)
    }

    pub fn norm_sqr(self) -> f64 {
        self.to_array().iter().map(|x| x * x).sum()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)
    }

    pub fn powu(self, k: u32) -> Self {
        (0..k).fold(Quaternion::ONE, |p, _| p * self)
    }

    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.x1, self.x2, self.x3, self.x4)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.x1, self.x2, self.x3, self.x4);
        let (a2, b2, c2, d2) = (o.x1, o.x2, o.x3, o.x4);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

pub fn quat_mul(q: Quaternion, r: Quaternion) -> Quaternion {
    q * r
}

pub fn quat_conj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn quat_norm(q: Quaternion) -> f64 {
    q.norm()
}

/// Max component of the residuals of `a+b+c = u`, `a²+b²+c² = v`, `a³+b³+c³ = w`.
pub fn system_residual(t: &[Quaternion; 3], rhs: &[Quaternion; 3]) -> f64 {
    (1..=3u32)
        .map(|k| {
            let s = t.iter().fold(Quaternion::ZERO, |acc, x| acc + x.powu(k));
            (s - rhs[k as usize - 1]).max_abs()
        })
        .fold(0.0, f64::max)
}

/// Solutions commuting with the data: `λ_k + μ_k ρ` where `λ_k + iμ_k` are
/// the complex solutions. When all data are real, `ρ` is any unit pure
/// quaternion and `rho` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingSolution {
    pub roots: [Complex64; 3],
    pub rho: Option<[f64; 3]>,
}

impl CommutingSolution {
    /// The triple for the fixed `ρ`, or for `free_rho` when `ρ` is free.
    pub fn triple(&self, free_rho: [f64; 3]) -> [Quaternion; 3] {
        let rho = self.rho.unwrap_or(free_rho);
        self.roots.map(|z| Quaternion::from_complex(z, rho))
    }
}

fn parallel_tol(x: &Quaternion) -> f64 {
    1e-12 * (1.0 + x.norm())
}

pub fn commuting_solutions(u: Quaternion, v: Quaternion, w: Quaternion) -> Result<CommutingSolution, QuatError> {
    let data = [u, v, w];
    for (i, x) in data.iter().enumerate() {
        for y in &data[i + 1..] {
            if x.commutator(*y).max_abs() > parallel_tol(x) * (1.0 + y.norm()) {
                return Err(QuatError::NotCommuting);
            }
        }
    }
    let rho = data.iter().find(|x| x.imag().iter().any(|c| c.abs() > parallel_tol(x))).map(|x| {
        let im = x.imag();
        let n = im.iter().map(|c| c * c).sum::<f64>().sqrt();
        im.map(|c| c / n)
    });
    let to_c = |x: &Quaternion| {
        let mu = match rho {
            Some(r) => x.x2 * r[0] + x.x3 * r[1] + x.x4 * r[2],
            None => 0.0,
        };
        Complex64::new(x.x1, mu)
    };
    let monic: UPoly<Complex64> = power_sums_to_cubic(&to_c(&u), &to_c(&v), &to_c(&w));
    let roots = cardano([monic.coeff(0), monic.coeff(1), monic.coeff(2), monic.coeff(3)]);
    Ok(CommutingSolution { roots, rho })
}

/// `Δ = 3v₁³ + 4v₂⁶ + 18v₁v₂² − 18`.
pub fn delta_value(v1: f64, v2: f64) -> f64 {
    let s = v2 * v2;
    3.0 * v1.powi(3) + 4.0 * s.powi(3) + 18.0 * v1 * s - 18.0
}

/// `v₂² − 3v₁²`.
pub fn separator_value(v1: f64, v2: f64) -> f64 {
    v2 * v2 - 3.0 * v1 * v1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub delta_value: f64,
    pub separator_value: f64,
    /// Strict inequalities; always `false` on a boundary.
    pub exists_noncommuting: bool,
    pub on_boundary: bool,
}

pub fn region_verdict(v1: f64, v2: f64) -> Result<RegionVerdict, QuatError> {
    if v2.is_nan() || v2 <= 0.0 {
        return Err(QuatError::NonPositiveV2(v2));
    }
    let d = delta_value(v1, v2);
    let s = separator_value(v1, v2);
    let on_boundary = d.abs() <= BOUNDARY_TOL || s.abs() <= BOUNDARY_TOL;
    Ok(RegionVerdict {
        delta_value: d,
        separator_value: s,
        exists_noncommuting: !on_boundary && d > 0.0 && s < 0.0,
        on_boundary,
    })
}

/// Positive `v₂` with `Δ(v₁, v₂) = 0`, by bisection on `s = v₂²` for
/// `4s³ + 18v₁s + 3v₁³ − 18`.
pub fn l_threshold(v1: f64) -> Result<f64, QuatError> {
    let g = |s: f64| 4.0 * s.powi(3) + 18.0 * v1 * s + 3.0 * v1.powi(3) - 18.0;
    // g(0) < 0 gives exactly one positive root; otherwise g is positive on
    // s > 0 or v2 = 0 is the root.
    if g(0.0) >= 0.0 {
        return Err(QuatError::NoPositiveRoot(v1));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).sqrt())
}

/// `v₂ = √3 |v₁|`, where the separator changes sign.
pub fn separator_bound(v1: f64) -> f64 {
    3f64.sqrt() * v1.abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuatTriple {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
}

impl QuatTriple {
    pub fn from_ab(a: Quaternion, b: Quaternion) -> Self {
        QuatTriple { a, b, c: -(a + b) }
    }

    pub fn as_array(&self) -> [Quaternion; 3] {
        [self.a, self.b, self.c]
    }

    pub fn residual(&self, v: Complex64) -> f64 {
        system_residual(&self.as_array(), &[Quaternion::ZERO, Quaternion::new(v.re, v.im, 0.0, 0.0), Quaternion::ONE])
    }

    /// Negates the `j` components (`flip_j`) and/or the `k` components.
    pub fn flipped(&self, flip_j: bool, flip_k: bool) -> Self {
        let f = |x: Quaternion| {
            Quaternion::new(x.x1, x.x2, if flip_j { -x.x3 } else { x.x3 }, if flip_k { -x.x4 } else { x.x4 })
        };
        QuatTriple { a: f(self.a), b: f(self.b), c: f(self.c) }
    }

    pub fn conj(&self) -> Self {
        QuatTriple { a: self.a.conj(), b: self.b.conj(), c: self.c.conj() }
    }

    /// Conjugation by `cos(θ/2) + i sin(θ/2)`: rotates every `(x3, x4)` by `θ`.
    /// It fixes `R + Ri`, so it maps solutions to solutions.
    pub fn rotated(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let f = |x: Quaternion| Quaternion::new(x.x1, x.x2, c * x.x3 - s * x.x4, s * x.x3 + c * x.x4);
        QuatTriple { a: f(self.a), b: f(self.b), c: f(self.c) }
    }

    /// Representative of the rotation circle with `a3 = a4 > 0`; its four sign
    /// variants are pairwise distinct.
    pub fn canonical(&self) -> Self {
        if self.a.x3.hypot(self.a.x4) <= 1e-12 {
            return *self;
        }
        self.rotated(std::f64::consts::FRAC_PI_4 - self.a.x4.atan2(self.a.x3))
    }

    fn key(&self) -> [f64; 8] {
        let (a, b) = (self.a.to_array(), self.b.to_array());
        [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
    }

    fn distance(&self, other: &Self) -> f64 {
        self.key().iter().zip(other.key()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

/// The four sign variants: identity, `j` flipped, `k` flipped, both.
pub fn solution_orbit(sol: &QuatTriple, v: Complex64) -> Result<[QuatTriple; 4], QuatError> {
    let out = [sol.flipped(false, false), sol.flipped(true, false), sol.flipped(false, true), sol.flipped(true, true)];
    for t in &out {
        let r = t.residual(v);
        if r > RESIDUAL_TOL {
            return Err(QuatError::VariantFailed(r));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub attempts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { attempts: 400, seed: 0, max_iterations: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoundSolution {
    pub triple: QuatTriple,
    pub residual: f64,
    pub orbit: [QuatTriple; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub verdict: RegionVerdict,
    pub solutions: Vec<FoundSolution>,
    /// Solutions were found although the region test says none exist.
    pub contradiction: bool,
}

fn equations(x: &[f64; 8], v: Complex64) -> [f64; 8] {
    let a = Quaternion::new(x[0], x[1], x[2], x[3]);
    let b = Quaternion::new(x[4], x[5], x[6], x[7]);
    let s = a + b;
    let sq = a * a + b * b + s * s - Quaternion::new(v.re, v.im, 0.0, 0.0);
    let cu = a.powu(3) + b.powu(3) - s.powu(3) - Quaternion::ONE;
    let (p, q) = (sq.to_array(), cu.to_array());
    [p[0], p[1], p[2], p[3], q[0], q[1], q[2], q[3]]
}

// directional derivatives of x^2 and x^3 are xh + hx and hx^2 + xhx + x^2h
fn jacobian(x: &[f64; 8]) -> Mat<f64> {
    let a = Quaternion::new(x[0], x[1], x[2], x[3]);
    let b = Quaternion::new(x[4], x[5], x[6], x[7]);
    let s = a + b;
    let d2 = |y: Quaternion, h: Quaternion| y * h + h * y;
    let d3 = |y: Quaternion, h: Quaternion| h * y * y + y * h * y + y * y * h;
    let mut cols = Vec::with_capacity(8);
    for k in 0..8 {
        let mut e = [0.0; 4];
        e[k % 4] = 1.0;
        let h = Quaternion::from_array(e);
        let (ha, hb) = if k < 4 { (h, Quaternion::ZERO) } else { (Quaternion::ZERO, h) };
        let sq = d2(a, ha) + d2(b, hb) + d2(s, ha + hb);
        let cu = d3(a, ha) + d3(b, hb) - d3(s, ha + hb);
        let (p, q) = (sq.to_array(), cu.to_array());
        cols.push(vec![p[0], p[1], p[2], p[3], q[0], q[1], q[2], q[3]]);
    }
    Mat::from_columns(&cols).expect("8x8")
}

fn max_norm(r: &[f64; 8]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped Newton from `x`; returns the point when the residual drops to
/// `RESIDUAL_TOL / 100`.
fn newton(mut x: [f64; 8], v: Complex64, max_iterations: usize) -> Option<[f64; 8]> {
    let mut r = equations(&x, v);
    for _ in 0..max_iterations {
        let norm = max_norm(&r);
        if norm <= RESIDUAL_TOL * 1e-2 {
            return Some(x);
        }
        let rhs: Vec<f64> = r.iter().map(|y| -y).collect();
        let step = jacobian(&x).solve(&rhs).ok()?;
        let mut t = 1.0;
        loop {
            let mut trial = x;
            for (xi, si) in trial.iter_mut().zip(&step) {
                *xi += t * si;
            }
            let rt = equations(&trial, v);
            if max_norm(&rt) < norm || t < 1e-6 {
                x = trial;
                r = rt;
                break;
            }
            t *= 0.5;
        }
        if !x.iter().all(|c| c.is_finite()) {
            return None;
        }
    }
    (max_norm(&r) <= RESIDUAL_TOL * 1e-2).then_some(x)
}

fn is_noncommuting(t: &QuatTriple) -> bool {
    t.a.x3.abs() > 1e-6 || t.a.x4.abs() > 1e-6
}

/// Multistart search for solutions with `a` outside `R + Ri`. Such solutions
/// come in circles under [`QuatTriple::rotated`]; results are deduplicated up
/// to rotation and the sign variants.
pub fn find_noncommuting_with(v1: f64, v2: f64, opts: &SearchOptions) -> Result<SearchReport, QuatError> {
    let verdict = region_verdict(v1, v2)?;
    let v = Complex64::new(v1, v2);
    let mut found: Vec<FoundSolution> = Vec::new();
    for attempt in 0..opts.attempts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt as u64));
        let start: [f64; 8] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let Some(x) = newton(start, v, opts.max_iterations) else { continue };
        let triple =
            QuatTriple::from_ab(Quaternion::new(x[0], x[1], x[2], x[3]), Quaternion::new(x[4], x[5], x[6], x[7]));
        if !is_noncommuting(&triple) {
            continue;
        }
        let triple = triple.canonical();
        let Ok(orbit) = solution_orbit(&triple, v) else { continue };
        let known = found.iter().any(|f| orbit.iter().any(|o| o.canonical().distance(&f.triple) < 1e-6));
        if !known {
            found.push(FoundSolution { triple, residual: triple.residual(v), orbit });
        }
    }
    found.sort_by(|x, y| x.triple.key().partial_cmp(&y.triple.key()).unwrap_or(std::cmp::Ordering::Equal));
    let contradiction = !found.is_empty() && !verdict.exists_noncommuting && !verdict.on_boundary;
    Ok(SearchReport { verdict, solutions: found, contradiction })
}

pub fn find_noncommuting(v1: f64, v2: f64, attempts: usize) -> Result<SearchReport, QuatError> {
    find_noncommuting_with(v1, v2, &SearchOptions { attempts, ..SearchOptions::default() })
}
