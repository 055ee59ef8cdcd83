//! Change-of-variable machinery behind the solvable family.
//!
//! A coordinate map x -> z(x) pulls the Schrodinger equation back to a
//! hypergeometric-type equation F'' + Q(z)F' + R(z)F = 0 through
//!
//! ```text
//! E - V(x) = z'''/(2z') - (3/4)(z''/z')^2 + (z')^2 (R - Q'/2 - Q^2/4)
//! ```
//!
//! with psi = (z')^(-1/2) F(z). This module provides that master identity as
//! a residual check, the four separable map classes z^k (z')^2 = C(1-z^2)^m
//! with their closed forms, the specialization to Jacobi Q, R (which for the
//! root-exponential class collapses to the inverse-square-root potential
//! family), and the generic six-parameter family on the unit interval whose
//! map z(x) is only available through its defining ODE.
//!
//! The six-parameter machinery and the inverse-square-root family live on
//! different z-intervals ((0,1) versus (1,inf)); no identification between
//! their parameter sets is attempted here.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::ode;

/// Relative tolerance for the unit-interval map integration.
const MAP_RTOL: f64 = 1e-13;
/// The map decays exponentially at both ends, so error control must stay
/// relative; an absolute floor would swamp the tails.
const MAP_ATOL: f64 = 1e-300;

/// 16-point Gauss-Legendre rule on [-1, 1], used for the per-cell
/// back-substitution defect of the map ODE.
const GAUSS16: [(f64, f64); 16] = [
    (-9.89400934991649939e-1, 2.71524594117540374e-2),
    (-9.44575023073232600e-1, 6.22535239386477063e-2),
    (-8.65631202387831755e-1, 9.51585116824925914e-2),
    (-7.55404408355002999e-1, 1.24628971255534030e-1),
    (-6.17876244402643771e-1, 1.49595988816576764e-1),
    (-4.58016777657227370e-1, 1.69156519395002619e-1),
    (-2.81603550779258915e-1, 1.82603415044923612e-1),
    (-9.50125098376374544e-2, 1.89450610455068585e-1),
    (9.50125098376374544e-2, 1.89450610455068585e-1),
    (2.81603550779258915e-1, 1.82603415044923612e-1),
    (4.58016777657227370e-1, 1.69156519395002619e-1),
    (6.17876244402643771e-1, 1.49595988816576764e-1),
    (7.55404408355002999e-1, 1.24628971255534030e-1),
    (8.65631202387831755e-1, 9.51585116824925914e-2),
    (9.44575023073232600e-1, 6.22535239386477063e-2),
    (9.89400934991649939e-1, 2.71524594117540374e-2),
];

/// A three-times differentiable change of variable with analytic derivatives.
pub trait CoordinateMap {
    fn z(&self, x: f64) -> f64;
    fn dz(&self, x: f64) -> f64;
    fn d2z(&self, x: f64) -> f64;
    fn d3z(&self, x: f64) -> f64;

    /// 1 - z(x)^2, overridden where the map admits a cancellation-free form.
    /// The difference loses all precision as z approaches 1, and the Jacobi
    /// combinations divide by its square.
    fn one_minus_z_sq(&self, x: f64) -> f64 {
        let z = self.z(x);
        1.0 - z * z
    }
}

/// z = sin(sqrt_c x + d); solves (z')^2 = C (1 - z^2) with C = sqrt_c^2.
#[derive(Debug, Clone, Copy)]
pub struct SineMap {
    pub sqrt_c: f64,
    pub d: f64,
}

impl CoordinateMap for SineMap {
    fn z(&self, x: f64) -> f64 {
        (self.sqrt_c * x + self.d).sin()
    }
    fn dz(&self, x: f64) -> f64 {
        self.sqrt_c * (self.sqrt_c * x + self.d).cos()
    }
    fn d2z(&self, x: f64) -> f64 {
        -self.sqrt_c * self.sqrt_c * self.z(x)
    }
    fn d3z(&self, x: f64) -> f64 {
        -self.sqrt_c * self.sqrt_c * self.dz(x)
    }
    fn one_minus_z_sq(&self, x: f64) -> f64 {
        let c = (self.sqrt_c * x + self.d).cos();
        c * c
    }
}

/// z = tanh(sqrt_c x + d); solves (z')^2 = C (1 - z^2)^2.
#[derive(Debug, Clone, Copy)]
pub struct TanhMap {
    pub sqrt_c: f64,
    pub d: f64,
}

impl CoordinateMap for TanhMap {
    fn z(&self, x: f64) -> f64 {
        (self.sqrt_c * x + self.d).tanh()
    }
    fn dz(&self, x: f64) -> f64 {
        let z = self.z(x);
        self.sqrt_c * (1.0 - z * z)
    }
    fn d2z(&self, x: f64) -> f64 {
        let z = self.z(x);
        -2.0 * self.sqrt_c * z * self.dz(x)
    }
    fn d3z(&self, x: f64) -> f64 {
        let z = self.z(x);
        -2.0 * self.sqrt_c * self.sqrt_c * self.dz(x) * (1.0 - 3.0 * z * z)
    }
    fn one_minus_z_sq(&self, x: f64) -> f64 {
        let c = (self.sqrt_c * x + self.d).cosh();
        1.0 / (c * c)
    }
}

/// z = (1 + exp(2 sqrt_c x + d))^(1/2); solves z^2 (z')^2 = C (1 - z^2)^2.
///
/// With sqrt_c = -1, d = 0 this is exactly the map underlying the
/// inverse-square-root potential family (z in (1, inf), decreasing).
#[derive(Debug, Clone, Copy)]
pub struct RootExpMap {
    pub sqrt_c: f64,
    pub d: f64,
}

impl RootExpMap {
    /// z' = g(z), g' and g'' for the autonomous form g = sqrt_c (z^2-1)/z.
    fn g_parts(&self, x: f64) -> (f64, f64, f64, f64) {
        let e = (2.0 * self.sqrt_c * x + self.d).exp();
        let z = (1.0 + e).sqrt();
        let g = self.sqrt_c * e / z;
        let gp = self.sqrt_c * (1.0 + 1.0 / (z * z));
        let gpp = -2.0 * self.sqrt_c / (z * z * z);
        (z, g, gp, gpp)
    }
}

impl CoordinateMap for RootExpMap {
    fn z(&self, x: f64) -> f64 {
        ((2.0 * self.sqrt_c * x + self.d).exp() + 1.0).sqrt()
    }
    fn dz(&self, x: f64) -> f64 {
        self.g_parts(x).1
    }
    fn d2z(&self, x: f64) -> f64 {
        let (_, g, gp, _) = self.g_parts(x);
        g * gp
    }
    fn d3z(&self, x: f64) -> f64 {
        let (_, g, gp, gpp) = self.g_parts(x);
        g * (gp * gp + g * gpp)
    }
    fn one_minus_z_sq(&self, x: f64) -> f64 {
        -(2.0 * self.sqrt_c * x + self.d).exp()
    }
}

/// The four separable classes z^k (z')^2 = C (1 - z^2)^m with elementary
/// solutions (k, m as in `powers`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    /// k = 0, m = 1: z = sin(sqrt(C) x + d).
    Sine,
    /// k = 0, m = 2: z = tanh(sqrt(C) x + d).
    Tanh,
    /// k = 1, m = 2: only an implicit solution; kept for residual checks.
    LinearWeight,
    /// k = 2, m = 2: z = (1 + exp(2 sqrt(C) x + d))^(1/2).
    RootExp,
}

impl MapClass {
    /// Exponents (k, m) of the defining combination.
    pub fn powers(self) -> (i32, i32) {
        match self {
            MapClass::Sine => (0, 1),
            MapClass::Tanh => (0, 2),
            MapClass::LinearWeight => (1, 2),
            MapClass::RootExp => (2, 2),
        }
    }
}

/// Max relative deviation of z^k (z')^2 from C (1 - z^2)^m along the map.
/// Relative scaling keeps the measure meaningful where the combination grows
/// exponentially.
pub fn class_ode_residual(
    class: MapClass,
    c: f64,
    map: &impl CoordinateMap,
    xs: &[f64],
) -> f64 {
    let (k, m) = class.powers();
    xs.iter()
        .map(|&x| {
            let z = map.z(x);
            let zp = map.dz(x);
            let lhs = z.powi(k) * zp * zp;
            let rhs = c * map.one_minus_z_sq(x).powi(m);
            (lhs - rhs).abs() / rhs.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

fn schwarzian_half(map: &impl CoordinateMap, x: f64) -> f64 {
    let zp = map.dz(x);
    let r = map.d2z(x) / zp;
    map.d3z(x) / (2.0 * zp) - 0.75 * r * r
}

/// Max-abs defect of the master identity over the sample points: the mapped
/// combination of (Q, R) and the derivatives of z must reproduce E - V(x).
pub fn master_residual(
    map: &impl CoordinateMap,
    q: impl Fn(f64) -> f64,
    dq: impl Fn(f64) -> f64,
    r: impl Fn(f64) -> f64,
    energy: f64,
    v: impl Fn(f64) -> f64,
    xs: &[f64],
) -> f64 {
    xs.iter()
        .map(|&x| {
            let z = map.z(x);
            let zp = map.dz(x);
            let qz = q(z);
            let rhs = schwarzian_half(map, x)
                + zp * zp * (r(z) - 0.5 * dq(z) - 0.25 * qz * qz);
            (rhs - (energy - v(x))).abs()
        })
        .fold(0.0, f64::max)
}

/// E - V(x) from the master identity with the Jacobi equation's Q and R:
/// Q = [beta - alpha - (sigma+2) z]/(1-z^2), R = n(n+sigma+1)/(1-z^2),
/// sigma = alpha + beta. Expanded so each term is explicit in z.
pub fn jacobi_master_eval(
    alpha: f64,
    beta: f64,
    n: usize,
    map: &impl CoordinateMap,
    x: f64,
) -> f64 {
    let sigma = alpha + beta;
    let w = beta - alpha;
    let nn = n as f64;
    let z = map.z(x);
    let s = map.dz(x) * map.dz(x);
    let base = map.one_minus_z_sq(x);
    let b2 = base * base;
    schwarzian_half(map, x)
        + nn * (nn + sigma + 1.0) * s / base
        + (0.5 * (sigma + 2.0) - 0.25 * w * w) * s / b2
        + 0.5 * w * sigma * s * z / b2
        + (0.25 - 0.25 * (sigma + 1.0) * (sigma + 1.0)) * s * z * z / b2
}

/// Closed form of `jacobi_master_eval` for the RootExp class with C = 1:
/// the z-dependence collapses to 1/z, 1/z^2 and 1/z^4 terms, i.e. exactly
/// the inverse-square-root potential shape.
pub fn jacobi_rootexp_form(alpha: f64, beta: f64, n: usize, z: f64) -> f64 {
    let sigma = alpha + beta;
    let w = n as f64 + 0.5 * (sigma + 1.0);
    let z2 = z * z;
    -w * w
        + 0.5 * (beta - alpha) * (beta + alpha) / z
        + 0.75 / (z2 * z2)
        + (w * w - 0.25 * sigma * sigma - 0.75 - 0.25 * (beta - alpha) * (beta - alpha)) / z2
}

/// Potential strengths (A, B) and the energy that a Jacobi factor with the
/// given parameters produces under the RootExp map (read off from
/// `jacobi_rootexp_form`).
pub fn couplings_from_jacobi(alpha: f64, beta: f64, n: usize) -> (f64, f64, f64) {
    let sigma = alpha + beta;
    let w = n as f64 + 0.5 * (sigma + 1.0);
    let energy = -w * w;
    let b_strength = 0.5 * (beta - alpha) * (beta + alpha);
    let a_strength = 0.25 * sigma * sigma + 0.75 + 0.25 * (beta - alpha) * (beta - alpha) - w * w;
    (a_strength, b_strength, energy)
}

/// The six-parameter family on the unit interval: explicit strengths
/// (f, h0, h1) and the coefficients (a, c0, c1) of
/// R(z) = a z^2 + (c1 - c0 - a) z + c0, which must stay positive on (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NatanzonParams {
    pub f: f64,
    pub h0: f64,
    pub h1: f64,
    pub a: f64,
    pub c0: f64,
    pub c1: f64,
}

impl NatanzonParams {
    pub fn new(f: f64, h0: f64, h1: f64, a: f64, c0: f64, c1: f64) -> Result<Self> {
        let vals = [f, h0, h1, a, c0, c1];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if c0 <= 0.0 || c1 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "R must be positive at the interval ends: R(0) = {c0}, R(1) = {c1}"
            )));
        }
        let np = NatanzonParams { f, h0, h1, a, c0, c1 };
        if a != 0.0 {
            // Positive endpoints leave only an interior vertex to check.
            let zv = (a + c0 - c1) / (2.0 * a);
            if zv > 0.0 && zv < 1.0 && np.r(zv) <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "R dips to {} at z = {zv}",
                    np.r(zv)
                )));
            }
        }
        Ok(np)
    }

    /// R(z) = a z^2 + (c1 - c0 - a) z + c0.
    pub fn r(&self, z: f64) -> f64 {
        (self.a * z + (self.c1 - self.c0 - self.a)) * z + self.c0
    }

    fn r_prime(&self, z: f64) -> f64 {
        2.0 * self.a * z + (self.c1 - self.c0 - self.a)
    }

    /// The potential as a function of z: the Schwarzian part of the map
    /// z' = 2z(1-z)/sqrt(R) plus the explicit strength terms. All derivatives
    /// are taken analytically in z; nothing is differenced numerically.
    pub fn potential_at_z(&self, z: f64) -> f64 {
        let r = self.r(z);
        let rp = self.r_prime(z);
        let rs = r.sqrt();
        let p = 2.0 * z * (1.0 - z);
        let pp = 2.0 - 4.0 * z;
        let g = p / rs;
        let gp = pp / rs - 0.5 * p * rp / (r * rs);
        let gpp = -4.0 / rs - pp * rp / (r * rs) + 0.75 * p * rp * rp / (r * r * rs)
            - self.a * p / (r * rs);
        0.25 * gp * gp - 0.5 * g * gpp
            + (self.f * z * (z - 1.0) + self.h0 * (1.0 - z) + self.h1 * z) / r
    }

    /// Continuum threshold: V tends to (h0+1)/c0 as z -> 0 and (h1+1)/c1 as
    /// z -> 1; bound states live below the smaller of the two.
    pub fn threshold(&self) -> f64 {
        ((self.h0 + 1.0) / self.c0).min((self.h1 + 1.0) / self.c1)
    }

    /// The three radicals (alpha, beta, delta) of the quantization condition
    /// at energy e, or None when a radicand is negative.
    pub fn radicals(&self, e: f64) -> Option<(f64, f64, f64)> {
        let ra = self.f + 1.0 - self.a * e;
        let rb = self.h0 + 1.0 - self.c0 * e;
        let rd = self.h1 + 1.0 - self.c1 * e;
        if ra < 0.0 || rb < 0.0 || rd < 0.0 {
            return None;
        }
        Some((ra.sqrt(), rb.sqrt(), rd.sqrt()))
    }

    /// Left side minus right side of the quantization condition
    /// alpha - beta - delta = 2n + 1, without the 2n+1 part.
    pub fn energy_equation(&self, e: f64) -> Option<f64> {
        self.radicals(e).map(|(al, be, de)| al - be - de)
    }
}

/// One solved level of the six-parameter family.
#[derive(Debug, Clone, Copy)]
pub struct NatanzonLevel {
    pub n: usize,
    pub energy: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    /// |alpha - beta - delta - (2n+1)| at the returned energy.
    pub equation_residual: f64,
}

/// Samples the map z(x) on the grid by integrating z' = 2z(1-z)/sqrt(R(z))
/// forward and backward from the anchor z(0) = 1/2. The anchor uses up the
/// translation freedom of the autonomous ODE.
pub fn natanzon_z(np: &NatanzonParams, grid: &Grid) -> Result<Vec<f64>> {
    let rhs = |_x: f64, z: f64| 2.0 * z * (1.0 - z) / np.r(z).sqrt();
    let xs: Vec<f64> = grid.points().collect();
    let split = xs.partition_point(|&x| x < 0.0);
    let mut out = vec![0.0; xs.len()];
    if split > 0 {
        let back: Vec<f64> = xs[..split].iter().rev().copied().collect();
        let vals = ode::integrate_to(rhs, 0.0, 0.5, &back, MAP_RTOL, MAP_ATOL)?;
        for (k, v) in vals.into_iter().enumerate() {
            out[split - 1 - k] = v;
        }
    }
    if split < xs.len() {
        let vals = ode::integrate_to(rhs, 0.0, 0.5, &xs[split..], MAP_RTOL, MAP_ATOL)?;
        out[split..].copy_from_slice(&vals);
    }
    Ok(out)
}

/// Back-substitution defect of the sampled map: for each grid cell, the exact
/// quadrature of dx = sqrt(R)/(2z(1-z)) dz between consecutive samples must
/// reproduce the grid spacing. Returns the max-abs defect over cells.
///
/// The measure saturates at the sample representation floor: rounding z to
/// the nearest f64 already shifts the quadrature by ulp(z)/z'(z), which near
/// the endpoints grows like ulp/(2 min(z, 1-z)). Keep the span inside
/// min(z, 1-z) > 1e-6 or so when testing against tight tolerances.
pub fn z_ode_residual(np: &NatanzonParams, xs: &[f64], zs: &[f64]) -> f64 {
    assert_eq!(xs.len(), zs.len(), "sample arrays must align");
    let integrand = |u: f64| np.r(u).sqrt() / (2.0 * u * (1.0 - u));
    let mut worst = 0.0f64;
    for i in 1..xs.len() {
        let mid = 0.5 * (zs[i] + zs[i - 1]);
        let half = 0.5 * (zs[i] - zs[i - 1]);
        let quad: f64 = GAUSS16
            .iter()
            .map(|&(t, w)| w * integrand(mid + half * t))
            .sum::<f64>()
            * half;
        worst = worst.max((quad - (xs[i] - xs[i - 1])).abs());
    }
    worst
}

/// Potential at a single x; integrates the map from the anchor each call.
/// Prefer `natanzon_potential_on` for whole grids.
pub fn natanzon_potential(np: &NatanzonParams, x: f64) -> Result<f64> {
    let rhs = |_x: f64, z: f64| 2.0 * z * (1.0 - z) / np.r(z).sqrt();
    let z = ode::integrate_to(rhs, 0.0, 0.5, &[x], MAP_RTOL, MAP_ATOL)?[0];
    Ok(np.potential_at_z(z))
}

/// Potential sampled on a grid, sharing one map integration.
pub fn natanzon_potential_on(np: &NatanzonParams, grid: &Grid) -> Result<Vec<f64>> {
    Ok(natanzon_z(np, grid)?
        .into_iter()
        .map(|z| np.potential_at_z(z))
        .collect())
}

/// Solves the quantization condition alpha - beta - delta = 2n + 1 for
/// n = 0..=n_max, stopping at the first n with no root. The left side
/// increases with E up to the threshold, so each root is bracketed by a
/// downward geometric scan from just below the threshold and then bisected.
pub fn natanzon_energies(np: &NatanzonParams, n_max: usize) -> Vec<NatanzonLevel> {
    let mut e_hi = np.threshold();
    if np.a > 0.0 {
        e_hi = e_hi.min((np.f + 1.0) / np.a);
    }
    // For a < 0 the first radical caps how deep E may go.
    let e_floor = if np.a < 0.0 {
        (np.f + 1.0) / np.a
    } else {
        f64::NEG_INFINITY
    };
    e_hi -= 1e-12 * e_hi.abs().max(1.0);
    if e_hi <= e_floor {
        return Vec::new();
    }

    let mut levels = Vec::new();
    for n in 0..=n_max {
        let target = (2 * n + 1) as f64;
        let shifted = |e: f64| np.energy_equation(e).map(|v| v - target);
        let top = match shifted(e_hi) {
            Some(v) if v >= 0.0 => v,
            _ => break,
        };
        if top == 0.0 {
            // Root exactly at the scan start.
            let (al, be, de) = np.radicals(e_hi).expect("radicals exist at the root");
            levels.push(NatanzonLevel {
                n,
                energy: e_hi,
                alpha: al,
                beta: be,
                delta: de,
                equation_residual: 0.0,
            });
            continue;
        }
        let mut step = 0.1 * e_hi.abs().max(1.0);
        let mut lo = e_hi - step;
        let mut bracketed = false;
        for _ in 0..64 {
            if lo <= e_floor {
                lo = e_floor;
            }
            match shifted(lo) {
                Some(v) if v >= 0.0 => {
                    step *= 4.0;
                    lo -= step;
                }
                // None means a radicand went negative: the condition has no
                // value there, which brackets the root just as a sign change
                // does because the radical vanishes continuously first.
                _ => {
                    bracketed = true;
                    break;
                }
            }
        }
        if !bracketed {
            break;
        }
        let mut hi = e_hi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            match shifted(mid) {
                Some(v) if v >= 0.0 => hi = mid,
                _ => lo = mid,
            }
        }
        let energy = 0.5 * (lo + hi);
        let (al, be, de) = match np.radicals(energy) {
            Some(r) => r,
            None => break,
        };
        levels.push(NatanzonLevel {
            n,
            energy,
            alpha: al,
            beta: be,
            delta: de,
            equation_residual: (al - be - de - target).abs(),
        });
    }
    levels
}

/// Terminating Gauss series F(-n, b; c; z): a degree-n polynomial.
fn hyp2f1_terminating(n: usize, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - n as f64) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Bound-state wavefunction of the six-parameter family as a function of z:
/// R^(1/4) (1-z)^(delta/2) z^(beta/2) F(-n, alpha - n; beta + 1; z).
pub fn natanzon_psi_z(np: &NatanzonParams, level: &NatanzonLevel, z: f64) -> f64 {
    np.r(z).powf(0.25)
        * (1.0 - z).powf(0.5 * level.delta)
        * z.powf(0.5 * level.beta)
        * hyp2f1_terminating(level.n, level.alpha - level.n as f64, level.beta + 1.0, z)
}

/// Wavefunction sampled on a grid and Simpson-normalized.
pub fn natanzon_psi(np: &NatanzonParams, level: &NatanzonLevel, grid: &Grid) -> Result<Vec<f64>> {
    let mut vals: Vec<f64> = natanzon_z(np, grid)?
        .into_iter()
        .map(|z| natanzon_psi_z(np, level, z))
        .collect();
    let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
    let norm = grid.integrate(&sq).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NoConvergence(format!(
            "wavefunction norm {norm} on the sampling grid"
        )));
    }
    for v in &mut vals {
        *v /= norm;
    }
    Ok(vals)
}
