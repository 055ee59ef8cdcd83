//! Closed-form eigenfunctions `psi(x) = e^{-alpha x} z^{1/2} (1+z)^{-s} P_n(z)`
//! built on Jacobi polynomials in the variable `z(x)`, plus numerical
//! normalization, node counting, and polynomial root extraction.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::z_of_x;
use crate::roots::companion_roots;
use crate::spectrum::BoundState;
use crate::tolerance::EDGE_AMPLITUDE;

/// Jacobi polynomial `P_n^{(alpha,beta)}`.
///
/// The three-term recurrence used here needs `alpha + beta < -2n` (or `> 0`)
/// so its denominators stay away from zero; bound-state parameters satisfy
/// `alpha + beta = -2c < -(2n + 1)` automatically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSpec {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiSpec {
    /// Polynomial parameters attached to a bound level.
    pub fn of_state(state: &BoundState) -> Self {
        JacobiSpec { n: state.n, alpha: state.alpha, beta: state.beta }
    }

    /// Evaluates `P_n^{(alpha,beta)}(z)` by the degree recurrence.
    pub fn eval(&self, z: f64) -> f64 {
        let (al, be) = (self.alpha, self.beta);
        if self.n == 0 {
            return 1.0;
        }
        let mut pm = 1.0;
        let mut p = 0.5 * (al - be) + 0.5 * (al + be + 2.0) * z;
        for k in 2..=self.n {
            let kf = k as f64;
            let ab = al + be;
            let c0 = 2.0 * kf + ab;
            let denom = 2.0 * kf * (kf + ab) * (c0 - 2.0);
            let next = ((c0 - 1.0) * ((c0 * (c0 - 2.0)) * z + al * al - be * be) * p
                - 2.0 * (kf + al - 1.0) * (kf + be - 1.0) * c0 * pm)
                / denom;
            pm = p;
            p = next;
        }
        p
    }

    /// `d/dz P_n^{(alpha,beta)}(z)`.
    pub fn deriv(&self, z: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let lowered = JacobiSpec {
            n: self.n - 1,
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
        };
        0.5 * (self.n as f64 + self.alpha + self.beta + 1.0) * lowered.eval(z)
    }

    /// Monomial coefficients, low to high, by running the recurrence on
    /// coefficient vectors.
    pub fn coefficients(&self) -> Vec<f64> {
        let (al, be) = (self.alpha, self.beta);
        let mut pm = vec![1.0];
        if self.n == 0 {
            return pm;
        }
        let mut p = vec![0.5 * (al - be), 0.5 * (al + be + 2.0)];
        for k in 2..=self.n {
            let kf = k as f64;
            let ab = al + be;
            let c0 = 2.0 * kf + ab;
            let denom = 2.0 * kf * (kf + ab) * (c0 - 2.0);
            let lin = (c0 - 1.0) * c0 * (c0 - 2.0) / denom;
            let con = (c0 - 1.0) * (al * al - be * be) / denom;
            let back = 2.0 * (kf + al - 1.0) * (kf + be - 1.0) * c0 / denom;
            let mut next = vec![0.0; k + 1];
            for (i, &ci) in p.iter().enumerate() {
                next[i + 1] += lin * ci;
                next[i] += con * ci;
            }
            for (i, &ci) in pm.iter().enumerate() {
                next[i] -= back * ci;
            }
            pm = p;
            p = next;
        }
        p
    }

    /// All `n` roots, required to be real and inside `(1, inf)` as they are
    /// for bound-state parameters; fails loudly otherwise. Companion-matrix
    /// estimates are Newton-polished against the recurrence evaluation.
    pub fn roots(&self) -> Result<Vec<f64>> {
        if self.n == 0 {
            return Ok(Vec::new());
        }
        let raw = companion_roots(&self.coefficients())?;
        let mut out = Vec::with_capacity(raw.len());
        for r in raw {
            if r.im.abs() > 1e-8 * r.re.abs().max(1.0) {
                return Err(Error::NonPhysicalRoots(format!(
                    "complex polynomial root {r} for n={} alpha={} beta={}",
                    self.n, self.alpha, self.beta
                )));
            }
            let mut z = r.re;
            for _ in 0..30 {
                let f = self.eval(z);
                let d = self.deriv(z);
                if d.abs() < 1e-300 {
                    break;
                }
                let step = f / d;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            if !(z > 1.0) {
                return Err(Error::NonPhysicalRoots(format!(
                    "polynomial root {z} outside (1, inf)"
                )));
            }
            out.push(z);
        }
        out.sort_by(|p, q| p.partial_cmp(q).unwrap());
        Ok(out)
    }
}

/// Maps a polynomial root `z > 1` to its node position `x = -ln(z^2 - 1)/2`.
pub fn node_x_from_z(z: f64) -> Result<f64> {
    if !(z > 1.0) {
        return Err(Error::NonPhysicalRoots(format!("node variable {z} not above 1")));
    }
    Ok(-0.5 * (z * z - 1.0).ln())
}

/// Unnormalized eigenfunction value. All factors stay finite on any
/// practical grid (|x| up to a few hundred); `alpha > 0` kills the right
/// tail and the net left exponent `a - 1/2 > 0` kills the left tail.
pub fn psi_eval(state: &BoundState, x: f64) -> f64 {
    let z = z_of_x(x);
    let poly = JacobiSpec::of_state(state).eval(z);
    (-state.alpha * x).exp() * z.sqrt() * (1.0 + z).powf(-state.s) * poly
}

/// Eigenfunction samples scaled to unit Simpson norm.
pub fn normalized_samples(state: &BoundState, grid: &Grid) -> Result<Vec<f64>> {
    let mut v = grid.sample(|x| psi_eval(state, x));
    let sq: Vec<f64> = v.iter().map(|p| p * p).collect();
    let norm = grid.integrate(&sq).sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NonPhysicalRoots(format!("state norm {norm} on this grid")));
    }
    for p in v.iter_mut() {
        *p /= norm;
    }
    Ok(v)
}

/// Whether normalized samples decay at both grid ends.
pub fn decays_at_edges(normalized: &[f64]) -> bool {
    let first = normalized.first().copied().unwrap_or(f64::NAN);
    let last = normalized.last().copied().unwrap_or(f64::NAN);
    first.abs() < EDGE_AMPLITUDE && last.abs() < EDGE_AMPLITUDE
}

/// Counts sign changes, skipping exact zeros.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut count = 0;
    let mut prev = 0.0f64;
    for &v in values {
        if v != 0.0 {
            if prev != 0.0 && v.signum() != prev.signum() {
                count += 1;
            }
            prev = v;
        }
    }
    count
}

/// Sign changes plus a flag for extrema suspiciously close to the grid ends
/// (within two cells), where a count can be truncated.
pub fn count_sign_changes_flagged(values: &[f64]) -> (usize, bool) {
    let count = count_sign_changes(values);
    let near_edge = values.len() >= 5 && {
        let head = &values[..3];
        let tail = &values[values.len() - 3..];
        let flip = |w: &[f64]| w.windows(2).any(|p| p[0] != 0.0 && p[1] != 0.0 && p[0].signum() != p[1].signum());
        flip(head) || flip(tail)
    };
    (count, near_edge)
}
