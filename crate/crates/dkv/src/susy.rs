//! Superpotentials `W = -psi'/psi` of bound states in closed form:
//! `W(x) = K + S/z - 1/(2 z^2) + sum_i h_i/(1 + g_i z)` with one pole term
//! per wavefunction node (`g_i = -1/z_i`, `h_i = g_i^2 - 1`), plus the
//! coefficient identities that pin `(K, S, g_i)` and the partner potentials
//! `W^2 -+ W'`.

use crate::error::Result;
use crate::grid::Grid;
use crate::potential::{dz_dx, z_of_x, DkvForm, DkvParams};
use crate::spectrum::BoundState;
use crate::tolerance::NODE_MASK_RADIUS;
use crate::wavefunction::{node_x_from_z, JacobiSpec};

/// Closed-form superpotential of one bound level.
#[derive(Debug, Clone)]
pub struct SuperpotentialSpec {
    pub n: usize,
    /// `1/z` coefficient of the log-derivative before node poles are split
    /// off; equals the state's `s`.
    pub b1: f64,
    /// `n + sqrt(-E)`; enters the strength identity `b1 (1 + 2 c0) = B`.
    pub c0: f64,
    /// Constant term `K = -sqrt(-E) = 1/2 - a`.
    pub constant_term: f64,
    /// `1/z` coefficient `S = b1 - sum_i g_i`.
    pub inv_z_coeff: f64,
    /// `1/z^2` coefficient, always `-1/2`.
    pub inv_z2_coeff: f64,
    /// Pole parameters `g_i = -1/z_i`, one per polynomial root `z_i`.
    pub g_list: Vec<f64>,
    /// Node positions in `x`, derived from the roots.
    pub node_x: Vec<f64>,
    /// Level energy the factorization reproduces.
    pub energy: f64,
}

/// Builds the superpotential of a bound state; extracts polynomial roots,
/// which must be physical (real, in `(1, inf)`).
pub fn superpotential(state: &BoundState) -> Result<SuperpotentialSpec> {
    let roots = JacobiSpec::of_state(state).roots()?;
    let g_list: Vec<f64> = roots.iter().map(|z| -1.0 / z).collect();
    let node_x = roots
        .iter()
        .map(|&z| node_x_from_z(z))
        .collect::<Result<Vec<f64>>>()?;
    let sqrt_eps = state.a - 0.5;
    let b1 = state.s;
    let g_sum: f64 = g_list.iter().sum();
    Ok(SuperpotentialSpec {
        n: state.n,
        b1,
        c0: state.n as f64 + sqrt_eps,
        constant_term: -sqrt_eps,
        inv_z_coeff: b1 - g_sum,
        inv_z2_coeff: -0.5,
        g_list,
        node_x,
        energy: state.energy,
    })
}

impl SuperpotentialSpec {
    /// `W(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let z = z_of_x(x);
        let mut w = self.constant_term + self.inv_z_coeff / z + self.inv_z2_coeff / (z * z);
        for &g in &self.g_list {
            w += (g * g - 1.0) / (1.0 + g * z);
        }
        w
    }

    /// `W(x)` plus a flag marking evaluation within 1e-6 of a node, where
    /// the pole makes the value meaningless.
    pub fn eval_flagged(&self, x: f64) -> (f64, bool) {
        let near = self.node_x.iter().any(|&xn| (x - xn).abs() < 1e-6);
        (self.eval(x), near)
    }

    /// `dW/dx` through the chain rule in `z`.
    pub fn eval_prime(&self, x: f64) -> f64 {
        let z = z_of_x(x);
        let z2 = z * z;
        let mut dwdz = -self.inv_z_coeff / z2 - 2.0 * self.inv_z2_coeff / (z2 * z);
        for &g in &self.g_list {
            let den = 1.0 + g * z;
            dwdz -= (g * g - 1.0) * g / (den * den);
        }
        dwdz * dz_dx(x)
    }

    /// Partner potential `W^2 + W'`, whose spectrum is the level's
    /// spectrum with the lowest state removed (shifted by `-energy`).
    pub fn v_plus(&self, x: f64) -> f64 {
        let w = self.eval(x);
        w * w + self.eval_prime(x)
    }

    /// Factorized potential `W^2 - W'`; equals `V(x) - energy` when the
    /// superpotential is exact.
    pub fn v_minus(&self, x: f64) -> f64 {
        let w = self.eval(x);
        w * w - self.eval_prime(x)
    }

    /// Distance from `x` to the nearest node.
    pub fn node_distance(&self, x: f64) -> f64 {
        self.node_x
            .iter()
            .map(|&xn| (x - xn).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Max of `|W^2 - W' - (V(x) - energy)|` over grid points farther than
/// `mask_radius` from every node. Passing an energy other than the spec's
/// own level turns this into a mismatch measurement (negative control).
pub fn susy_residual_masked(
    spec: &SuperpotentialSpec,
    p: &DkvParams,
    energy: f64,
    grid: &Grid,
    mask_radius: f64,
) -> f64 {
    let mut worst = 0.0f64;
    for x in grid.points() {
        if spec.node_distance(x) <= mask_radius {
            continue;
        }
        let defect = spec.v_minus(x) - (DkvForm::First.eval(p, x) - energy);
        worst = worst.max(defect.abs());
    }
    worst
}

/// Residual of the factorization against the spec's own level, with the
/// pinned default mask radius.
pub fn susy_residual(spec: &SuperpotentialSpec, p: &DkvParams, grid: &Grid) -> f64 {
    susy_residual_masked(spec, p, spec.energy, grid, NODE_MASK_RADIUS)
}

/// Residuals of the coefficient system that determines the superpotential,
/// grouped by which power of the expansion each equation pins.
#[derive(Debug, Clone)]
pub struct SystemResiduals {
    /// One per pole: the node-coupling equation
    /// `2K - 2S g_i - 2 g_i^2 - 1 + 2 g_i sum_{j != i} h_j/(g_i - g_j) = 0`.
    pub node_pole: Vec<f64>,
    /// `S (2K - 1) + 2 S sum h_i + 2 sum g_i h_i = -B`.
    pub inv_z: f64,
    /// `S^2 - K + 1 - sum h_i = A`.
    pub inv_z_sq: f64,
    /// `K^2 = -E`.
    pub constant: f64,
}

impl SystemResiduals {
    /// Largest residual in the system.
    pub fn max(&self) -> f64 {
        self.node_pole
            .iter()
            .cloned()
            .fold(self.inv_z.max(self.inv_z_sq).max(self.constant), f64::max)
    }
}

/// Evaluates the coefficient system for a constructed superpotential.
pub fn system_residuals(spec: &SuperpotentialSpec, p: &DkvParams) -> SystemResiduals {
    let k = spec.constant_term;
    let s = spec.inv_z_coeff;
    let g = &spec.g_list;
    let h: Vec<f64> = g.iter().map(|gi| gi * gi - 1.0).collect();
    let h_sum: f64 = h.iter().sum();
    let gh_sum: f64 = g.iter().zip(&h).map(|(gi, hi)| gi * hi).sum();
    let node_pole = g
        .iter()
        .enumerate()
        .map(|(i, &gi)| {
            let cross: f64 = g
                .iter()
                .zip(&h)
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, (&gj, &hj))| hj / (gi - gj))
                .sum();
            (2.0 * k - 2.0 * s * gi - 2.0 * gi * gi - 1.0 + 2.0 * gi * cross).abs()
        })
        .collect();
    SystemResiduals {
        node_pole,
        inv_z: (s * (2.0 * k - 1.0) + 2.0 * s * h_sum + 2.0 * gh_sum + p.b).abs(),
        inv_z_sq: (s * s - k + 1.0 - h_sum - p.a).abs(),
        constant: (k * k + spec.energy).abs(),
    }
}

/// Residual of the strength identity `b1 (1 + 2 c0) = B`.
pub fn strength_identity_residual(spec: &SuperpotentialSpec, p: &DkvParams) -> f64 {
    (spec.b1 * (1.0 + 2.0 * spec.c0) - p.b).abs()
}
