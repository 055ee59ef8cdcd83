//! Direct numerical eigensolver used to verify the analytic spectrum.
//!
//! The Hamiltonian `-d^2/dx^2 + V` is discretized on a uniform grid with
//! Dirichlet conditions one step outside both ends. Eigenvalue counts come
//! from Sturm pivot sequences, eigenvalues from bisection on the count, and
//! eigenvectors from inverse iteration with a pivoting tridiagonal solve.
//!
//! For the Numerov scheme the count runs on the symmetric form in the
//! auxiliary variable `w_i = c_i u_i`, `c_i = 1 - h^2 (V_i - E)/12`: the
//! original five-coefficient stencil is equivalent to the tridiagonal system
//! with constant off-diagonals `-1/h^2` and diagonals `2/h^2 + f_i/c_i`,
//! whose diagonal is strictly decreasing in `E` wherever all `c_i > 0`, so
//! negative-pivot counts are monotone and jump exactly at eigenvalues.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{DkvForm, DkvParams};
use crate::spectrum::BoundState;
use crate::tolerance;
use crate::wavefunction::{count_sign_changes, decays_at_edges, normalized_samples, psi_eval};

/// Largest |V| accepted when sampling a potential.
const POTENTIAL_BOUND: f64 = 1e12;

/// Relative amplitude below which a sample is treated as zero when counting
/// oracle eigenvector nodes.
const NODE_FLOOR: f64 = 1e-12;

/// Discretization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order central difference.
    ThreePoint,
    /// Fourth-order Numerov stencil.
    Numerov,
}

/// Sampled potential with its grid and discretization scheme.
#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    pub grid: Grid,
    pub scheme: Scheme,
    v: Vec<f64>,
}

/// Samples `v` on the grid, rejecting non-finite or huge values.
pub fn build_hamiltonian<F: Fn(f64) -> f64>(
    v: F,
    grid: &Grid,
    scheme: Scheme,
) -> Result<DiscreteHamiltonian> {
    hamiltonian_from_samples(grid, scheme, grid.sample(v))
}

/// Wraps already-sampled potential values, with the same screening as
/// `build_hamiltonian`. The samples must be aligned with the grid points.
pub fn hamiltonian_from_samples(
    grid: &Grid,
    scheme: Scheme,
    v: Vec<f64>,
) -> Result<DiscreteHamiltonian> {
    if v.len() != grid.n_points {
        return Err(Error::InvalidParams(format!(
            "{} potential samples for a {}-point grid",
            v.len(),
            grid.n_points
        )));
    }
    for (i, &val) in v.iter().enumerate() {
        if !val.is_finite() || val.abs() > POTENTIAL_BOUND {
            return Err(Error::UnboundedPotential { value: val, at: grid.point(i) });
        }
    }
    Ok(DiscreteHamiltonian { grid: grid.clone(), scheme, v })
}

impl DiscreteHamiltonian {
    /// Potential samples.
    pub fn potential(&self) -> &[f64] {
        &self.v
    }

    /// Tridiagonal bands of the shifted system `T(e)`: constant off-diagonal
    /// and the per-point diagonal. Numerov uses the symmetric `w`-variable
    /// form, which requires every `c_i = 1 - h^2 (V_i - e)/12` positive.
    fn shifted_bands(&self, e: f64) -> Result<(f64, Vec<f64>)> {
        let h2 = self.grid.h * self.grid.h;
        match self.scheme {
            Scheme::ThreePoint => {
                let diag = self.v.iter().map(|&vi| 2.0 / h2 + vi - e).collect();
                Ok((-1.0 / h2, diag))
            }
            Scheme::Numerov => {
                let mut diag = Vec::with_capacity(self.v.len());
                for &vi in &self.v {
                    let f = vi - e;
                    let c = 1.0 - h2 * f / 12.0;
                    if c <= 0.0 {
                        return Err(Error::InvalidParams(format!(
                            "step {h} too large for the Numerov form at V - E = {f}",
                            h = self.grid.h
                        )));
                    }
                    diag.push(2.0 / h2 + f / c);
                }
                Ok((-1.0 / h2, diag))
            }
        }
    }

    /// Number of eigenvalues strictly below `e` (Sturm pivot count).
    pub fn count_below(&self, e: f64) -> Result<usize> {
        let (off, diag) = self.shifted_bands(e)?;
        let off2 = off * off;
        let mut count = 0;
        // The first pivot is the bare diagonal entry: off2/inf vanishes.
        let mut q = f64::INFINITY;
        for &d in &diag {
            q = d - off2 / q;
            if q == 0.0 {
                q = 1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Search bracket that encloses the whole discrete spectrum.
    fn spectrum_bracket(&self) -> (f64, f64) {
        let h2 = self.grid.h * self.grid.h;
        let vmin = self.v.iter().cloned().fold(f64::INFINITY, f64::min);
        let vmax = self.v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let band = match self.scheme {
            Scheme::ThreePoint => 4.0 / h2,
            Scheme::Numerov => 6.0 / h2,
        };
        (vmin - 1.0, vmax + band + 1.0)
    }

    /// `j`-th discrete eigenvalue (0-based) by bisection on the count.
    pub fn eigenvalue(&self, j: usize) -> Result<f64> {
        let (mut lo, mut hi) = self.spectrum_bracket();
        if self.count_below(hi)? < j + 1 {
            return Err(Error::NoConvergence(format!(
                "matrix has fewer than {} eigenvalues", j + 1
            )));
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid)? > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * hi.abs().max(lo.abs()).max(1.0) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// All eigenvalues strictly below `edge`, ascending.
    pub fn eigenvalues_below(&self, edge: f64) -> Result<Vec<f64>> {
        let k = self.count_below(edge)?;
        (0..k).map(|j| self.eigenvalue(j)).collect()
    }

    /// Unit-norm eigenvector at eigenvalue `e` by inverse iteration. The
    /// sign is fixed so the first sample above 1% of the peak is positive.
    pub fn eigenvector(&self, e: f64) -> Result<Vec<f64>> {
        let (off, diag) = self.shifted_bands(e)?;
        let n = diag.len();
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut converged = false;
        for _ in 0..60 {
            let mut z = solve_tridiagonal(off, &diag, &x)?;
            let norm = z.iter().map(|t| t * t).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::NoConvergence("inverse iteration produced a zero vector".into()));
            }
            for t in z.iter_mut() {
                *t /= norm;
            }
            let align: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            x = z;
            if (1.0 - align.abs()) < 1e-12 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence("inverse iteration did not settle".into()));
        }
        // Undo the Numerov change of variable u = w / c.
        if self.scheme == Scheme::Numerov {
            let h2 = self.grid.h * self.grid.h;
            for (u, &vi) in x.iter_mut().zip(&self.v) {
                *u /= 1.0 - h2 * (vi - e) / 12.0;
            }
        }
        // Normalize against the grid quadrature so overlaps with analytic
        // samples are plain Simpson inner products.
        let sq: Vec<f64> = x.iter().map(|t| t * t).collect();
        let norm = self.grid.integrate(&sq).sqrt();
        let peak = x.iter().cloned().fold(0.0f64, |m, t| m.max(t.abs()));
        let flip = x
            .iter()
            .find(|t| t.abs() > 0.01 * peak)
            .map_or(1.0, |t| t.signum());
        for t in x.iter_mut() {
            *t *= flip / norm;
        }
        Ok(x)
    }
}

/// Solves the tridiagonal system with constant sub/super-diagonal `off` by
/// Gaussian elimination with partial pivoting. Pivoting introduces one fill
/// band two columns right of the diagonal.
fn solve_tridiagonal(off: f64, diag: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(rhs.len(), n);
    if n == 0 {
        return Ok(Vec::new());
    }
    // Working row i holds (dd, ee, ff) at columns (i, i+1, i+2); low[i] is
    // the column-i entry of row i+1. Rows start tridiagonal (ff = 0).
    let mut dd: Vec<f64> = diag.to_vec();
    let mut ee = vec![off; n.saturating_sub(1)];
    let mut ff = vec![0.0f64; n];
    let mut low = vec![off; n.saturating_sub(1)];
    let mut b: Vec<f64> = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if low[i].abs() > dd[i].abs() {
            std::mem::swap(&mut dd[i], &mut low[i]);
            std::mem::swap(&mut ee[i], &mut dd[i + 1]);
            if i + 1 < n - 1 {
                // Row i had no column i+2 entry yet; row i+1 brought `off`.
                std::mem::swap(&mut ff[i], &mut ee[i + 1]);
            }
            b.swap(i, i + 1);
        }
        if dd[i] == 0.0 {
            dd[i] = 1e-300;
        }
        let m = low[i] / dd[i];
        dd[i + 1] -= m * ee[i];
        if i + 1 < n - 1 {
            ee[i + 1] -= m * ff[i];
        }
        b[i + 1] -= m * b[i];
    }
    if dd[n - 1] == 0.0 {
        dd[n - 1] = 1e-300;
    }
    let mut x = vec![0.0f64; n];
    x[n - 1] = b[n - 1] / dd[n - 1];
    if n >= 2 {
        x[n - 2] = (b[n - 2] - ee[n - 2] * x[n - 1]) / dd[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (b[i] - ee[i] * x[i + 1] - ff[i] * x[i + 2]) / dd[i];
    }
    Ok(x)
}

/// Per-level comparison between the analytic state and the oracle.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub n: usize,
    pub e_analytic: f64,
    pub e_oracle: Option<f64>,
    pub abs_delta_e: Option<f64>,
    pub overlap: Option<f64>,
    pub nodes_analytic: usize,
    pub nodes_oracle: Option<usize>,
    pub normalizable: bool,
    pub pass: bool,
}

/// Verification tolerances (pinned defaults in the `tolerance` module).
#[derive(Debug, Clone, Copy)]
pub struct VerifyTolerances {
    pub energy_abs: f64,
    pub overlap_defect: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        VerifyTolerances {
            energy_abs: tolerance::ENERGY_ABS,
            overlap_defect: tolerance::OVERLAP_DEFECT,
        }
    }
}

/// Outcome of checking a whole analytic spectrum against the oracle.
#[derive(Debug, Clone)]
pub struct SpectrumVerification {
    pub reports: Vec<LevelReport>,
    pub analytic_count: usize,
    pub oracle_count: usize,
    pub count_match: bool,
    pub pass: bool,
}

/// Counts oracle nodes with a relative floor that suppresses roundoff sign
/// flips in the far tails.
fn robust_node_count(values: &[f64]) -> usize {
    let peak = values.iter().cloned().fold(0.0f64, |m, t| m.max(t.abs()));
    let floor = NODE_FLOOR * peak;
    let clipped: Vec<f64> = values
        .iter()
        .map(|&t| if t.abs() < floor { 0.0 } else { t })
        .collect();
    count_sign_changes(&clipped)
}

/// Checks analytic states of the first family member against the direct
/// solver on the same grid: eigenvalue count below the continuum edge,
/// per-level energies, overlaps, node counts, and edge decay.
pub fn verify_spectrum(
    p: &DkvParams,
    states: &[BoundState],
    grid: &Grid,
    scheme: Scheme,
    tol: &VerifyTolerances,
) -> Result<SpectrumVerification> {
    let ham = build_hamiltonian(|x| DkvForm::First.eval(p, x), grid, scheme)?;
    let oracle_count = ham.count_below(p.continuum_edge())?;
    let mut reports = Vec::with_capacity(states.len());
    let mut all_pass = true;
    for (j, state) in states.iter().enumerate() {
        // A state whose norm overflows the grid is reported as a failed
        // level, not an abort: negative controls land here.
        let (psi, normalizable) = match normalized_samples(state, grid) {
            Ok(v) => {
                let decays = decays_at_edges(&v);
                (v, decays)
            }
            Err(_) => (grid.sample(|x| psi_eval(state, x)), false),
        };
        let nodes_analytic = robust_node_count(&psi);
        let (e_oracle, overlap, nodes_oracle) = if j < oracle_count {
            let e = ham.eigenvalue(j)?;
            let u = ham.eigenvector(e)?;
            let prod: Vec<f64> = u.iter().zip(&psi).map(|(a, b)| a * b).collect();
            let ov = grid.integrate(&prod).abs();
            (Some(e), Some(ov), Some(robust_node_count(&u)))
        } else {
            (None, None, None)
        };
        let abs_delta_e = e_oracle.map(|e| (e - state.energy).abs());
        let pass = normalizable
            && nodes_analytic == state.n
            && abs_delta_e.is_some_and(|d| d <= tol.energy_abs)
            && overlap.is_some_and(|o| 1.0 - o <= tol.overlap_defect)
            && nodes_oracle == Some(state.n);
        all_pass &= pass;
        reports.push(LevelReport {
            n: state.n,
            e_analytic: state.energy,
            e_oracle,
            abs_delta_e,
            overlap,
            nodes_analytic,
            nodes_oracle,
            normalizable,
            pass,
        });
    }
    let count_match = oracle_count == states.len();
    Ok(SpectrumVerification {
        analytic_count: states.len(),
        oracle_count,
        count_match,
        pass: all_pass && count_match,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::enumerate_levels;

    #[test]
    fn free_laplacian_matches_closed_form() {
        // V = 0 on [0, 1]: discrete eigenvalues 2(1 - cos(k pi / (N+1)))/h^2.
        let grid = Grid::new(0.0, 1.0, 1.0 / 128.0).unwrap();
        let ham = build_hamiltonian(|_| 0.0, &grid, Scheme::ThreePoint).unwrap();
        let n = grid.n_points as f64;
        for k in 1..=4usize {
            let exact = 2.0 * (1.0 - (k as f64 * std::f64::consts::PI / (n + 1.0)).cos())
                / (grid.h * grid.h);
            let got = ham.eigenvalue(k - 1).unwrap();
            assert!(
                (got - exact).abs() < 1e-9 * exact.max(1.0),
                "k={k}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn harmonic_oscillator_three_point() {
        let grid = Grid::new(-10.0, 10.0, 1e-3).unwrap();
        let ham = build_hamiltonian(|x| x * x, &grid, Scheme::ThreePoint).unwrap();
        for (j, exact) in [1.0, 3.0, 5.0].iter().enumerate() {
            let got = ham.eigenvalue(j).unwrap();
            assert!((got - exact).abs() < 1e-6, "E{j} = {got}");
        }
    }

    #[test]
    fn harmonic_oscillator_numerov() {
        let grid = Grid::new(-10.0, 10.0, 0.01).unwrap();
        let ham = build_hamiltonian(|x| x * x, &grid, Scheme::Numerov).unwrap();
        for (j, exact) in [1.0, 3.0, 5.0].iter().enumerate() {
            let got = ham.eigenvalue(j).unwrap();
            assert!((got - exact).abs() < 1e-7, "E{j} = {got}");
        }
    }

    #[test]
    fn convergence_orders() {
        // Richardson ratios against the exact harmonic ground energy.
        let err = |h: f64, scheme| {
            let grid = Grid::new(-10.0, 10.0, h).unwrap();
            let ham = build_hamiltonian(|x| x * x, &grid, scheme).unwrap();
            (ham.eigenvalue(0).unwrap() - 1.0).abs()
        };
        let r3 = err(0.02, Scheme::ThreePoint) / err(0.01, Scheme::ThreePoint);
        assert!(r3 > 3.5, "three-point Richardson ratio {r3}");
        let rn = err(0.04, Scheme::Numerov) / err(0.02, Scheme::Numerov);
        assert!(rn > 12.0, "Numerov Richardson ratio {rn}");
    }

    #[test]
    fn reference_ground_energy() {
        let p = DkvParams::new(10.25, 12.5).unwrap();
        let grid = Grid::new(-20.0, 60.0, 5e-3).unwrap();
        let ham = build_hamiltonian(|x| DkvForm::First.eval(&p, x), &grid, Scheme::Numerov)
            .unwrap();
        assert_eq!(ham.count_below(p.continuum_edge()).unwrap(), 1);
        let e0 = ham.eigenvalue(0).unwrap();
        assert!(
            (e0 - (-3.196863339120837)).abs() < 1e-9,
            "Numerov ground energy {e0}"
        );
    }

    #[test]
    fn domain_extension_leaves_energy_alone() {
        let p = DkvParams::new(10.25, 12.5).unwrap();
        let e = |x_max: f64| {
            let grid = Grid::new(-20.0, x_max, 5e-3).unwrap();
            let ham =
                build_hamiltonian(|x| DkvForm::First.eval(&p, x), &grid, Scheme::Numerov).unwrap();
            ham.eigenvalue(0).unwrap()
        };
        let d = e(60.0) - e(70.0);
        assert!(d.abs() < 1e-8, "domain dependence {d:e}");
    }

    #[test]
    fn tridiagonal_solver_residual() {
        // Random-ish diagonally varied system, residual check.
        let n = 400;
        let diag: Vec<f64> = (0..n)
            .map(|i| 2.5 + (i as f64 * 0.7).sin() * 2.4)
            .collect();
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).cos()).collect();
        let off = -1.0;
        let x = solve_tridiagonal(off, &diag, &rhs).unwrap();
        for i in 0..n {
            let mut r = diag[i] * x[i] - rhs[i];
            if i > 0 {
                r += off * x[i - 1];
            }
            if i + 1 < n {
                r += off * x[i + 1];
            }
            assert!(r.abs() < 1e-9, "residual {r:e} at row {i}");
        }
    }

    #[test]
    fn rejects_unbounded_potential() {
        let grid = Grid::new(-1.0, 1.0, 0.01).unwrap();
        let err = build_hamiltonian(|x| 1.0 / x, &grid, Scheme::ThreePoint);
        assert!(err.is_err());
    }

    #[test]
    fn verifies_reference_spectrum() {
        let p = DkvParams::new(10.25, 12.5).unwrap();
        let states = enumerate_levels(&p, 8);
        let grid = Grid::new(-20.0, 60.0, 5e-3).unwrap();
        let report =
            verify_spectrum(&p, &states, &grid, Scheme::Numerov, &VerifyTolerances::default())
                .unwrap();
        assert!(report.pass, "verification failed: {report:?}");
        assert_eq!(report.oracle_count, 1);
        let lv = &report.reports[0];
        assert!(lv.abs_delta_e.unwrap() < 1e-8);
        assert!(1.0 - lv.overlap.unwrap() < 1e-8);
    }

    #[test]
    fn wrong_root_fails_verification() {
        let p = DkvParams::new(10.25, 12.5).unwrap();
        let bad = [BoundState::from_root_unchecked(&p, 0, 9.29818151543818)];
        let grid = Grid::new(-20.0, 60.0, 0.01).unwrap();
        let report =
            verify_spectrum(&p, &bad, &grid, Scheme::Numerov, &VerifyTolerances::default())
                .unwrap();
        assert!(!report.pass);
        assert!(!report.reports[0].pass);
    }
}
