//! Bound-state spectrum from the cubic level condition.
//!
//! Level `n` of the first family member corresponds to the middle real root
//! `t` of `(2n+1) t^3 - (A + n^2 + n - 1/2) t^2 + b^2 = 0` (with `b = B/2`)
//! restricted to the window `n + 1/2 < t < sqrt(b)`; the decay parameter is
//! `a = t - n` and the energy is `E = -(a - 1/2)^2`.

use crate::error::{Error, Result};
use crate::potential::DkvParams;
use crate::roots::polish_root;
use crate::tolerance::WINDOW_BOUNDARY;
use num_complex::Complex64;

/// Cubic coefficients `(c3, c2, c1, c0)` of the level condition for level `n`.
pub fn cubic_coefficients(p: &DkvParams, n: usize) -> [f64; 4] {
    let nf = n as f64;
    let b = p.half_b();
    [
        2.0 * nf + 1.0,
        -(p.a + nf * nf + nf - 0.5),
        0.0,
        b * b,
    ]
}

/// All three roots of `c3 t^3 + c2 t^2 + c1 t + c0`, `c3 != 0`, sorted by
/// real part. Uses the trigonometric form when all roots are real and a
/// cancellation-safe Cardano form otherwise, then Newton-polishes each root;
/// imaginary parts below 1e-10 are snapped to zero.
pub fn solve_cubic(coeffs: &[f64; 4]) -> [Complex64; 3] {
    let [c3, c2, c1, c0] = *coeffs;
    assert!(c3 != 0.0, "leading cubic coefficient must be nonzero");
    let p = c2 / c3;
    let q = c1 / c3;
    let r = c0 / c3;
    // Depress: t = y - p/3 turns the cubic into y^3 + dp*y + dq.
    let dp = q - p * p / 3.0;
    let dq = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let disc = 0.25 * dq * dq + dp * dp * dp / 27.0;
    let shift = -p / 3.0;
    let mut roots = if disc < 0.0 {
        // Three distinct real roots; dp < 0 is implied.
        let m = 2.0 * (-dp / 3.0).sqrt();
        let cos3 = (-4.0 * dq / (m * m * m)).clamp(-1.0, 1.0);
        let psi = cos3.acos() / 3.0;
        let third = 2.0 * std::f64::consts::PI / 3.0;
        [0.0, 1.0, 2.0].map(|k| {
            Complex64::new(shift + m * (psi - k * third).cos(), 0.0)
        })
    } else {
        // One real root (double counts as the degenerate case).
        let s = disc.sqrt();
        let u = (-0.5 * dq - s.copysign(dq)).cbrt();
        let v = if u != 0.0 { -dp / (3.0 * u) } else { 0.0 };
        let half = -0.5 * (u + v);
        let imag = 0.5 * 3.0f64.sqrt() * (u - v).abs();
        [
            Complex64::new(shift + u + v, 0.0),
            Complex64::new(shift + half, -imag),
            Complex64::new(shift + half, imag),
        ]
    };
    let low_to_high = [c0, c1, c2, c3];
    for z in roots.iter_mut() {
        *z = polish_root(&low_to_high, *z);
        if z.im.abs() < 1e-10 {
            z.im = 0.0;
        }
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    roots
}

/// Level condition cubic for one `(params, n)` pair together with the scaled
/// quantities that describe its root geometry.
#[derive(Debug, Clone)]
pub struct CubicTriple {
    pub n: usize,
    /// `(c3, c2, c1, c0)` of the level condition.
    pub coeffs: [f64; 4],
    /// Roots sorted by real part.
    pub roots: [Complex64; 3],
    pub half_b: f64,
    /// Curve level `(A + n^2 + n - 1/2)/b`; every real root `t` satisfies
    /// `mu (t/sqrt(b)) + (sqrt(b)/t)^2 = tau`.
    pub tau: f64,
    /// Slope parameter `(2n + 1)/sqrt(b)`.
    pub mu: f64,
    /// Admissible root window `(n + 1/2, sqrt(b))`.
    pub window: (f64, f64),
}

impl CubicTriple {
    /// Solves the level condition for `(p, n)`.
    pub fn build(p: &DkvParams, n: usize) -> Self {
        let coeffs = cubic_coefficients(p, n);
        let roots = solve_cubic(&coeffs);
        let b = p.half_b();
        let beta = b.sqrt();
        let nf = n as f64;
        CubicTriple {
            n,
            coeffs,
            roots,
            half_b: b,
            tau: (p.a + nf * nf + nf - 0.5) / b,
            mu: (2.0 * nf + 1.0) / beta,
            window: (nf + 0.5, beta),
        }
    }

    /// The roots as real numbers if all three are real.
    pub fn real_roots(&self) -> Option<[f64; 3]> {
        if self.roots.iter().all(|z| z.im == 0.0) {
            Some([self.roots[0].re, self.roots[1].re, self.roots[2].re])
        } else {
            None
        }
    }

    /// Real roots divided by `sqrt(b)`, the scale on which the window
    /// becomes `(T, 1)` with `T = (n + 1/2)/sqrt(b)`.
    pub fn scaled_roots(&self) -> Option<[f64; 3]> {
        let beta = self.half_b.sqrt();
        self.real_roots().map(|r| r.map(|t| t / beta))
    }
}

/// Which real root to take; anything but `Middle` is a deliberate
/// negative-control choice that yields a non-normalizable state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSelection {
    Middle,
    Leftmost,
    Rightmost,
}

/// Decay parameter `a = t - n` from the middle real root, provided all three
/// roots are real and `t` sits strictly inside the window. Window hits
/// closer than the boundary tolerance are rejected. An empty result means
/// "no bound level at this n".
pub fn select_physical_root(triple: &CubicTriple) -> Option<f64> {
    let [_, mid, _] = triple.real_roots()?;
    let (lo, hi) = triple.window;
    let tol_lo = WINDOW_BOUNDARY * lo.abs().max(1.0);
    let tol_hi = WINDOW_BOUNDARY * hi.abs().max(1.0);
    if mid - lo > tol_lo && hi - mid > tol_hi {
        Some(mid - triple.n as f64)
    } else {
        None
    }
}

/// Root selection with negative-control overrides; `Leftmost`/`Rightmost`
/// skip the window test and return whatever `t - n` the extreme root gives.
pub fn select_root(triple: &CubicTriple, selection: RootSelection) -> Option<f64> {
    match selection {
        RootSelection::Middle => select_physical_root(triple),
        RootSelection::Leftmost => triple.real_roots().map(|r| r[0] - triple.n as f64),
        RootSelection::Rightmost => triple.real_roots().map(|r| r[2] - triple.n as f64),
    }
}

/// Energy from the decay parameter: `E = -(a - 1/2)^2`, requiring `a > 1/2`.
pub fn energy_of(a: f64) -> Result<f64> {
    if !(a > 0.5) {
        return Err(Error::NonPhysicalRoots(format!(
            "decay parameter a = {a} is at or below the threshold 1/2"
        )));
    }
    let k = a - 0.5;
    Ok(-k * k)
}

/// Reproduces the strength `A` from `(n, sqrt_eps = a - 1/2, b)`; inverse of
/// the level condition, used as a back-substitution check.
pub fn coupling_from_energy(n: usize, sqrt_eps: f64, half_b: f64) -> f64 {
    let nf = n as f64;
    let t = nf + 0.5 + sqrt_eps;
    half_b * half_b / (t * t) + nf * nf + nf + 1.0 + (2.0 * nf + 1.0) * sqrt_eps
}

/// One bound level with its derived shape parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub n: usize,
    /// Decay parameter; the left tail falls like `e^{(a - 1/2) x}`.
    pub a: f64,
    pub energy: f64,
    /// Middle root `c = a + n` of the level condition.
    pub c: f64,
    /// `s = b/c`; the pair `(c, s)` fixes the polynomial parameters.
    pub s: f64,
    /// Polynomial parameter `alpha = s - c > 0`; the right tail falls like
    /// `e^{-alpha x}`.
    pub alpha: f64,
    /// Polynomial parameter `beta = -s - c < 0`.
    pub beta: f64,
}

impl BoundState {
    /// Builds the level from a selected root, revalidating the window.
    pub fn from_root(p: &DkvParams, n: usize, a: f64) -> Result<Self> {
        let beta_scale = p.beta_scale();
        let c = a + n as f64;
        if !(c > n as f64 + 0.5 && c < beta_scale) {
            return Err(Error::NonPhysicalRoots(format!(
                "root t = {c} outside the window ({}, {beta_scale})",
                n as f64 + 0.5
            )));
        }
        Ok(Self::from_root_unchecked(p, n, a))
    }

    /// Same construction without the window test; negative controls only.
    pub fn from_root_unchecked(p: &DkvParams, n: usize, a: f64) -> Self {
        let c = a + n as f64;
        let s = p.half_b() / c;
        let k = a - 0.5;
        BoundState {
            n,
            a,
            energy: -k * k,
            c,
            s,
            alpha: s - c,
            beta: -s - c,
        }
    }

    /// Decay rate of the left tail.
    pub fn left_decay(&self) -> f64 {
        self.a - 0.5
    }

    /// Gap between the continuum edge and the level; positive for physical
    /// states.
    pub fn edge_margin(&self, p: &DkvParams) -> f64 {
        p.continuum_edge() - self.energy
    }
}

/// Open interval of strengths `A` for which level `n` exists at fixed `b`.
/// The lower end is where the root hits `sqrt(b)`, the upper end is where it
/// hits `n + 1/2`; the intervals are nested in `n`.
pub fn existence_interval(p: &DkvParams, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let b = p.half_b();
    let lower = b + (2.0 * nf + 1.0) * b.sqrt() - nf * nf - nf + 0.5;
    let upper = nf * nf + nf + 1.0 + b * b / ((nf + 0.5) * (nf + 0.5));
    (lower, upper)
}

/// Necessary (not sufficient) strength bound for level `n`:
/// `A > 2 (n + 1/2)^2 + 3/4`.
pub fn strength_precondition(p: &DkvParams, n: usize) -> bool {
    let half = n as f64 + 0.5;
    p.a > 2.0 * half * half + 0.75
}

/// Diagnostic row for one candidate level.
#[derive(Debug, Clone)]
pub struct LevelScan {
    pub triple: CubicTriple,
    pub state: Option<BoundState>,
    pub precondition_met: bool,
}

/// Root diagnostics for every `n` up to `n_max`, with no early stop.
pub fn scan_levels(p: &DkvParams, n_max: usize) -> Vec<LevelScan> {
    (0..=n_max)
        .map(|n| {
            let triple = CubicTriple::build(p, n);
            let state = select_physical_root(&triple)
                .map(|a| BoundState::from_root_unchecked(p, n, a));
            LevelScan {
                precondition_met: strength_precondition(p, n),
                triple,
                state,
            }
        })
        .collect()
}

/// All bound levels in order. Existence intervals are nested in `n`, so the
/// enumeration stops at the first missing level; `n_max` caps the search.
pub fn enumerate_levels(p: &DkvParams, n_max: usize) -> Vec<BoundState> {
    let mut levels = Vec::new();
    for n in 0..=n_max {
        let triple = CubicTriple::build(p, n);
        match select_physical_root(&triple) {
            Some(a) => levels.push(BoundState::from_root_unchecked(p, n, a)),
            None => break,
        }
    }
    levels
}

/// The bound level `n`, or `MissingLevel` if it does not exist.
pub fn level(p: &DkvParams, n: usize) -> Result<BoundState> {
    let triple = CubicTriple::build(p, n);
    match select_physical_root(&triple) {
        Some(a) => BoundState::from_root(p, n, a),
        None => Err(Error::MissingLevel { n }),
    }
}

/// Certified root geometry of a triple with three real roots.
#[derive(Debug, Clone)]
pub struct RootCertificate {
    /// Roots over `sqrt(b)`, ascending `(Z, X, Y)`.
    pub scaled: [f64; 3],
    /// Scaled window `(T, 1)`.
    pub window: (f64, f64),
    pub leftmost_negative: bool,
    pub middle_in_window: bool,
    pub rightmost_above_one: bool,
    /// `|mu xi + 1/xi^2 - tau|` for each scaled root.
    pub curve_defects: [f64; 3],
    /// Defect of the closed form `Y = (1 + sqrt(1 + 4 mu X^3))/(2 mu X^2)`.
    pub rightmost_closed_form_defect: f64,
}

/// Builds the certificate; `None` when the triple has complex roots.
pub fn root_certificate(triple: &CubicTriple) -> Option<RootCertificate> {
    let scaled = triple.scaled_roots()?;
    let [z, x, y] = scaled;
    let t = triple.window.0 / triple.half_b.sqrt();
    let mu = triple.mu;
    let tau = triple.tau;
    let curve_defects = scaled.map(|xi| (mu * xi + 1.0 / (xi * xi) - tau).abs());
    let y_closed = (1.0 + (1.0 + 4.0 * mu * x * x * x).sqrt()) / (2.0 * mu * x * x);
    Some(RootCertificate {
        scaled,
        window: (t, 1.0),
        leftmost_negative: z < 0.0,
        middle_in_window: x > t && x < 1.0,
        rightmost_above_one: y > 1.0,
        curve_defects,
        rightmost_closed_form_defect: (y - y_closed).abs(),
    })
}
