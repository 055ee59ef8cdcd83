//! The potential family `V(x) = g0/(e^x z) + g1/z + g2/z^2 + g3/z^4` with
//! `z(x) = (1 + e^{-2x})^{1/2}`, its two physical members, the mirror-image
//! relation between them, and the half-line source potentials they descend
//! from under the coordinate change `x = ln sinh r`.

use crate::error::{Error, Result};

/// Quartic coupling fixed by the solvability condition.
pub const FIXED_QUARTIC_COUPLING: f64 = -0.75;

/// Switchover below which `z` is evaluated from its large-`|x|` expansion
/// because `e^{-2x}` overflows.
const Z_ASYMPTOTIC_X: f64 = -350.0;

/// `z(x) = (1 + e^{-2x})^{1/2}`, decreasing from +inf to 1.
pub fn z_of_x(x: f64) -> f64 {
    if x < Z_ASYMPTOTIC_X {
        // z = e^{-x} (1 + e^{2x})^{1/2} ~ e^{-x} (1 + e^{2x}/2).
        (-x).exp() * (1.0 + 0.5 * (2.0 * x).exp())
    } else {
        (1.0 + (-2.0 * x).exp()).sqrt()
    }
}

/// `dz/dx = (1 - z^2)/z`, computed as `1/z - z` to avoid overflow in `z^2`.
pub fn dz_dx(x: f64) -> f64 {
    let z = z_of_x(x);
    1.0 / z - z
}

/// Coupling vector of the general family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralCouplings {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl GeneralCouplings {
    /// Potential value at `x`.
    ///
    /// The first term uses `e^x z(x) = (1 + e^{2x})^{1/2} = z(-x)`, which
    /// stays finite for large negative `x` where `e^x` alone underflows.
    pub fn eval(&self, x: f64) -> f64 {
        let z = z_of_x(x);
        let z2 = z * z;
        self.g0 / z_of_x(-x) + self.g1 / z + self.g2 / z2 + self.g3 / (z2 * z2)
    }
}

/// Strengths `(A, B)` of the two physical members; requires `B/2 > 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DkvParams {
    pub a: f64,
    pub b: f64,
}

impl DkvParams {
    /// Validates the strengths.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParams("strengths must be finite".into()));
        }
        if b <= 0.5 {
            return Err(Error::InvalidParams(format!(
                "need B/2 > 1/4, got B = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    /// Half strength `b = B/2`, the combination the root condition uses.
    pub fn half_b(&self) -> f64 {
        0.5 * self.b
    }

    /// Root scale `sqrt(B/2)`.
    pub fn beta_scale(&self) -> f64 {
        self.half_b().sqrt()
    }

    /// Limit of the first member as `x -> +inf`: `A - B - 3/4`.
    pub fn right_limit(&self) -> f64 {
        self.a - self.b + FIXED_QUARTIC_COUPLING
    }

    /// Bottom of the continuum: `min(0, A - B - 3/4)`.
    pub fn continuum_edge(&self) -> f64 {
        self.right_limit().min(0.0)
    }
}

/// The two physical members of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkvForm {
    /// `g = (0, -B, A, -3/4)`: flat at `-inf`, steps to `A - B - 3/4` at `+inf`.
    First,
    /// `g = (-B, 0, A, -3/4)`: the mirror-image partner of the first form.
    Second,
}

impl DkvForm {
    /// Coupling vector of this member.
    pub fn couplings(self, p: &DkvParams) -> GeneralCouplings {
        match self {
            DkvForm::First => GeneralCouplings {
                g0: 0.0,
                g1: -p.b,
                g2: p.a,
                g3: FIXED_QUARTIC_COUPLING,
            },
            DkvForm::Second => GeneralCouplings {
                g0: -p.b,
                g1: 0.0,
                g2: p.a,
                g3: FIXED_QUARTIC_COUPLING,
            },
        }
    }

    /// Potential value at `x`.
    pub fn eval(self, p: &DkvParams, x: f64) -> f64 {
        self.couplings(p).eval(x)
    }
}

/// Parameters of the mirror identity
/// `V_first(x) = V[(-D, 0, C, -3/4)](-x) + epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorParams {
    pub c: f64,
    pub d: f64,
    pub epsilon: f64,
}

/// Mirror-image couplings of the first member: `C = 3/2 - A`, `D = B`,
/// `epsilon = A - 3/4`. The shift vanishes exactly at `A = 3/4`.
pub fn mirror_params(p: &DkvParams) -> MirrorParams {
    MirrorParams { c: 1.5 - p.a, d: p.b, epsilon: p.a - 0.75 }
}

/// Pointwise defect of the mirror identity at `x`.
pub fn mirror_defect(p: &DkvParams, x: f64) -> f64 {
    let m = mirror_params(p);
    let mirrored = GeneralCouplings {
        g0: -m.d,
        g1: 0.0,
        g2: m.c,
        g3: FIXED_QUARTIC_COUPLING,
    };
    DkvForm::First.eval(p, x) - mirrored.eval(-x) - m.epsilon
}

/// Shape of the half-line source potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// `U(r) = -2 b coth r + a(a-1)/sinh^2 r` with `kappa^2 = (a+n)^2 + b^2/(a+n)^2`.
    Eckart,
    /// `U(r) = -(2a+1) b cosh r / sinh^2 r + (a(a+1) + b^2)/sinh^2 r`
    /// with `kappa^2 = (a-n)^2`.
    PoschlTeller,
}

/// Half-line source problem `(-d^2/dr^2 + U(r)) chi = -kappa^2 chi` on `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    pub a: f64,
    pub b: f64,
    pub kind: SourceKind,
}

impl SourceParams {
    /// Potential value at `r > 0`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::InvalidParams(format!(
                "source potential needs r > 0, got {r}"
            )));
        }
        let sh = r.sinh();
        let inv_sh2 = 1.0 / (sh * sh);
        Ok(match self.kind {
            SourceKind::Eckart => {
                -2.0 * self.b / r.tanh() + self.a * (self.a - 1.0) * inv_sh2
            }
            SourceKind::PoschlTeller => {
                (-(2.0 * self.a + 1.0) * self.b * r.cosh()
                    + self.a * (self.a + 1.0)
                    + self.b * self.b)
                    * inv_sh2
            }
        })
    }

    /// Binding parameter `kappa^2` of level `n`.
    pub fn kappa_sq(&self, n: usize) -> Result<f64> {
        let n = n as f64;
        match self.kind {
            SourceKind::Eckart => {
                let c = self.a + n;
                if c == 0.0 {
                    return Err(Error::InvalidParams("a + n must be nonzero".into()));
                }
                let s = self.b / c;
                Ok(c * c + s * s)
            }
            SourceKind::PoschlTeller => {
                let d = self.a - n;
                Ok(d * d)
            }
        }
    }
}

/// Half-line potential value and `kappa^2` for level `n` at `r`.
pub fn eval_source(sp: &SourceParams, n: usize, r: f64) -> Result<(f64, f64)> {
    Ok((sp.eval(r)?, sp.kappa_sq(n)?))
}

/// Derivatives of the coordinate change `x(r) = ln sinh r`.
fn map_derivatives(r: f64) -> (f64, f64, f64, f64) {
    let sh = r.sinh();
    let ch = r.cosh();
    let x = sh.ln();
    let x1 = ch / sh;
    let x2 = -1.0 / (sh * sh);
    let x3 = 2.0 * ch / (sh * sh * sh);
    (x, x1, x2, x3)
}

/// Max defect over `r_points` (restricted to `r > cutoff`) of the identity
/// `U(r) + kappa^2 = (x')^2 (V(x(r)) + k^2) + (3/4)(x''/x')^2 - (1/2) x'''/x'`
/// that carries the half-line problem onto the whole line.
pub fn line_map_defect(
    u: &dyn Fn(f64) -> f64,
    kappa_sq: f64,
    v: &dyn Fn(f64) -> f64,
    k_sq: f64,
    r_points: &[f64],
    cutoff: f64,
) -> f64 {
    let mut worst = 0.0f64;
    for &r in r_points.iter().filter(|&&r| r > cutoff) {
        let (x, x1, x2, x3) = map_derivatives(r);
        let lhs = u(r) + kappa_sq;
        let ratio = x2 / x1;
        let rhs = x1 * x1 * (v(x) + k_sq) + 0.75 * ratio * ratio - 0.5 * x3 / x1;
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

/// `line_map_defect` specialized to a bound state of the first member
/// against its half-line source.
pub fn liouville_residual(
    p: &DkvParams,
    state: &crate::spectrum::BoundState,
    r_points: &[f64],
    cutoff: f64,
) -> Result<f64> {
    let sp = SourceParams { a: state.a, b: p.half_b(), kind: SourceKind::Eckart };
    let kappa_sq = sp.kappa_sq(state.n)?;
    let k_sq = -state.energy;
    Ok(line_map_defect(
        &|r| sp.eval(r).expect("cutoff keeps r positive"),
        kappa_sq,
        &|x| DkvForm::First.eval(p, x),
        k_sq,
        r_points,
        cutoff,
    ))
}
