//! Pinned numerical tolerances shared by the verifier, the CLI, and the
//! acceptance suite. These are contract values; loosening them is a bug.

/// Max `|E_oracle - E_analytic|` accepted per level.
pub const ENERGY_ABS: f64 = 1e-4;

/// Max `1 - |<psi_oracle, psi_analytic>|` accepted per level.
pub const OVERLAP_DEFECT: f64 = 1e-6;

/// Max masked Schrodinger residual for the ground-state superpotential.
pub const SUSY_GROUND: f64 = 1e-9;

/// Max masked Schrodinger residual for excited-state superpotentials.
pub const SUSY_EXCITED: f64 = 1e-6;

/// Max pointwise defect of the mirror-image coupling identity.
pub const EQUIVALENCE: f64 = 1e-12;

/// Max residual of the coordinate transform between the x-line and the
/// half-line source problem.
pub const LIOUVILLE: f64 = 1e-8;

/// Max residual of the closed-form map against its defining class ODE.
pub const CLASS_ODE: f64 = 1e-12;

/// Max cross-residual between the two closed forms of `E - V` produced by
/// the change-of-variable formula.
pub const MASTER_FORM: f64 = 1e-9;

/// Max bound-state equation residual for the generalized six-parameter family.
pub const NATANZON_EQUATION: f64 = 1e-10;

/// Max per-cell back-substitution defect of the numerically inverted
/// coordinate map for the generalized family.
pub const NATANZON_ODE: f64 = 1e-10;

/// Max `|E_oracle - E_analytic|` for the generalized family.
pub const NATANZON_ENERGY_ABS: f64 = 1e-4;

/// Half-width of the wavefunction-node mask used by superpotential residuals.
pub const NODE_MASK_RADIUS: f64 = 1e-3;

/// Max normalized wavefunction amplitude allowed at a grid edge for the
/// state to count as decayed there.
pub const EDGE_AMPLITUDE: f64 = 1e-6;

/// Distance below which a root-window hit counts as a boundary collision.
pub const WINDOW_BOUNDARY: f64 = 1e-12;
