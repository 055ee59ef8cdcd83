//! Serializable report shapes. Field order is part of the output contract;
//! the JSON schemas under `schema/` mirror these structs field for field.

use serde::Serialize;

#[derive(Serialize)]
pub struct GridInfo {
    pub x_min: f64,
    pub x_max: f64,
    pub h: f64,
    pub n_points: usize,
}

#[derive(Serialize)]
pub struct SpectrumLevel {
    pub n: usize,
    pub roots: [f64; 3],
    pub selected: f64,
    pub window: [f64; 2],
    pub energy: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Serialize)]
pub struct SpectrumReport {
    pub a_strength: f64,
    pub b_strength: f64,
    pub half_b: f64,
    pub n_max: usize,
    pub levels: Vec<SpectrumLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stamp: Option<u64>,
}

#[derive(Serialize)]
pub struct WavefunctionReport {
    pub a_strength: f64,
    pub b_strength: f64,
    pub n: usize,
    pub energy: f64,
    pub grid: GridInfo,
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stamp: Option<u64>,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Largest defect the check saw; absent when the quantity could not be
    /// computed (which itself fails the check).
    pub worst: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct LevelCheck {
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

#[derive(Serialize)]
pub struct VerifyReport {
    pub a_strength: f64,
    pub b_strength: f64,
    pub select: String,
    pub scheme: String,
    pub grid: GridInfo,
    pub analytic_count: usize,
    pub oracle_count: usize,
    pub levels: Vec<LevelCheck>,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stamp: Option<u64>,
}

#[derive(Serialize)]
pub struct NatanzonLevelReport {
    pub n: usize,
    pub energy: f64,
    pub equation_residual: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub oracle_energy: Option<f64>,
    pub abs_delta_e: Option<f64>,
}

#[derive(Serialize)]
pub struct NatanzonReport {
    pub f: f64,
    pub h0: f64,
    pub h1: f64,
    pub a: f64,
    pub c0: f64,
    pub c1: f64,
    pub threshold: f64,
    pub grid: GridInfo,
    pub levels: Vec<NatanzonLevelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stamp: Option<u64>,
}
