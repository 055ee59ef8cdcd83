//! Shared fixtures for the benchmark targets.

use dkv::DkvParams;

/// Single-level strengths used throughout the test suite.
pub fn reference() -> DkvParams {
    DkvParams::new(10.25, 12.5).expect("valid strengths")
}

/// Well deep enough to hold several levels.
pub fn deep_well() -> DkvParams {
    DkvParams::new(4000.0, 7200.0).expect("valid strengths")
}
