//! Adaptive Dormand-Prince 5(4) integration for scalar first-order ODEs.
//!
//! Single entry point: integrate dy/dx = f(x, y) from an anchor point and
//! report y at a list of requested abscissae. Steps are clipped so every
//! target is hit exactly; no dense-output interpolation is involved.

use crate::error::{Error, Result};

const SAFETY: f64 = 0.9;
const SHRINK_FLOOR: f64 = 0.2;
const GROW_CEIL: f64 = 5.0;
const MAX_STEPS: usize = 4_000_000;

/// One fifth-order step from `(x, y)` with slope `k1 = f(x, y)` already known.
/// Returns `(y_new, error_estimate, f(x + h, y_new))`; the last slope is the
/// first slope of the next step (FSAL).
fn dp_step<F: Fn(f64, f64) -> f64>(f: &F, x: f64, y: f64, h: f64, k1: f64) -> (f64, f64, f64) {
    let k2 = f(x + h / 5.0, y + h * (k1 / 5.0));
    let k3 = f(x + 0.3 * h, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    let k4 = f(
        x + 0.8 * h,
        y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3),
    );
    let k5 = f(
        x + 8.0 / 9.0 * h,
        y + h
            * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 + 64448.0 / 6561.0 * k3
                - 212.0 / 729.0 * k4),
    );
    let k6 = f(
        x + h,
        y + h
            * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2
                + 46732.0 / 5247.0 * k3
                + 49.0 / 176.0 * k4
                - 5103.0 / 18656.0 * k5),
    );
    let y_new = y
        + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4
            - 2187.0 / 6784.0 * k5
            + 11.0 / 84.0 * k6);
    let k7 = f(x + h, y_new);
    // Difference between the fifth-order and embedded fourth-order weights.
    let err = h
        * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4
            - 17253.0 / 339200.0 * k5
            + 22.0 / 525.0 * k6
            - k7 / 40.0);
    (y_new, err, k7)
}

/// Integrates `dy/dx = f(x, y)` from `(x0, y0)` and returns y at each target.
///
/// Targets must move strictly away from `x0` in one direction: ascending when
/// they lie above `x0`, descending when below. A leading target equal to `x0`
/// yields `y0`. Step-size control keeps the local error below
/// `atol + rtol * |y|` per step.
pub fn integrate_to<F>(
    f: F,
    x0: f64,
    y0: f64,
    targets: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> f64,
{
    if targets.is_empty() {
        return Err(Error::InvalidParams("no integration targets".into()));
    }
    if !x0.is_finite() || !y0.is_finite() || targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParams(
            "non-finite integration anchor or target".into(),
        ));
    }
    if !(rtol > 0.0) || !(atol >= 0.0) {
        return Err(Error::InvalidParams(
            "tolerances must satisfy rtol > 0, atol >= 0".into(),
        ));
    }
    let last = *targets.last().expect("nonempty");
    let dir = (last - x0).signum();
    if dir == 0.0 {
        if targets.len() == 1 {
            return Ok(vec![y0]);
        }
        return Err(Error::InvalidParams(
            "targets must be strictly monotone away from the anchor".into(),
        ));
    }
    if (targets[0] - x0) * dir < 0.0
        || targets.windows(2).any(|w| (w[1] - w[0]) * dir <= 0.0)
    {
        return Err(Error::InvalidParams(
            "targets must be strictly monotone away from the anchor".into(),
        ));
    }

    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, y);
    if !k1.is_finite() {
        return Err(Error::NoConvergence(format!(
            "right-hand side not finite at the anchor x = {x0}"
        )));
    }
    // Suggested step magnitude; the controller adapts it within a few steps.
    let mut h = (last - x0).abs() / 256.0;
    let mut out = Vec::with_capacity(targets.len());
    let mut steps = 0usize;

    for &t in targets {
        while (t - x) * dir > 0.0 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::NoConvergence(format!(
                    "step budget exhausted near x = {x}"
                )));
            }
            if h < 1e-14 * x.abs().max(1.0) {
                return Err(Error::NoConvergence(format!(
                    "step size collapsed near x = {x}"
                )));
            }
            let dist = (t - x).abs();
            let clipped = h >= dist;
            let h_step = if clipped { t - x } else { h * dir };
            let (y_new, err, k_last) = dp_step(&f, x, y, h_step, k1);
            let scale = atol + rtol * y.abs().max(y_new.abs());
            let ratio = (err / scale).abs();
            if y_new.is_finite() && ratio <= 1.0 {
                x = if clipped { t } else { x + h_step };
                y = y_new;
                k1 = k_last;
                if !clipped {
                    // Landing steps say nothing about the natural step size.
                    let grow = if ratio > 0.0 {
                        (SAFETY * ratio.powf(-0.2)).clamp(SHRINK_FLOOR, GROW_CEIL)
                    } else {
                        GROW_CEIL
                    };
                    h *= grow;
                }
            } else {
                let shrink = if ratio.is_finite() && ratio > 0.0 {
                    (SAFETY * ratio.powf(-0.2)).clamp(SHRINK_FLOOR, SAFETY)
                } else {
                    SHRINK_FLOOR
                };
                h = h_step.abs() * shrink;
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_forward() {
        let targets = [0.25, 0.5, 1.0, 2.0];
        let ys = integrate_to(|_, y| y, 0.0, 1.0, &targets, 1e-12, 1e-14).unwrap();
        for (t, y) in targets.iter().zip(&ys) {
            assert!((y - t.exp()).abs() < 1e-10 * t.exp());
        }
    }

    #[test]
    fn exponential_backward() {
        let targets = [-0.5, -1.0, -2.0];
        let ys = integrate_to(|_, y| y, 0.0, 1.0, &targets, 1e-12, 1e-16).unwrap();
        for (t, y) in targets.iter().zip(&ys) {
            assert!((y - t.exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn anchor_target_returns_initial_value() {
        let ys = integrate_to(|_, y| y, 1.5, 3.25, &[1.5], 1e-10, 1e-12).unwrap();
        assert_eq!(ys, vec![3.25]);
        let ys = integrate_to(|_, y| y, 0.0, 1.0, &[0.0, 1.0], 1e-12, 1e-14).unwrap();
        assert_eq!(ys[0], 1.0);
        assert!((ys[1] - 1.0f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn logistic_matches_closed_form() {
        let ys = integrate_to(|_, y| y * (1.0 - y), 0.0, 0.5, &[3.0], 1e-13, 1e-16).unwrap();
        let exact = 1.0 / (1.0 + (-3.0f64).exp());
        assert!((ys[0] - exact).abs() < 1e-11);
    }

    #[test]
    fn explicit_x_dependence() {
        let targets: Vec<f64> = (1..=8).map(|k| k as f64 * 0.7).collect();
        let ys = integrate_to(|x, _| x.cos(), 0.0, 0.0, &targets, 1e-12, 1e-14).unwrap();
        for (t, y) in targets.iter().zip(&ys) {
            assert!((y - t.sin()).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_unordered_targets() {
        assert!(integrate_to(|_, y| y, 0.0, 1.0, &[1.0, 0.5], 1e-10, 1e-12).is_err());
        assert!(integrate_to(|_, y| y, 0.0, 1.0, &[-1.0, 1.0], 1e-10, 1e-12).is_err());
        assert!(integrate_to(|_, y| y, 0.0, 1.0, &[], 1e-10, 1e-12).is_err());
    }

    #[test]
    fn singularity_reports_no_convergence() {
        let res = integrate_to(|x, _| 1.0 / (1.0 - x), 0.0, 0.0, &[1.0], 1e-10, 1e-12);
        assert!(matches!(res, Err(Error::NoConvergence(_))));
    }
}
