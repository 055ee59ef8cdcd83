//! Uniform sample grid with a Simpson integrator.

use crate::error::{Error, Result};

/// Uniform grid `x_i = x_min + i h`, `i = 0..n_points`.
///
/// The point count is `round((x_max - x_min)/h) + 1`, so the last point sits
/// at `x_min + (n_points - 1) h`, which equals `x_max` up to rounding of the
/// requested span to a whole number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub h: f64,
    pub n_points: usize,
}

impl Grid {
    /// Builds a grid; requires a finite span, `h > 0`, and at least 64 points.
    pub fn new(x_min: f64, x_max: f64, h: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && h.is_finite()) {
            return Err(Error::InvalidParams("grid bounds must be finite".into()));
        }
        if h <= 0.0 || x_max <= x_min {
            return Err(Error::InvalidParams(format!(
                "need x_max > x_min and h > 0, got [{x_min}, {x_max}] with h = {h}"
            )));
        }
        let n_points = ((x_max - x_min) / h).round() as usize + 1;
        if n_points < 64 {
            return Err(Error::InvalidParams(format!(
                "grid has {n_points} points, need at least 64"
            )));
        }
        Ok(Self { x_min, x_max, h, n_points })
    }

    /// i-th sample position.
    pub fn point(&self, i: usize) -> f64 {
        self.x_min + self.h * i as f64
    }

    /// All sample positions in order.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// Samples a function on the grid.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.points().map(f).collect()
    }

    /// Composite Simpson integral of grid samples.
    ///
    /// With an even sample count the last cell is handled by the trapezoid
    /// rule; everything else uses the 1-4-2-...-4-1 weights.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.n_points, "sample count != grid size");
        let n = values.len();
        let (simpson_end, tail) = if n % 2 == 1 {
            (n, 0.0)
        } else {
            (n - 1, 0.5 * self.h * (values[n - 2] + values[n - 1]))
        };
        let mut acc = values[0] + values[simpson_end - 1];
        for (i, &v) in values.iter().enumerate().take(simpson_end - 1).skip(1) {
            acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        acc * self.h / 3.0 + tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_bounds() {
        assert!(Grid::new(0.0, 0.0, 0.1).is_err());
        assert!(Grid::new(0.0, 1.0, -0.1).is_err());
        assert!(Grid::new(0.0, 1.0, 0.5).is_err());
        assert!(Grid::new(f64::NAN, 1.0, 0.1).is_err());
    }

    #[test]
    fn points_cover_span() {
        let g = Grid::new(-2.0, 2.0, 0.01).unwrap();
        assert_eq!(g.n_points, 401);
        assert!((g.point(400) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_smooth_function() {
        // Span chosen as an exact multiple of h so the last point is x_max.
        let g = Grid::new(0.0, 3.0, 1.0 / 1024.0).unwrap();
        let vals = g.sample(f64::sin);
        let got = g.integrate(&vals);
        let exact = 1.0 - 3.0f64.cos();
        assert!((got - exact).abs() < 1e-10, "simpson error {:e}", got - exact);
    }

    #[test]
    fn integrates_even_point_count() {
        // 0.1 step over [0, 9.9] gives 100 points; integral of x is 49.005.
        let g = Grid::new(0.0, 9.9, 0.1).unwrap();
        assert_eq!(g.n_points % 2, 0);
        let vals = g.sample(|x| x);
        assert!((g.integrate(&vals) - 49.005).abs() < 1e-10);
    }
}
