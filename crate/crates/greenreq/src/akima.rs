//! Akima's original piecewise-cubic interpolation (1970 variant).
//!
//! Compared to a global cubic spline, the Akima construction weights each
//! knot slope by neighbouring slope differences, which keeps the curve from
//! oscillating on uneven rate-distortion data. Boundary slopes come from
//! quadratic ghost-point extension, so collinear data reproduces the line
//! exactly and the result is C1 everywhere.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AkimaError {
    #[error("need at least 2 points to interpolate, got {0}")]
    TooFewPoints(usize),
    #[error("x values must be strictly increasing: x[{index}] = {x} does not exceed its predecessor")]
    NonIncreasingX { index: usize, x: f64 },
    #[error("point {index} is not finite")]
    NonFinite { index: usize },
    #[error("query x = {x} is outside the knot domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
}

/// One-shot interpolation at `x`, which must lie within the knot domain.
pub fn akima_interpolate(knots: &[(f64, f64)], x: f64) -> Result<f64, AkimaError> {
    let spline = AkimaSpline::new(knots)?;
    let (lo, hi) = spline.domain();
    if !(lo..=hi).contains(&x) {
        return Err(AkimaError::OutOfDomain { x, lo, hi });
    }
    Ok(spline.evaluate(x))
}

/// Interpolating spline through a strictly-increasing sequence of knots.
#[derive(Debug, Clone)]
pub struct AkimaSpline {
    xs: Vec<f64>,
    /// Per segment: cubic coefficients [c0, c1, c2, c3] in (x - x_i).
    coeffs: Vec<[f64; 4]>,
}

impl AkimaSpline {
    pub fn new(points: &[(f64, f64)]) -> Result<Self, AkimaError> {
        let n = points.len();
        if n < 2 {
            return Err(AkimaError::TooFewPoints(n));
        }
        for (index, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(AkimaError::NonFinite { index });
            }
            if index > 0 && x <= points[index - 1].0 {
                return Err(AkimaError::NonIncreasingX { index, x });
            }
        }

        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();

        // Segment slopes, extended by two quadratic ghost segments per side:
        // ext[i + 2] is the slope of [x_i, x_{i+1}].
        let mut ext = vec![0.0; n + 3];
        for i in 0..n - 1 {
            ext[i + 2] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        if n == 2 {
            // A single segment has no curvature information; interpolate it
            // linearly.
            let m = ext[2];
            return Ok(AkimaSpline {
                xs,
                coeffs: vec![[ys[0], m, 0.0, 0.0]],
            });
        }
        ext[1] = 2.0 * ext[2] - ext[3];
        ext[0] = 2.0 * ext[1] - ext[2];
        ext[n + 1] = 2.0 * ext[n] - ext[n - 1];
        ext[n + 2] = 2.0 * ext[n + 1] - ext[n];

        // Knot slope: slopes of the two adjacent segments, each weighted by
        // the slope variation on the far side. Both weights exactly zero
        // (locally straight on both sides) averages the adjacent slopes.
        let knot_slope = |i: usize| -> f64 {
            let (m_prev2, m_prev, m_next, m_next2) =
                (ext[i], ext[i + 1], ext[i + 2], ext[i + 3]);
            let w_left = (m_next2 - m_next).abs();
            let w_right = (m_prev - m_prev2).abs();
            if w_left + w_right == 0.0 {
                (m_prev + m_next) / 2.0
            } else {
                (w_left * m_prev + w_right * m_next) / (w_left + w_right)
            }
        };

        let mut coeffs = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let h = xs[i + 1] - xs[i];
            let m = ext[i + 2];
            let (t0, t1) = (knot_slope(i), knot_slope(i + 1));
            coeffs.push([
                ys[i],
                t0,
                (3.0 * m - 2.0 * t0 - t1) / h,
                (t0 + t1 - 2.0 * m) / (h * h),
            ]);
        }
        Ok(AkimaSpline { xs, coeffs })
    }

    /// Interpolation domain `[first knot, last knot]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Evaluates the spline; outside the domain the boundary cubic extends.
    pub fn evaluate(&self, x: f64) -> f64 {
        let seg = self
            .xs
            .partition_point(|&knot| knot <= x)
            .saturating_sub(1)
            .min(self.coeffs.len() - 1);
        let u = x - self.xs[seg];
        let [c0, c1, c2, c3] = self.coeffs[seg];
        c0 + u * (c1 + u * (c2 + u * c3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} != {b} (tol {tol})");
    }

    #[test]
    fn reproduces_knots_exactly() {
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 4.0), (3.0, 9.0)];
        let s = AkimaSpline::new(&pts).unwrap();
        for (x, y) in pts {
            assert_eq!(s.evaluate(x), y);
        }
    }

    #[test]
    fn quadratic_data_midpoints() {
        // On y = x^2 samples the ghost-point extension makes the knot
        // slopes exactly 2x, so the interpolant reproduces the parabola.
        let pts = [(0.0, 0.0), (1.0, 1.0), (2.0, 4.0), (3.0, 9.0)];
        let s = AkimaSpline::new(&pts).unwrap();
        assert_close(s.evaluate(2.5), 6.25, 1e-12);
        assert_close(s.evaluate(1.5), 2.25, 1e-12);
        assert_close(s.evaluate(0.5), 0.25, 1e-12);
    }

    #[test]
    fn exact_on_collinear_data() {
        let pts: Vec<(f64, f64)> = [0.0, 0.7, 1.1, 2.9, 4.0, 7.5]
            .iter()
            .map(|&x| (x, 2.0 * x + 1.0))
            .collect();
        let s = AkimaSpline::new(&pts).unwrap();
        let mut x = 0.0;
        while x <= 7.5 {
            assert_close(s.evaluate(x), 2.0 * x + 1.0, 1e-12);
            x += 0.083;
        }
    }

    #[test]
    fn two_points_fall_back_to_linear() {
        let s = AkimaSpline::new(&[(1.0, 3.0), (3.0, 7.0)]).unwrap();
        assert_close(s.evaluate(2.0), 5.0, 1e-12);
        assert_close(s.evaluate(1.5), 4.0, 1e-12);
    }

    #[test]
    fn continuous_in_value_and_slope_at_knots() {
        let pts = [
            (0.0, 0.3),
            (0.9, 1.7),
            (2.0, 1.1),
            (3.4, 4.0),
            (4.1, 3.9),
            (6.0, 8.2),
        ];
        let s = AkimaSpline::new(&pts).unwrap();
        let h = 1e-7;
        for &(x, _) in &pts[1..pts.len() - 1] {
            let left = (s.evaluate(x) - s.evaluate(x - h)) / h;
            let right = (s.evaluate(x + h) - s.evaluate(x)) / h;
            assert_close(left, right, 1e-5);
            assert_close(s.evaluate(x - 1e-12), s.evaluate(x + 1e-12), 1e-9);
        }
    }

    #[test]
    fn one_shot_interpolation_enforces_the_domain() {
        let knots = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)];
        assert_close(akima_interpolate(&knots, 1.5).unwrap(), 1.5, 1e-12);
        assert_close(akima_interpolate(&knots, 0.0).unwrap(), 0.0, 1e-12);
        assert_close(akima_interpolate(&knots, 3.0).unwrap(), 3.0, 1e-12);
        assert!(matches!(
            akima_interpolate(&knots, 3.1),
            Err(AkimaError::OutOfDomain { .. })
        ));
        assert!(matches!(
            akima_interpolate(&knots, -0.1),
            Err(AkimaError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            AkimaSpline::new(&[(0.0, 1.0)]).unwrap_err(),
            AkimaError::TooFewPoints(1),
        );
        assert!(matches!(
            AkimaSpline::new(&[(0.0, 1.0), (0.0, 2.0)]),
            Err(AkimaError::NonIncreasingX { index: 1, .. })
        ));
        assert!(matches!(
            AkimaSpline::new(&[(1.0, 1.0), (0.5, 2.0), (2.0, 0.0)]),
            Err(AkimaError::NonIncreasingX { index: 1, .. })
        ));
        assert!(matches!(
            AkimaSpline::new(&[(0.0, f64::NAN), (1.0, 2.0)]),
            Err(AkimaError::NonFinite { index: 0 })
        ));
    }
}
