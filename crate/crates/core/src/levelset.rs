//! The level function `f(z) = 1 - cos(Im z / 2) / cosh(Re z / 2)` on the strip
//! `|Im z| < pi` and the star-shaped parametrization of its level curves.
//!
//! Every level curve `L_s`, `0 < s < 1`, is a strictly convex loop around the
//! origin, symmetric about both axes. Points on it are addressed by their polar
//! angle `theta`; [`level_radius`] returns the unique radius on that ray.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ComplexValue;

/// Levels at or above this value are rejected: the real radius of `L_s` grows
/// like `2 ln(2 / (1 - s))` and the curve leaves the resolvable range.
pub const MAX_LEVEL: f64 = 1.0 - 1e-12;

/// Absolute residual required of [`level_radius`].
pub const LEVEL_TOLERANCE: f64 = 1e-12;

const MAX_STEPS: usize = 200;

// Beyond this |Re z| the direct sinh/cosh form loses range; switch to the
// exponentially rescaled quotient.
const RESCALE_THRESHOLD: f64 = 40.0;

/// A level of `f`, `0 <= s < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LevelSpec(f64);

impl LevelSpec {
    pub fn new(s: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&s) {
            return Err(Error::LevelOutOfRange(s));
        }
        Ok(LevelSpec(s))
    }

    /// The level on which `z` lies.
    pub fn of(z: ComplexValue) -> Result<Self> {
        Self::new(f_value(z))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Rejects the point level `s = 0` and levels too close to 1.
    pub(crate) fn regular(self) -> Result<f64> {
        let s = self.0;
        if s == 0.0 {
            Err(Error::DegenerateLevel(s))
        } else if s >= MAX_LEVEL {
            Err(Error::LevelOutOfRange(s))
        } else {
            Ok(s)
        }
    }
}

/// `1 / cosh(x / 2)` without overflow for large `|x|`.
fn sech_half(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * (-x.abs() / 2.0).exp() / (1.0 + e)
}

/// `cos(Im z / 2) / cosh(Re z / 2)`, i.e. `1 - f(z)`.
pub fn level_ratio(z: ComplexValue) -> f64 {
    (z.im / 2.0).cos() * sech_half(z.re)
}

/// The level function `f(z) = 1 - cos(Im z / 2) / cosh(Re z / 2)`.
///
/// Near the origin the value is computed as
/// `2 (sinh^2(x/4) + sin^2(y/4)) / cosh(x/2)`, which has no cancellation, so
/// `f` keeps full relative precision down to `|z| ~ 1e-150`. For large `|Re z|`
/// the cosh is rescaled by `exp(-|Re z| / 2)`.
///
/// `f` lies in `[0, 1)` on the strip and is `>= 1` for `pi <= |Im z| < 2 pi`.
pub fn f_value(z: ComplexValue) -> f64 {
    if z.re.abs() <= RESCALE_THRESHOLD {
        let sh = (z.re / 4.0).sinh();
        let sn = (z.im / 4.0).sin();
        2.0 * (sh * sh + sn * sn) / (z.re / 2.0).cosh()
    } else {
        1.0 - level_ratio(z)
    }
}

/// Value and gradient `(df/dx, df/dy)` of `f`.
fn f_with_gradient(z: ComplexValue) -> (f64, f64, f64) {
    let f = f_value(z);
    let sech = sech_half(z.re);
    let dx = 0.5 * (1.0 - f) * (z.re / 2.0).tanh();
    let dy = 0.5 * (z.im / 2.0).sin() * sech;
    (f, dx, dy)
}

/// Radius of `L_s` on the positive real axis, `2 arccosh(1 / (1 - s))`.
pub fn real_axis_radius(s: f64) -> f64 {
    // arccosh(1 + e) = ln(1 + e + sqrt(e (2 + e))), e = s / (1 - s)
    let e = s / (1.0 - s);
    2.0 * (e + (e * (2.0 + e)).sqrt()).ln_1p()
}

/// Radius of `L_s` on the positive imaginary axis, `2 arccos(1 - s)`.
pub fn imaginary_axis_radius(s: f64) -> f64 {
    // arccos(1 - s) = 2 arcsin(sqrt(s / 2)), exact for small s
    4.0 * (s / 2.0).sqrt().asin()
}

/// The unique `r > 0` with `f(r e^{i theta}) = s`.
///
/// The ray is bracketed between the origin and the smaller of the sum of the
/// two axis radii and the strip boundary, then refined by Newton steps that
/// fall back to bisection whenever a step leaves the bracket.
pub fn level_radius(level: LevelSpec, theta: f64) -> Result<f64> {
    let s = level.regular()?;
    if !theta.is_finite() {
        return Err(Error::InvalidArgument(format!("theta = {theta}")));
    }
    let (sin, cos) = theta.sin_cos();
    let rx = real_axis_radius(s);
    let ry = imaginary_axis_radius(s);

    let mut lo = 0.0;
    let mut hi = rx + ry;
    if sin.abs() * hi >= PI {
        hi = PI / sin.abs();
    }
    let eval = |r: f64| {
        let (f, dx, dy) = f_with_gradient(Complex64::new(r * cos, r * sin));
        (f - s, dx * cos + dy * sin)
    };
    if eval(hi).0 <= 0.0 {
        return Err(Error::Numeric(format!(
            "level_radius: no bracket for s = {s}, theta = {theta}: f({hi}) <= s"
        )));
    }

    // Start from the ellipse through the axis points.
    let mut r = 1.0 / ((cos / rx).powi(2) + (sin / ry).powi(2)).sqrt();
    if !(r > lo && r < hi) {
        r = 0.5 * (lo + hi);
    }
    for _ in 0..MAX_STEPS {
        let (g, dg) = eval(r);
        if g == 0.0 {
            break;
        }
        if g < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let newton = r - g / dg;
        let next = if dg > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - r).abs() <= 2.0 * f64::EPSILON * r || hi - lo <= 4.0 * f64::EPSILON * hi;
        r = next;
        if done {
            break;
        }
    }

    let residual = (eval(r).0).abs();
    if residual >= LEVEL_TOLERANCE {
        return Err(Error::Numeric(format!(
            "level_radius: residual {residual:e} at s = {s}, theta = {theta}, r = {r}"
        )));
    }
    Ok(r)
}

/// `level_radius(s, theta) * e^{i theta}`.
pub fn level_point(level: LevelSpec, theta: f64) -> Result<ComplexValue> {
    Ok(Complex64::from_polar(level_radius(level, theta)?, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn lv(s: f64) -> LevelSpec {
        LevelSpec::new(s).unwrap()
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_value(Complex64::new(0.0, 0.0)), 0.0);
        let v = f_value(Complex64::new(0.0, 2.0 * PI / 3.0));
        assert!((v - 0.5).abs() < 1e-15, "{v}");
        let x = 2.0 * (2.0 + 3f64.sqrt()).ln();
        let v = f_value(Complex64::new(x, 0.0));
        assert!((v - 0.5).abs() < 1e-15, "{v}");
    }

    #[test]
    fn f_branches_agree_at_threshold() {
        for &y in &[0.0, 1.0, -2.5, 3.0] {
            let z = Complex64::new(RESCALE_THRESHOLD, y);
            let direct = f_value(z);
            let rescaled = 1.0 - level_ratio(z);
            assert!((direct - rescaled).abs() < 1e-15);
        }
    }

    #[test]
    fn f_survives_huge_real_part() {
        for &x in &[700.0, -1000.0, 1400.0] {
            let z = Complex64::new(x, 1.0);
            let v = f_value(z);
            assert!(v.is_finite() && v <= 1.0 && v > 0.999_999);
            let ratio = level_ratio(z);
            assert!(ratio > 0.0 && ratio.is_finite());
        }
    }

    #[test]
    fn f_rejects_outside_strip() {
        for &y in &[PI, 4.0, -5.5, 2.0 * PI - 1e-9] {
            for &x in &[0.0, 1.0, -3.0, 60.0] {
                assert!(f_value(Complex64::new(x, y)) >= 1.0 - 1e-15);
            }
        }
    }

    #[test]
    fn f_small_argument_keeps_relative_precision() {
        // f ~ |z|^2 / 8 near the origin
        let z = Complex64::new(3e-6, -4e-6);
        let v = f_value(z);
        assert!((v / (25e-12 / 8.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for &(x, y) in &[(0.3, 0.7), (-1.2, 2.0), (5.0, -0.4), (45.0, 1.0)] {
            let z = Complex64::new(x, y);
            let (_, dx, dy) = f_with_gradient(z);
            let h = 1e-6;
            let fx = (f_value(z + h) - f_value(z - h)) / (2.0 * h);
            let fy = (f_value(z + Complex64::new(0.0, h)) - f_value(z - Complex64::new(0.0, h)))
                / (2.0 * h);
            assert!((dx - fx).abs() < 1e-8, "{dx} vs {fx}");
            assert!((dy - fy).abs() < 1e-8, "{dy} vs {fy}");
        }
    }

    #[test]
    fn axis_radii_closed_forms() {
        let r = level_radius(lv(0.5), 0.0).unwrap();
        assert!((r - 2.0 * (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
        assert!((r - 2.633916).abs() < 1e-6);
        let r = level_radius(lv(0.5), FRAC_PI_2).unwrap();
        assert!((r - 2.0 * PI / 3.0).abs() < 1e-12);
        for &s in &[1e-10, 0.01, 0.3, 0.99, 1.0 - 1e-8] {
            assert!((real_axis_radius(s) - 2.0 * (1.0 / (1.0 - s)).acosh()).abs() < 1e-6);
            assert!((imaginary_axis_radius(s) - 2.0 * (1.0 - s).acos()).abs() < 1e-6);
        }
    }

    #[test]
    fn diagonal_radius_against_ray_scan() {
        // Oracle: fine scan of f along the ray, then local linear interpolation.
        let s = 0.9;
        let theta = PI / 4.0;
        let (sin, cos) = theta.sin_cos();
        let n = 2_000_000;
        let rmax = 10.0;
        let mut prev = (0.0, -s);
        let mut oracle = None;
        for k in 1..=n {
            let r = rmax * k as f64 / n as f64;
            let g = f_value(Complex64::new(r * cos, r * sin)) - s;
            if prev.1 < 0.0 && g >= 0.0 {
                oracle = Some(prev.0 + (r - prev.0) * (-prev.1) / (g - prev.1));
                break;
            }
            prev = (r, g);
        }
        let oracle = oracle.expect("scan found no crossing");
        let r = level_radius(lv(s), theta).unwrap();
        assert!((r - oracle).abs() < 1e-9, "{r} vs {oracle}");
        assert!((f_value(Complex64::from_polar(r, theta)) - s).abs() < 1e-12);
    }

    #[test]
    fn level_point_examples() {
        let p = level_point(lv(0.5), FRAC_PI_2).unwrap();
        assert!(p.re.abs() < 1e-15 && (p.im - 2.0 * PI / 3.0).abs() < 1e-12);
        let p = level_point(lv(0.5), 0.0).unwrap();
        assert!((p.re - 2.633916).abs() < 1e-6 && p.im == 0.0);
        let p = level_point(lv(0.5), PI).unwrap();
        assert!((p.re + 2.633916).abs() < 1e-6 && p.im.abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_out_of_range_levels() {
        assert_eq!(level_radius(lv(0.0), 0.3), Err(Error::DegenerateLevel(0.0)));
        assert!(matches!(
            level_radius(lv(1.0 - 1e-13), 0.3),
            Err(Error::LevelOutOfRange(_))
        ));
        assert!(LevelSpec::new(1.0).is_err());
        assert!(LevelSpec::new(-0.1).is_err());
        assert!(LevelSpec::new(f64::NAN).is_err());
        assert!(level_radius(lv(0.5), f64::NAN).is_err());
    }

    #[test]
    fn tiny_and_extreme_levels_resolve() {
        for &s in &[1e-12, 1e-6, 0.999, 1.0 - 1e-8, 1.0 - 1e-11] {
            for k in 0..16 {
                let theta = k as f64 * PI / 8.0 + 0.01;
                let r = level_radius(lv(s), theta).unwrap();
                let z = Complex64::from_polar(r, theta);
                assert!(z.im.abs() < PI);
                assert!((f_value(z) - s).abs() < LEVEL_TOLERANCE);
            }
        }
    }
}
