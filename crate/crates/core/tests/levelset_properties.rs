use std::f64::consts::{PI, TAU};

use onecircle::levelset::{f_value, imaginary_axis_radius, level_point, level_radius, LevelSpec};
use onecircle::Complex64;
use proptest::prelude::*;

fn lv(s: f64) -> LevelSpec {
    LevelSpec::new(s).unwrap()
}

proptest! {
    #[test]
    fn f_is_symmetric(x in -50.0f64..50.0, y in -3.1f64..3.1) {
        let z = Complex64::new(x, y);
        let v = f_value(z);
        prop_assert_eq!(v, f_value(-z));
        prop_assert_eq!(v, f_value(z.conj()));
        prop_assert_eq!(v, f_value(-z.conj()));
        prop_assert!((0.0..1.0).contains(&v));
    }

    #[test]
    fn level_curve_has_axis_symmetry(s in 0.01f64..0.99, theta in 0.0f64..TAU) {
        let r = level_radius(lv(s), theta).unwrap();
        prop_assert!((r - level_radius(lv(s), PI - theta).unwrap()).abs() < 1e-12);
        prop_assert!((r - level_radius(lv(s), -theta).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn level_points_stay_in_the_strip(s in 1e-6f64..0.999_999, theta in 0.0f64..TAU) {
        let z = level_point(lv(s), theta).unwrap();
        prop_assert!(z.im.abs() < PI);
        prop_assert!(z.im.abs() <= imaginary_axis_radius(s) + 1e-12);
        prop_assert!((f_value(z) - s).abs() < 1e-12);
    }
}

#[test]
fn f_increases_along_rays() {
    for i in 0..360 {
        let theta = TAU * i as f64 / 360.0;
        let (sin, cos) = theta.sin_cos();
        let reach = if sin.abs() > 1e-12 {
            (0.999 * PI / sin.abs()).min(20.0)
        } else {
            20.0
        };
        let mut prev = 0.0;
        for j in 1..=100 {
            let r = reach * j as f64 / 100.0;
            let v = f_value(Complex64::new(r * cos, r * sin));
            assert!(v > prev, "theta = {theta}, r = {r}: {v} <= {prev}");
            prev = v;
        }
    }
}

#[test]
fn level_curves_are_strictly_convex() {
    for &s in &[0.1, 0.5, 0.9] {
        let n = 720;
        let pts: Vec<Complex64> = (0..n)
            .map(|k| level_point(lv(s), TAU * k as f64 / n as f64).unwrap())
            .collect();
        for k in 0..n {
            let a = pts[k];
            let b = pts[(k + 1) % n];
            let c = pts[(k + 2) % n];
            let cross = ((b - a).conj() * (c - b)).im;
            assert!(cross > 0.0, "s = {s}, k = {k}: cross = {cross}");
        }
    }
}
