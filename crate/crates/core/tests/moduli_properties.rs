use std::f64::consts::{PI, TAU};

use onecircle::levelset::{level_point, LevelSpec};
use onecircle::moduli::{classify, hexagonal_omega, rotate6, solve_parallelogram, RegionId};
use onecircle::{f_value, Complex64};
use proptest::prelude::*;

fn on_level(s: f64, theta: f64) -> Complex64 {
    level_point(LevelSpec::new(s).unwrap(), theta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parallelogram_condition_holds(s in 0.05f64..0.95, theta in 0.0f64..TAU) {
        let c = on_level(s, theta);
        let p = solve_parallelogram(c).unwrap();
        prop_assert!((f_value(p.c1()) - f_value(c)).abs() < 1e-9);
        prop_assert!((f_value(p.c2()) - f_value(c)).abs() < 1e-9);
        prop_assert_eq!(p.c1(), c + p.c2());
        prop_assert!(p.omega().im > 0.0);
        prop_assert!(p.c1().im.abs() < PI && p.c2().im.abs() < PI);
    }

    #[test]
    fn omega_is_constant_on_the_fiber(s in 0.01f64..0.99, theta in 0.0f64..TAU) {
        let c = on_level(s, theta);
        let a = solve_parallelogram(c).unwrap().omega();
        let b = solve_parallelogram(-c).unwrap().omega();
        prop_assert!((a - b).norm() < 1e-9);
    }

    #[test]
    fn rotation_has_order_six(s in 0.02f64..0.98, theta in 0.0f64..TAU) {
        let c = on_level(s, theta);
        let mut z = c;
        for k in 1..=6 {
            z = rotate6(z).unwrap();
            if k == 3 {
                prop_assert!((z + c).norm() < 1e-6 * c.norm());
            }
        }
        prop_assert!((z - c).norm() < 1e-6 * c.norm());
    }
}

#[test]
fn dihedral_action_on_regions() {
    let mut seen = std::collections::HashSet::new();
    for i in 0..6 {
        for j in 0..24 {
            let s = 0.1 + 0.15 * i as f64;
            let theta = TAU * (j as f64 + 0.37) / 24.0;
            let c = on_level(s, theta);
            let region = classify(c).unwrap();
            seen.insert(region);
            assert_eq!(
                classify(rotate6(c).unwrap()).unwrap(),
                region.rotated(1),
                "c = {c}"
            );
            assert_eq!(classify(c.conj()).unwrap(), region.conjugated(), "c = {c}");
        }
    }
    for k in 1..=12 {
        assert!(seen.contains(&RegionId::Region(k)), "C{k} never sampled");
    }
}

#[test]
fn omega_tends_to_hexagonal_value() {
    for j in 0..36 {
        let theta = TAU * j as f64 / 36.0;
        let errors: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&r| {
                (solve_parallelogram(Complex64::from_polar(r, theta))
                    .unwrap()
                    .omega()
                    - hexagonal_omega())
                .norm()
            })
            .collect();
        assert!(
            errors.windows(2).all(|w| w[1] < w[0]),
            "ray {j}: {errors:?}"
        );
    }
}
