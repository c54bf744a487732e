use fracbeam::operators::{vo_rc_derivative, vo_riesz_integral, Horizon, PiecewiseField};
use proptest::prelude::*;

fn nodes(m: usize) -> Vec<f64> {
    (0..=m).map(|i| i as f64 / m as f64).collect()
}

fn horizon() -> Horizon {
    Horizon::new(0.2, 1.0).unwrap()
}

proptest! {
    #[test]
    fn constants_are_annihilated(k in -10.0f64..10.0, x in 0.0f64..=1.0, a in 0.01f64..=1.0, m in 2usize..60) {
        let f = PiecewiseField::linear(nodes(m), vec![k; m + 1]).unwrap();
        prop_assert_eq!(vo_rc_derivative(&f, x, a, &horizon()).unwrap(), 0.0);
    }

    #[test]
    fn affine_fields_have_unit_derivative(c in -10.0f64..10.0, k in -1.0f64..1.0, x in 0.0f64..=1.0, a in 0.05f64..=1.0, m in 2usize..60) {
        let n = nodes(m);
        let vals = n.iter().map(|s| c * s + k).collect();
        let f = PiecewiseField::linear(n, vals).unwrap();
        let d = vo_rc_derivative(&f, x, a, &horizon()).unwrap();
        prop_assert!((d - c).abs() <= 1e-12 * c.abs().max(1.0));
    }

    #[test]
    fn derivative_is_linear(
        u in proptest::collection::vec(-1.0f64..1.0, 21),
        v in proptest::collection::vec(-1.0f64..1.0, 21),
        s in -3.0f64..3.0,
        x in 0.0f64..=1.0,
        a in 0.1f64..=1.0,
    ) {
        let fu = PiecewiseField::linear(nodes(20), u.clone()).unwrap();
        let fv = PiecewiseField::linear(nodes(20), v.clone()).unwrap();
        let mix: Vec<f64> = u.iter().zip(&v).map(|(p, q)| p + s * q).collect();
        let fm = PiecewiseField::linear(nodes(20), mix).unwrap();
        let h = horizon();
        let lhs = vo_rc_derivative(&fm, x, a, &h).unwrap();
        let rhs = vo_rc_derivative(&fu, x, a, &h).unwrap() + s * vo_rc_derivative(&fv, x, a, &h).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs()));
    }

    #[test]
    fn mirror_symmetry(vals in proptest::collection::vec(-1.0f64..1.0, 21), x in 0.0f64..=1.0, a in 0.1f64..=1.0) {
        let f = PiecewiseField::linear(nodes(20), vals.clone()).unwrap();
        let rev: Vec<f64> = vals.iter().rev().copied().collect();
        let g = PiecewiseField::linear(nodes(20), rev).unwrap();
        let h = horizon();
        let d = vo_rc_derivative(&f, x, a, &h).unwrap();
        let dm = vo_rc_derivative(&g, 1.0 - x, a, &h).unwrap();
        prop_assert!((d + dm).abs() <= 1e-9 * (1.0 + d.abs()));
    }
}

#[test]
fn riesz_integral_is_positive_on_positive_fields() {
    for x in [0.01, 0.3, 0.5, 0.99] {
        let v = vo_riesz_integral(|s: f64| 1.0 + s, x, |s: f64| 0.8 + 0.1 * s, &horizon()).unwrap();
        assert!(v > 0.0);
    }
}
