mod common;

use common::*;
use padelab::pade::{self, PadeError};
use padelab::{Complex64, PowerSeries};
use proptest::prelude::*;

fn coeff(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| Complex64::from_polar(m, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accuracy_through_order(cs in prop::collection::vec(coeff(0.0, 1.0), 25), l in 0usize..=12, m in 0usize..=12) {
        let s = PowerSeries::new(cs).unwrap();
        prop_assert_eq!(check_accuracy_through_order(&s, l, m), Ok(()));
        prop_assert_eq!(check_accuracy_through_order(&s, m, m), Ok(()));
    }

    #[test]
    fn rational_functions_reproduced(
        zeros in prop::collection::vec(coeff(0.3, 3.0), 0..6),
        poles in prop::collection::vec(coeff(0.8, 3.0), 1..6),
        probes in prop::collection::vec(coeff(0.0, 0.5), 20),
    ) {
        prop_assert_eq!(check_rational_exactness(&zeros, &poles, &probes), Ok(()));
    }

    #[test]
    fn scale_covariance(cs in prop::collection::vec(coeff(0.05, 1.0), 21), m in 1usize..=10, s in coeff(0.01, 100.0)) {
        prop_assert_eq!(check_scale_covariance(&PowerSeries::new(cs).unwrap(), m, s), Ok(()));
    }

    #[test]
    fn reciprocal_plane(cs in prop::collection::vec(coeff(0.05, 1.0), 21), m in 1usize..=10) {
        if let Ok((_, rs)) = pade::diagonal_roots(&PowerSeries::new(cs).unwrap(), m) {
            prop_assert_eq!(check_reciprocal_plane(&rs), Ok(()));
        }
    }
}

#[test]
fn pole_set_unchanged_by_scaling() {
    let s = twobus_series(24);
    let (_, a) = pade::diagonal_roots(&s, 12).unwrap();
    let (_, b) = pade::diagonal_roots(&s.scale(c(-2.0, 3.0)), 12).unwrap();
    // conditioning degrades with |α|: tight near the cut, relative far out
    let near = |v: &[Complex64]| v.iter().copied().filter(|z| z.norm() <= 1.5).collect::<Vec<_>>();
    assert!(same_set(&near(&a.poles_alpha), &near(&b.poles_alpha), 1e-6));
    let scale = a.poles_alpha.iter().map(|z| z.norm()).fold(1.0, f64::max);
    assert!(same_set(&a.poles_alpha, &b.poles_alpha, 1e-5 * scale));
}

fn twobus_series(order: usize) -> PowerSeries {
    padelab::hem::hem_series(&twobus(), order).unwrap().voltage(2).unwrap().clone()
}

#[test]
fn twobus_poles_on_real_axis_cut() {
    // [M/M] poles of a Stieltjes-like function sit on the cut (−∞, −1/3] ∪ [1, ∞)
    let (_, rs) = pade::diagonal_roots(&twobus_series(16), 8).unwrap();
    assert_eq!(check_reciprocal_plane(&rs), Ok(()));
    for z in &rs.poles_inv {
        assert!(z.re >= -3.0 - 1e-6 && z.re <= 1.0 + 1e-6, "pole image {z}");
    }
}

#[test]
fn insufficient_order() {
    let s = twobus_series(9);
    assert_eq!(
        pade::build_pade(&s, 5, 5).unwrap_err(),
        PadeError::InsufficientOrder { l: 5, m: 5, need: 10, have: 9 }
    );
}

#[test]
fn zero_degree_denominator_is_truncation() {
    let s = twobus_series(6);
    let pa = pade::build_pade(&s, 6, 0).unwrap();
    assert_eq!(pa.numerator.coeffs(), &s.coeffs()[..pa.numerator.coeffs().len()]);
    let z = c(0.1, 0.05);
    assert!((pade::eval_pade(&pa, z).unwrap() - s.eval(z)).norm() < 1e-15);
}

