mod common;

use common::*;
use padelab::diagnostics::{self, DiagnoseOptions};
use padelab::pade::{RootKind, RootSet};
use padelab::potential;
use padelab::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geometric_cf_recovered(ratio in 0.01..0.99f64, c0 in 1e-3..1e3f64) {
        prop_assert_eq!(check_geometric_cf(ratio, c0, 8), Ok(()));
    }

    #[test]
    fn linear_slope_recovered(slope in 0.1..3.0f64, alphas in prop::collection::vec(0.01..0.3f64, 3..8)) {
        let mut a = alphas.clone();
        a.sort_by(f64::total_cmp);
        a.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
        prop_assume!(a.len() >= 3);
        prop_assert_eq!(check_linear_slope(slope, &a), Ok(()));
    }

    #[test]
    fn ks_bounded(pts in prop::collection::vec((-4.0..2.0f64, -0.5..0.5f64), 1..40)) {
        let rs = RootSet { poles_inv: pts.iter().map(|p| c(p.0, p.1)).collect(), ..Default::default() };
        prop_assert_eq!(check_ks(&rs, (-3.0, 1.0)), Ok(()));
        prop_assert_eq!(check_charges_normalized(&rs), Ok(()));
    }

    #[test]
    fn ks_quantile_bound(n in 1usize..200, a in -5.0..0.0f64, len in 0.1..10.0f64) {
        prop_assert_eq!(check_ks_quantiles(a, a + len, n), Ok(()));
    }

    #[test]
    fn symmetry_zero_iff_symmetric(pts in prop::collection::vec((-3.0..-1.0f64, -0.3..0.3f64), 1..10)) {
        let z: Vec<Complex64> = pts.iter().map(|p| c(p.0, p.1)).collect();
        prop_assert_eq!(check_symmetry(&z, -1.0 + 1e-3, 2.0), Ok(()));
    }
}

#[test]
fn twobus_cf_matches_green_function() {
    let case = twobus();
    let alphas = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
    let ms: Vec<usize> = (3..=12).collect();
    let profiles = diagnostics::cf_curve(&case, 2, &alphas, &ms).unwrap();
    for p in &profiles {
        let g = potential::segment_green_cf(-3.0, 1.0, p.alpha).unwrap();
        let cf = p.cf_hat.unwrap();
        assert!((cf - g).abs() <= 0.02 * g, "alpha {}: {cf} vs {g}", p.alpha);
    }
}

#[test]
fn twobus_weak_convergence_trend() {
    let ks = |m| diagnostics::ks_distance_to_equilibrium(&twobus_roots(m), RootKind::Poles, (-3.0, 1.0), 0.2).unwrap().distance;
    assert!(ks(20) < ks(5));
    let res = |m| {
        let cfg = diagnostics::roots_as_charges(&twobus_roots(m), RootKind::Poles).unwrap();
        diagnostics::tangential_field_residual(&cfg, (-3.0, 1.0), 200, 0.1)
    };
    assert!(res(20) < res(5));
}

#[test]
fn pairing_is_one_to_one() {
    let rs = twobus_roots(20);
    let p = diagnostics::pole_zero_pairing(&rs, 0.05);
    assert_eq!(p.pairs.len() + p.unpaired_poles, rs.poles_alpha.len());
    assert_eq!(p.pairs.len() + p.unpaired_zeros, rs.zeros_alpha.len());
    assert!(p.pairs.iter().all(|t| t.2 <= 0.05));
}

#[test]
fn diagnose_twobus() {
    let d = diagnostics::diagnose(&twobus(), &DiagnoseOptions::default()).unwrap();
    assert_eq!(d.bus, 2);
    assert!((d.bp_pos - 1.0).abs() < 1e-12);
    assert!((d.bcc.unwrap() - 1.0).abs() < 0.1);
    assert!((d.hull_capacity - 1.0).abs() < 0.1);
    assert_eq!(d.trend.len(), 3);
    assert!(d.to_string().contains("empirical BCC"));
}
