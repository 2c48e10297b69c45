//! Shared fixtures, independent oracles and invariant checks. The property
//! suites feed these generated inputs; the acceptance runner feeds them
//! seeded ones.
#![allow(dead_code)]

use padelab::algebra::{self, series_conj_reflect, series_mul, series_reciprocal, Polynomial, PowerSeries};
use padelab::diagnostics;
use padelab::hem::{self, Branch, Bus, BusKind, NetworkCase};
use padelab::pade::{self, RootKind, RootSet};
use padelab::potential::{self, ChargeConfiguration, PhysicalUnits, PlanarCurve};
use padelab::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}
#[allow(unused_imports)]
pub(crate) use ensure;

pub fn twobus() -> NetworkCase {
    hem::calibrate_two_bus(-1.0 / 3.0, 1.0).unwrap()
}

pub fn random_complex(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let m = r.gen_range(lo..hi);
    let t = r.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(m, t)
}

/// Random unit-disk coefficients.
pub fn random_series(r: &mut ChaCha8Rng, order: usize) -> PowerSeries {
    PowerSeries::new((0..=order).map(|_| random_complex(r, 0.05, 1.0)).collect()).unwrap()
}

/// Connected `n`-bus PQ network (bus 1 slack): a random spanning tree plus
/// one chord, light loads. Loads are halved until the positive branch point
/// is beyond α = 0.8, so α = 0.2 sits well inside the series disk.
pub fn random_pq_case(r: &mut ChaCha8Rng, n: usize) -> NetworkCase {
    let mut buses = vec![Bus::new(1, BusKind::Slack)];
    for id in 2..=n as u32 {
        let mut b = Bus::new(id, BusKind::Pq);
        b.p_inject = -r.gen_range(0.05..0.4);
        b.q_inject = r.gen_range(-0.2..0.1);
        buses.push(b);
    }
    let mut branches = Vec::new();
    for id in 2..=n as u32 {
        let to = r.gen_range(1..id);
        branches.push(Branch::line(to, id, r.gen_range(0.005..0.05), r.gen_range(0.05..0.2)));
    }
    let (a, b) = (r.gen_range(2..=n as u32), r.gen_range(1..=n as u32));
    if a != b && !branches.iter().any(|br| (br.from, br.to) == (a, b) || (br.from, br.to) == (b, a)) {
        let mut br = Branch::line(a, b, r.gen_range(0.005..0.05), r.gen_range(0.05..0.2));
        br.charging_b = r.gen_range(0.0..0.05);
        branches.push(br);
    }
    let mut case = NetworkCase { base_power: 100.0, buses, branches };
    while hem::locate_positive_branch_point(&case, 1e-6).map_or(true, |bp| bp < 0.8) {
        case.scale_injections(0.5);
    }
    case
}

/// Three buses: slack, PV (generator) and PQ load, meshed.
pub fn pv_case() -> NetworkCase {
    let mut pv = Bus::new(2, BusKind::Pv);
    pv.p_inject = 0.3;
    pv.v_setpoint = 1.02;
    let mut pq = Bus::new(3, BusKind::Pq);
    pq.p_inject = -0.6;
    pq.q_inject = -0.25;
    let mut slack = Bus::new(1, BusKind::Slack);
    slack.v_setpoint = 1.01;
    NetworkCase {
        base_power: 100.0,
        buses: vec![slack, pv, pq],
        branches: vec![Branch::line(1, 2, 0.02, 0.1), Branch::line(2, 3, 0.03, 0.12), Branch::line(1, 3, 0.01, 0.15)],
    }
}

/// Two-bus PQ voltage at real `alpha` from `y(V − 1) = α·conj(S)/conj(V)`
/// by Wirtinger Newton from the flat start (independent of the library).
pub fn two_bus_newton_oracle(case: &NetworkCase, alpha: f64) -> Complex64 {
    let br = &case.branches[0];
    let y = 1.0 / c(br.r, br.x);
    let s = case.buses.iter().find(|b| b.kind == BusKind::Pq).unwrap().injection();
    let mut v = c(1.0, 0.0);
    for _ in 0..100 {
        let f = y * (v - 1.0) - alpha * s.conj() / v.conj();
        let a = y;
        let b = alpha * s.conj() / (v.conj() * v.conj());
        let dv = (-f * a.conj() + b * f.conj()) / (a.norm_sqr() - b.norm_sqr());
        v += dv;
        if dv.norm() < 1e-15 {
            break;
        }
    }
    v
}

/// `lead·Π(z − r)` expanded independently of the library.
pub fn expand_roots(lead: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![lead];
    for &r in roots {
        let mut q = vec![c(0.0, 0.0); p.len() + 1];
        for (k, &a) in p.iter().enumerate() {
            q[k + 1] += a;
            q[k] -= a * r;
        }
        p = q;
    }
    p
}

/// Taylor coefficients of `p/q` (q[0] ≠ 0) through `n`.
pub fn rational_series(p: &[Complex64], q: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut s = p.get(k).copied().unwrap_or_default();
        for j in 1..q.len().min(k + 1) {
            s -= q[j] * out[k - j];
        }
        out.push(s / q[0]);
    }
    out
}

/// Every `a` matched to some `b` within `tol`, one-to-one (greedy).
pub fn same_set(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = (0..b.len()).filter(|&k| !used[k]).min_by(|&i, &j| (b[i] - x).norm().total_cmp(&(b[j] - x).norm()));
        match best {
            Some(k) if (b[k] - x).norm() <= tol => used[k] = true,
            _ => return false,
        }
    }
    true
}

// ---------------------------------------------------------------------------
// algebra

pub fn check_root_residuals(p: &Polynomial, tol: f64) -> Check {
    let roots = algebra::poly_roots(p, tol, algebra::ROOT_MAX_ITER).map_err(|e| e.to_string())?;
    let deg = p.degree().unwrap();
    ensure!(roots.len() == deg, "{} roots for degree {deg}", roots.len());
    let cmax = p.max_coeff_norm();
    for r in &roots {
        let bound = tol * cmax * r.norm().max(1.0).powi(deg as i32);
        ensure!(p.eval(*r).norm() <= bound, "|p({r})| = {:.3e} > {bound:.3e}", p.eval(*r).norm());
    }
    for w in roots.windows(2) {
        ensure!(
            w[0].re < w[1].re || (w[0].re == w[1].re && w[0].im <= w[1].im),
            "roots not lexicographically ordered"
        );
    }
    Ok(())
}

pub fn check_reconstruction(p: &Polynomial) -> Check {
    let roots = algebra::poly_roots(p, algebra::ROOT_TOL, algebra::ROOT_MAX_ITER).map_err(|e| e.to_string())?;
    let lead = *p.coeffs().last().unwrap();
    let q = expand_roots(lead, &roots);
    let cmax = p.max_coeff_norm();
    for (k, (a, b)) in p.coeffs().iter().zip(&q).enumerate() {
        ensure!((a - b).norm() <= 1e-8 * cmax, "coefficient {k}: {a} vs {b}");
    }
    Ok(())
}

pub fn check_reciprocal(a: &PowerSeries) -> Check {
    let n = a.order();
    let w = series_reciprocal(a, n).map_err(|e| e.to_string())?;
    let id = series_mul(a, &w, n);
    let scale: f64 = a.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max)
        * w.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (k, z) in id.coeffs().iter().enumerate() {
        let want = if k == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) };
        ensure!((z - want).norm() <= 1e-12 * scale.max(1.0), "a·(1/a) coefficient {k} = {z}");
    }
    Ok(())
}

pub fn check_conj_involution(a: &PowerSeries) -> Check {
    let twice = series_conj_reflect(&series_conj_reflect(a));
    ensure!(&twice == a, "conj_reflect is not an involution");
    let once = series_conj_reflect(a);
    for (x, y) in a.coeffs().iter().zip(once.coeffs()) {
        ensure!(*y == x.conj(), "coefficient not conjugated");
    }
    Ok(())
}

pub fn check_roots_scale_invariant(p: &Polynomial, s: Complex64) -> Check {
    let tol = 1e-10;
    let r1 = algebra::poly_roots(p, tol, algebra::ROOT_MAX_ITER).map_err(|e| e.to_string())?;
    let ps = Polynomial::new(p.coeffs().iter().map(|z| z * s).collect());
    let r2 = algebra::poly_roots(&ps, tol, algebra::ROOT_MAX_ITER).map_err(|e| e.to_string())?;
    let scale = r1.iter().map(|z| z.norm()).fold(1.0, f64::max);
    ensure!(same_set(&r1, &r2, 1e-6 * scale), "roots moved under coefficient scaling by {s}");
    Ok(())
}

// ---------------------------------------------------------------------------
// hem

pub fn check_embedding_residual(case: &NetworkCase, order: usize, tol: f64) -> Check {
    let sol = hem::hem_series(case, order).map_err(|e| e.to_string())?;
    let res = hem::embedding_residual(case, &sol).map_err(|e| e.to_string())?;
    ensure!(res.len() == order + 1, "residual has {} orders", res.len());
    for (n, r) in res.iter().enumerate() {
        ensure!(*r <= tol, "order {n}: residual {r:.3e} > {tol:.1e}");
    }
    Ok(())
}

pub fn check_partial_sum(case: &NetworkCase, alpha: f64, order: usize, tol: f64) -> Check {
    let sol = hem::hem_series(case, order).map_err(|e| e.to_string())?;
    let v = hem::evaluate_solution(&sol, c(alpha, 0.0));
    let reference = hem::newton_reference(case, alpha).map_err(|e| e.to_string())?;
    for (k, (a, b)) in v.iter().zip(&reference).enumerate() {
        ensure!((a - b).norm() <= tol, "bus index {k}: partial sum {a} vs Newton {b}");
    }
    Ok(())
}

pub fn check_pv_magnitude(case: &NetworkCase, order: usize) -> Check {
    let sol = hem::hem_series(case, order).map_err(|e| e.to_string())?;
    for bus in case.buses.iter().filter(|b| b.kind == BusKind::Pv) {
        let v = sol.voltage(bus.id).unwrap().coeffs();
        for n in 0..=order {
            let s: Complex64 = (0..=n).map(|j| v[j] * v[n - j].conj()).sum();
            let want = if n == 0 { bus.v_setpoint.powi(2) } else { 0.0 };
            ensure!((s - want).norm() <= 1e-10, "bus {} order {n}: Σ V V* = {s}", bus.id);
        }
    }
    Ok(())
}

pub fn check_slack_and_germ(case: &NetworkCase, order: usize) -> Check {
    let sol = hem::hem_series(case, order).map_err(|e| e.to_string())?;
    let slack = &case.buses[case.slack_index().unwrap()];
    let v = sol.voltage(slack.id).unwrap().coeffs();
    ensure!(v[0] == c(slack.v_setpoint, 0.0), "slack germ {}", v[0]);
    ensure!(v[1..].iter().all(|z| *z == c(0.0, 0.0)), "slack series not constant");
    let plain = case.buses.iter().all(|b| b.shunt_g == 0.0 && b.shunt_b == 0.0 && (b.kind == BusKind::Pq || b.v_setpoint == 1.0))
        && case.branches.iter().all(|b| b.charging_b == 0.0 && b.tap == 1.0);
    if plain {
        ensure!(sol.germ.iter().all(|z| *z == c(1.0, 0.0)), "germ is not all ones: {:?}", sol.germ);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pade

pub fn check_accuracy_through_order(series: &PowerSeries, l: usize, m: usize) -> Check {
    let pa = match pade::build_pade(series, l, m) {
        Ok(pa) => pa,
        // a reported degenerate block is a correct outcome, not a violation
        Err(pade::PadeError::DegenerateBlock { .. }) => return Ok(()),
        Err(e) => return Err(e.to_string()),
    };
    ensure!(pa.denominator.coeffs()[0] == c(1.0, 0.0), "Q(0) ≠ 1");
    let cmax = series.coeffs()[..=l + m].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let qmax = pa.denominator.max_coeff_norm();
    let e = pade::defect_series(&pa, series, l + m);
    for (k, z) in e.iter().enumerate() {
        ensure!(z.norm() <= 1e-9 * cmax * qmax, "[{l}/{m}] defect {k} = {:.3e}", z.norm());
    }
    Ok(())
}

/// `P₀/Q₀` with the given zeros and poles reproduced by `[L/M]` at probe
/// points in `|α| ≤ 0.5`.
pub fn check_rational_exactness(zeros: &[Complex64], poles: &[Complex64], probes: &[Complex64]) -> Check {
    let p0 = expand_roots(c(1.0, 0.0), zeros);
    let mut q0 = expand_roots(c(1.0, 0.0), poles);
    let q00 = q0[0];
    q0.iter_mut().for_each(|z| *z /= q00);
    let (l, m) = (zeros.len(), poles.len());
    let series = PowerSeries::new(rational_series(&p0, &q0, l + m)).unwrap();
    let pa = pade::build_pade(&series, l, m).map_err(|e| e.to_string())?;
    for &z in probes {
        let exact = Polynomial::new(p0.clone()).eval(z) / Polynomial::new(q0.clone()).eval(z);
        let got = pade::eval_pade(&pa, z).map_err(|e| e.to_string())?;
        ensure!((got - exact).norm() <= 1e-9 * exact.norm().max(1.0), "at {z}: {got} vs {exact}");
    }
    Ok(())
}

pub fn check_scale_covariance(series: &PowerSeries, m: usize, s: Complex64) -> Check {
    let (Ok(pa), Ok(pb)) = (pade::build_pade(series, m, m), pade::build_pade(&series.scale(s), m, m)) else {
        return Ok(());
    };
    let nmax = pa.numerator.max_coeff_norm();
    for (x, y) in pa.numerator.coeffs().iter().zip(pb.numerator.coeffs()) {
        ensure!((x * s - y).norm() <= 1e-8 * nmax * s.norm(), "numerator not scaled by s");
    }
    for (x, y) in pa.denominator.coeffs().iter().zip(pb.denominator.coeffs()) {
        ensure!((x - y).norm() <= 1e-8 * pa.denominator.max_coeff_norm(), "denominator changed");
    }
    Ok(())
}

pub fn check_reciprocal_plane(rs: &RootSet) -> Check {
    for (alpha, inv) in [(&rs.poles_alpha, &rs.poles_inv), (&rs.zeros_alpha, &rs.zeros_inv)] {
        let finite: Vec<Complex64> = alpha.iter().copied().filter(|z| z.norm() > pade::INV_THRESHOLD).collect();
        ensure!(finite.len() == inv.len(), "{} α-plane roots vs {} images", finite.len(), inv.len());
        for (a, z) in finite.iter().zip(inv.iter()) {
            ensure!((a * z - 1.0).norm() <= 1e-12, "{a} does not map to {z}");
            ensure!(((1.0 / z) - a).norm() <= 1e-12 * a.norm(), "{z} does not map back to {a}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// potential

pub fn check_normalized(cfg: &ChargeConfiguration) -> Check {
    let s: f64 = cfg.weights().iter().sum();
    ensure!((s - 1.0).abs() <= 1e-12, "weights sum to {s}");
    Ok(())
}

pub fn check_capacity_scaling(cfg: &ChargeConfiguration, s: f64, shift: [f64; 2]) -> Check {
    let c0 = potential::capacity_estimate(cfg).map_err(|e| e.to_string())?;
    let scaled = cfg.affine(s, [0.0, 0.0]).map_err(|e| e.to_string())?;
    let moved = cfg.affine(1.0, shift).map_err(|e| e.to_string())?;
    check_normalized(&scaled)?;
    let c1 = potential::capacity_estimate(&scaled).map_err(|e| e.to_string())?;
    let c2 = potential::capacity_estimate(&moved).map_err(|e| e.to_string())?;
    ensure!((c1 - s * c0).abs() <= 1e-12 * s * c0, "cap(sE) = {c1} vs s·cap(E) = {}", s * c0);
    ensure!((c2 - c0).abs() <= 1e-12 * c0, "translation changed capacity {c0} → {c2}");
    Ok(())
}

pub fn check_field_is_gradient(cfg: &ChargeConfiguration, r: [f64; 2]) -> Check {
    let u = PhysicalUnits::default();
    let e = potential::field_at(cfg, r, u).map_err(|e| e.to_string())?;
    let h = 1e-5;
    let phi = |p: [f64; 2]| potential::potential_at(cfg, p, u).unwrap();
    let gx = (phi([r[0] + h, r[1]]) - phi([r[0] - h, r[1]])) / (2.0 * h);
    let gy = (phi([r[0], r[1] + h]) - phi([r[0], r[1] - h])) / (2.0 * h);
    let scale = e[0].hypot(e[1]).max(1.0);
    ensure!((e[0] + gx).abs() <= 1e-6 * scale && (e[1] + gy).abs() <= 1e-6 * scale, "E = {e:?}, −∇φ = [{}, {}]", -gx, -gy);
    Ok(())
}

pub fn check_energy_identity(cfg: &ChargeConfiguration) -> Check {
    let ec = potential::energy_capacity_relation(cfg, PhysicalUnits::default()).map_err(|e| e.to_string())?;
    let cap = potential::capacity_estimate(cfg).map_err(|e| e.to_string())?;
    ensure!((ec.capacity_from_energy - cap).abs() <= 1e-12 * cap, "{} vs {cap}", ec.capacity_from_energy);
    Ok(())
}

pub fn fekete_segment(a: f64, b: f64, n: usize) -> potential::FeketeSolution {
    let curve = PlanarCurve::segment(a, b).unwrap();
    potential::fekete_points(&curve, n, potential::FEKETE_MAX_ITER).unwrap()
}

pub fn check_fekete_monotone(a: f64, b: f64, n: usize) -> Check {
    let sol = fekete_segment(a, b, n);
    check_normalized(&sol.config)?;
    for (k, w) in sol.energy_trace.windows(2).enumerate() {
        ensure!(w[1] <= w[0] + 1e-14 * w[0].abs().max(1.0), "energy rose at step {k}: {} → {}", w[0], w[1]);
    }
    ensure!(sol.stationarity <= potential::FEKETE_TOL, "stationarity {:.3e}", sol.stationarity);
    Ok(())
}

pub fn check_capacity_decreasing_in_n(a: f64, b: f64) -> Check {
    let mut last = f64::INFINITY;
    for n in [4, 8, 16, 32, 64] {
        let cap = potential::capacity_estimate(&fekete_segment(a, b, n).config).map_err(|e| e.to_string())?;
        ensure!(cap <= last, "cap_est rose at N = {n}: {last} → {cap}");
        last = cap;
    }
    Ok(())
}

pub fn check_fekete_tangential(a: f64, b: f64, n: usize) -> Check {
    let sol = fekete_segment(a, b, n);
    let r = diagnostics::field_residual_report(&sol.config, (a, b), 200, 0.1);
    ensure!(r.tangential_max <= 0.2 * r.normal_mean, "tangential {:.3e} vs mean normal {:.3e}", r.tangential_max, r.normal_mean);
    Ok(())
}

// ---------------------------------------------------------------------------
// diagnostics

pub fn check_geometric_cf(ratio: f64, c0: f64, m_max: usize) -> Check {
    let samples: Vec<(usize, f64)> = (1..=m_max).map(|m| (m, c0 * ratio.powi(2 * m as i32))).collect();
    let cf = diagnostics::cf_estimate(&samples, 0.0).map_err(|e| e.to_string())?;
    ensure!((cf - ratio).abs() <= 1e-12, "recovered {cf} for ratio {ratio}");
    Ok(())
}

pub fn check_linear_slope(slope: f64, alphas: &[f64]) -> Check {
    let profiles: Vec<diagnostics::ConvergenceProfile> = alphas
        .iter()
        .map(|&a| diagnostics::ConvergenceProfile {
            alpha: c(a, 0.0),
            samples: vec![],
            cf_hat: Some(slope * a),
            fit_window: None,
            noise_floor: 0.0,
        })
        .collect();
    let s = diagnostics::slope_at_origin(&profiles).map_err(|e| e.to_string())?;
    ensure!((s - slope).abs() <= 1e-12 * slope.abs().max(1.0), "recovered {s} for slope {slope}");
    Ok(())
}

pub fn check_ks(rs: &RootSet, seg: (f64, f64)) -> Check {
    for which in [RootKind::Poles, RootKind::Zeros] {
        if let Ok(r) = diagnostics::ks_distance_to_equilibrium(rs, which, seg, 0.2) {
            ensure!((0.0..=1.0).contains(&r.distance), "KS {}", r.distance);
            ensure!(r.used + r.spurious == rs.inv(which).len(), "used + spurious ≠ total");
        }
    }
    Ok(())
}

pub fn check_ks_quantiles(a: f64, b: f64, n: usize) -> Check {
    let q = potential::segment_equilibrium_quantiles(a, b, n);
    let rs = RootSet { poles_inv: q.iter().map(|&x| c(x, 0.0)).collect(), ..Default::default() };
    let d = diagnostics::ks_distance_to_equilibrium(&rs, RootKind::Poles, (a, b), 0.1).map_err(|e| e.to_string())?.distance;
    ensure!((d - 0.5 / n as f64).abs() <= 1e-12, "KS on quantiles {d} vs bound {}", 0.5 / n as f64);
    Ok(())
}

pub fn check_charges_normalized(rs: &RootSet) -> Check {
    for which in [RootKind::Poles, RootKind::Zeros, RootKind::Both] {
        if rs.inv(which).is_empty() {
            continue;
        }
        let cfg = diagnostics::roots_as_charges(rs, which).map_err(|e| e.to_string())?;
        check_normalized(&cfg)?;
        ensure!(cfg.len() == rs.inv(which).len(), "charge count");
    }
    Ok(())
}

/// Symmetric set → metric 0; the same set with one point displaced → > 0.
pub fn check_symmetry(points: &[Complex64], center: f64, half: f64) -> Check {
    let mut sym: Vec<Complex64> = points.to_vec();
    sym.extend(points.iter().map(|z| c(2.0 * center - z.re, z.im)));
    let rs = RootSet { poles_inv: sym.clone(), ..Default::default() };
    let m = diagnostics::symmetry_metric(&rs, RootKind::Poles, center, half).map_err(|e| e.to_string())?;
    ensure!(m <= 1e-12, "symmetric set gives {m}");
    sym[0] += c(0.37 * half, 0.11 * half);
    let rs = RootSet { poles_inv: sym, ..Default::default() };
    let m = diagnostics::symmetry_metric(&rs, RootKind::Poles, center, half).map_err(|e| e.to_string())?;
    ensure!(m > 1e-6, "asymmetric set gives {m}");
    Ok(())
}

/// Inverse-plane pole/zero sets of the calibrated two-bus `[M/M]`.
pub fn twobus_roots(m: usize) -> RootSet {
    let sol = hem::hem_series(&twobus(), 2 * m).unwrap();
    pade::diagonal_roots(sol.voltage(2).unwrap(), m).unwrap().1
}
