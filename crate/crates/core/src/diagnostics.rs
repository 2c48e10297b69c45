//! Convergence-factor estimation and root-distribution diagnostics.

use crate::algebra::PowerSeries;
use crate::hem::{self, BusKind, HemError, NetworkCase};
use crate::pade::{self, build_pade, defect_series, eval_pade, PadeApproximant, PadeError, RootKind, RootSet};
use crate::potential::{
    self, capacity_estimate, field_at, segment_equilibrium_cdf, ChargeConfiguration, PhysicalUnits, PlanarCurve,
    PotentialError,
};
use num_complex::Complex64;
use std::fmt;

/// Extra series terms beyond `2·M_max` used for the Padé defect tail.
pub const TAIL_TERMS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("insufficient decay: {0}")]
    InsufficientDecay(String),
    #[error("need at least 3 profiles with a fitted CF, got {0}")]
    InsufficientProfiles(usize),
    #[error("no roots inside the band")]
    NoRootsInBand,
    #[error("empty root selection")]
    EmptySelection,
    #[error("bus {0} not found")]
    UnknownBus(u32),
    #[error(transparent)]
    Hem(#[from] HemError),
    #[error(transparent)]
    Pade(#[from] PadeError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfSample {
    pub m: usize,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceProfile {
    pub alpha: Complex64,
    /// Sorted by `m`.
    pub samples: Vec<CfSample>,
    pub cf_hat: Option<f64>,
    pub fit_window: Option<(usize, usize)>,
    /// Largest per-order floor inside the fit window.
    pub noise_floor: f64,
}

fn cf_fit(samples: &[(usize, f64)], noise_floor: f64) -> Result<(f64, (usize, usize)), DiagnosticsError> {
    let mut usable: Vec<(usize, f64)> = samples
        .iter()
        .copied()
        .filter(|&(_, e)| e.is_finite() && e > noise_floor && e > 0.0)
        .collect();
    usable.sort_by_key(|s| s.0);
    if usable.len() >= 4 {
        // first point is usually still transient
        usable.remove(0);
    }
    if usable.len() < 3 {
        return Err(DiagnosticsError::InsufficientDecay(format!(
            "{} samples above the noise floor {noise_floor:.3e}",
            usable.len()
        )));
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|s| s.0 as f64).sum::<f64>() / n;
    let my = usable.iter().map(|s| s.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(m, e) in &usable {
        let dx = m as f64 - mx;
        sxy += dx * (e.ln() - my);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(DiagnosticsError::InsufficientDecay(format!("log-error slope {slope:.3e} is not negative")));
    }
    let cf = (slope / 2.0).exp().min(1.0);
    Ok((cf, (usable[0].0, usable[usable.len() - 1].0)))
}

/// Convergence factor from `[M/M]` errors: `exp(s/2)` with `s` the
/// least-squares slope of `ln(error)` against `M` over samples above the
/// noise floor (first usable one dropped when four or more remain).
pub fn cf_estimate(samples: &[(usize, f64)], noise_floor: f64) -> Result<f64, DiagnosticsError> {
    cf_fit(samples, noise_floor).map(|r| r.0)
}

/// Convergence radius of a series from the decay of its upper-half
/// coefficients.
fn radius_estimate(series: &PowerSeries) -> f64 {
    let c = series.coeffs();
    let n = c.len();
    let pts: Vec<(f64, f64)> = (n / 2..n)
        .filter(|&k| c[k].norm() > 0.0)
        .map(|k| (k as f64, c[k].norm().ln()))
        .collect();
    if pts.len() < 3 {
        return f64::INFINITY;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (-sxy / sxx).exp()
}

fn two_bus_pq(case: &NetworkCase) -> bool {
    case.buses.len() == 2 && case.buses.iter().any(|b| b.kind == BusKind::Slack) && case.buses.iter().any(|b| b.kind == BusKind::Pq)
}

/// Pick the non-slack bus whose first-order voltage coefficient is largest.
pub fn default_bus(sol: &hem::EmbeddedSolution) -> u32 {
    let mut best = (sol.bus_ids[0], -1.0);
    for (k, v) in sol.voltages.iter().enumerate() {
        let c1 = v.coeffs().get(1).map_or(0.0, |c| c.norm());
        if c1 > best.1 {
            best = (sol.bus_ids[k], c1);
        }
    }
    best.0
}

/// Error of every requested `[M/M]` at every α.
///
/// Where the Maclaurin tail has converged (|α| well inside the series
/// radius) the error is the exact defect `|Σ_{k>M} ε_k α^k| / |Q(α)|` with
/// `ε = f·Q − P`. Elsewhere it is `|reference − P/Q|` against the closed
/// form (two-bus) or Newton. Each order's noise floor is ten times the part
/// of the defect sum coming from the order conditions `M < k ≤ 2M` (zero in
/// exact arithmetic), and at least `1e3·ε_mach·|reference|` on the direct
/// route; the fit window ends at the first order that reaches its floor or
/// stops improving.
pub fn cf_curve(
    case: &NetworkCase,
    bus: u32,
    alphas: &[f64],
    m_list: &[usize],
) -> Result<Vec<ConvergenceProfile>, DiagnosticsError> {
    let m_max = m_list.iter().copied().max().unwrap_or(1);
    let order = 2 * m_max + TAIL_TERMS;
    let sol = hem::hem_series(case, order)?;
    let series = sol.voltage(bus).ok_or(DiagnosticsError::UnknownBus(bus))?.clone();
    let bus_idx = case.bus_index(bus).ok_or(DiagnosticsError::UnknownBus(bus))?;
    let mut ms = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let pas: Vec<(usize, PadeApproximant)> = ms
        .iter()
        .filter_map(|&m| match build_pade(&series, m, m) {
            Ok(pa) => Some((m, pa)),
            Err(e) => {
                log::warn!("cf_curve: skipping M = {m}: {e}");
                None
            }
        })
        .collect();
    let defects: Vec<Vec<Complex64>> = pas.iter().map(|(_, pa)| defect_series(pa, &series, order)).collect();
    let radius = radius_estimate(&series);
    let two_bus = two_bus_pq(case);

    let mut out = Vec::with_capacity(alphas.len());
    for &a in alphas {
        let alpha = Complex64::new(a, 0.0);
        let tail_ok = (a.abs() / radius).powi((order - 2 * m_max) as i32) <= 1e-10;
        let mut samples = Vec::new();
        // per-order noise floor alongside every sample
        let mut floors = Vec::new();
        // (exact tail sum, order-condition violation) of the defect at α
        let defect_at = |m: usize, pa: &PadeApproximant, eps: &[Complex64]| {
            let q = pa.denominator.eval(alpha).norm();
            let (mut sum, mut viol) = (Complex64::new(0.0, 0.0), 0.0);
            let mut pw = a.abs().powi(m as i32);
            for (k, e) in eps.iter().enumerate().skip(m + 1) {
                pw *= a.abs();
                sum += e * alpha.powi(k as i32);
                if k <= 2 * m {
                    viol += e.norm() * pw;
                }
            }
            (sum.norm() / q, viol / q)
        };
        if tail_ok {
            for ((m, pa), eps) in pas.iter().zip(&defects) {
                let (err, viol) = defect_at(*m, pa, eps);
                samples.push(CfSample { m: *m, error: err });
                floors.push(10.0 * viol);
            }
        } else {
            let reference = if two_bus {
                hem::two_bus_closed_form(case, alpha)
            } else {
                hem::newton_reference(case, a).map(|v| v[bus_idx])
            };
            match reference {
                Ok(r) => {
                    // rounding in the Toeplitz solve shows up as violated
                    // order conditions; the approximant cannot beat that
                    let base = 1e3 * f64::EPSILON * r.norm();
                    for ((m, pa), eps) in pas.iter().zip(&defects) {
                        match eval_pade(pa, alpha) {
                            Ok(v) => {
                                samples.push(CfSample { m: *m, error: (r - v).norm() });
                                floors.push(base.max(10.0 * defect_at(*m, pa, eps).1));
                            }
                            Err(e) => log::warn!("cf_curve: alpha = {a}, M = {m}: {e}"),
                        }
                    }
                }
                Err(e) => log::warn!("cf_curve: no reference at alpha = {a}: {e}"),
            }
        }
        // the fit stops at the first order that reaches its own floor or no
        // longer improves on the previous one: beyond it rounding dominates
        let cut = (0..samples.len())
            .find(|&k| samples[k].error <= floors[k] || (k > 0 && samples[k].error >= samples[k - 1].error))
            .unwrap_or(samples.len());
        let floor = floors[..cut].iter().copied().fold(0.0, f64::max);
        let pairs: Vec<(usize, f64)> = samples[..cut].iter().map(|s| (s.m, s.error)).collect();
        let (cf_hat, fit_window) = match cf_fit(&pairs, floor) {
            Ok((cf, w)) => (Some(cf), Some(w)),
            Err(e) => {
                log::info!("cf_curve: alpha = {a}: {e}");
                (None, None)
            }
        };
        out.push(ConvergenceProfile { alpha, samples, cf_hat, fit_window, noise_floor: floor });
    }
    Ok(out)
}

/// Empirical branch-cut capacity: the linear coefficient `s` of the
/// least-squares fit `cf ≈ s|α| + t|α|²` (no intercept) over profiles with a
/// fitted CF. The quadratic term absorbs the O(α²) curvature so `s` is the
/// slope at the origin.
pub fn slope_at_origin(profiles: &[ConvergenceProfile]) -> Result<f64, DiagnosticsError> {
    let pts: Vec<(f64, f64)> = profiles.iter().filter_map(|p| p.cf_hat.map(|c| (p.alpha.norm(), c))).collect();
    if pts.len() < 3 {
        return Err(DiagnosticsError::InsufficientProfiles(pts.len()));
    }
    let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        s11 += x * x;
        s12 += x * x * x;
        s22 += x * x * x * x;
        b1 += x * y;
        b2 += x * x * y;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det.abs() > 1e-300) {
        return Err(DiagnosticsError::InsufficientProfiles(pts.len()));
    }
    Ok((b1 * s22 - b2 * s12) / det)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub distance: f64,
    pub used: usize,
    pub spurious: usize,
}

/// Sup-distance between the empirical CDF of in-band inverse-plane roots and
/// the arcsine law of `[a, b]`.
pub fn ks_distance_to_equilibrium(
    rs: &RootSet,
    which: RootKind,
    segment: (f64, f64),
    band: f64,
) -> Result<KsReport, DiagnosticsError> {
    let (a, b) = segment;
    let all = rs.inv(which);
    let mut xs: Vec<f64> = all
        .iter()
        .filter(|z| z.im.abs() <= band && z.re >= a - band && z.re <= b + band)
        .map(|z| z.re)
        .collect();
    if xs.is_empty() {
        return Err(DiagnosticsError::NoRootsInBand);
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = segment_equilibrium_cdf(a, b, x);
        d = d.max((f - i as f64 / n).abs()).max((f - (i + 1) as f64 / n).abs());
    }
    Ok(KsReport { distance: d, used: xs.len(), spurious: all.len() - xs.len() })
}

/// Inverse-plane roots as equal point charges; exact duplicates are nudged
/// apart by 1e-12.
pub fn roots_as_charges(rs: &RootSet, which: RootKind) -> Result<ChargeConfiguration, DiagnosticsError> {
    let roots = rs.inv(which);
    if roots.is_empty() {
        return Err(DiagnosticsError::EmptySelection);
    }
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(roots.len());
    for z in roots {
        let mut p = [z.re, z.im];
        let mut bumps = 0;
        while pts.iter().any(|q| (q[0] - p[0]).hypot(q[1] - p[1]) < 1e-14) {
            bumps += 1;
            p[1] += 1e-12;
        }
        if bumps > 0 {
            log::warn!("roots_as_charges: duplicate root at {z} perturbed by {:.0e}", bumps as f64 * 1e-12);
        }
        pts.push(p);
    }
    Ok(ChargeConfiguration::equal(pts)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldResidual {
    /// Largest |field component along the segment| over the probes.
    pub tangential_max: f64,
    /// Mean |field component normal to the segment| over the same probes.
    pub normal_mean: f64,
    /// Normal offset of the probe line.
    pub offset: f64,
}

/// Field along a real-axis segment, probed on the parallel line at offset
/// `h = (b − a)/N` (one mean charge spacing): on the segment itself the
/// nearest point charge dominates, while at that offset the discrete field
/// approaches the continuum one. Probes cover the middle `1 − 2·trim`.
pub fn field_residual_report(cfg: &ChargeConfiguration, segment: (f64, f64), n_probes: usize, trim: f64) -> FieldResidual {
    let (a, b) = segment;
    let h = (b - a) / cfg.len() as f64;
    let units = PhysicalUnits::default();
    let (mut tmax, mut nsum) = (0.0f64, 0.0);
    let n_probes = n_probes.max(3);
    for k in 0..n_probes {
        let u = trim + (1.0 - 2.0 * trim) * k as f64 / (n_probes - 1) as f64;
        let mut r = [a + (b - a) * u, h];
        while cfg.points().iter().any(|p| (p[0] - r[0]).hypot(p[1] - r[1]) < 1e-6) {
            r[1] += 1e-6;
        }
        let e = field_at(cfg, r, units).expect("probe kept away from charges");
        tmax = tmax.max(e[0].abs());
        nsum += e[1].abs();
    }
    FieldResidual { tangential_max: tmax, normal_mean: nsum / n_probes as f64, offset: h }
}

/// Largest tangential field magnitude on the probe line; see
/// [`field_residual_report`].
pub fn tangential_field_residual(cfg: &ChargeConfiguration, segment: (f64, f64), n_probes: usize, trim: f64) -> f64 {
    field_residual_report(cfg, segment, n_probes, trim).tangential_max
}

/// Indices of the greedy closest-pair matching between `a` and `b`.
fn greedy_match(a: &[Complex64], b: &[Complex64], radius: f64) -> Vec<(usize, usize, f64)> {
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let d = (x - y).norm();
            if d <= radius {
                cand.push((d, i, j));
            }
        }
    }
    cand.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let (mut ua, mut ub) = (vec![false; a.len()], vec![false; b.len()]);
    let mut out = Vec::new();
    for (d, i, j) in cand {
        if !ua[i] && !ub[j] {
            ua[i] = true;
            ub[j] = true;
            out.push((i, j, d));
        }
    }
    out
}

/// Mean distance between the roots reflected about `Re = center` and their
/// greedy matches, over the cut half-length.
pub fn symmetry_metric(rs: &RootSet, which: RootKind, center: f64, half_length: f64) -> Result<f64, DiagnosticsError> {
    let roots = rs.inv(which);
    if roots.is_empty() {
        return Err(DiagnosticsError::EmptySelection);
    }
    let reflected: Vec<Complex64> = roots.iter().map(|z| Complex64::new(2.0 * center - z.re, z.im)).collect();
    let pairs = greedy_match(&reflected, &roots, f64::INFINITY);
    let mean = pairs.iter().map(|p| p.2).sum::<f64>() / pairs.len() as f64;
    Ok(mean / half_length)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    /// `(pole, zero, distance)` in the α-plane.
    pub pairs: Vec<(Complex64, Complex64, f64)>,
    pub unpaired_poles: usize,
    pub unpaired_zeros: usize,
}

/// Poles taken in ascending |α| each grab the nearest unused zero within
/// `radius`.
pub fn pole_zero_pairing(rs: &RootSet, radius: f64) -> Pairing {
    let mut poles = rs.poles_alpha.clone();
    poles.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; rs.zeros_alpha.len()];
    let mut pairs = Vec::new();
    for p in &poles {
        let best = rs
            .zeros_alpha
            .iter()
            .enumerate()
            .filter(|(j, z)| !used[*j] && (*z - p).norm() <= radius)
            .min_by(|a, b| (a.1 - p).norm().total_cmp(&(b.1 - p).norm()));
        if let Some((j, z)) = best {
            used[j] = true;
            pairs.push((*p, *z, (z - p).norm()));
        }
    }
    Pairing {
        unpaired_poles: poles.len() - pairs.len(),
        unpaired_zeros: rs.zeros_alpha.len() - pairs.len(),
        pairs,
    }
}

/// Fraction of `roots` with `|Im| ≤ band` and real part in `re_range`.
pub fn band_fraction(roots: &[Complex64], band: f64, re_range: (f64, f64)) -> f64 {
    if roots.is_empty() {
        return 0.0;
    }
    let k = roots
        .iter()
        .filter(|z| z.im.abs() <= band && z.re >= re_range.0 && z.re <= re_range.1)
        .count();
    k as f64 / roots.len() as f64
}

/// Root counts (real parts, in-band only) in the two end deciles and the
/// middle decile of `[a, b]`.
pub fn decile_counts(roots: &[Complex64], segment: (f64, f64), band: f64) -> (usize, usize, usize) {
    let (a, b) = segment;
    let len = b - a;
    let count = |lo: f64, hi: f64| {
        roots
            .iter()
            .filter(|z| z.im.abs() <= band && z.re >= lo && z.re <= hi)
            .count()
    };
    (
        count(a - band, a + 0.1 * len),
        count(a + 0.45 * len, a + 0.55 * len),
        count(b - 0.1 * len, b + band),
    )
}

// ---------------------------------------------------------------------------
// one-shot summary

#[derive(Debug, Clone)]
pub struct DiagnoseOptions {
    pub bus: Option<u32>,
    /// α grid for the slope fit, as fractions of the positive branch point.
    pub slope_alphas: Vec<f64>,
    pub slope_m: Vec<usize>,
    /// Orders for the root-distribution trend; the last is the "high" order.
    pub m_trend: Vec<usize>,
    /// Half-width of the band around the real axis in the inverse plane;
    /// `None` means 0.1 × the cut half-length.
    pub band: Option<f64>,
    pub fekete_n: usize,
}

impl Default for DiagnoseOptions {
    fn default() -> Self {
        DiagnoseOptions {
            bus: None,
            slope_alphas: vec![0.03, 0.05, 0.08, 0.1, 0.15, 0.2],
            slope_m: (3..=12).collect(),
            m_trend: vec![5, 10, 20],
            band: None,
            fekete_n: 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrendRow {
    pub m: usize,
    pub ks_poles: Option<f64>,
    pub ks_zeros: Option<f64>,
    pub in_band: f64,
    pub unpaired_poles: usize,
    pub unpaired_zeros: usize,
    pub symmetry_poles: Option<f64>,
    pub symmetry_zeros: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Diagnosis {
    pub bus: u32,
    /// α-plane branch points when known in closed form, else the positive
    /// one located by bisection.
    pub bp_pos: f64,
    pub bp_neg: Option<f64>,
    pub bcc: Option<f64>,
    pub profiles: Vec<ConvergenceProfile>,
    /// Inverse-plane hull `[min Re, max Re]` of in-band roots at the highest order.
    pub hull: (f64, f64),
    pub band: f64,
    pub hull_capacity: f64,
    pub trend: Vec<TrendRow>,
    pub high: RootSet,
}

fn positive_branch_point(case: &NetworkCase) -> Result<(f64, Option<f64>), DiagnosticsError> {
    if two_bus_pq(case) {
        let (neg, pos) = hem::two_bus_branch_points(case)?;
        return Ok((pos, neg.is_finite().then_some(neg)));
    }
    Ok((hem::locate_positive_branch_point(case, 1e-8)?, None))
}

/// BCC estimate, KS/pairing/symmetry trend over `m_trend`, and the capacity
/// of the hull of the highest-order in-band roots.
pub fn diagnose(case: &NetworkCase, opts: &DiagnoseOptions) -> Result<Diagnosis, DiagnosticsError> {
    let (bp_pos, bp_neg) = positive_branch_point(case)?;
    let m_high = opts.m_trend.iter().copied().max().unwrap_or(20);
    let sol = hem::hem_series(case, 2 * m_high)?;
    let bus = opts.bus.unwrap_or_else(|| default_bus(&sol));
    let series = sol.voltage(bus).ok_or(DiagnosticsError::UnknownBus(bus))?.clone();

    let alphas: Vec<f64> = opts.slope_alphas.iter().map(|f| f * bp_pos).collect();
    let profiles = cf_curve(case, bus, &alphas, &opts.slope_m)?;
    let bcc = slope_at_origin(&profiles).ok();

    let (_, high) = pade::diagonal_roots(&series, m_high)?;
    // the cut in the inverse plane: known segment when the branch points are,
    // otherwise the hull of the high-order roots near the real axis
    let guess = match bp_neg {
        Some(n) => (1.0 / n, 1.0 / bp_pos),
        None => {
            let all = high.inv(RootKind::Both);
            let lo = all.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            let hi = all.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            (lo.max(-10.0 / bp_pos), hi.min(10.0 / bp_pos))
        }
    };
    let band = opts.band.unwrap_or(0.1 * (guess.1 - guess.0) / 2.0);
    let in_band: Vec<f64> = high
        .inv(RootKind::Both)
        .iter()
        .filter(|z| z.im.abs() <= band)
        .map(|z| z.re)
        .collect();
    let hull = if in_band.is_empty() {
        guess
    } else {
        (
            in_band.iter().copied().fold(f64::INFINITY, f64::min),
            in_band.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    let hull_capacity = if hull.1 > hull.0 {
        let curve = PlanarCurve::segment(hull.0, hull.1)?;
        let fk = match potential::fekete_points(&curve, opts.fekete_n, potential::FEKETE_MAX_ITER) {
            Ok(s) => s,
            Err(PotentialError::MaxIterReached { best, .. }) => *best,
            Err(e) => return Err(e.into()),
        };
        capacity_estimate(&fk.config)?
    } else {
        0.0
    };
    let seg = if bp_neg.is_some() { guess } else { hull };
    let half = (seg.1 - seg.0) / 2.0;
    let center = 0.5 * (seg.0 + seg.1);

    let mut trend = Vec::new();
    for &m in &opts.m_trend {
        let rs = match pade::diagonal_roots(&series, m) {
            Ok((_, rs)) => rs,
            Err(e) => {
                log::warn!("diagnose: M = {m}: {e}");
                continue;
            }
        };
        let ks = |k| ks_distance_to_equilibrium(&rs, k, seg, band).ok().map(|r| r.distance);
        let pairing = pole_zero_pairing(&rs, 0.01 / bp_pos);
        trend.push(TrendRow {
            m,
            ks_poles: ks(RootKind::Poles),
            ks_zeros: ks(RootKind::Zeros),
            in_band: band_fraction(&rs.inv(RootKind::Both), band, (f64::NEG_INFINITY, f64::INFINITY)),
            unpaired_poles: pairing.unpaired_poles,
            unpaired_zeros: pairing.unpaired_zeros,
            symmetry_poles: symmetry_metric(&rs, RootKind::Poles, center, half).ok(),
            symmetry_zeros: symmetry_metric(&rs, RootKind::Zeros, center, half).ok(),
        });
    }
    Ok(Diagnosis { bus, bp_pos, bp_neg, bcc, profiles, hull, band, hull_capacity, trend, high })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bus                  {}", self.bus)?;
        match self.bp_neg {
            Some(n) => writeln!(f, "branch points (alpha) {n:.6} / {:.6}", self.bp_pos)?,
            None => writeln!(f, "positive branch point (alpha, bisection) {:.6}", self.bp_pos)?,
        }
        writeln!(f, "empirical BCC        {}", opt(self.bcc))?;
        for p in &self.profiles {
            writeln!(f, "  alpha {:<8.4} cf_hat {}", p.alpha.re, opt(p.cf_hat))?;
        }
        writeln!(f, "root hull (inv)      [{:.4}, {:.4}]  band {:.4}", self.hull.0, self.hull.1, self.band)?;
        writeln!(f, "hull capacity        {:.4}", self.hull_capacity)?;
        writeln!(f, "   M  ks_poles  ks_zeros  in_band  unpaired(p/z)  sym_poles  sym_zeros")?;
        for r in &self.trend {
            writeln!(
                f,
                "{:>4}  {:>8}  {:>8}  {:>7.3}  {:>6}/{:<6}  {:>9}  {:>9}",
                r.m,
                opt(r.ks_poles),
                opt(r.ks_zeros),
                r.in_band,
                r.unpaired_poles,
                r.unpaired_zeros,
                opt(r.symmetry_poles),
                opt(r.symmetry_zeros)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn geometric_errors_give_exact_cf() {
        let samples: Vec<(usize, f64)> = (1..=8).map(|m| (m, 0.01f64.powi(m as i32))).collect();
        let cf = cf_estimate(&samples, 0.0).unwrap();
        assert!((cf - 0.1).abs() < 1e-12, "{cf}");
        assert!(cf_estimate(&samples, 1.0).is_err());
    }

    #[test]
    fn synthetic_linear_slope() {
        let profiles: Vec<ConvergenceProfile> = [0.05, 0.1, 0.2, 0.3]
            .iter()
            .map(|&a| ConvergenceProfile {
                alpha: c(a, 0.0),
                samples: vec![],
                cf_hat: Some(0.25 * a),
                fit_window: None,
                noise_floor: 0.0,
            })
            .collect();
        assert!((slope_at_origin(&profiles).unwrap() - 0.25).abs() < 1e-12);
        assert!(slope_at_origin(&profiles[..2]).is_err());
    }

    #[test]
    fn pairing_example() {
        let rs = RootSet {
            poles_alpha: vec![c(1.0, 0.0), c(2.0, 0.0)],
            zeros_alpha: vec![c(1.01, 0.0), c(5.0, 0.0)],
            ..Default::default()
        };
        let p = pole_zero_pairing(&rs, 0.1);
        assert_eq!(p.pairs.len(), 1);
        assert_eq!((p.pairs[0].0, p.pairs[0].1), (c(1.0, 0.0), c(1.01, 0.0)));
        assert_eq!((p.unpaired_poles, p.unpaired_zeros), (1, 1));
    }

    #[test]
    fn symmetry_examples() {
        let rs = RootSet { poles_inv: vec![c(-2.0, 0.1), c(0.0, 0.1), c(-1.0, -0.3)], ..Default::default() };
        assert!(symmetry_metric(&rs, RootKind::Poles, -1.0, 2.0).unwrap() < 1e-15);
        let rs = RootSet { poles_inv: vec![c(-1.0 + 0.3, 0.0)], ..Default::default() };
        assert!((symmetry_metric(&rs, RootKind::Poles, -1.0, 2.0).unwrap() - 0.3).abs() < 1e-12);
        assert!(symmetry_metric(&RootSet::default(), RootKind::Zeros, 0.0, 1.0).is_err());
    }

    #[test]
    fn ks_on_quantiles() {
        let n = 40;
        let q = potential::segment_equilibrium_quantiles(-3.0, 1.0, n);
        let rs = RootSet { poles_inv: q.iter().map(|&x| c(x, 0.0)).collect(), ..Default::default() };
        let r = ks_distance_to_equilibrium(&rs, RootKind::Poles, (-3.0, 1.0), 0.2).unwrap();
        assert!(r.distance <= 0.5 / n as f64 + 1e-12);
        assert!(ks_distance_to_equilibrium(&rs, RootKind::Zeros, (-3.0, 1.0), 0.2).is_err());
    }

    #[test]
    fn two_charges_symmetric_probe() {
        let cfg = ChargeConfiguration::equal(vec![[-0.5, 0.0], [0.5, 0.0]]).unwrap();
        let e = field_at(&cfg, [0.0, 1e-6], PhysicalUnits::default()).unwrap();
        assert!(e[0].abs() < 1e-15);
    }

    #[test]
    fn duplicate_roots_perturbed() {
        let rs = RootSet { poles_inv: vec![c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], ..Default::default() };
        let cfg = roots_as_charges(&rs, RootKind::Poles).unwrap();
        assert_eq!(cfg.len(), 4);
        assert!(cfg.weights().iter().all(|&w| w == 0.25));
    }
}
