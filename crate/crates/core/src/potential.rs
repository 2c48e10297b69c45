//! Discrete logarithmic potential theory in the plane: energies, Fekete
//! configurations, capacities, potentials and fields.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type Point = [f64; 2];

const COINCIDENT: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PotentialError {
    #[error("charges {0} and {1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("evaluation point coincides with charge {0}")]
    CoincidentWithCharge(usize),
    #[error("invalid charge configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("Fekete optimizer stopped after {iterations} iterations with stationarity {stationarity:.3e}")]
    MaxIterReached {
        iterations: usize,
        stationarity: f64,
        best: Box<FeketeSolution>,
    },
    #[error("a_const must be 1 for the energy/capacity identity (got {0})")]
    AConstNotUnity(f64),
    #[error("energy must be positive (got {0})")]
    NonPositiveEnergy(f64),
    #[error("point {0} lies on the segment")]
    OnSegment(Complex64),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
}

/// Normalized discrete charge measure: `w_i ≥ 0`, `Σ w_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeConfiguration {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl ChargeConfiguration {
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self, PotentialError> {
        let bad = |m: String| Err(PotentialError::InvalidConfiguration(m));
        if points.is_empty() || points.len() != weights.len() {
            return bad(format!("{} points, {} weights", points.len(), weights.len()));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return bad("non-finite point".into());
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return bad("negative weight".into());
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return bad(format!("weights sum to {total}"));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if dist(points[i], points[j]) < COINCIDENT {
                    return Err(PotentialError::CoincidentPoints(j, i));
                }
            }
        }
        Ok(ChargeConfiguration { points, weights })
    }

    /// Equal weights `1/N`.
    pub fn equal(points: Vec<Point>) -> Result<Self, PotentialError> {
        let n = points.len();
        Self::new(points, vec![1.0 / n.max(1) as f64; n])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `r ↦ s·r + shift`, weights unchanged.
    pub fn affine(&self, s: f64, shift: Point) -> Result<Self, PotentialError> {
        let pts = self.points.iter().map(|p| [s * p[0] + shift[0], s * p[1] + shift[1]]).collect();
        Self::new(pts, self.weights.clone())
    }
}

/// Permittivity and reference distance of the logarithmic potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalUnits {
    pub epsilon0: f64,
    pub a_const: f64,
}

impl Default for PhysicalUnits {
    fn default() -> Self {
        PhysicalUnits { epsilon0: 1.0 / (4.0 * PI), a_const: 1.0 }
    }
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// `Σ_{i≠j} w_i w_j ln(1/|r_i − r_j|)` (self-energy omitted).
pub fn discrete_energy(cfg: &ChargeConfiguration) -> Result<f64, PotentialError> {
    let (p, w) = (&cfg.points, &cfg.weights);
    let mut e = 0.0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let d = dist(p[i], p[j]);
            if d < COINCIDENT {
                return Err(PotentialError::CoincidentPoints(i, j));
            }
            e -= 2.0 * w[i] * w[j] * d.ln();
        }
    }
    Ok(e)
}

/// Energy renormalized for the missing diagonal: with `s = Σw²`,
/// `I = (E + s·ln(1/s)) / (1 − s)`. For equal weights `e^{−I}` equals the
/// transfinite-diameter approximant `δ_N / N^{1/(N−1)}`, which is exactly 1
/// on the roots of unity and tends to cap(E) as N grows.
pub fn normalized_energy(cfg: &ChargeConfiguration) -> Result<f64, PotentialError> {
    let e = discrete_energy(cfg)?;
    let s: f64 = cfg.weights.iter().map(|w| w * w).sum();
    if s >= 1.0 {
        return Err(PotentialError::TooFewPoints { need: 2, got: cfg.len() });
    }
    Ok((e + s * (1.0 / s).ln()) / (1.0 - s))
}

/// Logarithmic capacity estimate `exp(−I)` with `I` from [`normalized_energy`].
pub fn capacity_estimate(cfg: &ChargeConfiguration) -> Result<f64, PotentialError> {
    Ok((-normalized_energy(cfg)?).exp())
}

/// Arcsine (equilibrium) CDF of the segment `[a, b]`.
pub fn segment_equilibrium_cdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= a {
        0.0
    } else if x >= b {
        1.0
    } else {
        (2.0 / PI) * ((x - a) / (b - a)).sqrt().asin()
    }
}

/// Quantiles `(k + 1/2)/N` of the arcsine law on `[a, b]`.
pub fn segment_equilibrium_quantiles(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let u = (k as f64 + 0.5) / n as f64;
            a + (b - a) * (0.5 * PI * u).sin().powi(2)
        })
        .collect()
}

fn check_probe(cfg: &ChargeConfiguration, r: Point) -> Result<(), PotentialError> {
    match cfg.points.iter().position(|&p| dist(p, r) < 1e-12) {
        Some(i) => Err(PotentialError::CoincidentWithCharge(i)),
        None => Ok(()),
    }
}

/// `(1/(2πε₀))·Σ w_i ln(a/|r − r_i|)`.
pub fn potential_at(cfg: &ChargeConfiguration, r: Point, units: PhysicalUnits) -> Result<f64, PotentialError> {
    check_probe(cfg, r)?;
    let s: f64 = cfg
        .points
        .iter()
        .zip(&cfg.weights)
        .map(|(&p, w)| w * (units.a_const / dist(p, r)).ln())
        .sum();
    Ok(s / (2.0 * PI * units.epsilon0))
}

/// `(1/(2πε₀))·Σ w_i (r − r_i)/|r − r_i|²`.
pub fn field_at(cfg: &ChargeConfiguration, r: Point, units: PhysicalUnits) -> Result<Point, PotentialError> {
    check_probe(cfg, r)?;
    let mut e = [0.0, 0.0];
    for (&p, w) in cfg.points.iter().zip(&cfg.weights) {
        let (dx, dy) = (r[0] - p[0], r[1] - p[1]);
        let d2 = dx * dx + dy * dy;
        e[0] += w * dx / d2;
        e[1] += w * dy / d2;
    }
    let k = 1.0 / (2.0 * PI * units.epsilon0);
    Ok([k * e[0], k * e[1]])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyCapacity {
    pub per_length_energy: f64,
    pub capacity_from_energy: f64,
}

/// Per-unit-length energy `I/(4πε₀)` and the capacity `exp(−4πε₀·E_pL)`
/// it implies; the latter coincides with [`capacity_estimate`].
pub fn energy_capacity_relation(cfg: &ChargeConfiguration, units: PhysicalUnits) -> Result<EnergyCapacity, PotentialError> {
    if units.a_const != 1.0 {
        return Err(PotentialError::AConstNotUnity(units.a_const));
    }
    let e_pl = normalized_energy(cfg)? / (4.0 * PI * units.epsilon0);
    Ok(EnergyCapacity {
        per_length_energy: e_pl,
        capacity_from_energy: (-4.0 * PI * units.epsilon0 * e_pl).exp(),
    })
}

/// `C = Q²/(2E)`.
pub fn electrostatic_capacitance(total_charge: f64, energy: f64) -> Result<f64, PotentialError> {
    if !(energy > 0.0) {
        return Err(PotentialError::NonPositiveEnergy(energy));
    }
    Ok(total_charge * total_charge / (2.0 * energy))
}

/// Exact convergence factor `1/|φ(1/α)|` for a straight cut `[A, B]` in the
/// inverse plane, `φ` the exterior conformal map of the segment.
pub fn segment_green_cf(a: f64, b: f64, alpha: Complex64) -> Result<f64, PotentialError> {
    if alpha.norm() == 0.0 {
        return Ok(0.0);
    }
    let z = 1.0 / alpha;
    if z.im.abs() <= 1e-15 * z.norm() && z.re >= a && z.re <= b {
        return Err(PotentialError::OnSegment(z));
    }
    let w = (2.0 * z - a - b) / (b - a);
    let s = (w * w - 1.0).sqrt();
    let phi = if (w + s).norm() >= (w - s).norm() { w + s } else { w - s };
    Ok(1.0 / phi.norm())
}

// ---------------------------------------------------------------------------
// curves

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
    cum: Vec<f64>,
}

impl Polyline {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Position and unit tangent at arc length `s` (clamped to the piece).
    pub fn locate(&self, s: f64) -> (Point, Point) {
        let s = s.clamp(0.0, self.length());
        let k = match self.cum.partition_point(|&c| c <= s) {
            0 => 0,
            k => (k - 1).min(self.points.len() - 2),
        };
        let (p, q) = (self.points[k], self.points[k + 1]);
        let len = self.cum[k + 1] - self.cum[k];
        let t = [(q[0] - p[0]) / len, (q[1] - p[1]) / len];
        let u = s - self.cum[k];
        ([p[0] + u * t[0], p[1] + u * t[1]], t)
    }

    /// Incoming and outgoing unit tangents when `s` sits on an interior vertex
    /// where the direction changes.
    fn kink_at(&self, s: f64) -> Option<(usize, Point, Point)> {
        let tol = 1e-12 * self.length();
        let k = (1..self.points.len() - 1).find(|&k| (s - self.cum[k]).abs() <= tol)?;
        let unit = |a: Point, b: Point, len: f64| [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
        let tin = unit(self.points[k - 1], self.points[k], self.cum[k] - self.cum[k - 1]);
        let tout = unit(self.points[k], self.points[k + 1], self.cum[k + 1] - self.cum[k]);
        let cross = tin[0] * tout[1] - tin[1] * tout[0];
        (cross.abs() > 1e-12).then_some((k, tin, tout))
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_seg(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (d1, d2, d3, d4) = (orient(c, d, a), orient(c, d, b), orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_seg(c, d, a))
        || (d2 == 0.0 && on_seg(c, d, b))
        || (d3 == 0.0 && on_seg(a, b, c))
        || (d4 == 0.0 && on_seg(a, b, d))
}

/// One or more disjoint open polylines (a candidate branch cut).
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCurve {
    pieces: Vec<Polyline>,
}

impl PlanarCurve {
    pub fn new(pieces: Vec<Vec<Point>>) -> Result<Self, PotentialError> {
        let bad = |m: String| Err(PotentialError::InvalidCurve(m));
        if pieces.is_empty() {
            return bad("no pieces".into());
        }
        let mut out = Vec::new();
        for (pi, pts) in pieces.into_iter().enumerate() {
            if pts.len() < 2 {
                return bad(format!("piece {pi} has fewer than two vertices"));
            }
            let mut cum = vec![0.0];
            for w in pts.windows(2) {
                let d = dist(w[0], w[1]);
                if !(d > 0.0) || !d.is_finite() {
                    return bad(format!("piece {pi} has a degenerate edge"));
                }
                cum.push(cum.last().unwrap() + d);
            }
            let n = pts.len() - 1;
            for i in 0..n {
                for j in (i + 2)..n {
                    if segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                        return bad(format!("piece {pi} self-intersects"));
                    }
                }
            }
            out.push(Polyline { points: pts, cum });
        }
        Ok(PlanarCurve { pieces: out })
    }

    /// Real-axis segment `[a, b]`.
    pub fn segment(a: f64, b: f64) -> Result<Self, PotentialError> {
        Self::new(vec![vec![[a, 0.0], [b, 0.0]]])
    }

    pub fn pieces(&self) -> &[Polyline] {
        &self.pieces
    }

    pub fn total_length(&self) -> f64 {
        self.pieces.iter().map(|p| p.length()).sum()
    }
}

// ---------------------------------------------------------------------------
// Fekete points

pub const FEKETE_TOL: f64 = 1e-8;
pub const FEKETE_MAX_ITER: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct FeketeSolution {
    pub config: ChargeConfiguration,
    /// `(piece, arc length)` of every point, grouped by piece, ascending.
    pub params: Vec<(usize, f64)>,
    pub energy: f64,
    /// Energy after every accepted step of the final allocation.
    pub energy_trace: Vec<f64>,
    pub iterations: usize,
    /// Largest tangential gradient magnitude over points not pinned at an end.
    pub stationarity: f64,
}

struct Run {
    s: Vec<Vec<f64>>,
    energy: f64,
    trace: Vec<f64>,
    iterations: usize,
    stationarity: f64,
    converged: bool,
}

fn flatten(curve: &PlanarCurve, s: &[Vec<f64>]) -> Vec<(Point, Point)> {
    s.iter()
        .enumerate()
        .flat_map(|(p, v)| v.iter().map(move |&x| curve.pieces[p].locate(x)))
        .collect()
}

fn energy_of(pos: &[(Point, Point)], w: f64) -> f64 {
    let mut e = 0.0;
    for i in 0..pos.len() {
        for j in (i + 1)..pos.len() {
            let d = dist(pos[i].0, pos[j].0);
            e -= 2.0 * w * w * d.ln();
        }
    }
    e
}

/// Tangential gradient and Hessian of the equal-weight energy.
fn grad_hess(pos: &[(Point, Point)], w: f64) -> (Vec<f64>, DMatrix<f64>) {
    let n = pos.len();
    let mut g = vec![0.0; n];
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        let (ri, ti) = pos[i];
        for j in 0..n {
            if i == j {
                continue;
            }
            let (rj, tj) = pos[j];
            let d = [ri[0] - rj[0], ri[1] - rj[1]];
            let d2 = d[0] * d[0] + d[1] * d[1];
            let dti = d[0] * ti[0] + d[1] * ti[1];
            let dtj = d[0] * tj[0] + d[1] * tj[1];
            let titj = ti[0] * tj[0] + ti[1] * tj[1];
            g[i] -= 2.0 * w * w * dti / d2;
            h[(i, i)] -= 2.0 * w * w * (d2 - 2.0 * dti * dti) / (d2 * d2);
            h[(i, j)] -= 2.0 * w * w * (-titj * d2 + 2.0 * dti * dtj) / (d2 * d2);
        }
    }
    (g, h)
}

/// Derivative of the energy when point `i` moves along `t`.
fn directional(pos: &[(Point, Point)], w: f64, i: usize, t: Point) -> f64 {
    let ri = pos[i].0;
    let mut g = 0.0;
    for (j, &(rj, _)) in pos.iter().enumerate() {
        if j != i {
            let d = [ri[0] - rj[0], ri[1] - rj[1]];
            g -= 2.0 * w * w * (d[0] * t[0] + d[1] * t[1]) / (d[0] * d[0] + d[1] * d[1]);
        }
    }
    g
}

/// Indices the Newton step may move. Points at an end, or on a corner, whose
/// every admissible direction raises the energy stay put (snapped exactly onto
/// the corner).
fn free_points(curve: &PlanarCurve, s: &mut [Vec<f64>], pos: &[(Point, Point)], g: &[f64], w: f64) -> Vec<usize> {
    let mut free = Vec::new();
    let mut k = 0;
    for (p, v) in s.iter_mut().enumerate() {
        let piece = &curve.pieces[p];
        let len = piece.length();
        for x in v.iter_mut() {
            let pinned = if *x <= 0.0 {
                g[k] > 0.0
            } else if *x >= len {
                g[k] < 0.0
            } else if let Some((vk, tin, tout)) = piece.kink_at(*x) {
                let stuck = directional(pos, w, k, tout) >= 0.0 && directional(pos, w, k, tin) <= 0.0;
                if stuck {
                    *x = piece.cum[vk];
                }
                stuck
            } else {
                false
            };
            if !pinned {
                free.push(k);
            }
            k += 1;
        }
    }
    free
}

fn optimize(curve: &PlanarCurve, alloc: &[usize], max_iter: usize, tol: f64) -> Run {
    let n: usize = alloc.iter().sum();
    let w = 1.0 / n as f64;
    let mut s: Vec<Vec<f64>> = alloc
        .iter()
        .enumerate()
        .map(|(p, &k)| {
            let len = curve.pieces[p].length();
            match k {
                0 => vec![],
                1 => vec![0.5 * len],
                _ => (0..k).map(|i| len * i as f64 / (k - 1) as f64).collect(),
            }
        })
        .collect();
    let lens: Vec<f64> = curve.pieces.iter().map(|p| p.length()).collect();
    let mut pos = flatten(curve, &s);
    let mut e = energy_of(&pos, w);
    let mut trace = vec![e];
    let mut stationarity;
    for it in 0..max_iter {
        let (g, h) = grad_hess(&pos, w);
        let free = free_points(curve, &mut s, &pos, &g, w);
        pos = flatten(curve, &s);
        e = energy_of(&pos, w);
        stationarity = free.iter().map(|&k| g[k].abs()).fold(0.0, f64::max);
        if stationarity <= tol {
            return Run { s, energy: e, trace, iterations: it, stationarity, converged: true };
        }
        let m = free.len();
        let hf = DMatrix::from_fn(m, m, |a, b| h[(free[a], free[b])]);
        let gf = DVector::from_fn(m, |a, _| -g[free[a]]);
        let diag = (0..m).map(|a| hf[(a, a)].abs()).fold(0.0, f64::max).max(1e-300);
        let mut lambda = 0.0;
        let step = loop {
            let shifted = &hf + DMatrix::identity(m, m) * lambda;
            if let Some(ch) = shifted.clone().cholesky() {
                break ch.solve(&gf);
            }
            if lambda > 1e6 * diag {
                // fall back to a gradient step
                break &gf / diag;
            }
            lambda = if lambda == 0.0 { 1e-10 * diag } else { lambda * 10.0 };
        };
        let mut d = vec![0.0; n];
        for (a, &k) in free.iter().enumerate() {
            d[k] = step[a];
        }
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-16 {
            let mut trial = s.clone();
            let mut ok = true;
            let mut k = 0;
            for (p, v) in trial.iter_mut().enumerate() {
                for x in v.iter_mut() {
                    *x = (*x + t * d[k]).clamp(0.0, lens[p]);
                    k += 1;
                }
                if v.windows(2).any(|ab| !(ab[1] - ab[0] > COINCIDENT)) {
                    ok = false;
                }
            }
            if ok {
                let tp = flatten(curve, &trial);
                let te = energy_of(&tp, w);
                if te <= e {
                    let moved = trial != s;
                    s = trial;
                    pos = tp;
                    e = te;
                    trace.push(e);
                    accepted = moved;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            // no descent left at round-off level
            return Run { s, energy: e, trace, iterations: it + 1, stationarity, converged: stationarity <= tol };
        }
    }
    let (g, _) = grad_hess(&pos, w);
    let free = free_points(curve, &mut s, &pos, &g, w);
    let stationarity = free.iter().map(|&k| g[k].abs()).fold(0.0, f64::max);
    Run { s, energy: e, trace, iterations: max_iter, stationarity, converged: stationarity <= tol }
}

/// N-point Fekete (minimal discrete energy) configuration on `curve`.
///
/// Points are moved along the curve by projected Newton steps in arc length
/// with backtracking, so the energy never increases. On multi-piece curves the
/// charges share one budget: single charges migrate between pieces while that
/// lowers the energy.
pub fn fekete_points(curve: &PlanarCurve, n: usize, max_iter: usize) -> Result<FeketeSolution, PotentialError> {
    if n < 2 {
        return Err(PotentialError::TooFewPoints { need: 2, got: n });
    }
    let total = curve.total_length();
    let np = curve.pieces.len();
    // initial allocation proportional to length (largest remainder)
    let mut alloc: Vec<usize> = curve.pieces.iter().map(|p| (n as f64 * p.length() / total).floor() as usize).collect();
    let mut rem: Vec<(usize, f64)> = curve
        .pieces
        .iter()
        .enumerate()
        .map(|(i, p)| (i, n as f64 * p.length() / total - alloc[i] as f64))
        .collect();
    rem.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut missing = n - alloc.iter().sum::<usize>();
    for (i, _) in rem.iter().cycle() {
        if missing == 0 {
            break;
        }
        alloc[*i] += 1;
        missing -= 1;
    }
    let mut best = optimize(curve, &alloc, max_iter, FEKETE_TOL);
    if np > 1 {
        loop {
            let mut improved: Option<(Vec<usize>, Run)> = None;
            for from in 0..np {
                for to in 0..np {
                    if from == to || alloc[from] == 0 {
                        continue;
                    }
                    let mut trial = alloc.clone();
                    trial[from] -= 1;
                    trial[to] += 1;
                    let run = optimize(curve, &trial, max_iter, FEKETE_TOL);
                    let target = improved.as_ref().map_or(best.energy, |(_, r)| r.energy);
                    if run.energy < target - 1e-13 {
                        improved = Some((trial, run));
                    }
                }
            }
            match improved {
                Some((a, r)) => {
                    log::debug!("fekete: migrated a charge, allocation {a:?}, energy {}", r.energy);
                    alloc = a;
                    best = r;
                }
                None => break,
            }
        }
    }
    let pos = flatten(curve, &best.s);
    let config = ChargeConfiguration::equal(pos.iter().map(|p| p.0).collect())?;
    let params = best.s.iter().enumerate().flat_map(|(p, v)| v.iter().map(move |&x| (p, x))).collect();
    let sol = FeketeSolution {
        config,
        params,
        energy: best.energy,
        energy_trace: best.trace,
        iterations: best.iterations,
        stationarity: best.stationarity,
    };
    if !best.converged {
        return Err(PotentialError::MaxIterReached {
            iterations: sol.iterations,
            stationarity: sol.stationarity,
            best: Box::new(sol),
        });
    }
    Ok(sol)
}
