//! Network model, holomorphic-embedding series and reference solutions.
//!
//! Embedding (classical form): for a PQ bus
//! `Σ_k Y_ik V_k(α) = α·conj(S_i)·W_i*(α)` with `W = 1/V` and `W*` the
//! coefficient-wise conjugate. A PV bus carries an unknown real reactive
//! series `Q_i(α)` with `Σ_k Y_ik V_k = (α·P_i − j·Q_i(α))·W_i*` and
//! `V_i·V_i* = v_set²` at every order. The slack bus is held constant.

use crate::algebra::{series_reciprocal, PowerSeries};
use crate::linalg::DenseLu;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coefficient magnitude beyond which the series is flagged as running out
/// of double-precision head-room.
const OVERFLOW_WARN: f64 = 1e150;

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HemError {
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("branch {from}-{to} has zero impedance")]
    SingularBranch { from: u32, to: u32 },
    #[error("germ system is singular (islanded or degenerate network)")]
    SingularGerm,
    #[error("series coefficients overflowed at order {0}")]
    OrderOverflow(usize),
    #[error("Newton diverged at alpha = {alpha} after {iterations} iterations (mismatch {mismatch:.3e})")]
    NewtonDiverged { alpha: f64, iterations: usize, mismatch: f64 },
    #[error("singular Jacobian at alpha = {alpha}")]
    SingularJacobian { alpha: f64 },
    #[error("operation needs a two-bus (slack + PQ) case")]
    NotTwoBus,
    #[error("alpha = {0} lies on a branch cut")]
    OnBranchCut(Complex64),
    #[error("no two-bus load realizes branch points ({bp_neg}, {bp_pos})")]
    Infeasible { bp_neg: f64, bp_pos: f64 },
    #[error("unknown bus id {0}")]
    UnknownBus(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BusKind {
    Slack,
    Pq,
    Pv,
}

fn one() -> f64 {
    1.0
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bus {
    pub id: u32,
    pub kind: BusKind,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub p_inject: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub q_inject: f64,
    #[serde(default = "one")]
    pub v_setpoint: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub shunt_g: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub shunt_b: f64,
}

impl Bus {
    pub fn new(id: u32, kind: BusKind) -> Self {
        Bus { id, kind, p_inject: 0.0, q_inject: 0.0, v_setpoint: 1.0, shunt_g: 0.0, shunt_b: 0.0 }
    }

    /// Complex injection `p + jq` (per unit).
    pub fn injection(&self) -> Complex64 {
        Complex64::new(self.p_inject, self.q_inject)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub from: u32,
    pub to: u32,
    #[serde(default)]
    pub r: f64,
    pub x: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub charging_b: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub tap: f64,
}

impl Branch {
    pub fn line(from: u32, to: u32, r: f64, x: f64) -> Self {
        Branch { from, to, r, x, charging_b: 0.0, tap: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkCase {
    #[serde(rename = "base_mva")]
    pub base_power: f64,
    pub buses: Vec<Bus>,
    pub branches: Vec<Branch>,
}

impl NetworkCase {
    /// Check the structural invariants: one slack, unique ids, no dangling
    /// or zero-impedance branches, connected graph.
    pub fn validate(&self) -> Result<(), HemError> {
        let bad = |m: &str| Err(HemError::InvalidCase(m.to_string()));
        if self.buses.is_empty() {
            return bad("no buses");
        }
        let slacks = self.buses.iter().filter(|b| b.kind == BusKind::Slack).count();
        if slacks == 0 {
            return bad("no slack bus");
        }
        if slacks > 1 {
            return bad("more than one slack bus");
        }
        let mut index = HashMap::new();
        for (k, b) in self.buses.iter().enumerate() {
            if index.insert(b.id, k).is_some() {
                return Err(HemError::InvalidCase(format!("duplicate bus id {}", b.id)));
            }
            let vals = [b.p_inject, b.q_inject, b.v_setpoint, b.shunt_g, b.shunt_b];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(HemError::InvalidCase(format!("non-finite value at bus {}", b.id)));
            }
            if b.kind != BusKind::Pq && !(b.v_setpoint > 0.0) {
                return Err(HemError::InvalidCase(format!("bus {} needs a positive v_setpoint", b.id)));
            }
        }
        let mut adj = vec![Vec::new(); self.buses.len()];
        for br in &self.branches {
            let (Some(&f), Some(&t)) = (index.get(&br.from), index.get(&br.to)) else {
                return Err(HemError::InvalidCase(format!(
                    "dangling branch endpoint in branch {}-{}",
                    br.from, br.to
                )));
            };
            if f == t {
                return Err(HemError::InvalidCase(format!("branch {}-{} is a self-loop", br.from, br.to)));
            }
            if ![br.r, br.x, br.charging_b, br.tap].iter().all(|v| v.is_finite()) || !(br.tap > 0.0) {
                return Err(HemError::InvalidCase(format!("bad parameters on branch {}-{}", br.from, br.to)));
            }
            if br.r * br.r + br.x * br.x == 0.0 {
                return Err(HemError::SingularBranch { from: br.from, to: br.to });
            }
            adj[f].push(t);
            adj[t].push(f);
        }
        let mut seen = vec![false; self.buses.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("network is not connected");
        }
        Ok(())
    }

    pub fn slack_index(&self) -> Option<usize> {
        self.buses.iter().position(|b| b.kind == BusKind::Slack)
    }

    pub fn bus_index(&self, id: u32) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    /// Multiply every P and Q injection by `s` (global loading scale).
    pub fn scale_injections(&mut self, s: f64) {
        for b in &mut self.buses {
            b.p_inject *= s;
            b.q_inject *= s;
        }
    }
}

/// Dense bus admittance matrix in case bus order.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmittanceMatrix {
    pub n: usize,
    entries: Vec<Complex64>,
}

impl AdmittanceMatrix {
    pub fn get(&self, i: usize, k: usize) -> Complex64 {
        self.entries[i * self.n + k]
    }

    fn add(&mut self, i: usize, k: usize, v: Complex64) {
        self.entries[i * self.n + k] += v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).fold(ZERO, |s, (y, x)| s + y * x))
            .collect()
    }
}

/// Standard assembly; the tap sits on the from side (`(y + jb/2)/tap²`
/// there, `−y/tap` off the diagonal).
pub fn build_ybus(case: &NetworkCase) -> Result<AdmittanceMatrix, HemError> {
    let n = case.buses.len();
    let mut y = AdmittanceMatrix { n, entries: vec![ZERO; n * n] };
    for br in &case.branches {
        let (f, t) = match (case.bus_index(br.from), case.bus_index(br.to)) {
            (Some(f), Some(t)) => (f, t),
            _ => return Err(HemError::InvalidCase(format!("dangling branch endpoint in branch {}-{}", br.from, br.to))),
        };
        let z = Complex64::new(br.r, br.x);
        if z.norm_sqr() == 0.0 {
            return Err(HemError::SingularBranch { from: br.from, to: br.to });
        }
        let ys = 1.0 / z;
        let half_b = Complex64::new(0.0, br.charging_b / 2.0);
        let tap = br.tap;
        y.add(f, f, (ys + half_b) / (tap * tap));
        y.add(t, t, ys + half_b);
        y.add(f, t, -ys / tap);
        y.add(t, f, -ys / tap);
    }
    for (k, b) in case.buses.iter().enumerate() {
        y.add(k, k, Complex64::new(b.shunt_g, b.shunt_b));
    }
    Ok(y)
}

/// Per-bus voltage series (case order) plus PV reactive series.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSolution {
    pub bus_ids: Vec<u32>,
    pub voltages: Vec<PowerSeries>,
    /// `(bus id, Q_i(α))` for every PV bus.
    pub reactive: Vec<(u32, PowerSeries)>,
    pub germ: Vec<Complex64>,
    pub order: usize,
}

impl EmbeddedSolution {
    pub fn voltage(&self, id: u32) -> Option<&PowerSeries> {
        self.bus_ids.iter().position(|&b| b == id).map(|k| &self.voltages[k])
    }

    pub fn reactive(&self, id: u32) -> Option<&PowerSeries> {
        self.reactive.iter().find(|(b, _)| *b == id).map(|(_, s)| s)
    }
}

fn slack_voltage(case: &NetworkCase) -> (usize, Complex64) {
    let s = case.slack_index().expect("validated case has a slack bus");
    (s, Complex64::new(case.buses[s].v_setpoint, 0.0))
}

/// Zero-injection solution at α = 0.
pub fn germ(case: &NetworkCase, ybus: &AdmittanceMatrix) -> Result<Vec<Complex64>, HemError> {
    let (s, vs) = slack_voltage(case);
    if case.buses.iter().any(|b| b.kind == BusKind::Pv) {
        // PV magnitudes make the germ nonlinear; flat-start Newton at α = 0
        let start: Vec<Complex64> = case
            .buses
            .iter()
            .map(|b| match b.kind {
                BusKind::Pq => vs,
                _ => Complex64::new(b.v_setpoint, 0.0),
            })
            .collect();
        return newton_solve(case, ybus, 0.0, start).map_err(|e| match e {
            HemError::NewtonDiverged { .. } | HemError::SingularJacobian { .. } => HemError::SingularGerm,
            e => e,
        });
    }
    // no shunt paths to ground: the flat profile solves Y·V = 0 exactly
    let shuntless = case.buses.iter().all(|b| b.shunt_g == 0.0 && b.shunt_b == 0.0)
        && case.branches.iter().all(|br| br.charging_b == 0.0 && br.tap == 1.0);
    if shuntless {
        return Ok(vec![vs; case.buses.len()]);
    }
    let ns: Vec<usize> = (0..case.buses.len()).filter(|&k| k != s).collect();
    let m = ns.len();
    let a = DMatrix::from_fn(m, m, |r, c| ybus.get(ns[r], ns[c]));
    let b = DVector::from_fn(m, |r, _| -ybus.get(ns[r], s) * vs);
    let lu = DenseLu::new(a);
    if lu.is_singular(1e-14) {
        return Err(HemError::SingularGerm);
    }
    let x = lu.solve(&b).ok_or(HemError::SingularGerm)?;
    let mut v = vec![vs; case.buses.len()];
    for (r, &k) in ns.iter().enumerate() {
        v[k] = x[r];
    }
    Ok(v)
}

/// Maclaurin coefficients of every bus voltage through `order`.
pub fn hem_series(case: &NetworkCase, order: usize) -> Result<EmbeddedSolution, HemError> {
    case.validate()?;
    let ybus = build_ybus(case)?;
    let nb = case.buses.len();
    let (s, vs) = slack_voltage(case);
    let v0 = germ(case, &ybus)?;
    let ns: Vec<usize> = (0..nb).filter(|&k| k != s).collect();
    let pos: HashMap<usize, usize> = ns.iter().enumerate().map(|(p, &k)| (k, p)).collect();
    let pv: Vec<usize> = ns.iter().copied().filter(|&k| case.buses[k].kind == BusKind::Pv).collect();
    let m = ns.len();
    let dim = 2 * m + pv.len();

    let i0 = ybus.mul_vec(&v0);
    // reactive germ of PV buses: Q = Im(V·conj(YV))
    let q0: Vec<f64> = pv.iter().map(|&k| (v0[k] * i0[k].conj()).im).collect();

    let mut a = DMatrix::<f64>::zeros(dim, dim);
    for (p, &i) in ns.iter().enumerate() {
        for (pk, &k) in ns.iter().enumerate() {
            let c = ybus.get(i, k);
            a[(2 * p, 2 * pk)] += c.re;
            a[(2 * p, 2 * pk + 1)] -= c.im;
            a[(2 * p + 1, 2 * pk)] += c.im;
            a[(2 * p + 1, 2 * pk + 1)] += c.re;
        }
    }
    for (q, &i) in pv.iter().enumerate() {
        let p = pos[&i];
        let cv0 = v0[i].conj();
        // −j·Q0·conj(W[n]) contributes through conj(V[n])
        let d = -J * q0[q] / (cv0 * cv0);
        a[(2 * p, 2 * p)] += d.re;
        a[(2 * p, 2 * p + 1)] += d.im;
        a[(2 * p + 1, 2 * p)] += d.im;
        a[(2 * p + 1, 2 * p + 1)] -= d.re;
        let e = J / cv0;
        a[(2 * p, 2 * m + q)] += e.re;
        a[(2 * p + 1, 2 * m + q)] += e.im;
        a[(2 * m + q, 2 * p)] = 2.0 * v0[i].re;
        a[(2 * m + q, 2 * p + 1)] = 2.0 * v0[i].im;
    }
    let lu = DenseLu::new(a);
    if order > 0 && lu.is_singular(1e-14) {
        return Err(HemError::SingularGerm);
    }

    let mut v: Vec<Vec<Complex64>> = v0.iter().map(|&x| vec![x]).collect();
    let mut w: Vec<Vec<Complex64>> = v0.iter().map(|&x| vec![1.0 / x]).collect();
    let mut qs: Vec<Vec<f64>> = q0.iter().map(|&x| vec![x]).collect();
    let mut warned = false;

    for n in 1..=order {
        let mut rhs = DVector::<f64>::zeros(dim);
        for (p, &i) in ns.iter().enumerate() {
            let bus = &case.buses[i];
            let r = match bus.kind {
                BusKind::Pv => {
                    let q = pv.iter().position(|&k| k == i).unwrap();
                    let mut k_i = ZERO;
                    for j in 1..n {
                        k_i += v[i][j] * w[i][n - j];
                    }
                    k_i = -k_i / v[i][0];
                    let mut acc = bus.p_inject * w[i][n - 1].conj();
                    for mm in 1..n {
                        acc -= J * qs[q][mm] * w[i][n - mm].conj();
                    }
                    acc - J * qs[q][0] * k_i.conj()
                }
                _ => bus.injection().conj() * w[i][n - 1].conj(),
            };
            rhs[2 * p] = r.re;
            rhs[2 * p + 1] = r.im;
        }
        for (q, &i) in pv.iter().enumerate() {
            let mut acc = 0.0;
            for j in 1..n {
                acc += (v[i][j] * v[i][n - j].conj()).re;
            }
            rhs[2 * m + q] = -acc;
        }
        let x = lu.solve(&rhs).ok_or(HemError::SingularGerm)?;
        v[s].push(ZERO);
        for (p, &i) in ns.iter().enumerate() {
            v[i].push(Complex64::new(x[2 * p], x[2 * p + 1]));
        }
        for (q, _) in pv.iter().enumerate() {
            qs[q].push(x[2 * m + q]);
        }
        for i in 0..nb {
            let mut acc = ZERO;
            for j in 1..=n {
                acc += v[i][j] * w[i][n - j];
            }
            w[i].push(-acc / v[i][0]);
        }
        let big = ns.iter().map(|&i| v[i][n].norm()).fold(0.0, f64::max);
        if !big.is_finite() {
            return Err(HemError::OrderOverflow(n));
        }
        if big > OVERFLOW_WARN && !warned {
            log::warn!("series coefficients reach {big:.2e} at order {n}; double precision head-room is nearly exhausted");
            warned = true;
        }
    }
    debug_assert!(v[s].iter().skip(1).all(|c| *c == ZERO) && v[s][0] == vs);

    Ok(EmbeddedSolution {
        bus_ids: case.buses.iter().map(|b| b.id).collect(),
        voltages: v.into_iter().map(PowerSeries::from_vec_unchecked).collect(),
        reactive: pv
            .iter()
            .zip(qs)
            .map(|(&k, q)| {
                let c = q.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
                (case.buses[k].id, PowerSeries::from_vec_unchecked(c))
            })
            .collect(),
        germ: v0,
        order,
    })
}

/// Partial sums of every bus series at `alpha`.
pub fn evaluate_solution(sol: &EmbeddedSolution, alpha: Complex64) -> Vec<Complex64> {
    sol.voltages.iter().map(|s| s.eval(alpha)).collect()
}

/// Scaled coefficient residual of the embedded equations, one entry per
/// order `0..=sol.order`: the worst `|residual| / Σ|terms|` over buses
/// (plus the PV magnitude rows).
pub fn embedding_residual(case: &NetworkCase, sol: &EmbeddedSolution) -> Result<Vec<f64>, HemError> {
    let ybus = build_ybus(case)?;
    let nb = case.buses.len();
    let n_ord = sol.order;
    let w: Vec<PowerSeries> = sol
        .voltages
        .iter()
        .map(|v| series_reciprocal(v, n_ord).map_err(|_| HemError::SingularGerm))
        .collect::<Result<_, _>>()?;
    let mut out = vec![0.0f64; n_ord + 1];
    for (n, slot) in out.iter_mut().enumerate() {
        for i in 0..nb {
            let bus = &case.buses[i];
            if bus.kind == BusKind::Slack {
                continue;
            }
            let mut lhs = ZERO;
            let mut scale = 0.0;
            for k in 0..nb {
                let t = ybus.get(i, k) * sol.voltages[k].coeffs()[n];
                lhs += t;
                scale += t.norm();
            }
            let wi = w[i].coeffs();
            let mut rhs = ZERO;
            match bus.kind {
                BusKind::Pq => {
                    if n >= 1 {
                        let t = bus.injection().conj() * wi[n - 1].conj();
                        rhs += t;
                        scale += t.norm();
                    }
                }
                BusKind::Pv => {
                    let q = sol.reactive(bus.id).ok_or(HemError::UnknownBus(bus.id))?.coeffs();
                    if n >= 1 {
                        let t = bus.p_inject * wi[n - 1].conj();
                        rhs += t;
                        scale += t.norm();
                    }
                    for mm in 0..=n {
                        let t = -J * q[mm].re * wi[n - mm].conj();
                        rhs += t;
                        scale += t.norm();
                    }
                    let vi = sol.voltages[i].coeffs();
                    let mut mag = if n == 0 { -bus.v_setpoint * bus.v_setpoint } else { 0.0 };
                    let mut mscale = if n == 0 { bus.v_setpoint * bus.v_setpoint } else { 0.0 };
                    for j in 0..=n {
                        let t = vi[j] * vi[n - j].conj();
                        mag += t.re;
                        mscale += t.norm();
                    }
                    *slot = slot.max(scaled(mag.abs(), mscale));
                }
                BusKind::Slack => unreachable!(),
            }
            *slot = slot.max(scaled((lhs - rhs).norm(), scale));
        }
    }
    Ok(out)
}

fn scaled(r: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

fn mismatch(case: &NetworkCase, ybus: &AdmittanceMatrix, v: &[Complex64], alpha: f64, pvpq: &[usize], pq: &[usize]) -> (Vec<f64>, f64) {
    let i = ybus.mul_vec(v);
    let mis: Vec<Complex64> = (0..v.len())
        .map(|k| v[k] * i[k].conj() - alpha * case.buses[k].injection())
        .collect();
    let f: Vec<f64> = pvpq.iter().map(|&k| mis[k].re).chain(pq.iter().map(|&k| mis[k].im)).collect();
    let norm = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (f, norm)
}

/// Polar Newton–Raphson with all injections scaled by `alpha`.
pub(crate) fn newton_solve(
    case: &NetworkCase,
    ybus: &AdmittanceMatrix,
    alpha: f64,
    start: Vec<Complex64>,
) -> Result<Vec<Complex64>, HemError> {
    let nb = case.buses.len();
    let pvpq: Vec<usize> = (0..nb).filter(|&k| case.buses[k].kind != BusKind::Slack).collect();
    let pq: Vec<usize> = (0..nb).filter(|&k| case.buses[k].kind == BusKind::Pq).collect();
    let (n1, n2) = (pvpq.len(), pq.len());
    let mut v = start;
    let mut va: Vec<f64> = v.iter().map(|x| x.arg()).collect();
    let mut vm: Vec<f64> = v.iter().map(|x| x.norm()).collect();
    let (mut f, mut norm) = mismatch(case, ybus, &v, alpha, &pvpq, &pq);
    let first = norm;
    for it in 0..NEWTON_MAX_ITER {
        if norm <= NEWTON_TOL {
            return Ok(v);
        }
        if !norm.is_finite() || norm > 1e8 * first.max(1.0) {
            return Err(HemError::NewtonDiverged { alpha, iterations: it, mismatch: norm });
        }
        let ibus = ybus.mul_vec(&v);
        let vn: Vec<Complex64> = v.iter().map(|x| x / x.norm()).collect();
        let ds_dva = |i: usize, k: usize| {
            let d = if i == k { ibus[i] } else { ZERO };
            J * v[i] * (d - ybus.get(i, k) * v[k]).conj()
        };
        let ds_dvm = |i: usize, k: usize| {
            let d = if i == k { ibus[i].conj() * vn[i] } else { ZERO };
            v[i] * (ybus.get(i, k) * vn[k]).conj() + d
        };
        let jac = DMatrix::from_fn(n1 + n2, n1 + n2, |r, c| {
            let (row_p, i) = if r < n1 { (true, pvpq[r]) } else { (false, pq[r - n1]) };
            let val = if c < n1 { ds_dva(i, pvpq[c]) } else { ds_dvm(i, pq[c - n1]) };
            if row_p {
                val.re
            } else {
                val.im
            }
        });
        let lu = DenseLu::new(jac);
        if lu.is_singular(1e-15) {
            return Err(HemError::SingularJacobian { alpha });
        }
        let dx = lu
            .solve(&DVector::from_vec(f.clone()))
            .ok_or(HemError::SingularJacobian { alpha })?;
        for (r, &k) in pvpq.iter().enumerate() {
            va[k] -= dx[r];
        }
        for (r, &k) in pq.iter().enumerate() {
            vm[k] -= dx[n1 + r];
        }
        for k in 0..nb {
            v[k] = Complex64::from_polar(vm[k], va[k]);
        }
        (f, norm) = mismatch(case, ybus, &v, alpha, &pvpq, &pq);
    }
    if norm <= NEWTON_TOL {
        return Ok(v);
    }
    Err(HemError::NewtonDiverged { alpha, iterations: NEWTON_MAX_ITER, mismatch: norm })
}

/// High-voltage power-flow solution at loading `alpha`, started from the germ.
pub fn newton_reference(case: &NetworkCase, alpha: f64) -> Result<Vec<Complex64>, HemError> {
    case.validate()?;
    let ybus = build_ybus(case)?;
    let v0 = germ(case, &ybus)?;
    newton_solve(case, &ybus, alpha, v0)
}

/// Largest loading at which Newton still converges, found by bracketing and
/// bisection with warm starts along the real axis. For a well-posed case this
/// is the positive real branch point (saddle-node) to within `tol`.
pub fn locate_positive_branch_point(case: &NetworkCase, tol: f64) -> Result<f64, HemError> {
    case.validate()?;
    let ybus = build_ybus(case)?;
    let v0 = germ(case, &ybus)?;
    let mut lo = 0.0;
    let mut v_lo = v0;
    let mut step = 0.25;
    // march outward until Newton fails, then bisect the last interval
    let mut hi = loop {
        let trial = lo + step;
        match newton_solve(case, &ybus, trial, v_lo.clone()) {
            Ok(v) => {
                lo = trial;
                v_lo = v;
                step *= 2.0;
                if lo > 1e6 {
                    return Err(HemError::InvalidCase("no loading limit found".into()));
                }
            }
            Err(HemError::InvalidCase(m)) => return Err(HemError::InvalidCase(m)),
            Err(_) => break trial,
        }
    };
    while hi - lo > tol * lo.max(1e-3) {
        let mid = 0.5 * (lo + hi);
        match newton_solve(case, &ybus, mid, v_lo.clone()) {
            Ok(v) => {
                lo = mid;
                v_lo = v;
            }
            Err(_) => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Two-bus case (slack at v = 1, one x = 0.1 line, one load) whose voltage
/// series has branch points exactly at the given α-plane locations.
pub fn calibrate_two_bus(bp_neg: f64, bp_pos: f64) -> Result<NetworkCase, HemError> {
    if !(bp_neg < 0.0 && bp_pos > 0.0 && bp_neg.is_finite() && bp_pos.is_finite()) {
        return Err(HemError::Infeasible { bp_neg, bp_pos });
    }
    // normalized quadratic V² + V(2iqα − 1) − aα = 0, a = S/conj(y);
    // its discriminant 1 + 4pα − 4q²α² vanishes at the requested points.
    let q2 = -1.0 / (4.0 * bp_pos * bp_neg);
    let p = q2 * (bp_pos + bp_neg);
    let a = Complex64::new(p, q2.sqrt());
    let x = 0.1;
    let y = 1.0 / Complex64::new(0.0, x);
    let s = a * y.conj();
    let mut load = Bus::new(2, BusKind::Pq);
    load.p_inject = s.re;
    load.q_inject = s.im;
    Ok(NetworkCase {
        base_power: 100.0,
        buses: vec![Bus::new(1, BusKind::Slack), load],
        branches: vec![Branch::line(1, 2, 0.0, x)],
    })
}

/// `A = Y_pp`, `B = Y_ps·v_slack` and the PQ injection of a two-bus case;
/// the embedded balance reduces to
/// `−A·conj(B)·V² + (α(AS − conj(AS)) − |B|²)·V + α·B·S = 0`.
struct TwoBus {
    a: Complex64,
    b: Complex64,
    s: Complex64,
}

fn two_bus_parts(case: &NetworkCase) -> Result<TwoBus, HemError> {
    if case.buses.len() != 2 {
        return Err(HemError::NotTwoBus);
    }
    let s = case.slack_index().ok_or(HemError::NotTwoBus)?;
    let pq = 1 - s;
    if case.buses[pq].kind != BusKind::Pq {
        return Err(HemError::NotTwoBus);
    }
    let ybus = build_ybus(case)?;
    let vs = case.buses[s].v_setpoint;
    Ok(TwoBus { a: ybus.get(pq, pq), b: ybus.get(pq, s) * vs, s: case.buses[pq].injection() })
}

/// α-plane branch points `(negative, positive)` of a two-bus case; a
/// missing one is reported as ±∞.
pub fn two_bus_branch_points(case: &NetworkCase) -> Result<(f64, f64), HemError> {
    let t = two_bus_parts(case)?;
    let b2 = t.b.norm_sqr();
    let as_ = t.a * t.s;
    let m = as_.norm();
    let pos = if m - as_.re > 0.0 { b2 / (2.0 * (m - as_.re)) } else { f64::INFINITY };
    let neg = if m + as_.re > 0.0 { -b2 / (2.0 * (m + as_.re)) } else { f64::NEG_INFINITY };
    Ok((neg, pos))
}

/// Exact PQ-bus voltage of a two-bus case: the root of the embedded
/// quadratic that equals the germ at α = 0, continued off the real cuts.
pub fn two_bus_closed_form(case: &NetworkCase, alpha: Complex64) -> Result<Complex64, HemError> {
    let t = two_bus_parts(case)?;
    let (neg, pos) = two_bus_branch_points(case)?;
    let on_real = alpha.im.abs() <= 1e-15 * alpha.norm();
    if on_real && ((pos.is_finite() && alpha.re / pos >= 1.0) || (neg.is_finite() && alpha.re / neg >= 1.0)) {
        return Err(HemError::OnBranchCut(alpha));
    }
    let b2 = t.b.norm_sqr();
    let as_ = t.a * t.s;
    let c2 = -t.a * t.b.conj();
    let c1 = alpha * (as_ - as_.conj()) - b2;
    let one = Complex64::new(1.0, 0.0);
    let factor = |bp: f64| if bp.is_finite() { (one - alpha / bp).sqrt() } else { one };
    let root = b2 * factor(pos) * factor(neg);
    Ok((-c1 + root) / (2.0 * c2))
}
