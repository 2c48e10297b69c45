//! `[L/M]` Padé approximants from Maclaurin coefficients.

use crate::algebra::{convolve, poly_roots, AlgebraError, Polynomial, PowerSeries, ROOT_MAX_ITER};
use crate::linalg::DenseLu;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Default residual tolerance for pole/zero extraction.
pub const ROOT_TOL: f64 = 1e-8;
/// Roots closer to the origin than this have no inverse-plane image.
pub const INV_THRESHOLD: f64 = 1e-12;
/// Condition numbers above this are logged as a warning.
pub const COND_WARN: f64 = 1e14;
/// Backward error of the Toeplitz solve above which the block is declared
/// degenerate.
const BACKWARD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PadeError {
    #[error("[{l}/{m}] needs series order {need}, got {have}")]
    InsufficientOrder { l: usize, m: usize, need: usize, have: usize },
    #[error("degenerate Padé block [{l}/{m}] (condition {condition:.3e})")]
    DegenerateBlock { l: usize, m: usize, condition: f64 },
    #[error("alpha = {0} hits a pole of the approximant")]
    PoleHit(Complex64),
    #[error("approximant has neither poles nor zeros")]
    NoRoots,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    pub numerator: Polynomial,
    /// Constant term exactly 1.
    pub denominator: Polynomial,
    pub l: usize,
    pub m: usize,
    /// One-norm condition number of the (growth-scaled) Toeplitz system.
    pub condition: f64,
}

/// Poles and zeros in the α-plane and their images under `z = 1/α`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    pub poles_alpha: Vec<Complex64>,
    pub zeros_alpha: Vec<Complex64>,
    pub poles_inv: Vec<Complex64>,
    pub zeros_inv: Vec<Complex64>,
    pub m: usize,
}

/// Which roots of a [`RootSet`] an operation looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    Poles,
    Zeros,
    Both,
}

impl RootSet {
    /// Inverse-plane roots of the requested kind.
    pub fn inv(&self, which: RootKind) -> Vec<Complex64> {
        match which {
            RootKind::Poles => self.poles_inv.clone(),
            RootKind::Zeros => self.zeros_inv.clone(),
            RootKind::Both => self.poles_inv.iter().chain(&self.zeros_inv).copied().collect(),
        }
    }
}

/// Geometric growth factor used to equilibrate the coefficients before the
/// Toeplitz solve; the approximant itself is invariant under α ↦ ρα.
fn growth_scale(c: &[Complex64], n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (a, b) = (c[0].norm(), c[n].norm());
    if a > 0.0 && b > 0.0 {
        let rho = (a / b).powf(1.0 / n as f64);
        if rho.is_finite() {
            return rho.clamp(1e-8, 1e8);
        }
    }
    1.0
}

/// Builds `[L/M]` from the accuracy-through-order conditions.
///
/// The denominator solves `Σ_{j=1..M} c_{L+k−j}·b_j = −c_{L+k}`, `k = 1..M`,
/// by LU with partial pivoting on growth-scaled coefficients; the numerator is
/// the truncated product `(c·Q)` through degree `L`.
pub fn build_pade(series: &PowerSeries, l: usize, m: usize) -> Result<PadeApproximant, PadeError> {
    let need = l + m;
    if series.order() < need {
        return Err(PadeError::InsufficientOrder { l, m, need, have: series.order() });
    }
    let c = series.coeffs();
    let mut b = vec![Complex64::new(1.0, 0.0)];
    let mut condition = 1.0;
    if m > 0 {
        let rho = growth_scale(c, need);
        let mut pw = vec![1.0f64; need + 1];
        for k in 1..=need {
            pw[k] = pw[k - 1] * rho;
        }
        let cs = |k: isize| -> Complex64 {
            if k < 0 {
                Complex64::new(0.0, 0.0)
            } else {
                c[k as usize] * pw[k as usize]
            }
        };
        let t = DMatrix::from_fn(m, m, |r, col| cs(l as isize + (r + 1) as isize - (col + 1) as isize));
        let rhs = DVector::from_fn(m, |r, _| -cs((l + r + 1) as isize));
        let lu = DenseLu::new(t.clone());
        condition = lu.condition_1();
        let degenerate = PadeError::DegenerateBlock { l, m, condition };
        if lu.is_singular(m as f64 * f64::EPSILON) {
            return Err(degenerate);
        }
        let x = lu.solve(&rhs).ok_or_else(|| degenerate.clone())?;
        let resid = (&t * &x - &rhs).camax();
        let inf_norm = (0..m).map(|r| t.row(r).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
        let backward = resid / (inf_norm * x.camax() + rhs.camax()).max(f64::MIN_POSITIVE);
        if !(backward <= BACKWARD_TOL) || x.iter().any(|z| !z.is_finite()) {
            return Err(degenerate);
        }
        if condition > COND_WARN {
            log::warn!("[{l}/{m}] Toeplitz system has condition {condition:.2e}; expect spurious pole-zero pairs");
        }
        b.extend(x.iter().enumerate().map(|(j, z)| z / pw[j + 1]));
    }
    let numerator = convolve(c, &b, l);
    let pa = PadeApproximant {
        numerator: Polynomial::new(numerator),
        denominator: Polynomial::new(b),
        l,
        m,
        condition,
    };
    Ok(pa)
}

/// Coefficients of `series·Q − P` through order `n` (zero through `L` by
/// construction, small through `L+M`).
pub fn defect_series(pa: &PadeApproximant, series: &PowerSeries, n: usize) -> Vec<Complex64> {
    let mut e = convolve(series.coeffs(), pa.denominator.coeffs(), n);
    for (k, a) in pa.numerator.coeffs().iter().enumerate() {
        if k <= n {
            e[k] -= a;
        }
    }
    e
}

pub fn eval_pade(pa: &PadeApproximant, alpha: Complex64) -> Result<Complex64, PadeError> {
    let q = pa.denominator.eval(alpha);
    let a = alpha.norm();
    let scale: f64 = pa
        .denominator
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, b)| b.norm() * a.powi(j as i32))
        .sum();
    if q.norm() <= f64::EPSILON * scale {
        return Err(PadeError::PoleHit(alpha));
    }
    Ok(pa.numerator.eval(alpha) / q)
}

/// Poles (denominator roots) and zeros (numerator roots) in both planes.
pub fn pole_zero_sets(pa: &PadeApproximant, root_tol: f64) -> Result<RootSet, PadeError> {
    let deg = |p: &Polynomial| p.degree().unwrap_or(0);
    if deg(&pa.numerator) == 0 && deg(&pa.denominator) == 0 {
        return Err(PadeError::NoRoots);
    }
    let roots = |p: &Polynomial| -> Result<Vec<Complex64>, PadeError> {
        if deg(p) >= 1 {
            Ok(poly_roots(p, root_tol, ROOT_MAX_ITER)?)
        } else {
            Ok(Vec::new())
        }
    };
    let poles_alpha = roots(&pa.denominator)?;
    let zeros_alpha = roots(&pa.numerator)?;
    let inv = |v: &[Complex64]| -> Vec<Complex64> {
        v.iter().filter(|r| r.norm() > INV_THRESHOLD).map(|r| 1.0 / r).collect()
    };
    Ok(RootSet {
        poles_inv: inv(&poles_alpha),
        zeros_inv: inv(&zeros_alpha),
        poles_alpha,
        zeros_alpha,
        m: pa.m,
    })
}

/// Default-tolerance shorthand used by the CLI and diagnostics.
pub fn diagonal_roots(series: &PowerSeries, m: usize) -> Result<(PadeApproximant, RootSet), PadeError> {
    let pa = build_pade(series, m, m)?;
    let rs = pole_zero_sets(&pa, ROOT_TOL)?;
    Ok((pa, rs))
}
