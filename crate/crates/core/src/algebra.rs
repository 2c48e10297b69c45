//! Complex polynomials, truncated power series and a simultaneous
//! (Aberth–Ehrlich) polynomial root finder.

use num_complex::Complex64;
use std::f64::consts::PI;

pub type ComplexScalar = Complex64;

/// Default residual tolerance for [`poly_roots`].
pub const ROOT_TOL: f64 = 1e-10;
/// Default sweep budget for [`poly_roots`].
pub const ROOT_MAX_ITER: usize = 200;
/// Above this degree the double-precision roots are flagged as suspect.
pub const PRECISION_DEGREE_LIMIT: usize = 60;

const TINY: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("root finder did not converge after {iterations} sweeps (worst scaled residual {worst_residual:.3e})")]
    NonConvergence { iterations: usize, worst_residual: f64 },
    #[error("polynomial of degree {0} has no roots to find")]
    InvalidDegree(usize),
    #[error("series has a zero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
    #[error("power series needs at least one coefficient")]
    EmptySeries,
}

/// Polynomial with ascending coefficients, kept trimmed: the last stored
/// coefficient is nonzero and the zero polynomial is the empty list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// Monic-free expansion of `lead · Π (z − r)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut c = vec![lead];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        poly_eval(self, z)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Truncated Maclaurin series `c[0] + c[1]α + … + c[N]α^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, AlgebraError> {
        if coeffs.is_empty() {
            return Err(AlgebraError::EmptySeries);
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(AlgebraError::NonFinite(k));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, AlgebraError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Constant series of the given order.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = c;
        PowerSeries { coeffs }
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        PowerSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncation order N (length − 1).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Partial sum at `alpha` (Horner).
    pub fn eval(&self, alpha: Complex64) -> Complex64 {
        horner(&self.coeffs, alpha)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, Complex64::new(0.0, 0.0));
        PowerSeries { coeffs: c }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

/// Horner value of `p` at `z`.
pub fn poly_eval(p: &Polynomial, z: Complex64) -> Complex64 {
    horner(&p.coeffs, z)
}

pub fn poly_derivative(p: &Polynomial) -> Polynomial {
    Polynomial::new(
        p.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect(),
    )
}

/// Cauchy product truncated at order `n`.
pub fn series_mul(a: &PowerSeries, b: &PowerSeries, n: usize) -> PowerSeries {
    PowerSeries::from_vec_unchecked(convolve(&a.coeffs, &b.coeffs, n))
}

pub(crate) fn convolve(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..=k.min(a.len().saturating_sub(1)) {
                if let Some(bk) = b.get(k - j) {
                    s += a[j] * bk;
                }
            }
            s
        })
        .collect()
}

/// `1/a` to order `n`.
pub fn series_reciprocal(a: &PowerSeries, n: usize) -> Result<PowerSeries, AlgebraError> {
    let a0 = a.coeffs[0];
    let scale = a.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if a0.norm() <= f64::EPSILON * scale || a0.norm() < TINY {
        return Err(AlgebraError::ZeroLeadingCoefficient);
    }
    let inv0 = 1.0 / a0;
    let mut w = Vec::with_capacity(n + 1);
    w.push(inv0);
    for k in 1..=n {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(a.order()) {
            s += a.coeffs[j] * w[k - j];
        }
        w.push(-s * inv0);
    }
    Ok(PowerSeries::from_vec_unchecked(w))
}

/// Coefficient-wise conjugate: the series of `conj(a(conj(α)))`.
pub fn series_conj_reflect(a: &PowerSeries) -> PowerSeries {
    PowerSeries::from_vec_unchecked(a.coeffs.iter().map(|c| c.conj()).collect())
}

/// All roots of `p` by Aberth–Ehrlich iteration, sorted by (re, im).
///
/// Each returned root satisfies `|p(r)| ≤ tol · max|c_k| · max(1,|r|)^deg`.
pub fn poly_roots(p: &Polynomial, tol: f64, max_iter: usize) -> Result<Vec<Complex64>, AlgebraError> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Err(AlgebraError::InvalidDegree(deg));
    }
    if deg > PRECISION_DEGREE_LIMIT {
        log::warn!("root finding at degree {deg}: double precision results may be unreliable");
    }
    // exact zero roots first
    let nz = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let c = &p.coeffs[nz..];
    let mut roots = vec![Complex64::new(0.0, 0.0); nz];
    if c.len() > 1 {
        roots.extend(aberth(c, tol, max_iter)?);
    }
    sort_roots(&mut roots);
    Ok(roots)
}

pub(crate) fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// `(p(z)/p'(z), scaled residual, backward error)`; for |z| > 1 the reversed
/// polynomial is used so that nothing overflows. The backward error is
/// `|p(z)| / Σ|c_k||z|^k`.
fn newton_step(c: &[Complex64], cmax: f64, z: Complex64) -> (Complex64, f64, f64) {
    let n = c.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let (mut p, mut dp, mut abs) = (zero, zero, 0.0);
        let a = z.norm();
        for &ck in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + ck;
            abs = abs * a + ck.norm();
        }
        (p / dp, p.norm() / cmax, p.norm() / abs)
    } else {
        let u = 1.0 / z;
        let a = u.norm();
        let (mut q, mut dq, mut abs) = (zero, zero, 0.0);
        for &ck in c.iter() {
            dq = dq * u + q;
            q = q * u + ck;
            abs = abs * a + ck.norm();
        }
        (z / (n as f64 - u * dq / q), q.norm() / cmax, q.norm() / abs)
    }
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, ln|c_k|)` (one circle per hull edge, as many points as the edge spans).
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c.iter().enumerate().filter(|(_, x)| x.norm() > 0.0).map(|(k, x)| (k, x.norm().ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly above the chord a–p
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut z = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let ((i, li), (j, lj)) = (w[0], w[1]);
        let span = j - i;
        let r = ((li - lj) / span as f64).exp();
        for t in 0..span {
            let theta = 2.0 * PI * t as f64 / span as f64 + 2.0 * PI * i as f64 / n as f64 + 0.4;
            z.push(Complex64::from_polar(r, theta));
        }
    }
    z
}

fn aberth(c: &[Complex64], tol: f64, max_iter: usize) -> Result<Vec<Complex64>, AlgebraError> {
    let n = c.len() - 1;
    let lead = c[n];
    if n == 1 {
        return Ok(vec![-c[0] / lead]);
    }
    let cmax = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z = initial_guesses(c);
    // backward error a few ulps above round-off counts as converged
    let floor = 4.0 * (n + 1) as f64 * f64::EPSILON;
    let mut done = vec![false; n];
    for sweep in 0..max_iter {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (ratio, _, backward) = newton_step(c, cmax, z[k]);
            if backward <= floor {
                done[k] = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += 1.0 / (z[k] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                if w.norm() <= 4.0 * f64::EPSILON * z[k].norm() {
                    done[k] = true;
                }
            } else {
                // derivative vanished or roots collided: nudge off the spot
                let nudge = 1e-7 * (1.0 + z[k].norm());
                z[k] += Complex64::from_polar(nudge, 1.0 + k as f64);
            }
        }
        if done.iter().all(|&d| d) {
            log::trace!("aberth: degree {n} converged in {} sweeps", sweep + 1);
            break;
        }
    }
    let mut worst = 0.0f64;
    for &zk in &z {
        let (_, r, _) = newton_step(c, cmax, zk);
        worst = worst.max(r);
    }
    if !(worst <= tol) {
        return Err(AlgebraError::NonConvergence {
            iterations: max_iter,
            worst_residual: worst,
        });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_and_derivative() {
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(poly_eval(&p, c(0.0, 1.0)), c(0.0, 0.0));
        assert_eq!(poly_eval(&Polynomial::from_real(&[-3.0, 1.0]), c(5.0, 0.0)), c(2.0, 0.0));
        assert_eq!(poly_derivative(&p), Polynomial::from_real(&[0.0, 2.0]));
        assert!(poly_derivative(&Polynomial::from_real(&[7.0])).is_zero());
        assert_eq!(
            poly_derivative(&Polynomial::from_real(&[1.0, 2.0, 3.0])),
            Polynomial::from_real(&[2.0, 6.0])
        );
    }

    #[test]
    fn trimming() {
        let p = Polynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial::from_real(&[0.0]).degree(), None);
    }

    #[test]
    fn roots_small() {
        let r = poly_roots(&Polynomial::from_real(&[-1.0, 0.0, 1.0]), ROOT_TOL, ROOT_MAX_ITER).unwrap();
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12 && (r[1] - c(1.0, 0.0)).norm() < 1e-12);
        let r = poly_roots(&Polynomial::from_real(&[1.0, 0.0, 1.0]), ROOT_TOL, ROOT_MAX_ITER).unwrap();
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-12 && (r[1] - c(0.0, 1.0)).norm() < 1e-12);
        let r = poly_roots(&Polynomial::from_real(&[6.0, 1.0, -4.0, 1.0]), ROOT_TOL, ROOT_MAX_ITER).unwrap();
        for (got, want) in r.iter().zip([-1.0, 2.0, 3.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-10, "{got}");
        }
    }

    #[test]
    fn zero_roots_and_constant() {
        let r = poly_roots(&Polynomial::from_real(&[0.0, 0.0, -1.0, 1.0]), ROOT_TOL, ROOT_MAX_ITER).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[0], c(0.0, 0.0));
        assert!(matches!(
            poly_roots(&Polynomial::from_real(&[3.0]), ROOT_TOL, ROOT_MAX_ITER),
            Err(AlgebraError::InvalidDegree(0))
        ));
    }

    #[test]
    fn series_basics() {
        let a = PowerSeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(series_mul(&a, &a, 2).coeffs(), &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        let g = PowerSeries::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let d = PowerSeries::from_real(&[1.0, -1.0, 0.0]).unwrap();
        assert_eq!(series_mul(&g, &d, 2).coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let w = series_reciprocal(&PowerSeries::from_real(&[1.0, -1.0, 0.0, 0.0]).unwrap(), 3).unwrap();
        assert_eq!(w.coeffs(), &[c(1.0, 0.0); 4]);
        let w = series_reciprocal(&PowerSeries::from_real(&[2.0]).unwrap(), 0).unwrap();
        assert_eq!(w.coeffs(), &[c(0.5, 0.0)]);
        let w = series_reciprocal(&a, 3).unwrap();
        assert_eq!(w.coeffs(), &[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(series_reciprocal(&PowerSeries::from_real(&[0.0, 1.0]).unwrap(), 2).is_err());
        let z = PowerSeries::new(vec![c(1.0, 1.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(series_conj_reflect(&z).coeffs(), &[c(1.0, -1.0), c(2.0, 0.0)]);
        assert_eq!(series_conj_reflect(&series_conj_reflect(&z)), z);
    }

    #[test]
    fn from_roots_expands() {
        let p = Polynomial::from_roots(c(1.0, 0.0), &[c(-1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(p, Polynomial::from_real(&[6.0, 1.0, -4.0, 1.0]));
    }
}
