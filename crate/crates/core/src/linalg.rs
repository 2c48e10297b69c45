//! Thin dense-LU helpers over nalgebra.

use nalgebra::{ComplexField, DMatrix, DVector};

/// LU factorization with partial pivoting plus the facts callers need to
/// judge it: smallest pivot relative to the matrix scale and the exact
/// one-norm condition number.
pub(crate) struct DenseLu<T: ComplexField<RealField = f64> + Copy> {
    lu: nalgebra::LU<T, nalgebra::Dyn, nalgebra::Dyn>,
    norm1: f64,
    n: usize,
}

pub(crate) fn norm1<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl<T: ComplexField<RealField = f64> + Copy> DenseLu<T> {
    pub fn new(a: DMatrix<T>) -> Self {
        let n = a.nrows();
        let norm1 = norm1(&a);
        DenseLu { lu: a.lu(), norm1, n }
    }

    /// min |u_kk| / ‖A‖₁; zero for an exactly singular matrix.
    pub fn relative_min_pivot(&self) -> f64 {
        if self.n == 0 {
            return 1.0;
        }
        let u = self.lu.u();
        let m = (0..self.n).map(|k| u[(k, k)].modulus()).fold(f64::INFINITY, f64::min);
        if self.norm1 > 0.0 {
            m / self.norm1
        } else {
            0.0
        }
    }

    pub fn is_singular(&self, rel: f64) -> bool {
        !(self.relative_min_pivot() > rel)
    }

    pub fn solve(&self, b: &DVector<T>) -> Option<DVector<T>> {
        self.lu.solve(b)
    }

    /// κ₁(A) = ‖A‖₁‖A⁻¹‖₁ computed from the explicit inverse (fine for the
    /// small systems used here).
    pub fn condition_1(&self) -> f64 {
        match self.lu.try_inverse() {
            Some(inv) => self.norm1 * norm1(&inv),
            None => f64::INFINITY,
        }
    }
}
