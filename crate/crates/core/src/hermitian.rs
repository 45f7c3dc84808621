//! Dense Hermitian matrices and their real spectra.
//!
//! The eigensolver contract everything else leans on: all eigenvalues of an
//! N x N Hermitian matrix, sorted ascending, with backward error at most
//! `1e-9 * (1 + inf_norm)`. Inputs must be Hermitian entrywise within 1e-12;
//! the solver then symmetrizes exactly before factorizing so the contract is
//! independent of which triangle the caller filled in.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative tolerance for multiset spectrum comparisons.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Dense complex conjugate-symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Accepts a square matrix that is Hermitian within [`HERMITIAN_TOL`].
    pub fn try_new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::pre(format!(
                "matrix is not square: {} x {}",
                m.nrows(),
                m.ncols()
            )));
        }
        for u in 0..m.nrows() {
            for v in u..m.ncols() {
                let diff = (m[(u, v)] - m[(v, u)].conj()).norm();
                if diff > HERMITIAN_TOL {
                    return Err(Error::pre(format!(
                        "matrix is not Hermitian within {HERMITIAN_TOL:e}: entry ({u}, {v}) \
                         deviates by {diff:e}"
                    )));
                }
            }
        }
        Ok(HermitianMatrix { m })
    }

    /// Wraps a matrix that is Hermitian by construction.
    pub(crate) fn new_unchecked(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.nrows() == m.ncols());
        HermitianMatrix { m }
    }

    /// Real symmetric input, checked within [`HERMITIAN_TOL`].
    pub fn from_real(m: DMatrix<f64>) -> Result<Self> {
        Self::try_new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, u: usize, v: usize) -> Complex64 {
        self.m[(u, v)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.m.nrows())
            .map(|u| (0..self.m.ncols()).map(|v| self.m[(u, v)].norm()).sum())
            .fold(0.0, f64::max)
    }

    /// All eigenvalues, sorted ascending with multiplicity.
    pub fn eigenvalues(&self) -> Spectrum {
        let n = self.size();
        if n == 0 {
            return Spectrum { values: Vec::new() };
        }
        // Symmetrize exactly so the factorization sees a perfectly Hermitian
        // matrix; the perturbation is below the construction tolerance.
        let mut a = self.m.clone();
        for u in 0..n {
            a[(u, u)] = Complex64::new(a[(u, u)].re, 0.0);
            for v in u + 1..n {
                let avg = 0.5 * (a[(u, v)] + a[(v, u)].conj());
                a[(u, v)] = avg;
                a[(v, u)] = avg.conj();
            }
        }
        let eig = a.symmetric_eigen();
        Spectrum::from_unsorted(eig.eigenvalues.iter().copied().collect())
    }
}

/// Sorted real eigenvalue multiset.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Largest absolute eigenvalue; 0 for an empty spectrum.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Multiset union (re-sorted).
    pub fn merge(&self, other: &Spectrum) -> Spectrum {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Spectrum::from_unsorted(values)
    }

    /// max_j |lambda_j + lambda_{N+1-j}|, the deviation from symmetry about 0.
    pub fn symmetry_discrepancy(&self) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|j| (self.values[j] + self.values[n - 1 - j]).abs())
            .fold(0.0, f64::max)
    }
}

/// Largest elementwise gap between two sorted multisets, `None` on length
/// mismatch.
pub fn multiset_max_discrepancy(a: &Spectrum, b: &Spectrum) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    Some(
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

/// Table of the k-th roots of unity, `root[t] = exp(2 pi i t / k)`, built so
/// that `root[k - t]` is exactly the conjugate of `root[t]`.
pub fn roots_of_unity(k: u32) -> Vec<Complex64> {
    let k = k as usize;
    let mut roots = vec![Complex64::new(1.0, 0.0); k];
    for t in 1..k {
        roots[t] = if 2 * t == k {
            Complex64::new(-1.0, 0.0)
        } else if 2 * t > k {
            roots[k - t].conj()
        } else if 4 * t == k {
            Complex64::new(0.0, 1.0)
        } else {
            let angle = 2.0 * std::f64::consts::PI * t as f64 / k as f64;
            Complex64::new(angle.cos(), angle.sin())
        };
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_adjacency_eigenvalues() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let s = HermitianMatrix::from_real(a).unwrap().eigenvalues();
        assert!((s.values()[0] + 1.0).abs() < 1e-12);
        assert!((s.values()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_adjacency_eigenvalues() {
        // Roots of x^3 - 3x - 2 = (x - 2)(x + 1)^2.
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]);
        let s = HermitianMatrix::from_real(a).unwrap().eigenvalues();
        let expect = [-1.0, -1.0, 2.0];
        for (got, want) in s.values().iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn zero_matrix_spectrum() {
        let s = HermitianMatrix::from_real(DMatrix::zeros(4, 4))
            .unwrap()
            .eigenvalues();
        assert_eq!(s.values(), &[0.0; 4]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        a[(0, 1)] = Complex64::new(1.0, 0.5);
        a[(1, 0)] = Complex64::new(1.0, 0.5); // should be the conjugate
        assert!(HermitianMatrix::try_new(a).is_err());
    }

    #[test]
    fn complex_hermitian_unit_modulus_eigenvalues() {
        // Single edge with a cube-root-of-unity entry: eigenvalues +-1.
        let roots = roots_of_unity(3);
        let mut a = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
        a[(0, 1)] = roots[1];
        a[(1, 0)] = roots[1].conj();
        let s = HermitianMatrix::try_new(a).unwrap().eigenvalues();
        assert!((s.values()[0] + 1.0).abs() < 1e-12);
        assert!((s.values()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn roots_table_conjugate_symmetry() {
        for k in 2..=12u32 {
            let roots = roots_of_unity(k);
            assert_eq!(roots[0], Complex64::new(1.0, 0.0));
            for t in 1..k as usize {
                assert_eq!(roots[t].conj(), roots[(k as usize - t) % k as usize]);
                assert!((roots[t].norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn backward_error_on_random_hermitian() {
        // || H v - lambda v || small is implied by sorted-spectrum agreement
        // with the characteristic polynomial route elsewhere; here check the
        // trace identities, which are exact linear functionals.
        let roots = roots_of_unity(5);
        let n = 6;
        let mut a = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        let mut t = 0usize;
        for u in 0..n {
            for v in (u + 1)..n {
                a[(u, v)] = roots[t % 5];
                a[(v, u)] = roots[t % 5].conj();
                t += 1;
            }
        }
        let h = HermitianMatrix::try_new(a.clone()).unwrap();
        let s = h.eigenvalues();
        let trace: f64 = s.values().iter().sum();
        assert!(trace.abs() < 1e-9 * (1.0 + h.inf_norm()));
        let frob_sq: f64 = s.values().iter().map(|x| x * x).sum();
        let expect: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert!((frob_sq - expect).abs() < 1e-8 * (1.0 + expect));
    }

    #[test]
    fn symmetry_discrepancy_detects_asymmetry() {
        let s = Spectrum::from_unsorted(vec![-2.0, -1.0, 1.0, 2.0]);
        assert_eq!(s.symmetry_discrepancy(), 0.0);
        let s = Spectrum::from_unsorted(vec![-2.0, 1.0, 2.0]);
        assert!(s.symmetry_discrepancy() > 0.9);
    }
}
