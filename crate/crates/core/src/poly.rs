//! Real univariate polynomials: construction from roots or coefficients,
//! root finding via balanced companion matrices, real-rootedness tests, and
//! common interlacings of families.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;

/// Default relative tolerance for declaring a computed root real.
pub const REAL_ROOT_TOL: f64 = 1e-6;

/// Dense real-coefficient polynomial, ascending degree order. The zero
/// polynomial is represented by an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds from ascending coefficients, trimming exact trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        // In-place ascending multiply by (x - r): new[i+1] gets old[i] before
        // old[i+1] is scaled, so iterate from the top.
        let mut coeffs = vec![0.0; roots.len() + 1];
        coeffs[0] = 1.0;
        let mut degree = 0;
        for &r in roots {
            for i in (0..=degree).rev() {
                coeffs[i + 1] += coeffs[i];
                coeffs[i] *= -r;
            }
            degree += 1;
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<f64> {
        self.coeffs.last().copied()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scaled(&self, c: f64) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|&a| c * a).collect())
    }

    /// All complex roots via the eigenvalues of the balanced companion
    /// matrix of the monic normalization.
    pub fn complex_roots(&self) -> Result<Vec<Complex64>> {
        let Some(degree) = self.degree() else {
            return Err(Error::pre("the zero polynomial has no well-defined roots"));
        };
        if degree == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[degree];
        let mut companion = DMatrix::zeros(degree, degree);
        for i in 1..degree {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..degree {
            companion[(i, degree - 1)] = -self.coeffs[i] / lead;
        }
        balance(&mut companion);
        hessenberg_eigenvalues(companion)
    }

    /// True iff every companion root satisfies `|Im| <= tol * (1 + |root|)`.
    pub fn is_real_rooted(&self, tol: f64) -> Result<bool> {
        Ok(self
            .complex_roots()?
            .iter()
            .all(|r| r.im.abs() <= tol * (1.0 + r.norm())))
    }

    /// Worst relative imaginary part over all roots (0 for constants).
    pub fn max_relative_imag(&self) -> Result<f64> {
        Ok(self
            .complex_roots()?
            .iter()
            .map(|r| r.im.abs() / (1.0 + r.norm()))
            .fold(0.0, f64::max))
    }

    /// Real parts of the roots, sorted ascending; requires real-rootedness
    /// within `tol`.
    pub fn real_roots_sorted(&self, tol: f64) -> Result<Vec<f64>> {
        let roots = self.complex_roots()?;
        if let Some(bad) = roots.iter().find(|r| r.im.abs() > tol * (1.0 + r.norm())) {
            return Err(Error::pre(format!(
                "polynomial is not real-rooted within {tol:e}: root {bad}"
            )));
        }
        let mut reals: Vec<f64> = roots.iter().map(|r| r.re).collect();
        reals.sort_by(f64::total_cmp);
        Ok(reals)
    }

    /// Largest root of a real-rooted polynomial.
    pub fn largest_root(&self, tol: f64) -> Result<f64> {
        self.real_roots_sorted(tol)?
            .last()
            .copied()
            .ok_or_else(|| Error::pre("constant polynomial has no roots"))
    }

    /// Largest root of a polynomial known to be real-rooted in exact
    /// arithmetic. Coefficient roundoff splits near-multiple roots into
    /// conjugate pairs with imaginary parts around sqrt(noise), far above
    /// any strict classification tolerance, but their real parts stay put;
    /// so this takes the max real part and only rejects roots whose
    /// relative imaginary part exceeds the loose `sanity_tol`.
    pub fn largest_root_assuming_real(&self, sanity_tol: f64) -> Result<f64> {
        let roots = self.complex_roots()?;
        if roots.is_empty() {
            return Err(Error::pre("constant polynomial has no roots"));
        }
        if let Some(bad) = roots
            .iter()
            .find(|r| r.im.abs() > sanity_tol * (1.0 + r.norm()))
        {
            return Err(Error::pre(format!(
                "polynomial expected to be real-rooted has a genuinely complex root {bad}"
            )));
        }
        Ok(roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Accumulator for convex combinations of same-degree polynomials without
/// intermediate trimming.
#[derive(Debug, Clone)]
pub struct PolynomialSum {
    coeffs: Vec<f64>,
}

impl PolynomialSum {
    pub fn new(len: usize) -> Self {
        PolynomialSum {
            coeffs: vec![0.0; len],
        }
    }

    pub fn add_scaled(&mut self, p: &Polynomial, weight: f64) {
        for (acc, &c) in self.coeffs.iter_mut().zip(p.coeffs()) {
            *acc += weight * c;
        }
    }

    pub fn merge(&mut self, other: &PolynomialSum) {
        for (acc, &c) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *acc += c;
        }
    }

    pub fn into_polynomial(self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs)
    }
}

/// Monic characteristic polynomial `det(xI - H)`, assembled from the
/// eigenvalues of the Hermitian input.
pub fn char_poly(h: &HermitianMatrix) -> Polynomial {
    Polynomial::from_roots(h.eigenvalues().values())
}

/// Whether the family has a common interlacing: for every j, the j-th roots
/// of all members all lie weakly left of all (j+1)-th roots (within `tol`).
/// Requires equal degrees, positive leading coefficients, and
/// real-rootedness within `tol`.
pub fn has_common_interlacing(family: &[Polynomial], tol: f64) -> Result<bool> {
    if family.len() <= 1 {
        return Ok(true);
    }
    let degree = family[0]
        .degree()
        .ok_or_else(|| Error::pre("zero polynomial in family"))?;
    let mut roots = Vec::with_capacity(family.len());
    for p in family {
        if p.degree() != Some(degree) {
            return Err(Error::pre(format!(
                "degree mismatch in family: expected {degree}, found {:?}",
                p.degree()
            )));
        }
        if p.leading().unwrap_or(0.0) <= 0.0 {
            return Err(Error::pre(
                "common interlacing requires positive leading coefficients",
            ));
        }
        roots.push(p.real_roots_sorted(tol)?);
    }
    for j in 0..degree.saturating_sub(1) {
        let max_lower = roots.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
        let min_upper = roots.iter().map(|r| r[j + 1]).fold(f64::INFINITY, f64::min);
        if max_lower > min_upper + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR
/// with exceptional shifts, in the EISPACK hqr lineage. The companion
/// matrix of a polynomial is already Hessenberg and balancing preserves
/// that, so this is the whole eigensolve.
fn hessenberg_eigenvalues(mut a: DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    let mut eigs = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eigs);
    }
    let sign = |magnitude: f64, carrier: f64| {
        if carrier >= 0.0 {
            magnitude.abs()
        } else {
            -magnitude.abs()
        }
    };
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let mut shift_total = 0.0;
    let mut high = n - 1;
    'deflate: loop {
        let mut its = 0;
        loop {
            // Find a negligible subdiagonal entry splitting the block.
            let mut low = 0;
            for l in (1..=high).rev() {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[(l, l - 1)] = 0.0;
                    low = l;
                    break;
                }
            }
            let x = a[(high, high)];
            if low == high {
                // One real eigenvalue.
                eigs[high] = Complex64::new(x + shift_total, 0.0);
                if high == 0 {
                    break 'deflate;
                }
                high -= 1;
                break;
            }
            let y = a[(high - 1, high - 1)];
            let w = a[(high, high - 1)] * a[(high - 1, high)];
            if low + 1 == high {
                // A 2x2 block: real pair or conjugate pair.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + shift_total;
                if q >= 0.0 {
                    let z = p + sign(z, p);
                    eigs[high - 1] = Complex64::new(x + z, 0.0);
                    eigs[high] = if z != 0.0 {
                        Complex64::new(x - w / z, 0.0)
                    } else {
                        Complex64::new(x + z, 0.0)
                    };
                } else {
                    eigs[high - 1] = Complex64::new(x + p, z);
                    eigs[high] = Complex64::new(x + p, -z);
                }
                if high == 1 {
                    break 'deflate;
                }
                high -= 2;
                break;
            }
            if its == 60 {
                return Err(Error::pre(
                    "companion-matrix eigensolve did not converge in 60 iterations",
                ));
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its % 10 == 9 {
                // Exceptional shift.
                shift_total += x;
                for i in 0..=high {
                    a[(i, i)] -= x;
                }
                let s = a[(high, high - 1)].abs() + a[(high - 1, high - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // Start the bulge chase where two consecutive subdiagonal
            // entries are already small.
            let (start, mut p, mut q, mut r) = {
                let mut m = high - 2;
                loop {
                    let z = a[(m, m)];
                    let rr = x - z;
                    let ss = y - z;
                    let p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                    let q = a[(m + 1, m + 1)] - z - rr - ss;
                    let r = a[(m + 2, m + 1)];
                    let scale = p.abs() + q.abs() + r.abs();
                    let (p, q, r) = (p / scale, q / scale, r / scale);
                    if m == low {
                        break (m, p, q, r);
                    }
                    let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                    let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                    if u <= f64::EPSILON * v {
                        break (m, p, q, r);
                    }
                    m -= 1;
                }
            };
            for i in (start + 2)..=high {
                a[(i, i - 2)] = 0.0;
                if i != start + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }
            // Double QR step on rows low..=high.
            for k in start..high {
                if k != start {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = if k != high - 1 {
                        a[(k + 2, k - 1)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == start {
                    if low != start {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                // Apply the reflector from the left to rows k..k+2.
                for j in k..=high {
                    let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                    if k != high - 1 {
                        pp += r * a[(k + 2, j)];
                        a[(k + 2, j)] -= pp * z;
                    }
                    a[(k + 1, j)] -= pp * y;
                    a[(k, j)] -= pp * x;
                }
                // And from the right to columns k..k+2.
                let upper = high.min(k + 3);
                for i in low..=upper {
                    let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                    if k != high - 1 {
                        pp += z * a[(i, k + 2)];
                        a[(i, k + 2)] -= pp * r;
                    }
                    a[(i, k + 1)] -= pp * q;
                    a[(i, k)] -= pp;
                }
            }
        }
    }
    Ok(eigs)
}

/// Parlett-Reinsch balancing: diagonal similarity by powers of two until row
/// and column norms roughly agree. Exact in floating point and improves the
/// conditioning of the companion eigenproblem.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    const SQR: f64 = RADIX * RADIX;
    let n = a.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| a[(j, i)].abs()).sum();
            if r == 0.0 || c == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= SQR;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= SQR;
            }
            if (c + r) / f < 0.95 * s && f != 1.0 {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}
