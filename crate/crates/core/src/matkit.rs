//! Small dense complex matrices.
//!
//! Everything here is sized for two-qubit work: 2×2 Pauli blocks, the 3×3
//! correlation matrix, 4×4 density matrices and the occasional 8×8 Hermitian
//! dilation. Storage is a flat row-major `Vec<Complex64>`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Largest dimension accepted by the eigensolver.
pub const MAX_DIM: usize = 8;

/// Maximum entrywise |a - a†| accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-NEGATIVE_CLAMP, 0)` are treated as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    TooLarge(usize),
    #[error("matrix is not Hermitian (max |a - a†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix has a negative eigenvalue {value:.3e}")]
    NegativeEigenvalue { value: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
}

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(MatError::BadLength {
                expected: rows * cols,
                got: data.len(),
            });
        }
        let m = Self { rows, cols, data };
        if !m.is_finite() {
            return Err(MatError::NonFinite);
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        Self::from_fn(n, m, |r, c| Complex64::new(rows[r][c], 0.0))
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(values[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Projector |v⟩⟨v|.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |r, c| v[r] * v[c].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|z| z * k)
    }

    pub fn scale_complex(&self, k: Complex64) -> Self {
        self.map(|z| z * k)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            self.dims(),
            other.dims(),
            "max_abs_diff: dimension mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise |a - a†|.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// (a + a†) / 2.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square(), "hermitian_part needs a square matrix");
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, MatError> {
        self.same_dims("add", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, MatError> {
        self.same_dims("sub", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, MatError> {
        if self.cols != other.rows {
            return Err(MatError::DimensionMismatch {
                op: "mul",
                left: self.dims(),
                right: other.dims(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    fn same_dims(&self, op: &'static str, other: &Self) -> Result<(), MatError> {
        if self.dims() != other.dims() {
            return Err(MatError::DimensionMismatch {
                op,
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(rhs).expect("matrix mul")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; the left factor indexes the high (qubit 1) slot.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.dims();
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Spectrum and eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V diag(f(λ)) V†.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| v[(r, k)] * v[(c, k)].conj() * w[k]).sum()
        })
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<(), MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if a.rows > MAX_DIM {
        return Err(MatError::TooLarge(a.rows));
    }
    if !a.is_finite() {
        return Err(MatError::NonFinite);
    }
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(MatError::NotHermitian { deviation });
    }
    Ok(())
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows;
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += m[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices up to 8×8.
///
/// Each rotation first strips the phase of the pivot `a_pq` and then applies
/// the classical real Jacobi rotation, so the accumulated transform stays
/// unitary and the diagonal stays real.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen, MatError> {
    check_hermitian(a)?;
    let n = a.rows;
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_REL_TOL * m.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        let residual = off_diagonal_norm(&m);
        if residual > threshold {
            return Err(MatError::NoConvergence {
                sweeps: MAX_SWEEPS,
                residual,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>, MatError> {
    hermitian_eigen(a).map(|e| e.eigenvalues)
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let phase_conj = phase.conj();
    let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let n = m.rows;

    // A <- A G, V <- V G with G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q).
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c - akq * (phase_conj * s);
        m[(k, q)] = akp * s + akq * (phase_conj * c);
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * (phase_conj * s);
        v[(k, q)] = vkp * s + vkq * (phase_conj * c);
    }
    // A <- G† A
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c - aqk * (phase * s);
        m[(q, k)] = apk * s + aqk * (phase * c);
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix, MatError> {
    let eig = hermitian_eigen(a)?;
    if let Some(&worst) = eig.eigenvalues.first() {
        if worst < -NEGATIVE_CLAMP {
            return Err(MatError::NegativeEigenvalue { value: worst });
        }
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()).hermitian_part())
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli() -> [ComplexMatrix; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        ComplexMatrix::from_vec(2, 2, vec![o, one, one, o]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![o, -i, i, o]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![one, o, o, -one]).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn matrix_from(n: usize, raw: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |r, col| {
            let k = 2 * (r * n + col);
            c(raw[k], raw[k + 1])
        })
    }

    fn hermitian_from(n: usize, raw: &[f64]) -> ComplexMatrix {
        matrix_from(n, raw).hermitian_part()
    }

    #[test]
    fn kron_identity() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sigma_y_pair_is_antidiagonal() {
        let [_, sy, _] = pauli();
        let yy = kron(&sy, &sy);
        // σ_y entries are ±i, so the products along the anti-diagonal are
        // (−i)(−i) = −1, (−i)(i) = 1, (i)(−i) = 1, (i)(i) = −1.
        let expected = [-1.0, 1.0, 1.0, -1.0];
        for r in 0..4 {
            for col in 0..4 {
                let want = if r + col == 3 { expected[r] } else { 0.0 };
                assert_eq!(yy[(r, col)], c(want, 0.0), "entry ({r},{col})");
            }
        }
    }

    #[test]
    fn kron_basis_projectors() {
        let p = kron(
            &ComplexMatrix::diag(&[1.0, 0.0]),
            &ComplexMatrix::diag(&[0.0, 1.0]),
        );
        assert_eq!(p, ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn mul_rejects_mismatched_dims() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            a.checked_mul(&b),
            Err(MatError::DimensionMismatch { op: "mul", .. })
        ));
        assert!(a.checked_add(&ComplexMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn from_vec_rejects_nan() {
        let err = ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, MatError::NonFinite);
    }

    #[test]
    fn eigen_of_diagonal() {
        let e = hermitian_eigen(&ComplexMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigen_of_sigma_y() {
        let [_, sy, _] = pauli();
        let e = hermitian_eigen(&sy).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_of_werner_correlation_product() {
        // Correlation matrix of the X-family Werner state at p = 0.8 is
        // diag(0.8, -0.8, 0.8) (Pauli traces), so TᵀT = 0.64 I.
        let t = ComplexMatrix::diag(&[0.8, -0.8, 0.8]);
        let u = &t.transpose() * &t;
        let e = hermitian_eigen(&u).unwrap();
        for l in e.eigenvalues {
            assert!((l - 0.64).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(
            hermitian_eigen(&a),
            Err(MatError::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_rejects_oversized() {
        assert_eq!(
            hermitian_eigen(&ComplexMatrix::identity(9)).unwrap_err(),
            MatError::TooLarge(9)
        );
    }

    #[test]
    fn eigen_of_zero_matrix() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 4]);
    }

    #[test]
    fn eigen_is_deterministic() {
        let raw: Vec<f64> = (0..32)
            .map(|k| ((k * 37 % 11) as f64 - 5.0) / 7.0)
            .collect();
        let a = hermitian_from(4, &raw);
        let e1 = hermitian_eigen(&a).unwrap();
        let e2 = hermitian_eigen(&a).unwrap();
        assert_eq!(e1.eigenvalues, e2.eigenvalues);
        assert_eq!(e1.eigenvectors, e2.eigenvectors);
    }

    #[test]
    fn psd_sqrt_examples() {
        let i4 = ComplexMatrix::identity(4);
        assert!(psd_sqrt(&i4).unwrap().max_abs_diff(&i4) < 1e-15);

        let d = psd_sqrt(&ComplexMatrix::diag(&[4.0, 1.0, 0.0, 9.0])).unwrap();
        assert!(d.max_abs_diff(&ComplexMatrix::diag(&[2.0, 1.0, 0.0, 3.0])) < 1e-14);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let proj = ComplexMatrix::outer(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        assert!(psd_sqrt(&proj).unwrap().max_abs_diff(&proj) < 1e-12);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        let err = psd_sqrt(&ComplexMatrix::diag(&[1.0, -0.2])).unwrap_err();
        assert!(
            matches!(err, MatError::NegativeEigenvalue { value } if (value + 0.2).abs() < 1e-15)
        );
        // Round-off scale negatives are clamped.
        let ok = psd_sqrt(&ComplexMatrix::diag(&[1.0, -1e-12])).unwrap();
        assert_eq!(ok[(1, 1)], c(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn kron_is_associative(
            a in proptest::collection::vec(-1.0f64..1.0, 8),
            b in proptest::collection::vec(-1.0f64..1.0, 8),
            d in proptest::collection::vec(-1.0f64..1.0, 8),
        ) {
            let (a, b, d) = (matrix_from(2, &a), matrix_from(2, &b), matrix_from(2, &d));
            let left = kron(&kron(&a, &b), &d);
            let right = kron(&a, &kron(&b, &d));
            prop_assert!(left.max_abs_diff(&right) < 1e-13);
        }

        #[test]
        fn kron_is_bilinear(
            a in proptest::collection::vec(-1.0f64..1.0, 8),
            a2 in proptest::collection::vec(-1.0f64..1.0, 8),
            b in proptest::collection::vec(-1.0f64..1.0, 18),
            k in -2.0f64..2.0,
        ) {
            let (a, a2, b) = (matrix_from(2, &a), matrix_from(2, &a2), matrix_from(3, &b));
            let lhs = kron(&(&a + &a2.scale(k)), &b);
            let rhs = &kron(&a, &b) + &kron(&a2, &b).scale(k);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
        }

        #[test]
        fn eigen_reconstructs_random_hermitian(raw in proptest::collection::vec(-1.0f64..1.0, 32)) {
            let a = hermitian_from(4, &raw);
            let e = hermitian_eigen(&a).unwrap();
            let sum: f64 = e.eigenvalues.iter().sum();
            prop_assert!((sum - a.trace().re).abs() < 1e-11);
            prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let back = e.reconstruct_with(|l| l);
            prop_assert!((&back - &a).frobenius_norm() < 1e-11);
            let v = &e.eigenvectors;
            let gram = &v.adjoint() * v;
            prop_assert!((&gram - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-12);
        }

        #[test]
        fn eigen_handles_eight_by_eight(raw in proptest::collection::vec(-1.0f64..1.0, 128)) {
            let a = hermitian_from(8, &raw);
            let e = hermitian_eigen(&a).unwrap();
            let v = &e.eigenvectors;
            let av = &a * v;
            let vl = &v.clone() * &ComplexMatrix::diag(&e.eigenvalues);
            prop_assert!((&av - &vl).frobenius_norm() < 1e-11);
        }

        #[test]
        fn psd_sqrt_squares_back(raw in proptest::collection::vec(-1.0f64..1.0, 32)) {
            let m = matrix_from(4, &raw);
            let a = &m.adjoint() * &m;
            let s = psd_sqrt(&a).unwrap();
            prop_assert!(s.hermitian_deviation() < 1e-14);
            prop_assert!((&(&s * &s) - &a).frobenius_norm() < 1e-10);
        }
    }
}
