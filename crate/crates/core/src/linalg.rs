//! Dense complex linear algebra for the small fixed dimensions (2, 3, 4)
//! this crate works in. No BLAS ambition: matrices are row-major `Vec`s and
//! every routine is written for O(1)-sized inputs.

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shorthand complex constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    entries: Vec<Complex64>,
}

impl CVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Complex64::default(); dim],
        }
    }

    /// Standard basis vector `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = c64(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries[i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.entries.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rank-1 outer product `|v><v|`.
    pub fn outer(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.entries[i] * self.entries[j].conj());
            }
        }
        m
    }
}

/// Tensor product of two vectors; index `i * b.dim() + j` holds `a_i * b_j`
/// (first factor major).
pub fn kron(a: &CVector, b: &CVector) -> CVector {
    let mut out = Vec::with_capacity(a.dim() * b.dim());
    for &ai in a.entries() {
        for &bj in b.entries() {
            out.push(ai * bj);
        }
    }
    CVector::new(out)
}

/// Complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c64(1.0, 0.0));
        }
        m
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn from_rows_real(rows: &[Vec<f64>]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c64(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    /// Standard matrix product; errors when inner dimensions disagree.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Complex64::default();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}-vector",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Complex64::default();
            for k in 0..self.cols {
                acc += self.get(i, k) * v.get(k);
            }
            out.push(acc);
        }
        Ok(CVector::new(out))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise deviation from `m = m^dag`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

const HERMITIAN_TOL: f64 = 1e-9;
const JACOBI_SWEEPS: usize = 50;

/// Real eigenvalues of a Hermitian matrix (2x2 through 4x4), ascending.
///
/// The 2x2 case uses the closed form; larger sizes run cyclic complex Jacobi
/// rotations to convergence. Errors when the input is not square, not within
/// the supported sizes, or not Hermitian within 1e-9.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    if m.rows() == 2 {
        let a = m.get(0, 0).re;
        let d = m.get(1, 1).re;
        let b = m.get(0, 1).norm();
        let mid = 0.5 * (a + d);
        let r = (0.5 * (a - d)).hypot(b);
        return Ok(vec![mid - r, mid + r]);
    }
    Ok(jacobi(m).0)
}

/// Hermitian eigendecomposition: ascending eigenvalues plus a unitary whose
/// columns are the matching eigenvectors.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m)?;
    Ok(jacobi(m))
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            m.rows(),
            m.cols()
        )));
    }
    if !(2..=4).contains(&m.rows()) {
        return Err(Error::UnsupportedDimension(m.rows()));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * (1.0 + m.max_abs()) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Cyclic complex Jacobi. Each rotation zeroes one off-diagonal pair with a
/// phased Givens rotation; for n <= 4 this converges to machine precision in
/// a handful of sweeps.
fn jacobi(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.rows();
    let mut a = m.clone();
    let mut vecs = CMatrix::identity(n);
    let scale = m.max_abs().max(1e-300);

    for _ in 0..JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.get(i, j).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let b = apq.norm();
                let phase = apq / b; // e^{i arg(apq)}
                let theta = 0.5 * (2.0 * b).atan2(aqq - app);
                let (s, c) = theta.sin_cos();

                let mut rot = CMatrix::identity(n);
                rot.set(p, p, c64(c, 0.0));
                rot.set(p, q, phase * s);
                rot.set(q, p, -phase.conj() * s);
                rot.set(q, q, c64(c, 0.0));

                a = rot
                    .adjoint()
                    .matmul(&a)
                    .and_then(|t| t.matmul(&rot))
                    .expect("square dims");
                vecs = vecs.matmul(&rot).expect("square dims");
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigs: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut sorted_vecs = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            sorted_vecs.set(row, col, vecs.get(row, src));
        }
    }
    (eigs, sorted_vecs)
}

/// Singular values, descending. Computed from the eigenvalues of the smaller
/// Gram matrix, which is exact enough for the O(1)-scaled inputs here.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    let gram = if m.rows() <= m.cols() {
        m.matmul(&m.adjoint())?
    } else {
        m.adjoint().matmul(m)?
    };
    let eigs = if gram.rows() == 1 {
        vec![gram.get(0, 0).re]
    } else {
        hermitian_eigenvalues(&gram)?
    };
    let mut svals: Vec<f64> = eigs.into_iter().map(|l| l.max(0.0).sqrt()).collect();
    svals.reverse();
    Ok(svals)
}

/// Number of singular values above `tol` times the largest one; 0 for the
/// zero matrix.
pub fn numeric_rank(m: &CMatrix, tol: f64) -> Result<usize> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("rank tolerance must be > 0".into()));
    }
    let svals = singular_values(m)?;
    let largest = svals.first().copied().unwrap_or(0.0);
    if largest <= 0.0 {
        return Ok(0);
    }
    Ok(svals.iter().filter(|&&s| s > tol * largest).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn adjoint_of_identity_is_identity() {
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.adjoint(), i2);
    }

    #[test]
    fn adjoint_conjugate_transposes() {
        let m = CMatrix::from_rows(&[
            vec![c64(0.0, 0.0), c64(0.0, 1.0)],
            vec![c64(0.0, 0.0), c64(0.0, 0.0)],
        ]);
        let adj = m.adjoint();
        assert_eq!(adj.get(0, 0), c64(0.0, 0.0));
        assert_eq!(adj.get(1, 0), c64(0.0, -1.0));
        assert_eq!(adj.get(0, 1), c64(0.0, 0.0));
    }

    // The channel matrix for (mu, nu) has rows (0, 0, sin(mu/2) e^{i nu}, 0)
    // and (0, 0, -cos(mu/2), 0); used below as a realistic 2x4 fixture.
    fn channel_matrix(mu: f64, nu: f64) -> CMatrix {
        let mut m = CMatrix::zeros(2, 4);
        m.set(0, 2, Complex64::from_polar((0.5 * mu).sin(), nu));
        m.set(1, 2, c64(-(0.5 * mu).cos(), 0.0));
        m
    }

    #[test]
    fn adjoint_of_channel_matrix() {
        let m = channel_matrix(std::f64::consts::FRAC_PI_2, 0.0);
        let adj = m.adjoint();
        assert_eq!(adj.rows(), 4);
        assert_eq!(adj.cols(), 2);
        let s = 0.5f64.sqrt();
        assert_close(adj.get(2, 0).re, s, 1e-15);
        assert_close(adj.get(2, 1).re, -s, 1e-15);
        let mut nonzero = 0;
        for i in 0..4 {
            for j in 0..2 {
                if adj.get(i, j).norm() > 0.0 {
                    nonzero += 1;
                }
            }
        }
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn matmul_identity_and_projectors() {
        let x = CMatrix::from_rows_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let i2 = CMatrix::identity(2);
        assert_eq!(i2.matmul(&x).unwrap(), x);

        let p0 = CMatrix::from_rows_real(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let p1 = CMatrix::from_rows_real(&[vec![0.0, 0.0], vec![0.0, 1.0]]);
        let prod = p0.matmul(&p1).unwrap();
        assert_close(prod.max_abs(), 0.0, 1e-300);
    }

    #[test]
    fn matmul_channel_times_adjoint() {
        // mu = 0 gives rows (0,0,0,0) and (0,0,-1,0); M M^dag = diag(0, 1).
        let m = channel_matrix(0.0, 0.0);
        let prod = m.matmul(&m.adjoint()).unwrap();
        assert_close(prod.get(0, 0).re, 0.0, 1e-15);
        assert_close(prod.get(1, 1).re, 1.0, 1e-15);
        assert_close(prod.get(0, 1).norm(), 0.0, 1e-15);
    }

    #[test]
    fn matmul_rejects_bad_dims() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(2, 3);
        assert!(a.matmul(&b).is_err());
    }

    #[test]
    fn kron_basis_vectors() {
        let e0 = CVector::basis(2, 0);
        let e1 = CVector::basis(2, 1);
        let k00 = kron(&e0, &e0);
        assert_eq!(k00.entries(), &[c64(1.0, 0.0); 1][..1]);
        assert_eq!(k00.get(0), c64(1.0, 0.0));
        assert_close(k00.norm(), 1.0, 1e-15);
        let k10 = kron(&e1, &e0);
        assert_eq!(k10.get(2), c64(1.0, 0.0));
        assert_close(k10.get(0).norm() + k10.get(1).norm() + k10.get(3).norm(), 0.0, 1e-300);
    }

    #[test]
    fn kron_qubit_with_ket0_activates_columns_one_and_three() {
        let x = 1.1f64;
        let y = 0.7f64;
        let psi = CVector::new(vec![
            c64((0.5 * x).cos(), 0.0),
            Complex64::from_polar((0.5 * x).sin(), -y),
        ]);
        let k = kron(&psi, &CVector::basis(2, 0));
        assert_eq!(k.get(0), psi.get(0));
        assert_eq!(k.get(2), psi.get(1));
        assert_eq!(k.get(1).norm(), 0.0);
        assert_eq!(k.get(3).norm(), 0.0);
    }

    #[test]
    fn outer_products() {
        let e0 = CVector::basis(2, 0);
        let m = e0.outer();
        assert_close(m.get(0, 0).re, 1.0, 1e-15);
        assert_close(m.get(1, 1).norm(), 0.0, 1e-300);

        let s = 0.5f64.sqrt();
        let plus = CVector::new(vec![c64(s, 0.0), c64(s, 0.0)]);
        let m = plus.outer();
        for i in 0..2 {
            for j in 0..2 {
                assert_close(m.get(i, j).re, 0.5, 1e-15);
                assert_close(m.get(i, j).im, 0.0, 1e-300);
            }
        }

        // Global phase cancels in |v><v|.
        let v = CVector::new(vec![c64(0.0, 0.0), Complex64::from_polar(1.0, 2.3)]);
        let m = v.outer();
        assert_close(m.get(1, 1).re, 1.0, 1e-15);
        assert_close(m.get(1, 1).im, 0.0, 1e-16);
        assert_close(m.get(0, 1).norm(), 0.0, 1e-300);
    }

    #[test]
    fn eigenvalues_identity_and_diag() {
        let eigs = hermitian_eigenvalues(&CMatrix::identity(4)).unwrap();
        for e in eigs {
            assert_close(e, 1.0, 1e-14);
        }
        let mut d = CMatrix::zeros(4, 4);
        d.set(2, 2, c64(1.0, 0.0));
        let eigs = hermitian_eigenvalues(&d).unwrap();
        assert_eq!(eigs.len(), 4);
        assert_close(eigs[0], 0.0, 1e-14);
        assert_close(eigs[1], 0.0, 1e-14);
        assert_close(eigs[2], 0.0, 1e-14);
        assert_close(eigs[3], 1.0, 1e-14);
    }

    #[test]
    fn eigenvalues_of_channel_gram() {
        // M^dag M = diag(0, 0, 1, 0) for every (mu, nu).
        for &(mu, nu) in &[(0.0, 0.0), (1.1, 2.4), (std::f64::consts::FRAC_PI_2, 5.0)] {
            let m = channel_matrix(mu, nu);
            let gram = m.adjoint().matmul(&m).unwrap();
            let eigs = hermitian_eigenvalues(&gram).unwrap();
            assert_close(eigs[0], 0.0, 1e-13);
            assert_close(eigs[1], 0.0, 1e-13);
            assert_close(eigs[2], 0.0, 1e-13);
            assert_close(eigs[3], 1.0, 1e-13);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = CMatrix::from_rows_real(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn eigenvectors_satisfy_residual_bound() {
        // Fixed Hermitian 4x4 with mixed complex entries.
        let mut m = CMatrix::zeros(4, 4);
        let vals = [
            (0, 0, 1.0, 0.0),
            (1, 1, -0.5, 0.0),
            (2, 2, 0.25, 0.0),
            (3, 3, 2.0, 0.0),
            (0, 1, 0.3, 0.7),
            (0, 2, -0.2, 0.1),
            (0, 3, 0.0, -0.9),
            (1, 2, 0.5, 0.5),
            (1, 3, -0.1, 0.0),
            (2, 3, 0.8, -0.3),
        ];
        for &(i, j, re, im) in &vals {
            m.set(i, j, c64(re, im));
            if i != j {
                m.set(j, i, c64(re, -im));
            }
        }
        let (eigs, vecs) = hermitian_eigen(&m).unwrap();
        for (k, &lambda) in eigs.iter().enumerate() {
            let v = CVector::new((0..4).map(|r| vecs.get(r, k)).collect());
            let mv = m.apply(&v).unwrap();
            let resid = mv.sub(&v.scale(c64(lambda, 0.0))).norm();
            assert!(resid < 1e-10, "residual {resid} for eigenvalue {lambda}");
        }
    }

    #[test]
    fn two_by_two_closed_form_matches_jacobi() {
        let m = CMatrix::from_rows(&[
            vec![c64(0.7, 0.0), c64(0.2, -0.4)],
            vec![c64(0.2, 0.4), c64(-1.3, 0.0)],
        ]);
        let closed = hermitian_eigenvalues(&m).unwrap();
        let (iter, _) = hermitian_eigen(&m).unwrap();
        assert_close(closed[0], iter[0], 1e-12);
        assert_close(closed[1], iter[1], 1e-12);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numeric_rank(&CMatrix::zeros(3, 3), 1e-9).unwrap(), 0);
        assert_eq!(numeric_rank(&CMatrix::identity(3), 1e-9).unwrap(), 3);
        let m = CMatrix::from_rows_real(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert_eq!(numeric_rank(&m, 1e-9).unwrap(), 2);
    }
}
