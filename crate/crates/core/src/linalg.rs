//! Small complex linear algebra helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Frobenius norm of a complex matrix.
pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// The standard skew matrix J = [[0, I], [-I, 0]] of even order n.
pub fn standard_j(n: usize) -> CMat {
    assert!(n % 2 == 0, "J is only defined for even order");
    let m = n / 2;
    let mut j = CMat::zeros(n, n);
    for i in 0..m {
        j[(i, m + i)] = cone();
        j[(m + i, i)] = -cone();
    }
    j
}

/// Column-stacking of a matrix into a vector.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_iterator(m.nrows() * m.ncols(), m.iter().cloned())
}

/// Inverse of `vectorize` for an n×n matrix.
pub fn unvectorize(v: &CVec, n: usize) -> CMat {
    CMat::from_iterator(n, n, v.iter().cloned())
}

/// Permutation matrix T with T·vec(X) = vec(Xᵗ) on n×n matrices.
pub fn transpose_permutation(n: usize) -> CMat {
    let mut t = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            // vec index of (i,j) is j*n + i
            t[(i * n + j, j * n + i)] = cone();
        }
    }
    t
}

/// tr(A B).
pub fn trace_prod(a: &CMat, b: &CMat) -> Complex64 {
    let mut s = czero();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
    })
}

pub fn random_complex_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| {
        Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
    })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let a = random_complex_matrix(rng, n, n);
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let a = random_complex_matrix(rng, n, n);
    (&a + a.transpose()) * Complex64::new(0.5, 0.0)
}

pub fn random_skew<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let a = random_complex_matrix(rng, n, n);
    (&a - a.transpose()) * Complex64::new(0.5, 0.0)
}

/// Dominant rank-1 factorization M ≈ e·fᵗ (outer product of column and row
/// vectors) via the leading singular pair. Returns (e, f, residual) where the
/// residual is ‖M − e fᵗ‖_F.
pub fn rank_one_factor(m: &CMat) -> (CVec, CVec, f64) {
    // Built on the Hermitian eigensolver rather than the complex SVD, which
    // converges poorly on some inputs. The dominant eigenvector e of M·M* is
    // the leading left singular vector; the matching row factor is e*·M.
    let gram = m * m.adjoint();
    let gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(gram);
    let k = (0..eig.eigenvalues.len())
        .max_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap())
        .unwrap();
    let e: CVec = eig.eigenvectors.column(k).into_owned();
    let f: CVec = m.transpose() * e.map(|z| z.conj());
    let approx = &e * f.transpose();
    let resid = frob(&(m - approx));
    (e, f, resid)
}

/// Orthonormal nullspace basis of a complex matrix; singular values below
/// `tol * max(sigma_max, 1)` count as zero. Computed from the Hermitian
/// eigendecomposition of M*·M (the complex SVD in nalgebra is unreliable).
pub fn nullspace(m: &CMat, tol: f64) -> Vec<CVec> {
    let gram = m.adjoint() * m;
    let gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(gram);
    let smax = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max).max(0.0).sqrt();
    let cutoff = tol * smax.max(1.0);
    let mut basis = Vec::new();
    for i in 0..eig.eigenvalues.len() {
        if eig.eigenvalues[i].max(0.0).sqrt() <= cutoff {
            basis.push(eig.eigenvectors.column(i).into_owned());
        }
    }
    basis
}

/// Least-squares solve M x = b via SVD with relative cutoff.
pub fn lstsq(m: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> DVector<f64> {
    let svd = nalgebra::SVD::new(m.clone(), true, true);
    svd.solve(b, tol).expect("svd solve")
}

/// Rounds a complex number for canonical ordering / dedup purposes.
pub fn round_complex(z: Complex64, scale: f64) -> (i64, i64) {
    ((z.re * scale).round() as i64, (z.im * scale).round() as i64)
}


/// Row-major [re, im] serialization of a complex matrix.
pub fn mat_to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn rows_to_mat(rows: &[Vec<[f64; 2]>]) -> CMat {
    let nr = rows.len();
    let nc = rows.first().map(|r| r.len()).unwrap_or(0);
    CMat::from_fn(nr, nc, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]))
}
