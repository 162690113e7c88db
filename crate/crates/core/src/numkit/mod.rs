//! Dense complex-matrix kernels: solves, eigenvalues, Lyapunov equations,
//! principal square root and logarithm, and Gramian balancing.

mod balance;
mod eig;
mod lyapunov;
mod matfun;

pub use balance::{balance_gramians, Balanced};
pub use eig::{eig, eigenvalues, EigenDecomposition};
pub use lyapunov::solve_lyapunov;
pub use matfun::{expm, log_principal, sqrt_principal};

use crate::error::{Error, Result};
use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
pub use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Absolute floor used by relative tolerances.
pub const ABS_FLOOR: f64 = 1e-14;

pub const J: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a matrix from row-major entries, rejecting non-finite values.
pub fn cmat(rows: usize, cols: usize, entries: &[C64]) -> Result<CMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    let m = CMatrix::from_row_slice(rows, cols, entries);
    ensure_finite(&m, "matrix")?;
    Ok(m)
}

/// Real matrix from row-major entries.
pub fn rmat(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

pub fn eye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMatrix {
    CMatrix::zeros(r, c)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn ensure_finite(m: &CMatrix, what: &str) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn ensure_square(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// (M + M*)/2
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn norm_fro(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn max_abs_imag(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

/// Largest singular value; 0 for empty matrices.
pub fn sigma_max(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.nrows() == 1 || m.ncols() == 1 {
        return m.norm();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |a: f64, &s| a.max(s))
}

/// Solves A X = B with partially pivoted LU. Fails when the pivot ratio
/// indicates numerical singularity.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    ensure_square(a, "coefficient matrix")?;
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: A is {}x{}, B has {} rows",
            a.nrows(),
            a.ncols(),
            b.nrows()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(b.clone());
    }
    let lu = a.clone().lu();
    if pivot_ratio(&lu.u()) <= n as f64 * f64::EPSILON {
        return Err(Error::SingularShift("LU pivot underflow".into()));
    }
    let x = lu
        .solve(b)
        .ok_or_else(|| Error::SingularShift("LU solve failed".into()))?;
    ensure_finite(&x, "solve result")?;
    Ok(x)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &eye(a.nrows()))
}

/// min |U_ii| / max |U_ii|, a cheap reciprocal-condition proxy.
pub(crate) fn pivot_ratio(u: &CMatrix) -> f64 {
    let d: Vec<f64> = (0..u.nrows().min(u.ncols())).map(|i| u[(i, i)].norm()).collect();
    let mx = d.iter().cloned().fold(0.0, f64::max);
    if mx == 0.0 {
        return 0.0;
    }
    d.iter().cloned().fold(f64::INFINITY, f64::min) / mx
}

/// Complex Schur form A = Q T Q* with T upper triangular.
pub fn schur(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    ensure_square(a, "Schur input")?;
    ensure_finite(a, "Schur input")?;
    let n = a.nrows();
    if n == 0 {
        return Ok((eye(0), zeros(0, 0)));
    }
    // A large common shift (jϖI − εX with small ε) stalls the QR iteration;
    // decompose A − μI and add μ back.
    let mu = a.trace() / C64::new(n as f64, 0.0);
    let s = Schur::try_new(a - eye(n) * mu, f64::EPSILON, 200 * n.max(10))
        .ok_or_else(|| Error::ConvergenceFailure("complex Schur decomposition".into()))?;
    let (q, mut t) = s.unpack();
    for j in 0..n {
        t[(j, j)] += mu;
        for i in j + 1..n {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok((q, t))
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues
/// and orthonormal eigenvectors.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (vec![], eye(0));
    }
    let e = hermitian_part(h).symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, k| e.eigenvectors[(r, idx[k])]);
    (vals, vecs)
}

pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    if h.nrows() == 0 {
        return vec![];
    }
    let mut v: Vec<f64> = hermitian_part(h).symmetric_eigenvalues().iter().cloned().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut m = zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    m
}

pub fn vstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols());
    let mut m = zeros(a.nrows() + b.nrows(), a.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    m
}

pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let mut m = zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    m
}

/// Leading k×k block.
pub fn leading(m: &CMatrix, rows: usize, cols: usize) -> CMatrix {
    m.view((0, 0), (rows, cols)).into_owned()
}

/// Relative distance ‖a − b‖ / max(‖b‖, floor).
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(ABS_FLOOR)
}

/// Back substitution for an upper-triangular system T x = b, in place.
/// Tiny pivots are replaced by `floor` to keep the result finite.
pub(crate) fn upper_tri_solve_in_place(t: &CMatrix, x: &mut [C64], floor: f64) {
    let n = t.nrows();
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= t[(i, k)] * x[k];
        }
        let mut d = t[(i, i)];
        if d.norm() < floor {
            d = C64::new(floor, 0.0);
        }
        x[i] = s / d;
    }
}
