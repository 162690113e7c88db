use super::{ensure_finite, ensure_square, hermitian_part, schur, C64, CMatrix};
use crate::error::{Error, Result};

/// Solves A X + X A* + Q = 0 by complex Bartels-Stewart.
///
/// With A = U T U* the equation becomes T Y + Y T* = F, F = -U* Q U, which is
/// solved one column at a time from the last one, since column j only couples
/// to columns k > j through conj(T_jk).
pub fn solve_lyapunov(a: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
    ensure_square(a, "A")?;
    ensure_square(q, "Q")?;
    if a.nrows() != q.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "Lyapunov: A is {0}x{0}, Q is {1}x{1}",
            a.nrows(),
            q.nrows()
        )));
    }
    ensure_finite(q, "Q")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let (u, t) = schur(a)?;
    let mut f = -(u.adjoint() * q * &u);
    let tnorm = t.norm().max(1.0);
    let tol = 1e3 * f64::EPSILON * tnorm;

    let mut y = CMatrix::zeros(n, n);
    let mut col = vec![C64::new(0.0, 0.0); n];
    for j in (0..n).rev() {
        let shift = t[(j, j)].conj();
        for i in 0..n {
            col[i] = f[(i, j)];
        }
        // (T + conj(T_jj) I) y_j = f_j, upper triangular
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= t[(i, k)] * col[k];
            }
            let d = t[(i, i)] + shift;
            if d.norm() <= tol {
                return Err(Error::SingularSylvester(i, j));
            }
            col[i] = s / d;
        }
        for i in 0..n {
            y[(i, j)] = col[i];
        }
        // move the coupling of y_j into the remaining right-hand sides
        for k in 0..j {
            let w = t[(k, j)].conj();
            if w != C64::new(0.0, 0.0) {
                for i in 0..n {
                    f[(i, k)] -= w * col[i];
                }
            }
        }
    }
    let x = &u * y * u.adjoint();
    ensure_finite(&x, "Lyapunov solution")?;
    Ok(hermitian_part(&x))
}
