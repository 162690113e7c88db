use super::{ensure_finite, ensure_square, eye, schur, solve, C64, CMatrix};
use crate::error::{Error, Result};

/// Rejects spectra touching the closed negative real axis. Zero is judged
/// relative to ‖M‖ so that uniformly tiny matrices stay admissible.
fn check_branch_cut(t: &CMatrix, scale: f64) -> Result<()> {
    for i in 0..t.nrows() {
        let l = t[(i, i)];
        let mag = l.norm();
        let on_zero = mag <= 1e-14 * scale || mag == 0.0;
        let on_neg_axis = l.re <= 0.0 && l.im.abs() <= 1e-12 * mag;
        if on_zero || on_neg_axis {
            return Err(Error::BranchCutViolation(format!("{l}")));
        }
    }
    Ok(())
}

/// Principal square root of an upper-triangular matrix.
fn sqrt_upper(t: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

/// Principal square root: the root whose eigenvalues lie in the open right
/// half-plane. Schur method with the triangular recurrence.
pub fn sqrt_principal(m: &CMatrix) -> Result<CMatrix> {
    ensure_square(m, "sqrt input")?;
    ensure_finite(m, "sqrt input")?;
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let (q, t) = schur(m)?;
    check_branch_cut(&t, m.norm())?;
    let x = &q * sqrt_upper(&t) * q.adjoint();
    ensure_finite(&x, "sqrt result")?;
    Ok(x)
}

/// Principal logarithm by inverse scaling and squaring on the Schur factor
/// followed by the atanh series log(I + X) = 2 atanh(X (2I + X)^-1).
pub fn log_principal(m: &CMatrix) -> Result<CMatrix> {
    ensure_square(m, "log input")?;
    ensure_finite(m, "log input")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let (q, mut t) = schur(m)?;
    check_branch_cut(&t, m.norm())?;
    let id = eye(n);
    let mut k = 0;
    while (&t - &id).norm() >= 0.25 {
        if k >= 64 {
            return Err(Error::ConvergenceFailure("log: square-root scaling".into()));
        }
        t = sqrt_upper(&t);
        k += 1;
    }
    let x = &t - &id;
    let z = solve(&(&id * C64::new(2.0, 0.0) + &x).transpose(), &x.transpose())?.transpose();
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut acc = z.clone();
    for j in 1..60 {
        term = &term * &z2;
        let add = term.scale(1.0 / (2 * j + 1) as f64);
        let small = add.norm() <= 1e-18 * acc.norm().max(1e-300);
        acc += add;
        if small {
            break;
        }
    }
    let l = acc.scale(2.0 * (1u64 << k) as f64);
    let out = &q * l * q.adjoint();
    ensure_finite(&out, "log result")?;
    Ok(out)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let nrm = a.norm();
    let s = if nrm > 0.5 {
        (nrm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let x = a.scale(0.5f64.powi(s));
    let mut term = eye(n);
    let mut acc = eye(n);
    for k in 1..30 {
        term = &term * &x / C64::new(k as f64, 0.0);
        acc += &term;
        if term.norm() <= 1e-18 * acc.norm() {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rmat;

    #[test]
    fn sqrt_identity_and_diag() {
        assert!((sqrt_principal(&eye(3)).unwrap() - eye(3)).norm() < 1e-14);
        let d = sqrt_principal(&rmat(2, 2, &[4.0, 0.0, 0.0, 9.0])).unwrap();
        assert!((d - rmat(2, 2, &[2.0, 0.0, 0.0, 3.0])).norm() < 1e-13);
    }

    #[test]
    fn log_identity_and_diag() {
        assert!(log_principal(&eye(3)).unwrap().norm() < 1e-14);
        let e = std::f64::consts::E;
        let l = log_principal(&rmat(2, 2, &[e, 0.0, 0.0, e * e])).unwrap();
        assert!((l - rmat(2, 2, &[1.0, 0.0, 0.0, 2.0])).norm() < 1e-13);
    }

    #[test]
    fn branch_cut_rejected() {
        let m = rmat(2, 2, &[-1.0, 0.0, 0.0, 2.0]);
        assert!(matches!(sqrt_principal(&m), Err(Error::BranchCutViolation(_))));
        assert!(matches!(log_principal(&m), Err(Error::BranchCutViolation(_))));
        let z = rmat(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        assert!(sqrt_principal(&z).is_err());
    }

    #[test]
    fn tiny_matrices_are_admissible() {
        let m = eye(2).scale(1e-20);
        let r = sqrt_principal(&m).unwrap();
        assert!((r - eye(2).scale(1e-10)).norm() < 1e-22);
    }

    #[test]
    fn exp_of_log() {
        let m = rmat(3, 3, &[2.0, 1.0, 0.0, -1.0, 3.0, 0.5, 0.2, 0.0, 1.5]);
        let back = expm(&log_principal(&m).unwrap());
        assert!((back - &m).norm() / m.norm() < 1e-12);
    }
}
