use super::{schur, upper_tri_solve_in_place, C64, CMatrix};
use crate::error::Result;

/// Eigenvalues and right eigenvectors, column-aligned.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let (_, t) = schur(a)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Eigenvectors come from back substitution on the Schur factor; unit 2-norm.
pub fn eig(a: &CMatrix) -> Result<EigenDecomposition> {
    let (q, t) = schur(a)?;
    let n = t.nrows();
    let floor = f64::EPSILON * t.norm().max(f64::MIN_POSITIVE);
    let mut vectors = CMatrix::zeros(n, n);
    let mut x = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let lk = t[(k, k)];
        let sub = CMatrix::from_fn(k, k, |i, j| {
            if i == j {
                t[(i, i)] - lk
            } else {
                t[(i, j)]
            }
        });
        for i in 0..k {
            x[i] = -t[(i, k)];
        }
        upper_tri_solve_in_place(&sub, &mut x[..k], floor);
        x[k] = C64::new(1.0, 0.0);
        let mut v = CMatrix::zeros(n, 1);
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for l in 0..=k {
                s += q[(i, l)] * x[l];
            }
            v[(i, 0)] = s;
        }
        let nv = v.norm();
        vectors.set_column(k, &(v / C64::new(nv, 0.0)).column(0));
    }
    Ok(EigenDecomposition {
        values: (0..n).map(|i| t[(i, i)]).collect(),
        vectors,
    })
}
