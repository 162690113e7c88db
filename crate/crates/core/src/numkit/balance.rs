use super::{ensure_square, eye, hermitian_eigen, inverse, C64, CMatrix};
use crate::error::{Error, Result};
use nalgebra::DVector;

/// Output of Gramian balancing: T⁻¹ Wc T⁻* ≈ Σ and T* Wo T ≈ Σ.
#[derive(Debug, Clone)]
pub struct Balanced {
    pub t: CMatrix,
    pub tinv: CMatrix,
    /// Non-increasing, non-negative.
    pub sigma: Vec<f64>,
    /// Entries below the numerical rank cutoff; their columns of T are a
    /// completion of the well-determined ones, not balanced directions.
    pub flagged: Vec<bool>,
}

impl Balanced {
    pub fn rank_deficient(&self) -> bool {
        self.flagged.iter().any(|&f| f)
    }
}

/// Returns a factor L with W = L L*. Small negative eigenvalues from rounding
/// are clipped; genuinely indefinite input is rejected.
fn psd_factor(w: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(w);
    let scale = w.norm();
    let min = vals.first().cloned().unwrap_or(0.0);
    if min < -1e-8 * scale {
        return Err(Error::NotPsd { min_eig: min });
    }
    let mut l = vecs;
    for (k, &v) in vals.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        l.column_mut(k).scale_mut(s);
    }
    Ok(l)
}

/// Square-root balancing of a Gramian pair.
///
/// Each column of T is scaled by a unit phase so its largest entry is real and
/// positive, which keeps T real for real Gramians and T = I for a pair that is
/// already diagonal and equal.
pub fn balance_gramians(wc: &CMatrix, wo: &CMatrix) -> Result<Balanced> {
    ensure_square(wc, "Wc")?;
    ensure_square(wo, "Wo")?;
    let n = wc.nrows();
    if wo.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "Gramians are {n}x{n} and {0}x{0}",
            wo.nrows()
        )));
    }
    if n == 0 {
        return Ok(Balanced {
            t: eye(0),
            tinv: eye(0),
            sigma: vec![],
            flagged: vec![],
        });
    }
    let lc = psd_factor(wc)?;
    let lo = psd_factor(wo)?;
    let svd = (lo.adjoint() * &lc).svd(true, true);
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let sigma: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let smax = sigma[0];
    let cutoff = n as f64 * f64::EPSILON * smax;
    let flagged: Vec<bool> = sigma.iter().map(|&s| s <= cutoff || s == 0.0).collect();

    let mut t = CMatrix::zeros(n, n);
    let mut tinv = CMatrix::zeros(n, n);
    let lcv = &lc * v_t.adjoint();
    let ulo = u.adjoint() * lo.adjoint();
    for k in 0..n {
        let s = if flagged[k] { 1.0 } else { sigma[k].sqrt() };
        t.set_column(k, &(lcv.column(k) / C64::new(s, 0.0)));
        tinv.set_row(k, &(ulo.row(k) / C64::new(s, 0.0)));
    }
    if flagged.iter().any(|&f| f) {
        complete_pair(&mut t, &mut tinv, &flagged)?;
    }
    for k in 0..n {
        let col = t.column(k);
        let (_, pivot) = col
            .iter()
            .enumerate()
            .fold((0.0, C64::new(1.0, 0.0)), |(best, z), (_, &x)| {
                if x.norm() > best {
                    (x.norm(), x)
                } else {
                    (best, z)
                }
            });
        if pivot.norm() > 0.0 {
            let ph = pivot.conj() / pivot.norm();
            for i in 0..n {
                t[(i, k)] *= ph;
                tinv[(k, i)] /= ph;
            }
        }
    }
    Ok(Balanced {
        t,
        tinv,
        sigma,
        flagged,
    })
}

/// Fills the flagged columns of T and rows of T⁻¹ while leaving the balanced
/// part (T1, W1) untouched, so truncation is still the balanced projection:
/// T2 spans null(W1), W2 annihilates range(T1), and W2 T2 = I.
fn complete_pair(t: &mut CMatrix, tinv: &mut CMatrix, flagged: &[bool]) -> Result<()> {
    let n = t.nrows();
    let mut null_w1 = tinv.adjoint();
    complete_basis(&mut null_w1, flagged);
    let mut perp_t1 = t.clone();
    complete_basis(&mut perp_t1, flagged);
    let idx: Vec<usize> = (0..n).filter(|&k| flagged[k]).collect();
    let t2 = null_w1.select_columns(&idx);
    let nn = perp_t1.select_columns(&idx);
    let w2 = inverse(&(nn.adjoint() * &t2))
        .map_err(|_| Error::SingularReconstruction("balancing completion".into()))?
        * nn.adjoint();
    for (j, &k) in idx.iter().enumerate() {
        t.set_column(k, &t2.column(j));
        tinv.set_row(k, &w2.row(j));
    }
    Ok(())
}

/// Replaces the flagged columns of T by an orthonormal completion of the span
/// of the unflagged ones (modified Gram-Schmidt against unit vectors).
fn complete_basis(t: &mut CMatrix, flagged: &[bool]) {
    let n = t.nrows();
    let mut basis: Vec<DVector<C64>> = Vec::new();
    let project_out = |v: &mut DVector<C64>, basis: &[DVector<C64>]| {
        for b in basis {
            let p = b.dotc(v);
            v.axpy(-p, b, C64::new(1.0, 0.0));
        }
    };
    for k in 0..n {
        if !flagged[k] {
            let mut v = t.column(k).into_owned();
            project_out(&mut v, &basis);
            let nv = v.norm();
            if nv > 0.0 {
                basis.push(v.unscale(nv));
            }
        }
    }
    let mut cand = 0;
    for k in 0..n {
        if !flagged[k] {
            continue;
        }
        while cand < n {
            let mut v = DVector::from_element(n, C64::new(0.0, 0.0));
            v[cand] = C64::new(1.0, 0.0);
            cand += 1;
            project_out(&mut v, &basis);
            project_out(&mut v, &basis);
            let nv = v.norm();
            if nv > 1e-8 {
                let v = v.unscale(nv);
                t.set_column(k, &v);
                basis.push(v);
                break;
            }
        }
    }
}
