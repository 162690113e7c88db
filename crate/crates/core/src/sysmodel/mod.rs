//! LTI state-space model, frequency response, stability queries, Moebius
//! substitution and frequency sweeps.

mod grid;

pub use grid::{
    band_grid, band_peak, hinf_estimate, refine_peak, sweep, sweep_lossy, FrequencyGrid,
    ResponseEvaluator, Spacing, SweepReport,
};

use crate::error::{Error, Result};
use crate::numkit::{
    self, block_diag, eigenvalues, ensure_finite, eye, hstack, pivot_ratio, sigma_max, solve,
    vstack, CMatrix, C64, J,
};

/// Imaginary parts below this count as zero for the real-system flag.
pub const REAL_TOL: f64 = 1e-14;

/// Realization (A, B, C, D) with G(s) = C (sI - A)^-1 B + D.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
    d: CMatrix,
}

impl StateSpace {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch(format!("A is {}x{}", n, a.ncols())));
        }
        if b.nrows() != n || c.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "n = {n} but B has {} rows and C has {} columns",
                b.nrows(),
                c.ncols()
            )));
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "D is {}x{}, expected {}x{}",
                d.nrows(),
                d.ncols(),
                c.nrows(),
                b.ncols()
            )));
        }
        for (m, name) in [(&a, "A"), (&b, "B"), (&c, "C"), (&d, "D")] {
            ensure_finite(m, name)?;
        }
        Ok(StateSpace { a, b, c, d })
    }

    /// Pure feed-through system with n = 0.
    pub fn static_gain(d: CMatrix) -> Self {
        let (p, m) = d.shape();
        StateSpace {
            a: CMatrix::zeros(0, 0),
            b: CMatrix::zeros(0, m),
            c: CMatrix::zeros(p, 0),
            d,
        }
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }
    pub fn b(&self) -> &CMatrix {
        &self.b
    }
    pub fn c(&self) -> &CMatrix {
        &self.c
    }
    pub fn d(&self) -> &CMatrix {
        &self.d
    }
    pub fn n(&self) -> usize {
        self.a.nrows()
    }
    pub fn m(&self) -> usize {
        self.b.ncols()
    }
    pub fn p(&self) -> usize {
        self.c.nrows()
    }

    pub fn into_parts(self) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
        (self.a, self.b, self.c, self.d)
    }

    /// True when every entry has |Im| < 1e-14.
    pub fn is_real(&self) -> bool {
        self.max_abs_imag() < REAL_TOL
    }

    pub fn max_abs_imag(&self) -> f64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|m| numkit::max_abs_imag(m))
            .fold(0.0, f64::max)
    }

    /// (T^-1 A T, T^-1 B, C T, D)
    pub fn similarity(&self, t: &CMatrix, tinv: &CMatrix) -> StateSpace {
        StateSpace {
            a: tinv * &self.a * t,
            b: tinv * &self.b,
            c: &self.c * t,
            d: self.d.clone(),
        }
    }

    /// Keeps the leading r states.
    pub fn truncate(&self, r: usize) -> StateSpace {
        StateSpace {
            a: numkit::leading(&self.a, r, r),
            b: numkit::leading(&self.b, r, self.m()),
            c: numkit::leading(&self.c, self.p(), r),
            d: self.d.clone(),
        }
    }

    pub fn poles(&self) -> Result<Vec<C64>> {
        eigenvalues(&self.a)
    }
}

/// G(jω) by LU solve.
pub fn evaluate(sys: &StateSpace, omega: f64) -> Result<CMatrix> {
    evaluate_at(sys, C64::new(0.0, omega), omega)
}

/// G(s) for a complex point s; `tag` is the frequency reported on failure.
pub fn evaluate_at(sys: &StateSpace, s: C64, tag: f64) -> Result<CMatrix> {
    let n = sys.n();
    if n == 0 {
        return Ok(sys.d.clone());
    }
    let m = eye(n) * s - &sys.a;
    let lu = m.lu();
    if pivot_ratio(&lu.u()) <= f64::EPSILON {
        return Err(Error::PoleOnGrid { omega: tag });
    }
    let x = lu.solve(&sys.b).ok_or(Error::PoleOnGrid { omega: tag })?;
    let g = &sys.c * x + &sys.d;
    if !numkit::is_finite(&g) {
        return Err(Error::PoleOnGrid { omega: tag });
    }
    Ok(g)
}

pub fn sigma_max_at(sys: &StateSpace, omega: f64) -> Result<f64> {
    Ok(sigma_max(&evaluate(sys, omega)?))
}

/// Realization of G - G_r: A_e = diag(A_r, A), B_e = [B_r; B],
/// C_e = [-C_r, C], D_e = D - D_r.
pub fn error_system(full: &StateSpace, reduced: &StateSpace) -> Result<StateSpace> {
    if full.m() != reduced.m() || full.p() != reduced.p() {
        return Err(Error::DimensionMismatch(format!(
            "full is {}x{}, reduced is {}x{}",
            full.p(),
            full.m(),
            reduced.p(),
            reduced.m()
        )));
    }
    StateSpace::new(
        block_diag(&reduced.a, &full.a),
        vstack(&reduced.b, &full.b),
        hstack(&(-&reduced.c), &full.c),
        &full.d - &reduced.d,
    )
}

/// Hurwitz test; the margin is -max Re λ (infinite for n = 0).
pub fn is_hurwitz(sys: &StateSpace) -> Result<(bool, f64)> {
    if sys.n() == 0 {
        return Ok((true, f64::INFINITY));
    }
    let max_re = max_real_part(&sys.a)?;
    Ok((max_re < 0.0, -max_re))
}

pub fn max_real_part(a: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

pub fn require_hurwitz(sys: &StateSpace) -> Result<()> {
    let (ok, margin) = is_hurwitz(sys)?;
    if ok {
        Ok(())
    } else {
        Err(Error::NotHurwitz { max_re: -margin })
    }
}

/// Realization of s -> G((a s + b)/(c s + d)).
///
/// With E = aI - cA: A' = (dA - bI)E^-1, B' = (ad - bc)E^-1 B, C' = C E^-1,
/// D' = D + c C E^-1 B.
pub fn moebius_substitute(sys: &StateSpace, a: C64, b: C64, c: C64, d: C64) -> Result<StateSpace> {
    let det = a * d - b * c;
    let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
    if det.norm() <= 1e-14 * scale * scale {
        return Err(Error::DegenerateMap);
    }
    let n = sys.n();
    if n == 0 {
        return Ok(sys.clone());
    }
    let id = eye(n);
    let e = &id * a - &sys.a * c;
    let einv = solve(&e, &id).map_err(|_| Error::SingularSubstitution)?;
    let ce = &sys.c * &einv;
    StateSpace::new(
        (&sys.a * d - &id * b) * &einv,
        &einv * &sys.b * det,
        ce.clone(),
        &sys.d + ce * &sys.b * c,
    )
}

/// jω for a real frequency.
pub fn jw(omega: f64) -> C64 {
    J * omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rmat;

    fn scalar() -> StateSpace {
        StateSpace::new(
            rmat(1, 1, &[-1.0]),
            rmat(1, 1, &[1.0]),
            rmat(1, 1, &[1.0]),
            rmat(1, 1, &[0.0]),
        )
        .unwrap()
    }

    #[test]
    fn scalar_response() {
        let s = scalar();
        assert!((evaluate(&s, 0.0).unwrap()[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        let g = evaluate(&s, 1.0).unwrap()[(0, 0)];
        assert!((g - C64::new(0.5, -0.5)).norm() < 1e-15);
        assert!((sigma_max_at(&s, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_input_matrix() {
        let s = StateSpace::new(
            rmat(2, 2, &[-1.0, 0.0, 0.0, -2.0]),
            CMatrix::zeros(2, 1),
            rmat(1, 2, &[1.0, 1.0]),
            CMatrix::zeros(1, 1),
        )
        .unwrap();
        assert_eq!(sigma_max_at(&s, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn dimension_checks() {
        assert!(StateSpace::new(eye(2), eye(1), eye(2), eye(2)).is_err());
    }

    #[test]
    fn pole_on_axis() {
        let s = StateSpace::new(
            rmat(2, 2, &[0.0, 1.0, -1.0, 0.0]),
            rmat(2, 1, &[0.0, 1.0]),
            rmat(1, 2, &[1.0, 0.0]),
            rmat(1, 1, &[0.0]),
        )
        .unwrap();
        assert!(matches!(evaluate(&s, 1.0), Err(Error::PoleOnGrid { omega }) if omega == 1.0));
    }

    #[test]
    fn hurwitz_margin() {
        assert_eq!(is_hurwitz(&scalar()).unwrap(), (true, 1.0));
        let u = StateSpace::new(eye(1), eye(1), eye(1), eye(1)).unwrap();
        assert!(!is_hurwitz(&u).unwrap().0);
        assert!(is_hurwitz(&StateSpace::static_gain(eye(1))).unwrap().0);
    }

    #[test]
    fn moebius_identity_map() {
        let s = scalar();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let t = moebius_substitute(&s, one, zero, zero, one).unwrap();
        for w in [-2.0, 0.0, 0.7] {
            assert!((evaluate(&t, w).unwrap() - evaluate(&s, w).unwrap()).norm() < 1e-15);
        }
        assert!(matches!(
            moebius_substitute(&s, one, one, one, one),
            Err(Error::DegenerateMap)
        ));
    }
}
