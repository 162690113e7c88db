//! Comparison methods: standard balanced truncation (FIBT), generalized
//! singular perturbation (GSPA, SPA for ρ = 0) and frequency-limited Gramian
//! balanced truncation (FGBT).

use crate::error::{Error, Result};
use crate::numkit::{
    balance_gramians, eye, hermitian_eigenvalues, hermitian_part, leading, log_principal, solve,
    Balanced, CMatrix, C64, J,
};
use crate::reduction::{
    check_order, gramians, tail_sum, Bounds, EfBound, Method, ReductionResult,
};
use crate::sysmodel::{is_hurwitz, require_hurwitz, StateSpace};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BaselineMethod {
    Fibt,
    Spa,
    Gspa { rho: f64 },
    Fgbt { w1: f64, w2: f64 },
}

impl BaselineMethod {
    pub fn reduce(&self, sys: &StateSpace, r: usize) -> Result<ReductionResult> {
        match *self {
            BaselineMethod::Fibt => fibt_reduce(sys, r),
            BaselineMethod::Spa => gspa_reduce(sys, r, 0.0),
            BaselineMethod::Gspa { rho } => gspa_reduce(sys, r, rho),
            BaselineMethod::Fgbt { w1, w2 } => fgbt_reduce(sys, r, w1, w2),
        }
    }
}

/// Standard Gramians and their balancing.
pub fn standard_balance(sys: &StateSpace) -> Result<(CMatrix, CMatrix, Balanced)> {
    require_hurwitz(sys)?;
    let (wc, wo) = gramians(sys.a(), sys.b(), sys.c())?;
    let bal = balance_gramians(&wc, &wo)?;
    Ok((wc, wo, bal))
}

fn finish(
    sys_reduced: StateSpace,
    method: Method,
    r: usize,
    bal: Balanced,
    ef: Option<EfBound>,
) -> Result<ReductionResult> {
    let stable = is_hurwitz(&sys_reduced)?.0;
    let mut warnings = Vec::new();
    if bal.rank_deficient() {
        warnings.push("Gramians are numerically rank deficient".to_string());
    }
    if !stable {
        warnings.push("reduced model is not Hurwitz".to_string());
    }
    Ok(ReductionResult {
        reduced: sys_reduced,
        method,
        order: r,
        sigma: bal.sigma,
        bounds: Bounds {
            ef,
            ..Default::default()
        },
        stable,
        warnings,
    })
}

/// Balanced truncation with the classical bound 2 Σ_{i>r} σ_i.
pub fn fibt_reduce(sys: &StateSpace, r: usize) -> Result<ReductionResult> {
    check_order(r, sys.n())?;
    let (_, _, bal) = standard_balance(sys)?;
    let reduced = sys.similarity(&bal.t, &bal.tinv).truncate(r);
    let ef = EfBound {
        value: tail_sum(&bal.sigma, r),
        certified: true,
    };
    finish(reduced, Method::Fibt, r, bal, Some(ef))
}

/// Residualizes the discarded balanced states through (ρI − A22)^-1.
/// ρ = 0 matches the DC gain exactly.
pub fn gspa_reduce(sys: &StateSpace, r: usize, rho: f64) -> Result<ReductionResult> {
    if !rho.is_finite() || rho < 0.0 {
        return Err(Error::InvalidParameters(format!("rho must be finite and >= 0, got {rho}")));
    }
    check_order(r, sys.n())?;
    let (_, _, bal) = standard_balance(sys)?;
    let b = sys.similarity(&bal.t, &bal.tinv);
    let n = sys.n();
    let k = n - r;
    let (m, p) = (sys.m(), sys.p());
    let a = b.a();
    let a11 = leading(a, r, r);
    let a12 = a.view((0, r), (r, k)).into_owned();
    let a21 = a.view((r, 0), (k, r)).into_owned();
    let a22 = a.view((r, r), (k, k)).into_owned();
    let b1 = leading(b.b(), r, m);
    let b2 = b.b().view((r, 0), (k, m)).into_owned();
    let c1 = leading(b.c(), p, r);
    let c2 = b.c().view((0, r), (p, k)).into_owned();
    let shifted = eye(k) * C64::new(rho, 0.0) - &a22;
    let x = solve(&shifted, &crate::numkit::hstack(&a21, &b2))
        .map_err(|_| Error::SingularResidualization)?;
    let xa = x.columns(0, r).into_owned();
    let xb = x.columns(r, m).into_owned();
    let reduced = StateSpace::new(
        a11 + &a12 * &xa,
        b1 + &a12 * &xb,
        c1 + &c2 * &xa,
        b.d() + &c2 * &xb,
    )?;
    let ef = EfBound {
        value: tail_sum(&bal.sigma, r),
        certified: true,
    };
    finish(reduced, Method::Gspa { rho }, r, bal, Some(ef))
}

/// S = (−j/2π) log((j w2 I − A)(j w1 I − A)^-1), the band operator of the
/// frequency-limited Gramians.
pub fn band_operator(a: &CMatrix, w1: f64, w2: f64) -> Result<CMatrix> {
    let n = a.nrows();
    let id = eye(n);
    let num = &id * (J * w2) - a;
    let den = &id * (J * w1) - a;
    let ratio = solve(&den.transpose(), &num.transpose())
        .map_err(|_| Error::SingularShift("j w1 I - A".into()))?
        .transpose();
    let l = log_principal(&ratio)?;
    Ok(l * C64::new(0.0, -1.0 / (2.0 * std::f64::consts::PI)))
}

/// Frequency-limited Gramians over [w1, w2]:
/// Wc_lim = S Wc + Wc S*, Wo_lim = S* Wo + Wo S.
pub fn fl_gramians(sys: &StateSpace, w1: f64, w2: f64) -> Result<(CMatrix, CMatrix)> {
    if !(w1 < w2) {
        return Err(Error::InvalidParameters(format!("band [{w1}, {w2}] is empty")));
    }
    require_hurwitz(sys)?;
    let (wc, wo) = gramians(sys.a(), sys.b(), sys.c())?;
    let s = band_operator(sys.a(), w1, w2)?;
    let wcl = hermitian_part(&(&s * &wc + &wc * s.adjoint()));
    let wol = hermitian_part(&(s.adjoint() * &wo + &wo * &s));
    Ok((wcl, wol))
}

fn require_psd(w: &CMatrix) -> Result<()> {
    let min = hermitian_eigenvalues(w).first().cloned().unwrap_or(0.0);
    if min < -1e-8 * w.norm() {
        return Err(Error::IndefiniteGramian { min_eig: min });
    }
    Ok(())
}

/// Balanced truncation of the frequency-limited Gramians (plain scheme, no
/// definiteness fix). The attached EF value 2 Σ_{i>r} σ_i is a heuristic.
pub fn fgbt_reduce(sys: &StateSpace, r: usize, w1: f64, w2: f64) -> Result<ReductionResult> {
    check_order(r, sys.n())?;
    let (wcl, wol) = fl_gramians(sys, w1, w2)?;
    require_psd(&wcl)?;
    require_psd(&wol)?;
    let bal = balance_gramians(&wcl, &wol)?;
    let reduced = sys.similarity(&bal.t, &bal.tinv).truncate(r);
    let ef = EfBound {
        value: tail_sum(&bal.sigma, r),
        certified: false,
    };
    finish(reduced, Method::Fgbt { w1, w2 }, r, bal, Some(ef))
}
