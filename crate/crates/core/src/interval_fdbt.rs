//! Interval-type frequency-dependent balanced truncation on a band [w1, w2].
//!
//! The interval extended system keeps A and replaces (B, C, D) by
//! (M B, C M, D + C N B) with M = [w_d² (j w1 I − A)^-1 (j w2 I − A)^-1]^(1/2)
//! (principal root) and N = (j w_c I − A)(j w1 I − A)^-1 (j w2 I − A)^-1.

use crate::error::{Error, Result};
use crate::numkit::{
    balance_gramians, block_diag, eigenvalues, eye, hermitian_eigenvalues, hstack, inverse,
    leading, solve, sqrt_principal, vstack, CMatrix, C64, J,
};
use crate::reduction::{
    check_order, gramians, tail_sum, BandBound, Bounds, EfBound, Method, ReductionResult,
    HINF_POINTS,
};
use crate::sysmodel::{error_system, hinf_estimate, is_hurwitz, require_hurwitz, StateSpace};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalConfig {
    pub w1: f64,
    pub w2: f64,
}

impl IntervalConfig {
    pub fn new(w1: f64, w2: f64) -> Result<Self> {
        if !w1.is_finite() || !w2.is_finite() {
            return Err(Error::NonFinite("interval bounds".into()));
        }
        if w1 >= w2 {
            return Err(Error::InvalidParameters(format!(
                "interval needs w1 < w2, got [{w1}, {w2}]"
            )));
        }
        Ok(IntervalConfig { w1, w2 })
    }

    pub fn wd(&self) -> f64 {
        0.5 * (self.w2 - self.w1)
    }

    pub fn wc(&self) -> f64 {
        0.5 * (self.w2 + self.w1)
    }

    /// Widens to the symmetric band [−w_max, w_max], which keeps real
    /// systems real.
    pub fn symmetrized(&self) -> Self {
        let w = self.w1.abs().max(self.w2.abs());
        IntervalConfig { w1: -w, w2: w }
    }
}

#[derive(Debug, Clone)]
pub struct IntervalExtended {
    pub sys: StateSpace,
    pub m: CMatrix,
    pub n: CMatrix,
    pub config: IntervalConfig,
}

#[derive(Debug, Clone)]
pub struct IntervalGramians {
    pub wc: CMatrix,
    pub wo: CMatrix,
    pub sigma: Vec<f64>,
    pub t: CMatrix,
    pub tinv: CMatrix,
    pub flagged: Vec<bool>,
    pub config: IntervalConfig,
}

/// Diagnostics of one η step.
#[derive(Debug, Clone, Serialize)]
pub struct EtaStepRecord {
    pub i: usize,
    pub sigma: f64,
    pub eta: f64,
    pub norm_b: f64,
    pub norm_c: f64,
    pub norm_n: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaTerms {
    /// η_i for i = r+1..n.
    pub eta: Vec<f64>,
    pub per_step: Vec<EtaStepRecord>,
}

/// (M, N) for a state matrix.
pub fn interval_factors(a: &CMatrix, cfg: IntervalConfig) -> Result<(CMatrix, CMatrix)> {
    let n = a.nrows();
    let id = eye(n);
    let s1 = &id * (J * cfg.w1) - a;
    let s2 = &id * (J * cfg.w2) - a;
    let r2 = solve(&s2, &id).map_err(|_| Error::SingularShift("j w2 I - A".into()))?;
    let r12 = solve(&s1, &r2).map_err(|_| Error::SingularShift("j w1 I - A".into()))?;
    let wd = cfg.wd();
    let m = sqrt_principal(&(&r12 * C64::new(wd * wd, 0.0)))?;
    let nn = (&id * (J * cfg.wc()) - a) * &r12;
    Ok((m, nn))
}

fn check_band_poles(a: &CMatrix, cfg: IntervalConfig) -> Result<()> {
    if a.nrows() == 0 {
        return Ok(());
    }
    for l in eigenvalues(a)? {
        for w in [cfg.w1, cfg.w2] {
            if (J * w - l).norm() <= 1e-10 {
                return Err(Error::SingularShift(format!("j{w} is an eigenvalue")));
            }
        }
    }
    Ok(())
}

pub fn build_interval_extended(sys: &StateSpace, cfg: IntervalConfig) -> Result<IntervalExtended> {
    check_band_poles(sys.a(), cfg)?;
    let (m, nn) = interval_factors(sys.a(), cfg)?;
    let ext = StateSpace::new(
        sys.a().clone(),
        &m * sys.b(),
        sys.c() * &m,
        sys.d() + sys.c() * &nn * sys.b(),
    )?;
    Ok(IntervalExtended {
        sys: ext,
        m,
        n: nn,
        config: cfg,
    })
}

pub fn interval_gramians(ext: &IntervalExtended) -> Result<IntervalGramians> {
    require_hurwitz(&ext.sys)?;
    let (wc, wo) = gramians(ext.sys.a(), ext.sys.b(), ext.sys.c())?;
    let bal = balance_gramians(&wc, &wo)?;
    Ok(IntervalGramians {
        wc,
        wo,
        sigma: bal.sigma,
        t: bal.t,
        tinv: bal.tinv,
        flagged: bal.flagged,
        config: ext.config,
    })
}

/// Balanced coordinates and the factor chain shared by the reduced model and
/// the η terms.
struct Chain {
    bal: StateSpace,
    bx: CMatrix,
    cx: CMatrix,
    d_full: CMatrix,
    cfg: IntervalConfig,
}

struct Truncation {
    m_inv: CMatrix,
    n: CMatrix,
    b: CMatrix,
    c: CMatrix,
}

impl Chain {
    fn new(bal: StateSpace, cfg: IntervalConfig) -> Result<Self> {
        let (mb, nb) = interval_factors(bal.a(), cfg)?;
        let bx = &mb * bal.b();
        let cx = bal.c() * &mb;
        let d_full = bal.d() + bal.c() * &nb * bal.b();
        Ok(Chain {
            bal,
            bx,
            cx,
            d_full,
            cfg,
        })
    }

    /// Order-k member: A_k = leading block, B_k = M_k^-1 Bx_k, C_k = Cx_k M_k^-1.
    fn truncation(&self, k: usize) -> Result<Truncation> {
        let (m, p) = (self.bal.m(), self.bal.p());
        if k == 0 {
            return Ok(Truncation {
                m_inv: CMatrix::zeros(0, 0),
                n: CMatrix::zeros(0, 0),
                b: CMatrix::zeros(0, m),
                c: CMatrix::zeros(p, 0),
            });
        }
        let ak = leading(self.bal.a(), k, k);
        let (mk, nk) = interval_factors(&ak, self.cfg)?;
        let m_inv = inverse(&mk).map_err(|_| Error::SingularReconstruction("M_r".into()))?;
        let b = &m_inv * leading(&self.bx, k, m);
        let c = leading(&self.cx, p, k) * &m_inv;
        Ok(Truncation { m_inv, n: nk, b, c })
    }

    fn reduced(&self, k: usize, t: &Truncation) -> Result<StateSpace> {
        let d = &self.d_full - &t.c * &t.n * &t.b;
        StateSpace::new(leading(self.bal.a(), k, k), t.b.clone(), t.c.clone(), d)
    }
}

fn sigma_ratio(sig: &[f64], k: usize, s: f64) -> CMatrix {
    CMatrix::from_fn(k, k, |i, j| {
        if i == j && s > 0.0 {
            C64::new(s / sig[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// η_i for the one-step pair (order i → i−1), i = r+1..n, in the fixed
/// balanced coordinates.
fn eta_terms(chain: &Chain, sigma: &[f64], r: usize) -> Result<EtaTerms> {
    let n = chain.bal.n();
    let (m, p) = (chain.bal.m(), chain.bal.p());
    let truncs: Vec<Result<Truncation>> = (r..=n)
        .into_par_iter()
        .map(|k| {
            chain.truncation(k).map_err(|e| Error::EtaStep {
                step: k,
                source: Box::new(e),
            })
        })
        .collect();
    let truncs: Vec<Truncation> = truncs.into_iter().collect::<Result<_>>()?;
    let mut per_step = Vec::new();
    for i in r + 1..=n {
        let t1 = &truncs[i - 1 - r];
        let t2 = &truncs[i - r];
        let k1 = i - 1;
        let s = sigma[i - 1];
        let cxh1 = leading(&chain.cx, p, k1).adjoint();
        let cxh2 = leading(&chain.cx, p, i).adjoint();
        let bxh1 = leading(&chain.bx, k1, m).adjoint();
        let bxh2 = leading(&chain.bx, i, m).adjoint();
        let r1 = sigma_ratio(sigma, k1, s);
        let r2 = sigma_ratio(sigma, i, s);

        let b_top = hstack(&t1.b, &(&t1.m_inv * &r1 * &cxh1));
        let b_bot = hstack(&t2.b, &(-(&t2.m_inv * &r2 * &cxh2)));
        let b_cal = vstack(&b_top, &b_bot);
        let c_top = hstack(&(-&t1.c), &t2.c);
        let c_bot = hstack(&(-(&bxh1 * &r1 * &t1.m_inv)), &(-(&bxh2 * &r2 * &t2.m_inv)));
        let c_cal = vstack(&c_top, &c_bot);
        let n_cal = block_diag(&t1.n, &t2.n);

        let pm = &c_cal * &n_cal * &b_cal;
        let mut sp = CMatrix::zeros(m + p, p + m);
        for k in 0..m {
            sp[(k, p + k)] = C64::new(2.0 * s, 0.0);
        }
        for k in 0..p {
            sp[(m + k, k)] = C64::new(2.0 * s, 0.0);
        }
        let kmat = -(pm * sp);
        let h = eye(p + m) * C64::new(4.0 * s * s, 0.0) + &kmat + kmat.adjoint();
        let ev = hermitian_eigenvalues(&h);
        let eta = ev.iter().fold(0.0, |a: f64, &x| a.max(x.abs()));
        per_step.push(EtaStepRecord {
            i,
            sigma: s,
            eta,
            norm_b: b_cal.norm(),
            norm_c: c_cal.norm(),
            norm_n: n_cal.norm(),
        });
    }
    Ok(EtaTerms {
        eta: per_step.iter().map(|r| r.eta).collect(),
        per_step,
    })
}

/// η terms from a balanced realization and its Gramians.
pub fn interval_eta(
    sys_balanced: &StateSpace,
    gram: &IntervalGramians,
    cfg: IntervalConfig,
    r: usize,
) -> Result<EtaTerms> {
    if r > sys_balanced.n() {
        return Err(Error::OrderOutOfRange {
            r,
            n: sys_balanced.n(),
        });
    }
    let chain = Chain::new(sys_balanced.clone(), cfg)?;
    eta_terms(&chain, &gram.sigma, r)
}

/// Σ √η_i; zero for an empty tail.
pub fn interval_bound(eta: &EtaTerms) -> f64 {
    eta.eta.iter().map(|e| e.max(0.0).sqrt()).sum()
}

/// 2 Σ_{i>r} σ_i + ‖G − G_ext‖∞ + ‖G_r − G_r,ext‖∞ (sweep estimates).
pub fn interval_ef_bound(
    sys: &StateSpace,
    reduced: &StateSpace,
    gram: &IntervalGramians,
    r: usize,
) -> Result<f64> {
    let cfg = gram.config;
    require_hurwitz(sys)?;
    require_hurwitz(reduced)?;
    let ext = build_interval_extended(sys, cfg)?;
    let ext_r = build_interval_extended(reduced, cfg)?;
    let full_gap = hinf_estimate(&error_system(sys, &ext.sys)?, HINF_POINTS)?.0;
    let red_gap = hinf_estimate(&error_system(reduced, &ext_r.sys)?, HINF_POINTS)?.0;
    Ok(tail_sum(&gram.sigma, r) + full_gap + red_gap)
}

/// Reduced model only, with the Gramians and balanced realization.
pub fn interval_truncate(
    sys: &StateSpace,
    cfg: IntervalConfig,
    r: usize,
) -> Result<(StateSpace, IntervalGramians, StateSpace)> {
    check_order(r, sys.n())?;
    require_hurwitz(sys)?;
    let ext = build_interval_extended(sys, cfg)?;
    let gram = interval_gramians(&ext)?;
    let bal = sys.similarity(&gram.t, &gram.tinv);
    let chain = Chain::new(bal.clone(), cfg)?;
    let t = chain.truncation(r)?;
    let reduced = chain.reduced(r, &t)?;
    Ok((reduced, gram, bal))
}

/// Interval-type reduction with the in-band bound Σ√η_i and the EF bound attached.
pub fn interval_reduce(sys: &StateSpace, cfg: IntervalConfig, r: usize) -> Result<ReductionResult> {
    let (reduced, gram, bal) = interval_truncate(sys, cfg, r)?;
    let eta = interval_eta(&bal, &gram, cfg, r)?;
    let mut warnings = Vec::new();
    if gram.flagged.iter().any(|&f| f) {
        warnings.push("interval Gramians are numerically rank deficient".to_string());
    }
    let stable = is_hurwitz(&reduced)?.0;
    let mut bounds = Bounds {
        interval: Some(BandBound {
            w1: cfg.w1,
            w2: cfg.w2,
            value: interval_bound(&eta),
        }),
        ..Default::default()
    };
    if stable {
        match interval_ef_bound(sys, &reduced, &gram, r) {
            Ok(v) => {
                bounds.ef = Some(EfBound {
                    value: v,
                    certified: true,
                })
            }
            Err(e) => bounds.ef_unavailable = Some(e.to_string()),
        }
    } else {
        warnings.push("reduced model is not Hurwitz".to_string());
        bounds.ef_unavailable = Some("reduced model is not Hurwitz".into());
    }
    Ok(ReductionResult {
        reduced,
        method: Method::IntervalFdbt {
            w1: cfg.w1,
            w2: cfg.w2,
        },
        order: r,
        sigma: gram.sigma,
        bounds,
        stable,
        warnings,
    })
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
    fn scalar_extended() {
        let cfg = IntervalConfig::new(-1.0, 1.0).unwrap();
        let ext = build_interval_extended(&scalar(), cfg).unwrap();
        let h = 0.5f64.sqrt();
        assert!((ext.m[(0, 0)] - C64::new(h, 0.0)).norm() < 1e-15);
        assert!((ext.n[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((ext.sys.d()[(0, 0)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        let g = interval_gramians(&ext).unwrap();
        assert!((g.wc[(0, 0)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn scalar_eta() {
        let cfg = IntervalConfig::new(-1.0, 1.0).unwrap();
        let ext = build_interval_extended(&scalar(), cfg).unwrap();
        let g = interval_gramians(&ext).unwrap();
        let eta = interval_eta(&scalar(), &g, cfg, 0).unwrap();
        assert!((eta.eta[0] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn bad_interval() {
        assert!(IntervalConfig::new(1.0, 1.0).is_err());
        assert_eq!(
            IntervalConfig::new(-0.2, 0.5).unwrap().symmetrized(),
            IntervalConfig { w1: -0.5, w2: 0.5 }
        );
    }
}
