//! Single-frequency (SF) type frequency-dependent balanced truncation.
//!
//! The extended system G_ε is G composed with a Moebius map that fixes jϖ;
//! balancing it weights the states by their importance near ω = ϖ, with ε
//! controlling the width of that neighbourhood.

use crate::error::{Error, Result};
use crate::numkit::{balance_gramians, eigenvalues, eye, solve, CMatrix, C64, J};
use crate::reduction::{
    check_order, gramians, tail_sum, Bounds, EfBound, Method, PointBound, ReductionResult,
    HINF_POINTS,
};
use crate::sysmodel::{error_system, hinf_estimate, is_hurwitz, StateSpace};
use rayon::prelude::*;
use serde::Serialize;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SfConfig {
    pub varpi: f64,
    pub epsilon: f64,
}

impl SfConfig {
    pub fn new(varpi: f64, epsilon: f64) -> Result<Self> {
        if !varpi.is_finite() || !epsilon.is_finite() {
            return Err(Error::NonFinite("SF configuration".into()));
        }
        if epsilon <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(SfConfig { varpi, epsilon })
    }

    /// (a, b, c, d) of the map s -> (a s + b)/(c s + d) with G_ε(s) = G(map(s)).
    pub fn moebius_params(&self) -> (C64, C64, C64, C64) {
        let (e, w) = (self.epsilon, self.varpi);
        (
            C64::new(e, w),
            C64::new(w * w, 0.0),
            C64::new(1.0, 0.0),
            C64::new(e, -w),
        )
    }

    /// Eigenvalue of A_ε corresponding to eigenvalue λ of A.
    pub fn map_eigenvalue(&self, lambda: C64) -> C64 {
        let jw = J * self.varpi;
        let e = C64::new(self.epsilon, 0.0);
        jw - e * (jw - lambda) / (e + jw - lambda)
    }
}

#[derive(Debug, Clone)]
pub struct SfExtended {
    pub sys: StateSpace,
    pub config: SfConfig,
    pub source_hash: u64,
}

#[derive(Debug, Clone)]
pub struct SfGramians {
    pub wc: CMatrix,
    pub wo: CMatrix,
    pub sigma: Vec<f64>,
    pub t: CMatrix,
    pub tinv: CMatrix,
    pub flagged: Vec<bool>,
    pub config: SfConfig,
}

/// Identifier of a realization, stable for identical matrices.
pub fn system_hash(sys: &StateSpace) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for m in [sys.a(), sys.b(), sys.c(), sys.d()] {
        m.shape().hash(&mut h);
        for z in m.iter() {
            z.re.to_bits().hash(&mut h);
            z.im.to_bits().hash(&mut h);
        }
    }
    h.finish()
}

/// A_ε = jϖI − ε S (jϖI − A), B_ε = ε S B, C_ε = ε C S, D_ε = D + C S B with
/// S = (εI + jϖI − A)^-1.
pub fn build_sf_extended(sys: &StateSpace, cfg: SfConfig) -> Result<SfExtended> {
    let n = sys.n();
    let jw = J * cfg.varpi;
    let e = C64::new(cfg.epsilon, 0.0);
    if n > 0 {
        for l in eigenvalues(sys.a())? {
            if (e + jw - l).norm() <= 1e-10 {
                return Err(Error::SingularShift(format!(
                    "epsilon + j varpi hits eigenvalue {l}"
                )));
            }
        }
    }
    let id = eye(n);
    let shifted = &id * (e + jw) - sys.a();
    let s = solve(&shifted, &id).map_err(|_| Error::SingularShift("eps I + j varpi I - A".into()))?;
    let a_e = &id * jw - (&s * (&id * jw - sys.a())) * e;
    let b_e = &s * sys.b() * e;
    let c_e = sys.c() * &s * e;
    let d_e = sys.d() + sys.c() * &s * sys.b();
    Ok(SfExtended {
        sys: StateSpace::new(a_e, b_e, c_e, d_e)?,
        config: cfg,
        source_hash: system_hash(sys),
    })
}

/// Largest ε keeping the extended system Hurwitz: min over unstable λ of
/// (ϖ − Im λ)²/Re λ + Re λ; infinite for Hurwitz A.
pub fn stability_epsilon_cap(sys: &StateSpace, varpi: f64) -> Result<f64> {
    if sys.n() == 0 {
        return Ok(f64::INFINITY);
    }
    Ok(eigenvalues(sys.a())?
        .iter()
        .filter(|l| l.re >= 0.0)
        .map(|l| {
            if l.re == 0.0 {
                0.0
            } else {
                (varpi - l.im).powi(2) / l.re + l.re
            }
        })
        .fold(f64::INFINITY, f64::min))
}

pub fn sf_gramians(ext: &SfExtended) -> Result<SfGramians> {
    let (ok, margin) = is_hurwitz(&ext.sys)?;
    if !ok {
        return Err(Error::NotHurwitz { max_re: -margin });
    }
    let (wc, wo) = gramians(ext.sys.a(), ext.sys.b(), ext.sys.c())?;
    let bal = balance_gramians(&wc, &wo)?;
    Ok(SfGramians {
        wc,
        wo,
        sigma: bal.sigma,
        t: bal.t,
        tinv: bal.tinv,
        flagged: bal.flagged,
        config: ext.config,
    })
}

/// Maps a truncated balanced extended system back through the inverse
/// Moebius transformation.
fn reconstruct(trunc: &StateSpace, d_e: &CMatrix, cfg: SfConfig) -> Result<StateSpace> {
    let r = trunc.n();
    let id = eye(r);
    let jw = J * cfg.varpi;
    let e = C64::new(cfg.epsilon, 0.0);
    let y = &id * jw - trunc.a();
    let lhs = &id * e - &y;
    let a_r = &id * jw
        - solve(&lhs, &y)
            .map_err(|_| Error::SingularReconstruction("eps I - (j varpi I - A_t)".into()))?
            * e;
    let f = &id * (e + jw) - &a_r;
    let b_r = &f * trunc.b() / e;
    let c_r = trunc.c() * &f / e;
    let fb = solve(&f, &b_r)
        .map_err(|_| Error::SingularReconstruction("eps I + j varpi I - A_r".into()))?;
    let d_r = d_e - &c_r * fb;
    StateSpace::new(a_r, b_r, c_r, d_r)
}

/// Balanced truncation of the extended system followed by the inverse map.
/// Returns the reduced model, the Gramians and the extended system.
pub fn sf_truncate(
    sys: &StateSpace,
    cfg: SfConfig,
    r: usize,
) -> Result<(StateSpace, SfGramians, SfExtended)> {
    check_order(r, sys.n())?;
    let ext = build_sf_extended(sys, cfg)?;
    let gram = sf_gramians(&ext)?;
    let bal = ext.sys.similarity(&gram.t, &gram.tinv);
    let reduced = reconstruct(&bal.truncate(r), ext.sys.d(), cfg)?;
    Ok((reduced, gram, ext))
}

/// 2 Σ_{i>r} σ_iε; zero for r = n.
pub fn sf_bound(gram: &SfGramians, r: usize) -> Result<f64> {
    if r > gram.sigma.len() {
        return Err(Error::OrderOutOfRange {
            r,
            n: gram.sigma.len(),
        });
    }
    Ok(tail_sum(&gram.sigma, r))
}

/// 2 Σ_{i>r} σ_iε + ‖G − G_ε‖∞ + ‖G_r − G_rε‖∞, with the norms estimated by
/// refined sweeps (lower estimates of the true norms).
pub fn sf_ef_bound(
    sys: &StateSpace,
    reduced: &StateSpace,
    gram: &SfGramians,
    r: usize,
) -> Result<f64> {
    let cfg = gram.config;
    let ext = build_sf_extended(sys, cfg)?;
    let ext_r = build_sf_extended(reduced, cfg)?;
    for s in [sys, reduced, &ext.sys, &ext_r.sys] {
        let (ok, margin) = is_hurwitz(s)?;
        if !ok {
            return Err(Error::NotHurwitz { max_re: -margin });
        }
    }
    let full_gap = hinf_estimate(&error_system(sys, &ext.sys)?, HINF_POINTS)?.0;
    let red_gap = hinf_estimate(&error_system(reduced, &ext_r.sys)?, HINF_POINTS)?.0;
    Ok(sf_bound(gram, r)? + full_gap + red_gap)
}

/// SF-type reduction with both bounds attached. Loss of stability is reported in
/// `stable` and makes the EF bound unavailable.
pub fn sf_reduce(sys: &StateSpace, cfg: SfConfig, r: usize) -> Result<ReductionResult> {
    let (reduced, gram, _) = sf_truncate(sys, cfg, r)?;
    let mut warnings = Vec::new();
    if gram.flagged.iter().any(|&f| f) {
        warnings.push("extended Gramians are numerically rank deficient".to_string());
    }
    let stable = is_hurwitz(&reduced)?.0;
    let mut bounds = Bounds {
        sf: Some(PointBound {
            omega: cfg.varpi,
            value: sf_bound(&gram, r)?,
        }),
        ..Default::default()
    };
    if !stable {
        warnings.push("reduced model is not Hurwitz".to_string());
        bounds.ef_unavailable = Some("reduced model is not Hurwitz".into());
    } else if !is_hurwitz(sys)?.0 {
        bounds.ef_unavailable = Some("original model is not Hurwitz".into());
    } else {
        match sf_ef_bound(sys, &reduced, &gram, r) {
            Ok(v) => {
                bounds.ef = Some(EfBound {
                    value: v,
                    certified: true,
                })
            }
            Err(e) => bounds.ef_unavailable = Some(e.to_string()),
        }
    }
    Ok(ReductionResult {
        reduced,
        method: Method::SfFdbt {
            varpi: cfg.varpi,
            epsilon: cfg.epsilon,
        },
        order: r,
        sigma: gram.sigma,
        bounds,
        stable,
        warnings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsilonRow {
    pub epsilon: f64,
    pub sf_bound: Option<f64>,
    pub ef_bound: Option<f64>,
    pub error: Option<String>,
}

/// One row per ε; failures stay in their row.
pub fn epsilon_sweep(sys: &StateSpace, varpi: f64, r: usize, epsilons: &[f64]) -> Vec<EpsilonRow> {
    epsilons
        .par_iter()
        .map(|&eps| {
            let row = SfConfig::new(varpi, eps).and_then(|cfg| sf_reduce(sys, cfg, r));
            match row {
                Ok(res) => EpsilonRow {
                    epsilon: eps,
                    sf_bound: res.bounds.sf.map(|b| b.value),
                    ef_bound: res.bounds.ef.map(|b| b.value),
                    error: res.bounds.ef_unavailable,
                },
                Err(e) => EpsilonRow {
                    epsilon: eps,
                    sf_bound: None,
                    ef_bound: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
