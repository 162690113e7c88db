//! Common result type of every reduction method.

use crate::sysmodel::StateSpace;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Fibt,
    Gspa { rho: f64 },
    Fgbt { w1: f64, w2: f64 },
    SfFdbt { varpi: f64, epsilon: f64 },
    IntervalFdbt { w1: f64, w2: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Fibt => "fibt",
            Method::Gspa { rho } if *rho == 0.0 => "spa",
            Method::Gspa { .. } => "gspa",
            Method::Fgbt { .. } => "fgbt",
            Method::SfFdbt { .. } => "sf-fdbt",
            Method::IntervalFdbt { .. } => "int-fdbt",
        }
    }
}

/// Bound at the single frequency ϖ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointBound {
    pub omega: f64,
    pub value: f64,
}

/// Bound valid for ω in [w1, w2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandBound {
    pub w1: f64,
    pub w2: f64,
    pub value: f64,
}

/// Entire-frequency bound. `certified` is false for heuristic values that no
/// theorem backs (the FGBT tail sum).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfBound {
    pub value: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sf: Option<PointBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<BandBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ef: Option<EfBound>,
    /// Why the EF bound is missing, when it is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ef_unavailable: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced: StateSpace,
    pub method: Method,
    pub order: usize,
    /// Singular values that drove the truncation (all n of them).
    pub sigma: Vec<f64>,
    pub bounds: Bounds,
    pub stable: bool,
    pub warnings: Vec<String>,
}

/// 1 <= r <= n. r = n is allowed so that round trips can be exercised.
pub(crate) fn check_order(r: usize, n: usize) -> crate::Result<()> {
    if r == 0 || r > n {
        return Err(crate::Error::OrderOutOfRange { r, n });
    }
    Ok(())
}

/// Controllability and observability Gramians of a Hurwitz realization.
pub(crate) fn gramians(
    a: &crate::CMatrix,
    b: &crate::CMatrix,
    c: &crate::CMatrix,
) -> crate::Result<(crate::CMatrix, crate::CMatrix)> {
    use crate::numkit::solve_lyapunov;
    let wc = solve_lyapunov(a, &(b * b.adjoint()))?;
    let wo = solve_lyapunov(&a.adjoint(), &(c.adjoint() * c))?;
    Ok((wc, wo))
}

/// 2 Σ_{i>r} σ_i
pub(crate) fn tail_sum(sigma: &[f64], r: usize) -> f64 {
    2.0 * sigma.iter().skip(r).sum::<f64>()
}

/// Grid points per sign used for ∞-norm estimates.
pub const HINF_POINTS: usize = 2000;

/// Runs the reduction named by `method`.
pub fn reduce(sys: &StateSpace, method: Method, r: usize) -> crate::Result<ReductionResult> {
    use crate::{baselines, interval_fdbt, sf_fdbt};
    match method {
        Method::Fibt => baselines::fibt_reduce(sys, r),
        Method::Gspa { rho } => baselines::gspa_reduce(sys, r, rho),
        Method::Fgbt { w1, w2 } => baselines::fgbt_reduce(sys, r, w1, w2),
        Method::SfFdbt { varpi, epsilon } => {
            sf_fdbt::sf_reduce(sys, sf_fdbt::SfConfig::new(varpi, epsilon)?, r)
        }
        Method::IntervalFdbt { w1, w2 } => {
            interval_fdbt::interval_reduce(sys, interval_fdbt::IntervalConfig::new(w1, w2)?, r)
        }
    }
}
