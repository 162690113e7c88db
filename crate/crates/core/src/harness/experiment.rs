use super::random::{generate_random_models, RandomModelSpec};
use super::verify::BAND_POINTS;
use crate::baselines::{fgbt_reduce, fibt_reduce};
use crate::error::Result;
use crate::interval_fdbt::{interval_bound, interval_eta, interval_truncate, IntervalConfig};
use crate::sysmodel::{band_peak, error_system, StateSpace};
use rayon::prelude::*;
use serde::Serialize;

/// Results for one model, one band [−wl, wl] and one order.
#[derive(Debug, Clone, Serialize)]
pub struct ModelRecord {
    pub model: usize,
    pub wl: f64,
    pub r: usize,
    pub fibt_peak: f64,
    pub fibt_ef_bound: f64,
    pub fdbt_peak: Option<f64>,
    pub fdbt_bound: Option<f64>,
    pub fgbt_peak: Option<f64>,
    pub fgbt_bound: Option<f64>,
    pub failures: Vec<String>,
}

/// Comparison indices for one (wl, r) cell. Means are means of per-model
/// ratios; models whose method failed are left out of that method's mean.
#[derive(Debug, Clone, Serialize)]
pub struct CellSummary {
    pub wl: f64,
    pub r: usize,
    pub models: usize,
    pub fdbt_failures: usize,
    pub fgbt_failures: usize,
    pub err_fdbt: f64,
    pub err_fgbt: f64,
    pub eb_fdbt: f64,
    pub eb_fgbt: f64,
    /// Share of models with in-band FDBT peak below the FIBT peak.
    pub frac_err_fdbt_below_one: f64,
    /// Share of models with interval bound below the FIBT EF bound.
    pub frac_eb_fdbt_below_one: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub spec: RandomModelSpec,
    pub resamples: usize,
    pub wl_list: Vec<f64>,
    pub r_list: Vec<usize>,
    pub records: Vec<ModelRecord>,
    pub cells: Vec<CellSummary>,
}

fn in_band(sys: &StateSpace, red: &StateSpace, wl: f64) -> Result<f64> {
    Ok(band_peak(&error_system(sys, red)?, -wl, wl, BAND_POINTS)?.0)
}

fn model_records(k: usize, sys: &StateSpace, wl_list: &[f64], r_list: &[usize]) -> Vec<ModelRecord> {
    let mut out = Vec::new();
    for &r in r_list {
        let fibt = match fibt_reduce(sys, r) {
            Ok(f) => f,
            Err(e) => {
                for &wl in wl_list {
                    out.push(ModelRecord {
                        model: k,
                        wl,
                        r,
                        fibt_peak: f64::NAN,
                        fibt_ef_bound: f64::NAN,
                        fdbt_peak: None,
                        fdbt_bound: None,
                        fgbt_peak: None,
                        fgbt_bound: None,
                        failures: vec![format!("fibt: {e}")],
                    });
                }
                continue;
            }
        };
        let fibt_ef = fibt.bounds.ef.map(|b| b.value).unwrap_or(f64::NAN);
        for &wl in wl_list {
            let mut failures = Vec::new();
            let fibt_peak = in_band(sys, &fibt.reduced, wl).unwrap_or(f64::NAN);
            let fdbt = IntervalConfig::new(-wl, wl).and_then(|cfg| {
                let (red, gram, bal) = interval_truncate(sys, cfg, r)?;
                let bound = interval_bound(&interval_eta(&bal, &gram, cfg, r)?);
                Ok((in_band(sys, &red, wl)?, bound))
            });
            let (fdbt_peak, fdbt_bound) = match fdbt {
                Ok((p, b)) => (Some(p), Some(b)),
                Err(e) => {
                    failures.push(format!("int-fdbt: {e}"));
                    (None, None)
                }
            };
            let fgbt = fgbt_reduce(sys, r, -wl, wl).and_then(|g| {
                let b = g.bounds.ef.map(|b| b.value).unwrap_or(f64::NAN);
                Ok((in_band(sys, &g.reduced, wl)?, b))
            });
            let (fgbt_peak, fgbt_bound) = match fgbt {
                Ok((p, b)) => (Some(p), Some(b)),
                Err(e) => {
                    failures.push(format!("fgbt: {e}"));
                    (None, None)
                }
            };
            out.push(ModelRecord {
                model: k,
                wl,
                r,
                fibt_peak,
                fibt_ef_bound: fibt_ef,
                fdbt_peak,
                fdbt_bound,
                fgbt_peak,
                fgbt_bound,
                failures,
            });
        }
    }
    out
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn frac_below_one(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        v.iter().filter(|&&x| x < 1.0).count() as f64 / v.len() as f64
    }
}

/// Per-cell aggregation over records (ordered by model index).
pub fn summarize(records: &[ModelRecord], wl_list: &[f64], r_list: &[usize]) -> Vec<CellSummary> {
    let mut cells = Vec::new();
    for &wl in wl_list {
        for &r in r_list {
            let rows: Vec<&ModelRecord> =
                records.iter().filter(|x| x.wl == wl && x.r == r).collect();
            let ratio = |num: Option<f64>, den: f64| -> Option<f64> {
                match num {
                    Some(a) if den.is_finite() && den > 0.0 && a.is_finite() => Some(a / den),
                    _ => None,
                }
            };
            let err_d: Vec<f64> = rows.iter().filter_map(|x| ratio(x.fdbt_peak, x.fibt_peak)).collect();
            let err_g: Vec<f64> = rows.iter().filter_map(|x| ratio(x.fgbt_peak, x.fibt_peak)).collect();
            let eb_d: Vec<f64> = rows.iter().filter_map(|x| ratio(x.fdbt_bound, x.fibt_ef_bound)).collect();
            let eb_g: Vec<f64> = rows.iter().filter_map(|x| ratio(x.fgbt_bound, x.fibt_ef_bound)).collect();
            cells.push(CellSummary {
                wl,
                r,
                models: rows.len(),
                fdbt_failures: rows.iter().filter(|x| x.fdbt_peak.is_none()).count(),
                fgbt_failures: rows.iter().filter(|x| x.fgbt_peak.is_none()).count(),
                err_fdbt: mean(&err_d),
                err_fgbt: mean(&err_g),
                eb_fdbt: mean(&eb_d),
                eb_fgbt: mean(&eb_g),
                frac_err_fdbt_below_one: frac_below_one(&err_d),
                frac_eb_fdbt_below_one: frac_below_one(&eb_d),
            });
        }
    }
    cells
}

/// Randomized comparison on seeded random plants. Models run in parallel; output
/// order is by model index.
pub fn run_randomized_experiment(
    spec: &RandomModelSpec,
    wl_list: &[f64],
    r_list: &[usize],
) -> ExperimentReport {
    let models = generate_random_models(spec);
    let per_model: Vec<Vec<ModelRecord>> = models
        .systems
        .par_iter()
        .enumerate()
        .map(|(k, s)| model_records(k, s, wl_list, r_list))
        .collect();
    let records: Vec<ModelRecord> = per_model.into_iter().flatten().collect();
    let cells = summarize(&records, wl_list, r_list);
    ExperimentReport {
        spec: *spec,
        resamples: models.resamples,
        wl_list: wl_list.to_vec(),
        r_list: r_list.to_vec(),
        records,
        cells,
    }
}
