use super::fixtures::{example1, example2};
use super::ladder::{generate_ladder, LadderParams};
use super::verify::{verify_bound, VerificationRecord, BAND_POINTS};
use crate::error::{Error, Result};
use crate::io::{sweep_csv, write_text};
use crate::reduction::{reduce, Method, ReductionResult};
use crate::sf_fdbt::{epsilon_sweep, EpsilonRow};
use crate::sysmodel::{
    band_grid, band_peak, error_system, sigma_max_at, sweep_lossy, FrequencyGrid, StateSpace,
    SweepReport,
};
use serde::Serialize;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleName {
    Ex1,
    Ex2Case1,
    Ex2Case2,
    Ex3Case1,
    Ex3Case2,
}

impl ExampleName {
    pub const ALL: [ExampleName; 5] = [
        ExampleName::Ex1,
        ExampleName::Ex2Case1,
        ExampleName::Ex2Case2,
        ExampleName::Ex3Case1,
        ExampleName::Ex3Case2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleName::Ex1 => "ex1",
            ExampleName::Ex2Case1 => "ex2_case1",
            ExampleName::Ex2Case2 => "ex2_case2",
            ExampleName::Ex3Case1 => "ex3_case1",
            ExampleName::Ex3Case2 => "ex3_case2",
        }
    }
}

impl FromStr for ExampleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExampleName::ALL
            .iter()
            .find(|e| e.as_str() == s)
            .copied()
            .ok_or_else(|| Error::InvalidParameters(format!("unknown example '{s}'")))
    }
}

/// Order of the ladder in the third example.
pub const LADDER_ORDER: usize = 201;
/// Neighbourhood of ω = 0 on which the ladder's Case I is judged.
pub const LADDER_CASE1_BAND: f64 = 0.05;
/// ε used for the ladder's SF reduction.
pub const LADDER_SF_EPSILON: f64 = 1.0;
/// Band of the ladder's Case II.
pub const LADDER_CASE2_BAND: f64 = 0.5;

#[derive(Debug, Clone, Serialize)]
pub struct LabeledSweep {
    pub label: String,
    #[serde(skip)]
    pub report: SweepReport,
    pub peak_value: f64,
    pub peak_frequency: f64,
}

/// Named qualitative comparison; `pass` is data, not a panic.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// One measured quantity per reduction (in-band peak or error at ϖ).
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub label: String,
    pub method: String,
    pub order: usize,
    pub quantity: String,
    pub value: f64,
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleBundle {
    pub name: String,
    pub sweeps: Vec<LabeledSweep>,
    pub records: Vec<VerificationRecord>,
    pub measurements: Vec<Measurement>,
    pub assertions: Vec<Assertion>,
    pub epsilon_table: Vec<EpsilonRow>,
    pub failures: Vec<String>,
}

impl ExampleBundle {
    fn new(name: &str) -> Self {
        ExampleBundle {
            name: name.to_string(),
            sweeps: vec![],
            records: vec![],
            measurements: vec![],
            assertions: vec![],
            epsilon_table: vec![],
            failures: vec![],
        }
    }

    pub fn measurement(&self, label: &str) -> Option<&Measurement> {
        self.measurements.iter().find(|m| m.label == label)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    fn add_sweep(&mut self, label: String, sys: &StateSpace, grid: &FrequencyGrid) {
        let report = sweep_lossy(sys, grid);
        self.sweeps.push(LabeledSweep {
            label,
            peak_value: report.peak_value,
            peak_frequency: report.peak_frequency,
            report,
        });
    }
}

/// Two-sided log grid ±[lo, hi] plus ω = 0.
pub fn two_sided_grid(lo: f64, hi: f64, per_side: usize) -> Result<FrequencyGrid> {
    let pos = FrequencyGrid::logarithmic(lo, hi, per_side)?;
    let mut pts = vec![0.0];
    for &w in pos.points() {
        pts.push(w);
        pts.push(-w);
    }
    FrequencyGrid::explicit(pts)
}

fn label(method: Method, r: usize) -> String {
    match method {
        Method::SfFdbt { epsilon, .. } => format!("sf-fdbt_eps{epsilon}_r{r}"),
        Method::Gspa { rho } => format!("gspa_rho{rho}_r{r}"),
        m => format!("{}_r{r}", m.name()),
    }
}

fn run(
    bundle: &mut ExampleBundle,
    sys: &StateSpace,
    method: Method,
    r: usize,
    verify: bool,
) -> Option<ReductionResult> {
    match reduce(sys, method, r) {
        Ok(res) => {
            if verify {
                match verify_bound(sys, &res) {
                    Ok(recs) => bundle.records.extend(recs),
                    Err(e) => bundle.failures.push(format!("{}: verify: {e}", label(method, r))),
                }
            }
            Some(res)
        }
        Err(e) => {
            bundle.failures.push(format!("{}: {e}", label(method, r)));
            None
        }
    }
}

fn measure_band(
    bundle: &mut ExampleBundle,
    sys: &StateSpace,
    res: &ReductionResult,
    wl: f64,
    bound: Option<f64>,
) -> Option<f64> {
    let err = error_system(sys, &res.reduced).ok()?;
    let peak = band_peak(&err, -wl, wl, BAND_POINTS).ok()?.0;
    bundle.measurements.push(Measurement {
        label: label(res.method, res.order),
        method: res.method.name().to_string(),
        order: res.order,
        quantity: format!("in-band peak on [-{wl}, {wl}]"),
        value: peak,
        bound,
    });
    Some(peak)
}

fn ex1() -> Result<ExampleBundle> {
    let fx = example1();
    let sys = &fx.system;
    let mut b = ExampleBundle::new(fx.name);
    let grid = two_sided_grid(1e-3, 1e3, 400)?;
    let mut fibt_dc = f64::NAN;
    let mut sf_dc = Vec::new();
    for sc in &fx.scenarios {
        let Some(res) = run(&mut b, sys, sc.method, sc.order, true) else { continue };
        let err = error_system(sys, &res.reduced)?;
        let dc = sigma_max_at(&err, 0.0)?;
        b.measurements.push(Measurement {
            label: label(sc.method, sc.order),
            method: sc.method.name().to_string(),
            order: sc.order,
            quantity: "error at omega = 0".into(),
            value: dc,
            bound: res.bounds.sf.map(|s| s.value),
        });
        match sc.method {
            Method::Fibt => fibt_dc = dc,
            Method::SfFdbt { epsilon, .. } => sf_dc.push((epsilon, dc)),
            _ => {}
        }
        b.add_sweep(label(sc.method, sc.order), &err, &grid);
    }
    let best = sf_dc.iter().cloned().fold((f64::NAN, f64::INFINITY), |a, x| if x.1 < a.1 { x } else { a });
    b.assertions.push(Assertion {
        name: "sf_below_fibt_at_dc".into(),
        pass: best.1 < fibt_dc,
        detail: format!("best SF error at 0: {:.4e} (eps = {}), FIBT: {:.4e}", best.1, best.0, fibt_dc),
    });
    let eps: Vec<f64> = (0..25).map(|k| 10f64.powf(-1.0 + 3.0 * k as f64 / 24.0)).collect();
    b.epsilon_table = epsilon_sweep(sys, 0.0, 3, &eps);
    Ok(b)
}

fn ex2(wl: f64) -> Result<ExampleBundle> {
    let fx = example2(wl);
    let sys = &fx.system;
    let mut b = ExampleBundle::new(fx.name);
    let grid = band_grid(-wl, wl, 1000, &[])?;
    let wide = two_sided_grid(1e-3, 1e3, 400)?;
    for sc in &fx.scenarios {
        let Some(res) = run(&mut b, sys, sc.method, sc.order, true) else { continue };
        measure_band(&mut b, sys, &res, wl, res.bounds.interval.map(|x| x.value));
        let err = error_system(sys, &res.reduced)?;
        b.add_sweep(format!("{}_band", label(sc.method, sc.order)), &err, &grid);
        b.add_sweep(format!("{}_wide", label(sc.method, sc.order)), &err, &wide);
    }
    for r in [1, 2] {
        let get = |m: Method| b.measurement(&label(m, r)).map(|x| x.value).unwrap_or(f64::NAN);
        let int = get(Method::IntervalFdbt { w1: -wl, w2: wl });
        let fibt = get(Method::Fibt);
        let fgbt = get(Method::Fgbt { w1: -wl, w2: wl });
        b.assertions.push(Assertion {
            name: format!("interval_best_in_band_r{r}"),
            pass: int <= fibt.min(fgbt),
            detail: format!("in-band peaks: int-fdbt {int:.4e}, fibt {fibt:.4e}, fgbt {fgbt:.4e}"),
        });
    }
    Ok(b)
}

fn ex3_case1() -> Result<ExampleBundle> {
    let sys = generate_ladder(LADDER_ORDER, LadderParams::default())?;
    let mut b = ExampleBundle::new("ex3_case1");
    let wl = LADDER_CASE1_BAND;
    let grid = two_sided_grid(1e-4, 1e1, 300)?;
    let methods = [
        (Method::Fibt, 181),
        (Method::Gspa { rho: 0.0 }, 181),
        (Method::SfFdbt { varpi: 0.0, epsilon: LADDER_SF_EPSILON }, 51),
    ];
    for (m, r) in methods {
        let Some(res) = run(&mut b, &sys, m, r, true) else { continue };
        measure_band(&mut b, &sys, &res, wl, None);
        let err = error_system(&sys, &res.reduced)?;
        b.add_sweep(label(m, r), &err, &grid);
    }
    let sf = b
        .measurement(&label(methods[2].0, 51))
        .map(|x| x.value)
        .unwrap_or(f64::NAN);
    let fibt = b.measurement(&label(Method::Fibt, 181)).map(|x| x.value).unwrap_or(f64::NAN);
    b.assertions.push(Assertion {
        name: "sf51_below_fibt181_in_band".into(),
        pass: sf < fibt,
        detail: format!("peaks on [-{wl}, {wl}]: sf-fdbt r=51 {sf:.4e}, fibt r=181 {fibt:.4e}"),
    });
    Ok(b)
}

fn ex3_case2() -> Result<ExampleBundle> {
    let sys = generate_ladder(LADDER_ORDER, LadderParams::default())?;
    let mut b = ExampleBundle::new("ex3_case2");
    let wl = LADDER_CASE2_BAND;
    let grid = band_grid(-wl, wl, 1000, &[])?;
    for r in [51, 61] {
        for m in [Method::IntervalFdbt { w1: -wl, w2: wl }, Method::Fgbt { w1: -wl, w2: wl }] {
            let Some(res) = run(&mut b, &sys, m, r, true) else { continue };
            measure_band(&mut b, &sys, &res, wl, res.bounds.interval.map(|x| x.value));
            let err = error_system(&sys, &res.reduced)?;
            b.add_sweep(label(m, r), &err, &grid);
        }
        let get = |m: Method| b.measurement(&label(m, r)).map(|x| x.value).unwrap_or(f64::NAN);
        let int = get(Method::IntervalFdbt { w1: -wl, w2: wl });
        let fgbt = get(Method::Fgbt { w1: -wl, w2: wl });
        b.assertions.push(Assertion {
            name: format!("interval_beats_fgbt_r{r}"),
            pass: int <= fgbt,
            detail: format!("in-band peaks: int-fdbt {int:.4e}, fgbt {fgbt:.4e}"),
        });
    }
    Ok(b)
}

/// Reductions, verification records, sweeps and qualitative checks of one
/// example scenario.
pub fn reproduce_example(name: ExampleName) -> Result<ExampleBundle> {
    match name {
        ExampleName::Ex1 => ex1(),
        ExampleName::Ex2Case1 => ex2(0.4),
        ExampleName::Ex2Case2 => ex2(0.8),
        ExampleName::Ex3Case1 => ex3_case1(),
        ExampleName::Ex3Case2 => ex3_case2(),
    }
}

/// Writes `<dir>/<label>.csv` per sweep and `<dir>/report.json`.
pub fn write_bundle(bundle: &ExampleBundle, dir: &Path) -> Result<()> {
    for s in &bundle.sweeps {
        write_text(&dir.join(format!("{}.csv", s.label)), &sweep_csv(&s.report))?;
    }
    let json = serde_json::to_string_pretty(bundle).expect("bundle serializes");
    write_text(&dir.join("report.json"), &json)
}
