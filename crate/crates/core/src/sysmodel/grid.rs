use super::{evaluate, StateSpace};
use crate::error::{Error, Result};
use crate::numkit::{schur, sigma_max, CMatrix, C64};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Logarithmic,
    Explicit,
}

/// Strictly increasing finite frequencies (rad/s).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    spacing: Spacing,
}

impl FrequencyGrid {
    pub fn linear(lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_range(lo, hi, n)?;
        let pts = if n == 1 {
            vec![lo]
        } else {
            (0..n)
                .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                .collect()
        };
        Self::build(pts, Spacing::Linear)
    }

    /// Log-spaced points on [lo, hi], both positive.
    pub fn logarithmic(lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_range(lo, hi, n)?;
        if lo <= 0.0 {
            return Err(Error::InvalidParameters(
                "logarithmic grid needs positive bounds".into(),
            ));
        }
        let (a, b) = (lo.log10(), hi.log10());
        let pts = if n == 1 {
            vec![lo]
        } else {
            (0..n)
                .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
                .collect()
        };
        Self::build(pts, Spacing::Logarithmic)
    }

    /// Sorts and deduplicates arbitrary finite points.
    pub fn explicit(mut pts: Vec<f64>) -> Result<Self> {
        if pts.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("frequency grid".into()));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Self::build(pts, Spacing::Explicit)
    }

    fn build(points: Vec<f64>, spacing: Spacing) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameters("empty frequency grid".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameters(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(FrequencyGrid { points, spacing })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_range(lo: f64, hi: f64, n: usize) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::NonFinite("grid bounds".into()));
    }
    if n == 0 || (n > 1 && lo >= hi) {
        return Err(Error::InvalidParameters(format!(
            "grid needs lo < hi and points >= 1 (got {lo}, {hi}, {n})"
        )));
    }
    Ok(())
}

/// σ_max of a response over a grid. Poles hit by the grid show up as NaN
/// entries and are listed in `skipped`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub grid: FrequencyGrid,
    pub sigma_max: Vec<f64>,
    pub peak_value: f64,
    pub peak_frequency: f64,
    pub skipped: Vec<f64>,
}

/// Frequency-response evaluator that reuses one Schur factorization of A,
/// so each frequency costs a triangular solve.
pub struct ResponseEvaluator {
    kind: EvalKind,
}

enum EvalKind {
    Schur {
        t: CMatrix,
        bq: CMatrix,
        cq: CMatrix,
        d: CMatrix,
        tnorm: f64,
    },
    Direct(StateSpace),
}

impl ResponseEvaluator {
    pub fn new(sys: &StateSpace) -> Self {
        if sys.n() == 0 {
            return ResponseEvaluator {
                kind: EvalKind::Direct(sys.clone()),
            };
        }
        match schur(sys.a()) {
            Ok((q, t)) => {
                let tnorm = t.norm();
                ResponseEvaluator {
                    kind: EvalKind::Schur {
                        bq: q.adjoint() * sys.b(),
                        cq: sys.c() * &q,
                        d: sys.d().clone(),
                        t,
                        tnorm,
                    },
                }
            }
            Err(_) => ResponseEvaluator {
                kind: EvalKind::Direct(sys.clone()),
            },
        }
    }

    pub fn eval(&self, omega: f64) -> Result<CMatrix> {
        match &self.kind {
            EvalKind::Direct(sys) => evaluate(sys, omega),
            EvalKind::Schur { t, bq, cq, d, tnorm } => {
                let n = t.nrows();
                let s = C64::new(0.0, omega);
                let floor = f64::EPSILON * (tnorm + omega.abs());
                if (0..n).any(|i| (s - t[(i, i)]).norm() <= floor) {
                    return Err(Error::PoleOnGrid { omega });
                }
                let mut x = bq.clone();
                for col in 0..x.ncols() {
                    for i in (0..n).rev() {
                        let mut acc = x[(i, col)];
                        for k in i + 1..n {
                            acc += t[(i, k)] * x[(k, col)];
                        }
                        x[(i, col)] = acc / (s - t[(i, i)]);
                    }
                }
                let g = cq * x + d;
                if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::PoleOnGrid { omega });
                }
                Ok(g)
            }
        }
    }

    pub fn sigma(&self, omega: f64) -> Result<f64> {
        Ok(sigma_max(&self.eval(omega)?))
    }

    pub fn sigma_or_nan(&self, omega: f64) -> f64 {
        self.sigma(omega).unwrap_or(f64::NAN)
    }
}

/// Sweep that tolerates poles on the grid (NaN entries, recorded in `skipped`).
pub fn sweep_lossy(sys: &StateSpace, grid: &FrequencyGrid) -> SweepReport {
    let ev = ResponseEvaluator::new(sys);
    let sigma: Vec<f64> = grid.points().par_iter().map(|&w| ev.sigma_or_nan(w)).collect();
    let skipped = grid
        .points()
        .iter()
        .zip(&sigma)
        .filter(|(_, s)| s.is_nan())
        .map(|(&w, _)| w)
        .collect();
    let (peak_frequency, peak_value) = argmax(grid.points(), &sigma);
    SweepReport {
        grid: grid.clone(),
        sigma_max: sigma,
        peak_value,
        peak_frequency,
        skipped,
    }
}

/// Strict sweep: fails with the first (lowest) frequency that hits a pole.
pub fn sweep(sys: &StateSpace, grid: &FrequencyGrid) -> Result<SweepReport> {
    let r = sweep_lossy(sys, grid);
    if let Some(&omega) = r.skipped.first() {
        return Err(Error::PoleOnGrid { omega });
    }
    Ok(r)
}

fn argmax(points: &[f64], values: &[f64]) -> (f64, f64) {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for (&w, &v) in points.iter().zip(values) {
        if v > best.1 {
            best = (w, v);
        }
    }
    if best.1 == f64::NEG_INFINITY {
        (f64::NAN, f64::NAN)
    } else {
        best
    }
}

/// Golden-section maximization of `f` around the grid peak, on the bracket
/// formed by its grid neighbours and clipped to [lo, hi]. Stops when the
/// bracket is below 1e-6 relative. Returns the better of grid and refined peak.
pub fn refine_peak<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    values: &[f64],
    lo: f64,
    hi: f64,
) -> (f64, f64) {
    let (w0, v0) = argmax(points, values);
    if !w0.is_finite() {
        return (w0, v0);
    }
    let k = points.iter().position(|&w| w == w0).unwrap();
    let mut a = if k > 0 { points[k - 1] } else { w0 }.max(lo);
    let mut b = if k + 1 < points.len() { points[k + 1] } else { w0 }.min(hi);
    if b <= a {
        return (w0, v0);
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = (w0, v0);
    for _ in 0..200 {
        if (b - a) <= 1e-6 * b.abs().max(a.abs()).max(1e-12) {
            break;
        }
        // NaN (pole) compares false and shrinks toward the finite side
        if f1 >= f2 || f2.is_nan() {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v > best.1 {
                best = (x, v);
            }
        }
    }
    best
}

/// Band grid on [w1, w2]: endpoints, center, `n/2` linear points and the rest
/// log-spaced offsets from the center (both sides), plus any extra points
/// that fall inside the band.
pub fn band_grid(w1: f64, w2: f64, n: usize, extra: &[f64]) -> Result<FrequencyGrid> {
    if w1 >= w2 {
        return Err(Error::InvalidParameters(format!("band [{w1}, {w2}] is empty")));
    }
    let wc = 0.5 * (w1 + w2);
    let wd = 0.5 * (w2 - w1);
    let nlin = (n / 2).max(2);
    let nlog = (n.saturating_sub(nlin + 3) / 2).max(1);
    let mut pts = vec![w1, wc, w2];
    for k in 0..nlin {
        pts.push(w1 + (w2 - w1) * k as f64 / (nlin - 1) as f64);
    }
    let (a, b) = ((1e-4 * wd).log10(), wd.log10());
    for k in 0..nlog {
        let off = if nlog == 1 {
            wd
        } else {
            10f64.powf(a + (b - a) * k as f64 / (nlog - 1) as f64)
        };
        pts.push((wc - off).max(w1));
        pts.push((wc + off).min(w2));
    }
    pts.extend(extra.iter().cloned().filter(|&w| w >= w1 && w <= w2));
    FrequencyGrid::explicit(pts)
}

/// Refined peak of σ_max over [w1, w2]; pole frequencies inside the band are
/// added to the grid. Returns (peak, frequency, skipped poles).
pub fn band_peak(sys: &StateSpace, w1: f64, w2: f64, n: usize) -> Result<(f64, f64, Vec<f64>)> {
    let extra: Vec<f64> = if sys.n() > 0 {
        sys.poles()?.iter().map(|l| l.im).collect()
    } else {
        vec![]
    };
    let grid = band_grid(w1, w2, n, &extra)?;
    let rep = sweep_lossy(sys, &grid);
    let ev = ResponseEvaluator::new(sys);
    let (w, v) = refine_peak(|x| ev.sigma_or_nan(x), grid.points(), &rep.sigma_max, w1, w2);
    Ok((v, w, rep.skipped))
}

/// Lower estimate of ‖G‖∞ from a dense two-sided log grid spanning the pole
/// magnitudes, the pole frequencies, ω = 0 and the ω → ∞ limit σ_max(D),
/// with golden-section refinement around the grid peak. Returns (value, ω);
/// ω is infinite when the limit dominates.
pub fn hinf_estimate(sys: &StateSpace, per_side: usize) -> Result<(f64, f64)> {
    let dinf = sigma_max(sys.d());
    if sys.n() == 0 {
        return Ok((dinf, f64::INFINITY));
    }
    let poles = sys.poles()?;
    let mags: Vec<f64> = poles.iter().map(|l| l.norm()).filter(|&x| x > 0.0).collect();
    let lo = mags.iter().cloned().fold(1.0, f64::min) * 1e-3;
    let hi = mags.iter().cloned().fold(1.0, f64::max) * 1e3;
    let pos = FrequencyGrid::logarithmic(lo, hi, per_side.max(2))?;
    let mut pts: Vec<f64> = vec![0.0];
    for &w in pos.points() {
        pts.push(w);
        pts.push(-w);
    }
    pts.extend(poles.iter().map(|l| l.im));
    let grid = FrequencyGrid::explicit(pts)?;
    let rep = sweep(sys, &grid)?;
    let ev = ResponseEvaluator::new(sys);
    let (w, v) = refine_peak(
        |x| ev.sigma_or_nan(x),
        grid.points(),
        &rep.sigma_max,
        f64::NEG_INFINITY,
        f64::INFINITY,
    );
    if dinf > v {
        Ok((dinf, f64::INFINITY))
    } else {
        Ok((v, w))
    }
}
