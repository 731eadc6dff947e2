//! Least-squares fitters for the curve families that parameterize the
//! dynamics: polynomial agent growth, logistic diffusion and the
//! stretched-exponential capability gap.
//!
//! Nonlinear fits use [`lm`], a Levenberg–Marquardt loop with analytic
//! Jacobians, a 200-iteration cap and a relative step tolerance of 1e−10.
//! Starting points are computed from the data, so every fit is
//! reproducible.

mod lm;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::GapCurve;
use crate::error::{Error, Result};

/// Observed `(t, value)` pairs with strictly increasing `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesData {
    pub label: String,
    points: Vec<(f64, f64)>,
}

impl SeriesData {
    /// Builds a series from points that are already in strictly increasing
    /// `t` order.
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::Data("series contains non-finite values".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::Data(format!(
                "t must be strictly increasing; {} follows {}",
                w[1].0, w[0].0
            )));
        }
        Ok(SeriesData {
            label: label.into(),
            points,
        })
    }

    /// Sorts by `t` and rejects duplicate times.
    pub fn from_unsorted(label: impl Into<String>, mut points: Vec<(f64, f64)>) -> Result<Self> {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = points.windows(2).find(|w| w[1].0 == w[0].0) {
            return Err(Error::Data(format!("duplicate t = {}", w[0].0)));
        }
        SeriesData::new(label, points)
    }

    /// Samples `f` at each of `ts`.
    pub fn sample(
        label: impl Into<String>,
        ts: impl IntoIterator<Item = f64>,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        SeriesData::new(label, ts.into_iter().map(|t| (t, f(t))).collect())
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Named parameters in the order the model defines them.
    pub params: Vec<(String, f64)>,
    pub residual_sum_squares: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Residual sum of squares after every accepted solver step, starting
    /// from the initial guess. A single entry for closed-form fits.
    pub rss_history: Vec<f64>,
}

impl FitResult {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    fn closed_form(params: Vec<(&str, f64)>, rss: f64) -> Self {
        FitResult {
            params: params
                .into_iter()
                .map(|(n, v)| (n.to_string(), v))
                .collect(),
            residual_sum_squares: rss,
            converged: true,
            iterations: 0,
            rss_history: vec![rss],
        }
    }
}

/// Ordinary least-squares `c0 + c1 t + c2 t²`.
///
/// Time is centred and scaled before solving, then the coefficients are
/// mapped back to the original origin.
pub fn fit_quadratic(series: &SeriesData) -> Result<FitResult> {
    let n = series.len();
    if n < 3 {
        return Err(Error::SingularFit(format!(
            "quadratic fit needs at least 3 points, got {n}"
        )));
    }
    let ts = series.times();
    let ys = series.values();
    let mean = ts.iter().sum::<f64>() / n as f64;
    let scale = ts.iter().map(|t| (t - mean).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::SingularFit("all t values coincide".into()));
    }
    let design = DMatrix::from_fn(n, 3, |i, j| ((ts[i] - mean) / scale).powi(j as i32));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > smax * 1e-12)
        .count();
    if rank < 3 {
        return Err(Error::SingularFit(format!(
            "design matrix has rank {rank}; need 3 distinct t values"
        )));
    }
    let b = svd
        .solve(&DVector::from_vec(ys.clone()), smax * 1e-12)
        .map_err(|e| Error::SingularFit(e.to_string()))?;
    let (b0, b1, b2) = (b[0], b[1] / scale, b[2] / (scale * scale));
    let c2 = b2;
    let c1 = b1 - 2.0 * b2 * mean;
    let c0 = b0 - b1 * mean + b2 * mean * mean;
    let rss = ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| {
            let r = c0 + c1 * t + c2 * t * t - y;
            r * r
        })
        .sum();
    Ok(FitResult::closed_form(
        vec![("c0", c0), ("c1", c1), ("c2", c2)],
        rss,
    ))
}

struct LogisticProblem {
    t: Vec<f64>,
    v: Vec<f64>,
    saturation: f64,
}

impl LogisticProblem {
    fn sigma(k: f64, t0: f64, t: f64) -> f64 {
        1.0 / (1.0 + (-k * (t - t0)).exp())
    }
}

impl lm::Problem for LogisticProblem {
    fn residuals(&self, p: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.t.len(),
            self.t
                .iter()
                .zip(&self.v)
                .map(|(t, v)| self.saturation * Self::sigma(p[0], p[1], *t) - v),
        )
    }

    fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let (k, t0) = (p[0], p[1]);
        DMatrix::from_fn(self.t.len(), 2, |i, j| {
            let s = Self::sigma(k, t0, self.t[i]);
            let ds = self.saturation * s * (1.0 - s);
            if j == 0 {
                ds * (self.t[i] - t0)
            } else {
                -ds * k
            }
        })
    }
}

fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

/// Least-squares fit of `saturation / (1 + e^(−k(t−t0)))`, returning
/// `(k, t0)`.
///
/// The start places `t0` at the observation closest to half saturation and
/// takes `k` from the local slope there.
pub fn fit_logistic(series: &SeriesData, saturation: f64) -> Result<FitResult> {
    if !(saturation > 0.0 && saturation.is_finite()) {
        return Err(Error::domain(format!(
            "saturation must be positive, got {saturation}"
        )));
    }
    let n = series.len();
    if n < 2 {
        return Err(Error::IllPosed(format!(
            "logistic fit needs at least 2 points, got {n}"
        )));
    }
    let ts = series.times();
    let vs = series.values();
    if let Some(v) = vs.iter().find(|v| !(**v > 0.0 && **v < saturation)) {
        return Err(Error::domain(format!(
            "logistic data must lie in (0, {saturation}), got {v}"
        )));
    }

    let mid = (0..n)
        .min_by(|&a, &b| {
            (vs[a] - saturation / 2.0)
                .abs()
                .total_cmp(&(vs[b] - saturation / 2.0).abs())
        })
        .unwrap();
    let (lo, hi) = match mid {
        0 => (0, 1),
        m if m == n - 1 => (n - 2, n - 1),
        m => (m - 1, m + 1),
    };
    let slope = (vs[hi] - vs[lo]) / (ts[hi] - ts[lo]);
    let v_mid = vs[mid];
    let mut k = slope / (v_mid * (1.0 - v_mid / saturation));
    if !(k.is_finite() && k > 0.0) {
        let (a, b) = (0, n - 1);
        k = ((logit(vs[b] / saturation) - logit(vs[a] / saturation)) / (ts[b] - ts[a])).abs();
        if !(k.is_finite() && k > 0.0) {
            k = 1.0;
        }
    }
    let start = DVector::from_vec(vec![k, ts[mid]]);
    let problem = LogisticProblem {
        t: ts,
        v: vs,
        saturation,
    };
    let out = lm::minimize(&problem, start);
    Ok(FitResult {
        params: vec![("k".into(), out.params[0]), ("t0".into(), out.params[1])],
        residual_sum_squares: out.rss,
        converged: out.converged,
        iterations: out.iterations,
        rss_history: out.history,
    })
}

/// Parameters of the gap curve held fixed during a fit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GapPins {
    pub delta0: Option<f64>,
    pub tau: Option<f64>,
    pub beta_gap: Option<f64>,
}

impl GapPins {
    fn free_count(&self) -> usize {
        [self.delta0, self.tau, self.beta_gap]
            .iter()
            .filter(|p| p.is_none())
            .count()
    }
}

/// Stretched exponential in log parameters `(ln Δ0, ln τ, ln β)`; only the
/// free ones are optimized.
struct GapProblem {
    t: Vec<f64>,
    d: Vec<f64>,
    fixed: [Option<f64>; 3],
}

impl GapProblem {
    fn full(&self, p: &DVector<f64>) -> [f64; 3] {
        let mut it = p.iter();
        let mut out = [0.0; 3];
        for (o, f) in out.iter_mut().zip(&self.fixed) {
            *o = match f {
                Some(v) => *v,
                None => *it.next().unwrap(),
            };
        }
        out
    }

    fn eval(u: f64, v: f64, w: f64, t: f64) -> (f64, f64) {
        let beta = w.exp();
        let z = if t == 0.0 {
            0.0
        } else {
            (beta * (t.ln() - v)).exp()
        };
        ((u - z).exp(), z)
    }
}

impl lm::Problem for GapProblem {
    fn residuals(&self, p: &DVector<f64>) -> DVector<f64> {
        let [u, v, w] = self.full(p);
        DVector::from_iterator(
            self.t.len(),
            self.t
                .iter()
                .zip(&self.d)
                .map(|(t, d)| Self::eval(u, v, w, *t).0 - d),
        )
    }

    fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let [u, v, w] = self.full(p);
        let beta = w.exp();
        let free: Vec<usize> = (0..3).filter(|i| self.fixed[*i].is_none()).collect();
        DMatrix::from_fn(self.t.len(), free.len(), |i, j| {
            let t = self.t[i];
            let (f, z) = Self::eval(u, v, w, t);
            match free[j] {
                0 => f,
                1 => f * z * beta,
                _ if t == 0.0 => 0.0,
                _ => -f * z * beta * (t.ln() - v),
            }
        })
    }
}

fn gap_rss(ts: &[f64], ds: &[f64], curve: &GapCurve) -> f64 {
    ts.iter()
        .zip(ds)
        .map(|(t, d)| {
            let r = crate::dynamics::gap(*t, curve) - d;
            r * r
        })
        .sum()
}

/// Solves for `(τ, β)` with `Δ0` fixed by linear regression on
/// `ln(−ln(Δ/Δ0)) = β ln t − β ln τ`, honoring any pins among `τ` and `β`.
fn gap_log_regression(
    ts: &[f64],
    ds: &[f64],
    delta0: f64,
    tau: Option<f64>,
    beta: Option<f64>,
) -> Result<(f64, f64)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, d) in ts.iter().zip(ds) {
        if *t == 0.0 {
            continue;
        }
        if *d >= delta0 {
            return Err(Error::IllPosed(format!(
                "anchor Δ({t}) = {d} is not below Δ0 = {delta0}"
            )));
        }
        xs.push(t.ln());
        ys.push((-(d / delta0).ln()).ln());
    }
    let m = xs.len() as f64;
    match (tau, beta) {
        (Some(tau), Some(beta)) => Ok((tau, beta)),
        (None, Some(beta)) => {
            if xs.is_empty() {
                return Err(Error::IllPosed(
                    "need an anchor with t > 0 to fit tau".into(),
                ));
            }
            let ln_tau = xs.iter().zip(&ys).map(|(x, y)| x - y / beta).sum::<f64>() / m;
            Ok((ln_tau.exp(), beta))
        }
        (Some(tau), None) => {
            let lt = tau.ln();
            let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - lt) * y).sum();
            let den: f64 = xs.iter().map(|x| (x - lt) * (x - lt)).sum();
            if den == 0.0 {
                return Err(Error::IllPosed("anchors cannot determine beta_gap".into()));
            }
            let beta = num / den;
            if !(beta > 0.0) {
                return Err(Error::IllPosed(format!(
                    "fitted beta_gap {beta} is not positive"
                )));
            }
            Ok((tau, beta))
        }
        (None, None) => {
            if xs.len() < 2 {
                return Err(Error::IllPosed(
                    "need two anchors with t > 0 to fit tau and beta_gap".into(),
                ));
            }
            let mx = xs.iter().sum::<f64>() / m;
            let my = ys.iter().sum::<f64>() / m;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            if sxx == 0.0 {
                return Err(Error::IllPosed("anchors share a single t".into()));
            }
            let beta = sxy / sxx;
            if !(beta > 0.0) {
                return Err(Error::IllPosed(format!(
                    "fitted beta_gap {beta} is not positive"
                )));
            }
            let intercept = my - beta * mx;
            Ok(((-intercept / beta).exp(), beta))
        }
    }
}

/// Fits `Δ(t) = Δ0 · exp(−(t/τ)^β)` to gap anchors.
///
/// With `Δ0` pinned the fit is the closed-form log-log regression. With `Δ0`
/// free a Levenberg–Marquardt refinement runs from the regression start.
/// There must be at least as many anchors as free parameters.
pub fn fit_gap_curve(anchors: &SeriesData, pins: GapPins) -> Result<FitResult> {
    if anchors.is_empty() {
        return Err(Error::IllPosed("no gap anchors".into()));
    }
    let ts = anchors.times();
    let ds = anchors.values();
    if let Some(d) = ds.iter().find(|d| !(**d > 0.0)) {
        return Err(Error::domain(format!(
            "gap anchors must be positive, got {d}"
        )));
    }
    if let Some(t) = ts.iter().find(|t| **t < 0.0) {
        return Err(Error::domain(format!("gap anchors need t >= 0, got {t}")));
    }
    if ds.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::IllPosed(
            "gap anchors must strictly decrease over time".into(),
        ));
    }
    for (name, v) in [
        ("delta0", pins.delta0),
        ("tau", pins.tau),
        ("beta_gap", pins.beta_gap),
    ] {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "pinned {name} must be positive, got {v}"
                )));
            }
        }
    }
    let free = pins.free_count();
    if anchors.len() < free {
        return Err(Error::IllPosed(format!(
            "{} anchor(s) cannot determine {free} free parameter(s); pin delta0 or add anchors",
            anchors.len()
        )));
    }

    let finish = |curve: GapCurve, out: Option<lm::Outcome>| {
        let params = vec![
            ("delta0".to_string(), curve.delta0),
            ("tau".to_string(), curve.tau),
            ("beta_gap".to_string(), curve.beta_gap),
        ];
        match out {
            None => {
                let rss = gap_rss(&ts, &ds, &curve);
                FitResult {
                    params,
                    residual_sum_squares: rss,
                    converged: true,
                    iterations: 0,
                    rss_history: vec![rss],
                }
            }
            Some(o) => FitResult {
                params,
                residual_sum_squares: gap_rss(&ts, &ds, &curve),
                converged: o.converged,
                iterations: o.iterations,
                rss_history: o.history,
            },
        }
    };

    if let Some(delta0) = pins.delta0 {
        let (tau, beta_gap) = gap_log_regression(&ts, &ds, delta0, pins.tau, pins.beta_gap)?;
        return Ok(finish(
            GapCurve {
                delta0,
                tau,
                beta_gap,
            },
            None,
        ));
    }

    // Δ0 free: start from the value at t = 0 if observed, else extrapolate
    // ln Δ linearly back from the first two anchors.
    let delta0_start = if ts[0] == 0.0 {
        ds[0]
    } else if let (Some(tau), Some(beta)) = (pins.tau, pins.beta_gap) {
        ds[0] / (-(ts[0] / tau).powf(beta)).exp()
    } else {
        let slope = (ds[1].ln() - ds[0].ln()) / (ts[1] - ts[0]);
        (ds[0].ln() - slope * ts[0]).exp()
    };
    let (tau_start, beta_start) =
        match gap_log_regression(&ts, &ds, delta0_start, pins.tau, pins.beta_gap) {
            Ok(tb) => tb,
            Err(_) => (
                pins.tau.unwrap_or_else(|| ts[ts.len() / 2].max(1.0)),
                pins.beta_gap.unwrap_or(1.0),
            ),
        };
    let fixed = [None, pins.tau.map(f64::ln), pins.beta_gap.map(f64::ln)];
    let start: Vec<f64> = [delta0_start.ln(), tau_start.ln(), beta_start.ln()]
        .iter()
        .zip(&fixed)
        .filter(|(_, f)| f.is_none())
        .map(|(v, _)| *v)
        .collect();
    let problem = GapProblem {
        t: ts.clone(),
        d: ds.clone(),
        fixed,
    };
    let out = lm::minimize(&problem, DVector::from_vec(start));
    let [u, v, w] = problem.full(&out.params);
    let curve = GapCurve {
        delta0: u.exp(),
        tau: v.exp(),
        beta_gap: w.exp(),
    };
    Ok(finish(curve, Some(out)))
}

impl FitResult {
    /// Interprets a gap-curve fit as a [`GapCurve`].
    pub fn gap_curve(&self) -> Option<GapCurve> {
        Some(GapCurve {
            delta0: self.get("delta0")?,
            tau: self.get("tau")?,
            beta_gap: self.get("beta_gap")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::gap;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn quad(c0: f64, c1: f64, c2: f64) -> impl Fn(f64) -> f64 {
        move |t| c0 + c1 * t + c2 * t * t
    }

    #[test]
    fn quadratic_recovers_printed_coefficients() {
        let s = SeriesData::sample(
            "cn",
            (0..10).map(f64::from),
            quad(56_612.0, 16_674.0, 1_088.0),
        )
        .unwrap();
        let fit = fit_quadratic(&s).unwrap();
        assert_relative_eq!(fit.get("c0").unwrap(), 56_612.0, max_relative = 1e-6);
        assert_relative_eq!(fit.get("c1").unwrap(), 16_674.0, max_relative = 1e-6);
        assert_relative_eq!(fit.get("c2").unwrap(), 1_088.0, max_relative = 1e-6);

        let s = SeriesData::sample(
            "us",
            (0..10).map(f64::from),
            quad(26_648.0, 2_416.0, -140.0),
        )
        .unwrap();
        let fit = fit_quadratic(&s).unwrap();
        assert!(fit.get("c2").unwrap() < 0.0);
        assert_relative_eq!(fit.get("c2").unwrap(), -140.0, max_relative = 1e-6);
    }

    #[test]
    fn quadratic_constant_and_errors() {
        let s = SeriesData::sample("c", (0..5).map(f64::from), |_| 7.5).unwrap();
        let fit = fit_quadratic(&s).unwrap();
        assert_relative_eq!(fit.get("c0").unwrap(), 7.5, max_relative = 1e-12);
        assert!(fit.get("c1").unwrap().abs() < 1e-10);
        assert!(fit.get("c2").unwrap().abs() < 1e-10);

        let two = SeriesData::new("two", vec![(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert!(matches!(fit_quadratic(&two), Err(Error::SingularFit(_))));
    }

    #[test]
    fn quadratic_shift_invariance() {
        let f = quad(3.0, -2.0, 0.5);
        let s = SeriesData::sample("a", (0..8).map(f64::from), &f).unwrap();
        let base = fit_quadratic(&s).unwrap();
        let shift = 2014.0;
        let shifted = SeriesData::new(
            "b",
            s.points().iter().map(|(t, v)| (t + shift, *v)).collect(),
        )
        .unwrap();
        let fit = fit_quadratic(&shifted).unwrap();
        let (c0, c1, c2) = (
            fit.get("c0").unwrap(),
            fit.get("c1").unwrap(),
            fit.get("c2").unwrap(),
        );
        // evaluate at t' = t + shift
        let un_c2 = c2;
        let un_c1 = c1 + 2.0 * c2 * shift;
        let un_c0 = c0 + c1 * shift + c2 * shift * shift;
        assert!((un_c0 - base.get("c0").unwrap()).abs() < 1e-4);
        assert!((un_c1 - base.get("c1").unwrap()).abs() < 1e-6);
        assert!((un_c2 - base.get("c2").unwrap()).abs() < 1e-9);
    }

    fn logistic(k: f64, t0: f64) -> impl Fn(f64) -> f64 {
        move |t| 1.0 / (1.0 + (-k * (t - t0)).exp())
    }

    #[test]
    fn logistic_round_trips() {
        for (k, t0) in [(0.38, 5.0), (0.30, 3.0)] {
            let s = SeriesData::sample("s", (0..=15).map(f64::from), logistic(k, t0)).unwrap();
            let fit = fit_logistic(&s, 1.0).unwrap();
            assert!(fit.converged);
            assert_relative_eq!(fit.get("k").unwrap(), k, max_relative = 1e-4);
            assert_relative_eq!(fit.get("t0").unwrap(), t0, max_relative = 1e-4);
            assert!(fit.rss_history.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn logistic_two_points_interpolate() {
        let f = logistic(0.5, 2.0);
        let s = SeriesData::new("two", vec![(1.0, f(1.0)), (4.0, f(4.0))]).unwrap();
        let fit = fit_logistic(&s, 1.0).unwrap();
        assert!(fit.converged);
        assert!((fit.get("k").unwrap() - 0.5).abs() < 1e-8);
        assert!((fit.get("t0").unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn logistic_with_saturation_and_errors() {
        let s = SeriesData::sample("s", (0..12).map(f64::from), |t| {
            80.0 * logistic(0.6, 6.0)(t)
        })
        .unwrap();
        let fit = fit_logistic(&s, 80.0).unwrap();
        assert_relative_eq!(fit.get("k").unwrap(), 0.6, max_relative = 1e-6);
        assert!(matches!(fit_logistic(&s, 50.0), Err(Error::Domain(_))));
        let one = SeriesData::new("one", vec![(0.0, 0.5)]).unwrap();
        assert!(fit_logistic(&one, 1.0).is_err());
    }

    #[test]
    fn gap_anchors_with_pinned_delta0() {
        let anchors = SeriesData::new("gap", vec![(5.0, 0.217), (6.0, 0.034)]).unwrap();
        let pins = GapPins {
            delta0: Some(0.425),
            ..Default::default()
        };
        let fit = fit_gap_curve(&anchors, pins).unwrap();
        let c = fit.gap_curve().unwrap();
        assert!((gap(5.0, &c) - 0.217).abs() < 1e-3);
        assert!((gap(6.0, &c) - 0.034).abs() < 1e-3);
        assert!(fit.residual_sum_squares < 1e-20);
    }

    #[test]
    fn gap_plain_exponential_through_one_anchor() {
        let anchors = SeriesData::new("gap", vec![(3.0, 0.1)]).unwrap();
        let pins = GapPins {
            delta0: Some(0.5),
            beta_gap: Some(1.0),
            tau: None,
        };
        let c = fit_gap_curve(&anchors, pins).unwrap().gap_curve().unwrap();
        assert_eq!(c.beta_gap, 1.0);
        assert_relative_eq!(c.tau, 3.0 / 5.0f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(gap(3.0, &c), 0.1, max_relative = 1e-12);
    }

    #[test]
    fn gap_three_parameter_round_trip() {
        let truth = GapCurve {
            delta0: 2.0,
            tau: 4.0,
            beta_gap: 3.0,
        };
        let anchors =
            SeriesData::sample("gap", (1..=7).map(f64::from), |t| gap(t, &truth)).unwrap();
        let fit = fit_gap_curve(&anchors, GapPins::default()).unwrap();
        assert!(fit.converged);
        let c = fit.gap_curve().unwrap();
        assert_relative_eq!(c.delta0, 2.0, max_relative = 1e-4);
        assert_relative_eq!(c.tau, 4.0, max_relative = 1e-4);
        assert_relative_eq!(c.beta_gap, 3.0, max_relative = 1e-4);
        assert!(fit.rss_history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn gap_errors() {
        let two = SeriesData::new("gap", vec![(5.0, 0.217), (6.0, 0.034)]).unwrap();
        assert!(matches!(
            fit_gap_curve(&two, GapPins::default()),
            Err(Error::IllPosed(_))
        ));
        let rising = SeriesData::new("gap", vec![(5.0, 0.1), (6.0, 0.2)]).unwrap();
        let pins = GapPins {
            delta0: Some(0.5),
            ..Default::default()
        };
        assert!(matches!(
            fit_gap_curve(&rising, pins),
            Err(Error::IllPosed(_))
        ));
        let neg = SeriesData::new("gap", vec![(5.0, 0.1), (6.0, -0.2)]).unwrap();
        assert!(matches!(fit_gap_curve(&neg, pins), Err(Error::Domain(_))));
    }

    #[test]
    fn series_validation() {
        assert!(SeriesData::new("x", vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(SeriesData::new("x", vec![(2.0, 0.0), (1.0, 1.0)]).is_err());
        let s = SeriesData::from_unsorted("x", vec![(2.0, 0.0), (1.0, 1.0)]).unwrap();
        assert_eq!(s.points(), &[(1.0, 1.0), (2.0, 0.0)]);
        assert!(SeriesData::from_unsorted("x", vec![(2.0, 0.0), (2.0, 1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn quadratic_exact_on_quadratics(
            c0 in -1e5f64..1e5,
            c1 in -1e4f64..1e4,
            c2 in -1e3f64..1e3,
            n in 3usize..15,
        ) {
            let s = SeriesData::sample("p", (0..n).map(|i| i as f64), quad(c0, c1, c2)).unwrap();
            let fit = fit_quadratic(&s).unwrap();
            let scale = c0.abs() + c1.abs() * n as f64 + c2.abs() * (n * n) as f64 + 1.0;
            prop_assert!(fit.residual_sum_squares.sqrt() < 1e-10 * scale);
        }

        #[test]
        fn logistic_exact_on_logistics(k in 0.1f64..1.5, t0 in 2.0f64..10.0) {
            let s = SeriesData::sample("l", (0..=12).map(f64::from), logistic(k, t0)).unwrap();
            let fit = fit_logistic(&s, 1.0).unwrap();
            prop_assert!(fit.converged);
            prop_assert!(((fit.get("k").unwrap() - k) / k).abs() < 1e-6);
            prop_assert!(((fit.get("t0").unwrap() - t0) / t0).abs() < 1e-6);
        }
    }
}
