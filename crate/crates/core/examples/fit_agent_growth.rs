//! Fitting quadratic agent-count and logistic capability curves to series data.
use aiecon::dynamics::{capability, AgentPath, LogisticParams};
use aiecon::fitting::{fit_logistic, fit_quadratic, SeriesData};

fn main() -> aiecon::Result<()> {
    let series = SeriesData::sample("agents", (0..10).map(f64::from), |t| {
        56_612.0 + 16_674.0 * t + 1_088.0 * t * t
    })?;
    let q = fit_quadratic(&series)?;
    let (c0, c1, c2) = (
        q.get("c0").unwrap(),
        q.get("c1").unwrap(),
        q.get("c2").unwrap(),
    );
    println!(
        "A(t) = {c0:.1} + {c1:.1} t + {c2:.2} t^2  (rss {:.3e})",
        q.residual_sum_squares
    );
    let path = AgentPath::from_quadratic(c0, c1, c2);
    println!(
        "relative growth at t=0: {:.2}%",
        100.0 * path.relative_growth().unwrap()
    );

    let truth = LogisticParams { k: 0.38, t0: 5.0 };
    let s = SeriesData::sample("capability", (0..=15).map(f64::from), |t| {
        capability(t, &truth)
    })?;
    let fit = fit_logistic(&s, 1.0)?;
    println!(
        "logistic: k = {:.6}  t0 = {:.6}  ({} iterations)",
        fit.get("k").unwrap(),
        fit.get("t0").unwrap(),
        fit.iterations
    );
    Ok(())
}
