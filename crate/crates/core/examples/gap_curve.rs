//! Closing capability gap: fit a stretched exponential through anchor points.
use aiecon::dynamics::{gap, phi_a_from_gap};
use aiecon::fitting::{fit_gap_curve, GapPins, SeriesData};
use aiecon::scenario::{china_phi_a_path, GAP_ANCHORS};

fn main() -> aiecon::Result<()> {
    let path = china_phi_a_path();
    let anchors = SeriesData::new("gap", GAP_ANCHORS.to_vec())?;
    let fit = fit_gap_curve(
        &anchors,
        GapPins {
            delta0: Some(path.gap.delta0),
            ..Default::default()
        },
    )?;
    let curve = fit.gap_curve().unwrap();
    println!(
        "delta0 = {:.4}  tau = {:.4}  beta = {:.4}",
        curve.delta0, curve.tau, curve.beta_gap
    );
    for t in 0..=10 {
        let d = gap(t as f64, &curve);
        println!(
            "t={t:<3} gap={d:.4}  phi_a,follower={:.1}",
            phi_a_from_gap(d, path.leader_phi_a)
        );
    }
    Ok(())
}
