//! Back-solving efficiency parameters from observed GDP, capital and population.
use aiecon::calibration::{
    calibrate_phi_a, calibrate_phi_h, derive_growth_rate, transfer_growth,
    PhiACalibrationAssumptions,
};
use aiecon::scenario::{
    CN_2010, CN_2019, CN_AGENTS_0, CN_AGENT_GROWTH, CN_ALPHA, US_2010, US_2019, US_AGENTS_0,
    US_ALPHA,
};

fn main() -> aiecon::Result<()> {
    let assume = PhiACalibrationAssumptions::default();
    for (name, base, late, alpha) in [
        ("CN", CN_2010, CN_2019, CN_ALPHA),
        ("US", US_2010, US_2019, US_ALPHA),
    ] {
        let phi_h = calibrate_phi_h(&base, alpha)?;
        let phi_a = calibrate_phi_a(&late, phi_h, alpha, &assume)?;
        println!("{name}: phi_h = {phi_h:.2}  phi_a = {phi_a:.2}");
    }
    let r = derive_growth_rate(CN_AGENT_GROWTH, CN_AGENTS_0)?;
    println!(
        "agent growth r = {:.3}%  ->  US g = {:.4e}/yr",
        100.0 * r,
        transfer_growth(r, US_AGENTS_0)
    );
    Ok(())
}
