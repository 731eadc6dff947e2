//! Building a scenario from scratch with overrides and serialising it to TOML.
use aiecon::scenario::{china_profile, run, ModelKind, Registry, ScenarioConfig};

fn main() -> aiecon::Result<()> {
    let cfg = ScenarioConfig::new("cn-high-omega", ModelKind::Combined, china_profile())
        .with("omega", 0.25)?
        .with("eta", 0.1)?
        .with("accel", 2e5)?;
    let reg = Registry::new(vec![cfg.clone()]);
    println!("{}", reg.to_toml()?);
    let res = run(&cfg)?;
    println!(
        "Y(0) = {:.4e}  Y({}) = {:.4e}",
        res.records[0].y_total,
        res.horizon(),
        res.last().y_total
    );
    Ok(())
}
