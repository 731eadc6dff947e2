//! Faster agent growth and a closing efficiency gap, alone and combined.
use aiecon::scenario::{builtin_scenarios, compare, detect_crossover, run, run_batch};

fn main() -> aiecon::Result<()> {
    let reg = builtin_scenarios();
    let names = ["m4-cn", "m4-cn-accel-g", "m4-cn-phia-t", "m4-cn-joint"];
    let cfgs: Vec<_> = names
        .iter()
        .map(|n| reg.require(n).cloned())
        .collect::<aiecon::Result<_>>()?;
    let results = run_batch(&cfgs)
        .into_iter()
        .collect::<aiecon::Result<Vec<_>>>()?;
    for r in &results[1..] {
        let cmp = compare(r, &results[0])?;
        println!(
            "{:<14} +{:.2}% over m4-cn at t=20",
            r.scenario,
            cmp.points.last().unwrap().enhancement_pct
        );
    }
    let us = run(&reg.require("m4-us")?.clone().with("omega", 0.15)?)?;
    match detect_crossover(&results[3], &us)? {
        Some(t) => println!("m4-cn-joint overtakes m4-us at t={t}"),
        None => println!("m4-cn-joint stays below m4-us through t={}", us.horizon()),
    }
    Ok(())
}
