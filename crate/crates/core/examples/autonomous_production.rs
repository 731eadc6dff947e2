//! Autonomous AI production: human and AI shares of output over time.
use aiecon::scenario::{builtin_scenarios, run};

fn main() -> aiecon::Result<()> {
    let reg = builtin_scenarios();
    let res = run(reg.require("m4-us")?)?;
    println!("t    agents       Y_human      Y_ai         AI share");
    for r in res.records.iter().step_by(4) {
        println!(
            "{:<4} {:<12.4e} {:<12.4e} {:<12.4e} {:.2}%",
            r.t,
            r.agents,
            r.y_human,
            r.y_ai,
            100.0 * r.y_ai / r.y_total
        );
    }
    Ok(())
}
