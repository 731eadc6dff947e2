//! Agent network effects: enhancement over the same run with eta = 0.
use aiecon::scenario::{builtin_scenarios, compare, run};

fn main() -> aiecon::Result<()> {
    let reg = builtin_scenarios();
    for name in ["m3-cn", "m3-us", "m5-cn", "m5-us"] {
        let cfg = reg.require(name)?;
        let twin = cfg
            .mechanism_disabled_twin()
            .expect("network models have a twin");
        let cmp = compare(&run(cfg)?, &run(&twin)?)?;
        let first = cmp.points.first().unwrap().enhancement_pct;
        let last = cmp.points.last().unwrap().enhancement_pct;
        println!("{name:<6} enhancement {first:.3}% -> {last:.3}%");
    }
    Ok(())
}
