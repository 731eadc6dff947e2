//! Pure-human baseline for both economies and the gap between them.
use aiecon::scenario::{builtin_scenarios, run};

fn main() -> aiecon::Result<()> {
    let reg = builtin_scenarios();
    let cn = run(reg.require("m1-cn")?)?;
    let us = run(reg.require("m1-us")?)?;
    let (y_cn, y_us) = (cn.records[0].y_total, us.records[0].y_total);
    println!("China  Y = {:.4e}", y_cn);
    println!("US     Y = {:.4e}", y_us);
    println!("US/CN    = {:.3}", y_us / y_cn);
    Ok(())
}
