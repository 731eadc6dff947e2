//! Human-AI collaboration: output relative to the pure-human baseline as capability rises.
use aiecon::scenario::{builtin_scenarios, compare, run};

fn main() -> aiecon::Result<()> {
    let reg = builtin_scenarios();
    for c in ["cn", "us"] {
        let m2 = run(reg.require(&format!("m2-{c}"))?)?;
        let m1 = run(reg.require(&format!("m1-{c}"))?)?;
        let cmp = compare(&m2, &m1)?;
        println!("{c}: t   s       Y2/Y1");
        for (p, r) in cmp.points.iter().zip(&m2.records).step_by(5) {
            println!("    {:<3} {:.4}  {:.5}", p.t, r.s, p.ratio);
        }
    }
    Ok(())
}
