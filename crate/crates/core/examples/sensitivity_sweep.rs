//! Sweeping one parameter and reading off final output and mean enhancement.
use aiecon::scenario::{builtin_scenarios, sensitivity_sweep};

fn main() -> aiecon::Result<()> {
    let reg = builtin_scenarios();
    let grid: Vec<f64> = (0..=5).map(|i| 0.05 + 0.05 * i as f64).collect();
    let rows = sensitivity_sweep(reg.require("m4-cn")?, "omega", &grid)?;
    println!("omega  Y(20)        mean enhancement");
    for r in rows {
        println!(
            "{:<6.2} {:<12.4e} {:+.3}%",
            r.value, r.final_y_total, r.mean_enhancement_pct
        );
    }
    Ok(())
}
