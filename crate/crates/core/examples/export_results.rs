//! Writing CSV, JSON and plot data for a run, then reading them back.
use aiecon::io::{emit_result, read_result_csv, read_result_json, EmitFormat, RunManifest};
use aiecon::scenario::{builtin_scenarios, run};

fn main() -> aiecon::Result<()> {
    let out = std::env::temp_dir().join("aiecon-export-example");
    let res = run(builtin_scenarios().require("m5-cn")?)?;
    let manifest = RunManifest::new(
        "m5-cn",
        &out,
        vec![EmitFormat::Csv, EmitFormat::Json, EmitFormat::Plotdata],
    )?;
    for p in emit_result(&res, &manifest)? {
        println!("wrote {}", p.display());
    }
    let rows = read_result_csv(&out.join("m5-cn.csv"))?;
    let doc = read_result_json(&out.join("m5-cn.json"))?;
    assert_eq!(doc.result, res);
    println!(
        "{} rows, final Y = {:.6e} ({})",
        rows.len(),
        rows.last().unwrap()[5],
        doc.currency
    );
    Ok(())
}
