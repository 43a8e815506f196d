// Two-parameter grid over the first and second pulse areas.

use czsim::{run_sweep, NoiseParam, RunConfig, SweepAxis, SweepSpec};

pub fn run_example() -> czsim::Result<()> {
    let x: NoiseParam = "dtheta1".parse()?;
    let y: NoiseParam = "dtheta2".parse()?;
    let base = RunConfig { samples: 32, ..RunConfig::default() };
    let spec = SweepSpec::two(SweepAxis::new(x, -0.4, 0.4, 5), SweepAxis::new(y, -0.4, 0.4, 5), base);
    let rows = run_sweep(&spec)?;

    println!("p_anc, rows dtheta1, columns dtheta2");
    for line in rows.chunks(5) {
        let cells: Vec<String> = line.iter().map(|r| format!("{:.3e}", r.p_anc)).collect();
        println!("{}", cells.join("  "));
    }
    assert_eq!(rows.len(), 25);
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
