// One-dimensional sweep of a pulse-area error, written as CSV.

use czsim::output::write_csv;
use czsim::{run_sweep, NoiseParam, RunConfig, SweepAxis, SweepSpec};

pub fn run_example() -> czsim::Result<()> {
    let param: NoiseParam = "dtheta2".parse()?;
    let base = RunConfig { samples: 64, ..RunConfig::default() };
    let spec = SweepSpec::one(SweepAxis::new(param, -0.3, 0.3, 13), base);
    let rows = run_sweep(&spec)?;

    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).map_err(|e| czsim::Error::Input(e.to_string()))?;
    print!("{}", String::from_utf8_lossy(&buf));

    // leakage is symmetric in the error and vanishes at zero
    assert!((rows[0].p_anc - rows[12].p_anc).abs() < 1e-12);
    assert!(rows[6].p_anc < 1e-12);
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
