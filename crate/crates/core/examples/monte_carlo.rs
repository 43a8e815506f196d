// Gaussian noise on every pulse area, summarised over an ensemble.

use czsim::{run_montecarlo, MonteCarloSpec};

pub fn run_example() -> czsim::Result<()> {
    let mut spec = MonteCarloSpec::uniform(0.05, 0.02, 0.02, 400, 11);
    spec.base.samples = 32;
    let r = run_montecarlo(&spec)?;

    println!("{:>8} {:>12} {:>12}", "", "p_anc", "avg_fid");
    let rows = [
        ("mean", r.p_anc.mean, r.avg_fidelity.mean),
        ("min", r.p_anc.min, r.avg_fidelity.min),
        ("p05", r.p_anc.p05, r.avg_fidelity.p05),
        ("p50", r.p_anc.p50, r.avg_fidelity.p50),
        ("p95", r.p_anc.p95, r.avg_fidelity.p95),
        ("max", r.p_anc.max, r.avg_fidelity.max),
    ];
    for (name, p, f) in rows {
        println!("{name:>8} {p:>12.4e} {f:>12.6}");
    }
    // roughly sigma^2/16 from the second pulse
    println!("sigma^2/16 = {:.4e}", 0.05f64.powi(2) / 16.0);
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
