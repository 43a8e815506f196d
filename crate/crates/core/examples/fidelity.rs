// Average gate fidelity over Haar-random inputs, and the effect of the
// Hadamard embedding choice.

use czsim::{run_single, HadamardMode, InputSpec, NoiseParam, NoiseSet, RunConfig};

pub fn run_example() -> czsim::Result<()> {
    let cfg = |name: &str, value: f64, mode| -> czsim::Result<RunConfig> {
        let mut c = RunConfig::with_noise(NoiseSet::single(name.parse::<NoiseParam>()?, value));
        c.hadamard_mode = mode;
        c.samples = 256;
        Ok(c)
    };

    for d in [0.05, 0.1, 0.2] {
        let r = run_single(&cfg("dtheta1", d, HadamardMode::Paper)?)?;
        println!("dtheta1 = {d:<5} avg fidelity {:.6}", r.avg_fidelity.unwrap_or(f64::NAN));
    }

    let mut c = cfg("dpsi2", 0.3, HadamardMode::Paper)?;
    c.input = InputSpec::Basis(2);
    let r = run_single(&c)?;
    println!("|10> with dpsi2 = 0.3: state fidelity {:.9}", r.state_fidelity.unwrap());

    for mode in [HadamardMode::Paper, HadamardMode::Physical] {
        let r = run_single(&cfg("dtheta3", 0.2, mode)?)?;
        println!(
            "{:<8} p_anc {:.4e} avg fidelity {:.6}",
            mode.as_str(),
            r.p_anc,
            r.avg_fidelity.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
