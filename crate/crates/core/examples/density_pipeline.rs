// Lift a two-qubit state, evolve it through a noisy gate, trace out the
// phonon and read off the leaked population.

use czsim::{
    compose_gate, evolve, leakage_probabilities, lift_input, split_blocks, trace_out_phonon,
    DensityMatrix, HadamardMode, PulseNoise,
};

pub fn run_example() -> czsim::Result<()> {
    let noise = [PulseNoise::ZERO, PulseNoise::new(0.2, 0.0, 0.0), PulseNoise::ZERO];
    let gate = compose_gate(&noise, HadamardMode::Paper);

    let rho = lift_input(&DensityMatrix::<4>::maximally_mixed());
    let out = evolve(&rho, &gate)?;
    let reduced = split_blocks(&trace_out_phonon(&out));
    let (p_main, p_anc) = leakage_probabilities(&reduced)?;

    println!("p_main = {p_main:.9}");
    println!("p_anc  = {p_anc:.9e}");
    println!("sin^2(0.1)/4 = {:.9e}", (0.1f64).sin().powi(2) / 4.0);
    assert!((p_anc - (0.1f64).sin().powi(2) / 4.0).abs() < 1e-12);
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
