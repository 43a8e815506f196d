// Single-pulse 2×2 unitaries, ideal and perturbed.

use czsim::{noisy_unitary, PulseId, PulseNoise, PulseParams};

pub fn run_example() -> czsim::Result<()> {
    for id in PulseId::ALL {
        let p = PulseParams::ideal(id);
        let u = p.unitary();
        println!("{id}: theta={:.4} psi={:.4} phi={:.4}", p.theta, p.psi, p.phi);
        println!("  u11={:.3} u12={:.3}", u.u11, u.u12);
        println!("  u21={:.3} u22={:.3}", u.u21, u.u22);
    }

    let noise = PulseNoise::new(0.1, -0.05, 0.02);
    let u = noisy_unitary(PulseId::Second, noise);
    println!(
        "perturbed pulse 2: |det| = {:.15}, unitarity residual {:.1e}",
        u.determinant().norm(),
        u.unitarity_residual()
    );
    assert!(u.unitarity_residual() < 1e-12);
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
