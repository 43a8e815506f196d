// Kraus operators by block extraction versus the closed form, including the
// alternative c3 expression.

use czsim::channel::kraus_closed_form_with;
use czsim::{compose_gate, kraus_from_gate, noisy_unitary, C3Form, HadamardMode, PulseId, PulseNoise};

pub fn run_example() -> czsim::Result<()> {
    let noise = [
        PulseNoise::new(0.12, 0.03, -0.07),
        PulseNoise::new(-0.2, 0.05, 0.1),
        PulseNoise::new(0.04, -0.09, 0.02),
    ];
    let gate = compose_gate(&noise, HadamardMode::Paper);
    let extracted = kraus_from_gate(&gate)?;
    let u = [
        noisy_unitary(PulseId::First, noise[0]),
        noisy_unitary(PulseId::Second, noise[1]),
        noisy_unitary(PulseId::Third, noise[2]),
    ];

    let derived = kraus_closed_form_with(&u, C3Form::Derived);
    let printed = kraus_closed_form_with(&u, C3Form::Printed);
    println!("completeness residual   {:.2e}", extracted.completeness_residual());
    println!("derived c3 vs extracted {:.2e}", derived.max_abs_diff(&extracted));
    println!("printed c3 vs extracted {:.2e}", printed.max_abs_diff(&extracted));
    assert!(derived.max_abs_diff(&extracted) < 1e-12);
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
