// Checks that the noiseless pulse sequence realises a CNOT.

use czsim::checks::ideal_checks;

pub fn run_example() -> czsim::Result<()> {
    let checks = ideal_checks();
    for c in &checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        println!("{tag} {:<40} residual {:.2e} (tol {:.0e})", c.name, c.residual, c.tolerance);
    }
    assert!(checks.iter().all(|c| c.passed()));
    Ok(())
}

fn main() -> czsim::Result<()> {
    run_example()
}
