//! Error model for the Cirac-Zoller trapped-ion CNOT gate.
//!
//! The gate is built from five steps: a Hadamard on the target qubit, three
//! laser pulses implementing a controlled-phase gate through the shared
//! phonon mode and an ancillary level of the target ion, and a second
//! Hadamard. Each pulse can carry errors in its three laser parameters. The
//! crate computes the resulting twelve-level unitary, the channel it induces
//! on the two qubits once the phonon is traced out, the Kraus operators of
//! that channel (by block extraction and in closed form), the population
//! leaked into the ancillary levels, and fidelity figures over parameter
//! sweeps and Gaussian noise ensembles.
//!
//! Module map:
//!
//! * [`pulse`]: single-pulse parameters and 2×2 unitaries.
//! * [`levels`]: the ordered level space, embeddings, gate composition.
//! * [`channel`]: density matrices, partial trace, Kraus operators.
//! * [`metrics`]: leakage probabilities and fidelities.
//! * [`sweep`]: single runs, grids and Monte Carlo ensembles.
//! * [`output`]: CSV and JSON emission.
//! * [`cli`]: the `czsim` command-line front end.

pub mod channel;
pub mod checks;
pub mod cli;
pub mod error;
pub mod levels;
pub mod metrics;
pub mod output;
pub mod pulse;
pub mod sweep;

pub use channel::{
    apply_channel, evolve, kraus_closed_form, kraus_from_gate, lift_input, split_blocks,
    trace_out_phonon, BlockDecomposition, C3Form, DensityMatrix, KrausSet, ReducedState,
};
pub use error::{Error, Property, Result};
pub use levels::{compose_gate, embed_hadamard, embed_pulse, level_index, GateMatrix, HadamardMode};
pub use metrics::{average_fidelity, leakage_probabilities, state_fidelity, ChannelReport, HaarEnsemble};
pub use pulse::{
    apply_noise, build_unitary, ideal_pulse_params, noisy_unitary, PulseId, PulseNoise,
    PulseParams, TwoLevelUnitary,
};
pub use sweep::{
    run_montecarlo, run_single, run_sweep, Execution, InputSpec, MonteCarloSpec, NoiseParam,
    NoiseSet, RunConfig, SweepAxis, SweepSpec,
};

use nalgebra::{Complex, Matrix4, SMatrix};

pub type C64 = Complex<f64>;
pub type Matrix12 = SMatrix<C64, 12, 12>;
pub type Matrix6 = SMatrix<C64, 6, 6>;

/// Tolerance for algebraic identities on products of a few unitaries.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for accepting a matrix as unitary.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Tolerance for sanitising density-matrix inputs.
pub const DENSITY_TOL: f64 = 1e-10;

/// Largest entry modulus of a complex matrix.
pub fn max_abs<const R: usize, const C: usize>(m: &SMatrix<C64, R, C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The CNOT on `|c t⟩` with the control as the most significant qubit.
pub fn cnot4() -> Matrix4<C64> {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        o, z, z, z,
        z, o, z, z,
        z, z, z, o,
        z, z, o, z,
    );
    m
}
