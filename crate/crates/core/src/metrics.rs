//! Leakage probabilities and fidelities of the reduced channel.
//!
//! Fidelities compare the unnormalised main block with the ideal CNOT
//! output, so population lost to the ancillae counts against the gate.
//! [`conditional_fidelity`] renormalises by the main-block trace instead.
//!
//! Haar-random inputs are drawn from `ChaCha8Rng::seed_from_u64(seed)`:
//! eight standard normals per state (samples from `rand_distr::StandardNormal`,
//! taken as re/im pairs of the four amplitudes), normalised to unit length.
//! That generator sequence is frozen; the same seed gives the same states on
//! every platform.

use nalgebra::Vector4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::{ideal_output, KrausSet, ReducedState};
use crate::error::{Error, Property, Result};
use crate::levels::HadamardMode;
use crate::pulse::PulseNoise;
use crate::{C64, ALGEBRAIC_TOL};

/// Sanity window around `[0, 1]` before probabilities are clamped.
pub const PROBABILITY_TOL: f64 = 1e-12;

fn checked_probability(p: f64) -> Result<f64> {
    if !(-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(&p) || p.is_nan() {
        let excess = if p < 0.0 { -p } else { p - 1.0 };
        return Err(Error::validation(
            Property::ProbabilityBounds,
            excess,
            PROBABILITY_TOL,
        ));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `(p_main, p_anc)`: traces of the main and ancilla blocks, clamped to
/// `[0, 1]` after checking they sum to one within `1e-12`.
pub fn leakage_probabilities(state: &ReducedState) -> Result<(f64, f64)> {
    let main = state.main_trace();
    let anc = state.ancilla_trace();
    let sum_err = (main + anc - 1.0).abs();
    if sum_err > PROBABILITY_TOL {
        return Err(Error::validation(Property::Trace, sum_err, PROBABILITY_TOL));
    }
    Ok((checked_probability(main)?, checked_probability(anc)?))
}

fn check_normalized(psi: &Vector4<C64>) -> Result<()> {
    let err = (psi.norm() - 1.0).abs();
    if err > ALGEBRAIC_TOL {
        return Err(Error::validation(Property::Normalization, err, ALGEBRAIC_TOL));
    }
    Ok(())
}

/// `⟨φ|ρ_main|φ⟩` with `|φ⟩ = CNOT|input⟩`.
pub fn state_fidelity(state: &ReducedState, input: &Vector4<C64>) -> Result<f64> {
    check_normalized(input)?;
    let phi = ideal_output(input);
    let f = (phi.adjoint() * state.rho1 * phi)[(0, 0)].re;
    Ok(f.clamp(0.0, 1.0))
}

/// Overlap with the main block renormalised to unit trace. Undefined (None)
/// when nothing is left on the computational levels.
pub fn conditional_fidelity(state: &ReducedState, input: &Vector4<C64>) -> Result<Option<f64>> {
    let f = state_fidelity(state, input)?;
    let main = state.main_trace();
    Ok((main > 0.0).then(|| (f / main).clamp(0.0, 1.0)))
}

/// Output fidelity for a pure input, evaluated directly on the Kraus
/// operators: `|⟨φ|A1|ψ⟩|² + |⟨φ|C1|ψ⟩|²`. `A3` and `C3` map into the
/// ancillae and do not contribute.
fn pure_fidelity(kraus: &KrausSet, psi: &Vector4<C64>) -> f64 {
    let phi = ideal_output(psi);
    let a = phi.dotc(&(kraus.a1 * psi));
    let c = phi.dotc(&(kraus.c1 * psi));
    (a.norm_sqr() + c.norm_sqr()).clamp(0.0, 1.0)
}

/// A fixed set of Haar-random pure inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarEnsemble {
    states: Vec<Vector4<C64>>,
    seed: u64,
}

impl HaarEnsemble {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::invalid_argument(
                "fidelity sample count must be at least 1",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states = (0..samples).map(|_| haar_state(&mut rng)).collect();
        Ok(HaarEnsemble { states, seed })
    }

    pub fn states(&self) -> &[Vector4<C64>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Mean output fidelity over the ensemble, summed in draw order.
    pub fn average_fidelity(&self, kraus: &KrausSet) -> f64 {
        let total: f64 = self.states.iter().map(|psi| pure_fidelity(kraus, psi)).sum();
        total / self.states.len() as f64
    }
}

fn haar_state(rng: &mut impl Rng) -> Vector4<C64> {
    let mut draw = || -> f64 { rng.sample(StandardNormal) };
    let v = Vector4::from_fn(|_, _| {
        let re = draw();
        let im = draw();
        C64::new(re, im)
    });
    v.unscale(v.norm())
}

/// Mean of [`state_fidelity`] over `samples` Haar-random pure inputs.
pub fn average_fidelity(kraus: &KrausSet, samples: usize, seed: u64) -> Result<f64> {
    Ok(HaarEnsemble::new(samples, seed)?.average_fidelity(kraus))
}

/// Outcome of one simulated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub noise: [PulseNoise; 3],
    pub hadamard_mode: HadamardMode,
    pub p_main: f64,
    pub p_anc: f64,
    /// Only for pure inputs.
    pub state_fidelity: Option<f64>,
    /// Renormalised variant of `state_fidelity`.
    pub conditional_fidelity: Option<f64>,
    pub avg_fidelity: Option<f64>,
    /// Largest entry-wise gap between the block-extracted and closed-form
    /// Kraus operators.
    pub kraus_cross_residual: f64,
    pub seed: u64,
    pub samples: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, kraus_from_gate, lift_input, evolve, split_blocks, trace_out_phonon, DensityMatrix};
    use crate::levels::compose_gate;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn basis(k: usize) -> Vector4<C64> {
        let mut v = Vector4::zeros();
        v[k] = C64::new(1.0, 0.0);
        v
    }

    fn kraus_for(noises: [PulseNoise; 3]) -> KrausSet {
        kraus_from_gate(&compose_gate(&noises, HadamardMode::Paper)).unwrap()
    }

    fn pipeline(noises: [PulseNoise; 3], rho: &DensityMatrix<4>) -> ReducedState {
        let gate = compose_gate(&noises, HadamardMode::Paper);
        split_blocks(&trace_out_phonon(&evolve(&lift_input(rho), &gate).unwrap()))
    }

    #[test]
    fn ideal_has_no_leakage() {
        for k in 0..4 {
            let s = apply_channel(&KrausSet::ideal(), &DensityMatrix::basis(k).unwrap());
            assert_eq!(leakage_probabilities(&s).unwrap(), (1.0, 0.0));
        }
    }

    #[test]
    fn second_pulse_area_leakage() {
        let noises = [PulseNoise::ZERO, PulseNoise::new(0.2, 0.0, 0.0), PulseNoise::ZERO];
        let s = pipeline(noises, &DensityMatrix::maximally_mixed());
        let (main, anc) = leakage_probabilities(&s).unwrap();
        let expect = (0.1f64).sin().powi(2) / 4.0;
        assert!((anc - expect).abs() < 1e-12);
        assert!((anc - 2.49168e-3).abs() < 1e-8);
        assert!((main + anc - 1.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_window_probability_is_rejected() {
        let mut s = apply_channel(&KrausSet::ideal(), &DensityMatrix::basis(0).unwrap());
        s.rho1[(0, 0)] = C64::new(0.5, 0.0);
        assert!(leakage_probabilities(&s).is_err());
        s.rho1[(0, 0)] = C64::new(1.1, 0.0);
        s.rho4[(0, 0)] = C64::new(-0.1, 0.0);
        assert!(matches!(
            leakage_probabilities(&s),
            Err(Error::Validation { property: Property::ProbabilityBounds, .. })
        ));
    }

    #[test]
    fn fidelity_examples() {
        let ideal = KrausSet::ideal();
        let psi = basis(2);
        let s = apply_channel(&ideal, &DensityMatrix::from_pure(&psi).unwrap());
        assert_eq!(state_fidelity(&s, &psi).unwrap(), 1.0);

        let mut sup = basis(0) + basis(2);
        sup.unscale_mut(2f64.sqrt());
        let s = apply_channel(&ideal, &DensityMatrix::from_pure(&sup).unwrap());
        assert!((state_fidelity(&s, &sup).unwrap() - 1.0).abs() < 1e-15);

        let noises = [PulseNoise::ZERO, PulseNoise::new(0.0, 0.3, 0.0), PulseNoise::ZERO];
        let s = pipeline(noises, &DensityMatrix::from_pure(&psi).unwrap());
        let f = state_fidelity(&s, &psi).unwrap();
        assert!((f - (0.15f64).cos().powi(2)).abs() < 1e-12);
        let cond = conditional_fidelity(&s, &psi).unwrap().unwrap();
        assert!((cond - f).abs() < 1e-12);
    }

    #[test]
    fn fidelity_rejects_unnormalized_input() {
        let s = apply_channel(&KrausSet::ideal(), &DensityMatrix::maximally_mixed());
        let v = basis(0) * C64::new(FRAC_1_SQRT_2, 0.0);
        assert!(state_fidelity(&s, &v).is_err());
    }

    #[test]
    fn average_fidelity_ideal_and_deterministic() {
        let f = average_fidelity(&KrausSet::ideal(), 64, 9).unwrap();
        assert!((f - 1.0).abs() <= 1e-12);

        let k = kraus_for([PulseNoise::new(0.1, 0.0, 0.2), PulseNoise::new(0.1, 0.1, 0.0), PulseNoise::ZERO]);
        let a = average_fidelity(&k, 128, 3).unwrap();
        let b = average_fidelity(&k, 128, 3).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a < 1.0);
        assert!(average_fidelity(&k, 0, 3).is_err());
    }

    #[test]
    fn fast_fidelity_matches_state_route() {
        let k = kraus_for([PulseNoise::new(0.2, 0.1, -0.3), PulseNoise::new(0.3, 0.2, 0.1), PulseNoise::new(-0.1, 0.0, 0.4)]);
        let ens = HaarEnsemble::new(32, 1).unwrap();
        for psi in ens.states() {
            assert!((psi.norm() - 1.0).abs() < 1e-14);
            let s = apply_channel(&k, &DensityMatrix::from_pure(psi).unwrap());
            assert!((pure_fidelity(&k, psi) - state_fidelity(&s, psi).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn infidelity_scales_quadratically() {
        let make = |slot: usize, d: f64| {
            let mut v = [0.0; 9];
            v[slot] = d;
            [
                PulseNoise::new(v[0], v[1], v[2]),
                PulseNoise::new(v[3], v[4], v[5]),
                PulseNoise::new(v[6], v[7], v[8]),
            ]
        };
        // θ1, φ1, θ2, ψ2, θ3, φ3
        for slot in [0, 2, 3, 4, 6, 8] {
            let inf = |d| 1.0 - average_fidelity(&kraus_for(make(slot, d)), 256, 0).unwrap();
            let ratio = inf(0.02) / inf(0.01);
            assert!((3.5..=4.5).contains(&ratio), "slot {slot}: {ratio}");
        }
    }
}
