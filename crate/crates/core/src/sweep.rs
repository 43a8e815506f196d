//! Batch evaluation: single runs, one- and two-axis grids over the nine noise
//! parameters, and Monte Carlo over Gaussian noise.
//!
//! Grid points and samples are evaluated independently, in parallel when
//! asked to, and always returned in index order. Results depend only on the
//! spec (seed included).

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{
    evolve, kraus_closed_form, kraus_from_gate, lift_input, split_blocks, trace_out_phonon,
    DensityMatrix,
};
use crate::error::{Error, Result};
use crate::levels::{compose_gate, HadamardMode};
use crate::metrics::{
    conditional_fidelity, leakage_probabilities, state_fidelity, ChannelReport, HaarEnsemble,
};
use crate::pulse::{noisy_unitary, PulseId, PulseNoise};
use crate::C64;

/// Which of a pulse's three parameters a noise value perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Theta,
    Psi,
    Phi,
}

impl Component {
    fn name(self) -> &'static str {
        match self {
            Component::Theta => "theta",
            Component::Psi => "psi",
            Component::Phi => "phi",
        }
    }
}

/// One of the nine noise parameters, e.g. `dtheta2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoiseParam {
    pub pulse: PulseId,
    pub component: Component,
}

impl NoiseParam {
    /// All nine parameters in table order: per pulse θ, ψ, φ.
    pub const ALL: [NoiseParam; 9] = {
        use Component::*;
        use PulseId::*;
        const fn p(pulse: PulseId, component: Component) -> NoiseParam {
            NoiseParam { pulse, component }
        }
        [
            p(First, Theta),
            p(First, Psi),
            p(First, Phi),
            p(Second, Theta),
            p(Second, Psi),
            p(Second, Phi),
            p(Third, Theta),
            p(Third, Psi),
            p(Third, Phi),
        ]
    };

    pub const fn new(pulse: PulseId, component: Component) -> Self {
        NoiseParam { pulse, component }
    }

    /// Flag-style name, `dtheta1` … `dphi3`.
    pub fn name(&self) -> String {
        format!("d{}{}", self.component.name(), self.pulse.number())
    }

    /// Column-style name, `d_theta1` … `d_phi3`.
    pub fn column(&self) -> String {
        format!("d_{}{}", self.component.name(), self.pulse.number())
    }

    pub fn valid_names() -> String {
        NoiseParam::ALL
            .iter()
            .map(NoiseParam::name)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for NoiseParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for NoiseParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NoiseParam::ALL
            .into_iter()
            .find(|p| p.name() == s || p.column() == s)
            .ok_or_else(|| {
                Error::invalid_argument(format!(
                    "unknown noise parameter `{s}`; valid names: {}",
                    NoiseParam::valid_names()
                ))
            })
    }
}

/// Noise on all three pulses.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseSet(pub [PulseNoise; 3]);

impl NoiseSet {
    pub const ZERO: NoiseSet = NoiseSet([PulseNoise::ZERO; 3]);

    /// Build from the nine values in table order.
    pub fn from_values(v: [f64; 9]) -> Self {
        NoiseSet([
            PulseNoise::new(v[0], v[1], v[2]),
            PulseNoise::new(v[3], v[4], v[5]),
            PulseNoise::new(v[6], v[7], v[8]),
        ])
    }

    /// A single parameter set, all others zero.
    pub fn single(param: NoiseParam, value: f64) -> Self {
        let mut n = NoiseSet::ZERO;
        n.set(param, value);
        n
    }

    pub fn values(&self) -> [f64; 9] {
        NoiseParam::ALL.map(|p| self.get(p))
    }

    pub fn get(&self, param: NoiseParam) -> f64 {
        let n = &self.0[param.pulse.index()];
        match param.component {
            Component::Theta => n.d_theta,
            Component::Psi => n.d_psi,
            Component::Phi => n.d_phi,
        }
    }

    pub fn set(&mut self, param: NoiseParam, value: f64) {
        let n = &mut self.0[param.pulse.index()];
        match param.component {
            Component::Theta => n.d_theta = value,
            Component::Psi => n.d_psi = value,
            Component::Phi => n.d_phi = value,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in NoiseParam::ALL {
            if !self.get(p).is_finite() {
                return Err(Error::InvalidParameter {
                    name: p.name(),
                    reason: format!("must be finite, got {}", self.get(p)),
                });
            }
        }
        Ok(())
    }
}

/// The input state of a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[allow(clippy::large_enum_variant)]
pub enum InputSpec {
    /// `I/4`.
    #[default]
    Mixed,
    /// Computational basis state `|c t⟩`, index 0–3.
    Basis(usize),
    /// An explicit 4×4 density matrix, validated on resolution.
    Matrix(Matrix4<C64>),
}

impl InputSpec {
    pub fn resolve(&self) -> Result<DensityMatrix<4>> {
        match self {
            InputSpec::Mixed => Ok(DensityMatrix::maximally_mixed()),
            InputSpec::Basis(k) => DensityMatrix::basis(*k).map_err(|e| e.for_parameter("input")),
            InputSpec::Matrix(m) => DensityMatrix::new(*m).map_err(|e| e.for_parameter("input")),
        }
    }

    /// The state vector, for inputs known to be pure.
    pub fn pure_state(&self) -> Option<Vector4<C64>> {
        match self {
            InputSpec::Basis(k) if *k < 4 => {
                let mut v = Vector4::zeros();
                v[*k] = C64::new(1.0, 0.0);
                Some(v)
            }
            _ => None,
        }
    }
}

/// Everything needed for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub noise: NoiseSet,
    pub hadamard_mode: HadamardMode,
    pub input: InputSpec,
    /// Haar samples for the average fidelity.
    pub samples: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            noise: NoiseSet::ZERO,
            hadamard_mode: HadamardMode::Paper,
            input: InputSpec::Mixed,
            samples: 512,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn with_noise(noise: NoiseSet) -> Self {
        RunConfig {
            noise,
            ..RunConfig::default()
        }
    }
}

/// Evaluation strategy for batches. Both give identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Serial => (0..n).map(f).collect(),
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

struct Prepared {
    rho: DensityMatrix<4>,
    pure: Option<Vector4<C64>>,
    ensemble: HaarEnsemble,
}

impl Prepared {
    fn new(config: &RunConfig) -> Result<Self> {
        Ok(Prepared {
            rho: config.input.resolve()?,
            pure: config.input.pure_state(),
            ensemble: HaarEnsemble::new(config.samples, config.seed)
                .map_err(|e| e.for_parameter("samples"))?,
        })
    }

    fn evaluate(&self, noise: &NoiseSet, config: &RunConfig) -> Result<ChannelReport> {
        noise.validate()?;
        let noises = noise.0;
        let gate = compose_gate(&noises, config.hadamard_mode);
        let state = split_blocks(&trace_out_phonon(&evolve(&lift_input(&self.rho), &gate)?));
        let (p_main, p_anc) = leakage_probabilities(&state)?;

        let extracted = kraus_from_gate(&gate)?;
        let u = PulseId::ALL.map(|p| noisy_unitary(p, noises[p.index()]));
        let closed = kraus_closed_form(&u[0], &u[1], &u[2]);

        let (state_f, cond_f) = match &self.pure {
            Some(psi) => (
                Some(state_fidelity(&state, psi)?),
                conditional_fidelity(&state, psi)?,
            ),
            None => (None, None),
        };

        Ok(ChannelReport {
            noise: noises,
            hadamard_mode: config.hadamard_mode,
            p_main,
            p_anc,
            state_fidelity: state_f,
            conditional_fidelity: cond_f,
            avg_fidelity: Some(self.ensemble.average_fidelity(&extracted)),
            kraus_cross_residual: extracted.max_abs_diff(&closed),
            seed: config.seed,
            samples: config.samples,
        })
    }
}

/// Full pipeline for one configuration.
///
/// `kraus_cross_residual` compares the operators read off the gate with the
/// closed form. The closed form describes the `paper` Hadamard placement, so
/// under noise the residual is only small in that mode.
pub fn run_single(config: &RunConfig) -> Result<ChannelReport> {
    Prepared::new(config)?.evaluate(&config.noise, config)
}

/// One grid axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub param: NoiseParam,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn new(param: NoiseParam, start: f64, end: f64, steps: usize) -> Self {
        SweepAxis {
            param,
            start,
            end,
            steps,
        }
    }

    /// `start + k·(end − start)/(steps − 1)`, endpoints included.
    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            self.end
        } else {
            self.start + k as f64 * (self.end - self.start) / (self.steps - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.point(k)).collect()
    }

    fn validate(&self) -> Result<()> {
        let name = self.param.name();
        if self.steps < 2 {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("step count must be at least 2, got {}", self.steps),
            });
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                reason: "range bounds must be finite".into(),
            });
        }
        if self.start > self.end {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("range start {} exceeds end {}", self.start, self.end),
            });
        }
        Ok(())
    }
}

/// A one- or two-axis grid; parameters not on an axis keep their values
/// from `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub base: RunConfig,
}

impl SweepSpec {
    pub fn one(axis: SweepAxis, base: RunConfig) -> Self {
        SweepSpec {
            axes: vec![axis],
            base,
        }
    }

    pub fn two(outer: SweepAxis, inner: SweepAxis, base: RunConfig) -> Self {
        SweepSpec {
            axes: vec![outer, inner],
            base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::invalid_argument(format!(
                "a sweep takes one or two axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::invalid_argument(format!(
                "sweep axes must be distinct, both are {}",
                self.axes[0].param
            )));
        }
        self.axes.iter().try_for_each(SweepAxis::validate)?;
        self.base.noise.validate()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Noise at flat index `k`; the first axis varies slowest.
    pub fn noise_at(&self, mut k: usize) -> NoiseSet {
        let mut noise = self.base.noise;
        for axis in self.axes.iter().rev() {
            noise.set(axis.param, axis.point(k % axis.steps));
            k /= axis.steps;
        }
        noise
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ChannelReport>> {
    run_sweep_with(spec, Execution::Parallel)
}

pub fn run_sweep_with(spec: &SweepSpec, exec: Execution) -> Result<Vec<ChannelReport>> {
    spec.validate()?;
    let prepared = Prepared::new(&spec.base)?;
    map_indexed(spec.len(), exec, |k| {
        prepared.evaluate(&spec.noise_at(k), &spec.base)
    })
}

/// Gaussian noise ensemble. Each sample perturbs all nine parameters
/// independently with mean zero (plus the fixed offsets in `base.noise`).
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSpec {
    /// Standard deviations per pulse, laid out like the noise itself.
    pub sigma: NoiseSet,
    pub samples: usize,
    pub seed: u64,
    pub base: RunConfig,
    /// Keep every per-sample report in the result.
    pub keep_samples: bool,
}

impl MonteCarloSpec {
    /// The same σ for a parameter class on all three pulses.
    pub fn uniform(sigma_theta: f64, sigma_psi: f64, sigma_phi: f64, samples: usize, seed: u64) -> Self {
        MonteCarloSpec {
            sigma: NoiseSet([PulseNoise::new(sigma_theta, sigma_psi, sigma_phi); 3]),
            samples,
            seed,
            base: RunConfig {
                seed,
                ..RunConfig::default()
            },
            keep_samples: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::invalid_argument("Monte Carlo sample count must be at least 1"));
        }
        for p in NoiseParam::ALL {
            let s = self.sigma.get(p);
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: format!("sigma for {p}"),
                    reason: format!("standard deviation must be finite and non-negative, got {s}"),
                });
            }
        }
        self.base.noise.validate()
    }

    /// Noise for every sample, drawn in sample order and, within a sample,
    /// in table order from `ChaCha8Rng::seed_from_u64(seed)` on stream 1.
    pub fn draw_noise(&self) -> Vec<NoiseSet> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(1);
        let sigma = self.sigma.values();
        let base = self.base.noise.values();
        (0..self.samples)
            .map(|_| {
                let mut v = [0.0; 9];
                for i in 0..9 {
                    let z: f64 = rng.sample(StandardNormal);
                    v[i] = if sigma[i] == 0.0 { base[i] } else { base[i] + sigma[i] * z };
                }
                NoiseSet::from_values(v)
            })
            .collect()
    }
}

/// Order statistics of one output column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
}

impl Summary {
    /// Percentiles interpolate linearly between closest ranks.
    pub fn of(values: &[f64]) -> Self {
        assert!(!values.is_empty());
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let pct = |q: f64| {
            let h = q * (sorted.len() - 1) as f64;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        };
        Summary {
            mean,
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            p05: pct(0.05),
            p50: pct(0.50),
            p95: pct(0.95),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloResult {
    pub samples: usize,
    pub seed: u64,
    pub p_anc: Summary,
    pub avg_fidelity: Summary,
    pub per_sample: Option<Vec<ChannelReport>>,
}

pub fn run_montecarlo(spec: &MonteCarloSpec) -> Result<MonteCarloResult> {
    run_montecarlo_with(spec, Execution::Parallel)
}

pub fn run_montecarlo_with(spec: &MonteCarloSpec, exec: Execution) -> Result<MonteCarloResult> {
    spec.validate()?;
    let prepared = Prepared::new(&spec.base)?;
    let draws = spec.draw_noise();
    let reports = map_indexed(draws.len(), exec, |k| prepared.evaluate(&draws[k], &spec.base))?;
    let p_anc: Vec<f64> = reports.iter().map(|r| r.p_anc).collect();
    let fid: Vec<f64> = reports.iter().map(|r| r.avg_fidelity.unwrap_or(f64::NAN)).collect();
    Ok(MonteCarloResult {
        samples: spec.samples,
        seed: spec.seed,
        p_anc: Summary::of(&p_anc),
        avg_fidelity: Summary::of(&fid),
        per_sample: spec.keep_samples.then_some(reports),
    })
}
