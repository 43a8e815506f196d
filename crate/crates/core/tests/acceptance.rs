//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::process::{Command, ExitCode};

use nalgebra::{Matrix4, SVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use czsim::channel::{kraus_closed_form_with, C3Form};
use czsim::levels::compose_pulses;
use czsim::sweep::{run_sweep_with, Execution};
use czsim::{
    compose_gate, embed_pulse, evolve, kraus_closed_form, kraus_from_gate, lift_input, max_abs,
    noisy_unitary, run_single, split_blocks, trace_out_phonon, DensityMatrix, HadamardMode,
    NoiseParam, NoiseSet, PulseId, PulseNoise, RunConfig, SweepAxis, SweepSpec, TwoLevelUnitary,
    C64,
};

const DRAWS: usize = 1000;
const DRAW_SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cnot() -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for (r, cidx) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(r, cidx)] = c(1.0, 0.0);
    }
    m
}

fn unitaries(n: &[PulseNoise; 3]) -> [TwoLevelUnitary; 3] {
    PulseId::ALL.map(|p| noisy_unitary(p, n[p.index()]))
}

/// Seeded noise triples with every component uniform in [-0.5, 0.5].
fn draws() -> Vec<[PulseNoise; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED);
    (0..DRAWS)
        .map(|_| {
            let mut d = || rng.random_range(-0.5..=0.5);
            [
                PulseNoise::new(d(), d(), d()),
                PulseNoise::new(d(), d(), d()),
                PulseNoise::new(d(), d(), d()),
            ]
        })
        .collect()
}

fn random_state(rng: &mut impl Rng) -> DensityMatrix<4> {
    let g = Matrix4::<C64>::from_fn(|_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = g * g.adjoint();
    let t = m.trace();
    DensityMatrix::new(m / t).expect("valid state")
}

fn pipeline_traces(noises: &[PulseNoise; 3], rho: &DensityMatrix<4>) -> (f64, f64) {
    let gate = compose_gate(noises, HadamardMode::Paper);
    let s = split_blocks(&trace_out_phonon(&evolve(&lift_input(rho), &gate).unwrap()));
    (s.main_trace(), s.ancilla_trace())
}

fn ideal_recovery() -> Outcome {
    let g = compose_gate(&[PulseNoise::ZERO; 3], HadamardMode::Paper);
    let block = max_abs(&(g.matrix().fixed_view::<4, 4>(0, 0) - cnot()));
    let (_, p_anc) = pipeline_traces(&[PulseNoise::ZERO; 3], &DensityMatrix::maximally_mixed());
    let report = run_single(&RunConfig::default()).unwrap();
    outcome(
        block <= 1e-12 && p_anc.abs() <= 1e-12 && report.p_anc <= 1e-12,
        format!("|U4 - CNOT|max = {block:.2e}, p_anc = {p_anc:.2e}"),
    )
}

fn protocol_table() -> Outcome {
    type Ket = SVector<C64, 12>;
    let ket = |k: usize, a: C64| {
        let mut v = Ket::zeros();
        v[k] = a;
        v
    };
    let v = PulseId::ALL.map(|p| embed_pulse(p, &noisy_unitary(p, PulseNoise::ZERO)));
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    // (input, after pulse 1, after pulse 2, after pulse 3) as (index, amplitude)
    let table = [
        [(0, one), (0, one), (0, one), (0, one)],
        [(1, one), (1, one), (1, one), (1, one)],
        [(2, one), (6, i), (6, -i), (2, one)],
        [(3, one), (7, i), (7, i), (3, -one)],
    ];
    let mut worst: f64 = 0.0;
    for line in table {
        for step in 0..3 {
            let (from, a) = line[step];
            let (to, b) = line[step + 1];
            let got = v[step].matrix() * ket(from, a);
            worst = worst.max((got - ket(to, b)).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    let product = (v[2] * v[1] * v[0]).0;
    let mut cz = Matrix4::<C64>::identity();
    cz[(3, 3)] = -one;
    let phase = max_abs(&(product.fixed_view::<4, 4>(0, 0) - cz));
    let same = max_abs(&(compose_pulses(&[PulseNoise::ZERO; 3]).0 - product));
    outcome(
        worst <= 1e-15 && phase <= 1e-15 && same <= 1e-15,
        format!("table residual {worst:.2e}, |V3V2V1 - CZ|max = {phase:.2e}"),
    )
}

fn unitarity_and_trace(draws: &[[PulseNoise; 3]]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED + 1);
    let (mut worst_u, mut worst_t): (f64, f64) = (0.0, 0.0);
    for n in draws {
        let gate = compose_gate(n, HadamardMode::Paper);
        worst_u = worst_u.max(gate.unitarity_residual());
        let rho = random_state(&mut rng);
        let six = trace_out_phonon(&evolve(&lift_input(&rho), &gate).unwrap());
        worst_t = worst_t.max((six.trace() - 1.0).abs());
    }
    outcome(
        worst_u <= 1e-12 && worst_t <= 1e-12,
        format!("max |U†U - I| = {worst_u:.2e}, max |tr ρ6 - 1| = {worst_t:.2e}"),
    )
}

fn kraus_cross_validation(draws: &[[PulseNoise; 3]]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut printed_min = f64::INFINITY;
    let mut printed_max: f64 = 0.0;
    let mut printed_zero_when_outer_differ = 0usize;
    for n in draws {
        let u = unitaries(n);
        let extracted = kraus_from_gate(&compose_gate(n, HadamardMode::Paper)).unwrap();
        worst = worst.max(kraus_closed_form(&u[0], &u[1], &u[2]).max_abs_diff(&extracted));
        let printed = kraus_closed_form_with(&u, C3Form::Printed).max_abs_diff(&extracted);
        printed_min = printed_min.min(printed);
        printed_max = printed_max.max(printed);
        if n[0] != n[2] && printed <= 1e-15 {
            printed_zero_when_outer_differ += 1;
        }
    }
    outcome(
        worst <= 1e-12 && printed_zero_when_outer_differ == 0,
        format!(
            "derived c3: max residual {worst:.2e}; printed c3: residual in [{printed_min:.2e}, {printed_max:.2e}]"
        ),
    )
}

fn completeness_and_structure(draws: &[[PulseNoise; 3]]) -> Outcome {
    let (mut comp, mut a3, mut pattern): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut closed_identity_exact = true;
    for n in draws {
        let k = kraus_from_gate(&compose_gate(n, HadamardMode::Paper)).unwrap();
        let sum = k.a1.adjoint() * k.a1 + k.c1.adjoint() * k.c1 + k.c3.adjoint() * k.c3;
        comp = comp.max(max_abs(&(sum - Matrix4::identity())));
        a3 = a3.max(max_abs(&k.a3));

        let a = &k.a1;
        let mut dev: f64 = 0.0;
        for r in 0..4 {
            for col in 0..4 {
                let expect = match (r, col) {
                    (0, 0) | (1, 1) => Some(c(1.0, 0.0)),
                    (2, 2) | (3, 3) | (2, 3) | (3, 2) => None,
                    _ => Some(c(0.0, 0.0)),
                };
                if let Some(e) = expect {
                    dev = dev.max((a[(r, col)] - e).norm());
                }
            }
        }
        dev = dev.max((a[(2, 2)] - a[(3, 3)]).norm()).max((a[(2, 3)] - a[(3, 2)]).norm());
        pattern = pattern.max(dev);

        let u = unitaries(n);
        let closed = kraus_closed_form(&u[0], &u[1], &u[2]);
        closed_identity_exact &= closed.a1[(0, 0)] == c(1.0, 0.0)
            && closed.a1[(1, 1)] == c(1.0, 0.0)
            && closed.a1[(0, 1)] == c(0.0, 0.0)
            && closed.a1[(1, 0)] == c(0.0, 0.0);
    }
    outcome(
        comp <= 1e-12 && a3 <= 1e-12 && pattern <= 1e-12 && closed_identity_exact,
        format!("completeness {comp:.2e}, max |A3| {a3:.2e}, A1 pattern {pattern:.2e}"),
    )
}

fn probability_bookkeeping(draws: &[[PulseNoise; 3]]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DRAW_SEED + 2);
    let mut worst: f64 = 0.0;
    for (k, n) in draws.iter().enumerate() {
        let rho = match k % 3 {
            0 => DensityMatrix::maximally_mixed(),
            1 => DensityMatrix::basis(k % 4).unwrap(),
            _ => random_state(&mut rng),
        };
        let (main, anc) = pipeline_traces(n, &rho);
        worst = worst.max((main + anc - 1.0).abs());
    }
    for n in draws.iter().take(50) {
        for mode in [HadamardMode::Paper, HadamardMode::Physical] {
            let r = run_single(&RunConfig {
                noise: NoiseSet(*n),
                hadamard_mode: mode,
                samples: 16,
                ..RunConfig::default()
            })
            .unwrap();
            worst = worst.max((r.p_main + r.p_anc - 1.0).abs());
        }
    }
    outcome(worst <= 1e-12, format!("max |p_main + p_anc - 1| = {worst:.2e}"))
}

fn null_parameters() -> Outcome {
    let mut worst_anc: f64 = 0.0;
    let mut worst_fid: f64 = 0.0;
    for name in ["dpsi1", "dpsi3", "dphi2"] {
        let p: NoiseParam = name.parse().unwrap();
        for d in [-0.5, -0.25, -0.05, 0.05, 0.25, 0.5] {
            let r = run_single(&RunConfig::with_noise(NoiseSet::single(p, d))).unwrap();
            worst_anc = worst_anc.max(r.p_anc);
            worst_fid = worst_fid.max(1.0 - r.avg_fidelity.unwrap());
        }
    }
    outcome(
        worst_anc <= 1e-12 && worst_fid <= 1e-12,
        format!("max p_anc {worst_anc:.2e}, max 1 - F {worst_fid:.2e}"),
    )
}

fn quadratic_scaling() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["dtheta1", "dtheta2", "dtheta3", "dpsi2", "dphi1", "dphi3"] {
        let p: NoiseParam = name.parse().unwrap();
        let at = |d: f64| run_single(&RunConfig::with_noise(NoiseSet::single(p, d))).unwrap();
        let (big, small) = (at(0.02), at(0.01));
        let fid_ratio = (1.0 - big.avg_fidelity.unwrap()) / (1.0 - small.avg_fidelity.unwrap());
        ok &= (3.5..=4.5).contains(&fid_ratio);
        let mut part = format!("{name}: F {fid_ratio:.3}");
        if big.p_anc > 1e-20 {
            let anc_ratio = big.p_anc / small.p_anc;
            ok &= (3.5..=4.5).contains(&anc_ratio);
            part.push_str(&format!(" p_anc {anc_ratio:.3}"));
        }
        parts.push(part);
    }
    outcome(ok, parts.join("; "))
}

fn spot_value() -> Outcome {
    let n = [PulseNoise::ZERO, PulseNoise::new(0.2, 0.0, 0.0), PulseNoise::ZERO];
    let (_, p_anc) = pipeline_traces(&n, &DensityMatrix::maximally_mixed());
    let expect = (0.1f64).sin().powi(2) / 4.0;
    let diff = (p_anc - expect).abs();
    outcome(
        diff <= 1e-12 && (expect - 2.49168e-3).abs() < 5e-9,
        format!("p_anc = {p_anc:.9e}, sin²(0.1)/4 = {expect:.9e}, diff {diff:.2e}"),
    )
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_czsim"))
        .args(args)
        .output()
        .expect("czsim runs");
    assert!(out.status.success(), "czsim {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let mc = ["montecarlo", "--sigma-theta", "0.05", "--samples", "1000", "--seed", "7"];
    let a = run_cli(&mc);
    let b = run_cli(&mc);
    let sweep = ["sweep", "--param", "dtheta2", "--from", "-0.3", "--to", "0.3", "--steps", "61"];
    let par = run_cli(&sweep);
    let mut serial_args = sweep.to_vec();
    serial_args.push("--serial");
    let ser = run_cli(&serial_args);

    let spec = SweepSpec::two(
        SweepAxis::new("dtheta1".parse().unwrap(), -0.2, 0.2, 5),
        SweepAxis::new("dpsi2".parse().unwrap(), -0.2, 0.2, 5),
        RunConfig { samples: 64, seed: 3, ..RunConfig::default() },
    );
    let lib_same = run_sweep_with(&spec, Execution::Serial).unwrap()
        == run_sweep_with(&spec, Execution::Parallel).unwrap();
    outcome(
        a == b && par == ser && lib_same && !a.is_empty(),
        format!(
            "montecarlo {} bytes identical: {}; sweep serial == parallel: {}",
            a.len(),
            a == b,
            par == ser && lib_same
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let draws = draws();
    let criteria: Vec<Criterion> = vec![
        ("1 ideal recovery", Box::new(ideal_recovery)),
        ("2 protocol-table oracle", Box::new(protocol_table)),
        ("3 unitarity and trace", Box::new(|| unitarity_and_trace(&draws))),
        ("4 Kraus cross-validation", Box::new(|| kraus_cross_validation(&draws))),
        ("5 completeness and structure", Box::new(|| completeness_and_structure(&draws))),
        ("6 probability bookkeeping", Box::new(|| probability_bookkeeping(&draws))),
        ("7 null parameters", Box::new(null_parameters)),
        ("8 quadratic scaling", Box::new(quadratic_scaling)),
        ("9 closed-form spot value", Box::new(spot_value)),
        ("10 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let r = check();
        if !r.ok {
            failed += 1;
        }
        println!("{} {:<30} {}", if r.ok { "PASS" } else { "FAIL" }, name, r.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
