//! Self-checks of the noiseless protocol, as run by `czsim ideal`.

use nalgebra::SVector;

use crate::channel::{
    evolve, kraus_closed_form, kraus_from_gate, lift_input, split_blocks, trace_out_phonon,
    DensityMatrix, KrausSet,
};
use crate::levels::{compose_gate, compose_pulses, embed_pulse, GateMatrix, HadamardMode};
use crate::metrics::leakage_probabilities;
use crate::pulse::{noisy_unitary, PulseId, PulseNoise};
use crate::{cnot4, max_abs, C64};

/// Tolerance of the exact protocol-table mappings.
pub const TABLE_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

type State = SVector<C64, 12>;

fn ket(k: usize, amp: C64) -> State {
    let mut v = State::zeros();
    v[k] = amp;
    v
}

fn dist(a: &State, b: &State) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The noiseless pulse matrices `[V1, V2, V3]`.
pub fn ideal_pulses() -> [GateMatrix; 3] {
    PulseId::ALL.map(|p| embed_pulse(p, &noisy_unitary(p, PulseNoise::ZERO)))
}

/// Largest deviation from the step-by-step action of the three pulses on the
/// computational basis:
///
/// ```text
///            V1          V2           V3
/// |0⟩  →  |0⟩      →  |0⟩      →  |0⟩
/// |1⟩  →  |1⟩      →  |1⟩      →  |1⟩
/// |2⟩  →  i|6⟩     → −i|6⟩     →  |2⟩
/// |3⟩  →  i|7⟩     →  i|7⟩     → −|3⟩
/// ```
pub fn protocol_table_residual() -> f64 {
    let [v1, v2, v3] = ideal_pulses();
    let i = C64::i();
    let one = C64::new(1.0, 0.0);
    let steps: [[(usize, C64); 4]; 4] = [
        [(0, one), (0, one), (0, one), (0, one)],
        [(1, one), (1, one), (1, one), (1, one)],
        [(2, one), (6, i), (6, -i), (2, one)],
        [(3, one), (7, i), (7, i), (3, -one)],
    ];
    let mut worst: f64 = 0.0;
    for row in steps {
        for (k, v) in [v1, v2, v3].iter().enumerate() {
            let (from, a) = row[k];
            let (to, b) = row[k + 1];
            worst = worst.max(dist(&(v.matrix() * ket(from, a)), &ket(to, b)));
        }
    }
    worst
}

/// Deviation of `V3·V2·V1` from `diag(1, 1, 1, −1)` on the computational block.
pub fn controlled_phase_residual() -> f64 {
    let m = compose_pulses(&[PulseNoise::ZERO; 3]).0;
    let mut target = nalgebra::Matrix4::<C64>::identity();
    target[(3, 3)] = C64::new(-1.0, 0.0);
    max_abs(&(m.fixed_view::<4, 4>(0, 0) - target))
}

/// All checks of the noiseless gate.
pub fn ideal_checks() -> Vec<Check> {
    let zero = [PulseNoise::ZERO; 3];
    let gate = compose_gate(&zero, HadamardMode::Paper);
    let g = gate.matrix();

    let cnot_residual = max_abs(&(g.fixed_view::<4, 4>(0, 0) - cnot4()));
    let mut outside: f64 = 0.0;
    for r in 4..12 {
        for c in 0..4 {
            outside = outside.max(g[(r, c)].norm()).max(g[(c, r)].norm());
        }
    }

    let physical = compose_gate(&zero, HadamardMode::Physical);
    let extracted = kraus_from_gate(&gate).unwrap_or_else(|_| KrausSet::ideal());
    let u = PulseId::ALL.map(|p| noisy_unitary(p, PulseNoise::ZERO));
    let closed = kraus_closed_form(&u[0], &u[1], &u[2]);

    let rho = DensityMatrix::<4>::maximally_mixed();
    let state = evolve(&lift_input(&rho), &gate)
        .map(|s| split_blocks(&trace_out_phonon(&s)));
    let p_anc = state
        .ok()
        .and_then(|s| leakage_probabilities(&s).ok())
        .map_or(f64::INFINITY, |(_, anc)| anc);

    vec![
        Check {
            name: "protocol table (pulse-by-pulse basis mappings)",
            residual: protocol_table_residual(),
            tolerance: TABLE_TOL,
        },
        Check {
            name: "pulses compose to diag(1,1,1,-1)",
            residual: controlled_phase_residual(),
            tolerance: TABLE_TOL,
        },
        Check {
            name: "gate unitarity",
            residual: gate.unitarity_residual(),
            tolerance: 1e-12,
        },
        Check {
            name: "computational block equals CNOT",
            residual: cnot_residual,
            tolerance: 1e-12,
        },
        Check {
            name: "no support outside computational block",
            residual: outside,
            tolerance: 1e-12,
        },
        Check {
            name: "hadamard modes agree",
            residual: max_abs(&(gate.0 - physical.0)),
            tolerance: 1e-12,
        },
        Check {
            name: "A3 max |entry|",
            residual: max_abs(&extracted.a3),
            tolerance: 1e-12,
        },
        Check {
            name: "Kraus completeness",
            residual: extracted.completeness_residual(),
            tolerance: 1e-12,
        },
        Check {
            name: "Kraus operators equal ideal CNOT channel",
            residual: extracted.max_abs_diff(&KrausSet::ideal()),
            tolerance: 1e-12,
        },
        Check {
            name: "closed-form Kraus equals extracted",
            residual: closed.max_abs_diff(&extracted),
            tolerance: 1e-12,
        },
        Check {
            name: "p_anc for maximally mixed input",
            residual: p_anc,
            tolerance: 1e-12,
        },
    ]
}
