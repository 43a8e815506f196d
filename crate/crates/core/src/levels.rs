//! The twelve-level space of control ion, target ion (with its ancillary
//! level) and phonon mode, and the gates embedded in it.
//!
//! Levels are written `(c, t, n)`: control `c ∈ {0,1}`, target `t ∈ {0,1,2}`
//! where `2` is the ancillary level, phonon `n ∈ {0,1}`. The phonon number is
//! the block coordinate: indices 0–5 have `n = 0`, indices 6–11 have `n = 1`.
//! Within each half the two ancillary levels come last, so indices 0–3 are
//! the computational basis `|00⟩, |01⟩, |10⟩, |11⟩` with the phonon in `n = 0`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Property, Result};
use crate::pulse::{noisy_unitary, PulseId, PulseNoise, TwoLevelUnitary};
use crate::{max_abs, Matrix12, C64, UNITARITY_TOL};

/// Number of levels in the full space.
pub const LEVELS: usize = 12;

/// A level of the full space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Level {
    pub control: u8,
    pub target: u8,
    pub phonon: u8,
}

const fn lv(control: u8, target: u8, phonon: u8) -> Level {
    Level {
        control,
        target,
        phonon,
    }
}

/// `LEVEL_ORDER[k]` is the level stored at index `k`.
pub const LEVEL_ORDER: [Level; LEVELS] = [
    lv(0, 0, 0),
    lv(0, 1, 0),
    lv(1, 0, 0),
    lv(1, 1, 0),
    lv(0, 2, 0),
    lv(1, 2, 0),
    lv(0, 0, 1),
    lv(0, 1, 1),
    lv(1, 0, 1),
    lv(1, 1, 1),
    lv(0, 2, 1),
    lv(1, 2, 1),
];

/// Position of `(c, t, n)` in [`LEVEL_ORDER`].
pub fn level_index(control: u8, target: u8, phonon: u8) -> Result<usize> {
    if control > 1 || target > 2 || phonon > 1 {
        return Err(Error::invalid_argument(format!(
            "level ({control}, {target}, {phonon}) out of range: control and phonon take 0|1, target 0|1|2"
        )));
    }
    let half = if target == 2 {
        4 + control as usize
    } else {
        2 * control as usize + target as usize
    };
    Ok(6 * phonon as usize + half)
}

/// How the Hadamard on the target qubit is placed in the full space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HadamardMode {
    /// Acts on the target qubit only while the phonon is in `n = 0`.
    #[default]
    Paper,
    /// Acts on the target qubit for both phonon numbers.
    Physical,
}

impl HadamardMode {
    pub fn as_str(self) -> &'static str {
        match self {
            HadamardMode::Paper => "paper",
            HadamardMode::Physical => "physical",
        }
    }
}

impl fmt::Display for HadamardMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HadamardMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(HadamardMode::Paper),
            "physical" => Ok(HadamardMode::Physical),
            other => Err(Error::invalid_argument(format!(
                "unknown hadamard mode `{other}` (expected paper|physical)"
            ))),
        }
    }
}

/// A dense 12×12 operator on the level space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateMatrix(pub Matrix12);

impl GateMatrix {
    pub fn identity() -> Self {
        GateMatrix(Matrix12::identity())
    }

    pub fn matrix(&self) -> &Matrix12 {
        &self.0
    }

    /// `max |(U†U − I)_ij|`.
    pub fn unitarity_residual(&self) -> f64 {
        max_abs(&(self.0.adjoint() * self.0 - Matrix12::identity()))
    }

    pub fn check_unitary(&self) -> Result<()> {
        let r = self.unitarity_residual();
        if r <= UNITARITY_TOL {
            Ok(())
        } else {
            Err(Error::validation(Property::Unitarity, r, UNITARITY_TOL))
        }
    }

    pub fn adjoint(&self) -> Self {
        GateMatrix(self.0.adjoint())
    }
}

impl std::ops::Mul for GateMatrix {
    type Output = GateMatrix;

    fn mul(self, rhs: GateMatrix) -> GateMatrix {
        GateMatrix(self.0 * rhs.0)
    }
}

/// Index pairs `(lower, upper)` a pulse couples. The 2×2 unitary acts on
/// `(|lower⟩, |upper⟩)` with `u11` on the lower and `u22` on the upper level.
pub fn pulse_pairs(pulse: PulseId) -> &'static [(usize, usize)] {
    match pulse {
        // |1 t 0⟩ ↔ |0 t 1⟩ for t = 0, 1
        PulseId::First | PulseId::Third => &[(2, 6), (3, 7)],
        // |0 0 1⟩ ↔ |0 2 1⟩
        PulseId::Second => &[(6, 10)],
    }
}

/// Index pairs the target-qubit Hadamard mixes in a given mode.
pub fn hadamard_pairs(mode: HadamardMode) -> &'static [(usize, usize)] {
    match mode {
        HadamardMode::Paper => &[(0, 1), (2, 3)],
        HadamardMode::Physical => &[(0, 1), (2, 3), (6, 7), (8, 9)],
    }
}

fn embed_blocks(pairs: &[(usize, usize)], u: &TwoLevelUnitary) -> GateMatrix {
    let mut m = Matrix12::identity();
    for &(a, b) in pairs {
        m[(a, a)] = u.u11;
        m[(a, b)] = u.u12;
        m[(b, a)] = u.u21;
        m[(b, b)] = u.u22;
    }
    GateMatrix(m)
}

/// Embed a pulse unitary on the levels that pulse couples.
pub fn embed_pulse(pulse: PulseId, u: &TwoLevelUnitary) -> GateMatrix {
    embed_blocks(pulse_pairs(pulse), u)
}

pub fn embed_hadamard(mode: HadamardMode) -> GateMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let block = TwoLevelUnitary {
        u11: h,
        u12: h,
        u21: h,
        u22: -h,
    };
    embed_blocks(hadamard_pairs(mode), &block)
}

/// The three pulse matrices followed by nothing else: the controlled-phase
/// part of the protocol, `V3·V2·V1`.
pub fn compose_pulses(noises: &[PulseNoise; 3]) -> GateMatrix {
    PulseId::ALL.iter().fold(GateMatrix::identity(), |acc, &p| {
        embed_pulse(p, &noisy_unitary(p, noises[p.index()])) * acc
    })
}

/// The full five-step gate `H·V3·V2·V1·H`.
pub fn compose_gate(noises: &[PulseNoise; 3], mode: HadamardMode) -> GateMatrix {
    let h = embed_hadamard(mode);
    h * compose_pulses(noises) * h
}
