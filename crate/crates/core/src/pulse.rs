//! Single laser pulses as 2×2 unitaries.
//!
//! A pulse is parameterised by its impulse area `theta` (Rabi frequency times
//! duration), a detuning-related phase `psi` and the laser phase `phi`:
//!
//! ```text
//! U = [ cos(θ/2)·e^{+iψ}     i·sin(θ/2)·e^{+iφ} ]
//!     [ i·sin(θ/2)·e^{−iφ}   cos(θ/2)·e^{−iψ}   ]
//! ```
//!
//! Angles are plain radians and are never normalised.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::C64;

/// One of the three laser pulses of the controlled-phase protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PulseId {
    /// Maps the control qubit onto the phonon mode.
    First,
    /// Shelves through the ancillary level of the target ion.
    Second,
    /// Maps the phonon mode back onto the control qubit.
    Third,
}

impl PulseId {
    pub const ALL: [PulseId; 3] = [PulseId::First, PulseId::Second, PulseId::Third];

    /// The pulse number, 1 to 3.
    pub fn number(self) -> u8 {
        match self {
            PulseId::First => 1,
            PulseId::Second => 2,
            PulseId::Third => 3,
        }
    }

    /// Zero-based position, handy for indexing `[_; 3]` arrays.
    pub fn index(self) -> usize {
        self.number() as usize - 1
    }
}

impl TryFrom<u8> for PulseId {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(PulseId::First),
            2 => Ok(PulseId::Second),
            3 => Ok(PulseId::Third),
            k => Err(Error::invalid_argument(format!(
                "pulse id must be 1, 2 or 3, got {k}"
            ))),
        }
    }
}

impl fmt::Display for PulseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pulse {}", self.number())
    }
}

/// Laser parameters of a pulse, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PulseParams {
    /// Impulse area θ = Ω·t.
    pub theta: f64,
    /// Phase related to the laser detuning.
    pub psi: f64,
    /// Laser phase.
    pub phi: f64,
}

impl PulseParams {
    pub const fn new(theta: f64, psi: f64, phi: f64) -> Self {
        PulseParams { theta, psi, phi }
    }

    /// Nominal parameters of a protocol pulse.
    ///
    /// Pulses 1 and 3 use (π, π, 0), which gives `[[0, i], [i, 0]]`. Pulse 2
    /// uses (2π, 0, 0), the triple that produces the 2π rotation `−I`.
    pub fn ideal(pulse: PulseId) -> Self {
        match pulse {
            PulseId::First | PulseId::Third => PulseParams::new(PI, PI, 0.0),
            PulseId::Second => PulseParams::new(2.0 * PI, 0.0, 0.0),
        }
    }

    /// Component-wise perturbation.
    pub fn perturbed(self, noise: PulseNoise) -> Self {
        PulseParams {
            theta: self.theta + noise.d_theta,
            psi: self.psi + noise.d_psi,
            phi: self.phi + noise.d_phi,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.psi.is_finite() && self.phi.is_finite()
    }

    /// The pulse unitary for these parameters.
    pub fn unitary(&self) -> TwoLevelUnitary {
        let half = 0.5 * self.theta;
        let (s, c) = half.sin_cos();
        let i = C64::i();
        TwoLevelUnitary {
            u11: C64::new(self.psi.cos(), self.psi.sin()) * c,
            u12: i * s * C64::new(self.phi.cos(), self.phi.sin()),
            u21: i * s * C64::new(self.phi.cos(), -self.phi.sin()),
            u22: C64::new(self.psi.cos(), -self.psi.sin()) * c,
        }
    }
}

/// Additive perturbation of the three pulse parameters, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PulseNoise {
    pub d_theta: f64,
    pub d_psi: f64,
    pub d_phi: f64,
}

impl PulseNoise {
    pub const ZERO: PulseNoise = PulseNoise::new(0.0, 0.0, 0.0);

    pub const fn new(d_theta: f64, d_psi: f64, d_phi: f64) -> Self {
        PulseNoise {
            d_theta,
            d_psi,
            d_phi,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d_theta == 0.0 && self.d_psi == 0.0 && self.d_phi == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.d_theta.is_finite() && self.d_psi.is_finite() && self.d_phi.is_finite()
    }
}

/// A 2×2 pulse unitary, entries indexed as in `[[u11, u12], [u21, u22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelUnitary {
    pub u11: C64,
    pub u12: C64,
    pub u21: C64,
    pub u22: C64,
}

impl TwoLevelUnitary {
    pub fn identity() -> Self {
        TwoLevelUnitary {
            u11: C64::new(1.0, 0.0),
            u12: C64::new(0.0, 0.0),
            u21: C64::new(0.0, 0.0),
            u22: C64::new(1.0, 0.0),
        }
    }

    pub fn from_matrix(m: &Matrix2<C64>) -> Self {
        TwoLevelUnitary {
            u11: m[(0, 0)],
            u12: m[(0, 1)],
            u21: m[(1, 0)],
            u22: m[(1, 1)],
        }
    }

    pub fn matrix(&self) -> Matrix2<C64> {
        Matrix2::new(self.u11, self.u12, self.u21, self.u22)
    }

    pub fn determinant(&self) -> C64 {
        self.u11 * self.u22 - self.u12 * self.u21
    }

    /// `max |(U†U − I)_ij|`.
    pub fn unitarity_residual(&self) -> f64 {
        let m = self.matrix();
        let r = m.adjoint() * m - Matrix2::identity();
        r.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry-wise distance to another unitary.
    pub fn max_abs_diff(&self, other: &TwoLevelUnitary) -> f64 {
        [
            self.u11 - other.u11,
            self.u12 - other.u12,
            self.u21 - other.u21,
            self.u22 - other.u22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

/// Nominal parameters for pulse `1..=3`.
pub fn ideal_pulse_params(pulse_id: u8) -> Result<PulseParams> {
    PulseId::try_from(pulse_id).map(PulseParams::ideal)
}

pub fn build_unitary(params: PulseParams) -> TwoLevelUnitary {
    params.unitary()
}

pub fn apply_noise(params: PulseParams, noise: PulseNoise) -> PulseParams {
    params.perturbed(noise)
}

/// Unitary of protocol pulse `pulse` with its parameters shifted by `noise`.
pub fn noisy_unitary(pulse: PulseId, noise: PulseNoise) -> TwoLevelUnitary {
    PulseParams::ideal(pulse).perturbed(noise).unitary()
}
