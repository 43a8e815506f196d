//! Density-matrix evolution through the gate, the phonon partial trace, and
//! the Kraus operators of the reduced two-qubit channel.
//!
//! Inputs live on the computational block (indices 0–3, phonon in `n = 0`,
//! ancillae empty). After evolution the phonon is traced out, leaving a 6×6
//! state on `(c, t) ∈ (0,0), (0,1), (1,0), (1,1), (0,2), (1,2)`. Its top-left
//! 4×4 block is the main output and its bottom-right 2×2 block is the
//! population left in the ancillary levels.
//!
//! Splitting the gate into 6×6 blocks `[[A, B], [C, D]]` by phonon number,
//! and `A`, `C` further into `[[X1, X2], [X3, X4]]` (4 + 2 rows and columns),
//! the reduced channel on the input block is
//!
//! ```text
//! ρ_main = A1 ρ A1† + C1 ρ C1†
//! ρ_anc  = A3 ρ A3† + C3 ρ C3†
//! ```

use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix, Vector4};

use crate::error::{Error, Property, Result};
use crate::levels::GateMatrix;
use crate::pulse::TwoLevelUnitary;
use crate::{max_abs, Matrix12, Matrix6, C64, DENSITY_TOL};

pub type Matrix4x2 = SMatrix<C64, 4, 2>;
pub type Matrix2x4 = SMatrix<C64, 2, 4>;

/// A density matrix of dimension `D` (4 for inputs, 12 for the full space,
/// 6 once the phonon is traced out).
///
/// [`DensityMatrix::new`] accepts only Hermitian, positive semidefinite,
/// unit-trace matrices, each within `1e-10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const D: usize>(SMatrix<C64, D, D>);

impl<const D: usize> DensityMatrix<D> {
    pub fn new(m: SMatrix<C64, D, D>) -> Result<Self> {
        Self::with_trace(m, 1.0)
    }

    /// Validate against an expected trace other than one.
    pub fn with_trace(m: SMatrix<C64, D, D>, expected_trace: f64) -> Result<Self> {
        let rho = DensityMatrix(m);
        let h = rho.hermiticity_residual();
        if h > DENSITY_TOL {
            return Err(Error::validation(Property::Hermiticity, h, DENSITY_TOL));
        }
        let t = (m.trace() - C64::new(expected_trace, 0.0)).norm();
        if t > DENSITY_TOL {
            return Err(Error::validation(Property::Trace, t, DENSITY_TOL));
        }
        let e = rho.min_eigenvalue();
        if e < -DENSITY_TOL {
            return Err(Error::validation(Property::Positivity, -e, DENSITY_TOL));
        }
        Ok(rho)
    }

    /// Wrap a matrix already known to be a valid state.
    pub fn from_matrix_unchecked(m: SMatrix<C64, D, D>) -> Self {
        DensityMatrix(m)
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn from_pure(psi: &SMatrix<C64, D, 1>) -> Result<Self> {
        let norm_err = (psi.norm() - 1.0).abs();
        if norm_err > DENSITY_TOL {
            return Err(Error::validation(
                Property::Normalization,
                norm_err,
                DENSITY_TOL,
            ));
        }
        Ok(DensityMatrix(psi * psi.adjoint()))
    }

    pub fn basis(k: usize) -> Result<Self> {
        if k >= D {
            return Err(Error::invalid_argument(format!(
                "basis index {k} out of range 0..{D}"
            )));
        }
        let mut m = SMatrix::<C64, D, D>::zeros();
        m[(k, k)] = C64::new(1.0, 0.0);
        Ok(DensityMatrix(m))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(SMatrix::<C64, D, D>::identity() * C64::new(1.0 / D as f64, 0.0))
    }

    pub fn matrix(&self) -> &SMatrix<C64, D, D> {
        &self.0
    }

    pub fn into_matrix(self) -> SMatrix<C64, D, D> {
        self.0
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn hermiticity_residual(&self) -> f64 {
        max_abs(&(self.0 - self.0.adjoint()))
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let dense = DMatrix::from_fn(D, D, |i, j| herm[(i, j)]);
        dense
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Convex combination `α·self + (1 − α)·other`.
    pub fn mix(&self, other: &Self, alpha: f64) -> Self {
        DensityMatrix(self.0 * C64::new(alpha, 0.0) + other.0 * C64::new(1.0 - alpha, 0.0))
    }
}

/// Place a 4×4 input state on the computational block of the full space.
pub fn lift_input(rho: &DensityMatrix<4>) -> DensityMatrix<12> {
    let mut m = Matrix12::zeros();
    m.fixed_view_mut::<4, 4>(0, 0).copy_from(rho.matrix());
    DensityMatrix(m)
}

/// `U ρ U†`. Fails if the gate is not unitary within `1e-12`.
pub fn evolve(rho: &DensityMatrix<12>, gate: &GateMatrix) -> Result<DensityMatrix<12>> {
    gate.check_unitary()?;
    let u = gate.matrix();
    Ok(DensityMatrix(u * rho.matrix() * u.adjoint()))
}

/// Trace over the phonon: the sum of the `n = 0` and `n = 1` diagonal blocks.
pub fn trace_out_phonon(rho: &DensityMatrix<12>) -> DensityMatrix<6> {
    let m = rho.matrix();
    DensityMatrix(m.fixed_view::<6, 6>(0, 0) + m.fixed_view::<6, 6>(6, 6))
}

/// Blocks of a reduced 6×6 state: main (4×4), coherences (4×2, 2×4) and
/// ancilla (2×2).
///
/// Coherences are only known when the state comes from the full pipeline;
/// [`apply_channel`] leaves them empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub rho1: Matrix4<C64>,
    pub rho2: Option<Matrix4x2>,
    pub rho3: Option<Matrix2x4>,
    pub rho4: Matrix2<C64>,
}

impl ReducedState {
    /// The 6×6 state, if the coherence blocks are present.
    pub fn reassemble(&self) -> Option<Matrix6> {
        let (rho2, rho3) = (self.rho2?, self.rho3?);
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.rho1);
        m.fixed_view_mut::<4, 2>(0, 4).copy_from(&rho2);
        m.fixed_view_mut::<2, 4>(4, 0).copy_from(&rho3);
        m.fixed_view_mut::<2, 2>(4, 4).copy_from(&self.rho4);
        Some(m)
    }

    /// Population remaining on the computational levels.
    pub fn main_trace(&self) -> f64 {
        self.rho1.trace().re
    }

    /// Population in the ancillary levels.
    pub fn ancilla_trace(&self) -> f64 {
        self.rho4.trace().re
    }
}

pub fn split_blocks(rho: &DensityMatrix<6>) -> ReducedState {
    let m = rho.matrix();
    ReducedState {
        rho1: m.fixed_view::<4, 4>(0, 0).into_owned(),
        rho2: Some(m.fixed_view::<4, 2>(0, 4).into_owned()),
        rho3: Some(m.fixed_view::<2, 4>(4, 0).into_owned()),
        rho4: m.fixed_view::<2, 2>(4, 4).into_owned(),
    }
}

/// A 6×6 matrix split into `[[X1 (4×4), X2 (4×2)], [X3 (2×4), X4 (2×2)]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubBlocks {
    pub x1: Matrix4<C64>,
    pub x2: Matrix4x2,
    pub x3: Matrix2x4,
    pub x4: Matrix2<C64>,
}

impl SubBlocks {
    fn of(m: &Matrix6) -> Self {
        SubBlocks {
            x1: m.fixed_view::<4, 4>(0, 0).into_owned(),
            x2: m.fixed_view::<4, 2>(0, 4).into_owned(),
            x3: m.fixed_view::<2, 4>(4, 0).into_owned(),
            x4: m.fixed_view::<2, 2>(4, 4).into_owned(),
        }
    }

    fn reassemble(&self) -> Matrix6 {
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.x1);
        m.fixed_view_mut::<4, 2>(0, 4).copy_from(&self.x2);
        m.fixed_view_mut::<2, 4>(4, 0).copy_from(&self.x3);
        m.fixed_view_mut::<2, 2>(4, 4).copy_from(&self.x4);
        m
    }
}

/// Phonon-number blocks `[[A, B], [C, D]]` of a gate, with the sub-blocks of
/// `A` and `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDecomposition {
    pub a: Matrix6,
    pub b: Matrix6,
    pub c: Matrix6,
    pub d: Matrix6,
    pub a_sub: SubBlocks,
    pub c_sub: SubBlocks,
}

impl BlockDecomposition {
    pub fn new(gate: &GateMatrix) -> Self {
        let g = gate.matrix();
        let a = g.fixed_view::<6, 6>(0, 0).into_owned();
        let b = g.fixed_view::<6, 6>(0, 6).into_owned();
        let c = g.fixed_view::<6, 6>(6, 0).into_owned();
        let d = g.fixed_view::<6, 6>(6, 6).into_owned();
        BlockDecomposition {
            a,
            b,
            c,
            d,
            a_sub: SubBlocks::of(&a),
            c_sub: SubBlocks::of(&c),
        }
    }

    /// Rebuild the 12×12 matrix, taking `A` and `C` from their sub-blocks.
    pub fn reassemble(&self) -> Matrix12 {
        let mut m = Matrix12::zeros();
        m.fixed_view_mut::<6, 6>(0, 0).copy_from(&self.a_sub.reassemble());
        m.fixed_view_mut::<6, 6>(0, 6).copy_from(&self.b);
        m.fixed_view_mut::<6, 6>(6, 0).copy_from(&self.c_sub.reassemble());
        m.fixed_view_mut::<6, 6>(6, 6).copy_from(&self.d);
        m
    }

    pub fn kraus(&self) -> KrausSet {
        KrausSet {
            a1: self.a_sub.x1,
            a3: self.a_sub.x3,
            c1: self.c_sub.x1,
            c3: self.c_sub.x3,
        }
    }
}

/// Kraus operators of the reduced channel on the 4-dimensional input block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausSet {
    /// Input block to main block, phonon back in `n = 0`.
    pub a1: Matrix4<C64>,
    /// Input block to ancillae, phonon in `n = 0`.
    pub a3: Matrix2x4,
    /// Input block to main block, phonon left in `n = 1`.
    pub c1: Matrix4<C64>,
    /// Input block to ancillae, phonon left in `n = 1`.
    pub c3: Matrix2x4,
}

impl KrausSet {
    /// The noiseless channel: `A1 = CNOT`, everything else zero.
    pub fn ideal() -> Self {
        KrausSet {
            a1: crate::cnot4(),
            a3: Matrix2x4::zeros(),
            c1: Matrix4::zeros(),
            c3: Matrix2x4::zeros(),
        }
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> Matrix4<C64> {
        self.a1.adjoint() * self.a1
            + self.a3.adjoint() * self.a3
            + self.c1.adjoint() * self.c1
            + self.c3.adjoint() * self.c3
    }

    /// `max |(Σ K†K − I)_ij|`.
    pub fn completeness_residual(&self) -> f64 {
        max_abs(&(self.completeness() - Matrix4::identity()))
    }

    /// Largest entry-wise distance over all four operators.
    pub fn max_abs_diff(&self, other: &KrausSet) -> f64 {
        [
            max_abs(&(self.a1 - other.a1)),
            max_abs(&(self.a3 - other.a3)),
            max_abs(&(self.c1 - other.c1)),
            max_abs(&(self.c3 - other.c3)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Read the Kraus operators off the first four columns of a unitary gate.
pub fn kraus_from_gate(gate: &GateMatrix) -> Result<KrausSet> {
    gate.check_unitary()?;
    Ok(BlockDecomposition::new(gate).kraus())
}

/// Which pulse supplies the `u21` factor of the ancilla amplitude `c3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum C3Form {
    /// `c3 = u¹₂₁·u²₂₁/√2`. Population reaches the ancilla through pulse 1
    /// then pulse 2; pulse 3 never acts on that level. Agrees with the
    /// block-extracted operators.
    #[default]
    Derived,
    /// `c3 = u³₂₁·u²₂₁/√2`. Equal to [`C3Form::Derived`] only when pulses 1
    /// and 3 have the same `u21`.
    Printed,
}

/// The five scalars that fill the closed-form Kraus operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausEntries {
    pub a1_diag: C64,
    pub a1_off: C64,
    pub c1_first: C64,
    pub c1_second: C64,
    pub c3: C64,
}

impl KrausEntries {
    pub fn new(u: &[TwoLevelUnitary; 3], form: C3Form) -> Self {
        let [u1, u2, u3] = u;
        let half = C64::new(0.5, 0.0);
        let one = C64::new(1.0, 0.0);
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let c3_first = match form {
            C3Form::Derived => u1.u21,
            C3Form::Printed => u3.u21,
        };
        KrausEntries {
            a1_diag: half * (C64::new(2.0, 0.0) * u1.u11 * u3.u11 + u1.u21 * (one + u2.u11) * u3.u12),
            a1_off: half * u1.u21 * (u2.u11 - one) * u3.u12,
            c1_first: r * (u1.u11 * u3.u21 + u1.u21 * u2.u11 * u3.u22),
            c1_second: r * (u1.u11 * u3.u21 + u1.u21 * u3.u22),
            c3: r * c3_first * u2.u21,
        }
    }

    pub fn kraus(&self) -> KrausSet {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        let (a, b) = (self.a1_diag, self.a1_off);
        let (p, q) = (self.c1_first, self.c1_second);
        let e = self.c3;
        #[rustfmt::skip]
        let a1 = Matrix4::new(
            o, z, z, z,
            z, o, z, z,
            z, z, a, b,
            z, z, b, a,
        );
        #[rustfmt::skip]
        let c1 = Matrix4::new(
            z, z, p, p,
            z, z, q, -q,
            z, z, z, z,
            z, z, z, z,
        );
        #[rustfmt::skip]
        let c3 = Matrix2x4::new(
            z, z, e, e,
            z, z, z, z,
        );
        KrausSet {
            a1,
            a3: Matrix2x4::zeros(),
            c1,
            c3,
        }
    }
}

/// Closed-form Kraus operators from the three pulse unitaries, using the
/// derived ancilla amplitude.
pub fn kraus_closed_form(u1: &TwoLevelUnitary, u2: &TwoLevelUnitary, u3: &TwoLevelUnitary) -> KrausSet {
    kraus_closed_form_with(&[*u1, *u2, *u3], C3Form::Derived)
}

pub fn kraus_closed_form_with(u: &[TwoLevelUnitary; 3], form: C3Form) -> KrausSet {
    KrausEntries::new(u, form).kraus()
}

/// Main and ancilla blocks of the reduced output for an input state.
pub fn apply_channel(kraus: &KrausSet, rho: &DensityMatrix<4>) -> ReducedState {
    let r = rho.matrix();
    ReducedState {
        rho1: kraus.a1 * r * kraus.a1.adjoint() + kraus.c1 * r * kraus.c1.adjoint(),
        rho2: None,
        rho3: None,
        rho4: kraus.a3 * r * kraus.a3.adjoint() + kraus.c3 * r * kraus.c3.adjoint(),
    }
}

/// `CNOT·ψ`, the ideal output of a pure input.
pub fn ideal_output(psi: &Vector4<C64>) -> Vector4<C64> {
    crate::cnot4() * psi
}
