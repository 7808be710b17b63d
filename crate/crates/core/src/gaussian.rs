//! Phase-space representation of Gaussian states.
//!
//! Quadratures are ordered `(q1, p1, q2, p2, ...)` with `q = (a + a†)/√2`, so the
//! vacuum covariance matrix is `I/2`. Gates act on first and second moments as
//! `d -> S d + shift` and `σ -> S σ Sᵀ`.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

const SYMMETRY_TOL: f64 = 1e-12;
const PURITY_TOL: f64 = 1e-9;
const PHYSICALITY_TOL: f64 = 1e-10;

/// The block-diagonal symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    matrix: Matrix,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let mut matrix = Matrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            matrix[(2 * k, 2 * k + 1)] = 1.0;
            matrix[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { matrix }
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Largest entry of `|S Ω Sᵀ - Ω|`.
    pub fn defect(&self, s: &Matrix) -> f64 {
        (s * &self.matrix * s.transpose() - &self.matrix).amax()
    }
}

/// Convenience for `SymplecticForm::new(modes).into_matrix()`.
pub fn symplectic_form(modes: usize) -> Matrix {
    SymplecticForm::new(modes).into_matrix()
}

/// How the two beam-splitter angles are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamSplitterConvention {
    /// `mix` is the mixing angle (transmissivity `cos² mix`) and `phase` a relative
    /// phase: `a -> cos(mix) a + e^{-i phase} sin(mix) b`.
    #[default]
    Transmissivity,
    /// The literal generator `exp[i phase (e^{i mix} a†b + h.c.)]`, where `phase` acts
    /// as the mixing angle and `mix` as the phase.
    Printed,
}

/// A Gaussian unitary acting on one or two modes (modes are 0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianGate {
    /// `exp(-i angle a†a)`.
    PhaseRotation { mode: usize, angle: f64 },
    /// `exp[magnitude/2 (e^{i angle} a†² - e^{-i angle} a²)]`; `angle = 0` stretches q.
    Squeezer {
        mode: usize,
        magnitude: f64,
        angle: f64,
    },
    BeamSplitter {
        modes: (usize, usize),
        mix: f64,
        phase: f64,
        convention: BeamSplitterConvention,
    },
    /// Shifts the mean of `mode` by `(amplitude/√2)(cos angle, sin angle)`.
    Displacement {
        mode: usize,
        amplitude: f64,
        angle: f64,
    },
}

/// Standard counter-clockwise rotation matrix.
fn rotation(angle: f64) -> [[f64; 2]; 2] {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

/// Symplectic block of a passive two-mode map `a_j -> Σ_k A_jk a_k`, with `A`
/// given as (re, im) pairs.
fn passive_two_mode(a: [[(f64, f64); 2]; 2]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for j in 0..2 {
        for k in 0..2 {
            let (re, im) = a[j][k];
            out[2 * j][2 * k] = re;
            out[2 * j][2 * k + 1] = -im;
            out[2 * j + 1][2 * k] = im;
            out[2 * j + 1][2 * k + 1] = re;
        }
    }
    out
}

impl GaussianGate {
    fn check(&self, modes: usize) -> Result<()> {
        let finite = match *self {
            GaussianGate::PhaseRotation { angle, .. } => angle.is_finite(),
            GaussianGate::Squeezer {
                magnitude, angle, ..
            } => magnitude.is_finite() && angle.is_finite(),
            GaussianGate::BeamSplitter { mix, phase, .. } => mix.is_finite() && phase.is_finite(),
            GaussianGate::Displacement {
                amplitude, angle, ..
            } => amplitude.is_finite() && angle.is_finite(),
        };
        if !finite {
            return Err(invalid(format!("non-finite gate parameter in {self:?}")));
        }
        match *self {
            GaussianGate::PhaseRotation { mode, .. }
            | GaussianGate::Squeezer { mode, .. }
            | GaussianGate::Displacement { mode, .. } => {
                if mode >= modes {
                    return Err(invalid(format!(
                        "mode {mode} out of range for {modes} modes"
                    )));
                }
            }
            GaussianGate::BeamSplitter {
                modes: (m1, m2), ..
            } => {
                if m1 >= modes || m2 >= modes || m1 == m2 {
                    return Err(invalid(format!(
                        "beam splitter modes ({m1}, {m2}) invalid for {modes} modes"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Symplectic matrix and mean shift of this gate on a `modes`-mode system.
    pub fn symplectic(&self, modes: usize) -> Result<(Matrix, Vector)> {
        self.check(modes)?;
        let dim = 2 * modes;
        let mut s = Matrix::identity(dim, dim);
        let mut shift = Vector::zeros(dim);
        match *self {
            GaussianGate::PhaseRotation { mode, angle } => {
                // q -> q cos λ + p sin λ, p -> -q sin λ + p cos λ
                let r = rotation(-angle);
                set_block(&mut s, mode, mode, &r);
            }
            GaussianGate::Squeezer {
                mode,
                magnitude,
                angle,
            } if magnitude != 0.0 => {
                let r = rotation(angle / 2.0);
                let (e_plus, e_minus) = (magnitude.exp(), (-magnitude).exp());
                let mut block = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        block[i][j] = r[i][0] * e_plus * r[j][0] + r[i][1] * e_minus * r[j][1];
                    }
                }
                set_block(&mut s, mode, mode, &block);
            }
            GaussianGate::BeamSplitter {
                modes: (m1, m2),
                mix,
                phase,
                convention,
            } => {
                let a = match convention {
                    BeamSplitterConvention::Transmissivity => {
                        let (sp, cp) = mix.sin_cos();
                        let (st, ct) = phase.sin_cos();
                        // a -> c a + e^{-iθ} s b,  b -> c b - e^{iθ} s a
                        [
                            [(cp, 0.0), (ct * sp, -st * sp)],
                            [(-ct * sp, -st * sp), (cp, 0.0)],
                        ]
                    }
                    BeamSplitterConvention::Printed => {
                        let (sm, cm) = phase.sin_cos();
                        let (sf, cf) = mix.sin_cos();
                        // a -> cos θ a + i e^{iφ} sin θ b,  b -> cos θ b + i e^{-iφ} sin θ a
                        [
                            [(cm, 0.0), (-sf * sm, cf * sm)],
                            [(sf * sm, cf * sm), (cm, 0.0)],
                        ]
                    }
                };
                let block = passive_two_mode(a);
                let idx = [2 * m1, 2 * m1 + 1, 2 * m2, 2 * m2 + 1];
                for (i, &gi) in idx.iter().enumerate() {
                    for (j, &gj) in idx.iter().enumerate() {
                        s[(gi, gj)] = block[i][j];
                    }
                }
            }
            GaussianGate::Displacement {
                mode,
                amplitude,
                angle,
            } => {
                let scale = amplitude / std::f64::consts::SQRT_2;
                shift[2 * mode] = scale * angle.cos();
                shift[2 * mode + 1] = scale * angle.sin();
            }
            // zero squeezing is the identity
            GaussianGate::Squeezer { .. } => {}
        }
        Ok((s, shift))
    }

    /// Derivative of the symplectic matrix with respect to the gate's angle.
    /// Only phase rotations carry a bound parameter.
    pub fn angle_derivative(&self, modes: usize) -> Result<Matrix> {
        self.check(modes)?;
        match *self {
            GaussianGate::PhaseRotation { mode, angle } => {
                let (s, c) = angle.sin_cos();
                let mut d = Matrix::zeros(2 * modes, 2 * modes);
                set_block(&mut d, mode, mode, &[[-s, c], [-c, -s]]);
                Ok(d)
            }
            other => Err(invalid(format!(
                "parameter derivatives are only defined for phase rotations, got {other:?}"
            ))),
        }
    }

    /// The gate undoing this one.
    pub fn inverse(&self) -> GaussianGate {
        match *self {
            GaussianGate::PhaseRotation { mode, angle } => GaussianGate::PhaseRotation {
                mode,
                angle: -angle,
            },
            GaussianGate::Squeezer {
                mode,
                magnitude,
                angle,
            } => GaussianGate::Squeezer {
                mode,
                magnitude: -magnitude,
                angle,
            },
            GaussianGate::BeamSplitter {
                modes,
                mix,
                phase,
                convention,
            } => match convention {
                BeamSplitterConvention::Transmissivity => GaussianGate::BeamSplitter {
                    modes,
                    mix: -mix,
                    phase,
                    convention,
                },
                BeamSplitterConvention::Printed => GaussianGate::BeamSplitter {
                    modes,
                    mix,
                    phase: -phase,
                    convention,
                },
            },
            GaussianGate::Displacement {
                mode,
                amplitude,
                angle,
            } => GaussianGate::Displacement {
                mode,
                amplitude: -amplitude,
                angle,
            },
        }
    }
}

fn set_block(m: &mut Matrix, row_mode: usize, col_mode: usize, block: &[[f64; 2]; 2]) {
    for i in 0..2 {
        for j in 0..2 {
            m[(2 * row_mode + i, 2 * col_mode + j)] = block[i][j];
        }
    }
}

/// Mean vector and covariance matrix of an `M`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: Vector,
    cov: Matrix,
}

impl GaussianState {
    pub fn new(mean: Vector, cov: Matrix) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(invalid(format!(
                "mean length {dim} is not a positive even number"
            )));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(invalid(format!(
                "covariance is {}x{}, expected {dim}x{dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("non-finite moment"));
        }
        let scale = cov.amax().max(1.0);
        if (&cov - cov.transpose()).amax() > SYMMETRY_TOL * scale {
            return Err(invalid("covariance matrix is not symmetric"));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(invalid("a state needs at least one mode"));
        }
        let dim = 2 * modes;
        Ok(Self {
            mean: Vector::zeros(dim),
            cov: Matrix::identity(dim, dim) * 0.5,
        })
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &Vector {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix {
        &self.cov
    }

    pub fn apply(&self, gate: &GaussianGate) -> Result<Self> {
        let (s, shift) = gate.symplectic(self.modes())?;
        Ok(self.transform(&s, &shift))
    }

    /// Applies an affine symplectic map whose dimensions already match.
    pub(crate) fn transform(&self, s: &Matrix, shift: &Vector) -> Self {
        let cov = s * &self.cov * s.transpose();
        Self {
            mean: s * &self.mean + shift,
            cov: symmetrize(cov),
        }
    }

    pub fn physicality(&self) -> Physicality {
        physicality_check(self)
    }
}

pub(crate) fn symmetrize(m: Matrix) -> Matrix {
    (&m + m.transpose()) * 0.5
}

pub fn vacuum_state(modes: usize) -> Result<GaussianState> {
    GaussianState::vacuum(modes)
}

pub fn gate_symplectic(gate: &GaussianGate, modes: usize) -> Result<(Matrix, Vector)> {
    gate.symplectic(modes)
}

pub fn apply_gate(state: &GaussianState, gate: &GaussianGate) -> Result<GaussianState> {
    state.apply(gate)
}

pub fn apply_circuit(state: &GaussianState, gates: &[GaussianGate]) -> Result<GaussianState> {
    gates
        .iter()
        .try_fold(state.clone(), |acc, gate| acc.apply(gate))
}

/// Composes a gate list into one affine map `x -> S x + shift`.
pub fn compose_circuit(gates: &[GaussianGate], modes: usize) -> Result<(Matrix, Vector)> {
    let dim = 2 * modes;
    let mut total = Matrix::identity(dim, dim);
    let mut total_shift = Vector::zeros(dim);
    for gate in gates {
        let (s, shift) = gate.symplectic(modes)?;
        total_shift = &s * total_shift + shift;
        total = s * total;
    }
    Ok((total, total_shift))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhysicalityClass {
    Pure,
    Mixed,
    Unphysical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Physicality {
    pub class: PhysicalityClass,
    /// Ascending, one value per mode.
    pub symplectic_eigenvalues: Vec<f64>,
}

/// Symplectic eigenvalues of a covariance matrix, ascending.
///
/// For positive-definite `σ = L Lᵀ` these are the singular values of the
/// antisymmetric matrix `Lᵀ Ω L` (each appears twice), which keeps the absolute
/// error at the level of `ε‖σ‖` even for strongly squeezed states. Otherwise the
/// moduli of the eigenvalues of `Ω σ` are used.
pub fn symplectic_eigenvalues(cov: &Matrix) -> Vec<f64> {
    let modes = cov.nrows() / 2;
    let omega = symplectic_form(modes);
    let mut moduli: Vec<f64> = match Cholesky::new(cov.clone()) {
        Some(chol) => {
            let l = chol.l();
            let a = l.transpose() * &omega * &l;
            a.singular_values().iter().copied().collect()
        }
        None => (&omega * cov)
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .collect(),
    };
    moduli.sort_by(f64::total_cmp);
    moduli.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Rounding in `σ` reaches the symplectic eigenvalues amplified by the condition
/// number, so the fixed tolerances are widened to `8 ε κ(σ)` when that is larger.
fn conditioned(base: f64, cov: &Matrix) -> f64 {
    let ev = cov.symmetric_eigenvalues();
    let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| {
        (lo.min(e), hi.max(e))
    });
    if lo > 0.0 {
        base.max(8.0 * f64::EPSILON * hi / lo)
    } else {
        base
    }
}

pub fn physicality_check(state: &GaussianState) -> Physicality {
    let nu = symplectic_eigenvalues(state.cov());
    let positive = Cholesky::new(state.cov().clone()).is_some();
    let physical_tol = conditioned(PHYSICALITY_TOL, state.cov());
    let pure_tol = conditioned(PURITY_TOL, state.cov());
    let class = if !positive || nu.iter().any(|&v| v < 0.5 - physical_tol) {
        PhysicalityClass::Unphysical
    } else if nu.iter().all(|&v| (v - 0.5).abs() <= pure_tol) {
        PhysicalityClass::Pure
    } else {
        PhysicalityClass::Mixed
    };
    Physicality {
        class,
        symplectic_eigenvalues: nu,
    }
}
