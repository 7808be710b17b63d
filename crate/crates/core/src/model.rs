//! The two-phase Mach-Zehnder statistical model.
//!
//! Two equally squeezed vacua (the first one displaced) enter a beam splitter;
//! the upper arm (mode 0) then sees `U_R(λ1)`, a squeezer `S(x, α)` and `U_R(λ2)`.
//! The estimated parameters are `(λ1, λ2)`; everything else is configuration.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gaussian::{
    symmetrize, BeamSplitterConvention, GaussianGate, GaussianState, Matrix, Vector,
};

/// Number of estimated parameters.
pub const N_PARAMS: usize = 2;

/// Gate indices (in [`build_mz_model`]) of the rotations carrying `λ1` and `λ2`.
pub const PHASE_GATES: [usize; N_PARAMS] = [4, 6];

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Full configuration of the interferometer. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// Input squeezing of both modes.
    pub r: f64,
    /// Displacement amplitude of the first input.
    pub q: f64,
    #[serde(default)]
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    /// Squeezing of the intermediate squeezer.
    pub x: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub lambda1: f64,
    #[serde(default)]
    pub lambda2: f64,
    #[serde(default)]
    pub beam_splitter: BeamSplitterConvention,
}

impl ModelConfig {
    /// Squeezings `r` and `x`; every other field zero.
    pub fn new(r: f64, x: f64) -> Self {
        Self {
            r,
            q: 0.0,
            beta: 0.0,
            theta: 0.0,
            phi: 0.0,
            x,
            alpha: 0.0,
            lambda1: 0.0,
            lambda2: 0.0,
            beam_splitter: BeamSplitterConvention::default(),
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lambdas(mut self, lambda1: f64, lambda2: f64) -> Self {
        self.lambda1 = lambda1;
        self.lambda2 = lambda2;
        self
    }

    /// Sets `α` so that `γ = α + 2λ1` takes the given value at the current `λ1`.
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.alpha = gamma - 2.0 * self.lambda1;
        self
    }

    pub fn with_beam_splitter(mut self, convention: BeamSplitterConvention) -> Self {
        self.beam_splitter = convention;
        self
    }

    /// The combination `α + 2λ1` through which `α` and `λ1` enter the QFI.
    pub fn gamma(&self) -> f64 {
        self.alpha + 2.0 * self.lambda1
    }

    pub fn lambdas(&self) -> [f64; N_PARAMS] {
        [self.lambda1, self.lambda2]
    }

    pub(crate) fn set_lambda(&mut self, index: usize, value: f64) {
        match index {
            0 => self.lambda1 = value,
            1 => self.lambda2 = value,
            _ => unreachable!("two estimated parameters"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("r", self.r),
            ("q", self.q),
            ("beta", self.beta),
            ("theta", self.theta),
            ("phi", self.phi),
            ("x", self.x),
            ("alpha", self.alpha),
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(invalid(format!("{name} must be finite, got {value}")));
            }
        }
        for (name, value) in [("r", self.r), ("x", self.x), ("q", self.q)] {
            if value < 0.0 {
                return Err(invalid(format!("{name} must be non-negative, got {value}")));
            }
        }
        Ok(())
    }
}

/// A model state together with its derivatives with respect to `(λ1, λ2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelJet {
    pub state: GaussianState,
    pub dcov: Vec<Matrix>,
    pub dmean: Vec<Vector>,
}

impl ModelJet {
    pub fn n_params(&self) -> usize {
        self.dcov.len()
    }

    /// Re-expresses the jet in new parameters `μ`, given `jacobian[(j, a)] = ∂λ_j/∂μ_a`.
    pub fn reparametrize(&self, jacobian: &Matrix) -> Result<ModelJet> {
        let n = self.n_params();
        if jacobian.nrows() != n {
            return Err(invalid(format!(
                "jacobian has {} rows, expected {n}",
                jacobian.nrows()
            )));
        }
        let dim = self.state.mean().len();
        let mut dcov = Vec::with_capacity(jacobian.ncols());
        let mut dmean = Vec::with_capacity(jacobian.ncols());
        for a in 0..jacobian.ncols() {
            let mut c = Matrix::zeros(dim, dim);
            let mut m = Vector::zeros(dim);
            for j in 0..n {
                c += &self.dcov[j] * jacobian[(j, a)];
                m += &self.dmean[j] * jacobian[(j, a)];
            }
            dcov.push(c);
            dmean.push(m);
        }
        Ok(ModelJet {
            state: self.state.clone(),
            dcov,
            dmean,
        })
    }
}

/// Gate sequence of the interferometer, applied to two vacuum modes.
pub fn build_mz_model(config: &ModelConfig) -> Result<Vec<GaussianGate>> {
    config.validate()?;
    Ok(vec![
        GaussianGate::Squeezer {
            mode: 0,
            magnitude: config.r,
            angle: 0.0,
        },
        GaussianGate::Squeezer {
            mode: 1,
            magnitude: config.r,
            angle: 0.0,
        },
        GaussianGate::Displacement {
            mode: 0,
            amplitude: config.q,
            angle: config.beta,
        },
        GaussianGate::BeamSplitter {
            modes: (0, 1),
            mix: config.phi,
            phase: config.theta,
            convention: config.beam_splitter,
        },
        GaussianGate::PhaseRotation {
            mode: 0,
            angle: config.lambda1,
        },
        GaussianGate::Squeezer {
            mode: 0,
            magnitude: config.x,
            angle: config.alpha,
        },
        GaussianGate::PhaseRotation {
            mode: 0,
            angle: config.lambda2,
        },
    ])
}

pub fn evaluate_state(config: &ModelConfig) -> Result<GaussianState> {
    let gates = build_mz_model(config)?;
    crate::gaussian::apply_circuit(&GaussianState::vacuum(2)?, &gates)
}

/// Propagates `(σ, d)` and their derivatives through a circuit in which the gates
/// at `bound` carry the parameters. Each bound gate must be a phase rotation.
pub fn circuit_jet(
    initial: &GaussianState,
    gates: &[GaussianGate],
    bound: &[usize],
) -> Result<ModelJet> {
    let modes = initial.modes();
    let dim = 2 * modes;
    let mut state = initial.clone();
    let mut dcov = vec![Matrix::zeros(dim, dim); bound.len()];
    let mut dmean = vec![Vector::zeros(dim); bound.len()];
    for (index, gate) in gates.iter().enumerate() {
        let (s, shift) = gate.symplectic(modes)?;
        let st = s.transpose();
        for (j, &at) in bound.iter().enumerate() {
            if at == index {
                let ds = gate.angle_derivative(modes)?;
                let left = &ds * state.cov() * &st;
                dcov[j] = &left + left.transpose();
                dmean[j] = &ds * state.mean();
            } else if at < index {
                dcov[j] = symmetrize(&s * &dcov[j] * &st);
                dmean[j] = &s * &dmean[j];
            }
        }
        state = state.transform(&s, &shift);
    }
    if let Some(&missing) = bound.iter().find(|&&b| b >= gates.len()) {
        return Err(invalid(format!("bound gate index {missing} out of range")));
    }
    Ok(ModelJet { state, dcov, dmean })
}

/// State and exact derivatives with respect to `(λ1, λ2)`.
pub fn jacobian_analytic(config: &ModelConfig) -> Result<ModelJet> {
    let gates = build_mz_model(config)?;
    circuit_jet(&GaussianState::vacuum(2)?, &gates, &PHASE_GATES)
}

/// Central finite differences of the model moments with respect to `(λ1, λ2)`.
pub fn jacobian_fd(config: &ModelConfig, step: f64) -> Result<ModelJet> {
    if !(1e-8..=1e-3).contains(&step) {
        return Err(invalid(format!(
            "finite-difference step {step} outside [1e-8, 1e-3]"
        )));
    }
    let state = evaluate_state(config)?;
    let mut dcov = Vec::with_capacity(N_PARAMS);
    let mut dmean = Vec::with_capacity(N_PARAMS);
    for j in 0..N_PARAMS {
        let base = config.lambdas()[j];
        let mut plus = *config;
        plus.set_lambda(j, base + step);
        let mut minus = *config;
        minus.set_lambda(j, base - step);
        let (sp, sm) = (evaluate_state(&plus)?, evaluate_state(&minus)?);
        dcov.push((sp.cov() - sm.cov()) / (2.0 * step));
        dmean.push((sp.mean() - sm.mean()) / (2.0 * step));
    }
    Ok(ModelJet { state, dcov, dmean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::PhysicalityClass;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn max_diff(a: &ModelJet, b: &ModelJet) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..a.n_params() {
            worst = worst.max((&a.dcov[j] - &b.dcov[j]).amax());
            worst = worst.max((&a.dmean[j] - &b.dmean[j]).amax());
        }
        worst
    }

    fn generic() -> ModelConfig {
        ModelConfig::new(0.6, 0.4)
            .with_q(0.8)
            .with_beta(0.3)
            .with_theta(1.1)
            .with_phi(0.7)
            .with_alpha(-0.4)
            .with_lambdas(0.2, -0.9)
    }

    #[test]
    fn gate_sequence_layout() {
        let gates = build_mz_model(&generic()).unwrap();
        assert_eq!(gates.len(), 7);
        for &k in &PHASE_GATES {
            assert!(matches!(
                gates[k],
                GaussianGate::PhaseRotation { mode: 0, .. }
            ));
        }
        assert!(matches!(
            gates[3],
            GaussianGate::BeamSplitter { modes: (0, 1), .. }
        ));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(build_mz_model(&ModelConfig::new(-0.1, 0.0)).is_err());
        assert!(build_mz_model(&ModelConfig::new(0.1, 0.0).with_q(-1.0)).is_err());
        assert!(build_mz_model(&ModelConfig::new(0.1, 0.0).with_theta(f64::INFINITY)).is_err());
        let msg = ModelConfig::new(0.1, -2.0)
            .validate()
            .unwrap_err()
            .to_string();
        assert!(msg.contains('x'), "{msg}");
    }

    #[test]
    fn no_squeezing_no_displacement_gives_vacuum() {
        for lam in [(0.0, 0.0), (0.4, -1.3), (2.0, 5.0)] {
            let cfg = ModelConfig::new(0.0, 0.0)
                .with_theta(0.8)
                .with_phi(0.3)
                .with_lambdas(lam.0, lam.1);
            let s = evaluate_state(&cfg).unwrap();
            assert!((s.cov() - Matrix::identity(4, 4) * 0.5).amax() < 1e-15);
            assert_eq!(s.mean(), &Vector::zeros(4));
        }
    }

    #[test]
    fn real_beam_splitter_gives_squeezed_product() {
        let r = 0.5;
        let s = evaluate_state(&ModelConfig::new(r, 0.0).with_phi(0.3)).unwrap();
        let mut expected = Matrix::zeros(4, 4);
        for k in 0..2 {
            expected[(2 * k, 2 * k)] = 0.5 * (2.0 * r).exp();
            expected[(2 * k + 1, 2 * k + 1)] = 0.5 * (-2.0 * r).exp();
        }
        assert!((s.cov() - expected).amax() < 1e-14);
    }

    #[test]
    fn balanced_quadrature_splitter_makes_two_mode_correlations() {
        let r = 0.5;
        let s = evaluate_state(
            &ModelConfig::new(r, 0.0)
                .with_theta(FRAC_PI_2)
                .with_phi(FRAC_PI_4),
        )
        .unwrap();
        let c = s.cov();
        // two-mode squeezed vacuum up to a local quarter turn: locally thermal,
        // correlations only between q1-p2 and p1-q2
        let sh = 0.5 * (2.0 * r).sinh();
        let ch = 0.5 * (2.0 * r).cosh();
        for k in 0..4 {
            assert!((c[(k, k)] - ch).abs() < 1e-14);
        }
        assert!((c[(0, 3)] + sh).abs() < 1e-14 && (c[(1, 2)] + sh).abs() < 1e-14);
        assert!(c[(0, 2)].abs() < 1e-14 && c[(1, 3)].abs() < 1e-14 && c[(0, 1)].abs() < 1e-14);
    }

    #[test]
    fn output_is_pure_with_unit_determinant() {
        let s = evaluate_state(&generic()).unwrap();
        assert!((s.cov().determinant() - 1.0 / 16.0).abs() < 1e-9 / 16.0);
        assert_eq!(s.physicality().class, PhysicalityClass::Pure);
    }

    #[test]
    fn periodic_in_lambda1() {
        let cfg = generic();
        let a = evaluate_state(&cfg).unwrap();
        let b = evaluate_state(&cfg.with_lambdas(cfg.lambda1 + 2.0 * PI, cfg.lambda2)).unwrap();
        assert!((a.cov() - b.cov()).amax() < 1e-12);
        assert!((a.mean() - b.mean()).amax() < 1e-12);
    }

    #[test]
    fn baseline_derivatives_coincide() {
        let cfg = ModelConfig::new(0.7, 0.0)
            .with_q(0.5)
            .with_theta(0.4)
            .with_phi(0.9);
        let jet = jacobian_analytic(&cfg).unwrap();
        assert!((&jet.dcov[0] - &jet.dcov[1]).amax() < 1e-13);
        assert!((&jet.dmean[0] - &jet.dmean[1]).amax() < 1e-13);
    }

    #[test]
    fn vacuum_has_no_derivatives() {
        let jet = jacobian_analytic(&ModelConfig::new(0.0, 0.0).with_phi(0.4)).unwrap();
        for j in 0..2 {
            assert!(jet.dcov[j].amax() < 1e-15);
            assert!(jet.dmean[j].amax() < 1e-15);
        }
    }

    #[test]
    fn analytic_matches_finite_differences() {
        let cfg = generic();
        let exact = jacobian_analytic(&cfg).unwrap();
        let fd = jacobian_fd(&cfg, DEFAULT_FD_STEP).unwrap();
        assert!(max_diff(&exact, &fd) < 1e-6);
        for j in 0..2 {
            assert!((&exact.dcov[j] - exact.dcov[j].transpose()).amax() < 1e-10);
            assert!((&fd.dcov[j] - fd.dcov[j].transpose()).amax() < 1e-10);
        }
    }

    #[test]
    fn finite_difference_step_is_range_checked() {
        assert!(jacobian_fd(&generic(), 1e-2).is_err());
        assert!(jacobian_fd(&generic(), 1e-9).is_err());
    }

    #[test]
    fn central_differences_converge_quadratically() {
        let cfg = generic();
        let exact = jacobian_analytic(&cfg).unwrap();
        let coarse = max_diff(&exact, &jacobian_fd(&cfg, 1e-3).unwrap());
        let fine = max_diff(&exact, &jacobian_fd(&cfg, 5e-4).unwrap());
        let ratio = coarse / fine;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn reparametrized_jet_matches_direct_differentiation() {
        // u = λ1 + λ2, v = λ1 - λ2  =>  λ1 = (u+v)/2, λ2 = (u-v)/2
        let cfg = generic();
        let jac = Matrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, -0.5]);
        let chained = jacobian_analytic(&cfg)
            .unwrap()
            .reparametrize(&jac)
            .unwrap();
        let h = 1e-5;
        let shifted = |du: f64, dv: f64| {
            let c = cfg.with_lambdas(cfg.lambda1 + 0.5 * (du + dv), cfg.lambda2 + 0.5 * (du - dv));
            evaluate_state(&c).unwrap()
        };
        let directions = [(h, 0.0), (0.0, h)];
        for (a, &(du, dv)) in directions.iter().enumerate() {
            let (p, m) = (shifted(du, dv), shifted(-du, -dv));
            let dcov = (p.cov() - m.cov()) / (2.0 * h);
            let dmean = (p.mean() - m.mean()) / (2.0 * h);
            assert!((&chained.dcov[a] - dcov).amax() < 1e-6);
            assert!((&chained.dmean[a] - dmean).amax() < 1e-6);
        }
    }
}
