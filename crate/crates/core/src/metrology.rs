//! Multi-parameter metrology of pure Gaussian models.
//!
//! For a pure state with covariance `σ` and mean `d` the QFI matrix is
//!
//! ```text
//! Q_jk = ¼ Tr[(σ⁻¹ ∂_j σ)(σ⁻¹ ∂_k σ)] + 2 ∂_j dᵀ σ⁻¹ ∂_k d
//! ```
//!
//! and the Uhlmann curvature is an antisymmetric matrix built from the same
//! derivatives, see [`CurvatureConvention`].

use nalgebra::{Cholesky, Dyn, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{symplectic_form, Matrix, PhysicalityClass};
use crate::model::ModelJet;

/// Smallest QFI eigenvalue for which `Q` counts as invertible.
pub const INVERTIBILITY_FLOOR: f64 = 1e-12;

/// Relative factor for the default sloppiness threshold (`factor · tr Q`).
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct QfiMatrix(Matrix);

impl QfiMatrix {
    /// Wraps a symmetric matrix.
    pub fn new(entries: Matrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(invalid("QFI matrix must be square"));
        }
        let scale = entries.amax().max(1.0);
        if (&entries - entries.transpose()).amax() > 1e-10 * scale {
            return Err(invalid("QFI matrix must be symmetric"));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &Matrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.0.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `Jᵀ Q J`, the QFI in parameters `μ` with `J[(j, a)] = ∂λ_j/∂μ_a`.
    pub fn congruence(&self, jacobian: &Matrix) -> QfiMatrix {
        let m = jacobian.transpose() * &self.0 * jacobian;
        QfiMatrix((&m + m.transpose()) * 0.5)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UhlmannMatrix(Matrix);

impl UhlmannMatrix {
    pub fn new(entries: Matrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(invalid("Uhlmann matrix must be square"));
        }
        let scale = entries.amax().max(1.0);
        if (&entries + entries.transpose()).amax() > 1e-10 * scale {
            return Err(invalid("Uhlmann matrix must be antisymmetric"));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &Matrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.0.amax() <= tol
    }
}

/// Normalisation of the Gaussian Uhlmann-curvature formula
///
/// ```text
/// U_ij = a Tr[Ωσ(Ω∂_iσ Ω∂_jσ − Ω∂_jσ Ω∂_iσ)] + b ∂_i dᵀ σ⁻¹ Ω σ⁻¹ ∂_j d
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureConvention {
    /// `(a, b) = (1, -1)`: consistent with the QFI formula above and with the mean
    /// scale of [`crate::gaussian::GaussianGate::Displacement`], so that
    /// `Q + iU` is positive semidefinite and `0 ≤ R ≤ 1`.
    #[default]
    Normalized,
    /// `(a, b) = (1/4, 4)`, the coefficients as usually printed for the `I/2`
    /// vacuum convention. Kept for audits; `R` can exceed one with it.
    Printed,
}

impl CurvatureConvention {
    fn coefficients(self) -> (f64, f64) {
        match self {
            CurvatureConvention::Normalized => (1.0, -1.0),
            CurvatureConvention::Printed => (0.25, 4.0),
        }
    }
}

fn pure_cholesky(jet: &ModelJet) -> Result<Cholesky<f64, Dyn>> {
    let class = jet.state.physicality().class;
    if class != PhysicalityClass::Pure {
        return Err(Error::PreconditionViolation(format!(
            "Gaussian QFI/curvature formulas need a pure state, got {class:?}"
        )));
    }
    Cholesky::new(jet.state.cov().clone())
        .ok_or_else(|| Error::NumericFailure("covariance matrix is singular".into()))
}

pub fn qfi_matrix(jet: &ModelJet) -> Result<QfiMatrix> {
    let chol = pure_cholesky(jet)?;
    let n = jet.n_params();
    let sdc: Vec<Matrix> = jet.dcov.iter().map(|dc| chol.solve(dc)).collect();
    let sdm: Vec<_> = jet.dmean.iter().map(|dm| chol.solve(dm)).collect();
    let mut q = Matrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let cov_term = 0.25 * (&sdc[j] * &sdc[k]).trace();
            let mean_term = 2.0 * jet.dmean[j].dot(&sdm[k]);
            q[(j, k)] = cov_term + mean_term;
            q[(k, j)] = q[(j, k)];
        }
    }
    QfiMatrix::new(q)
}

pub fn uhlmann_matrix(jet: &ModelJet) -> Result<UhlmannMatrix> {
    uhlmann_matrix_with(jet, CurvatureConvention::default())
}

pub fn uhlmann_matrix_with(
    jet: &ModelJet,
    convention: CurvatureConvention,
) -> Result<UhlmannMatrix> {
    let chol = pure_cholesky(jet)?;
    let (a, b) = convention.coefficients();
    let n = jet.n_params();
    let omega = symplectic_form(jet.state.modes());
    let omega_sigma = &omega * jet.state.cov();
    let omega_d: Vec<Matrix> = jet.dcov.iter().map(|dc| &omega * dc).collect();
    let sdm: Vec<_> = jet.dmean.iter().map(|dm| chol.solve(dm)).collect();
    let mut u = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let commutator = &omega_d[i] * &omega_d[j] - &omega_d[j] * &omega_d[i];
            let cov_term = (&omega_sigma * commutator).trace();
            let mean_term = sdm[i].dot(&(&omega * &sdm[j]));
            u[(i, j)] = a * cov_term + b * mean_term;
            u[(j, i)] = -u[(i, j)];
        }
    }
    UhlmannMatrix::new(u)
}

fn require_invertible(q: &QfiMatrix) -> Result<()> {
    let min = q.eigenvalues().last().copied().unwrap_or(0.0);
    if min > INVERTIBILITY_FLOOR {
        Ok(())
    } else {
        Err(Error::SloppyModel {
            min_eigenvalue: min,
            threshold: INVERTIBILITY_FLOOR,
        })
    }
}

fn check_pair(q: &QfiMatrix, u: &UhlmannMatrix) -> Result<()> {
    if q.n() != u.n() {
        return Err(invalid(format!(
            "QFI is {}x{} but curvature is {}x{}",
            q.n(),
            q.n(),
            u.n(),
            u.n()
        )));
    }
    Ok(())
}

/// `R = ‖i Q⁻¹ U‖∞`, the largest eigenvalue modulus of `Q⁻¹ U`.
pub fn quantumness_general(q: &QfiMatrix, u: &UhlmannMatrix) -> Result<f64> {
    check_pair(q, u)?;
    require_invertible(q)?;
    let chol = Cholesky::new(q.entries().clone())
        .ok_or_else(|| Error::NumericFailure("QFI matrix is not positive definite".into()))?;
    let m = chol.solve(u.entries());
    let r = m
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok(r.max(0.0))
}

/// `R = sqrt(det U / det Q)` for two parameters.
pub fn quantumness_two_param(q: &QfiMatrix, u: &UhlmannMatrix) -> Result<f64> {
    check_pair(q, u)?;
    if q.n() != 2 {
        return Err(invalid(format!(
            "two-parameter formula needs n = 2, got {}",
            q.n()
        )));
    }
    require_invertible(q)?;
    let det_q = q.determinant();
    if det_q <= 0.0 {
        return Err(Error::SloppyModel {
            min_eigenvalue: q.eigenvalues()[1],
            threshold: INVERTIBILITY_FLOOR,
        });
    }
    Ok(u.get(0, 1).abs() / det_q.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarBounds {
    pub weight: Vec<Vec<f64>>,
    pub repetitions: u32,
    /// `Tr[W Q⁻¹] / M`.
    pub c_q: f64,
    /// `(1 + R) c_q`, an upper bound on the Holevo bound.
    pub bracket_upper: f64,
    pub quantumness: f64,
}

pub(crate) fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter()
        .map(|row| row.iter().copied().collect())
        .collect()
}

pub fn scalar_crb(
    q: &QfiMatrix,
    u: &UhlmannMatrix,
    weight: &Matrix,
    repetitions: u32,
) -> Result<ScalarBounds> {
    if repetitions == 0 {
        return Err(invalid("repetitions must be at least 1"));
    }
    if weight.nrows() != q.n() || weight.ncols() != q.n() {
        return Err(invalid(format!("weight matrix must be {0}x{0}", q.n())));
    }
    let scale = weight.amax().max(1.0);
    if (weight - weight.transpose()).amax() > 1e-12 * scale {
        return Err(invalid("weight matrix must be symmetric"));
    }
    if weight
        .symmetric_eigenvalues()
        .iter()
        .any(|&e| e < -1e-12 * scale)
    {
        return Err(invalid("weight matrix must be positive semidefinite"));
    }
    let r = quantumness_general(q, u)?;
    let chol = Cholesky::new(q.entries().clone())
        .ok_or_else(|| Error::NumericFailure("QFI matrix is not positive definite".into()))?;
    let c_q = ((weight * chol.inverse()).trace() / f64::from(repetitions)).max(0.0);
    Ok(ScalarBounds {
        weight: matrix_rows(weight),
        repetitions,
        c_q,
        bracket_upper: (1.0 + r) * c_q,
        quantumness: r,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SloppinessReport {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub determinant: f64,
    pub threshold: f64,
    pub sloppy: bool,
    /// Parameter-space directions whose eigenvalue is below the threshold.
    pub null_directions: Vec<Vec<f64>>,
}

/// `1e-8 · tr Q`, or `1e-8` for a vanishing trace.
pub fn default_threshold(q: &QfiMatrix) -> f64 {
    let tr = q.trace();
    if tr > 0.0 {
        DEFAULT_RELATIVE_THRESHOLD * tr
    } else {
        DEFAULT_RELATIVE_THRESHOLD
    }
}

pub fn sloppiness_report(q: &QfiMatrix, threshold: Option<f64>) -> Result<SloppinessReport> {
    let threshold = threshold.unwrap_or_else(|| default_threshold(q));
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(invalid(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let eig = SymmetricEigen::new(q.entries().clone());
    let mut order: Vec<usize> = (0..q.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| {
            let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            // fix the sign: first significant component positive
            if let Some(first) = v.iter().copied().find(|c| c.abs() > 1e-12) {
                if first < 0.0 {
                    v.iter_mut().for_each(|c| *c = -*c);
                }
            }
            v
        })
        .collect();
    let null_directions = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .filter(|(ev, _)| **ev < threshold)
        .map(|(_, v)| v.clone())
        .collect::<Vec<_>>();
    Ok(SloppinessReport {
        determinant: q.determinant(),
        sloppy: !null_directions.is_empty(),
        eigenvalues,
        eigenvectors,
        threshold,
        null_directions,
    })
}

/// Everything computed for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MetrologyReport {
    pub qfi: QfiMatrix,
    pub uhlmann: UhlmannMatrix,
    pub sloppiness: SloppinessReport,
    /// `(R from the spectral norm, R from the two-parameter determinant formula)`,
    /// or the refusal when the model is sloppy.
    pub quantumness: Result<(f64, f64)>,
    pub bounds: Result<ScalarBounds>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub threshold: Option<f64>,
    pub weight: Matrix,
    pub repetitions: u32,
    pub convention: CurvatureConvention,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            threshold: None,
            weight: Matrix::identity(2, 2),
            repetitions: 1,
            convention: CurvatureConvention::default(),
        }
    }
}

/// Computes Q, U and the sloppiness report; `R` and the scalar bounds are refused
/// with [`Error::SloppyModel`] whenever the report classifies the model as sloppy.
pub fn metrology_report(jet: &ModelJet, options: &ReportOptions) -> Result<MetrologyReport> {
    let qfi = qfi_matrix(jet)?;
    let uhlmann = uhlmann_matrix_with(jet, options.convention)?;
    let sloppiness = sloppiness_report(&qfi, options.threshold)?;
    let refusal = || Error::SloppyModel {
        min_eigenvalue: sloppiness.eigenvalues.last().copied().unwrap_or(0.0),
        threshold: sloppiness.threshold,
    };
    let (quantumness, bounds) = if sloppiness.sloppy {
        (Err(refusal()), Err(refusal()))
    } else {
        let general = quantumness_general(&qfi, &uhlmann);
        let pair = general.and_then(|g| Ok((g, quantumness_two_param(&qfi, &uhlmann)?)));
        let bounds = scalar_crb(&qfi, &uhlmann, &options.weight, options.repetitions);
        (pair, bounds)
    };
    Ok(MetrologyReport {
        qfi,
        uhlmann,
        sloppiness,
        quantumness,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{jacobian_analytic, ModelConfig};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_row_slice(2, 2, &[a, b, c, d])
    }

    #[test]
    fn squeezed_vacuum_phase_qfi_is_twice_sinh_squared() {
        // (1/4)Tr[(σ⁻¹∂σ)²] for a rotated squeezed vacuum, by hand: 2 sinh²(2r)
        let jet = jacobian_analytic(&ModelConfig::new(0.5, 0.0)).unwrap();
        let q = qfi_matrix(&jet).unwrap();
        let expected = 2.0 * 1f64.sinh().powi(2);
        assert_relative_eq!(q.get(0, 0), expected, max_relative = 1e-12);
        assert_relative_eq!(q.get(0, 0), 2.762_195_7, epsilon = 1e-6);
    }

    #[test]
    fn baseline_qfi_is_rank_one() {
        let cfg = ModelConfig::new(0.8, 0.0)
            .with_q(0.6)
            .with_theta(0.3)
            .with_phi(1.0)
            .with_beta(0.2);
        let q = qfi_matrix(&jacobian_analytic(&cfg).unwrap()).unwrap();
        let v = q.get(0, 0);
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            assert_relative_eq!(q.get(i, j), v, max_relative = 1e-12);
        }
        assert!(q.determinant().abs() < 1e-10);
        let u = uhlmann_matrix(&jacobian_analytic(&cfg).unwrap()).unwrap();
        assert!(u.is_zero(1e-10));
    }

    #[test]
    fn vacuum_gives_zero_qfi() {
        let q = qfi_matrix(&jacobian_analytic(&ModelConfig::new(0.0, 0.0)).unwrap()).unwrap();
        assert!(q.entries().amax() < 1e-15);
        let report = sloppiness_report(&q, None).unwrap();
        assert!(report.sloppy);
    }

    #[test]
    fn optimal_configuration_is_weakly_compatible() {
        let cfg = ModelConfig::new(0.5, 0.5)
            .with_theta(FRAC_PI_2)
            .with_phi(FRAC_PI_4)
            .with_alpha(0.7)
            .with_lambdas(0.3, -0.2);
        let jet = jacobian_analytic(&cfg).unwrap();
        let u = uhlmann_matrix(&jet).unwrap();
        assert!(u.get(0, 1).abs() < 1e-10);
        let q = qfi_matrix(&jet).unwrap();
        assert!(quantumness_general(&q, &u).unwrap() < 1e-10);
    }

    #[test]
    fn curvature_is_antisymmetric() {
        let cfg = ModelConfig::new(0.4, 0.9)
            .with_q(0.3)
            .with_theta(0.5)
            .with_phi(1.2)
            .with_alpha(0.1);
        for conv in [
            CurvatureConvention::Normalized,
            CurvatureConvention::Printed,
        ] {
            let u = uhlmann_matrix_with(&jacobian_analytic(&cfg).unwrap(), conv).unwrap();
            assert_eq!(u.get(0, 1), -u.get(1, 0));
            assert_eq!(u.get(0, 0), 0.0);
        }
    }

    #[test]
    fn mixed_state_jet_is_refused() {
        let mut jet = jacobian_analytic(&ModelConfig::new(0.3, 0.3)).unwrap();
        let mixed =
            crate::gaussian::GaussianState::new(jet.state.mean().clone(), Matrix::identity(4, 4))
                .unwrap();
        jet.state = mixed;
        assert!(matches!(
            qfi_matrix(&jet),
            Err(Error::PreconditionViolation(_))
        ));
        assert!(matches!(
            uhlmann_matrix(&jet),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn quantumness_hand_example() {
        let q = QfiMatrix::new(m2(2.0, 0.0, 0.0, 2.0)).unwrap();
        let u = UhlmannMatrix::new(m2(0.0, 1.0, -1.0, 0.0)).unwrap();
        assert_relative_eq!(quantumness_general(&q, &u).unwrap(), 0.5, epsilon = 1e-14);
        assert_relative_eq!(quantumness_two_param(&q, &u).unwrap(), 0.5, epsilon = 1e-14);
        let zero = UhlmannMatrix::new(Matrix::zeros(2, 2)).unwrap();
        assert_eq!(quantumness_general(&q, &zero).unwrap(), 0.0);
        assert_eq!(quantumness_two_param(&q, &zero).unwrap(), 0.0);
    }

    #[test]
    fn quantumness_refuses_singular_qfi() {
        let q = QfiMatrix::new(m2(1.0, 1.0, 1.0, 1.0)).unwrap();
        let u = UhlmannMatrix::new(Matrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            quantumness_general(&q, &u),
            Err(Error::SloppyModel { .. })
        ));
        assert!(matches!(
            quantumness_two_param(&q, &u),
            Err(Error::SloppyModel { .. })
        ));
        let w = Matrix::identity(2, 2);
        assert!(matches!(
            scalar_crb(&q, &u, &w, 1),
            Err(Error::SloppyModel { .. })
        ));
    }

    #[test]
    fn scalar_bound_arithmetic() {
        let q = QfiMatrix::new(m2(4.0, 0.0, 0.0, 1.0)).unwrap();
        let zero = UhlmannMatrix::new(Matrix::zeros(2, 2)).unwrap();
        let b = scalar_crb(&q, &zero, &Matrix::identity(2, 2), 10).unwrap();
        assert_relative_eq!(b.c_q, 0.125, epsilon = 1e-15);
        assert_eq!(b.bracket_upper, b.c_q);
        let b0 = scalar_crb(&q, &zero, &Matrix::zeros(2, 2), 3).unwrap();
        assert_eq!(b0.c_q, 0.0);
        let u = UhlmannMatrix::new(m2(0.0, 1.0, -1.0, 0.0)).unwrap();
        let b1 = scalar_crb(&q, &u, &Matrix::identity(2, 2), 1).unwrap();
        assert!(b1.bracket_upper >= b1.c_q);
        assert_relative_eq!(b1.bracket_upper, 1.25 * 1.5, epsilon = 1e-12);
        assert!(scalar_crb(&q, &zero, &m2(1.0, 0.0, 0.0, -1.0), 1).is_err());
        assert!(scalar_crb(&q, &zero, &Matrix::identity(2, 2), 0).is_err());
    }

    #[test]
    fn sloppiness_classification() {
        // eigenvalues {5, 1e-14} along (1,1)/√2 and (1,-1)/√2
        let (a, b) = (5.0, 1e-14);
        let q = QfiMatrix::new(m2(
            (a + b) / 2.0,
            (a - b) / 2.0,
            (a - b) / 2.0,
            (a + b) / 2.0,
        ))
        .unwrap();
        let rep = sloppiness_report(&q, Some(1e-8)).unwrap();
        assert!(rep.sloppy);
        assert_eq!(rep.null_directions.len(), 1);
        let nd = &rep.null_directions[0];
        assert_relative_eq!(nd[0], 1.0 / SQRT_2, epsilon = 1e-9);
        assert_relative_eq!(nd[1], -1.0 / SQRT_2, epsilon = 1e-9);
        let product: f64 = rep.eigenvalues.iter().product();
        assert!((rep.determinant - product).abs() <= 1e-9 * product.abs().max(1e-300) + 1e-15);

        let id = QfiMatrix::new(Matrix::identity(2, 2)).unwrap();
        let rep = sloppiness_report(&id, Some(1e-8)).unwrap();
        assert!(!rep.sloppy);
        assert!(rep.null_directions.is_empty());
        assert!(sloppiness_report(&id, Some(0.0)).is_err());
    }

    #[test]
    fn report_refuses_quantumness_for_sloppy_models() {
        let jet = jacobian_analytic(&ModelConfig::new(0.5, 0.0).with_phi(0.2)).unwrap();
        let rep = metrology_report(&jet, &ReportOptions::default()).unwrap();
        assert!(rep.sloppiness.sloppy);
        assert!(matches!(rep.quantumness, Err(Error::SloppyModel { .. })));
        assert!(matches!(rep.bounds, Err(Error::SloppyModel { .. })));

        let jet =
            jacobian_analytic(&ModelConfig::new(0.5, 0.5).with_theta(0.4).with_alpha(0.7)).unwrap();
        let rep = metrology_report(&jet, &ReportOptions::default()).unwrap();
        let (g, t) = rep.quantumness.unwrap();
        assert_relative_eq!(g, t, epsilon = 1e-9);
    }
}
