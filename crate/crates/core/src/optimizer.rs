//! Grid scans and Nelder-Mead refinement over interferometer configurations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::closed_forms::{self, ClosedFormInputs, Landmarks};
use crate::error::{invalid, Error, Result};
use crate::gaussian::Matrix;
use crate::metrology::{
    qfi_matrix, quantumness_two_param, scalar_crb, sloppiness_report, uhlmann_matrix, QfiMatrix,
    UhlmannMatrix,
};
use crate::model::{jacobian_analytic, ModelConfig};

/// Environment variable capping the number of scan threads.
pub const THREADS_ENV: &str = "CV_METROLOGY_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Q11,
    Q22,
    DetQ,
    /// `−R`, so that maximizing drives towards compatibility.
    MinusR,
    /// `1 / Tr[W Q⁻¹]`.
    WeightedCqInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    #[default]
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub kind: ObjectiveKind,
    #[serde(default)]
    pub layer: Layer,
    /// Weight matrix for [`ObjectiveKind::WeightedCqInverse`], row-major 2×2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<Vec<f64>>>,
    /// When set, the objective is the minimum over this many equispaced values of
    /// `γ ∈ [0, 2π)`, i.e. the worst case over the unknown `λ₁`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_case_gamma: Option<usize>,
}

impl Objective {
    pub fn new(kind: ObjectiveKind) -> Self {
        Self {
            kind,
            layer: Layer::default(),
            weight: None,
            worst_case_gamma: None,
        }
    }

    pub fn with_layer(mut self, layer: Layer) -> Self {
        self.layer = layer;
        self
    }

    pub fn with_weight(mut self, weight: [[f64; 2]; 2]) -> Self {
        self.weight = Some(weight.iter().map(|row| row.to_vec()).collect());
        self
    }

    pub fn with_worst_case_gamma(mut self, samples: usize) -> Self {
        self.worst_case_gamma = Some(samples);
        self
    }

    fn weight_matrix(&self) -> Result<Matrix> {
        let rows = self
            .weight
            .as_ref()
            .ok_or_else(|| invalid("weight: required for the weighted_cq_inverse objective"))?;
        if rows.len() != 2 || rows.iter().any(|row| row.len() != 2) {
            return Err(invalid("weight: must be a 2x2 matrix"));
        }
        Ok(Matrix::from_fn(2, 2, |i, j| rows[i][j]))
    }

    pub fn validate(&self) -> Result<()> {
        if self.worst_case_gamma == Some(0) {
            return Err(invalid("worst_case_gamma: needs at least one sample"));
        }
        if self.kind == ObjectiveKind::WeightedCqInverse {
            let w = self.weight_matrix()?;
            if w.iter().any(|v| !v.is_finite()) {
                return Err(invalid("weight: entries must be finite"));
            }
            let scale = w.amax().max(1.0);
            if (&w - w.transpose()).amax() > 1e-12 * scale {
                return Err(invalid("weight: must be symmetric"));
            }
            let ev = w.symmetric_eigenvalues();
            if ev.iter().any(|&e| e < -1e-12 * scale) {
                return Err(invalid("weight: must be positive semidefinite"));
            }
            if ev.iter().all(|&e| e.abs() <= 1e-12 * scale) {
                return Err(invalid("weight: must be nonzero"));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, config: &ModelConfig) -> Result<f64> {
        match self.worst_case_gamma {
            None => self.evaluate_at(config),
            Some(n) => {
                let mut worst = f64::INFINITY;
                for k in 0..n {
                    let gamma = TAU * k as f64 / n as f64;
                    worst = worst.min(self.evaluate_at(&config.with_gamma(gamma))?);
                }
                Ok(worst)
            }
        }
    }

    fn evaluate_at(&self, config: &ModelConfig) -> Result<f64> {
        let (q, u) = matrices(self.layer, config)?;
        match self.kind {
            ObjectiveKind::Q11 => Ok(q.get(0, 0)),
            ObjectiveKind::Q22 => Ok(q.get(1, 1)),
            ObjectiveKind::DetQ => Ok(q.determinant()),
            ObjectiveKind::MinusR => {
                refuse_if_sloppy(&q)?;
                Ok(-quantumness_two_param(&q, &u)?)
            }
            ObjectiveKind::WeightedCqInverse => {
                refuse_if_sloppy(&q)?;
                let bounds = scalar_crb(&q, &u, &self.weight_matrix()?, 1)?;
                if bounds.c_q > 0.0 {
                    Ok(1.0 / bounds.c_q)
                } else {
                    Err(Error::NumericFailure("Tr[W Q^-1] vanished".into()))
                }
            }
        }
    }
}

fn refuse_if_sloppy(q: &QfiMatrix) -> Result<()> {
    let report = sloppiness_report(q, None)?;
    if report.sloppy {
        Err(Error::SloppyModel {
            min_eigenvalue: report.eigenvalues.last().copied().unwrap_or(0.0),
            threshold: report.threshold,
        })
    } else {
        Ok(())
    }
}

fn matrices(layer: Layer, config: &ModelConfig) -> Result<(QfiMatrix, UhlmannMatrix)> {
    config.validate()?;
    match layer {
        Layer::ClosedForm => {
            let p = ClosedFormInputs::from_config(config);
            let q = closed_forms::qfi_closed(&p);
            let u12 = closed_forms::u12_closed(&p);
            Ok((
                QfiMatrix::new(Matrix::from_fn(2, 2, |i, j| q[i][j]))?,
                UhlmannMatrix::new(Matrix::from_row_slice(2, 2, &[0.0, u12, -u12, 0.0]))?,
            ))
        }
        Layer::Numeric => {
            let jet = jacobian_analytic(config)?;
            Ok((qfi_matrix(&jet)?, uhlmann_matrix(&jet)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Theta,
    Phi,
    Beta,
    Gamma,
    Alpha,
    X,
    R,
    Q,
    Lambda1,
    Lambda2,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Theta => "theta",
            Axis::Phi => "phi",
            Axis::Beta => "beta",
            Axis::Gamma => "gamma",
            Axis::Alpha => "alpha",
            Axis::X => "x",
            Axis::R => "r",
            Axis::Q => "q",
            Axis::Lambda1 => "lambda1",
            Axis::Lambda2 => "lambda2",
        }
    }

    pub fn get(self, c: &ModelConfig) -> f64 {
        match self {
            Axis::Theta => c.theta,
            Axis::Phi => c.phi,
            Axis::Beta => c.beta,
            Axis::Gamma => c.gamma(),
            Axis::Alpha => c.alpha,
            Axis::X => c.x,
            Axis::R => c.r,
            Axis::Q => c.q,
            Axis::Lambda1 => c.lambda1,
            Axis::Lambda2 => c.lambda2,
        }
    }

    /// `γ` is set through `α` at fixed `λ₁`.
    pub fn set(self, c: ModelConfig, v: f64) -> ModelConfig {
        match self {
            Axis::Theta => c.with_theta(v),
            Axis::Phi => c.with_phi(v),
            Axis::Beta => c.with_beta(v),
            Axis::Gamma => c.with_gamma(v),
            Axis::Alpha => c.with_alpha(v),
            Axis::X => ModelConfig { x: v, ..c },
            Axis::R => ModelConfig { r: v, ..c },
            Axis::Q => c.with_q(v),
            Axis::Lambda1 => c.with_lambdas(v, c.lambda2),
            Axis::Lambda2 => c.with_lambdas(c.lambda1, v),
        }
    }

    /// Period under which every objective is invariant, if any.
    pub fn period(self) -> Option<f64> {
        match self {
            Axis::Theta | Axis::Beta => Some(PI),
            Axis::Gamma | Axis::Alpha | Axis::Lambda1 | Axis::Lambda2 => Some(TAU),
            Axis::Phi => Some(PI),
            Axis::X | Axis::R | Axis::Q => None,
        }
    }

    /// Maps a value to the fundamental domain: `[0, period)`, and `[0, π/2]` for `φ`
    /// (using `φ → π − φ`).
    pub fn fold(self, v: f64) -> f64 {
        let Some(p) = self.period() else { return v };
        let mut w = v.rem_euclid(p);
        if w >= p {
            w = 0.0;
        }
        if self == Axis::Phi && w > FRAC_PI_2 {
            w = PI - w;
        }
        w
    }

    /// Distance between two values modulo the symmetries used by [`Axis::fold`].
    pub fn distance(self, a: f64, b: f64) -> f64 {
        let (fa, fb) = (self.fold(a), self.fold(b));
        match self.period() {
            None => (a - b).abs(),
            Some(p) => {
                let d = (fa - fb).rem_euclid(p);
                d.min(p - d)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    /// Grid points including both ends.
    pub points: usize,
}

impl AxisSpec {
    pub fn new(axis: Axis, min: f64, max: f64, points: usize) -> Self {
        Self {
            axis,
            min,
            max,
            points,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.points {
            self.max
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.points - 1) as f64
        }
    }

    fn validate(&self) -> Result<()> {
        let name = self.axis.name();
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(invalid(format!("axes.{name}: range must be finite")));
        }
        if self.min >= self.max {
            return Err(invalid(format!(
                "axes.{name}: empty range [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(invalid(format!("axes.{name}: needs at least 2 points")));
        }
        if matches!(self.axis, Axis::R | Axis::X | Axis::Q) && self.min < 0.0 {
            return Err(invalid(format!("axes.{name}: must be non-negative")));
        }
        Ok(())
    }

    fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.min, self.max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub base: ModelConfig,
    #[serde(default)]
    pub axes: Vec<AxisSpec>,
    #[serde(default = "default_refine")]
    pub refine: bool,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn default_refine() -> bool {
    true
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_max_iterations() -> usize {
    5000
}

impl SearchSpec {
    pub fn new(base: ModelConfig, axes: Vec<AxisSpec>) -> Self {
        Self {
            base,
            axes,
            refine: default_refine(),
            tolerance: default_tolerance(),
            max_iterations: default_max_iterations(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for (i, a) in self.axes.iter().enumerate() {
            a.validate()?;
            if self.axes[..i].iter().any(|b| b.axis == a.axis) {
                return Err(invalid(format!("axes.{}: listed twice", a.axis.name())));
            }
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(invalid("tolerance: must be positive"));
        }
        Ok(())
    }

    pub fn config_at(&self, point: &[f64]) -> ModelConfig {
        self.axes
            .iter()
            .zip(point)
            .fold(self.base, |c, (a, &v)| a.axis.set(c, v))
    }

    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|a| a.points).product()
    }

    fn grid_point(&self, mut index: usize) -> Vec<f64> {
        let mut point = vec![0.0; self.axes.len()];
        for (slot, a) in point.iter_mut().zip(&self.axes).rev() {
            *slot = a.value(index % a.points);
            index /= a.points;
        }
        point
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub point: Vec<f64>,
    pub value: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub axes: Vec<Axis>,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    /// Row with the largest value; among values within a relative `1e-12` of the
    /// maximum the lexicographically smallest point wins.
    pub fn best(&self) -> Option<&ScanRow> {
        let max = self
            .rows
            .iter()
            .filter_map(|r| r.value)
            .fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return None;
        }
        let tol = 1e-12 * max.abs().max(1.0);
        self.rows
            .iter()
            .filter(|r| r.value.is_some_and(|v| v >= max - tol))
            .min_by(|a, b| {
                a.point
                    .iter()
                    .zip(&b.point)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    }
}

/// Thread count from [`THREADS_ENV`]; `None` when unset.
pub fn thread_limit() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(invalid(format!("{THREADS_ENV}: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(invalid(format!(
                "{THREADS_ENV}: expected a positive integer, got {s:?}"
            ))),
        },
    }
}

/// Evaluates `objective` on the Cartesian grid of `spec`. Rows are ordered
/// lexicographically by axis index (first axis slowest); failures are recorded
/// in the row.
pub fn grid_scan(spec: &SearchSpec, objective: &Objective) -> Result<ScanTable> {
    spec.validate()?;
    objective.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::NumericFailure(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        (0..spec.grid_size())
            .into_par_iter()
            .map(|index| {
                let point = spec.grid_point(index);
                match objective.evaluate(&spec.config_at(&point)) {
                    Ok(v) => ScanRow {
                        point,
                        value: Some(v),
                        error: None,
                    },
                    Err(e) => ScanRow {
                        point,
                        value: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    Ok(ScanTable {
        axes: spec.axes.iter().map(|a| a.axis).collect(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub start: Vec<f64>,
    pub start_value: f64,
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// The iteration cap was reached before the simplex shrank below the tolerance.
    pub capped: bool,
}

/// Nelder-Mead ascent from `start` inside the axis ranges of `spec`.
///
/// Stops when the simplex diameter drops below `tolerance` or after
/// `spec.max_iterations` iterations. Only strict improvements replace the best
/// point, so the result is never worse than the start.
pub fn refine_local(
    spec: &SearchSpec,
    objective: &Objective,
    start: &[f64],
    tolerance: f64,
) -> Result<Refinement> {
    spec.validate()?;
    objective.validate()?;
    if start.len() != spec.axes.len() {
        return Err(invalid(format!(
            "start point has {} coordinates for {} axes",
            start.len(),
            spec.axes.len()
        )));
    }
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(invalid("tolerance: must be positive"));
    }
    for (a, &v) in spec.axes.iter().zip(start) {
        if !(a.min..=a.max).contains(&v) {
            return Err(invalid(format!(
                "start.{}: {v} outside [{}, {}]",
                a.axis.name(),
                a.min,
                a.max
            )));
        }
    }
    let start_value = objective.evaluate(&spec.config_at(start))?;
    let n = start.len();
    let mut result = Refinement {
        start: start.to_vec(),
        start_value,
        point: start.to_vec(),
        value: start_value,
        iterations: 0,
        capped: false,
    };
    if n == 0 {
        return Ok(result);
    }

    // failed evaluations count as -inf so the simplex moves away from them
    let f = |p: &[f64]| {
        objective
            .evaluate(&spec.config_at(p))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let project = |p: Vec<f64>| -> Vec<f64> {
        p.into_iter()
            .zip(&spec.axes)
            .map(|(v, a)| a.clamp(v))
            .collect()
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), start_value)];
    for (i, a) in spec.axes.iter().enumerate() {
        let step = 0.05 * (a.max - a.min);
        let mut p = start.to_vec();
        p[i] = if p[i] + step <= a.max {
            p[i] + step
        } else {
            p[i] - step
        };
        let v = f(&p);
        simplex.push((p, v));
    }

    let diameter = |s: &[(Vec<f64>, f64)]| {
        s.iter()
            .flat_map(|(a, _)| s.iter().map(move |(b, _)| (a, b)))
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };

    loop {
        // descending by value; stable so earlier vertices win ties
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        if simplex[0].1 > result.value {
            result.point = simplex[0].0.clone();
            result.value = simplex[0].1;
        }
        if diameter(&simplex) < tolerance {
            break;
        }
        if result.iterations >= spec.max_iterations {
            result.capped = true;
            break;
        }
        result.iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(p, _)| p[k]).sum::<f64>() / n as f64)
            .collect();
        let toward = |coef: f64, p: &[f64]| -> Vec<f64> {
            project(
                centroid
                    .iter()
                    .zip(p)
                    .map(|(c, x)| c + coef * (x - c))
                    .collect(),
            )
        };
        let worst = simplex[n].clone();
        let reflected = toward(-1.0, &worst.0);
        let fr = f(&reflected);
        if fr > simplex[0].1 {
            let expanded = toward(-2.0, &worst.0);
            let fe = f(&expanded);
            simplex[n] = if fe > fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr > simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr > worst.1 {
            let c = toward(-0.5, &worst.0);
            let v = f(&c);
            (c, v)
        } else {
            let c = toward(0.5, &worst.0);
            let v = f(&c);
            (c, v)
        };
        if fc > worst.1.max(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let p = project(
                best.iter()
                    .zip(&vertex.0)
                    .map(|(b, x)| b + 0.5 * (x - b))
                    .collect(),
            );
            let v = f(&p);
            *vertex = (p, v);
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub label: Option<String>,
    pub axes: Vec<Axis>,
    /// Folded into the fundamental domain of each axis.
    pub point: Vec<f64>,
    pub value: f64,
    pub grid_point: Vec<f64>,
    pub grid_value: f64,
    pub refined: bool,
    pub capped: bool,
    /// Axes along which the objective is flat through the optimum.
    pub degenerate_axes: Vec<Axis>,
}

/// Grid scan followed by optional refinement of the best grid point.
pub fn optimize(spec: &SearchSpec, objective: &Objective) -> Result<Optimum> {
    let table = grid_scan(spec, objective)?;
    let best = table.best().ok_or_else(|| {
        let reason = table
            .rows
            .iter()
            .find_map(|r| r.error.clone())
            .unwrap_or_else(|| "no finite value".into());
        Error::NumericFailure(format!("objective failed on every grid point: {reason}"))
    })?;
    let grid_point = best.point.clone();
    let grid_value = best.value.unwrap_or(f64::NEG_INFINITY);
    let (point, value, capped) = if spec.refine && !spec.axes.is_empty() {
        let r = refine_local(spec, objective, &grid_point, spec.tolerance)?;
        (r.point, r.value, r.capped)
    } else {
        (grid_point.clone(), grid_value, false)
    };
    let degenerate_axes = degenerate_axes(spec, objective, &point, value);
    let point = spec
        .axes
        .iter()
        .zip(&point)
        .map(|(a, &v)| a.axis.fold(v))
        .collect();
    Ok(Optimum {
        label: None,
        axes: table.axes,
        point,
        value,
        grid_point,
        grid_value,
        refined: spec.refine,
        capped,
        degenerate_axes,
    })
}

fn degenerate_axes(
    spec: &SearchSpec,
    objective: &Objective,
    point: &[f64],
    value: f64,
) -> Vec<Axis> {
    let tol = 1e-9 * value.abs().max(1.0);
    spec.axes
        .iter()
        .enumerate()
        .filter(|(i, a)| {
            (0..=4).all(|k| {
                let mut p = point.to_vec();
                p[*i] = a.min + (a.max - a.min) * k as f64 / 4.0;
                objective
                    .evaluate(&spec.config_at(&p))
                    .is_ok_and(|v| (v - value).abs() <= tol)
            })
        })
        .map(|(_, a)| a.axis)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownConfigurations {
    pub r: f64,
    pub x: f64,
    pub q: f64,
    /// Maximum of Q22 over `(θ, φ, γ)`.
    pub maximum: Optimum,
    /// Maximum over `(θ, φ)` of the worst case over `γ` of `−R`.
    pub optimal: Optimum,
    pub landmarks: Landmarks,
}

/// Angle tolerance for attaching a landmark label.
pub const LABEL_ANGLE_TOLERANCE: f64 = 1e-3;
/// Relative value tolerance for attaching a landmark label.
pub const LABEL_VALUE_TOLERANCE: f64 = 1e-6;

const WORST_CASE_SAMPLES: usize = 16;

fn matches_landmark(opt: &Optimum, target: &[(Axis, f64)], value: f64) -> bool {
    let angles_ok = target.iter().all(|&(axis, t)| {
        opt.axes
            .iter()
            .position(|&a| a == axis)
            .is_some_and(|i| axis.distance(opt.point[i], t) <= LABEL_ANGLE_TOLERANCE)
    });
    let value_ok = (opt.value - value).abs() <= LABEL_VALUE_TOLERANCE * value.abs().max(1.0);
    angles_ok && value_ok
}

/// Searches the closed-form model for the Q22 maximum and for the compatibility
/// optimum, labelling them `"maximum"` and `"optimal"` when they match the
/// analytic landmarks.
///
/// The Q22 maximum is a ridge (`γ = 0` with `θ = 0` or `φ = 0`), so the maximum
/// usually lists `θ` and `φ` as degenerate; the tie-break reports `(0, 0, 0)`.
pub fn find_known_configurations(r: f64, x: f64, q: f64) -> Result<KnownConfigurations> {
    let landmarks = closed_forms::landmarks(r, x, q)?;
    let base = ModelConfig::new(r, x).with_q(q);

    let spec = SearchSpec::new(
        base,
        vec![
            AxisSpec::new(Axis::Theta, 0.0, PI, 9),
            AxisSpec::new(Axis::Phi, 0.0, FRAC_PI_2, 9),
            AxisSpec::new(Axis::Gamma, 0.0, TAU, 17),
        ],
    );
    let mut maximum = optimize(&spec, &Objective::new(ObjectiveKind::Q22))?;
    let target = closed_forms::q22_closed(&ClosedFormInputs::maximum(r, x).with_q(q));
    if matches_landmark(
        &maximum,
        &[(Axis::Theta, 0.0), (Axis::Phi, 0.0), (Axis::Gamma, 0.0)],
        target,
    ) {
        maximum.label = Some("maximum".into());
    }

    let spec = SearchSpec::new(
        base,
        vec![
            AxisSpec::new(Axis::Theta, 0.0, PI, 9),
            AxisSpec::new(Axis::Phi, 0.0, FRAC_PI_2, 9),
        ],
    );
    let objective = Objective::new(ObjectiveKind::MinusR).with_worst_case_gamma(WORST_CASE_SAMPLES);
    let mut optimal = optimize(&spec, &objective)?;
    if matches_landmark(
        &optimal,
        &[(Axis::Theta, FRAC_PI_2), (Axis::Phi, PI / 4.0)],
        0.0,
    ) {
        optimal.label = Some("optimal".into());
    }

    Ok(KnownConfigurations {
        r,
        x,
        q,
        maximum,
        optimal,
        landmarks,
    })
}
