//! Closed-form QFI and curvature entries of the interferometer, evaluated exactly
//! as printed, plus a harness that cross-checks them against the numeric pipeline.
//!
//! The printed q-independent terms carry `cosh²` where a direct pure-state
//! computation gives `sinh²` (see [`KNOWN_TENSION`]); [`compare`] reports the
//! difference and never asserts agreement.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gaussian::BeamSplitterConvention;
use crate::metrology::{qfi_matrix, uhlmann_matrix};
use crate::model::{jacobian_analytic, ModelConfig};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Human-readable description of the disagreement between the printed
/// q-independent terms and the numeric pipeline.
pub const KNOWN_TENSION: &str = "The closed-form q-independent terms use 2cosh^2(2r) \
    (and the matching cosh^2 landmark forms) where a direct pure-state computation gives \
    2sinh^2(2r), the phase QFI of a squeezed vacuum. At q = 0 closed form and numerics \
    differ by one offset shared by Q11, Q22 and Q12; it is exactly 2 for a fully \
    transmitting beam splitter and depends on (r, theta, phi) otherwise. U12 at q = 0 and \
    the q-dependent terms at theta = phi = 0 agree; away from theta = phi = 0 the q-dependent \
    terms differ as well (at theta = pi/2, phi = pi/4 the closed-form Q11 q-term is twice the \
    numeric one).";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormInputs {
    pub r: f64,
    pub q: f64,
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    pub x: f64,
    /// `α + 2λ₁`.
    pub gamma: f64,
    pub lambda2: f64,
}

impl ClosedFormInputs {
    pub fn new(r: f64, x: f64) -> Self {
        Self {
            r,
            q: 0.0,
            beta: 0.0,
            theta: 0.0,
            phi: 0.0,
            x,
            gamma: 0.0,
            lambda2: 0.0,
        }
    }

    /// Maximum configuration `θ = φ = γ = 0`.
    pub fn maximum(r: f64, x: f64) -> Self {
        Self::new(r, x)
    }

    /// Optimal configuration `θ = π/2, φ = π/4`.
    pub fn optimal(r: f64, x: f64) -> Self {
        Self {
            theta: FRAC_PI_2,
            phi: FRAC_PI_4,
            ..Self::new(r, x)
        }
    }

    pub fn from_config(config: &ModelConfig) -> Self {
        Self {
            r: config.r,
            q: config.q,
            beta: config.beta,
            theta: config.theta,
            phi: config.phi,
            x: config.x,
            gamma: config.gamma(),
            lambda2: config.lambda2,
        }
    }

    pub fn with_q(self, q: f64) -> Self {
        Self { q, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_lambda2(self, lambda2: f64) -> Self {
        Self { lambda2, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("r", self.r),
            ("q", self.q),
            ("beta", self.beta),
            ("theta", self.theta),
            ("phi", self.phi),
            ("x", self.x),
            ("gamma", self.gamma),
            ("lambda2", self.lambda2),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(invalid(format!("{name} must be finite")));
        }
        for (name, v) in [("r", self.r), ("x", self.x), ("q", self.q)] {
            if v < 0.0 {
                return Err(invalid(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    // cosθ cos(γ+θ) + cos2φ sinθ sin(γ+θ)
    fn k(&self) -> f64 {
        let (t, g) = (self.theta, self.gamma);
        t.cos() * (g + t).cos() + (2.0 * self.phi).cos() * t.sin() * (g + t).sin()
    }
}

pub fn q11_closed(p: &ClosedFormInputs) -> f64 {
    let (r, b, t, f) = (p.r, p.beta, p.theta, p.phi);
    let s2f = (2.0 * f).sin();
    let bracket = (2.0 * b).cos() * (2.0 * f).cos() + (2.0 * b + t).cos() * t.sin() * s2f * s2f;
    2.0 * (2.0 * r).cosh().powi(2)
        + 2.0 * p.q * p.q * ((2.0 * r).cosh() + bracket * (2.0 * r).sinh())
}

pub fn q22_closed(p: &ClosedFormInputs) -> f64 {
    let (r, x) = (p.r, p.x);
    let inner = (2.0 * r).cosh() * (2.0 * x).cosh() + (2.0 * r).sinh() * p.k() * (2.0 * x).sinh();
    2.0 * inner * inner + 2.0 * p.q * p.q * f22(p)
}

pub fn q12_closed(p: &ClosedFormInputs) -> f64 {
    let (r, x, t) = (p.r, p.x, p.theta);
    let s2f = (2.0 * p.phi).sin();
    2.0 * (2.0 * r).cosh().powi(2)
        + 2.0 * (2.0 - s2f * s2f * t.sin() * t.sin()) * (2.0 * r).sinh().powi(2) * x.sinh().powi(2)
        + p.k() * (4.0 * r).sinh() * (2.0 * x).sinh()
        + 2.0 * p.q * p.q * f12(p)
}

pub fn f22(p: &ClosedFormInputs) -> f64 {
    let (r, b, t, f, x, g) = (p.r, p.beta, p.theta, p.phi, p.x, p.gamma);
    let (c2x, s2x) = ((2.0 * x).cosh(), (2.0 * x).sinh());
    let cf2 = f.cos().powi(2);
    let sf2 = f.sin().powi(2);
    let first = 2.0 * c2x * (2.0 * (2.0 * b + t).cos() * t.sin() * sf2 + s2x * p.k());
    let second = s2x
        * (4.0 * (g + t).cos() * t.sin() * sf2
            + 2.0 * s2x * (g - 2.0 * b).cos() * (g.cos() - 2.0 * t.sin() * (g + t).sin() * sf2));
    (2.0 * r).sinh() * ((2.0 * b).cos() * (2.0 * f).cos() + cf2 * (first + second))
        + (2.0 * r).cosh()
            * (1.0 + cf2 * ((4.0 * x).cosh() + (g - 2.0 * b).cos() * (4.0 * x).sinh() - 1.0))
}

pub fn f12(p: &ClosedFormInputs) -> f64 {
    let (r, b, t, f, x, g) = (p.r, p.beta, p.theta, p.phi, p.x, p.gamma);
    let cf2 = f.cos().powi(2);
    let sf2 = f.sin().powi(2);
    let (chx2, shx2) = (x.cosh().powi(2), x.sinh().powi(2));
    let s2x = (2.0 * x).sinh();
    let brace = 2.0 * ((2.0 * b + t).cos() * chx2 - (2.0 * b + t).sin() * shx2)
        - s2x * ((g + t).sin() - (g + t).cos());
    (2.0 * r).sinh()
        * ((2.0 * b).cos() * (2.0 * chx2 * cf2 - 1.0)
            + 2.0 * t.sin() * brace * cf2 * sf2
            + s2x * cf2 * g.cos())
        + (2.0 * r).cosh()
        + 2.0 * (2.0 * r).cosh() * x.sinh() * cf2 * (x.sinh() + (g - 2.0 * b).cos() * x.cosh())
}

/// `f22` specialised to `θ = π/2, φ = π/4`.
pub fn f22_optimal(r: f64, x: f64, beta: f64, gamma: f64) -> f64 {
    let (c2x, s2x) = ((2.0 * x).cosh(), (2.0 * x).sinh());
    -(2.0 * r).sinh() * (c2x * (2.0 * beta).sin() + s2x * gamma.sin())
        + (2.0 * r).cosh() * c2x * (c2x + s2x * (gamma - 2.0 * beta).cos())
}

pub fn u12_closed(p: &ClosedFormInputs) -> f64 {
    let (t, g) = (p.theta, p.gamma);
    2.0 * ((g + t).cos() * (2.0 * p.phi).cos() * t.sin() - t.cos() * (g + t).sin())
        * (2.0 * p.r).sinh()
        * (2.0 * p.x).sinh()
        - 4.0
            * p.q
            * p.q
            * p.phi.cos().powi(2)
            * (2.0 * (p.beta - p.lambda2)).sin()
            * (2.0 * p.x).sinh()
}

/// Closed-form 2×2 QFI `[[Q11, Q12], [Q12, Q22]]`.
pub fn qfi_closed(p: &ClosedFormInputs) -> [[f64; 2]; 2] {
    let q12 = q12_closed(p);
    [[q11_closed(p), q12], [q12, q22_closed(p)]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Landmarks {
    pub r: f64,
    pub x: f64,
    pub q: f64,
    /// `2cosh²[2(r+x)]`
    pub q22_max: f64,
    /// `2cosh²2r cosh²2x`
    pub q22_opt: f64,
    /// `1 + cosh[4(r−x)]`
    pub q22_inf: f64,
    /// `2cosh²2r + 2e²ʳq²`
    pub q11_max: f64,
    /// `Q22_opt / Q22_max`
    pub ratio_opt_max: f64,
    /// `Q22_inf / Q22_opt`
    pub ratio_inf_opt: f64,
    /// `2cosh²2r + 2sinh²2r sinh²x`
    pub q12_opt: f64,
    /// `e^{2r+4x}`
    pub f22_max: f64,
    /// `(1+e^{−4x})(1+e^{−4r})/4`
    pub f22_ratio: f64,
}

pub fn landmarks(r: f64, x: f64, q: f64) -> Result<Landmarks> {
    ClosedFormInputs::new(r, x).with_q(q).validate()?;
    let c2r = (2.0 * r).cosh();
    Ok(Landmarks {
        r,
        x,
        q,
        q22_max: 2.0 * (2.0 * (r + x)).cosh().powi(2),
        q22_opt: 2.0 * c2r * c2r * (2.0 * x).cosh().powi(2),
        q22_inf: 1.0 + (4.0 * (r - x)).cosh(),
        q11_max: 2.0 * c2r * c2r + 2.0 * (2.0 * r).exp() * q * q,
        ratio_opt_max: 0.25 * (1.0 + (2.0 * (r - x)).cosh() / (2.0 * (r + x)).cosh()).powi(2),
        ratio_inf_opt: ((2.0 * x).tanh() * (2.0 * r).tanh() - 1.0).powi(2),
        q12_opt: 2.0 * c2r * c2r + 2.0 * (2.0 * r).sinh().powi(2) * x.sinh().powi(2),
        f22_max: (2.0 * r + 4.0 * x).exp(),
        f22_ratio: (1.0 + (-4.0 * x).exp()) * (1.0 + (-4.0 * r).exp()) / 4.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetRatio {
    pub det_max: f64,
    pub det_opt: f64,
    /// `None` when either determinant vanishes (the `x = 0` baseline).
    pub ratio: Option<f64>,
}

fn det2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// `det Q^max / det Q^opt` from the closed forms at `q = 0`.
pub fn det_ratio(r: f64, x: f64) -> Result<DetRatio> {
    let max = ClosedFormInputs::maximum(r, x);
    let opt = ClosedFormInputs::optimal(r, x);
    max.validate()?;
    let (qm, qo) = (qfi_closed(&max), qfi_closed(&opt));
    let (det_max, det_opt) = (det2(qm), det2(qo));
    let degenerate = |d: f64, m: [[f64; 2]; 2]| d.abs() <= 1e-12 * (m[0][0] + m[1][1]).powi(2);
    let ratio = if degenerate(det_max, qm) || degenerate(det_opt, qo) {
        None
    } else {
        Some(det_max / det_opt)
    };
    Ok(DetRatio {
        det_max,
        det_opt,
        ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Entry {
    Q11,
    Q22,
    Q12,
    U12,
}

impl Entry {
    pub const ALL: [Entry; 4] = [Entry::Q11, Entry::Q22, Entry::Q12, Entry::U12];

    pub fn name(self) -> &'static str {
        match self {
            Entry::Q11 => "Q11",
            Entry::Q22 => "Q22",
            Entry::Q12 => "Q12",
            Entry::U12 => "U12",
        }
    }

    pub fn closed(self, p: &ClosedFormInputs) -> f64 {
        match self {
            Entry::Q11 => q11_closed(p),
            Entry::Q22 => q22_closed(p),
            Entry::Q12 => q12_closed(p),
            Entry::U12 => u12_closed(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub entry: Entry,
    pub closed_form: f64,
    pub numeric: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    /// Part proportional to `q²`, i.e. value at `q` minus value at `q = 0`.
    pub closed_q_term: f64,
    pub numeric_q_term: f64,
    pub q_term_abs_diff: f64,
    /// `closed − numeric` at `q = 0`.
    pub q_independent_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub config: ModelConfig,
    pub records: Vec<DiscrepancyRecord>,
}

impl DiscrepancyReport {
    pub fn record(&self, entry: Entry) -> Option<&DiscrepancyRecord> {
        self.records.iter().find(|r| r.entry == entry)
    }

    pub fn is_complete(&self) -> bool {
        Entry::ALL
            .iter()
            .all(|&e| self.records.iter().filter(|r| r.entry == e).count() == 1)
    }
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn numeric_entries(config: &ModelConfig) -> Result<[f64; 4]> {
    let jet = jacobian_analytic(config)?;
    let q = qfi_matrix(&jet)?;
    let u = uhlmann_matrix(&jet)?;
    Ok([q.get(0, 0), q.get(1, 1), q.get(0, 1), u.get(0, 1)])
}

/// Evaluates Q11, Q22, Q12 and U12 through the closed forms and through the
/// numeric pipeline and records the differences.
pub fn compare(config: &ModelConfig) -> Result<DiscrepancyReport> {
    config.validate()?;
    let inputs = ClosedFormInputs::from_config(config);
    let inputs0 = inputs.with_q(0.0);
    let numeric = numeric_entries(config)?;
    let numeric0 = if config.q == 0.0 {
        numeric
    } else {
        numeric_entries(&ModelConfig { q: 0.0, ..*config })?
    };
    let records = Entry::ALL
        .iter()
        .enumerate()
        .map(|(k, &entry)| {
            let closed = entry.closed(&inputs);
            let closed0 = entry.closed(&inputs0);
            let closed_q_term = closed - closed0;
            let numeric_q_term = numeric[k] - numeric0[k];
            DiscrepancyRecord {
                entry,
                closed_form: closed,
                numeric: numeric[k],
                abs_diff: (closed - numeric[k]).abs(),
                rel_diff: relative(closed, numeric[k]),
                closed_q_term,
                numeric_q_term,
                q_term_abs_diff: (closed_q_term - numeric_q_term).abs(),
                q_independent_offset: closed0 - numeric0[k],
            }
        })
        .collect();
    Ok(DiscrepancyReport {
        config: *config,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub entry: Entry,
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    pub max_q_term_abs_diff: f64,
    pub min_offset: f64,
    pub max_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancySummary {
    pub configs: usize,
    pub records: usize,
    pub complete: bool,
    pub entries: Vec<EntrySummary>,
    /// Some Q entry shows a nonzero q-independent offset.
    pub tension_present: bool,
    pub tension: String,
}

pub fn summarize(reports: &[DiscrepancyReport]) -> DiscrepancySummary {
    let entries: Vec<EntrySummary> = Entry::ALL
        .iter()
        .map(|&entry| {
            let recs = reports.iter().filter_map(|r| r.record(entry));
            let mut s = EntrySummary {
                entry,
                max_abs_diff: 0.0,
                max_rel_diff: 0.0,
                max_q_term_abs_diff: 0.0,
                min_offset: f64::INFINITY,
                max_offset: f64::NEG_INFINITY,
            };
            for rec in recs {
                s.max_abs_diff = s.max_abs_diff.max(rec.abs_diff);
                s.max_rel_diff = s.max_rel_diff.max(rec.rel_diff);
                s.max_q_term_abs_diff = s.max_q_term_abs_diff.max(rec.q_term_abs_diff);
                s.min_offset = s.min_offset.min(rec.q_independent_offset);
                s.max_offset = s.max_offset.max(rec.q_independent_offset);
            }
            s
        })
        .collect();
    let tension_present = entries
        .iter()
        .filter(|e| e.entry != Entry::U12)
        .any(|e| e.max_offset.abs().max(e.min_offset.abs()) > 1e-8);
    DiscrepancySummary {
        configs: reports.len(),
        records: reports.iter().map(|r| r.records.len()).sum(),
        complete: reports.iter().all(DiscrepancyReport::is_complete),
        entries,
        tension_present,
        tension: KNOWN_TENSION.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConventionScore {
    pub convention: BeamSplitterConvention,
    /// Largest spread (max − min) of the q-independent offsets of Q11, Q22 and Q12
    /// within one configuration.
    pub offset_spread: f64,
    /// Largest |closed − numeric| of U12 at q = 0.
    pub u12_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub selected: BeamSplitterConvention,
    pub scores: Vec<ConventionScore>,
    /// Closed over numeric q-term of Q11 at `θ = φ = 0`; 1 for a consistent displacement scale.
    pub displacement_scale_ratio: f64,
    /// Largest |closed − numeric| of that q-term over the calibration points.
    pub q_term_error: f64,
}

fn calibration_points() -> Vec<ModelConfig> {
    let mut points = Vec::new();
    for (k, &(r, x)) in [(0.3, 0.4), (0.6, 0.2), (0.9, 0.7)].iter().enumerate() {
        for (j, &(theta, phi)) in [(0.4, 0.3), (1.1, 0.9), (2.3, 1.4), (FRAC_PI_2, FRAC_PI_4)]
            .iter()
            .enumerate()
        {
            let alpha = 0.35 * (k + j) as f64 - 0.5;
            points.push(
                ModelConfig::new(r, x)
                    .with_theta(theta)
                    .with_phi(phi)
                    .with_alpha(alpha)
                    .with_lambdas(0.2, -0.1),
            );
        }
    }
    points
}

/// Picks the beam-splitter reading under which, at every calibration point, the
/// printed q-independent QFI entries share one offset from the numerics and U12
/// matches, and measures the displacement scale from the Q11 q-term at `θ = φ = 0`.
pub fn calibrate() -> Result<Calibration> {
    let mut scores = Vec::new();
    for convention in [
        BeamSplitterConvention::Transmissivity,
        BeamSplitterConvention::Printed,
    ] {
        let (mut offset_spread, mut u12_error) = (0.0f64, 0.0f64);
        for point in calibration_points() {
            let report = compare(&point.with_beam_splitter(convention))?;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for rec in &report.records {
                if rec.entry == Entry::U12 {
                    u12_error = u12_error.max(rec.abs_diff);
                } else {
                    lo = lo.min(rec.q_independent_offset);
                    hi = hi.max(rec.q_independent_offset);
                }
            }
            offset_spread = offset_spread.max(hi - lo);
        }
        scores.push(ConventionScore {
            convention,
            offset_spread,
            u12_error,
        });
    }
    let selected = scores
        .iter()
        .min_by(|a, b| (a.offset_spread + a.u12_error).total_cmp(&(b.offset_spread + b.u12_error)))
        .map(|s| s.convention)
        .unwrap_or_default();

    let (mut closed_sum, mut numeric_sum, mut q_term_error) = (0.0, 0.0, 0.0f64);
    for &(r, q, beta) in &[
        (0.5, 1.0, 0.0),
        (0.3, 0.7, 0.4),
        (1.0, 0.5, -1.2),
        (0.0, 1.3, 2.0),
    ] {
        let config = ModelConfig::new(r, 0.3)
            .with_q(q)
            .with_beta(beta)
            .with_beam_splitter(selected);
        let rec = compare(&config)?.records[0].clone();
        closed_sum += rec.closed_q_term;
        numeric_sum += rec.numeric_q_term;
        q_term_error = q_term_error.max(rec.q_term_abs_diff);
    }
    Ok(Calibration {
        selected,
        scores,
        displacement_scale_ratio: closed_sum / numeric_sum,
        q_term_error,
    })
}

/// Sample grid for batch comparisons: `n` points per axis over `θ ∈ [0, π)`,
/// `φ ∈ [0, π/2]`, `γ ∈ [0, 2π)` on top of `base`.
pub fn comparison_grid(base: &ModelConfig, n: usize) -> Vec<ModelConfig> {
    let step = |k: usize, span: f64, closed: bool| {
        if n <= 1 {
            0.0
        } else if closed {
            span * k as f64 / (n - 1) as f64
        } else {
            span * k as f64 / n as f64
        }
    };
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let gamma = step(k, 2.0 * PI, false);
                out.push(
                    base.with_theta(step(i, PI, false))
                        .with_phi(step(j, FRAC_PI_2, true))
                        .with_gamma(gamma),
                );
            }
        }
    }
    out
}
