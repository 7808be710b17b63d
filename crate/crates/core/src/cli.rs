//! JSON run configurations and the `eval | scan | optimize | compare` front end.
//!
//! A run configuration is a JSON object:
//!
//! ```json
//! {
//!   "model": { "r": 0.5, "q": 0.0, "theta": 1.5707963267948966, "phi": 0.7853981633974483, "x": 0.5 },
//!   "quantumness": true,
//!   "weight": [[1.0, 0.0], [0.0, 1.0]],
//!   "repetitions": 1,
//!   "scan": { "axes": [{ "axis": "theta", "min": 0.0, "max": 3.14159, "points": 9 }],
//!             "objective": { "kind": "q22" } }
//! }
//! ```
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_CONFIG`] for malformed configurations and failed
//! runs, [`EXIT_SLOPPY`] when `eval` completed but refused `R` for a sloppy model.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::closed_forms::{self, Calibration, DiscrepancyReport, DiscrepancySummary, Entry};
use crate::error::{invalid, Error, Result};
use crate::gaussian::Matrix;
use crate::metrology::{
    matrix_rows, metrology_report, CurvatureConvention, ReportOptions, ScalarBounds,
    SloppinessReport,
};
use crate::model::{jacobian_analytic, ModelConfig};
use crate::optimizer::{
    self, AxisSpec, KnownConfigurations, Objective, Optimum, ScanTable, SearchSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SLOPPY: i32 = 2;

pub const SCHEMA_PREFIX: &str = "cv-metrology/";
pub const EVAL_SCHEMA: &str = "cv-metrology/eval/v1";
pub const SCAN_SCHEMA: &str = "cv-metrology/scan/v1";
pub const OPTIMIZE_SCHEMA: &str = "cv-metrology/optimize/v1";
pub const COMPARE_SCHEMA: &str = "cv-metrology/compare/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Eval,
    Scan,
    Optimize,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Scan => "scan",
            Command::Optimize => "optimize",
            Command::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub axes: Vec<AxisSpec>,
    pub objective: Objective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSection {
    /// Without an objective the run searches for the known landmark configurations.
    #[serde(default)]
    pub objective: Option<Objective>,
    #[serde(default)]
    pub axes: Vec<AxisSpec>,
    #[serde(default = "yes")]
    pub refine: bool,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    /// Grid points per axis over `(θ, φ, γ)` around the model.
    #[serde(default = "three")]
    pub points: usize,
    /// Explicit configurations; replaces the grid when present.
    #[serde(default)]
    pub configs: Option<Vec<ModelConfig>>,
}

impl Default for CompareSection {
    fn default() -> Self {
        Self {
            points: three(),
            configs: None,
        }
    }
}

fn yes() -> bool {
    true
}

fn one() -> u32 {
    1
}

fn three() -> usize {
    3
}

fn identity2() -> Vec<Vec<f64>> {
    vec![vec![1.0, 0.0], vec![0.0, 1.0]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    pub model: ModelConfig,
    /// Request `R` and the scalar bounds in `eval`.
    #[serde(default = "yes")]
    pub quantumness: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default = "identity2")]
    pub weight: Vec<Vec<f64>>,
    #[serde(default = "one")]
    pub repetitions: u32,
    #[serde(default)]
    pub curvature: CurvatureConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Present in `eval` output; ignored on input so that output can be fed back.
    #[serde(default, skip_serializing)]
    pub result: Option<serde_json::Value>,
}

impl RunConfig {
    pub fn new(model: ModelConfig) -> Self {
        Self {
            schema: None,
            command: None,
            model,
            quantumness: true,
            threshold: None,
            weight: identity2(),
            repetitions: 1,
            curvature: CurvatureConvention::default(),
            scan: None,
            optimize: None,
            compare: None,
            output: None,
            format: None,
            result: None,
        }
    }

    pub fn weight_matrix(&self) -> Result<Matrix> {
        if self.weight.len() != 2 || self.weight.iter().any(|row| row.len() != 2) {
            return Err(invalid("weight: must be a 2x2 matrix"));
        }
        Ok(Matrix::from_fn(2, 2, |i, j| self.weight[i][j]))
    }

    pub fn validate(&self, command: Command) -> Result<()> {
        if let Some(schema) = &self.schema {
            if !schema.starts_with(SCHEMA_PREFIX) {
                return Err(invalid(format!("schema: unknown schema {schema:?}")));
            }
        }
        if let Some(c) = self.command {
            if c != command {
                return Err(invalid(format!(
                    "command: config is for {:?} but {:?} was requested",
                    c.name(),
                    command.name()
                )));
            }
        }
        self.model
            .validate()
            .map_err(|e| invalid(format!("model.{}", strip_kind(&e))))?;
        if let Some(t) = self.threshold {
            if !(t > 0.0 && t.is_finite()) {
                return Err(invalid(format!("threshold: must be positive, got {t}")));
            }
        }
        let w = self.weight_matrix()?;
        if w.iter().any(|v| !v.is_finite()) {
            return Err(invalid("weight: entries must be finite"));
        }
        let scale = w.amax().max(1.0);
        if (&w - w.transpose()).amax() > 1e-12 * scale {
            return Err(invalid("weight: must be symmetric"));
        }
        if w.symmetric_eigenvalues()
            .iter()
            .any(|&e| e < -1e-12 * scale)
        {
            return Err(invalid("weight: must be positive semidefinite"));
        }
        if self.repetitions == 0 {
            return Err(invalid("repetitions: must be at least 1"));
        }
        match command {
            Command::Eval => {}
            Command::Scan => {
                let scan = self
                    .scan
                    .as_ref()
                    .ok_or_else(|| invalid("scan: section required for the scan command"))?;
                scan.objective
                    .validate()
                    .map_err(|e| invalid(format!("scan.objective.{}", strip_kind(&e))))?;
                SearchSpec::new(self.model, scan.axes.clone())
                    .validate()
                    .map_err(|e| invalid(format!("scan.{}", strip_kind(&e))))?;
            }
            Command::Optimize => {
                if let Some(opt) = &self.optimize {
                    if let Some(obj) = &opt.objective {
                        obj.validate().map_err(|e| {
                            invalid(format!("optimize.objective.{}", strip_kind(&e)))
                        })?;
                    }
                    self.search_spec(opt)
                        .validate()
                        .map_err(|e| invalid(format!("optimize.{}", strip_kind(&e))))?;
                }
            }
            Command::Compare => {
                let cmp = self.compare.clone().unwrap_or_default();
                if cmp.configs.is_none() && cmp.points == 0 {
                    return Err(invalid("compare.points: must be at least 1"));
                }
                for (i, c) in cmp.configs.iter().flatten().enumerate() {
                    c.validate()
                        .map_err(|e| invalid(format!("compare.configs[{i}].{}", strip_kind(&e))))?;
                }
            }
        }
        Ok(())
    }

    fn search_spec(&self, opt: &OptimizeSection) -> SearchSpec {
        let mut spec = SearchSpec::new(self.model, opt.axes.clone());
        spec.refine = opt.refine;
        if let Some(t) = opt.tolerance {
            spec.tolerance = t;
        }
        if let Some(m) = opt.max_iterations {
            spec.max_iterations = m;
        }
        spec
    }
}

fn strip_kind(e: &Error) -> String {
    match e {
        Error::InvalidArgument(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Parses a run configuration; messages name the offending field.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))
}

/// Serialized result of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub exit_code: i32,
    /// Messages for stderr.
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumnessValues {
    /// Spectral definition.
    pub general: f64,
    /// `|U12| / sqrt(det Q)`.
    pub two_param: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub gamma: f64,
    pub symplectic_eigenvalues: Vec<f64>,
    pub qfi: Vec<Vec<f64>>,
    pub uhlmann: Vec<Vec<f64>>,
    pub sloppiness: SloppinessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantumness: Option<QuantumnessValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<ScalarBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
}

#[derive(Serialize)]
struct EvalDocument<'a> {
    schema: &'static str,
    command: Command,
    model: &'a ModelConfig,
    quantumness: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    weight: &'a [Vec<f64>],
    repetitions: u32,
    curvature: CurvatureConvention,
    result: &'a EvalResult,
}

pub fn evaluate(config: &RunConfig) -> Result<EvalResult> {
    config.validate(Command::Eval)?;
    let jet = jacobian_analytic(&config.model)?;
    let options = ReportOptions {
        threshold: config.threshold,
        weight: config.weight_matrix()?,
        repetitions: config.repetitions,
        convention: config.curvature,
    };
    let report = metrology_report(&jet, &options)?;
    let (mut quantumness, mut bounds, mut refusal) = (None, None, None);
    if config.quantumness {
        match (report.quantumness, report.bounds) {
            (Ok((general, two_param)), Ok(b)) => {
                quantumness = Some(QuantumnessValues { general, two_param });
                bounds = Some(b);
            }
            (Err(e @ Error::SloppyModel { .. }), _) | (_, Err(e @ Error::SloppyModel { .. })) => {
                refusal = Some(e.to_string());
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(EvalResult {
        gamma: config.model.gamma(),
        symplectic_eigenvalues: jet.state.physicality().symplectic_eigenvalues,
        qfi: matrix_rows(report.qfi.entries()),
        uhlmann: matrix_rows(report.uhlmann.entries()),
        sloppiness: report.sloppiness,
        quantumness,
        bounds,
        refusal,
    })
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::NumericFailure(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::NumericFailure(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::NumericFailure(format!("csv: {e}")))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::NumericFailure(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn run_eval(config: &RunConfig, format: Format) -> Result<RunOutput> {
    let result = evaluate(config)?;
    let text = match format {
        Format::Json => json_text(&EvalDocument {
            schema: EVAL_SCHEMA,
            command: Command::Eval,
            model: &config.model,
            quantumness: config.quantumness,
            threshold: config.threshold,
            weight: &config.weight,
            repetitions: config.repetitions,
            curvature: config.curvature,
            result: &result,
        })?,
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = Vec::new();
            let mut push = |k: &str, v: String| rows.push(vec![k.to_string(), v]);
            push("gamma", num(result.gamma));
            for (i, row) in result.qfi.iter().enumerate() {
                for (j, v) in row.iter().enumerate().skip(i) {
                    push(&format!("Q{}{}", i + 1, j + 1), num(*v));
                }
            }
            push("U12", num(result.uhlmann[0][1]));
            for (k, ev) in result.sloppiness.eigenvalues.iter().enumerate() {
                push(&format!("eigenvalue{}", k + 1), num(*ev));
            }
            push("det_Q", num(result.sloppiness.determinant));
            push("threshold", num(result.sloppiness.threshold));
            push("sloppy", result.sloppiness.sloppy.to_string());
            for (k, v) in result.sloppiness.null_directions.iter().enumerate() {
                for (i, c) in v.iter().enumerate() {
                    push(&format!("null{}_{}", k + 1, i + 1), num(*c));
                }
            }
            push(
                "R_general",
                opt_num(result.quantumness.as_ref().map(|q| q.general)),
            );
            push(
                "R_two_param",
                opt_num(result.quantumness.as_ref().map(|q| q.two_param)),
            );
            push("c_q", opt_num(result.bounds.as_ref().map(|b| b.c_q)));
            push(
                "bracket_upper",
                opt_num(result.bounds.as_ref().map(|b| b.bracket_upper)),
            );
            push("refusal", result.refusal.clone().unwrap_or_default());
            csv_text(&["quantity".into(), "value".into()], &rows)?
        }
    };
    let (exit_code, diagnostics) = match &result.refusal {
        Some(msg) => (EXIT_SLOPPY, vec![msg.clone()]),
        None => (EXIT_OK, vec![]),
    };
    Ok(RunOutput {
        text,
        exit_code,
        diagnostics,
    })
}

#[derive(Serialize)]
struct ScanDocument<'a> {
    schema: &'static str,
    command: Command,
    model: &'a ModelConfig,
    objective: &'a Objective,
    axes: &'a [AxisSpec],
    table: &'a ScanTable,
}

pub fn scan(config: &RunConfig) -> Result<ScanTable> {
    config.validate(Command::Scan)?;
    let section = config
        .scan
        .as_ref()
        .ok_or_else(|| invalid("scan: section required"))?;
    optimizer::grid_scan(
        &SearchSpec::new(config.model, section.axes.clone()),
        &section.objective,
    )
}

pub fn run_scan(config: &RunConfig, format: Format) -> Result<RunOutput> {
    let table = scan(config)?;
    let section = config
        .scan
        .as_ref()
        .ok_or_else(|| invalid("scan: section required"))?;
    let text = match format {
        Format::Json => json_text(&ScanDocument {
            schema: SCAN_SCHEMA,
            command: Command::Scan,
            model: &config.model,
            objective: &section.objective,
            axes: &section.axes,
            table: &table,
        })?,
        Format::Csv => {
            let mut header: Vec<String> = table.axes.iter().map(|a| a.name().to_string()).collect();
            header.push("value".into());
            header.push("error".into());
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| {
                    let mut row: Vec<String> = r.point.iter().map(|&v| num(v)).collect();
                    row.push(opt_num(r.value));
                    row.push(r.error.clone().unwrap_or_default());
                    row
                })
                .collect();
            csv_text(&header, &rows)?
        }
    };
    let failed = table.rows.iter().filter(|r| r.error.is_some()).count();
    let diagnostics = if failed > 0 {
        vec![format!(
            "{failed} of {} grid points failed; see the error column",
            table.rows.len()
        )]
    } else {
        vec![]
    };
    Ok(RunOutput {
        text,
        exit_code: EXIT_OK,
        diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OptimizeResult {
    Known(Box<KnownConfigurations>),
    Custom {
        objective: Objective,
        optimum: Optimum,
    },
}

pub fn optimize(config: &RunConfig) -> Result<OptimizeResult> {
    config.validate(Command::Optimize)?;
    match config
        .optimize
        .as_ref()
        .and_then(|o| o.objective.clone().map(|obj| (o, obj)))
    {
        None => Ok(OptimizeResult::Known(Box::new(
            optimizer::find_known_configurations(config.model.r, config.model.x, config.model.q)?,
        ))),
        Some((section, objective)) => Ok(OptimizeResult::Custom {
            optimum: optimizer::optimize(&config.search_spec(section), &objective)?,
            objective,
        }),
    }
}

fn optimum_rows(name: &str, o: &Optimum, rows: &mut Vec<Vec<String>>) {
    let label = o.label.clone().unwrap_or_default();
    let mut push =
        |q: &str, v: String| rows.push(vec![name.to_string(), label.clone(), q.to_string(), v]);
    for (a, v) in o.axes.iter().zip(&o.point) {
        push(a.name(), num(*v));
    }
    push("value", num(o.value));
    push("capped", o.capped.to_string());
    let degenerate: Vec<&str> = o.degenerate_axes.iter().map(|a| a.name()).collect();
    push("degenerate_axes", degenerate.join(" "));
}

pub fn run_optimize(config: &RunConfig, format: Format) -> Result<RunOutput> {
    let result = optimize(config)?;
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                schema: &'static str,
                command: Command,
                model: &'a ModelConfig,
                result: &'a OptimizeResult,
            }
            json_text(&Doc {
                schema: OPTIMIZE_SCHEMA,
                command: Command::Optimize,
                model: &config.model,
                result: &result,
            })?
        }
        Format::Csv => {
            let mut rows = Vec::new();
            match &result {
                OptimizeResult::Known(k) => {
                    optimum_rows("maximum_search", &k.maximum, &mut rows);
                    optimum_rows("optimal_search", &k.optimal, &mut rows);
                    let l = serde_json::to_value(k.landmarks)
                        .map_err(|e| Error::NumericFailure(format!("json: {e}")))?;
                    if let serde_json::Value::Object(map) = l {
                        for (key, v) in map {
                            let v = v.as_f64().map(num).unwrap_or_default();
                            rows.push(vec!["landmarks".into(), String::new(), key, v]);
                        }
                    }
                }
                OptimizeResult::Custom { optimum, .. } => {
                    optimum_rows("custom", optimum, &mut rows)
                }
            }
            csv_text(
                &[
                    "search".into(),
                    "label".into(),
                    "quantity".into(),
                    "value".into(),
                ],
                &rows,
            )?
        }
    };
    Ok(RunOutput {
        text,
        exit_code: EXIT_OK,
        diagnostics: vec![],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub config_index: usize,
    pub config: ModelConfig,
    #[serde(flatten)]
    pub record: closed_forms::DiscrepancyRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareResult {
    pub records: Vec<CompareRecord>,
    pub summary: DiscrepancySummary,
    pub calibration: Calibration,
    pub calibration_points: Vec<CompareRecord>,
}

pub fn compare(config: &RunConfig) -> Result<CompareResult> {
    config.validate(Command::Compare)?;
    let section = config.compare.clone().unwrap_or_default();
    let configs = match section.configs {
        Some(list) => list,
        None => closed_forms::comparison_grid(&config.model, section.points),
    };
    let reports: Vec<DiscrepancyReport> = configs
        .iter()
        .map(closed_forms::compare)
        .collect::<Result<_>>()?;
    let flatten = |reports: &[DiscrepancyReport]| -> Vec<CompareRecord> {
        reports
            .iter()
            .enumerate()
            .flat_map(|(i, rep)| {
                rep.records.iter().map(move |rec| CompareRecord {
                    config_index: i,
                    config: rep.config,
                    record: rec.clone(),
                })
            })
            .collect()
    };
    let records = flatten(&reports);
    let summary = closed_forms::summarize(&reports);
    let calibration_points: Vec<CompareRecord> = records
        .iter()
        .filter(|r| r.record.entry == Entry::Q11 && r.config.theta == 0.0 && r.config.phi == 0.0)
        .cloned()
        .collect();
    Ok(CompareResult {
        records,
        summary,
        calibration: closed_forms::calibrate()?,
        calibration_points,
    })
}

pub fn run_compare(config: &RunConfig, format: Format) -> Result<RunOutput> {
    let result = compare(config)?;
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                schema: &'static str,
                command: Command,
                #[serde(flatten)]
                result: &'a CompareResult,
            }
            json_text(&Doc {
                schema: COMPARE_SCHEMA,
                command: Command::Compare,
                result: &result,
            })?
        }
        Format::Csv => {
            let header: Vec<String> = [
                "config_index",
                "r",
                "q",
                "beta",
                "theta",
                "phi",
                "x",
                "alpha",
                "lambda1",
                "lambda2",
                "entry",
                "closed_form",
                "numeric",
                "abs_diff",
                "rel_diff",
                "closed_q_term",
                "numeric_q_term",
                "q_term_abs_diff",
                "q_independent_offset",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<String>> = result
                .records
                .iter()
                .map(|r| {
                    let c = &r.config;
                    let d = &r.record;
                    let mut row = vec![r.config_index.to_string()];
                    row.extend(
                        [
                            c.r, c.q, c.beta, c.theta, c.phi, c.x, c.alpha, c.lambda1, c.lambda2,
                        ]
                        .iter()
                        .map(|&v| num(v)),
                    );
                    row.push(d.entry.name().to_string());
                    row.extend(
                        [
                            d.closed_form,
                            d.numeric,
                            d.abs_diff,
                            d.rel_diff,
                            d.closed_q_term,
                            d.numeric_q_term,
                            d.q_term_abs_diff,
                            d.q_independent_offset,
                        ]
                        .iter()
                        .map(|&v| num(v)),
                    );
                    row
                })
                .collect();
            csv_text(&header, &rows)?
        }
    };
    let mut diagnostics = Vec::new();
    if result.summary.tension_present {
        let mut note = String::from("closed-form q-independent terms differ from numerics: ");
        let _ = write!(note, "{}", closed_forms::KNOWN_TENSION);
        diagnostics.push(note);
    }
    Ok(RunOutput {
        text,
        exit_code: EXIT_OK,
        diagnostics,
    })
}

/// Runs `command`; the format falls back to the config's, then to CSV for scans and
/// JSON otherwise.
pub fn run(command: Command, config: &RunConfig, format: Option<Format>) -> Result<RunOutput> {
    let format = format.or(config.format).unwrap_or(match command {
        Command::Scan => Format::Csv,
        _ => Format::Json,
    });
    match command {
        Command::Eval => run_eval(config, format),
        Command::Scan => run_scan(config, format),
        Command::Optimize => run_optimize(config, format),
        Command::Compare => run_compare(config, format),
    }
}

/// Reads the config file, runs the command and writes the result to `out`, the
/// config's output path or `stdout`. Returns the process exit code.
pub fn execute(
    command: Command,
    config_path: &Path,
    out: Option<&Path>,
    format: Option<Format>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let outcome = std::fs::read_to_string(config_path)
        .map_err(|e| {
            invalid(format!(
                "config: cannot read {}: {e}",
                config_path.display()
            ))
        })
        .and_then(|text| parse_config(&text))
        .and_then(|config| {
            let output = run(command, &config, format)?;
            let target = out.map(Path::to_path_buf).or(config.output.clone());
            match target {
                Some(path) => std::fs::write(&path, &output.text).map_err(|e| {
                    invalid(format!("output: cannot write {}: {e}", path.display()))
                })?,
                None => stdout
                    .write_all(output.text.as_bytes())
                    .map_err(|e| Error::NumericFailure(format!("stdout: {e}")))?,
            }
            Ok(output)
        });
    match outcome {
        Ok(output) => {
            for d in &output.diagnostics {
                let _ = writeln!(stderr, "{d}");
            }
            output.exit_code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_CONFIG
        }
    }
}
