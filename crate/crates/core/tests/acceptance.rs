//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one `[PASS]` or `[FAIL]` line; exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::path::Path;
use std::process::Command;

use common::{random_config, rng};
use cv_metrology::closed_forms::{
    calibrate, compare, comparison_grid, det_ratio, f22, landmarks, q22_closed, summarize,
    ClosedFormInputs, KNOWN_TENSION,
};
use cv_metrology::gaussian::SymplecticForm;
use cv_metrology::metrology::{
    qfi_matrix, quantumness_general, quantumness_two_param, sloppiness_report, uhlmann_matrix,
};
use cv_metrology::model::{
    build_mz_model, evaluate_state, jacobian_analytic, jacobian_fd, ModelConfig,
};
use cv_metrology::optimizer::{find_known_configurations, Axis};
use rand::Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn criterion_1() -> Outcome {
    let mut rng = rng(1);
    let omega = SymplecticForm::new(2);
    let (mut worst_gate, mut worst_det) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let c = random_config(&mut rng);
        for gate in build_mz_model(&c).unwrap() {
            let (s, _) = gate.symplectic(2).unwrap();
            worst_gate = worst_gate.max(omega.defect(&s));
        }
        let det = evaluate_state(&c).unwrap().cov().determinant();
        worst_det = worst_det.max((det - 1.0 / 16.0).abs());
    }
    (
        worst_gate <= 1e-12 && worst_det <= 1e-9,
        format!("max |S Omega S^T - Omega| = {worst_gate:.2e}, max |det - 1/16| = {worst_det:.2e}"),
    )
}

fn jet_gap(c: &ModelConfig, h: f64) -> f64 {
    let exact = jacobian_analytic(c).unwrap();
    let fd = jacobian_fd(c, h).unwrap();
    (0..2)
        .map(|k| {
            (&exact.dcov[k] - &fd.dcov[k])
                .amax()
                .max((&exact.dmean[k] - &fd.dmean[k]).amax())
        })
        .fold(0.0, f64::max)
}

fn criterion_2() -> Outcome {
    let mut rng = rng(2);
    let (mut worst, mut gap_h, mut gap_half, mut coarse, mut coarse_half) =
        (0.0f64, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..200 {
        let c = random_config(&mut rng);
        let g = jet_gap(&c, 1e-5);
        worst = worst.max(g);
        gap_h += g;
        gap_half += jet_gap(&c, 0.5e-5);
        coarse += jet_gap(&c, 1e-3);
        coarse_half += jet_gap(&c, 0.5e-3);
    }
    let ratio = gap_h / gap_half;
    (
        worst <= 1e-6 && (3.0..=5.0).contains(&ratio),
        format!(
            "max gap {worst:.2e} at h = 1e-5; gap ratio h/(h/2) = {ratio:.3} at h = 1e-5 (rounding-limited), {:.4} at h = 1e-3",
            coarse / coarse_half
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = rng(3);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (mut worst_det, mut worst_vec) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let c = random_config(&mut rng).with_q(rng.random_range(0.0..=1.0));
        let c = ModelConfig {
            r: rng.random_range(0.0..=1.5),
            x: 0.0,
            ..c
        };
        let q = qfi_matrix(&jacobian_analytic(&c).unwrap()).unwrap();
        worst_det = worst_det.max(q.determinant() / q.trace().powi(2));
        let v = &sloppiness_report(&q, None).unwrap().eigenvectors[1];
        let sign = v[0].signum();
        worst_vec = worst_vec.max((sign * v[0] - s).abs().max((sign * v[1] + s).abs()));
    }
    (
        worst_det <= 1e-10 && worst_vec <= 1e-6,
        format!("max det/tr^2 = {worst_det:.2e}, max null-vector deviation = {worst_vec:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst = [(0.0f64, 0.0f64); 2];
    for (k, &q) in [0.0, 0.7].iter().enumerate() {
        for &r in &[0.25, 0.5, 1.0] {
            for &x in &[0.25, 0.5, 1.0] {
                for j in 0..16 {
                    let c = ModelConfig::new(r, x)
                        .with_q(q)
                        .with_theta(FRAC_PI_2)
                        .with_phi(FRAC_PI_4)
                        .with_gamma(TAU * j as f64 / 16.0);
                    let jet = jacobian_analytic(&c).unwrap();
                    let (qm, um) = (qfi_matrix(&jet).unwrap(), uhlmann_matrix(&jet).unwrap());
                    let rr = quantumness_general(&qm, &um).unwrap();
                    worst[k].0 = worst[k].0.max(um.get(0, 1).abs());
                    worst[k].1 = worst[k].1.max(rr);
                }
            }
        }
    }
    let ok = |w: (f64, f64)| w.0 <= 1e-10 && w.1 <= 1e-10;
    (
        ok(worst[0]) && ok(worst[1]),
        format!(
            "q=0: max |U12| = {:.2e}, max R = {:.2e}; q=0.7: max |U12| = {:.2e}, max R = {:.2e}",
            worst[0].0, worst[0].1, worst[1].0, worst[1].1
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut per_q = Vec::new();
    for &q in &[0.0, 0.7] {
        let mut worst = 0.0f64;
        let base = ModelConfig::new(0.5, 0.5)
            .with_q(q)
            .with_beta(0.3)
            .with_theta(FRAC_PI_2)
            .with_phi(FRAC_PI_4);
        let reference = jacobian_analytic(&base).unwrap();
        let (q0, u0) = (
            qfi_matrix(&reference).unwrap(),
            uhlmann_matrix(&reference).unwrap(),
        );
        for i in 0..5 {
            for j in 0..5 {
                let c = base.with_lambdas(TAU * i as f64 / 5.0, TAU * j as f64 / 5.0);
                let jet = jacobian_analytic(&c).unwrap();
                let (qm, um) = (qfi_matrix(&jet).unwrap(), uhlmann_matrix(&jet).unwrap());
                worst = worst.max((qm.entries() - q0.entries()).amax());
                worst = worst.max((um.entries() - u0.entries()).amax());
            }
        }
        per_q.push(worst);
    }
    (
        per_q.iter().all(|&w| w <= 1e-10),
        format!(
            "max entry variation over the 5x5 (lambda1, lambda2) grid: q=0: {:.2e}, q=0.7: {:.2e}",
            per_q[0], per_q[1]
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let check = |failures: &mut Vec<String>, name: &str, a: f64, b: f64, r: f64, x: f64| {
        if !rel_close(a, b, 1e-12) {
            failures.push(format!("{name} at r={r} x={x}: {a} vs {b}"));
        }
    };
    for i in 0..=8 {
        for j in 0..=8 {
            let (r, x) = (0.25 * i as f64, 0.25 * j as f64);
            let l = landmarks(r, x, 0.0).unwrap();
            let max = ClosedFormInputs::maximum(r, x);
            let opt = ClosedFormInputs::optimal(r, x);
            let inf = max.with_gamma(PI);
            check(
                &mut failures,
                "Q22 max",
                q22_closed(&max),
                2.0 * (2.0 * (r + x)).cosh().powi(2),
                r,
                x,
            );
            check(
                &mut failures,
                "Q22 opt",
                q22_closed(&opt),
                2.0 * ((2.0 * r).cosh() * (2.0 * x).cosh()).powi(2),
                r,
                x,
            );
            let ratio = q22_closed(&opt) / q22_closed(&max);
            let expected = 0.25 * (1.0 + (2.0 * (r - x)).cosh() / (2.0 * (r + x)).cosh()).powi(2);
            check(&mut failures, "opt/max ratio", ratio, expected, r, x);
            if !(0.25 - 1e-12..=1.0 + 1e-12).contains(&ratio) {
                failures.push(format!(
                    "opt/max ratio {ratio} outside [1/4, 1] at r={r} x={x}"
                ));
            }
            check(
                &mut failures,
                "Q22 inf",
                q22_closed(&inf),
                1.0 + (4.0 * (r - x)).cosh(),
                r,
                x,
            );
            let expected = ((2.0 * x).tanh() * (2.0 * r).tanh() - 1.0).powi(2);
            check(
                &mut failures,
                "inf/opt ratio",
                q22_closed(&inf) / q22_closed(&opt),
                expected,
                r,
                x,
            );
            check(
                &mut failures,
                "f22 max",
                f22(&max),
                (2.0 * r + 4.0 * x).exp(),
                r,
                x,
            );
            let expected = (1.0 + (-4.0 * x).exp()) * (1.0 + (-4.0 * r).exp()) / 4.0;
            check(
                &mut failures,
                "f22 ratio",
                f22(&opt) / f22(&max),
                expected,
                r,
                x,
            );
            check(
                &mut failures,
                "landmark ratio",
                l.ratio_opt_max,
                ratio,
                r,
                x,
            );
        }
    }
    let n = failures.len();
    (
        n == 0,
        format!(
            "81 (r, x) points, {n} identity failures{}",
            failures
                .first()
                .map(|f| format!("; first: {f}"))
                .unwrap_or_default()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut bounded = true;
    for i in 1..=8 {
        for j in 1..=8 {
            let ratio = det_ratio(0.25 * i as f64, 0.25 * j as f64).unwrap().ratio;
            bounded &= ratio.is_some_and(|v| v > 0.0 && v < 2.0);
        }
    }
    let mut monotone = true;
    let mut detail = String::new();
    for &x in &[0.5, 1.0] {
        let series: Vec<f64> = (1..=20)
            .map(|k| det_ratio(0.1 * k as f64, x).unwrap().ratio.unwrap())
            .collect();
        bounded &= series.iter().all(|&v| v > 0.0 && v < 2.0);
        if let Some(k) = series.windows(2).position(|w| w[1] >= w[0]) {
            monotone = false;
            detail += &format!(
                "; x={x}: increases at r={:.1} ({:.4} -> {:.4})",
                0.1 * (k + 1) as f64,
                series[k],
                series[k + 1]
            );
        }
    }
    (
        bounded && monotone,
        format!("ratio in (0, 2): {bounded}, decreasing in r: {monotone}{detail}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let (mut models, mut worst_gap, mut lo, mut hi) = (0, 0.0f64, f64::INFINITY, 0.0f64);
    while models < 100 {
        let c = random_config(&mut rng);
        let jet = jacobian_analytic(&c).unwrap();
        let (q, u) = (qfi_matrix(&jet).unwrap(), uhlmann_matrix(&jet).unwrap());
        if sloppiness_report(&q, None).unwrap().sloppy {
            continue;
        }
        let g = quantumness_general(&q, &u).unwrap();
        let t = quantumness_two_param(&q, &u).unwrap();
        worst_gap = worst_gap.max((g - t).abs());
        lo = lo.min(g.min(t));
        hi = hi.max(g.max(t));
        models += 1;
    }
    (
        worst_gap <= 1e-9 && lo >= 0.0 && hi <= 1.0,
        format!(
            "100 models: max |R_general - R_two_param| = {worst_gap:.2e}, R in [{lo:.3e}, {hi:.6}]"
        ),
    )
}

fn criterion_9() -> Outcome {
    let known = find_known_configurations(0.5, 0.5, 0.0).unwrap();
    let (m, o) = (&known.maximum, &known.optimal);
    let target = 2.0 * 2f64.cosh().powi(2);
    let angle_ok = |opt: &cv_metrology::optimizer::Optimum, axis: Axis, want: f64| {
        opt.axes
            .iter()
            .position(|&a| a == axis)
            .is_some_and(|k| axis.distance(opt.point[k], want) <= 1e-3)
    };
    let max_ok = angle_ok(m, Axis::Theta, 0.0)
        && angle_ok(m, Axis::Phi, 0.0)
        && angle_ok(m, Axis::Gamma, 0.0)
        && (m.value - target).abs() <= 1e-6 * target;
    let opt_ok = angle_ok(o, Axis::Theta, FRAC_PI_2)
        && angle_ok(o, Axis::Phi, FRAC_PI_4)
        && o.value.abs() <= 1e-10;
    (
        max_ok && opt_ok && m.label.is_some() && o.label.is_some(),
        format!(
            "maximum at {:?} = {:.10} (target {:.10}), optimal at {:?} with R = {:.2e}",
            m.point, m.value, target, o.point, -o.value
        ),
    )
}

fn criterion_10() -> Outcome {
    let base = ModelConfig::new(0.5, 0.5)
        .with_q(0.7)
        .with_beta(0.3)
        .with_alpha(0.4)
        .with_lambdas(0.2, -0.1);
    let reports: Vec<_> = comparison_grid(&base, 3)
        .iter()
        .map(|c| compare(c).unwrap())
        .collect();
    let summary = summarize(&reports);
    let calibration = calibrate().unwrap();
    let readme =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md"))
            .unwrap_or_default();
    let documented = readme.contains(KNOWN_TENSION);
    let complete = summary.complete && summary.configs == 27 && summary.records == 27 * 4;
    (
        complete && calibration.q_term_error <= 1e-8 && summary.tension_present && documented,
        format!(
            "{} configs, {} records, complete: {complete}; calibration q-term error {:.2e}; tension present: {}; documented in README: {documented}",
            summary.configs, summary.records, calibration.q_term_error, summary.tension_present
        ),
    )
}

fn cli(args: &[&str], config: &Path, threads: Option<&str>) -> std::process::Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cv-metrology"));
    c.env_remove("CV_METROLOGY_THREADS");
    if let Some(t) = threads {
        c.env("CV_METROLOGY_THREADS", t);
    }
    c.args(args).arg("--config").arg(config).output().unwrap()
}

fn criterion_11() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let model = serde_json::json!({"r": 0.5, "q": 0.7, "beta": 0.3, "theta": 1.1, "phi": 0.4, "x": 0.5, "alpha": 0.2});
    let write = |name: &str, v: serde_json::Value| {
        let p = dir.path().join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p
    };
    let eval = write("eval.json", serde_json::json!({"model": model}));
    let scan = write(
        "scan.json",
        serde_json::json!({"model": model, "scan": {
        "axes": [{"axis": "theta", "min": 0.0, "max": 3.0, "points": 5}, {"axis": "gamma", "min": 0.0, "max": 6.0, "points": 5}],
        "objective": {"kind": "det_q", "layer": "numeric"}}}),
    );
    let compare = write(
        "compare.json",
        serde_json::json!({"model": model, "compare": {"points": 2}}),
    );
    let sloppy = write(
        "sloppy.json",
        serde_json::json!({"model": {"r": 0.5, "q": 0.7, "theta": 1.1, "phi": 0.4, "x": 0.0}}),
    );
    let broken = write(
        "broken.json",
        serde_json::json!({"model": {"q": 0.7, "theta": 1.1, "phi": 0.4, "x": 0.5}}),
    );

    let mut problems = Vec::new();
    for (cmd, cfg) in [("eval", &eval), ("scan", &scan), ("compare", &compare)] {
        let a = cli(&[cmd], cfg, None);
        let b = cli(&[cmd], cfg, Some("1"));
        let c = cli(&[cmd], cfg, Some("4"));
        if a.status.code() != Some(0) {
            problems.push(format!("{cmd} exit {:?}", a.status.code()));
        }
        if a.stdout != b.stdout || a.stdout != c.stdout {
            problems.push(format!("{cmd} output not byte-identical"));
        }
    }
    if cli(&["eval"], &sloppy, None).status.code() != Some(2) {
        problems.push("sloppy eval did not exit 2".into());
    }
    if cli(&["eval"], &broken, None).status.code() != Some(1) {
        problems.push("invalid config did not exit 1".into());
    }
    let first = cli(&["eval"], &eval, None).stdout;
    let echoed = dir.path().join("echo.json");
    std::fs::write(&echoed, &first).unwrap();
    let second = cli(&["eval"], &echoed, None).stdout;
    if first != second {
        problems.push("eval JSON round trip changed the output".into());
    }
    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    let jet = jacobian_analytic(&serde_json::from_value(model.clone()).unwrap()).unwrap();
    let q = qfi_matrix(&jet).unwrap();
    let printed = doc["result"]["qfi"][1][1].as_f64();
    if printed != Some(q.get(1, 1)) {
        problems.push(format!(
            "Q22 in JSON {printed:?} differs from library {}",
            q.get(1, 1)
        ));
    }
    (
        problems.is_empty(),
        if problems.is_empty() {
            "exit codes 0/1/2, byte-identical reruns, lossless JSON round trip".into()
        } else {
            problems.join("; ")
        },
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("symplectic gates and pure outputs", criterion_1),
        ("analytic Jacobian against finite differences", criterion_2),
        ("sloppy baseline at x = 0", criterion_3),
        (
            "weak compatibility at the optimal configuration",
            criterion_4,
        ),
        ("covariance at the optimal configuration", criterion_5),
        ("closed-form identities", criterion_6),
        ("determinant ratio bounds and monotonicity", criterion_7),
        ("quantumness definitions agree", criterion_8),
        ("optimizer recovers known configurations", criterion_9),
        ("discrepancy report and calibration", criterion_10),
        ("CLI contract", criterion_11),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        println!(
            "[{}] criterion {}: {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            n + 1
        );
        failed += usize::from(!ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
