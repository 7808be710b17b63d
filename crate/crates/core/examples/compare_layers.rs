// Closed forms against the numeric pipeline, including the beam-splitter
// calibration and the known offset in the q-independent terms.

use cv_metrology::closed_forms::{calibrate, compare, summarize, KNOWN_TENSION};
use cv_metrology::model::ModelConfig;

pub fn run_example() -> cv_metrology::Result<()> {
    let cal = calibrate()?;
    println!(
        "calibration selects {:?}, displacement scale ratio {:.12}",
        cal.selected, cal.displacement_scale_ratio
    );

    let configs = [
        ModelConfig::new(0.5, 0.0).with_q(1.0),
        ModelConfig::new(0.5, 0.5)
            .with_q(0.7)
            .with_theta(0.9)
            .with_phi(0.4)
            .with_alpha(0.3),
    ];
    let reports = configs
        .iter()
        .map(compare)
        .collect::<cv_metrology::Result<Vec<_>>>()?;
    for rep in &reports {
        for rec in &rep.records {
            println!(
                "{:>4}: closed {:>12.6} numeric {:>12.6} offset(q=0) {:>9.6} q-term diff {:.2e}",
                rec.entry.name(),
                rec.closed_form,
                rec.numeric,
                rec.q_independent_offset,
                rec.q_term_abs_diff
            );
        }
    }
    let summary = summarize(&reports);
    println!(
        "complete: {}, tension present: {}",
        summary.complete, summary.tension_present
    );
    println!("{KNOWN_TENSION}");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
