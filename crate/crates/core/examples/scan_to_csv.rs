// Scans closed-form Q22 over (theta, phi) through the CLI layer and writes CSV.

use cv_metrology::cli::{run, Command, Format, RunConfig, ScanSection};
use cv_metrology::model::ModelConfig;
use cv_metrology::optimizer::{Axis, AxisSpec, Objective, ObjectiveKind};
use std::f64::consts::{FRAC_PI_2, PI};

pub fn run_example() -> cv_metrology::Result<()> {
    let mut config = RunConfig::new(ModelConfig::new(0.5, 0.5));
    config.scan = Some(ScanSection {
        axes: vec![
            AxisSpec::new(Axis::Theta, 0.0, PI, 5),
            AxisSpec::new(Axis::Phi, 0.0, FRAC_PI_2, 3),
        ],
        objective: Objective::new(ObjectiveKind::Q22),
    });
    let out = run(Command::Scan, &config, Some(Format::Csv))?;
    let path = std::env::temp_dir().join("cv_metrology_scan.csv");
    std::fs::write(&path, &out.text)
        .map_err(|e| cv_metrology::Error::InvalidArgument(e.to_string()))?;
    print!("{}", out.text);
    println!("written to {}", path.display());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
