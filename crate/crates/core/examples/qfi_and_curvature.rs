// QFI matrix, Uhlmann curvature, quantumness and scalar bounds for the sloppy
// baseline and for the optimal configuration.

use cv_metrology::gaussian::Matrix;
use cv_metrology::metrology::{metrology_report, ReportOptions};
use cv_metrology::model::{jacobian_analytic, ModelConfig};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

pub fn run_example() -> cv_metrology::Result<()> {
    let options = ReportOptions {
        weight: Matrix::identity(2, 2),
        repetitions: 100,
        ..ReportOptions::default()
    };
    let cases = [
        (
            "baseline x = 0",
            ModelConfig::new(0.5, 0.0).with_theta(0.4).with_phi(0.3),
        ),
        (
            "generic",
            ModelConfig::new(0.5, 0.5)
                .with_theta(0.4)
                .with_phi(0.3)
                .with_alpha(1.0),
        ),
        (
            "optimal",
            ModelConfig::new(0.5, 0.5)
                .with_theta(FRAC_PI_2)
                .with_phi(FRAC_PI_4),
        ),
    ];
    for (name, config) in cases {
        let report = metrology_report(&jacobian_analytic(&config)?, &options)?;
        println!("{name}");
        println!("  Q = {:?}", report.qfi.entries().as_slice());
        println!("  U12 = {:.6e}", report.uhlmann.get(0, 1));
        println!(
            "  eigenvalues = {:?}, sloppy = {}",
            report.sloppiness.eigenvalues, report.sloppiness.sloppy
        );
        match (&report.quantumness, &report.bounds) {
            (Ok((general, two)), Ok(b)) => {
                println!("  R = {general:.3e} (two-parameter formula {two:.3e})");
                println!(
                    "  C_Q = {:.6e}, (1 + R) C_Q = {:.6e}",
                    b.c_q, b.bracket_upper
                );
            }
            (Err(e), _) | (_, Err(e)) => println!("  refused: {e}"),
        }
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
