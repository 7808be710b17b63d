// Output state of the interferometer and its derivatives with respect to the two
// phases, analytic against central finite differences.

use cv_metrology::model::{build_mz_model, jacobian_analytic, jacobian_fd, ModelConfig};

pub fn run_example() -> cv_metrology::Result<()> {
    let config = ModelConfig::new(0.7, 0.4)
        .with_q(0.5)
        .with_beta(0.2)
        .with_theta(1.1)
        .with_phi(0.6)
        .with_alpha(0.3)
        .with_lambdas(0.25, -0.4);
    println!("gates: {}", build_mz_model(&config)?.len());
    println!("gamma = alpha + 2 lambda1 = {:.6}", config.gamma());

    let exact = jacobian_analytic(&config)?;
    for step in [1e-3, 5e-4, 1e-5] {
        let fd = jacobian_fd(&config, step)?;
        let gap = (0..2)
            .map(|k| {
                (&exact.dcov[k] - &fd.dcov[k])
                    .amax()
                    .max((&exact.dmean[k] - &fd.dmean[k]).amax())
            })
            .fold(0.0, f64::max);
        println!("step {step:.0e}: max |analytic - fd| = {gap:.3e}");
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
