// Builds a small two-mode circuit gate by gate and checks that the result is a
// pure Gaussian state.

use cv_metrology::gaussian::{
    apply_circuit, compose_circuit, symplectic_eigenvalues, vacuum_state, BeamSplitterConvention,
    GaussianGate, SymplecticForm,
};

pub fn run_example() -> cv_metrology::Result<()> {
    let gates = [
        GaussianGate::Squeezer {
            mode: 0,
            magnitude: 0.6,
            angle: 0.0,
        },
        GaussianGate::Squeezer {
            mode: 1,
            magnitude: 0.6,
            angle: 0.0,
        },
        GaussianGate::Displacement {
            mode: 0,
            amplitude: 0.8,
            angle: 0.3,
        },
        GaussianGate::BeamSplitter {
            modes: (0, 1),
            mix: std::f64::consts::FRAC_PI_4,
            phase: std::f64::consts::FRAC_PI_2,
            convention: BeamSplitterConvention::Transmissivity,
        },
        GaussianGate::PhaseRotation {
            mode: 0,
            angle: 0.4,
        },
    ];

    let (s, _) = compose_circuit(&gates, 2)?;
    println!(
        "symplectic defect of the whole circuit: {:.2e}",
        SymplecticForm::new(2).defect(&s)
    );

    let state = apply_circuit(&vacuum_state(2)?, &gates)?;
    println!("mean = {:?}", state.mean().as_slice());
    println!(
        "det(cov) = {:.12} (pure two-mode: 1/16)",
        state.cov().determinant()
    );
    println!(
        "symplectic eigenvalues = {:?}",
        symplectic_eigenvalues(state.cov())
    );
    println!("class = {:?}", state.physicality().class);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
