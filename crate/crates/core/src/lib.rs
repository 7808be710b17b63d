//! Gaussian multi-parameter quantum metrology for a Mach-Zehnder interferometer
//! with two consecutive phase shifts on one arm and a squeezer between them.
//!
//! The crate is organised bottom-up:
//!
//! * [`gaussian`]: covariance-matrix/mean representation and the four gate types.
//! * [`model`]: the parametrised interferometer and its derivatives with respect
//!   to the two phases (analytic and finite-difference).
//! * [`metrology`]: QFI matrix, Uhlmann curvature, quantumness `R`, scalar
//!   Cramér-Rao bounds and sloppiness diagnostics.
//! * [`closed_forms`]: closed-form expressions, landmark values and a
//!   cross-check against the first-principles pipeline.
//! * [`optimizer`]: grid scans and Nelder-Mead refinement over configurations.
//! * [`cli`]: JSON run configurations and the `eval | scan | optimize | compare`
//!   front end used by the `cv-metrology` binary.
//!
//! ```
//! use cv_metrology::{metrology, model::{jacobian_analytic, ModelConfig}};
//!
//! let config = ModelConfig::new(0.5, 0.5).with_theta(std::f64::consts::FRAC_PI_2)
//!     .with_phi(std::f64::consts::FRAC_PI_4);
//! let jet = jacobian_analytic(&config).unwrap();
//! let q = metrology::qfi_matrix(&jet).unwrap();
//! let u = metrology::uhlmann_matrix(&jet).unwrap();
//! assert!(metrology::quantumness_two_param(&q, &u).unwrap() < 1e-10);
//! ```

pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod gaussian;
pub mod metrology;
pub mod model;
pub mod optimizer;

pub use error::{Error, Result};
pub use gaussian::{BeamSplitterConvention, GaussianGate, GaussianState, Matrix, Vector};
pub use metrology::{CurvatureConvention, QfiMatrix, UhlmannMatrix};
pub use model::{ModelConfig, ModelJet};
