//! Distributions of the largest singular value of skew-symmetric Gaussian
//! random matrices, and their use as tests of subtractivity in Scheffé's
//! paired-comparison model.
//!
//! * [`specfun`]: log-gamma and incomplete gamma/beta tails.
//! * [`rmtdist`]: exact and tube-method laws of `σ_1` and `σ_1/||σ||`.
//! * [`mc`]: seeded Monte-Carlo sampler and spectrum extraction.
//! * [`paired`]: score sheets, least-squares fit, tests and the residual plot.

pub mod error;
pub mod linalg;
pub mod mc;
pub mod paired;
pub mod rmtdist;
pub mod specfun;

pub use error::{Error, Result};
pub use mc::{SingularSpectrum, SkewMatrix, TopPlane};
pub use paired::{ScheffeFit, ScoreSheet, SkewObservations, TestReport};
pub use rmtdist::{HankelGram, SpectrumLaw};
pub use specfun::Probability;
