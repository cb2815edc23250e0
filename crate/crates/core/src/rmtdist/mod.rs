//! Distribution laws for the singular values of a `p×p` skew-symmetric
//! matrix whose upper-triangular entries are i.i.d. standard normal.
//!
//! * [`law`]: dimension constants, the volume of the frame manifold,
//!   normalizing constants and the joint density of the singular values.
//! * [`hankel`]: the Hankel matrix `g_ij = Γ(p-i-j+1/2)`, its closed-form
//!   inverse and an independent triangular-factorization route to it.
//! * [`cdf`]: exact distribution function of the largest singular value and
//!   its chi-square tail expansion.
//! * [`tube`]: the standardized largest singular value, the critical-radius
//!   objective and the Euler characteristic identity.

pub mod cdf;
pub mod hankel;
pub mod law;
pub mod tube;

pub use cdf::{largest_sv_cdf, largest_sv_tail_asymptotic, largest_sv_upper};
pub use hankel::{hankel_gram, hankel_inverse_oracle, HankelFactorization, HankelGram};
pub use law::{
    joint_density, ln_volume_u, normalizing_constants, volume_u, NormalizingConstants, SpectrumLaw,
};
pub use tube::{
    critical_radius_objective, euler_characteristic, standardized_sv_upper, CRITICAL_POINT,
    VALIDITY_SLACK,
};
