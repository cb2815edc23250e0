//! Standardized largest singular value `σ_1 / sqrt(Σ σ_i²)`.
//!
//! The unit rank-2 skew matrices form a manifold of dimension `2(p-2)` on the
//! unit sphere of `Skew(p)` with critical radius `π/4`. The tube formula is
//! therefore exact for `x >= cos(π/4) = 1/√2`, where the upper probability is
//! a finite sum of beta upper tails weighted by `g^{ij} g_{ij}`.

use crate::error::{domain, Error, Result};
use crate::specfun::{beta_upper, Probability};

use super::hankel::hankel_gram;
use super::law::SpectrumLaw;

/// Lower end of the exact range, `cos θ_c = 1/√2`.
pub const CRITICAL_POINT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Relative tolerance below [`CRITICAL_POINT`] still accepted as the critical
/// point itself (covers 8-digit renderings of 1/√2 and rounding in
/// `σ_1 / ||σ||` when the top two singular values tie).
pub const VALIDITY_SLACK: f64 = 1e-8;

/// Upper probability `P(σ_1 / sqrt(Σ σ_i²) > x)` for `1/√2 <= x <= 1`.
pub fn standardized_sv_upper(p: usize, x: f64) -> Result<Probability> {
    let gram = hankel_gram(p)?;
    if x.is_nan() || x > 1.0 + 1e-12 {
        return domain(format!(
            "standardized statistic must lie in [0, 1], got {x}"
        ));
    }
    if x < CRITICAL_POINT * (1.0 - VALIDITY_SLACK) {
        return Err(Error::Validity(format!(
            "x = {x} is below the critical point 1/√2; the tube formula is not exact there"
        )));
    }
    let law = SpectrumLaw::new(p)?;
    let y = (x * x).clamp(0.0, 1.0);
    let n = law.n as f64;
    let mut total = 0.0;
    for i in 1..=law.t {
        for j in 1..=law.t {
            let nu = law.dof(i, j);
            let tail = beta_upper(nu / 2.0, (n - nu) / 2.0, y)?.value();
            total += gram.product(i - 1, j - 1) * tail;
        }
    }
    Probability::from_rounded(total, 1e-10)
}

/// `1 - [(r11-r22)² + (r12+r21)²] / (1 - r11 r22 + r12 r21)²`, whose supremum
/// over 2×2 matrices `R = H̃'H` (outside SO(2)) is `cot² θ_c`.
pub fn critical_radius_objective(r: [[f64; 2]; 2]) -> Result<f64> {
    let [[r11, r12], [r21, r22]] = r;
    let denom = 1.0 - r11 * r22 + r12 * r21;
    if denom.abs() < 1e-9 {
        return Err(Error::ExcludedPoint(format!(
            "denominator {denom:e} vanishes; R is at (or next to) SO(2)"
        )));
    }
    let num = (r11 - r22).powi(2) + (r12 + r21).powi(2);
    Ok(1.0 - num / (denom * denom))
}

/// Euler characteristic `2 Σ g^{ij} g_{ij}` of the rank-2 manifold, which is
/// `2 floor(p/2)`.
pub fn euler_characteristic(p: usize) -> Result<i64> {
    let gram = hankel_gram(p)?;
    let raw = 2.0 * gram.trace_identity();
    let expected = 2.0 * (p / 2) as f64;
    if (raw - expected).abs() >= 1e-8 {
        return Err(Error::Numerical(format!(
            "Gauss-Bonnet sum {raw} differs from {expected}"
        )));
    }
    Ok(raw.round() as i64)
}
