use std::f64::consts::{LN_2, PI};

use crate::error::{domain, Result};
use crate::specfun::ln_gamma_unchecked as ln_gamma;

/// Integer constants attached to the matrix order `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumLaw {
    /// Matrix order.
    pub p: usize,
    /// Number of singular-value pairs, `floor(p/2)`.
    pub t: usize,
    /// Parity, `p - 2t`.
    pub eps: usize,
    /// Dimension of the space of skew-symmetric matrices, `p(p-1)/2`.
    pub n: usize,
    /// Dimension of the manifold of unit rank-2 skew matrices, `2(p-2)`.
    pub d: usize,
}

impl SpectrumLaw {
    pub fn new(p: usize) -> Result<Self> {
        if p < 2 {
            return domain(format!("matrix order must be at least 2, got {p}"));
        }
        let t = p / 2;
        Ok(SpectrumLaw {
            p,
            t,
            eps: p - 2 * t,
            n: p * (p - 1) / 2,
            d: 2 * (p - 2),
        })
    }

    /// Chi-square degrees of freedom `2p - 2i - 2j + 1` for 1-based `(i, j)`.
    pub fn dof(&self, i: usize, j: usize) -> f64 {
        (2 * self.p + 1 - 2 * i - 2 * j) as f64
    }
}

/// `ln Vol(U(p))`, with `U(p) = O(p)/H(p)`.
pub fn ln_volume_u(p: usize) -> Result<f64> {
    if p < 1 {
        return domain("volume of U(p) requires p >= 1");
    }
    let t = p / 2;
    let half_p = p as f64 / 2.0;
    let mut ln_vol = t as f64 * LN_2 + (p * (p - 1)) as f64 / 4.0 * PI.ln();
    for i in 1..=t {
        ln_vol -= ln_gamma(half_p - i as f64 + 1.0) + ln_gamma(half_p - i as f64 + 0.5);
    }
    Ok(ln_vol)
}

/// `Vol(U(p))`.
pub fn volume_u(p: usize) -> Result<f64> {
    ln_volume_u(p).map(f64::exp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizingConstants {
    /// Constant of the joint singular-value density.
    pub c_p: f64,
    /// Constant in front of the determinant formula, `c_p / 2^t`.
    pub d_p: f64,
    pub ln_c_p: f64,
    pub ln_d_p: f64,
}

pub fn normalizing_constants(p: usize) -> Result<NormalizingConstants> {
    let law = SpectrumLaw::new(p)?;
    let ln_c_p = ln_volume_u(p)? - (p * (p - 1)) as f64 / 4.0 * (2.0 * PI).ln();
    let ln_d_p = ln_c_p - law.t as f64 * LN_2;
    Ok(NormalizingConstants {
        c_p: ln_c_p.exp(),
        d_p: ln_d_p.exp(),
        ln_c_p,
        ln_d_p,
    })
}

/// Joint density of the ordered singular values `σ_1 > … > σ_t > 0`.
///
/// The density vanishes on the boundary of the ordered cone (ties, and a zero
/// singular value when `p` is odd); those points return exactly 0.
pub fn joint_density(sigma: &[f64], p: usize) -> Result<f64> {
    let law = SpectrumLaw::new(p)?;
    if sigma.len() != law.t {
        return domain(format!(
            "expected {} singular values for p = {p}, got {}",
            law.t,
            sigma.len()
        ));
    }
    if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return domain("singular values must be finite and nonnegative");
    }
    let consts = normalizing_constants(p)?;
    let mut ln_f = consts.ln_c_p;
    for (i, &si) in sigma.iter().enumerate() {
        ln_f -= 0.5 * si * si;
        if law.eps == 1 {
            if si == 0.0 {
                return Ok(0.0);
            }
            ln_f += 2.0 * si.ln();
        }
        for &sj in &sigma[i + 1..] {
            let gap = (si * si - sj * sj).abs();
            if gap == 0.0 {
                return Ok(0.0);
            }
            ln_f += 2.0 * gap.ln();
        }
    }
    Ok(ln_f.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_omega(n: usize) -> f64 {
        LN_2 + n as f64 / 2.0 * PI.ln() - ln_gamma(n as f64 / 2.0)
    }

    /// Vol(U(p)) = Vol(G̃(2,p)) Vol(U(p-2)), Vol(G̃(2,p)) = 2 Ω_p Ω_{p-1} / (Ω_2 Ω_1).
    fn ln_volume_by_recurrence(p: usize) -> f64 {
        match p {
            1 => 0.0,
            2 => LN_2,
            _ => {
                LN_2 + ln_omega(p) + ln_omega(p - 1) - ln_omega(2) - ln_omega(1)
                    + ln_volume_by_recurrence(p - 2)
            }
        }
    }

    #[test]
    fn law_constants() {
        let law = SpectrumLaw::new(7).unwrap();
        assert_eq!((law.t, law.eps, law.n, law.d), (3, 1, 21, 10));
        let law = SpectrumLaw::new(6).unwrap();
        assert_eq!((law.t, law.eps, law.n, law.d), (3, 0, 15, 8));
        assert!(SpectrumLaw::new(1).is_err());
    }

    #[test]
    fn volume_small_orders() {
        assert!((volume_u(1).unwrap() - 1.0).abs() < 1e-15);
        assert!((volume_u(2).unwrap() - 2.0).abs() < 1e-14);
        assert!((volume_u(3).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!(volume_u(0).is_err());
    }

    #[test]
    fn volume_matches_grassmann_recurrence() {
        for p in 1..=20 {
            let closed = ln_volume_u(p).unwrap();
            let rec = ln_volume_by_recurrence(p);
            assert!(
                (closed - rec).abs() < 1e-12 * closed.abs().max(1.0),
                "p = {p}"
            );
        }
    }

    #[test]
    fn normalizing_constant_examples() {
        let k2 = normalizing_constants(2).unwrap();
        assert!((k2.d_p - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let k3 = normalizing_constants(3).unwrap();
        assert!((k3.c_p - (2.0 / PI).sqrt()).abs() < 1e-14);
        assert!(normalizing_constants(1).is_err());
    }

    #[test]
    fn d_p_matches_explicit_product() {
        for p in 2..=24 {
            let k = normalizing_constants(p).unwrap();
            let t = p / 2;
            assert!((k.c_p / 2f64.powi(t as i32) - k.d_p).abs() <= 1e-12 * k.d_p);
            let first = if p % 2 == 0 { 1 } else { 2 };
            let ln_explicit = -((p * (p - 1)) as f64 / 4.0 * LN_2
                + (first..=p).map(|i| ln_gamma(i as f64 / 2.0)).sum::<f64>());
            assert!((k.ln_d_p - ln_explicit).abs() < 1e-12 * ln_explicit.abs().max(1.0));
        }
    }

    #[test]
    fn joint_density_p3_is_chi3() {
        for s in [0.1, 0.7, 1.5, 3.0, 5.0] {
            let f = joint_density(&[s], 3).unwrap();
            let chi3 = (2.0 / PI).sqrt() * s * s * (-s * s / 2.0).exp();
            assert!((f - chi3).abs() < 1e-14);
        }
    }

    #[test]
    fn joint_density_boundary() {
        assert_eq!(joint_density(&[1.2, 1.2], 4).unwrap(), 0.0);
        assert_eq!(joint_density(&[1.2, 0.0], 5).unwrap(), 0.0);
        assert!(joint_density(&[1.2, 0.0], 4).unwrap() > 0.0);
        assert!(joint_density(&[1.0], 4).is_err());
        assert!(joint_density(&[1.0, -0.5], 4).is_err());
    }
}
