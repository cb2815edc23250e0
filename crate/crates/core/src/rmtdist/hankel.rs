//! The Hankel matrix `g_ij = Γ(p-i-j+1/2)`, `1 <= i, j <= t`, and its inverse.
//!
//! Two routes to the inverse are provided. [`hankel_gram`] evaluates the
//! closed form as a signed sum of gamma ratios in the log domain;
//! [`hankel_inverse_oracle`] builds the triangular factorization
//! `B G = E T D` explicitly and multiplies out `D⁻¹ T⁻¹ E⁻¹ B`.

use crate::error::{domain, Result};
use crate::specfun::ln_gamma_unchecked as ln_gamma;

use super::law::SpectrumLaw;

/// Hankel matrix, its inverse and the tube-formula weights, all `t×t`
/// row-major with 0-based indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelGram {
    pub p: usize,
    pub t: usize,
    pub g: Vec<f64>,
    pub ginv: Vec<f64>,
    /// `weights[k] = Σ_{i+j=k+2} g^{ij} g_{ij}` for `k = 0..=2t-2` (1-based
    /// `i, j`). `weights[k]` multiplies the chi-square/beta term with
    /// `2p-3-2k` degrees of freedom.
    pub weights: Vec<f64>,
}

impl HankelGram {
    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.t + j]
    }

    pub fn ginv(&self, i: usize, j: usize) -> f64 {
        self.ginv[i * self.t + j]
    }

    /// `g^{ij} g_{ij}` (0-based).
    pub fn product(&self, i: usize, j: usize) -> f64 {
        self.g(i, j) * self.ginv(i, j)
    }

    /// `Σ_{i,j} g^{ij} g_{ij}`, which equals `t`.
    pub fn trace_identity(&self) -> f64 {
        self.g.iter().zip(&self.ginv).map(|(a, b)| a * b).sum()
    }
}

/// Builds the Hankel matrix and the closed-form inverse for `p >= 4`.
pub fn hankel_gram(p: usize) -> Result<HankelGram> {
    if p < 4 {
        return domain(format!("the tube formula requires p >= 4, got {p}"));
    }
    Ok(gram_unchecked(&SpectrumLaw::new(p)?))
}

/// Same as [`hankel_gram`] but also for `t = 1` (`p` = 2 or 3), used by the
/// exact tail evaluation.
pub(crate) fn gram_unchecked(law: &SpectrumLaw) -> HankelGram {
    let t = law.t;
    let p = law.p as f64;
    let mut g = vec![0.0; t * t];
    for i in 0..t {
        for j in 0..t {
            // 1-based: Γ(p - i - j + 1/2)
            g[i * t + j] = ln_gamma(p - (i + j + 2) as f64 + 0.5).exp();
        }
    }
    let ginv = closed_form_inverse(t, law.eps);
    let mut weights = vec![0.0; 2 * t - 1];
    for i in 0..t {
        for j in 0..t {
            weights[i + j] += g[i * t + j] * ginv[i * t + j];
        }
    }
    HankelGram {
        p: law.p,
        t,
        g,
        ginv,
        weights,
    }
}

/// Closed-form inverse of `(Γ(2t+ε-i-j+1/2))_{i,j}`.
///
/// ```text
/// g^{ij} = (-1)^{i+j} / [Γ(t+1-i) Γ(t+ε+1/2-i) Γ(t+1-j) Γ(t+ε+1/2-j)]
///          × Σ_{k=1}^{min(i,j)} Γ(t+1-k) Γ(t+ε+1/2-k) / [Γ(i+1-k) Γ(j+1-k)]
/// ```
fn closed_form_inverse(t: usize, eps: usize) -> Vec<f64> {
    let tf = t as f64;
    let shift = eps as f64 + 0.5;
    // ln[Γ(t+1-i) Γ(t+ε+1/2-i)], 1-based i
    let ln_pair = |i: usize| ln_gamma(tf + 1.0 - i as f64) + ln_gamma(tf + shift - i as f64);
    let mut out = vec![0.0; t * t];
    for i in 1..=t {
        for j in i..=t {
            let ln_front = ln_pair(i) + ln_pair(j);
            let sum: f64 = (1..=i)
                .map(|k| {
                    let ln_term =
                        ln_pair(k) - ln_gamma((i + 1 - k) as f64) - ln_gamma((j + 1 - k) as f64);
                    (ln_term - ln_front).exp()
                })
                .sum();
            let value = if (i + j) % 2 == 0 { sum } else { -sum };
            out[(i - 1) * t + (j - 1)] = value;
            out[(j - 1) * t + (i - 1)] = value;
        }
    }
    out
}

/// Explicit factors of `B_{t-1} ⋯ B_1 G = E T D` for
/// `G = (Γ(δ+2t-i-j+1))_{i,j}`. All matrices are `t×t` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelFactorization {
    pub delta: f64,
    pub t: usize,
    pub g: Vec<f64>,
    /// Unit upper band factors `B_1, …, B_{t-1}`.
    pub band_factors: Vec<Vec<f64>>,
    /// `B = B_{t-1} ⋯ B_1`, multiplied out.
    pub b: Vec<f64>,
    /// Lower triangular binomial matrix, `t_ij = C(t-j, t-i)`.
    pub lower: Vec<f64>,
    /// `T⁻¹`, with entries `(-1)^{i+j} t_ij`.
    pub lower_inv: Vec<f64>,
    /// Diagonal of `D`: `Γ(δ+t-i+1)`.
    pub d: Vec<f64>,
    /// Diagonal of `E`: `(t-i)!`.
    pub e: Vec<f64>,
    /// `G⁻¹ = D⁻¹ T⁻¹ E⁻¹ B`.
    pub inverse: Vec<f64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Inverts the Hankel matrix `(Γ(δ+2t-i-j+1))` through its triangular
/// factorization. With `δ = ε - 1/2` this reproduces `hankel_gram(p).ginv`.
pub fn hankel_inverse_oracle(delta: f64, t: usize) -> Result<HankelFactorization> {
    if !(delta.is_finite() && delta > -1.0) {
        return domain(format!("delta must exceed -1, got {delta}"));
    }
    if t < 1 {
        return domain("the Hankel matrix needs t >= 1");
    }
    let mut g = vec![0.0; t * t];
    for i in 1..=t {
        for j in 1..=t {
            g[(i - 1) * t + (j - 1)] = ln_gamma(delta + (2 * t + 1 - i - j) as f64).exp();
        }
    }

    let identity = |n: usize| {
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = 1.0;
        }
        m
    };

    let mut band_factors = Vec::with_capacity(t.saturating_sub(1));
    let mut b = identity(t);
    for k in 1..t {
        let mut bk = identity(t);
        for i in 1..=t - k {
            bk[(i - 1) * t + i] = -(delta + (t - i) as f64);
        }
        b = crate::linalg::matmul(&bk, &b, t);
        band_factors.push(bk);
    }

    let mut lower = vec![0.0; t * t];
    let mut lower_inv = vec![0.0; t * t];
    for i in 1..=t {
        for j in 1..=i {
            let v = binomial(t - j, t - i);
            lower[(i - 1) * t + (j - 1)] = v;
            lower_inv[(i - 1) * t + (j - 1)] = if (i + j) % 2 == 0 { v } else { -v };
        }
    }
    let d: Vec<f64> = (1..=t)
        .map(|i| ln_gamma(delta + (t - i) as f64 + 1.0).exp())
        .collect();
    let e: Vec<f64> = (1..=t).map(|i| ln_factorial(t - i).exp()).collect();

    // D⁻¹ T⁻¹ E⁻¹ B
    let mut scaled_lower_inv = lower_inv.clone();
    for i in 0..t {
        for j in 0..t {
            scaled_lower_inv[i * t + j] /= d[i] * e[j];
        }
    }
    let inverse = crate::linalg::matmul(&scaled_lower_inv, &b, t);

    Ok(HankelFactorization {
        delta,
        t,
        g,
        band_factors,
        b,
        lower,
        lower_inv,
        d,
        e,
        inverse,
    })
}

impl HankelFactorization {
    /// `ln det G = Σ_i [ln Γ(δ+t-i+1) + ln (t-i)!]`.
    pub fn ln_det(&self) -> f64 {
        (1..=self.t)
            .map(|i| ln_gamma(self.delta + (self.t - i) as f64 + 1.0) + ln_factorial(self.t - i))
            .sum()
    }

    /// Closed form of the multiplied-out band product:
    /// `b_ij = (-1)^{i+j} C(t-i, t-j) Γ(δ+t-i+1)/Γ(δ+t-j+1)` for `i <= j`.
    pub fn b_closed_form(&self) -> Vec<f64> {
        let t = self.t;
        let mut out = vec![0.0; t * t];
        for i in 1..=t {
            for j in i..=t {
                let ratio = (ln_gamma(self.delta + (t - i) as f64 + 1.0)
                    - ln_gamma(self.delta + (t - j) as f64 + 1.0))
                .exp();
                let v = binomial(t - i, t - j) * ratio;
                out[(i - 1) * t + (j - 1)] = if (i + j) % 2 == 0 { v } else { -v };
            }
        }
        out
    }

    /// Largest entry of `|B G - E T D|` relative to the largest entry of `B G`.
    pub fn factorization_residual(&self) -> f64 {
        let t = self.t;
        let bg = crate::linalg::matmul(&self.b, &self.g, t);
        let mut etd = self.lower.clone();
        for i in 0..t {
            for j in 0..t {
                etd[i * t + j] *= self.e[i] * self.d[j];
            }
        }
        let scale = bg.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        bg.iter()
            .zip(&etd)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
            / scale
    }
}
