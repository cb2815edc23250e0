//! Test-only oracles, independent of the library's evaluation paths.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Tanh-sinh quadrature of `f` over `[a, b]`. The integrand receives
/// `(x, x - a, b - x)` with the endpoint distances computed without
/// cancellation, so integrable endpoint singularities are handled.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let t_max = 4.5;
    let eval = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        // distances to the endpoints: half * (1 ± tanh u) = half * e^{±u} / cosh u
        let dl = half * (-u).exp() / cosh_u;
        let dr = half * u.exp() / cosh_u;
        if dl <= 0.0 || dr <= 0.0 || w == 0.0 {
            return 0.0;
        }
        let x = if t < 0.0 { a + dl } else { b - dr }.clamp(a, b);
        let _ = mid;
        let v = f(x, dl, dr);
        if v.is_finite() {
            w * v
        } else {
            0.0
        }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = sum * h;
        if (next - estimate).abs() <= tol * next.abs().max(1e-300) {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// `∫_lo^∞ f`, via `φ = lo + s/(1-s)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, lo: f64, tol: f64) -> f64 {
    tanh_sinh(
        |_, s, one_minus_s| {
            let phi = lo + s / one_minus_s;
            f(phi) / (one_minus_s * one_minus_s)
        },
        0.0,
        1.0,
        tol,
    )
}

/// Chi-square upper tail by quadrature of the unnormalized density, with the
/// normalizer also obtained by quadrature.
pub fn chi2_upper_oracle(nu: f64, y: f64) -> f64 {
    let density = |phi: f64| {
        if phi <= 0.0 {
            0.0
        } else {
            (((nu / 2.0) - 1.0) * phi.ln() - phi / 2.0).exp()
        }
    };
    let total = integrate_to_infinity(density, 0.0, 1e-15);
    let upper = integrate_to_infinity(density, y, 1e-15);
    upper / total
}

/// `1 - I_y(a, b)` by quadrature (normalizer by quadrature as well).
pub fn beta_upper_oracle(a: f64, b: f64, y: f64) -> f64 {
    let kernel = |_x: f64, dl: f64, dr: f64| ((a - 1.0) * dl.ln() + (b - 1.0) * dr.ln()).exp();
    let total = tanh_sinh(kernel, 0.0, 1.0, 1e-15);
    let upper = tanh_sinh(
        |x: f64, _dl: f64, dr: f64| ((a - 1.0) * x.ln() + (b - 1.0) * dr.ln()).exp(),
        y,
        1.0,
        1e-15,
    );
    upper / total
}

/// `2Φ(x) - 1` by quadrature of the normal density.
pub fn half_normal_cdf_oracle(x: f64) -> f64 {
    let c = (2.0 / std::f64::consts::PI).sqrt();
    tanh_sinh(|s, _, _| c * (-s * s / 2.0).exp(), 0.0, x, 1e-15)
}

/// χ₃ distribution function by quadrature of `sqrt(2/π) s² e^{-s²/2}`.
pub fn chi3_cdf_oracle(x: f64) -> f64 {
    let c = (2.0 / std::f64::consts::PI).sqrt();
    tanh_sinh(|s, _, _| c * s * s * (-s * s / 2.0).exp(), 0.0, x, 1e-15)
}

/// `Γ(k + 1/2)/√π = Π_{l<k} (l + 1/2)` as an exact rational.
fn half_integer_gamma_over_sqrt_pi(k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for l in 0..k {
        acc *= BigRational::new(BigInt::from(2 * l + 1), BigInt::from(2));
    }
    acc
}

/// Exact inverse of `Q = (Γ(p-i-j+1/2)/√π)_{i,j}` by rational Gauss-Jordan;
/// returns `(G⁻¹ as f64 row-major, ln det G)`.
pub fn exact_hankel_inverse(p: usize) -> (Vec<f64>, f64) {
    let t = p / 2;
    let mut a: Vec<Vec<BigRational>> = (1..=t)
        .map(|i| {
            (1..=t)
                .map(|j| half_integer_gamma_over_sqrt_pi(p - i - j))
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut det = BigRational::one();
    for col in 0..t {
        let piv = (col..t)
            .find(|&r| !a[r][col].is_zero())
            .expect("nonsingular");
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= pv.clone();
        for k in 0..t {
            a[col][k] = &a[col][k] / &pv;
            inv[col][k] = &inv[col][k] / &pv;
        }
        for r in 0..t {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for k in 0..t {
                    let s = &factor * &a[col][k];
                    a[r][k] = &a[r][k] - s;
                    let s = &factor * &inv[col][k];
                    inv[r][k] = &inv[r][k] - s;
                }
            }
        }
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let flat = inv
        .iter()
        .flat_map(|row| row.iter().map(|v| v.to_f64().unwrap() / sqrt_pi))
        .collect();
    let ln_det = det.to_f64().unwrap().ln() + t as f64 / 2.0 * std::f64::consts::PI.ln();
    (flat, ln_det)
}

/// Central League 1997 score sheet (wins of row team over column team).
pub const CENTRAL_LEAGUE_NAMES: [&str; 6] = [
    "Yakult",
    "Yokohama",
    "Hiroshima",
    "Yomiuri",
    "Hanshin",
    "Chunichi",
];
pub const CENTRAL_LEAGUE_WINS: [[u32; 6]; 6] = [
    [0, 13, 15, 19, 20, 16],
    [14, 0, 16, 13, 10, 19],
    [12, 11, 0, 13, 12, 18],
    [8, 14, 14, 0, 14, 13],
    [7, 17, 15, 13, 0, 10],
    [11, 8, 9, 14, 17, 0],
];

pub fn central_league() -> skewtail_core::ScoreSheet {
    skewtail_core::ScoreSheet::new(
        CENTRAL_LEAGUE_NAMES.iter().map(|s| s.to_string()).collect(),
        27,
        CENTRAL_LEAGUE_WINS.iter().flatten().copied().collect(),
    )
    .unwrap()
}
