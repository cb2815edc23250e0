//! Scheffé's paired-comparison model `y_ij = (α_i - α_j) + γ_ij + ε_ij` and
//! tests of subtractivity (`γ ≡ 0`) based on the singular values of the
//! residual matrix `Γ̂`.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::mc::{self, SingularSpectrum, SkewMatrix};
use crate::rmtdist::{largest_sv_upper, standardized_sv_upper, CRITICAL_POINT, VALIDITY_SLACK};
use crate::specfun::{chi2_upper, Probability};

/// Skew-symmetry tolerance for observations built from transformed scores.
const SKEW_TOL: f64 = 1e-12;

/// Win counts of a round robin with `n_games` games per pair and no ties.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSheet {
    names: Vec<String>,
    n_games: u32,
    /// Row-major `m×m`; entry `(i, j)` is the number of wins of `i` over `j`.
    wins: Vec<u32>,
}

impl ScoreSheet {
    pub fn new(names: Vec<String>, n_games: u32, wins: Vec<u32>) -> Result<Self> {
        let m = names.len();
        if n_games == 0 {
            return Err(Error::Data("games per pair must be at least 1".into()));
        }
        if wins.len() != m * m {
            return Err(Error::Data(format!(
                "{m} objects need {} cells, got {}",
                m * m,
                wins.len()
            )));
        }
        for i in 0..m {
            if wins[i * m + i] != 0 {
                return Err(Error::Data(format!(
                    "row {} ({}): diagonal cell must be empty",
                    i + 1,
                    names[i]
                )));
            }
            for j in 0..m {
                if i == j {
                    continue;
                }
                let (r, s) = (wins[i * m + j], wins[j * m + i]);
                if r > n_games {
                    return Err(Error::Data(format!(
                        "row {} ({}), column {} ({}): {r} wins exceed {n_games} games",
                        i + 1,
                        names[i],
                        j + 1,
                        names[j]
                    )));
                }
                if j > i && r + s != n_games {
                    return Err(Error::Data(format!(
                        "row {} ({}), column {} ({}): r_ij + r_ji = {r} + {s} = {}, expected {n_games} (ties are not supported)",
                        i + 1,
                        names[i],
                        j + 1,
                        names[j],
                        r + s
                    )));
                }
            }
        }
        Ok(ScoreSheet {
            names,
            n_games,
            wins,
        })
    }

    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_games(&self) -> u32 {
        self.n_games
    }

    pub fn wins(&self, i: usize, j: usize) -> u32 {
        self.wins[i * self.m() + j]
    }

    /// Pairs `i < j` where one side won every game. The transform is finite
    /// there but its normal approximation is poor.
    pub fn boundary_cells(&self) -> Vec<(usize, usize)> {
        let m = self.m();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let r = self.wins(i, j);
                if r == 0 || r == self.n_games {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Skew-symmetric `m×m` observation matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewObservations {
    m: usize,
    y: Vec<f64>,
}

impl SkewObservations {
    /// Requires `|y_ij + y_ji| <= tol` and `|y_ii| <= tol`.
    pub fn new(m: usize, y: Vec<f64>, tol: f64) -> Result<Self> {
        if y.len() != m * m {
            return domain(format!("expected {} entries, got {}", m * m, y.len()));
        }
        // reuse the skew validation of SkewMatrix for diagnostics
        SkewMatrix::from_dense(m, &y, tol)?;
        Ok(SkewObservations { m, y })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.y[i * self.m + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.y
    }

    /// Largest `|y_ij + y_ji|`.
    pub fn skew_residual(&self) -> f64 {
        let m = self.m;
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                worst = worst.max((self.get(i, j) + self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// `f(q) = 2 sqrt(n) (asin sqrt(q) - π/4)`, approximately `N(f(q_ij), 1)`
/// for a binomial win fraction out of `n` games.
///
/// Evaluated as `sqrt(n) asin(2q - 1)`, the same function written so that
/// `f(1/2) = 0` and `f(1-q) = -f(q)` hold exactly in floating point.
pub fn stabilizing_transform(q: f64, n_games: u32) -> f64 {
    f64::from(n_games).sqrt() * (2.0 * q - 1.0).asin()
}

/// [`stabilizing_transform`] of `wins / n_games`, with `2q - 1` formed from
/// the integers so that `r` and `n - r` map to exact negatives.
pub fn stabilized_score(wins: u32, n_games: u32) -> f64 {
    let centered = (2.0 * f64::from(wins) - f64::from(n_games)) / f64::from(n_games);
    f64::from(n_games).sqrt() * centered.asin()
}

/// Applies the variance-stabilizing transform cell by cell.
pub fn variance_stabilize(sheet: &ScoreSheet) -> Result<SkewObservations> {
    let m = sheet.m();
    let n = sheet.n_games();
    let mut y = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                y[i * m + j] = stabilized_score(sheet.wins(i, j), n);
            }
        }
    }
    SkewObservations::new(m, y, SKEW_TOL)
}

/// Least-squares estimates under `Σ α_i = 0`, `Σ_j γ_ij = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheffeFit {
    pub m: usize,
    pub alpha_hat: Vec<f64>,
    /// Row-major `m×m` residual matrix `Γ̂`.
    pub gamma_hat: Vec<f64>,
}

impl ScheffeFit {
    pub fn gamma(&self, i: usize, j: usize) -> f64 {
        self.gamma_hat[i * self.m + j]
    }

    pub fn gamma_matrix(&self) -> Result<SkewMatrix> {
        SkewMatrix::from_dense(self.m, &self.gamma_hat, 1e-9)
    }

    /// Singular values of `Γ̂`, truncated to the `floor((m-1)/2)` that can be
    /// nonzero (`Γ̂ 1 = 0`).
    pub fn spectrum(&self) -> Result<SingularSpectrum> {
        let mut s = mc::singular_values(&self.gamma_matrix()?)?;
        s.sigma.truncate((self.m - 1) / 2);
        Ok(s)
    }

    /// `tr(Γ̂ᵀΓ̂)/2 = Σ_{i<j} γ̂_ij²`.
    pub fn residual_sum_of_squares(&self) -> f64 {
        let m = self.m;
        let mut total = 0.0;
        for i in 0..m {
            for j in i + 1..m {
                total += self.gamma(i, j).powi(2);
            }
        }
        total
    }
}

/// `α̂_i = Σ_j y_ij / m`, `γ̂_ij = y_ij - (α̂_i - α̂_j)`.
pub fn scheffe_fit(obs: &SkewObservations) -> Result<ScheffeFit> {
    let m = obs.m();
    if m < 3 {
        return domain(format!(
            "the interaction space needs m >= 3 objects, got {m}"
        ));
    }
    let alpha_hat: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|j| obs.get(i, j)).sum::<f64>() / m as f64)
        .collect();
    let mut gamma_hat = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                gamma_hat[i * m + j] = obs.get(i, j) - (alpha_hat[i] - alpha_hat[j]);
            }
        }
    }
    Ok(ScheffeFit {
        m,
        alpha_hat,
        gamma_hat,
    })
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return domain(format!("error variance must be positive, got {sigma2}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub stat: f64,
    pub df: usize,
    pub p: Probability,
}

/// Scheffé's chi-square test: `Σ_{i<j} γ̂_ij² / σ²` on `(m-1)(m-2)/2` d.f.
pub fn chi_square_test(fit: &ScheffeFit, sigma2: f64) -> Result<ChiSquareTest> {
    check_sigma2(sigma2)?;
    let stat = fit.residual_sum_of_squares() / sigma2;
    let df = (fit.m - 1) * (fit.m - 2) / 2;
    Ok(ChiSquareTest {
        stat,
        df,
        p: chi2_upper(df as f64, stat)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargestSvTest {
    pub stat: f64,
    pub p: Probability,
}

/// `σ_1(Γ̂)/σ`, referred to the law of the largest singular value of an
/// `(m-1)×(m-1)` skew Gaussian matrix.
pub fn largest_sv_test(fit: &ScheffeFit, sigma2: f64) -> Result<LargestSvTest> {
    check_sigma2(sigma2)?;
    let stat = fit.spectrum()?.largest() / sigma2.sqrt();
    Ok(LargestSvTest {
        stat,
        p: largest_sv_upper(fit.m - 1, stat)?,
    })
}

/// p-value of the standardized statistic; the tube formula is only exact
/// above `1/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardizedP {
    Value(Probability),
    OutsideValidity,
    /// Fewer than five objects: the rank-2 manifold needs `m - 1 >= 4`.
    NotApplicable,
}

impl StandardizedP {
    pub fn value(&self) -> Option<f64> {
        match self {
            StandardizedP::Value(p) => Some(p.value()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardizedTest {
    pub stat: f64,
    pub p: StandardizedP,
}

fn standardized_stat(spectrum: &SingularSpectrum) -> f64 {
    spectrum.standardized_largest().min(1.0)
}

/// Likelihood-ratio statistic `σ_1(Γ̂) / sqrt(tr(Γ̂ᵀΓ̂)/2)` for a single
/// interaction plane with unknown error variance.
pub fn lrt_standardized_test(fit: &ScheffeFit) -> Result<StandardizedTest> {
    if fit.m < 5 {
        return domain(format!("the standardized test needs m >= 5, got {}", fit.m));
    }
    let stat = standardized_stat(&fit.spectrum()?);
    let p = if stat >= CRITICAL_POINT * (1.0 - VALIDITY_SLACK) {
        StandardizedP::Value(standardized_sv_upper(fit.m - 1, stat)?)
    } else {
        StandardizedP::OutsideValidity
    };
    Ok(StandardizedTest { stat, p })
}

/// A three-way deadlock contrast `(γ̂_ij + γ̂_jk + γ̂_ki)/√3`. The triple is
/// 0-based and oriented so the value is nonnegative: ascending (`i<j<k`) or
/// descending (`i>j>k`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deadlock {
    pub triple: [usize; 3],
    pub value: f64,
}

pub fn cycle_sum(fit: &ScheffeFit, [i, j, k]: [usize; 3]) -> f64 {
    fit.gamma(i, j) + fit.gamma(j, k) + fit.gamma(k, i)
}

/// Largest deadlock contrast over all triples and both orientations.
pub fn max_deadlock(fit: &ScheffeFit) -> Result<Deadlock> {
    let m = fit.m;
    if m < 3 {
        return domain("deadlock contrasts need m >= 3");
    }
    let sqrt3 = 3f64.sqrt();
    let mut best: Option<Deadlock> = None;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let s = cycle_sum(fit, [i, j, k]);
                let candidate = if s >= 0.0 {
                    Deadlock {
                        triple: [i, j, k],
                        value: s / sqrt3,
                    }
                } else {
                    Deadlock {
                        triple: [k, j, i],
                        value: -s / sqrt3,
                    }
                };
                if best.is_none_or(|b| candidate.value > b.value) {
                    best = Some(candidate);
                }
            }
        }
    }
    Ok(best.expect("m >= 3 yields at least one triple"))
}

/// Rank-2 residual plot: `(sqrt(σ_1) u_i, sqrt(σ_1) v_i)` for the top plane
/// of `Γ̂`, with `Γ̂ v = σ_1 u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub sigma1: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn residual_embedding(fit: &ScheffeFit) -> Result<Embedding> {
    let plane = mc::top_plane(&fit.gamma_matrix()?)?;
    let scale = plane.sigma1.sqrt();
    let points = plane
        .u
        .iter()
        .zip(&plane.v)
        .map(|(u, v)| (scale * u, scale * v))
        .collect();
    Ok(Embedding {
        sigma1: plane.sigma1,
        points,
    })
}

/// Signed area of the triangle `(P_i, P_j, P_k)`, positive when
/// counterclockwise.
pub fn signed_area(points: &[(f64, f64)], i: usize, j: usize, k: usize) -> Result<f64> {
    if i == j || j == k || i == k {
        return domain(format!(
            "triangle apexes must be distinct, got ({i}, {j}, {k})"
        ));
    }
    let n = points.len();
    if i >= n || j >= n || k >= n {
        return domain(format!("apex index out of range for {n} points"));
    }
    let (xi, yi) = points[i];
    let (xj, yj) = points[j];
    let (xk, yk) = points[k];
    Ok(0.5 * ((xj - xi) * (yk - yi) - (xk - xi) * (yj - yi)))
}

/// Everything reported for one analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub m: usize,
    pub sigma2: f64,
    pub alpha_hat: Vec<f64>,
    pub chi2: ChiSquareTest,
    pub largest_sv: LargestSvTest,
    pub standardized: StandardizedTest,
    pub spectrum: SingularSpectrum,
    pub deadlock: Deadlock,
    /// `2 S/√3` for the deadlock triangle in the residual plot; equals the
    /// deadlock value when `Γ̂` has rank 2.
    pub area_contrast: f64,
    pub embedding: Embedding,
}

/// Fit, three subtractivity tests, the deadlock search and the residual plot.
pub fn analyze(obs: &SkewObservations, sigma2: f64) -> Result<TestReport> {
    let fit = scheffe_fit(obs)?;
    let chi2 = chi_square_test(&fit, sigma2)?;
    let largest_sv = largest_sv_test(&fit, sigma2)?;
    let spectrum = fit.spectrum()?;
    let standardized = if fit.m >= 5 {
        lrt_standardized_test(&fit)?
    } else {
        StandardizedTest {
            stat: standardized_stat(&spectrum),
            p: StandardizedP::NotApplicable,
        }
    };
    let deadlock = max_deadlock(&fit)?;
    let embedding = residual_embedding(&fit)?;
    let [i, j, k] = deadlock.triple;
    let area_contrast = 2.0 * signed_area(&embedding.points, i, j, k)? / 3f64.sqrt();
    Ok(TestReport {
        m: fit.m,
        sigma2,
        alpha_hat: fit.alpha_hat.clone(),
        chi2,
        largest_sv,
        standardized,
        spectrum,
        deadlock,
        area_contrast,
        embedding,
    })
}

/// `σ_1(Γ̂)` for `replicates` null data sets `y_ij = ε_ij` on `m` objects.
pub fn null_sigma1_samples(
    m: usize,
    replicates: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<f64>> {
    mc::simulate(m, replicates, seed, threads, |eps| {
        let mut y = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                y[i * m + j] = eps.get(i, j);
            }
        }
        let obs = SkewObservations { m, y };
        Ok(scheffe_fit(&obs)?.spectrum()?.largest())
    })
}

/// `1/√2` and `1/√6` weights of the contrast pair behind a deadlock triple:
/// `c = (e_i - e_j)/√2`, `d = (e_i + e_j - 2 e_k)/√6`, so that
/// `c'Γd = (γ_ij + γ_jk + γ_ki)/√3`.
pub fn deadlock_contrasts(m: usize, [i, j, k]: [usize; 3]) -> (Vec<f64>, Vec<f64>) {
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    c[i] = 1.0 / SQRT_2;
    c[j] = -1.0 / SQRT_2;
    let s6 = 6f64.sqrt();
    d[i] = 1.0 / s6;
    d[j] = 1.0 / s6;
    d[k] = -2.0 / s6;
    (c, d)
}
