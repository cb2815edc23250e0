//! Seeded sampling of skew-symmetric Gaussian matrices and extraction of
//! their paired singular values.
//!
//! Every sample draws from its own ChaCha stream selected by
//! `(seed, sample index)`, so a run is a pure function of the seed, the
//! order and the sample count regardless of how many threads execute it.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};

/// Relative agreement required between the two copies of each `σ_i²` among
/// the eigenvalues of `AᵀA`.
pub const PAIRING_TOLERANCE: f64 = 1e-8;

/// Largest allowed trailing eigenvalue of `AᵀA` for odd `p`, relative to the
/// leading one.
pub const KERNEL_TOLERANCE: f64 = 1e-10;

/// Random stream handle. Not shareable across threads; derive one per sample.
#[derive(Debug, Clone)]
pub struct SampleStream(ChaCha8Rng);

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        SampleStream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// The substream owned by sample `index` of a run seeded with `seed`.
    pub fn for_sample(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        SampleStream(rng)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }
}

/// Real skew-symmetric `p×p` matrix stored as its strict upper triangle,
/// row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    p: usize,
    upper: Vec<f64>,
}

impl SkewMatrix {
    pub fn new(p: usize, upper: Vec<f64>) -> Result<Self> {
        if upper.len() != p * p.saturating_sub(1) / 2 {
            return domain(format!(
                "order {p} needs {} upper entries, got {}",
                p * p.saturating_sub(1) / 2,
                upper.len()
            ));
        }
        if upper.iter().any(|v| !v.is_finite()) {
            return domain("skew matrix entries must be finite");
        }
        Ok(SkewMatrix { p, upper })
    }

    pub fn zeros(p: usize) -> Self {
        SkewMatrix {
            p,
            upper: vec![0.0; p * p.saturating_sub(1) / 2],
        }
    }

    /// Reads a dense row-major matrix, requiring `|a_ij + a_ji| <= tol` and
    /// `|a_ii| <= tol`. The upper triangle is kept.
    pub fn from_dense(p: usize, dense: &[f64], tol: f64) -> Result<Self> {
        if dense.len() != p * p {
            return domain(format!("expected {} entries, got {}", p * p, dense.len()));
        }
        let mut upper = Vec::with_capacity(p * p.saturating_sub(1) / 2);
        for i in 0..p {
            if dense[i * p + i].abs() > tol {
                return Err(Error::Data(format!(
                    "diagonal entry ({}, {}) = {} is not zero",
                    i + 1,
                    i + 1,
                    dense[i * p + i]
                )));
            }
            for j in i + 1..p {
                let (a, b) = (dense[i * p + j], dense[j * p + i]);
                if (a + b).abs() > tol {
                    return Err(Error::Data(format!(
                        "entries ({}, {}) = {a} and ({}, {}) = {b} are not skew-symmetric",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
                upper.push(a);
            }
        }
        SkewMatrix::new(p, upper)
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.p);
        i * self.p - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Entry `a_ij` of the full matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[self.index(i, j)],
            Greater => -self.upper[self.index(j, i)],
            Equal => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.p, self.p, |i, j| self.get(i, j))
    }

    /// `tr(AᵀA)/2 = Σ_{i<j} a_ij²`.
    pub fn half_trace_gram(&self) -> f64 {
        self.upper.iter().map(|v| v * v).sum()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.p)
            .map(|i| (0..self.p).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

/// Draws a skew matrix with i.i.d. standard normal upper entries.
pub fn sample_skew_gaussian(p: usize, stream: &mut SampleStream) -> Result<SkewMatrix> {
    if p < 2 {
        return domain(format!("matrix order must be at least 2, got {p}"));
    }
    let n = p * (p - 1) / 2;
    let upper = (0..n).map(|_| stream.standard_normal()).collect();
    Ok(SkewMatrix { p, upper })
}

/// One representative per singular-value pair, in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    pub p: usize,
    pub sigma: Vec<f64>,
}

impl SingularSpectrum {
    pub fn largest(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.sigma.iter().map(|s| s * s).sum()
    }

    /// `σ_1 / sqrt(Σ σ_i²)`, or 0 for the zero matrix.
    pub fn standardized_largest(&self) -> f64 {
        let total = self.sum_of_squares();
        if total == 0.0 {
            0.0
        } else {
            self.largest() / total.sqrt()
        }
    }
}

struct SortedEigen {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn sorted_gram_eigen(a: &SkewMatrix) -> SortedEigen {
    let p = a.p;
    let dense = a.to_dense();
    let gram = dense.transpose() * &dense;
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(p, p, |i, j| eig.eigenvectors[(i, order[j])]);
    SortedEigen { values, vectors }
}

fn paired_squares(p: usize, values: &[f64]) -> Result<Vec<f64>> {
    let t = p / 2;
    let lead = values.first().copied().unwrap_or(0.0).max(0.0);
    let mut squares = Vec::with_capacity(t);
    for k in 0..t {
        let (a, b) = (values[2 * k], values[2 * k + 1]);
        if (a - b).abs() > PAIRING_TOLERANCE * lead.max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "eigenvalues {a} and {b} of AᵀA do not pair (pair {})",
                k + 1
            )));
        }
        squares.push((0.5 * (a + b)).max(0.0));
    }
    if p % 2 == 1 {
        let last = values[p - 1];
        if last.abs() > KERNEL_TOLERANCE * lead.max(f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "odd order but trailing eigenvalue {last} of AᵀA is not zero"
            )));
        }
    }
    Ok(squares)
}

/// Singular values of `A` from the eigenvalues of `AᵀA = -A²`.
pub fn singular_values(a: &SkewMatrix) -> Result<SingularSpectrum> {
    let eig = sorted_gram_eigen(a);
    let squares = paired_squares(a.p, &eig.values)?;
    Ok(SingularSpectrum {
        p: a.p,
        sigma: squares.into_iter().map(f64::sqrt).collect(),
    })
}

/// Invariant plane of one singular value: `A v = σ u`, `A u = -σ v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPlane {
    pub sigma: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// The plane of the largest singular value.
#[derive(Debug, Clone, PartialEq)]
pub struct TopPlane {
    pub sigma1: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl From<SingularPlane> for TopPlane {
    fn from(plane: SingularPlane) -> Self {
        TopPlane {
            sigma1: plane.sigma,
            u: plane.u,
            v: plane.v,
        }
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
}

/// Builds `(u, v)` from an eigenvector `w` of `AᵀA` and fixes the in-plane
/// rotation: `u` takes the largest possible value at the coordinate where
/// `u_i² + v_i²` is largest, and `v` vanishes there.
fn plane_from_vector(a: &SkewMatrix, sigma: f64, w: &[f64]) -> SingularPlane {
    let mut v = w.to_vec();
    normalize(&mut v);
    let mut u: Vec<f64> = a.mul_vec(&v).into_iter().map(|x| x / sigma).collect();
    let overlap: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    for (ui, vi) in u.iter_mut().zip(&v) {
        *ui -= overlap * vi;
    }
    normalize(&mut u);

    let mut anchor = 0;
    let mut best = -1.0;
    for i in 0..u.len() {
        let r = u[i].hypot(v[i]);
        if r > best {
            best = r;
            anchor = i;
        }
    }
    let theta = v[anchor].atan2(u[anchor]);
    let (s, c) = theta.sin_cos();
    let u_rot: Vec<f64> = u.iter().zip(&v).map(|(a, b)| c * a + s * b).collect();
    let v_rot: Vec<f64> = u.iter().zip(&v).map(|(a, b)| -s * a + c * b).collect();
    SingularPlane {
        sigma,
        u: u_rot,
        v: v_rot,
    }
}

fn separated(a: f64, b: f64) -> bool {
    a - b > PAIRING_TOLERANCE * a
}

/// Top singular plane, canonicalized (see [`singular_planes`]).
pub fn top_plane(a: &SkewMatrix) -> Result<TopPlane> {
    let eig = sorted_gram_eigen(a);
    let squares = paired_squares(a.p, &eig.values)?;
    let sigma: Vec<f64> = squares.iter().map(|s| s.sqrt()).collect();
    let s1 = sigma[0];
    let s2 = sigma.get(1).copied().unwrap_or(0.0);
    if s1.is_nan() || s1 <= 0.0 {
        return Err(Error::Multiplicity("largest singular value is zero".into()));
    }
    if !separated(s1, s2) {
        return Err(Error::Multiplicity(format!(
            "top singular value {s1} is not separated from {s2}"
        )));
    }
    let w: Vec<f64> = eig.vectors.column(0).iter().copied().collect();
    Ok(plane_from_vector(a, s1, &w).into())
}

/// All invariant planes with positive singular value, in descending order.
/// Each positive singular value must be separated from its neighbours.
pub fn singular_planes(a: &SkewMatrix) -> Result<Vec<SingularPlane>> {
    let eig = sorted_gram_eigen(a);
    let squares = paired_squares(a.p, &eig.values)?;
    let sigma: Vec<f64> = squares.iter().map(|s| s.sqrt()).collect();
    let scale = sigma.first().copied().unwrap_or(0.0);
    let mut planes = Vec::new();
    for (k, &s) in sigma.iter().enumerate() {
        if s <= PAIRING_TOLERANCE * scale || s == 0.0 {
            break;
        }
        let next = sigma.get(k + 1).copied().unwrap_or(0.0);
        if !separated(s, next) || (k > 0 && !separated(sigma[k - 1], s)) {
            return Err(Error::Multiplicity(format!(
                "singular value {s} (pair {}) is not simple",
                k + 1
            )));
        }
        let w: Vec<f64> = eig.vectors.column(2 * k).iter().copied().collect();
        planes.push(plane_from_vector(a, s, &w));
    }
    Ok(planes)
}

/// Applies `f` to `samples` independent matrices of order `p`, returning the
/// results in sample order. `threads <= 1` runs on the calling thread.
pub fn simulate<T, F>(p: usize, samples: usize, seed: u64, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&SkewMatrix) -> Result<T> + Sync,
{
    if p < 2 {
        return domain(format!("matrix order must be at least 2, got {p}"));
    }
    let one = |i: usize| {
        let mut stream = SampleStream::for_sample(seed, i as u64);
        f(&sample_skew_gaussian(p, &mut stream)?)
    };
    if threads <= 1 {
        return (0..samples).map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    pool.install(|| (0..samples).into_par_iter().map(one).collect())
}

/// Fraction of samples strictly above `x`.
pub fn empirical_upper(samples: &[f64], x: f64) -> Result<f64> {
    if samples.is_empty() {
        return domain("empirical_upper needs at least one sample");
    }
    let above = samples.iter().filter(|&&s| s > x).count();
    Ok(above as f64 / samples.len() as f64)
}

/// Binomial standard error `sqrt(f(1-f)/n)` of an empirical fraction.
pub fn binomial_se(fraction: f64, n: usize) -> f64 {
    (fraction * (1.0 - fraction) / n as f64).sqrt()
}

/// Kolmogorov–Smirnov distance `sup_x |F_n(x) - F(x)|` between the empirical
/// law of `samples` and a continuous distribution function.
pub fn ks_distance<F>(samples: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if samples.is_empty() {
        return domain("ks_distance needs at least one sample");
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_two(p: usize, s: f64, a: &[f64], b: &[f64]) -> SkewMatrix {
        let mut dense = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..p {
                dense[i * p + j] = s * (a[i] * b[j] - b[i] * a[j]);
            }
        }
        SkewMatrix::from_dense(p, &dense, 1e-12).unwrap()
    }

    #[test]
    fn indexing_and_dense() {
        let a = SkewMatrix::new(3, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(a.get(0, 1), 1.0);
        assert_eq!(a.get(0, 2), 2.0);
        assert_eq!(a.get(1, 2), 3.0);
        assert_eq!(a.get(2, 1), -3.0);
        assert_eq!(a.get(1, 1), 0.0);
        let d = a.to_dense();
        assert_eq!(d.clone() + d.transpose(), DMatrix::zeros(3, 3));
        assert!(SkewMatrix::new(3, vec![1.0]).is_err());
    }

    #[test]
    fn from_dense_rejects_asymmetric() {
        let bad = [0.0, 1.0, 1.0, 0.0];
        assert!(matches!(
            SkewMatrix::from_dense(2, &bad, 1e-9),
            Err(Error::Data(_))
        ));
        let diag = [1.0, 1.0, -1.0, 0.0];
        assert!(SkewMatrix::from_dense(2, &diag, 1e-9).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_skew_gaussian(4, &mut SampleStream::for_sample(7, 3)).unwrap();
        let b = sample_skew_gaussian(4, &mut SampleStream::for_sample(7, 3)).unwrap();
        let c = sample_skew_gaussian(4, &mut SampleStream::for_sample(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(sample_skew_gaussian(1, &mut SampleStream::new(1)).is_err());
    }

    #[test]
    fn small_spectra() {
        let a = SkewMatrix::new(2, vec![-2.5]).unwrap();
        assert_eq!(singular_values(&a).unwrap().sigma, vec![2.5]);
        let a = SkewMatrix::new(3, vec![1.0, 2.0, 2.0]).unwrap();
        let s = singular_values(&a).unwrap();
        assert!((s.sigma[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_two_spectrum_and_plane() {
        let mut e1 = vec![0.0; 6];
        let mut e2 = vec![0.0; 6];
        e1[0] = 1.0;
        e2[1] = 1.0;
        let a = rank_two(6, 1.7, &e1, &e2);
        let s = singular_values(&a).unwrap();
        assert!((s.sigma[0] - 1.7).abs() < 1e-12);
        assert!(s.sigma[1].abs() < 1e-7 && s.sigma[2].abs() < 1e-7);

        let plane = top_plane(&a).unwrap();
        assert!((plane.sigma1 - 1.7).abs() < 1e-12);
        // span{u, v} = span{e1, e2}
        for k in 2..6 {
            assert!(plane.u[k].abs() < 1e-10 && plane.v[k].abs() < 1e-10);
        }
        let av = a.mul_vec(&plane.v);
        let au = a.mul_vec(&plane.u);
        for k in 0..6 {
            assert!((av[k] - 1.7 * plane.u[k]).abs() < 1e-10);
            assert!((au[k] + 1.7 * plane.v[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_top_pair_is_rejected() {
        // two equal planes
        let mut upper = vec![0.0; 6];
        upper[0] = 1.0; // a_12
        upper[5] = 1.0; // a_34
        let a = SkewMatrix::new(4, upper).unwrap();
        assert!(matches!(top_plane(&a), Err(Error::Multiplicity(_))));
        assert!(matches!(
            top_plane(&SkewMatrix::zeros(4)),
            Err(Error::Multiplicity(_))
        ));
    }

    #[test]
    fn empirical_helpers() {
        assert_eq!(empirical_upper(&[1.0, 2.0, 3.0], 1.5).unwrap(), 2.0 / 3.0);
        assert_eq!(empirical_upper(&[1.0, 2.0], 5.0).unwrap(), 0.0);
        assert!(empirical_upper(&[], 0.0).is_err());
        assert_eq!(binomial_se(0.5, 100), 0.05);
        let d = ks_distance(&[0.5], Ok).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn simulate_is_thread_independent() {
        let serial = simulate(5, 200, 11, 1, |a| Ok(a.upper().to_vec())).unwrap();
        let parallel = simulate(5, 200, 11, 4, |a| Ok(a.upper().to_vec())).unwrap();
        assert_eq!(serial, parallel);
    }
}
