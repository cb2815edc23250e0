//! Monte-Carlo validation report. The output depends only on
//! `(p, samples, seed)`; no timings or thread counts are printed, so two runs
//! with the same seed are byte-identical.

use serde::Serialize;
use skewtail_core::mc::{binomial_se, empirical_upper, ks_distance, simulate, singular_values};
use skewtail_core::rmtdist::{largest_sv_cdf, largest_sv_upper, standardized_sv_upper};

use crate::error::{CliError, CliResult};
use crate::Format;

pub const MIN_SAMPLES: usize = 1000;
/// Tail comparisons pass within this many binomial standard errors.
pub const TAIL_Z: f64 = 3.0;
const STANDARDIZED_POINTS: [f64; 3] = [0.75, 0.8, 0.9];
const SIGMA1_MULTIPLES: [f64; 3] = [0.75, 1.0, 1.25];

/// KS threshold: 0.005 at `2·10⁵` samples, widened to the 1% critical value
/// `1.63/√N` for smaller runs.
pub fn ks_threshold(samples: usize) -> f64 {
    (1.63 / (samples as f64).sqrt()).max(0.005)
}

#[derive(Debug, Serialize)]
struct TailCheck {
    statistic: &'static str,
    x: f64,
    exact: f64,
    empirical: f64,
    se: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct KsCheck {
    distance: f64,
    threshold: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct DominanceCheck {
    min_ratio: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct Report {
    p: usize,
    samples: usize,
    seed: u64,
    ks_sigma1: KsCheck,
    tails: Vec<TailCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    top_pair_dominance: Option<DominanceCheck>,
    pass: bool,
}

fn tail_check(statistic: &'static str, values: &[f64], x: f64, exact: f64) -> CliResult<TailCheck> {
    let empirical = empirical_upper(values, x)?;
    let se = binomial_se(exact, values.len());
    let pass = (empirical - exact).abs() <= TAIL_Z * se;
    Ok(TailCheck {
        statistic,
        x,
        exact,
        empirical,
        se,
        pass,
    })
}

pub fn run(
    p: usize,
    samples: usize,
    seed: u64,
    threads: usize,
    format: Format,
) -> CliResult<String> {
    if p < 2 {
        return Err(CliError::Usage(format!("--p must be at least 2, got {p}")));
    }
    if samples < MIN_SAMPLES {
        return Err(CliError::Usage(format!(
            "--samples must be at least {MIN_SAMPLES}, got {samples}"
        )));
    }
    let draws = simulate(p, samples, seed, threads, |a| {
        let s = singular_values(a)?;
        let ratio = match s.sigma.get(1) {
            Some(s2) => s.sigma[0].powi(2) / (s.sigma[0].powi(2) + s2 * s2),
            None => 1.0,
        };
        Ok((s.largest(), s.standardized_largest(), ratio))
    })?;
    let sigma1: Vec<f64> = draws.iter().map(|d| d.0).collect();

    let distance = ks_distance(&sigma1, |x| Ok(largest_sv_cdf(p, x)?.value()))?;
    let threshold = ks_threshold(samples);
    let ks = KsCheck {
        distance,
        threshold,
        pass: distance < threshold,
    };

    let mut tails = Vec::new();
    for c in SIGMA1_MULTIPLES {
        let x = (c * (p as f64).sqrt() * 100.0).round() / 100.0;
        tails.push(tail_check(
            "sigma1",
            &sigma1,
            x,
            largest_sv_upper(p, x)?.value(),
        )?);
    }
    if p >= 4 {
        let standardized: Vec<f64> = draws.iter().map(|d| d.1).collect();
        for x in STANDARDIZED_POINTS {
            let exact = standardized_sv_upper(p, x)?.value();
            tails.push(tail_check("standardized", &standardized, x, exact)?);
        }
    }
    let dominance = (p == 4 || p == 5).then(|| {
        let min_ratio = draws.iter().map(|d| d.2).fold(f64::INFINITY, f64::min);
        DominanceCheck {
            min_ratio,
            pass: min_ratio > 0.5,
        }
    });
    let pass = ks.pass && tails.iter().all(|t| t.pass) && dominance.as_ref().is_none_or(|d| d.pass);
    let report = Report {
        p,
        samples,
        seed,
        ks_sigma1: ks,
        tails,
        top_pair_dominance: dominance,
        pass,
    };
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render(&report),
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render(r: &Report) -> String {
    let mut s = format!(
        "validation: p = {}, {} samples, seed {}\n",
        r.p, r.samples, r.seed
    );
    s.push_str(&format!(
        "KS distance of sigma1 vs exact CDF: {:.5} (threshold {:.5})  {}\n",
        r.ks_sigma1.distance,
        r.ks_sigma1.threshold,
        verdict(r.ks_sigma1.pass)
    ));
    s.push_str("upper tails (empirical vs exact, binomial s.e.):\n");
    for t in &r.tails {
        let z = if t.se > 0.0 {
            (t.empirical - t.exact) / t.se
        } else {
            0.0
        };
        s.push_str(&format!(
            "  {:<12} x = {:<5} exact {:.5}  empirical {:.5}  se {:.5}  z {:+.2}  {}\n",
            t.statistic,
            t.x,
            t.exact,
            t.empirical,
            t.se,
            z,
            verdict(t.pass)
        ));
    }
    if let Some(d) = &r.top_pair_dominance {
        s.push_str(&format!(
            "min sigma1^2/(sigma1^2+sigma2^2) over samples: {:.6} (must exceed 0.5)  {}\n",
            d.min_ratio,
            verdict(d.pass)
        ));
    }
    s.push_str(&format!("overall: {}\n", verdict(r.pass)));
    s
}
