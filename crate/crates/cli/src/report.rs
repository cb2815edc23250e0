//! Text and JSON renderings of an analysis. Both are built from the same
//! [`JsonReport`] so the numbers cannot drift apart.

use serde::Serialize;
use skewtail_core::paired::StandardizedP;
use skewtail_core::TestReport;

#[derive(Debug, Clone, Serialize)]
pub struct ChiSquare {
    pub stat: f64,
    pub df: usize,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LargestSv {
    pub stat: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum StandardizedValue {
    Value(f64),
    Marker(&'static str),
}

#[derive(Debug, Clone, Serialize)]
pub struct Standardized {
    pub stat: f64,
    pub p: StandardizedValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeadlockOut {
    /// 1-based object indices.
    pub triple: [usize; 3],
    pub names: [String; 3],
    pub value: f64,
    pub area_contrast: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Score {
    pub name: String,
    pub alpha: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Point {
    pub name: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonReport {
    pub m: usize,
    pub sigma2: f64,
    pub scores: Vec<Score>,
    pub chi2: ChiSquare,
    pub largest_sv: LargestSv,
    pub standardized: Standardized,
    pub spectrum: Vec<f64>,
    pub deadlock: DeadlockOut,
    pub embedding: Vec<Point>,
}

impl JsonReport {
    pub fn new(report: &TestReport, names: &[String]) -> Self {
        let p = match report.standardized.p {
            StandardizedP::Value(p) => StandardizedValue::Value(p.value()),
            StandardizedP::OutsideValidity => StandardizedValue::Marker("outside_validity"),
            StandardizedP::NotApplicable => StandardizedValue::Marker("not_applicable"),
        };
        let [i, j, k] = report.deadlock.triple;
        JsonReport {
            m: report.m,
            sigma2: report.sigma2,
            scores: names
                .iter()
                .zip(&report.alpha_hat)
                .map(|(n, &a)| Score {
                    name: n.clone(),
                    alpha: a,
                })
                .collect(),
            chi2: ChiSquare {
                stat: report.chi2.stat,
                df: report.chi2.df,
                p: report.chi2.p.value(),
            },
            largest_sv: LargestSv {
                stat: report.largest_sv.stat,
                p: report.largest_sv.p.value(),
            },
            standardized: Standardized {
                stat: report.standardized.stat,
                p,
            },
            spectrum: report.spectrum.sigma.clone(),
            deadlock: DeadlockOut {
                triple: [i + 1, j + 1, k + 1],
                names: [names[i].clone(), names[j].clone(), names[k].clone()],
                value: report.deadlock.value,
                area_contrast: report.area_contrast,
            },
            embedding: names
                .iter()
                .zip(&report.embedding.points)
                .map(|(n, &(x, y))| Point {
                    name: n.clone(),
                    x,
                    y,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Statistics to 3 decimals, p-values to 4.
    pub fn to_text(&self) -> String {
        let width = self
            .scores
            .iter()
            .map(|s| s.name.chars().count())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("objects: {}    sigma^2: {}", self.m, self.sigma2));
        line(String::new());
        line("scores (alpha_hat):".into());
        for s in &self.scores {
            line(format!("  {:<width$}  {:>7.3}", s.name, s.alpha));
        }
        line(String::new());
        line("subtractivity tests:".into());
        line(format!(
            "  chi-square                 stat {:.3}  df {}  p {:.4}",
            self.chi2.stat, self.chi2.df, self.chi2.p
        ));
        line(format!(
            "  largest singular value     stat {:.3}  p {:.4}",
            self.largest_sv.stat, self.largest_sv.p
        ));
        let std_p = match &self.standardized.p {
            StandardizedValue::Value(p) => format!("{p:.4}"),
            StandardizedValue::Marker("outside_validity") => {
                "outside exact-validity range (< 1/sqrt(2))".into()
            }
            StandardizedValue::Marker(_) => "not applicable (needs m >= 5)".into(),
        };
        line(format!(
            "  standardized (LRT)         stat {:.3}  p {std_p}",
            self.standardized.stat
        ));
        let spectrum: Vec<String> = self.spectrum.iter().map(|s| format!("{s:.3}")).collect();
        line(format!(
            "  singular values            {}",
            spectrum.join(" ")
        ));
        line(String::new());
        let d = &self.deadlock;
        line(format!(
            "three-way deadlock: ({}, {}, {}) = {:.3}  [{} -> {} -> {}]",
            d.triple[0], d.triple[1], d.triple[2], d.value, d.names[0], d.names[1], d.names[2]
        ));
        line(format!(
            "  residual-plot area 2S/sqrt(3) = {:.3}",
            d.area_contrast
        ));
        line(String::new());
        line("residual plot coordinates:".into());
        for p in &self.embedding {
            line(format!("  {:<width$}  {:>7.3}  {:>7.3}", p.name, p.x, p.y));
        }
        out
    }
}
