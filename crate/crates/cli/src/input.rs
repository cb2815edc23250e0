//! Score-sheet CSV and raw skew-matrix readers.
//!
//! A score sheet is a square grid: the header row holds a corner cell and the
//! object names, and each following row holds a name and `m` win counts, with
//! `-` on the diagonal.

use std::path::Path;

use skewtail_core::paired::variance_stabilize;
use skewtail_core::{ScoreSheet, SkewObservations};

use crate::error::{CliError, CliResult};

/// Skew-symmetry tolerance for pre-stabilized matrices.
pub const RAW_SKEW_TOL: f64 = 1e-9;

/// Observations ready for fitting, with the labels to report them under.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub names: Vec<String>,
    pub obs: SkewObservations,
    /// Present when the data came from a score sheet.
    pub sheet: Option<ScoreSheet>,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_score_sheet(text: &str, n_games: u32) -> CliResult<ScoreSheet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Data(format!("malformed CSV: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(record.iter().map(str::to_owned).collect::<Vec<_>>());
    }
    let Some((header, body)) = rows.split_first() else {
        return Err(CliError::Data("score sheet is empty".into()));
    };
    let names: Vec<String> = header[1..].to_vec();
    let m = names.len();
    if m == 0 {
        return Err(CliError::Data("header row lists no objects".into()));
    }
    if body.len() != m {
        return Err(CliError::Data(format!(
            "header lists {m} objects but the sheet has {} rows",
            body.len()
        )));
    }
    let mut wins = vec![0u32; m * m];
    for (i, row) in body.iter().enumerate() {
        let label = format!("row {} ({})", i + 1, row[0]);
        if row.len() != m + 1 {
            return Err(CliError::Data(format!(
                "{label}: expected {} cells, found {}",
                m + 1,
                row.len()
            )));
        }
        if row[0] != names[i] {
            return Err(CliError::Data(format!(
                "{label}: row name does not match column {} ({})",
                i + 1,
                names[i]
            )));
        }
        for (j, cell) in row[1..].iter().enumerate() {
            let at = || format!("{label}, column {} ({})", j + 1, names[j]);
            if i == j {
                if cell != "-" && !cell.is_empty() {
                    return Err(CliError::Data(format!(
                        "{}: diagonal cell must be '-', found '{cell}'",
                        at()
                    )));
                }
                continue;
            }
            wins[i * m + j] = cell
                .parse()
                .map_err(|_| CliError::Data(format!("{}: '{cell}' is not a win count", at())))?;
        }
    }
    ScoreSheet::new(names, n_games, wins).map_err(CliError::from_data)
}

/// Whitespace-separated `m×m` matrix of already stabilized scores.
pub fn parse_raw_matrix(text: &str) -> CliResult<SkewObservations> {
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    let m = rows.len();
    if m == 0 {
        return Err(CliError::Data("matrix is empty".into()));
    }
    let mut y = Vec::with_capacity(m * m);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(CliError::Data(format!(
                "row {}: expected {m} entries, found {}",
                i + 1,
                row.len()
            )));
        }
        for (j, cell) in row.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Data(format!(
                    "row {}, column {}: '{cell}' is not a number",
                    i + 1,
                    j + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Data(format!(
                    "row {}, column {}: not finite",
                    i + 1,
                    j + 1
                )));
            }
            y.push(v);
        }
    }
    SkewObservations::new(m, y, RAW_SKEW_TOL).map_err(CliError::from_data)
}

/// Loads a score sheet (stabilizing it) or, with `raw`, a skew matrix.
pub fn load(path: &Path, n_games: Option<u32>, raw: bool) -> CliResult<Dataset> {
    let text = read(path)?;
    if raw {
        let obs = parse_raw_matrix(&text)?;
        let names = (1..=obs.m()).map(|i| i.to_string()).collect();
        return Ok(Dataset {
            names,
            obs,
            sheet: None,
        });
    }
    let n =
        n_games.ok_or_else(|| CliError::Usage("--n-games is required for score sheets".into()))?;
    let sheet = parse_score_sheet(&text, n)?;
    let obs = variance_stabilize(&sheet).map_err(CliError::from_data)?;
    Ok(Dataset {
        names: sheet.names().to_vec(),
        obs,
        sheet: Some(sheet),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHEET: &str = "team,A,B,C\nA,-,3,1\nB,2,-,4\nC,4,1,-\n";

    #[test]
    fn reads_a_small_sheet() {
        let s = parse_score_sheet(SHEET, 5).unwrap();
        assert_eq!(s.m(), 3);
        assert_eq!(s.wins(1, 2), 4);
        assert_eq!(s.names(), ["A", "B", "C"]);
    }

    #[test]
    fn reports_the_offending_cell() {
        let bad = SHEET.replace("B,2,-,4", "B,2,-,x");
        let err = parse_score_sheet(&bad, 5).unwrap_err().to_string();
        assert!(err.contains("row 2 (B), column 3 (C)"), "{err}");
        let tie = SHEET.replace("B,2,-,4", "B,2,-,3");
        let err = parse_score_sheet(&tie, 5).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_string().contains("row 2 (B), column 3 (C)"), "{err}");
    }

    #[test]
    fn raw_matrix_must_be_skew() {
        assert!(parse_raw_matrix("0 1\n-1 0\n").is_ok());
        let err = parse_raw_matrix("0 1\n-0.5 0\n").unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(parse_raw_matrix("0 1 2\n-1 0\n").is_err());
    }
}
