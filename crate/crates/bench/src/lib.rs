//! Shared inputs for the benchmarks.

use skewtail_core::paired::variance_stabilize;
use skewtail_core::{ScoreSheet, SkewObservations};

/// Central League 1997 round robin (27 games per pair), stabilized.
pub fn central_league() -> SkewObservations {
    let names = [
        "Yakult",
        "Yokohama",
        "Hiroshima",
        "Yomiuri",
        "Hanshin",
        "Chunichi",
    ];
    let wins = [
        [0, 13, 15, 19, 20, 16],
        [14, 0, 16, 13, 10, 19],
        [12, 11, 0, 13, 12, 18],
        [8, 14, 14, 0, 14, 13],
        [7, 17, 15, 13, 0, 10],
        [11, 8, 9, 14, 17, 0],
    ];
    let sheet = ScoreSheet::new(
        names.iter().map(|s| s.to_string()).collect(),
        27,
        wins.iter().flatten().copied().collect(),
    )
    .expect("valid sheet");
    variance_stabilize(&sheet).expect("skew by construction")
}
