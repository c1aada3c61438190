// SPDX-License-Identifier: Apache-2.0

//! Benchmark runs over the MCNC instances and comparison with published
//! wire-lengths.

use serde::{Deserialize, Serialize};

use crate::squeeze::Volume;

/// Published results for one MCNC instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub name: &'static str,
    pub grid: [usize; 3],
    /// Squeezed bounding volume reported for the 3D run.
    pub volume: (f64, f64, usize),
    pub wirelength_3d: f64,
    /// Best known 2D wire-length on the original die.
    pub wirelength_2d: f64,
}

pub const REFERENCES: [Reference; 5] = [
    Reference {
        name: "apte",
        grid: [2, 2, 3],
        volume: (5018.0, 4972.0, 3),
        wirelength_3d: 137_325.0,
        wirelength_2d: 513_061.0,
    },
    Reference {
        name: "xerox",
        grid: [2, 2, 3],
        volume: (3864.0, 3829.0, 3),
        wirelength_3d: 290_183.0,
        wirelength_2d: 370_993.0,
    },
    Reference {
        name: "hp",
        grid: [2, 2, 3],
        volume: (3758.0, 3542.0, 3),
        wirelength_3d: 105_848.0,
        wirelength_2d: 153_328.0,
    },
    Reference {
        name: "ami33",
        grid: [3, 3, 4],
        volume: (911.0, 1163.0, 4),
        wirelength_3d: 42_183.0,
        wirelength_2d: 58_627.0,
    },
    Reference {
        name: "ami49",
        grid: [4, 4, 4],
        volume: (5769.0, 5979.0, 4),
        wirelength_3d: 704_135.0,
        wirelength_2d: 640_509.0,
    },
];

/// Looks up an instance by file stem, e.g. `apte` or `apte.yal`.
pub fn reference(name: &str) -> Option<&'static Reference> {
    let stem = name.rsplit(['/', '\\']).next().unwrap_or(name);
    let stem = stem.strip_suffix(".yal").unwrap_or(stem);
    REFERENCES.iter().find(|r| r.name.eq_ignore_ascii_case(stem))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub name: String,
    pub grid: [usize; 3],
    pub runs: usize,
    pub volume: Volume,
    pub wirelength_best: f64,
    pub wirelength_mean: f64,
    pub reference_wirelength: Option<f64>,
    pub reference_2d: Option<f64>,
}

impl BenchRow {
    pub fn ratio_to_reference(&self) -> Option<f64> {
        self.reference_wirelength.map(|r| self.wirelength_best / r)
    }

    pub fn ratio_to_2d(&self) -> Option<f64> {
        self.reference_2d.map(|r| self.wirelength_best / r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchFailure {
    pub name: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub failures: Vec<BenchFailure>,
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.prec$}"))
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<10} {:<7} {:>5} {:>24} {:>12} {:>12} {:>10} {:>10} {:>7} {:>7}\n",
            "instance", "grid", "runs", "volume", "wl best", "wl mean", "ref 3D", "ref 2D", "/3D", "/2D"
        );
        for r in &self.rows {
            let vol = format!("{:.0}x{:.0}x{}", r.volume.vx, r.volume.vy, r.volume.layers);
            out.push_str(&format!(
                "{:<10} {:<7} {:>5} {:>24} {:>12.0} {:>12.0} {:>10} {:>10} {:>7} {:>7}\n",
                r.name,
                format!("{}x{}x{}", r.grid[0], r.grid[1], r.grid[2]),
                r.runs,
                vol,
                r.wirelength_best,
                r.wirelength_mean,
                opt(r.reference_wirelength, 0),
                opt(r.reference_2d, 0),
                opt(r.ratio_to_reference(), 3),
                opt(r.ratio_to_2d(), 3),
            ));
        }
        for f in &self.failures {
            out.push_str(&format!("{:<10} FAILED: {}\n", f.name, f.error));
        }
        out
    }
}
