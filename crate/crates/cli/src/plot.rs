//! Plot-ready CSV files derived from a [`BatchSummary`].
//!
//! * `boxplot.csv`: `case,method,metric,count,min,q1,median,q3,max,outliers`,
//!   one row per group and metric; outliers are `;`-separated. Numbers use
//!   the shortest representation that parses back to the same `f64`.
//! * `histogram.csv`: `case,bin,<method>…`, one row per case and pair count
//!   (matching batches only).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::Method;
use crate::harness::BatchSummary;
use crate::stats::BoxStats;

pub fn boxplot_csv(summary: &BatchSummary) -> String {
    let mut out = String::from("case,method,metric,count,min,q1,median,q3,max,outliers\n");
    for g in &summary.groups {
        for (metric, stats) in [("formation_error", &g.formation_error), ("input_norm", &g.input_norm)] {
            if let Some(b) = stats {
                let outliers: Vec<String> = b.outliers.iter().map(|v| format!("{v:?}")).collect();
                writeln!(
                    out,
                    "{},{},{metric},{},{:?},{:?},{:?},{:?},{:?},{}",
                    g.case,
                    g.method.name(),
                    b.count,
                    b.min,
                    b.q1,
                    b.median,
                    b.q3,
                    b.max,
                    outliers.join(";")
                )
                .unwrap();
            }
        }
    }
    out
}

/// `None` when no group carries a pair histogram.
pub fn histogram_csv(summary: &BatchSummary) -> Option<String> {
    let mut methods: Vec<Method> = summary.groups.iter().filter(|g| g.pair_histogram.is_some()).map(|g| g.method).collect();
    methods.sort();
    methods.dedup();
    if methods.is_empty() {
        return None;
    }
    let mut cases: Vec<&str> = Vec::new();
    for g in &summary.groups {
        if g.pair_histogram.is_some() && !cases.contains(&g.case.as_str()) {
            cases.push(&g.case);
        }
    }
    let mut out = String::from("case,bin");
    for m in &methods {
        write!(out, ",{}", m.name()).unwrap();
    }
    out.push('\n');
    for case in cases {
        let hists: Vec<Vec<usize>> = methods
            .iter()
            .map(|&m| summary.group(case, m).and_then(|g| g.pair_histogram.as_ref()).map(|h| h.counts.clone()).unwrap_or_default())
            .collect();
        let bins = hists.iter().map(Vec::len).max().unwrap_or(0);
        for bin in 0..bins {
            write!(out, "{case},{bin}").unwrap();
            for h in &hists {
                write!(out, ",{}", h.get(bin).copied().unwrap_or(0)).unwrap();
            }
            out.push('\n');
        }
    }
    Some(out)
}

/// Writes the CSVs into `dir` and returns their paths.
pub fn emit_plot_data(summary: &BatchSummary, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("boxplot.csv");
    std::fs::write(&path, boxplot_csv(summary))?;
    written.push(path);
    if let Some(text) = histogram_csv(summary) {
        let path = dir.join("histogram.csv");
        std::fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}

/// Parses one `boxplot.csv` row back into `(case, method, metric, stats)`.
pub fn parse_boxplot_row(line: &str) -> Option<(String, String, String, BoxStats)> {
    let f: Vec<&str> = line.split(',').collect();
    if f.len() != 10 {
        return None;
    }
    let num = |s: &str| s.parse::<f64>().ok();
    let outliers = if f[9].is_empty() { Vec::new() } else { f[9].split(';').map(num).collect::<Option<Vec<f64>>>()? };
    Some((
        f[0].to_string(),
        f[1].to_string(),
        f[2].to_string(),
        BoxStats { count: f[3].parse().ok()?, min: num(f[4])?, q1: num(f[5])?, median: num(f[6])?, q3: num(f[7])?, max: num(f[8])?, outliers },
    ))
}
