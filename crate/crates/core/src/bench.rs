//! Scaling harness: times the edge DFS and the tree build on random
//! 2-edge-connected graphs of growing size and fits the log-log slope of
//! total time against edge count.

use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use crate::builder::build_spanning_tree;
use crate::edge_dfs::compute_edge_dfs;
use crate::generators::gen_random_2ec;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// Medians over the repetitions, in nanoseconds.
    pub t_dfs_ns: u64,
    pub t_build_ns: u64,
    pub t_total_ns: u64,
    pub enqueues: usize,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "n,m,seed,t_dfs_ns,t_build_ns,t_total_ns,enqueues";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.seed,
            self.t_dfs_ns,
            self.t_build_ns,
            self.t_total_ns,
            self.enqueues
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    /// One entry per requested size; `Err` carries the failure message.
    pub rows: Vec<Result<BenchRow, String>>,
    /// Least-squares slope of `ln t_total` against `ln m`; needs two rows.
    pub slope: Option<f64>,
}

impl BenchReport {
    pub fn ok_rows(&self) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter_map(|r| r.as_ref().ok())
    }

    /// `t(m_{i+1}) / t(m_i)` for consecutive successful rows.
    pub fn adjacent_ratios(&self) -> Vec<f64> {
        let rows: Vec<&BenchRow> = self.ok_rows().collect();
        rows.windows(2)
            .map(|w| w[1].t_total_ns as f64 / w[0].t_total_ns.max(1) as f64)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", BenchRow::CSV_HEADER)?;
        for row in self.ok_rows() {
            writeln!(out, "{}", row.csv_row())?;
        }
        Ok(())
    }
}

fn median(mut xs: Vec<u64>) -> u64 {
    xs.sort_unstable();
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2
    }
}

/// Least-squares slope through `(x, y)` points.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

struct Sample {
    g: Graph,
    n: usize,
    dfs: Vec<u64>,
    build: Vec<u64>,
    total: Vec<u64>,
    enqueues: usize,
}

impl Sample {
    fn new(m_target: usize, seed: u64) -> Result<Sample, String> {
        let n = (m_target / 3).max(3);
        let extra = m_target.saturating_sub(n);
        let g = gen_random_2ec(n, extra, seed).map_err(|e| e.to_string())?;
        Ok(Sample {
            g,
            n,
            dfs: Vec::new(),
            build: Vec::new(),
            total: Vec::new(),
            enqueues: 0,
        })
    }

    fn time_once(&mut self) -> Result<(), String> {
        let t0 = Instant::now();
        let traversal = compute_edge_dfs(&self.g, 0).map_err(|e| e.to_string())?;
        let t1 = Instant::now();
        let (tree, trace) =
            build_spanning_tree(&self.g, &traversal, 0, false).map_err(|e| e.to_string())?;
        let t2 = Instant::now();
        std::hint::black_box(&tree);
        self.dfs.push((t1 - t0).as_nanos() as u64);
        self.build.push((t2 - t1).as_nanos() as u64);
        self.total.push((t2 - t0).as_nanos() as u64);
        self.enqueues = trace.enqueue_count;
        Ok(())
    }

    fn into_row(self, seed: u64) -> BenchRow {
        BenchRow {
            n: self.n,
            m: self.g.edge_count(),
            seed,
            t_dfs_ns: median(self.dfs),
            t_build_ns: median(self.build),
            t_total_ns: median(self.total),
            enqueues: self.enqueues,
        }
    }
}

fn guarded<T>(m: usize, f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    panic::catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| Err(format!("size {m}: run aborted")))
}

/// Runs one row per target edge count. A random 2-edge-connected graph with
/// `n = m/3` and `m - n` chords is generated for every size before timing
/// starts. Repetitions are interleaved: each round times every size once,
/// smallest first, and each row reports medians over its `reps` runs.
pub fn run_bench(sizes: &[usize], seed: u64, reps: usize) -> BenchReport {
    let mut samples: Vec<Result<Sample, String>> = sizes
        .iter()
        .map(|&m| guarded(m, || Sample::new(m, seed)))
        .collect();
    for _ in 0..reps.max(1) {
        for (slot, &m) in samples.iter_mut().zip(sizes) {
            if let Ok(sample) = slot {
                if let Err(e) = guarded(m, || sample.time_once()) {
                    *slot = Err(e);
                }
            }
        }
    }
    let rows: Vec<Result<BenchRow, String>> = samples
        .into_iter()
        .map(|s| s.map(|s| s.into_row(seed)))
        .collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|r| ((r.m as f64).ln(), (r.t_total_ns.max(1) as f64).ln()))
        .collect();
    BenchReport {
        slope: fit_slope(&points),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (i as f64, 2.0 * i as f64 + 1.0)).collect();
        assert!((fit_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&pts[..1]), None);
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![5, 1, 3]), 3);
        assert_eq!(median(vec![4, 1, 3, 2]), 2);
    }

    #[test]
    fn small_bench_rows() {
        let report = run_bench(&[300, 600], 7, 3);
        assert_eq!(report.ok_rows().count(), 2);
        for row in report.ok_rows() {
            assert_eq!(row.enqueues, 2 * row.m);
            assert_eq!(row.n, row.m / 3);
        }
        assert!(report.slope.is_some());
        assert_eq!(report.adjacent_ratios().len(), 1);

        let single = run_bench(&[300], 7, 1);
        assert_eq!(single.slope, None);

        // Non-timing columns are reproducible.
        let again = run_bench(&[300, 600], 7, 1);
        let strip = |r: &BenchReport| -> Vec<(usize, usize, u64, usize)> {
            r.ok_rows()
                .map(|x| (x.n, x.m, x.seed, x.enqueues))
                .collect()
        };
        assert_eq!(strip(&report), strip(&again));

        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with(BenchRow::CSV_HEADER));
    }
}
