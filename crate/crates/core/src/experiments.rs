//! Seeded Monte Carlo on G(n, p) at `p = sqrt(alpha / (n log n))`.
//!
//! Trial `t` at grid position `a` samples its graph from
//! `mix_seed(master_seed, t, a)`, so rows depend only on the configuration
//! and never on scheduling or thread count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::{beta_star, threshold_p, DEFAULT_TOL};
use crate::bootstrap::{k4_closure_naive, TwoNeighbour};
use crate::clique_process::{run_with, Policy};
use crate::graph::{sample_gnp, Graph};
use crate::rng::mix_seed;

pub const DEFAULT_MAX_N: usize = 200_000;
pub const DEFAULT_MEMORY_LIMIT: u64 = 4 << 30;
const BYTES_PER_EDGE: u64 = 256;
const BYTES_PER_VERTEX: u64 = 64;
const CROSS_CHECK_MAX_N: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("estimated memory {estimated} bytes exceeds the limit of {limit} bytes")]
    ResourceGuard { estimated: u64, limit: u64 },
    #[error("n = {n} exceeds the vertex cap {cap}")]
    VertexCap { n: usize, cap: usize },
    #[error("fast and naive closures disagree at alpha index {alpha_index}, trial {trial}")]
    OracleMismatch { alpha_index: usize, trial: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub alpha_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// 0 keeps the ambient rayon pool.
    pub threads: usize,
    pub seed_edges: bool,
    /// Edges examined per trial by the seed-edge census (0 = all).
    pub seed_edge_cap: usize,
    /// Fill `runtime_ms`; otherwise it is written as 0.
    pub timing: bool,
    pub max_n: usize,
    pub memory_limit: u64,
}

impl ExperimentConfig {
    pub fn new(n: usize, alpha_grid: Vec<f64>, trials: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            n,
            alpha_grid,
            trials,
            master_seed,
            threads: 0,
            seed_edges: false,
            seed_edge_cap: 0,
            timing: false,
            max_n: DEFAULT_MAX_N,
            memory_limit: DEFAULT_MEMORY_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::InvalidConfig(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.alpha_grid.is_empty() {
            return bad("alpha grid is empty".into());
        }
        if self.n < 3 {
            return bad(format!("n must be at least 3, got {}", self.n));
        }
        if self.n > self.max_n {
            return Err(ExperimentError::VertexCap {
                n: self.n,
                cap: self.max_n,
            });
        }
        for &a in &self.alpha_grid {
            let p = threshold_p(self.n as u64, a);
            if !(a > 0.0) || !(p > 0.0 && p < 1.0) {
                return bad(format!("alpha = {a} gives p = {p} outside (0, 1)"));
            }
        }
        let estimated = self.estimated_memory();
        if estimated > self.memory_limit {
            return Err(ExperimentError::ResourceGuard {
                estimated,
                limit: self.memory_limit,
            });
        }
        Ok(())
    }

    /// Peak bytes with one graph per worker at the densest grid point.
    pub fn estimated_memory(&self) -> u64 {
        let n = self.n as f64;
        let alpha = self.alpha_grid.iter().cloned().fold(0.0, f64::max);
        let p = threshold_p(self.n as u64, alpha).min(1.0);
        let edges = p * n * (n - 1.0) / 2.0;
        let workers = if self.threads == 0 {
            rayon::current_num_threads()
        } else {
            self.threads
        }
        .min(self.trials * self.alpha_grid.len()) as f64;
        ((edges * BYTES_PER_EDGE as f64 + n * BYTES_PER_VERTEX as f64) * workers) as u64
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, ExperimentError> {
        if self.threads == 0 {
            return Ok(f());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
        Ok(pool.install(f))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub trial: usize,
    pub seed: u64,
    pub percolated: bool,
    pub max_clique: usize,
    pub isolated: usize,
    pub seed_edges: Option<u64>,
    pub runtime_ms: u64,
}

/// Number of seed edges of `g`, examining at most `cap` edges (0 = all).
pub fn seed_edge_census(g: &Graph, cap: usize) -> u64 {
    let mut tn = TwoNeighbour::new(g.n());
    let limit = if cap == 0 { g.m() } else { cap.min(g.m()) };
    g.edges()[..limit]
        .iter()
        .filter(|&&(u, v)| tn.run(g, &[u, v]).len() == g.n())
        .count() as u64
}

fn run_trial(cfg: &ExperimentConfig, alpha_index: usize, trial: usize) -> Result<ScanRow, ExperimentError> {
    let alpha = cfg.alpha_grid[alpha_index];
    let seed = mix_seed(cfg.master_seed, trial as u64, alpha_index as u64);
    let p = threshold_p(cfg.n as u64, alpha);
    let g = sample_gnp(cfg.n, p, seed).map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
    let start = Instant::now();
    let state = run_with(&g, Policy::Fifo, false);
    if cfg.n <= CROSS_CHECK_MAX_N && state.closure() != k4_closure_naive(&g) {
        return Err(ExperimentError::OracleMismatch { alpha_index, trial });
    }
    let seed_edges = cfg.seed_edges.then(|| seed_edge_census(&g, cfg.seed_edge_cap));
    let runtime_ms = if cfg.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(ScanRow {
        n: cfg.n,
        alpha,
        p,
        trial,
        seed,
        percolated: state.spans(),
        max_clique: state.largest_cluster(),
        isolated: g.isolated_count(),
        seed_edges,
        runtime_ms,
    })
}

/// One row per `(alpha, trial)`, ordered by alpha index then trial.
pub fn percolation_probability_scan(cfg: &ExperimentConfig) -> Result<Vec<ScanRow>, ExperimentError> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.alpha_grid.len())
        .flat_map(|a| (0..cfg.trials).map(move |t| (a, t)))
        .collect();
    cfg.install(|| jobs.par_iter().map(|&(a, t)| run_trial(cfg, a, t)).collect())?
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionRow {
    pub alpha: f64,
    pub trials: usize,
    pub percolated: usize,
    pub fraction: f64,
}

pub fn percolation_fractions(rows: &[ScanRow]) -> Vec<FractionRow> {
    let mut out: Vec<FractionRow> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some(f) if f.alpha == r.alpha => {
                f.trials += 1;
                f.percolated += r.percolated as usize;
            }
            _ => out.push(FractionRow {
                alpha: r.alpha,
                trials: 1,
                percolated: r.percolated as usize,
                fraction: 0.0,
            }),
        }
    }
    for f in &mut out {
        f.fraction = f.percolated as f64 / f.trials as f64;
    }
    out
}

/// Whether each fraction is at least the previous one minus `sigmas` standard
/// errors of their difference.
pub fn monotone_within_noise(fractions: &[FractionRow], sigmas: f64) -> bool {
    fractions.windows(2).all(|w| {
        let var = |f: &FractionRow| f.fraction * (1.0 - f.fraction) / f.trials as f64;
        let slack = sigmas * (var(&w[0]) + var(&w[1])).sqrt();
        w[1].fraction >= w[0].fraction - slack
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueSummary {
    pub n: usize,
    pub alpha: f64,
    pub trials: usize,
    pub beta_star: f64,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueScan {
    pub rows: Vec<ScanRow>,
    pub summaries: Vec<CliqueSummary>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summary of `max_clique / ln n` for the given rows (all at one alpha).
pub fn summarize_ratios(n: usize, alpha: f64, rows: &[&ScanRow]) -> Result<CliqueSummary, ExperimentError> {
    let ln_n = (n as f64).ln();
    let mut r: Vec<f64> = rows.iter().map(|row| row.max_clique as f64 / ln_n).collect();
    if r.is_empty() {
        return Err(ExperimentError::InvalidConfig("no rows to summarize".into()));
    }
    r.sort_by(f64::total_cmp);
    let t = r.len() as f64;
    let mean = r.iter().sum::<f64>() / t;
    let sd = if r.len() > 1 {
        (r.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)).sqrt()
    } else {
        0.0
    };
    let beta = beta_star(alpha, DEFAULT_TOL).map_err(|e| ExperimentError::InvalidConfig(e.to_string()))?;
    Ok(CliqueSummary {
        n,
        alpha,
        trials: r.len(),
        beta_star: beta,
        mean,
        sd,
        min: r[0],
        q25: quantile(&r, 0.25),
        median: quantile(&r, 0.5),
        q75: quantile(&r, 0.75),
        max: r[r.len() - 1],
    })
}

pub fn largest_clique_scan(cfg: &ExperimentConfig) -> Result<CliqueScan, ExperimentError> {
    if let Some(&a) = cfg.alpha_grid.iter().find(|&&a| !(a > 0.0 && a < 1.0 / 3.0)) {
        return Err(ExperimentError::InvalidConfig(format!(
            "largest-clique scans need alpha in (0, 1/3), got {a}"
        )));
    }
    let rows = percolation_probability_scan(cfg)?;
    let summaries = cfg
        .alpha_grid
        .iter()
        .enumerate()
        .map(|(a, &alpha)| {
            let sel: Vec<&ScanRow> = rows[a * cfg.trials..(a + 1) * cfg.trials].iter().collect();
            summarize_ratios(cfg.n, alpha, &sel)
        })
        .collect::<Result<_, _>>()?;
    Ok(CliqueScan { rows, summaries })
}

pub const CSV_HEADER: &str = "n,alpha,p,trial,seed,percolated,max_clique,isolated,seed_edges,runtime_ms";

pub fn rows_to_csv(rows: &[ScanRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to Vec")).expect("CSV is UTF-8")
}

pub fn rows_to_json(rows: &[ScanRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_edge_examples() {
        assert_eq!(seed_edge_census(&Graph::complete(4), 0), 6);
        assert_eq!(seed_edge_census(&Graph::cycle(5), 0), 0);
        assert_eq!(seed_edge_census(&Graph::complete(4), 2), 2);
    }

    #[test]
    fn csv_header_is_exact() {
        let cfg = ExperimentConfig::new(30, vec![0.2], 2, 7);
        let rows = percolation_probability_scan(&cfg).unwrap();
        let text = rows_to_csv(&rows);
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 3);
        assert!(rows_to_csv(&[]).starts_with(CSV_HEADER));
    }

    #[test]
    fn seeds_follow_the_mixer() {
        let cfg = ExperimentConfig::new(40, vec![0.1, 5.0], 3, 99);
        let rows = percolation_probability_scan(&cfg).unwrap();
        assert_eq!(rows.len(), 6);
        for (j, r) in rows.iter().enumerate() {
            let (a, t) = (j / 3, j % 3);
            assert_eq!((r.trial, r.alpha), (t, cfg.alpha_grid[a]));
            assert_eq!(r.seed, mix_seed(99, t as u64, a as u64));
            assert_eq!(r.runtime_ms, 0);
            if r.isolated == 0 {
                assert_eq!(r.percolated, r.max_clique == r.n);
            }
        }
    }

    #[test]
    fn guards() {
        let mut cfg = ExperimentConfig::new(1000, vec![0.2], 1, 0);
        cfg.memory_limit = 1000;
        assert!(matches!(cfg.validate(), Err(ExperimentError::ResourceGuard { .. })));
        assert!(ExperimentConfig::new(1000, vec![0.2], 0, 0).validate().is_err());
        assert!(ExperimentConfig::new(1000, vec![-1.0], 1, 0).validate().is_err());
        assert!(matches!(
            ExperimentConfig::new(300_000, vec![0.2], 1, 0).validate(),
            Err(ExperimentError::VertexCap { .. })
        ));
        assert!(largest_clique_scan(&ExperimentConfig::new(100, vec![0.5], 1, 0)).is_err());
    }

    #[test]
    fn empty_graph_ratio_is_zero() {
        let row = ScanRow {
            n: 10,
            alpha: 0.2,
            p: 0.1,
            trial: 0,
            seed: 0,
            percolated: false,
            max_clique: crate::clique_process::largest_percolating_clique(&Graph::empty(10)),
            isolated: 10,
            seed_edges: None,
            runtime_ms: 0,
        };
        let s = summarize_ratios(10, 0.2, &[&row]).unwrap();
        assert_eq!(s.mean, 0.0);
    }

    #[test]
    fn monotone_check() {
        let f = |alpha: f64, k: usize| FractionRow {
            alpha,
            trials: 50,
            percolated: k,
            fraction: k as f64 / 50.0,
        };
        assert!(monotone_within_noise(&[f(0.1, 0), f(0.2, 3), f(0.3, 2), f(1.0, 50)], 2.0));
        assert!(!monotone_within_noise(&[f(0.1, 40), f(0.2, 5)], 2.0));
    }
}
