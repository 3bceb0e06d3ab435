//! Timing of `H_{w^n}(1)` over both representations.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::brw;
use crate::cnf;
use crate::hierarchy::{self, HardyResult, HierarchyError};

pub const CSV_HEADER: &str = "rep,n,result,seconds,steps";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rep {
    Cnf,
    Brw,
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rep::Cnf => "cnf",
            Rep::Brw => "brw",
        })
    }
}

impl FromStr for Rep {
    type Err = String;

    fn from_str(s: &str) -> Result<Rep, String> {
        match s {
            "cnf" => Ok(Rep::Cnf),
            "brw" => Ok(Rep::Brw),
            _ => Err(format!("unknown representation {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub rep: Rep,
    pub n: u64,
    pub result: u64,
    /// Median over the timed samples.
    pub seconds: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{err} (rep={rep} n={n})")]
pub struct BenchError {
    /// Rows completed before the failure.
    pub rows: Vec<BenchRow>,
    pub rep: Rep,
    pub n: u64,
    pub err: HierarchyError,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub reps: Vec<Rep>,
    pub ns: Vec<u64>,
    pub warmup: u32,
    pub samples: u32,
    pub budget: Option<u64>,
}

impl Default for BenchConfig {
    fn default() -> BenchConfig {
        BenchConfig {
            reps: vec![Rep::Cnf, Rep::Brw],
            ns: vec![500, 1000, 1500, 2000],
            warmup: 1,
            samples: 5,
            budget: Some(100_000_000),
        }
    }
}

/// Builds `w^n` and evaluates it at 1. Construction is part of the timed work.
fn run_once(rep: Rep, n: u64, budget: Option<u64>) -> Result<HardyResult, HierarchyError> {
    match rep {
        Rep::Cnf => hierarchy::hardy_cnf_budget(&cnf::omega_pow(&cnf::nat(n)), 1, budget),
        Rep::Brw => {
            hierarchy::hardy_brw_budget(&brw::exp(&brw::omega(), &brw::from_nat(n)), 1, budget)
        }
    }
}

fn measure(rep: Rep, n: u64, cfg: &BenchConfig) -> Result<BenchRow, HierarchyError> {
    for _ in 0..cfg.warmup {
        run_once(rep, n, cfg.budget)?;
    }
    let mut times = Vec::with_capacity(cfg.samples.max(1) as usize);
    let mut last = None;
    for _ in 0..cfg.samples.max(1) {
        let start = Instant::now();
        let r = run_once(rep, n, cfg.budget)?;
        times.push(start.elapsed());
        last = Some(r);
    }
    let r = last.expect("at least one sample");
    Ok(BenchRow {
        rep,
        n,
        result: r.value,
        seconds: median(&mut times).as_secs_f64(),
        steps: r.steps,
    })
}

fn median(times: &mut [Duration]) -> Duration {
    times.sort_unstable();
    let m = times.len() / 2;
    if times.len() % 2 == 1 {
        times[m]
    } else {
        (times[m - 1] + times[m]) / 2
    }
}

/// One row per representation and `n`, representations outermost.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut rows = Vec::new();
    for &rep in &cfg.reps {
        for &n in &cfg.ns {
            match measure(rep, n, cfg) {
                Ok(row) => rows.push(row),
                Err(err) => return Err(BenchError { rows, rep, n, err }),
            }
        }
    }
    Ok(rows)
}

pub fn write_csv(mut out: impl Write, rows: &[BenchRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.9},{}",
            r.rep, r.n, r.result, r.seconds, r.steps
        )?;
    }
    out.flush()
}
