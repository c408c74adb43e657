//! Random-database generation, per-method metric collection, and report
//! emission.
//!
//! Each trial encodes a random database at k = log2(N), lowers the circuit
//! and measures it. Trials run on a worker pool; rows are sorted by
//! (size, method, seed) before emission so identical configurations
//! produce identical reports (the wall-time column aside).

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{encode_database, Database, EncodedDatabase, Entry};
use crate::phase::Method;
use crate::sim;

/// One measured (size, method, trial) cell.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BenchmarkRow {
    pub size: usize,
    pub method: String,
    pub seed: u64,
    pub cnot_count: u64,
    pub u_count: u64,
    pub tm_total: u64,
    pub t_order: u32,
    pub qubit_count: usize,
    pub synth_ms: u64,
    /// Whether the circuit was verified against its label table in the
    /// simulator (skipped above the qubit cap).
    pub verified: bool,
}

/// Integer-rounded averages of one (size, method) group. The `t_order`
/// column is the group maximum rather than a mean: it is the phase-gate
/// precision the whole batch requires.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchmarkSummary {
    pub size: usize,
    pub method: String,
    pub trials: usize,
    pub cnot_count: u64,
    pub u_count: u64,
    pub tm_total: u64,
    pub t_order: u32,
    pub qubit_count: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub sizes: Vec<usize>,
    pub methods: Vec<String>,
    pub trials: usize,
    pub base_seed: u64,
    /// Simulator verification for sizes <= 64 is skipped for circuits wider
    /// than this.
    pub verify_qubit_cap: usize,
    pub verify: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sizes: vec![4, 8, 16, 32, 64, 128, 256, 512, 1024],
            methods: vec![
                "phase-tolerant".into(),
                "phase-tolerant-htsp".into(),
                "gray".into(),
            ],
            trials: 30,
            base_seed: 0x5eed,
            verify_qubit_cap: 20,
            verify: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub rows: Vec<BenchmarkRow>,
    pub summaries: Vec<BenchmarkSummary>,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Seed for one trial, mixed from the base seed, the size and the trial
/// number so every cell is independent and reproducible.
pub fn trial_seed(base: u64, size: usize, trial: usize) -> u64 {
    splitmix(base ^ splitmix(size as u64) ^ splitmix(trial as u64).rotate_left(17))
}

/// N random 64-bit integer entries from a seeded generator.
pub fn random_database(n: usize, seed: u64) -> Result<Database> {
    if !n.is_power_of_two() || !(4..=1024).contains(&n) {
        return Err(Error::BadBenchmarkSize(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n).map(|_| Entry::Int(rng.next_u64() as i64)).collect();
    Database::new(entries)
}

/// Check U_D|i>|0>|0..> = (phase) |i>|l(e_i)>|..> for every index.
fn verify_encoding(enc: &EncodedDatabase) -> Result<bool> {
    let total = enc.circuit.num_qubits();
    let (lbl_offset, k) = enc.circuit.register_span(crate::oracle::LABEL_REGISTER)?;
    let lbl_mask = ((1u64 << k) - 1) << lbl_offset;
    let idx_mask = (1u64 << enc.n_index) - 1;
    for i in 0..(1u64 << enc.n_index) {
        let state = sim::run_capped(&enc.circuit, Some(i), total)?;
        let mut found = false;
        for (basis, amp) in state.amplitudes().iter().enumerate() {
            if amp.norm_sqr() > 1e-18 {
                let basis = basis as u64;
                if basis & idx_mask != i {
                    return Ok(false);
                }
                if (basis & lbl_mask) >> lbl_offset != enc.labels[i as usize] {
                    return Ok(false);
                }
                if amp.norm() < 1.0 - 1e-9 {
                    return Ok(false);
                }
                found = true;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

fn run_trial(size: usize, method: Method, seed: u64, cfg: &SuiteConfig) -> Result<BenchmarkRow> {
    let db = random_database(size, seed)?;
    let k = size.trailing_zeros() as usize;
    let started = Instant::now();
    let enc = encode_database(&db, k, method)?;
    let lowered = enc.circuit.lower()?;
    let synth_ms = started.elapsed().as_millis() as u64;
    let metrics = lowered.metrics()?;
    let mut verified = false;
    if cfg.verify && size <= 64 && enc.circuit.num_qubits() <= cfg.verify_qubit_cap {
        if !verify_encoding(&enc)? {
            return Err(Error::Layout(format!(
                "encoding verification failed for size {size} method {method} seed {seed}"
            )));
        }
        verified = true;
    }
    Ok(BenchmarkRow {
        size,
        method: method.to_string(),
        seed,
        cnot_count: metrics.cnot_count,
        u_count: metrics.u_count,
        tm_total: metrics.tm_total(),
        t_order: metrics.t_order,
        qubit_count: metrics.qubit_count,
        synth_ms,
        verified,
    })
}

/// Run the whole suite. Trials are independent and execute on the rayon
/// pool; results are gathered and sorted for determinism.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    if cfg.trials == 0 {
        return Err(Error::Layout("trials must be >= 1".into()));
    }
    let methods: Vec<Method> = cfg
        .methods
        .iter()
        .map(|m| m.parse())
        .collect::<Result<_>>()?;
    for &size in &cfg.sizes {
        if !size.is_power_of_two() || !(4..=1024).contains(&size) {
            return Err(Error::BadBenchmarkSize(size));
        }
    }
    let mut jobs = Vec::new();
    for &size in &cfg.sizes {
        for &method in &methods {
            for trial in 0..cfg.trials {
                jobs.push((size, method, trial_seed(cfg.base_seed, size, trial)));
            }
        }
    }
    let mut rows = jobs
        .into_par_iter()
        .map(|(size, method, seed)| run_trial(size, method, seed, cfg))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| (a.size, &a.method, a.seed).cmp(&(b.size, &b.method, b.seed)));

    let mut summaries = Vec::new();
    for &size in &cfg.sizes {
        for &method in &methods {
            let name = method.to_string();
            let group: Vec<&BenchmarkRow> = rows
                .iter()
                .filter(|r| r.size == size && r.method == name)
                .collect();
            if group.is_empty() {
                continue;
            }
            let avg = |f: &dyn Fn(&BenchmarkRow) -> f64| -> f64 {
                group.iter().map(|r| f(r)).sum::<f64>() / group.len() as f64
            };
            summaries.push(BenchmarkSummary {
                size,
                method: name,
                trials: group.len(),
                cnot_count: avg(&|r| r.cnot_count as f64).round() as u64,
                u_count: avg(&|r| r.u_count as f64).round() as u64,
                tm_total: avg(&|r| r.tm_total as f64).round() as u64,
                t_order: group.iter().map(|r| r.t_order).max().unwrap_or(0),
                qubit_count: avg(&|r| r.qubit_count as f64).round() as usize,
            });
        }
    }
    Ok(SuiteResult { rows, summaries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" => Ok(ReportFormat::Markdown),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Render benchmark rows. CSV columns are fixed; markdown reproduces the
/// comparison-table shape with a "Difference" column of (other - ours) /
/// ours percentages against the phase-tolerant baseline.
pub fn emit_report(result: &SuiteResult, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from("size,method,seed,cnot,u,tm,t_order,qubits,ms\n");
            for r in &result.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.size,
                    r.method,
                    r.seed,
                    r.cnot_count,
                    r.u_count,
                    r.tm_total,
                    r.t_order,
                    r.qubit_count,
                    r.synth_ms
                ));
            }
            Ok(out)
        }
        ReportFormat::Json => Ok(serde_json::to_string_pretty(result)?),
        ReportFormat::Markdown => Ok(markdown_report(result)),
    }
}

fn summary_for<'a>(
    result: &'a SuiteResult,
    size: usize,
    method: &str,
) -> Option<&'a BenchmarkSummary> {
    result
        .summaries
        .iter()
        .find(|s| s.size == size && s.method == method)
}

fn markdown_report(result: &SuiteResult) -> String {
    let mut sizes: Vec<usize> = result.summaries.iter().map(|s| s.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let methods: Vec<String> = {
        let mut m: Vec<String> = result.summaries.iter().map(|s| s.method.clone()).collect();
        m.sort();
        m.dedup();
        m
    };
    let baseline = "phase-tolerant";
    let mut out = String::new();
    out.push_str("| Size | Method | CNOT | U | T_m | T-order | Qubits | Difference |\n");
    out.push_str("|---:|:---|---:|---:|---:|---:|---:|---:|\n");
    for &size in &sizes {
        let base = summary_for(result, size, baseline);
        for method in &methods {
            let Some(s) = summary_for(result, size, method) else {
                continue;
            };
            let difference = match (method.as_str() != baseline, base) {
                (true, Some(b)) if b.cnot_count > 0 => format!(
                    "{:.1}%",
                    (s.cnot_count as f64 - b.cnot_count as f64) / b.cnot_count as f64 * 100.0
                ),
                _ => "-".to_string(),
            };
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                s.size,
                s.method,
                s.cnot_count,
                s.u_count,
                s.tm_total,
                s.t_order,
                s.qubit_count,
                difference
            ));
        }
    }
    out.push_str(
        "\nLiterature gate counts from other toolchains are third-party implementation \
         artifacts; this table compares trends against the phase-tolerant baseline and \
         asserts no identity with published numbers.\n",
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_database_is_seed_deterministic() {
        let a = random_database(8, 7).unwrap();
        let b = random_database(8, 7).unwrap();
        assert_eq!(a, b);
        let c = random_database(8, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_database_rejects_bad_sizes() {
        assert!(random_database(3, 0).is_err());
        assert!(random_database(2048, 0).is_err());
        assert!(random_database(2, 0).is_err());
    }

    #[test]
    fn random_database_golden_n8_seed0() {
        let db = random_database(8, 0).unwrap();
        let got: Vec<i64> = db
            .entries
            .iter()
            .map(|e| match e {
                Entry::Int(i) => *i,
                _ => unreachable!(),
            })
            .collect();
        // Frozen from the first run of ChaCha8 with seed 0.
        let want: Vec<i64> = vec![
            -5366611356376482964,
            8594738769458413623,
            -5549827605225363738,
            1109962093070354556,
            -2230013647071852935,
            -8309681397849739075,
            -3154679603416624580,
            -1191170774705936198,
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn trial_seeds_are_distinct_across_cells() {
        let mut seen = std::collections::HashSet::new();
        for size in [4usize, 8, 16] {
            for trial in 0..30 {
                assert!(seen.insert(trial_seed(1, size, trial)));
            }
        }
    }

    #[test]
    fn emit_csv_one_line_per_row() {
        let result = SuiteResult {
            rows: vec![BenchmarkRow {
                size: 4,
                method: "gray".into(),
                seed: 1,
                cnot_count: 12,
                u_count: 9,
                tm_total: 10,
                t_order: 2,
                qubit_count: 4,
                synth_ms: 0,
                verified: true,
            }],
            summaries: vec![],
        };
        let csv = emit_report(&result, ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "size,method,seed,cnot,u,tm,t_order,qubits,ms");
        assert_eq!(lines[1], "4,gray,1,12,9,10,2,4,0");
    }

    #[test]
    fn rows_json_round_trip() {
        let row = BenchmarkRow {
            size: 8,
            method: "phase-tolerant".into(),
            seed: 42,
            cnot_count: 24,
            u_count: 20,
            tm_total: 23,
            t_order: 3,
            qubit_count: 6,
            synth_ms: 1,
            verified: true,
        };
        let text = serde_json::to_string(&row).unwrap();
        let back: BenchmarkRow = serde_json::from_str(&text).unwrap();
        assert_eq!(row, back);
    }
}
