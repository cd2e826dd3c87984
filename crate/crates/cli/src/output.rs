//! JSON / CSV persistence helpers.

use anyhow::{Context, Result};
use qexpr_core::expressibility::HistogramBin;
use qexpr_core::vqe::{GradientProfile, IterationRecord, VqeTrialRecord};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticRow {
    pub ansatz: String,
    pub ell: usize,
    pub m: usize,
    pub n: usize,
    pub value: f64,
    /// Exact rational as a decimal fraction string.
    pub value_exact: String,
    pub ratio_to_haar: f64,
    /// Closed-form upper bound (ALT only).
    pub bound: Option<f64>,
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn write_text(path: &Path, body: String) -> Result<()> {
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

pub fn write_analytic_csv(path: &Path, rows: &[AnalyticRow]) -> Result<()> {
    let mut body = String::from("ansatz,ell,m,n,value,ratio_to_haar,bound\n");
    for row in rows {
        let bound = row.bound.map_or(String::new(), |b| format!("{b:e}"));
        writeln!(
            body,
            "{},{},{},{},{:e},{},{}",
            row.ansatz, row.ell, row.m, row.n, row.value, row.ratio_to_haar, bound
        )?;
    }
    write_text(path, body)
}

pub fn write_estimates_csv(path: &Path, rows: &[(usize, f64, f64, usize, f64)]) -> Result<()> {
    let mut body = String::from("t,mean,standard_error,count,haar\n");
    for (t, mean, stderr, count, haar) in rows {
        writeln!(body, "{t},{mean:e},{stderr:e},{count},{haar:e}")?;
    }
    write_text(path, body)
}

pub fn write_histogram_csv(path: &Path, bins: &[HistogramBin]) -> Result<()> {
    let mut body = String::from("bin_left,bin_right,count,haar_mass\n");
    for bin in bins {
        writeln!(body, "{},{},{},{:e}", bin.left, bin.right, bin.count, bin.haar_mass)?;
    }
    write_text(path, body)
}

pub fn write_trajectories_csv(path: &Path, records: &[VqeTrialRecord]) -> Result<()> {
    let mut body = String::from("trial,iteration,energy,grad_norm\n");
    for record in records {
        for it in &record.iterations {
            writeln!(body, "{},{},{},{}", record.trial, it.iteration, it.energy, it.grad_norm)?;
        }
    }
    write_text(path, body)
}

pub fn read_trajectories_csv(path: &Path) -> Result<Vec<VqeTrialRecord>> {
    let body =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut records: Vec<VqeTrialRecord> = Vec::new();
    for (lineno, line) in body.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |field: usize, name: &str| -> Result<f64> {
            fields
                .get(field)
                .with_context(|| format!("line {}: missing {name}", lineno + 1))?
                .trim()
                .parse::<f64>()
                .with_context(|| format!("line {}: bad {name}", lineno + 1))
        };
        let trial = parse(0, "trial")? as u64;
        let record = IterationRecord {
            iteration: parse(1, "iteration")? as usize,
            energy: parse(2, "energy")?,
            grad_norm: parse(3, "grad_norm")?,
        };
        match records.last_mut() {
            Some(last) if last.trial == trial => last.iterations.push(record),
            _ => records.push(VqeTrialRecord {
                trial,
                iterations: vec![record],
                axes: vec![],
                final_angles: vec![],
            }),
        }
    }
    Ok(records)
}

pub fn write_profile_csv(path: &Path, profile: &GradientProfile) -> Result<()> {
    let mut body = String::from("threshold,reached,mean_grad_norm\n");
    for stat in &profile.stats {
        writeln!(body, "{},{},{}", stat.threshold, stat.reached, stat.mean_grad_norm)?;
    }
    write_text(path, body)
}
