//! Command-line driver: frame potentials (exact and sampled), KL
//! expressibility, closed-form bounds, and the VQE trainability study.
//!
//! Every command writes a JSON summary carrying the resolved config and
//! seed, plus CSV tables for bulk series. Re-running with the same
//! arguments reproduces identical files.

mod output;
mod presets;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qexpr_core::ansatz::AnsatzSpec;
use qexpr_core::expressibility::{
    fidelity_histogram, frame_potential, haar_frame_potential, kl_expressibility,
    sample_fidelities, sample_state_fidelities, SampleMode,
};
use qexpr_core::moment::{
    alt_second_frame_potential_exact, haar_second_frame_potential_exact, rational_to_f64,
    ten_second_frame_potential_exact, theorem4_bound,
};
use qexpr_core::vqe::{
    build_heisenberg_ring, gradient_profile, integer_thresholds, run_trials, VqeTrialRecord,
};
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "qexpr", version, about = "Expressibility and trainability toolkit for layered ansatzes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frame potential computations.
    FramePotential {
        #[command(subcommand)]
        which: FramePotentialCommand,
    },
    /// Expressibility measures.
    Expressibility {
        #[command(subcommand)]
        which: ExpressibilityCommand,
    },
    /// Closed-form upper bounds on the ALT second frame potential.
    Bounds(BoundsArgs),
    /// VQE trainability experiments on the Heisenberg ring.
    Vqe {
        #[command(subcommand)]
        which: VqeCommand,
    },
    /// First-passage gradient statistics from a trajectory CSV.
    GradientProfile(ProfileArgs),
}

#[derive(Subcommand)]
enum FramePotentialCommand {
    /// Exact transfer-matrix / closed-form second frame potentials.
    Analytic(AnalyticArgs),
    /// Monte-Carlo estimation from sampled circuit pairs.
    Sample(SampleArgs),
}

#[derive(Subcommand)]
enum ExpressibilityCommand {
    /// KL divergence between the fidelity histogram and the Haar density.
    Kl(KlArgs),
}

#[derive(Subcommand)]
enum VqeCommand {
    /// Run optimization trials and record trajectories.
    Run(VqeArgs),
}

/// Ansatz selection shared by sampling commands.
#[derive(Args, Clone)]
struct AnsatzArgs {
    /// Circuit family: ten | alt | hea.
    #[arg(long)]
    ansatz: Option<String>,
    /// Qubit count.
    #[arg(long)]
    n: Option<usize>,
    /// Layer count.
    #[arg(long)]
    ell: Option<usize>,
    /// Block width (TEN/ALT only).
    #[arg(long)]
    m: Option<usize>,
    /// Rotation+entangler repetitions per block (default: m).
    #[arg(long)]
    block_depth: Option<usize>,
    /// ALT only: wrap even-layer blocks around the register boundary.
    #[arg(long, default_value_t = false)]
    periodic: bool,
}

impl AnsatzArgs {
    fn resolve(&self) -> Result<AnsatzSpec> {
        let family = self
            .ansatz
            .as_deref()
            .context("--ansatz is required without a preset")?
            .to_ascii_lowercase();
        let n = self.n.context("--n is required without a preset")?;
        let ell = self.ell.context("--ell is required without a preset")?;
        let spec = match family.as_str() {
            "hea" => AnsatzSpec::hea(n, ell),
            "ten" | "alt" => {
                let m = self.m.context("--m is required for TEN/ALT")?;
                let depth = self.block_depth.unwrap_or(m);
                if family == "ten" {
                    AnsatzSpec::ten(n, ell, m, depth)
                } else if self.periodic {
                    AnsatzSpec::alt_periodic(n, ell, m, depth)
                } else {
                    AnsatzSpec::alt(n, ell, m, depth)
                }
            }
            other => bail!("unknown ansatz family {other:?} (expected ten, alt, or hea)"),
        };
        if self.periodic && family != "alt" {
            bail!("--periodic applies to ALT only");
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct AnalyticArgs {
    /// ten | alt (default alt).
    #[arg(long)]
    ansatz: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Named parameter grid (fig2-grid).
    #[arg(long)]
    preset: Option<String>,
    /// Output JSON path; the CSV table lands next to it.
    #[arg(long, default_value = "frame-potential-analytic.json")]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    ansatz: AnsatzArgs,
    /// Independent circuit pairs to draw.
    #[arg(long, default_value_t = 100_000)]
    pairs: usize,
    /// parameterized | haar-block.
    #[arg(long, default_value = "parameterized")]
    mode: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "frame-potential-sample.json")]
    out: PathBuf,
}

#[derive(Args)]
struct KlArgs {
    #[command(flatten)]
    ansatz: AnsatzArgs,
    /// Named parameter table (table1).
    #[arg(long)]
    preset: Option<String>,
    /// Circuit samples per trial; the KL estimator uses the fidelities
    /// of all pairwise combinations.
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    /// Independent repetitions per parameter row.
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 1000)]
    bins: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "expressibility-kl.json")]
    out: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Named parameter grid (fig2-grid).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value = "bounds.json")]
    out: PathBuf,
}

#[derive(Args)]
struct VqeArgs {
    #[command(flatten)]
    ansatz: AnsatzArgs,
    /// Named experiment (section4: TEN/ALT/HEA on the 4-qubit ring).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 2000)]
    iterations: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "vqe.json")]
    out: PathBuf,
}

#[derive(Args)]
struct ProfileArgs {
    /// Trajectory CSV written by `vqe run` (trial,iteration,energy,grad_norm).
    trajectories: PathBuf,
    #[arg(long, default_value = "gradient-profile.json")]
    out: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::FramePotential { which } => match which {
            FramePotentialCommand::Analytic(args) => run_analytic(args),
            FramePotentialCommand::Sample(args) => run_sample(args),
        },
        Command::Expressibility { which } => match which {
            ExpressibilityCommand::Kl(args) => run_kl(args),
        },
        Command::Bounds(args) => run_bounds(args),
        Command::Vqe { which } => match which {
            VqeCommand::Run(args) => run_vqe(args),
        },
        Command::GradientProfile(args) => run_profile(args),
    }
}

/// (family, ell, m, n) points to evaluate analytically.
fn analytic_points(args: &AnalyticArgs) -> Result<Vec<(String, usize, usize, usize)>> {
    if let Some(preset) = &args.preset {
        return presets::fig2_grid(preset);
    }
    let family = args.ansatz.clone().unwrap_or_else(|| "alt".into()).to_ascii_lowercase();
    if family != "ten" && family != "alt" {
        bail!("analytic frame potentials exist for ten and alt, not {family:?}");
    }
    let (n, m) = (
        args.n.context("--n is required without a preset")?,
        args.m.context("--m is required without a preset")?,
    );
    let ell = match family.as_str() {
        "ten" => args.ell.unwrap_or(2),
        _ => args.ell.context("--ell is required for alt")?,
    };
    Ok(vec![(family, ell, m, n)])
}

fn run_analytic(args: AnalyticArgs) -> Result<()> {
    let points = analytic_points(&args)?;
    let mut rows = Vec::new();
    for (family, ell, m, n) in &points {
        let exact = match family.as_str() {
            "ten" => ten_second_frame_potential_exact(*m, *n)?,
            _ => alt_second_frame_potential_exact(*ell, *m, *n)?,
        };
        let haar = haar_second_frame_potential_exact(*n);
        let ratio = rational_to_f64(&(&exact / &haar));
        let bound = match family.as_str() {
            "alt" => Some(theorem4_bound(*ell, *m, *n)?.absolute),
            _ => None,
        };
        rows.push(output::AnalyticRow {
            ansatz: family.clone(),
            ell: *ell,
            m: *m,
            n: *n,
            value: rational_to_f64(&exact),
            value_exact: exact.to_string(),
            ratio_to_haar: ratio,
            bound,
        });
    }
    let csv_path = args.out.with_extension("csv");
    output::write_analytic_csv(&csv_path, &rows)?;
    output::write_json(
        &args.out,
        &json!({
            "command": "frame-potential analytic",
            "preset": args.preset,
            "rows": rows,
            "csv": csv_path,
        }),
    )?;
    println!("wrote {} and {}", args.out.display(), csv_path.display());
    Ok(())
}

fn parse_mode(mode: &str) -> Result<SampleMode> {
    match mode {
        "parameterized" => Ok(SampleMode::Parameterized),
        "haar-block" => Ok(SampleMode::HaarBlock),
        other => bail!("unknown sampling mode {other:?}"),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        // Entropy-derived but recorded in the output, so the run stays
        // replayable.
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0)
            | 1
    })
}

fn run_sample(args: SampleArgs) -> Result<()> {
    let spec = args.ansatz.resolve()?;
    let mode = parse_mode(&args.mode)?;
    let seed = resolve_seed(args.seed);
    let sample = sample_fidelities(&spec, args.pairs, mode, seed)?;
    let mut estimates = Vec::new();
    let mut csv_rows = Vec::new();
    for t in [1usize, 2] {
        let est = frame_potential(&sample, t)?;
        let haar = haar_frame_potential(t, spec.n)?;
        csv_rows.push((t, est.mean, est.standard_error, est.count, haar));
        estimates.push(json!({
            "t": t,
            "mean": est.mean,
            "standard_error": est.standard_error,
            "haar": haar,
            "deviation": est.mean - haar,
        }));
    }
    output::write_json(
        &args.out,
        &json!({
            "command": "frame-potential sample",
            "spec": spec,
            "mode": args.mode,
            "pairs": args.pairs,
            "seed": seed,
            "estimates": estimates,
        }),
    )?;
    let csv_path = args.out.with_extension("csv");
    output::write_estimates_csv(&csv_path, &csv_rows)?;
    println!("wrote {} and {}", args.out.display(), csv_path.display());
    Ok(())
}

fn run_kl(args: KlArgs) -> Result<()> {
    let specs: Vec<AnsatzSpec> = if let Some(preset) = &args.preset {
        presets::table1(preset)?
    } else {
        vec![args.ansatz.resolve()?]
    };
    let seed = resolve_seed(args.seed);
    let mut rows = Vec::new();
    for (row_index, spec) in specs.iter().enumerate() {
        let mut kls = Vec::with_capacity(args.trials as usize);
        for trial in 0..args.trials {
            let trial_seed = presets::derive_seed(seed, row_index as u64, trial);
            let sample =
                sample_state_fidelities(spec, args.pairs, SampleMode::Parameterized, trial_seed)?;
            kls.push(kl_expressibility(&sample, spec.n, args.bins)?.kl);
        }
        let mean = kls.iter().sum::<f64>() / kls.len() as f64;
        let var = kls.iter().map(|k| (k - mean).powi(2)).sum::<f64>()
            / (kls.len().saturating_sub(1)).max(1) as f64;
        rows.push(json!({
            "spec": spec,
            "kl_per_trial": kls,
            "kl_mean": mean,
            "kl_std": var.sqrt(),
        }));
    }
    // Histogram table for the first spec's first trial, for plotting.
    let first = &specs[0];
    let sample = sample_state_fidelities(
        first,
        args.pairs,
        SampleMode::Parameterized,
        presets::derive_seed(seed, 0, 0),
    )?;
    let histogram = fidelity_histogram(&sample, first.n, args.bins)?;
    let csv_path = args.out.with_extension("histogram.csv");
    output::write_histogram_csv(&csv_path, &histogram)?;
    output::write_json(
        &args.out,
        &json!({
            "command": "expressibility kl",
            "preset": args.preset,
            "pairs": args.pairs,
            "trials": args.trials,
            "bins": args.bins,
            "seed": seed,
            "rows": rows,
            "histogram_csv": csv_path,
        }),
    )?;
    println!("wrote {} and {}", args.out.display(), csv_path.display());
    Ok(())
}

fn run_bounds(args: BoundsArgs) -> Result<()> {
    let points: Vec<(usize, usize, usize)> = if let Some(preset) = &args.preset {
        presets::fig2_grid(preset)?
            .into_iter()
            .filter(|(family, ..)| family == "alt")
            .map(|(_, ell, m, n)| (ell, m, n))
            .collect()
    } else {
        vec![(
            args.ell.context("--ell is required without a preset")?,
            args.m.context("--m is required without a preset")?,
            args.n.context("--n is required without a preset")?,
        )]
    };
    let mut rows = Vec::new();
    for (ell, m, n) in points {
        let exact = alt_second_frame_potential_exact(ell, m, n)?;
        let haar = haar_second_frame_potential_exact(n);
        let bound = theorem4_bound(ell, m, n)?;
        rows.push(output::AnalyticRow {
            ansatz: "alt".into(),
            ell,
            m,
            n,
            value: rational_to_f64(&exact),
            value_exact: exact.to_string(),
            ratio_to_haar: rational_to_f64(&(&exact / &haar)),
            bound: Some(bound.absolute),
        });
    }
    let csv_path = args.out.with_extension("csv");
    output::write_analytic_csv(&csv_path, &rows)?;
    output::write_json(
        &args.out,
        &json!({
            "command": "bounds",
            "preset": args.preset,
            "rows": rows,
            "csv": csv_path,
        }),
    )?;
    println!("wrote {} and {}", args.out.display(), csv_path.display());
    Ok(())
}

fn run_vqe(args: VqeArgs) -> Result<()> {
    let specs: Vec<AnsatzSpec> = if let Some(preset) = &args.preset {
        presets::section4(preset)?
    } else {
        vec![args.ansatz.resolve()?]
    };
    let seed = resolve_seed(args.seed);
    let hamiltonian = build_heisenberg_ring(specs[0].n)?;
    if specs.iter().any(|s| s.n != hamiltonian.n()) {
        bail!("all ansatzes in one run must share the qubit count");
    }
    let thresholds = integer_thresholds(0, -7);
    let mut summaries = Vec::new();
    for (index, spec) in specs.iter().enumerate() {
        let master = presets::derive_seed(seed, index as u64, 0);
        let records = run_trials(spec, &hamiltonian, args.trials, args.iterations, master)?;
        let label = spec.family.to_string().to_ascii_lowercase();
        let csv_path = args.out.with_extension(format!("{label}.csv"));
        output::write_trajectories_csv(&csv_path, &records)?;
        let profile = gradient_profile(&records, &thresholds);
        let profile_path = args.out.with_extension(format!("{label}.profile.csv"));
        output::write_profile_csv(&profile_path, &profile)?;
        let best = records.iter().map(VqeTrialRecord::final_energy).fold(f64::INFINITY, f64::min);
        summaries.push(json!({
            "spec": spec,
            "trial_seed_stream": master,
            "best_final_energy": best,
            "profile": profile,
            "trajectories_csv": csv_path,
            "profile_csv": profile_path,
        }));
    }
    output::write_json(
        &args.out,
        &json!({
            "command": "vqe run",
            "preset": args.preset,
            "trials": args.trials,
            "iterations": args.iterations,
            "seed": seed,
            "adam": {"learning_rate": 0.001, "beta1": 0.9, "beta2": 0.999, "epsilon": 1e-8},
            "ansatzes": summaries,
        }),
    )?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_profile(args: ProfileArgs) -> Result<()> {
    let records = output::read_trajectories_csv(&args.trajectories)?;
    let profile = gradient_profile(&records, &integer_thresholds(0, -7));
    let csv_path = args.out.with_extension("csv");
    output::write_profile_csv(&csv_path, &profile)?;
    output::write_json(
        &args.out,
        &json!({
            "command": "gradient-profile",
            "input": args.trajectories,
            "profile": profile,
            "csv": csv_path,
        }),
    )?;
    println!("wrote {} and {}", args.out.display(), csv_path.display());
    Ok(())
}
