use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use ishikawa_core::config::{parse_config, ConfigError, ExperimentConfig};
use ishikawa_core::iteration::{run_trajectory, Orbit};
use ishikawa_core::rates::{rate_report, RateReport};
use ishikawa_core::verification::{
    check_delta_witness, check_lemma_inequalities, check_phi_soundness, check_space_axioms,
    check_uc_implication, CheckReport, SoundnessOutcome, Verdict,
};
use rayon::prelude::*;
use serde_json::json;

use crate::Common;

/// Outcome of a command, mapped onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// Something could not be checked at the configured scale.
    Warn,
    Fail,
    Usage,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Pass | Status::Warn => ExitCode::SUCCESS,
            Status::Fail => ExitCode::from(1),
            Status::Usage => ExitCode::from(2),
        }
    }

    pub fn from_error(e: &anyhow::Error) -> Status {
        if e.downcast_ref::<ConfigError>().is_some() || e.downcast_ref::<std::io::Error>().is_some() {
            Status::Usage
        } else {
            Status::Fail
        }
    }

    fn of(verdicts: impl IntoIterator<Item = Verdict>) -> Status {
        verdicts.into_iter().fold(Status::Pass, |acc, v| match (acc, v) {
            (Status::Fail, _) | (_, Verdict::Fail) => Status::Fail,
            (Status::Warn, _) | (_, Verdict::UnverifiedAtScale) => Status::Warn,
            _ => Status::Pass,
        })
    }

    fn announce(self) -> Self {
        if self == Status::Warn {
            eprintln!("warning: some checks could not run at the configured scale (UNVERIFIED-AT-SCALE)");
        }
        self
    }
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(&common.config)
        .with_context(|| format!("reading {}", common.config.display()))?;
    let mut config = parse_config(&text)
        .map_err(|e| anyhow::Error::new(e).context(format!("invalid configuration {}", common.config.display())))?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(m) = common.max_steps {
        config.caps.max_steps = m;
    }
    if let Some(grid) = &common.eps {
        config.eps_grid = grid.clone();
    }
    // overrides must satisfy the same invariants
    let problems = config.diagnostics();
    if !problems.is_empty() {
        return Err(anyhow::Error::new(ConfigError(problems)).context("invalid command-line override"));
    }
    Ok(config)
}

fn out_dir(common: &Common) -> Result<&Path> {
    fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display()))?;
    Ok(&common.out)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

pub fn verify_space(common: &Common, samples: u64) -> Result<Status> {
    let config = load(common)?;
    let reports = [
        check_space_axioms(&config.space, samples, config.seed),
        check_uc_implication(&config.space, samples, config.seed.wrapping_add(1)),
    ];
    if common.json {
        print_json(&reports)?;
    } else {
        for r in &reports {
            println!("{}", r.summary());
            for f in &r.failures {
                println!("  {}: {} > {}", f.inputs, f.lhs, f.rhs);
            }
        }
    }
    Ok(Status::of(reports.iter().map(|r| r.verdict)).announce())
}

pub fn rate(common: &Common) -> Result<Status> {
    let config = load(common)?;
    let reports = config
        .eps_grid
        .iter()
        .map(|eps| rate_report(&config.rate_inputs(*eps), &config.delta_ks))
        .collect::<Result<Vec<_>, _>>()?;
    // a single precision prints a bare report
    match reports.as_slice() {
        [one] => print_json(one)?,
        many => print_json(&many)?,
    }
    Ok(Status::Pass)
}

pub fn run(common: &Common) -> Result<Status> {
    let config = load(common)?;
    let eps = config.eps_grid[0];
    let outcome = check_phi_soundness(&config, eps)?;
    let delta = check_delta_witness(&config, eps, &config.delta_ks)?;
    // the soundness window, or the whole budget when Phi lies beyond it
    let steps = match outcome.simulated_to {
        0 => config.step_cap(),
        n => n,
    };
    let traj = run_trajectory(&config.space, &config.map, &config.start, &config.schedule, steps, &config.run_options())?;
    let lemma = check_lemma_inequalities(&traj);

    let dir = out_dir(common)?;
    let csv_path = dir.join("trajectory.csv");
    let file = fs::File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    traj.write_csv(std::io::BufWriter::new(file))?;
    let checks = [&outcome.check, &outcome.cap, &delta, &lemma];
    let summary = json!({
        "rate": outcome.rate,
        "checks": checks,
        "trajectory_csv": csv_path,
    });
    write_json(&dir.join("run.json"), &summary)?;

    if common.json {
        print_json(&summary)?;
    } else {
        print_rate(&outcome.rate);
        for c in checks {
            println!("{}", c.summary());
            for f in &c.failures {
                println!("  {}: {} vs {}", f.inputs, f.lhs, f.rhs);
            }
            for n in &c.notes {
                println!("  note: {n}");
            }
        }
        println!("wrote {} ({} rows)", csv_path.display(), traj.residuals.len());
    }
    Ok(Status::of(checks.iter().map(|c| c.verdict)).announce())
}

fn print_rate(r: &RateReport) {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    println!(
        "eps={} P={} gamma0={} phi={} first_hit={} tightness={}",
        r.eps,
        r.p,
        r.gamma0,
        r.phi,
        opt(r.empirical_first_hit.map(|h| h.to_string())),
        opt(r.tightness_ratio.map(|t| format!("{t:.3}"))),
    );
}

/// One sweep row: the soundness outcome folded into a single verdict.
fn row_verdict(o: &SoundnessOutcome) -> Verdict {
    let mut merged = CheckReport::new("row");
    merged.absorb(o.check.clone());
    merged.absorb(o.cap.clone());
    merged.verdict
}

pub fn sweep(common: &Common) -> Result<Status> {
    let config = load(common)?;
    let mut grid = config.eps_grid.clone();
    grid.sort_by(|a, b| b.total_cmp(a));
    let outcomes = grid
        .par_iter()
        .map(|eps| check_phi_soundness(&config, *eps))
        .collect::<Result<Vec<_>, _>>()?;

    let dir = out_dir(common)?;
    let table_path = dir.join("sweep.csv");
    let mut table = std::io::BufWriter::new(
        fs::File::create(&table_path).with_context(|| format!("creating {}", table_path.display()))?,
    );
    writeln!(table, "eps,P,gamma0,phi,first_hit,tightness,verdict")?;
    for o in &outcomes {
        let r = &o.rate;
        writeln!(
            table,
            "{},{},{},{},{},{},{}",
            r.eps,
            r.p,
            r.gamma0,
            r.phi,
            r.empirical_first_hit.map(|h| h.to_string()).unwrap_or_default(),
            r.tightness_ratio.map(|t| t.to_string()).unwrap_or_default(),
            row_verdict(o),
        )?;
    }
    table.flush()?;

    let horizon = outcomes.iter().map(|o| o.simulated_to).max().unwrap_or(0);
    let plot_path = dir.join("residuals_loglog.csv");
    write_plot_data(&config, horizon, &plot_path)?;

    if common.json {
        let rows: Vec<_> = outcomes
            .iter()
            .map(|o| json!({ "rate": o.rate, "verdict": row_verdict(o), "check": o.check, "cap": o.cap }))
            .collect();
        print_json(&json!({ "rows": rows, "table_csv": table_path, "plot_csv": plot_path }))?;
    } else {
        for o in &outcomes {
            print_rate(&o.rate);
            println!("  {}", row_verdict(o));
        }
        println!("wrote {} and {}", table_path.display(), plot_path.display());
    }
    Ok(Status::of(outcomes.iter().map(row_verdict)).announce())
}

/// Residuals at roughly 20 logarithmically spaced indices per decade, for
/// log-log plots. Index 0 is skipped since it has no logarithm.
fn write_plot_data(config: &ExperimentConfig, horizon: u64, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(
        fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(out, "n,residual")?;
    let mut orbit = Orbit::new(&config.space, &config.map, config.start.clone(), &config.schedule)?;
    let mut next = 1u64;
    let mut k = 0u32;
    while next <= horizon {
        while orbit.index() < next {
            orbit.advance()?;
        }
        writeln!(out, "{},{:e}", next, orbit.residual())?;
        while next <= horizon && 10f64.powf(k as f64 / 20.0) as u64 <= orbit.index() {
            k += 1;
            next = 10f64.powf(k as f64 / 20.0) as u64;
        }
    }
    out.flush()?;
    Ok(())
}
