use serde::Serialize;

use super::{CheckReport, Failure, SLACK};
use crate::config::ExperimentConfig;
use crate::iteration::Orbit;
use crate::rates::{rate_report, RateReport};

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessOutcome {
    pub rate: RateReport,
    pub check: CheckReport,
    /// Residual cap `2b` over every simulated index.
    pub cap: CheckReport,
    /// Last simulated index.
    pub simulated_to: u64,
}

/// Computes `Phi` for `eps`, simulates `x_0, ..., x_end` with
/// `end = min(Phi + 1000, step cap)`, and checks `d(x_n, T x_n) < eps (1 + 1e-9)`
/// on `[Phi, end]`. Records the first index from which all simulated residuals
/// stay below `eps`.
pub fn check_phi_soundness(config: &ExperimentConfig, eps: f64) -> crate::Result<SoundnessOutcome> {
    let rate = rate_report(&config.rate_inputs(eps), &[])?;
    let mut check = CheckReport::new(format!("phi soundness eps={eps}"));
    let mut cap = CheckReport::new(format!("residual cap eps={eps}"));
    let budget = config.step_cap();
    let phi = rate.phi;
    if phi > budget {
        check.unverified(format!("phi = {phi} exceeds the step budget {budget}"));
        return Ok(SoundnessOutcome { rate, check, cap, simulated_to: 0 });
    }
    let wanted = phi.saturating_add(1000);
    let end = wanted.min(budget);
    if end < wanted {
        check.unverified(format!("window [phi, phi + 1000] truncated at the step budget {budget}"));
    }
    let threshold = eps * (1.0 + SLACK);
    let bound = config.residual_cap();
    let mut boundary_hits = 0u64;
    let mut last_above: Option<u64> = None;
    let mut orbit = Orbit::new(&config.space, &config.map, config.start.clone(), &config.schedule)?;
    for n in 0..=end {
        if n > 0 {
            orbit.advance()?;
        }
        let r = orbit.residual();
        cap.samples += 1;
        if r > bound + SLACK {
            cap.fail(Failure { inputs: format!("n={n}: d(x,Tx) <= 2b"), lhs: r, rhs: bound, slack_violated: r - bound });
        }
        if r >= eps {
            last_above = Some(n);
        }
        if n >= phi {
            check.samples += 1;
            if r >= threshold {
                check.fail(Failure {
                    inputs: format!("n={n} >= phi={phi}: d(x,Tx) < eps"),
                    lhs: r,
                    rhs: eps,
                    slack_violated: r - eps,
                });
            } else if r >= eps {
                boundary_hits += 1;
            }
        }
    }
    if boundary_hits > 0 {
        check.notes.push(format!("{boundary_hits} residuals within the slack of eps"));
    }
    let first_hit = match last_above {
        None => Some(0),
        Some(n) if n < end => Some(n + 1),
        Some(_) => None,
    };
    Ok(SoundnessOutcome { rate: rate.with_empirical(first_hit), check, cap, simulated_to: end })
}

/// For each `k`, looks for an index `N` in `[k, Delta(k)]` with
/// `d(x_N, T x_N) < eps (1 + 1e-9)`.
pub fn check_delta_witness(config: &ExperimentConfig, eps: f64, ks: &[u64]) -> crate::Result<CheckReport> {
    let rate = rate_report(&config.rate_inputs(eps), ks)?;
    let mut report = CheckReport::new(format!("delta witness eps={eps}"));
    let budget = config.step_cap();
    let threshold = eps * (1.0 + SLACK);
    // (k, Delta(k), smallest residual seen in the window, found)
    let mut pending: Vec<(u64, u64, f64, bool)> = Vec::new();
    for d in &rate.delta {
        if d.delta > budget {
            report.unverified(format!("k={}: delta = {} exceeds the step budget {budget}", d.k, d.delta));
        } else {
            pending.push((d.k, d.delta, f64::INFINITY, false));
        }
    }
    let Some(horizon) = pending.iter().map(|p| p.1).max() else {
        return Ok(report);
    };
    let mut orbit = Orbit::new(&config.space, &config.map, config.start.clone(), &config.schedule)?;
    for n in 0..=horizon {
        if n > 0 {
            orbit.advance()?;
        }
        let r = orbit.residual();
        let mut open = false;
        for (k, delta, best, found) in pending.iter_mut() {
            if *found {
                continue;
            }
            if n >= *k && n <= *delta {
                *best = best.min(r);
                *found = r < threshold;
            }
            open |= !*found;
        }
        if !open {
            break;
        }
    }
    for (k, delta, best, found) in pending {
        report.samples += 1;
        if !found {
            report.fail(Failure {
                inputs: format!("k={k}: no residual below eps in [{k}, {delta}]"),
                lhs: best,
                rhs: eps,
                slack_violated: best - eps,
            });
        }
    }
    Ok(report)
}
