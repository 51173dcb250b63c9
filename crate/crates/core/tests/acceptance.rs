//! Acceptance suite. Runs every criterion in sequence, prints one
//! `PASS`/`FAIL` line per criterion and exits non-zero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ishikawa_core::config::{parse_config, ExperimentConfig};
use ishikawa_core::geometry::SpaceModel;
use ishikawa_core::iteration::run_trajectory;
use ishikawa_core::moduli::{
    dyadic_deltas, eta1_to_eta, eta2_to_eta1, eta3_to_eta2, eta_to_eta1, gamma_for_geometric_s,
    gamma_from_dyadic, theta_for_constant_lambda, verify_gamma, verify_gamma_with, verify_theta,
    verify_theta_with, ModulusDescriptor, Schedule, SequenceDescriptor,
};
use ishikawa_core::rates::{compute_delta, compute_phi, RateInputs};
use ishikawa_core::verification::{
    check_delta_witness, check_index_implication, check_lemma_inequalities, check_phi_soundness,
    check_residual_cap, check_space_axioms, check_uc_implication, IndexForm, Verdict,
};
use ishikawa_core::Rational;

const SAMPLES: u64 = 10_000;
const GRID: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];
const AUDITED: [&str; 4] = ["rotation_pi", "rotation_half_pi", "poincare_rotation", "ishikawa_geometric"];
const ALL_CONFIGS: [&str; 7] = [
    "rotation_pi",
    "rotation_half_pi",
    "poincare_rotation",
    "ishikawa_geometric",
    "identity",
    "reflection_average",
    "metric_projection",
];
/// `verify_theta` range and smallest dyadic precision for `verify_gamma`.
const N_MAX: u64 = 10_000;
const P_MAX: u32 = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn load(name: &str) -> ExperimentConfig {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", &format!("{name}.toml")]
        .iter()
        .collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_config(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn space_axioms() -> Outcome {
    let t = Instant::now();
    for space in [SpaceModel::euclidean(2), SpaceModel::euclidean(5), SpaceModel::poincare_disk()] {
        let r = check_space_axioms(&space, SAMPLES, 1);
        ensure(r.passed && r.samples == SAMPLES, || format!("{:?}: {:?}", space.kind(), r.failures.first()))?;
    }
    within(t.elapsed(), 5.0)?;
    Ok(format!("3 models x {SAMPLES} samples in {:.2} s", t.elapsed().as_secs_f64()))
}

fn uc_modulus() -> Outcome {
    let t = Instant::now();
    for space in [SpaceModel::euclidean(2), SpaceModel::poincare_disk()] {
        let r = check_uc_implication(&space, SAMPLES, 2);
        ensure(r.passed, || format!("{:?}: {:?}", space.kind(), r.failures.first()))?;
    }
    let inflated = SpaceModel::euclidean(2)
        .with_modulus(ModulusDescriptor::EtaQuadratic { coeff: Rational::new(1, 2) })
        .map_err(|e| e.to_string())?;
    let faulty = check_uc_implication(&inflated, SAMPLES, 2);
    ensure(faulty.failure_count >= 1, || "eps^2/2 was not caught".into())?;
    within(t.elapsed(), 5.0)?;
    Ok(format!("eps^2/8 holds on both models; eps^2/2 caught {} times", faulty.failure_count))
}

fn lemma_audit() -> Outcome {
    let mut samples = 0;
    for name in AUDITED {
        let c = load(name);
        let opts = c.run_options();
        ensure(opts.reference.is_some(), || format!("{name}: no reference fixed point"))?;
        let traj = run_trajectory(&c.space, &c.map, &c.start, &c.schedule, 10_000, &opts)
            .map_err(|e| format!("{name}: {e}"))?;
        let r = check_lemma_inequalities(&traj);
        ensure(r.passed, || format!("{name}: {} failures, first {:?}", r.failure_count, r.failures.first()))?;
        samples += r.samples;
    }
    Ok(format!("4 configs to n=10^4, {samples} inequality checks"))
}

fn phi_soundness() -> Outcome {
    let t = Instant::now();
    let mut largest = 0;
    for name in AUDITED {
        let c = load(name);
        for eps in GRID {
            let out = check_phi_soundness(&c, eps).map_err(|e| format!("{name} eps={eps}: {e}"))?;
            ensure(out.check.verdict == Verdict::Pass, || {
                format!("{name} eps={eps}: {} {:?} {:?}", out.check.verdict, out.check.failures.first(), out.check.notes)
            })?;
            ensure(out.simulated_to == out.rate.phi + 1000, || format!("{name} eps={eps}: short window"))?;
            largest = largest.max(out.rate.phi);
        }
    }
    let pinned = compute_phi(&load("rotation_pi").rate_inputs(0.5)).map_err(|e| e.to_string())?;
    ensure(pinned.p == 512 && pinned.phi == 2052, || format!("P={} phi={}", pinned.p, pinned.phi))?;
    within(t.elapsed(), 60.0)?;
    Ok(format!(
        "16 runs, largest phi {largest}, P=512 and phi=2052 pinned, {:.2} s",
        t.elapsed().as_secs_f64()
    ))
}

fn delta_witness() -> Outcome {
    let ks = [0, 10, 100];
    for name in AUDITED {
        let c = load(name);
        for eps in GRID {
            let r = check_delta_witness(&c, eps, &ks).map_err(|e| format!("{name} eps={eps}: {e}"))?;
            ensure(r.verdict == Verdict::Pass && r.samples == 3, || {
                format!("{name} eps={eps}: {} {:?} {:?}", r.verdict, r.failures.first(), r.notes)
            })?;
        }
    }
    let d = compute_delta(&load("rotation_pi").rate_inputs(0.5), 0).map_err(|e| e.to_string())?;
    ensure(d == 2048, || format!("Delta(0) = {d}"))?;
    Ok("16 grid points x k in {0,10,100}; Delta=2048 pinned".into())
}

fn constant(num: i64, den: i64) -> SequenceDescriptor {
    SequenceDescriptor::constant(Rational::new(num, den))
}

fn geometric(c: Rational, q: Rational) -> SequenceDescriptor {
    SequenceDescriptor::Geometric { c, q }
}

/// Schedules built from the shipped witness constructors, each with an
/// `L` admissible for its `s`.
fn shipped_schedules() -> Result<Vec<(String, Schedule)>, String> {
    let mut out = Vec::new();
    let e = |e: ishikawa_core::Error| e.to_string();
    for (n, d) in [(1, 2), (1, 4), (3, 4), (1, 10)] {
        let lambda = Rational::new(n, d);
        let theta = theta_for_constant_lambda(&lambda).map_err(e)?;
        out.push((format!("KM lambda={lambda}"), Schedule {
            lambda: SequenceDescriptor::constant(lambda),
            s: constant(0, 1),
            l: 1,
            n0: 0,
            theta,
            gamma: ModulusDescriptor::GammaZero,
        }));
    }
    for ((ln, ld), (cn, cd), (qn, qd)) in [((1, 2), (1, 2), (1, 2)), ((1, 4), (1, 2), (1, 4)), ((1, 3), (1, 3), (9, 10))] {
        let lambda = constant(ln, ld);
        let (c, q) = (Rational::new(cn, cd), Rational::new(qn, qd));
        let gamma = gamma_for_geometric_s(&c, &q, &lambda).map_err(e)?;
        out.push((format!("Ishikawa lambda={ln}/{ld} s={c}*({q})^n"), Schedule {
            theta: theta_for_constant_lambda(&Rational::new(ln, ld)).map_err(e)?,
            gamma,
            lambda,
            s: geometric(c, q),
            l: 2,
            n0: 0,
        }));
    }
    // s_n = 2^-(n+1), lambda = 1/2: the tail after N is 2^-(N+2)
    out.push(("dyadic p-2".into(), Schedule {
        theta: theta_for_constant_lambda(&Rational::new(1, 2)).map_err(e)?,
        gamma: gamma_from_dyadic(&ModulusDescriptor::GammaDyadicShift { c: -2 }).map_err(e)?,
        lambda: constant(1, 2),
        s: geometric(Rational::new(1, 2), Rational::new(1, 2)),
        l: 2,
        n0: 0,
    }));
    for name in ALL_CONFIGS {
        out.push((format!("config {name}"), load(name).schedule));
    }
    for (name, s) in &out {
        s.validate().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(out)
}

/// `max(0, gamma - 1)`, tabulated at the dyadic precisions.
fn gamma_minus_one(gamma: &ModulusDescriptor, deltas: &[f64]) -> Result<ModulusDescriptor, String> {
    let mut points = Vec::new();
    for &d in deltas {
        let g = gamma.gamma(&d).map_err(|e| e.to_string())?;
        let arg = Rational::from_f64(d).ok_or("non-finite precision")?;
        points.push((arg, Rational::integer(g.saturating_sub(1) as i64)));
    }
    points.sort_by(|a, b| a.0.inner().cmp(b.0.inner()));
    Ok(ModulusDescriptor::Tabulated { points })
}

fn witness_validators() -> Outcome {
    let deltas = dyadic_deltas(P_MAX);
    let (mut honest, mut shrunk_theta, mut shrunk_gamma) = (0, 0, 0);
    for (name, s) in shipped_schedules()? {
        let th = verify_theta(&s, N_MAX).map_err(|e| format!("{name}: {e}"))?;
        ensure(th.passed, || format!("{name}: theta {:?}", th.first_failure))?;
        let ga = verify_gamma(&s, &deltas, N_MAX).map_err(|e| format!("{name}: {e}"))?;
        ensure(ga.passed, || format!("{name}: gamma {:?}", ga.first_failure))?;
        honest += 1;

        let ModulusDescriptor::ThetaLinear { a, b } = &s.theta else {
            return Err(format!("{name}: unexpected theta kind"));
        };
        let eighth = ModulusDescriptor::ThetaLinear {
            a: Rational(a.inner() / num_rational::BigRational::from_integer(8.into())),
            b: b.clone(),
        };
        let th = verify_theta_with(&eighth, &s, N_MAX).map_err(|e| format!("{name}: {e}"))?;
        ensure(!th.passed, || format!("{name}: theta/8 accepted"))?;
        shrunk_theta += 1;

        // gamma - 1 is only a fault where gamma is positive somewhere
        if deltas.iter().any(|d| s.gamma.gamma(d).is_ok_and(|g| g > 0)) {
            let fault = gamma_minus_one(&s.gamma, &deltas)?;
            let ga = verify_gamma_with(&fault, &s, &deltas, N_MAX).map_err(|e| format!("{name}: {e}"))?;
            ensure(!ga.passed, || format!("{name}: gamma-1 accepted"))?;
            shrunk_gamma += 1;
        }
    }
    Ok(format!(
        "{honest} schedules pass; theta/8 caught {shrunk_theta}x, gamma-1 caught {shrunk_gamma}x"
    ))
}

fn modulus_conversions() -> Outcome {
    let space = SpaceModel::euclidean(2);
    let e = |e: ishikawa_core::Error| e.to_string();
    let eta1 = eta_to_eta1(&ModulusDescriptor::eta_quadratic()).map_err(e)?;
    let round_trip = space.clone().with_modulus(eta1_to_eta(&eta1).map_err(e)?).map_err(e)?;
    let r = check_uc_implication(&round_trip, SAMPLES, 3);
    ensure(r.passed, || format!("eta1 -> eta: {:?}", r.failures.first()))?;
    let r = check_index_implication(&space, &eta2_to_eta1(&eta1).map_err(e)?, IndexForm::Closed, SAMPLES, 4);
    ensure(r.passed && r.samples == SAMPLES, || format!("eta2 -> eta1: {:?}", r.failures.first()))?;
    let r = check_index_implication(&space, &eta3_to_eta2(&eta1).map_err(e)?, IndexForm::Open, SAMPLES, 5);
    ensure(r.passed && r.samples == SAMPLES, || format!("eta3 -> eta2: {:?}", r.failures.first()))?;
    Ok(format!("3 conversions x {SAMPLES} samples"))
}

fn uniformity() -> Outcome {
    let configs: Vec<_> = AUDITED.iter().map(|n| load(n)).collect();
    // Shared (N0, L, theta, gamma): the Ishikawa schedule is valid for all four.
    let shared = configs[3].schedule.clone();
    for eps in GRID {
        let mut outputs = Vec::new();
        for c in &configs {
            let inputs = RateInputs::new(eps, c.space.modulus().clone(), c.afp.b, &shared);
            let report = compute_phi(&inputs).map_err(|e| e.to_string())?;
            outputs.push(serde_json::to_vec(&report).map_err(|e| e.to_string())?);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("eps={eps}: outputs differ"))?;
        // The three Krasnoselski-Mann configs share their native tuple too.
        let native: Vec<_> = configs[..3]
            .iter()
            .map(|c| compute_phi(&c.rate_inputs(eps)).map(|r| serde_json::to_vec(&r).unwrap()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(native.windows(2).all(|w| w[0] == w[1]), || format!("eps={eps}: native outputs differ"))?;
    }
    Ok("4 configs x 4 precisions, byte-identical reports".into())
}

fn residual_cap() -> Outcome {
    let mut samples = 0;
    for name in ALL_CONFIGS {
        let c = load(name);
        let traj = run_trajectory(&c.space, &c.map, &c.start, &c.schedule, 100_000, &c.run_options())
            .map_err(|e| format!("{name}: {e}"))?;
        let r = check_residual_cap(&traj);
        ensure(r.passed && r.samples == 100_001, || format!("{name}: {:?} {:?}", r.failures.first(), r.notes))?;
        samples += r.samples;
        for eps in c.eps_grid.iter().take(2) {
            let out = check_phi_soundness(&c, *eps).map_err(|e| format!("{name}: {e}"))?;
            ensure(out.cap.passed, || format!("{name} eps={eps}: {:?}", out.cap.failures.first()))?;
            samples += out.cap.samples;
        }
    }
    Ok(format!("7 configs, {samples} residuals within 2b"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("space axioms", space_axioms),
        ("uniform convexity modulus", uc_modulus),
        ("step inequality audit", lemma_audit),
        ("phi soundness", phi_soundness),
        ("delta witness", delta_witness),
        ("witness validators", witness_validators),
        ("modulus conversions", modulus_conversions),
        ("uniformity", uniformity),
        ("residual cap", residual_cap),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.2} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}; {secs:.2} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
