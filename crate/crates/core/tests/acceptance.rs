//! One pass/fail line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::process::ExitCode;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use sasaki7_core::clifford::CliffordRep;
use sasaki7_core::harness::{run_suite, CheckResult, Mode, Status, SuiteConfig};

/// Float-mode cross-checks must agree with the exact values to this tolerance.
const FLOAT_TOLERANCE: f64 = 1e-9;
/// Random instances per property.
const INSTANCES: usize = 128;
const SEED: u64 = 0x3_5a5a_1c;
/// Parameters `t = s²` of the deformation criterion.
const DEFORMATION_POINTS: [(i64, i64); 5] = [(1, 5), (1, 2), (1, 1), (2, 1), (4, 1)];

struct Verdict {
    pass: bool,
    detail: String,
}

fn suite(mode: Mode, t: (i64, i64), sections: &[u8]) -> Vec<CheckResult> {
    let cfg = SuiteConfig {
        mode,
        t: BigRational::new(t.0.into(), t.1.into()),
        tolerance: FLOAT_TOLERANCE,
        sections: sections.iter().copied().collect(),
        ..SuiteConfig::default()
    };
    run_suite(&cfg).expect("valid configuration")
}

fn judge(results: &[CheckResult], keep: impl Fn(&str) -> bool) -> Verdict {
    let selected: Vec<&CheckResult> = results.iter().filter(|r| keep(&r.id)).collect();
    let failed: Vec<&str> = selected
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.id.as_str())
        .collect();
    Verdict {
        pass: !selected.is_empty() && failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks", selected.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    }
}

fn merge(verdicts: Vec<Verdict>) -> Verdict {
    Verdict {
        pass: verdicts.iter().all(|v| v.pass),
        detail: verdicts.into_iter().map(|v| v.detail).collect::<Vec<_>>().join("; "),
    }
}

const SPINOR_BLOCK_HOLONOMY_IDS: [&str; 6] = [
    "holonomy.splitting_dims",
    "holonomy.splitting_total",
    "holonomy.torsion_sigma3",
    "holonomy.torsion_sigma14",
    "holonomy.casimir_value",
    "holonomy.casimir_space",
];

fn properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rep = CliffordRep::build();
    let space = sphere();
    let mut failures = Vec::new();
    let mut record = |name: &str, outcome: Outcome| {
        if let Err(e) = outcome {
            failures.push(format!("{name}: {e}"));
        }
    };
    for _ in 0..INSTANCES {
        let degrees = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=2));
        let forms: Vec<Vec<Q>> = (0..3).map(|_| random_qs(&mut rng, FORM_COEFFS)).collect();
        let v = random_qs(&mut rng, 7);
        record(
            "exterior",
            exterior_axioms(degrees, &forms[0], &forms[1], &forms[2], &v),
        );

        let t = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        record("hodge", hodge_involution(rng.gen_range(0..=7), &forms[0], t));

        let (u, w, psi) = (random_qs(&mut rng, 7), random_qs(&mut rng, 7), random_qs(&mut rng, 8));
        record("clifford", clifford_anticommutation(&rep, &u, &w, &psi));

        let (a, b) = (random_qs(&mut rng, 21), random_qs(&mut rng, 21));
        record("spin lift", spin_lift_homomorphism(&rep, &a, &b));

        let d_degrees = (rng.gen_range(0..=5), rng.gen_range(0..=2));
        record("d²", d_squared(&space, d_degrees, &forms[1], &forms[2]));

        let (x, y, z) = (
            random_qs(&mut rng, 10),
            random_qs(&mut rng, 10),
            random_qs(&mut rng, 10),
        );
        record("jacobi", jacobi(&space, &x, &y, &z));
    }
    Verdict {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("6 properties × {INSTANCES} instances")
        } else {
            failures.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let round = suite(Mode::Exact, (1, 1), &[2, 3, 4, 5, 6]);
    let deformations: Vec<Vec<CheckResult>> = DEFORMATION_POINTS
        .iter()
        .map(|&t| suite(Mode::Exact, t, &[7]))
        .collect();
    let float_nearly_parallel = suite(Mode::Float, (1, 5), &[7]);

    let criteria: Vec<(&str, Verdict)> = vec![
        (
            "structure equations",
            judge(&round, |id| id.starts_with("structure.") && id != "structure.nabla_xi"),
        ),
        (
            "canonical structure and torsion",
            judge(&round, |id| id.starts_with("canonical.")),
        ),
        (
            "connections",
            judge(&round, |id| id.starts_with("connection.") || id == "structure.nabla_xi"),
        ),
        (
            "canonical spinor",
            judge(&round, |id| {
                id.starts_with("spinor.") || SPINOR_BLOCK_HOLONOMY_IDS.contains(&id)
            }),
        ),
        (
            "characteristic holonomy",
            judge(&round, |id| {
                id.starts_with("holonomy.") && !SPINOR_BLOCK_HOLONOMY_IDS.contains(&id)
            }),
        ),
        ("Killing spinors", judge(&round, |id| id.starts_with("killing."))),
        (
            "deformation family",
            merge(
                deformations
                    .iter()
                    .map(|r| judge(r, |id| id.starts_with("deformation.")))
                    .chain(std::iter::once(judge(&float_nearly_parallel, |_| true)))
                    .collect(),
            ),
        ),
        (
            "special parameters",
            judge(&deformations[2], |id| id.starts_with("special.")),
        ),
        ("property suites", properties()),
    ];

    let mut all = true;
    for (i, (name, verdict)) in criteria.iter().enumerate() {
        all &= verdict.pass;
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {name} ({})", i + 1, verdict.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
