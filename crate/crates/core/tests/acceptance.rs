//! Acceptance run: every criterion prints one PASS/FAIL line, and the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use l1geo::convexity::{first_unreachable_pair, is_l1_convex};
use l1geo::harness::generate::non_convex_pair;
use l1geo::harness::{instance_rng, random_box, random_instance, verify, Report, Suite, VerifyConfig};
use l1geo::integral::{kinematic_higher_mc, kinematic_principal};
use l1geo::lattice::{BoxUnion, CellSet, RatBox};
use l1geo::pixellation::{outer_pixellate, Shape};
use l1geo::rational::{rat, ratio, to_f64, Rational};
use l1geo::valuations::{intrinsic_volumes_boxunion, intrinsic_volumes_cellset};

const SEED: u64 = 20_240_601;

/// Binomial coefficients from Pascal's rule, independent of the library.
fn pascal(n: usize) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![1i64]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1i64; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        rows.push(row);
    }
    rows
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn unit_cube(n: usize) -> CellSet {
    CellSet::from_cells(n, rat(1), vec![vec![0; n]]).unwrap()
}

fn cube_volumes() -> Verdict {
    let c = pascal(6);
    let mut bad = Vec::new();
    for n in 0..=6 {
        let v = intrinsic_volumes_cellset(&unit_cube(n));
        if (0..=n).any(|i| v[i] != rat(c[n][i])) {
            bad.push(format!("n={n}: {v}"));
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { "V′_i = C(n,i) for n ≤ 6".into() } else { bad.join("; ") })
}

fn hadwiger_basis() -> Verdict {
    let c = pascal(6);
    let mut bad = Vec::new();
    for n in 1..=6 {
        for i in 0..=n {
            let corner = vec![rat(0); n];
            let far = (0..n).map(|a| if a < i { rat(1) } else { rat(0) }).collect();
            let cube = BoxUnion::new(n, vec![RatBox::new(corner, far).unwrap()]).unwrap();
            let v = intrinsic_volumes_boxunion(&cube);
            let row_ok = (0..=n).all(|j| v[j] == rat(if j <= i { c[i][j] } else { 0 }));
            if !row_ok {
                bad.push(format!("n={n} i={i}: {v}"));
            }
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { "binomial, unit diagonal, n ≤ 6".into() } else { bad.join("; ") })
}

/// Limit of the outer pixellations of the unit ℓ1 ball: `2ⁱ/i!·C(n,i)`.
fn ball_limit(n: usize, i: usize) -> Rational {
    let c = pascal(n);
    let fact: i64 = (1..=i as i64).product();
    ratio((1i64 << i) * c[n][i], fact)
}

fn ball_convergence() -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    for n in [2, 3] {
        let shape = Shape::unit_ball(n);
        let mut errors: Vec<Vec<f64>> = Vec::new();
        for d in [4, 16, 64] {
            let v = intrinsic_volumes_cellset(&outer_pixellate(&shape, &ratio(1, d)).unwrap());
            errors.push((0..=n).map(|i| to_f64(&((&v[i] - ball_limit(n, i)) / ball_limit(n, i))).abs()).collect());
        }
        let within = errors[2].iter().all(|&e| e <= 0.10);
        let monotone = (0..=n).all(|i| errors[0][i] >= errors[1][i] && errors[1][i] >= errors[2][i])
            && (1..=n).all(|i| errors[0][i] > errors[1][i] && errors[1][i] > errors[2][i]);
        pass &= within && monotone;
        let worst: Vec<String> = errors
            .iter()
            .map(|e| format!("{:.4}", e.iter().cloned().fold(0.0, f64::max)))
            .collect();
        details.push(format!("n={n} max rel err {}", worst.join(" > ")));
    }
    verdict(pass, details.join("; "))
}

fn suite(suite: Suite, instances: usize) -> Report {
    let mut config = VerifyConfig::new(suite);
    config.instances = instances;
    config.seed = SEED;
    verify(&config).unwrap()
}

fn report_verdict(report: &Report, per_n: usize) -> Verdict {
    let first = report
        .failures()
        .next()
        .map(|r| format!(", first failure {} at instance {}", r.name, r.instance))
        .unwrap_or_default();
    verdict(
        report.pass && report.summary.checks > 0,
        format!(
            "{per_n} instances per n, {} checks, {} failures, {} skipped{first}",
            report.summary.checks, report.summary.failures, report.summary.skipped
        ),
    )
}

fn principal_kinematic() -> Verdict {
    let mut failures = 0;
    let mut checks = 0;
    for n in [2, 3] {
        for c in 0..100 {
            let mut rng = instance_rng(SEED ^ 0x4b49, 1000 * n + c);
            let x = random_instance(n, 4, &mut rng).unwrap();
            let i = random_box(n, &mut rng);
            checks += 1;
            if !kinematic_principal(&x, &i).unwrap().holds() {
                failures += 1;
            }
        }
    }
    verdict(failures == 0, format!("{checks} pairs, {failures} failures"))
}

fn higher_kinematic() -> Verdict {
    let mut within = 0;
    let mut worst_rel: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for c in 0..20 {
        let mut rng = instance_rng(SEED ^ 0x4d43, c);
        let x = random_instance(2, 4, &mut rng).unwrap();
        let i = random_box(2, &mut rng);
        let est = kinematic_higher_mc(&x, &i, c % 3, 100_000, SEED + c as u64).unwrap();
        if est.within(4.0) {
            within += 1;
        }
        worst_rel = worst_rel.max(est.relative_error());
        worst_z = worst_z.max(est.z_score().abs());
    }
    verdict(
        within >= 19 && worst_rel <= 0.02,
        format!("{within}/20 within 4σ, max |z| {worst_z:.2}, max rel err {:.3}%", worst_rel * 100.0),
    )
}

fn reachability() -> Verdict {
    let mut violations = 0;
    let mut checked = 0;
    for index in 0..400 {
        let n = [2, 3][index % 2];
        let mut rng = instance_rng(SEED, index);
        let x = random_instance(n, 4, &mut rng).unwrap();
        if !is_l1_convex(&x).is_convex {
            continue;
        }
        checked += 1;
        if first_unreachable_pair(&x).is_some() {
            violations += 1;
        }
    }
    let mut rng = instance_rng(SEED, 9999);
    let caught = (0..50).all(|c| first_unreachable_pair(&non_convex_pair(2 + c % 2, &rat(1), &mut rng)).is_some());
    verdict(
        violations == 0 && caught,
        format!("{checked} convex sets, {violations} violations; non-convex pairs detected: {caught}"),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Verdict>)> = vec![
        ("1 cube intrinsic volumes", Duration::from_secs(1), Box::new(cube_volumes)),
        ("2 hadwiger basis matrix", Duration::from_secs(1), Box::new(hadwiger_basis)),
        ("3 ball convergence", Duration::from_secs(300), Box::new(ball_convergence)),
        ("4 steiner", Duration::from_secs(60), Box::new(|| report_verdict(&suite(Suite::Steiner, 400), 200))),
        ("5 crofton", Duration::from_secs(60), Box::new(|| report_verdict(&suite(Suite::Crofton, 400), 200))),
        ("6 kubota", Duration::from_secs(60), Box::new(|| report_verdict(&suite(Suite::Kubota, 400), 200))),
        ("7 principal kinematic", Duration::from_secs(120), Box::new(principal_kinematic)),
        ("8 higher kinematic mc", Duration::from_secs(600), Box::new(higher_kinematic)),
        ("9 algebra suite", Duration::from_secs(120), Box::new(|| report_verdict(&suite(Suite::Algebra, 1000), 500))),
        ("10 valuation suite", Duration::from_secs(120), Box::new(|| report_verdict(&suite(Suite::Valuation, 500), 250))),
        ("11 pixellation", Duration::from_secs(60), Box::new(|| report_verdict(&suite(Suite::Pixellation, 40), 20))),
        ("12 reachability cross-check", Duration::from_secs(120), Box::new(reachability)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, budget, run) in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{:.2?} of {:?}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed,
            budget
        );
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
