//! Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use modopt::annealing::{acceptance_probability, cool};
use modopt::evaluators::{self, brute_force_optimum};
use modopt::generation::generate_population;
use modopt::genetic::crossover::crossover_grouped;
use modopt::genetic::mutation::{mutate_swap, mutate_within_group};
use modopt::genetic::schedule::mutation_rate_update;
use modopt::genetic::selection::tournament_select;
use modopt::objective::compose_objective;
use modopt::rng::{self, seeded};
use modopt::runner::{self, parse_config, Algorithm};
use modopt::{EvaluationResult, Goal, ObjectiveSpec, ProblemDefinition};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------------------
// 1. objective recomposition

/// A published result row: listed F and the objective values it came from.
struct Row {
    label: &'static str,
    f: f64,
    values: &'static [f64],
}

const fn row(label: &'static str, f: f64, values: &'static [f64]) -> Row {
    Row { label, f, values }
}

// values in [pr_max, k_max, k_eoc] order
const LATTICE: [Row; 15] = [
    row("1 highest", -26.905, &[1.050, 1.089, 1.076]),
    row("1 average", -27.244, &[1.080, 1.091, 1.076]),
    row("1 lowest", -28.411, &[1.196, 1.092, 1.076]),
    row("2 highest", -26.890, &[1.047, 1.090, 1.076]),
    row("2 average", -27.136, &[1.072, 1.090, 1.075]),
    row("2 lowest", -27.945, &[1.154, 1.089, 1.075]),
    row("3 highest", -27.067, &[1.055, 1.095, 1.078]),
    row("3 average", -27.302, &[1.079, 1.095, 1.078]),
    row("3 lowest", -28.489, &[1.197, 1.095, 1.078]),
    row("4 highest", -27.373, &[1.064, 1.107, 1.080]),
    row("4 average", -27.657, &[1.098, 1.103, 1.078]),
    row("4 lowest", -28.853, &[1.229, 1.097, 1.075]),
    row("5 highest", -26.876, &[1.043, 1.092, 1.078]),
    row("5 average", -27.216, &[1.077, 1.092, 1.076]),
    row("5 lowest", -28.360, &[1.191, 1.092, 1.078]),
];
const LATTICE_NAMES: [&str; 3] = ["pr_max", "k_max", "k_eoc"];

// [cycle_length, max_boron, FDeltaH, Fq]
const FIRST_CYCLE_GA: [Row; 5] = [
    row("GA 1", 384.8, &[384.8, 1297.0, 1.479, 2.092]),
    row("GA 2", 385.8, &[387.0, 1298.2, 1.473, 2.103]),
    row("GA 3", 379.0, &[379.0, 1270.7, 1.466, 2.086]),
    row("GA 4", 380.3, &[382.2, 1301.9, 1.469, 2.098]),
    row("GA 5", 379.3, &[381.8, 1302.5, 1.468, 2.081]),
];
const FIRST_CYCLE_GA_AVG: Row = row("GA avg", 381.8, &[383.0, 1294.1, 1.471, 2.092]);
const FIRST_CYCLE_SA: [Row; 5] = [
    row("SA 1", 387.5, &[387.5, 1296.5, 1.469, 2.085]),
    row("SA 2", 374.7, &[388.3, 1303.2, 1.506, 2.094]),
    row("SA 3", 381.6, &[384.4, 1297.0, 1.484, 2.103]),
    row("SA 4", 366.3, &[374.3, 1291.5, 1.500, 2.053]),
    row("SA 5", 385.6, &[385.6, 1296.1, 1.472, 2.079]),
];
const FIRST_CYCLE_SA_AVG: Row = row("SA avg", 379.1, &[384.0, 1296.9, 1.486, 2.083]);
const FIRST_CYCLE_NAMES: [&str; 4] = ["cycle_length", "max_boron", "FDeltaH", "PinPowerPeaking"];

// [cycle_length, max_boron, FDeltaH]
const THIRD_CYCLE_GA: [Row; 5] = [
    row("GA 1", 500.1, &[500.1, 1292.5, 1.494]),
    row("GA 2", 515.1, &[515.1, 1265.5, 1.518]),
    row("GA 3", 514.4, &[514.4, 1299.0, 1.502]),
    row("GA 4", 519.8, &[519.8, 1259.8, 1.482]),
    row("GA 5", 512.4, &[512.4, 1298.6, 1.525]),
];
const THIRD_CYCLE_GA_AVG: Row = row("GA avg", 512.4, &[512.4, 1283.1, 1.504]);
const THIRD_CYCLE_SA: [Row; 5] = [
    row("SA 1", 527.1, &[527.1, 1297.7, 1.525]),
    row("SA 2", 469.0, &[469.2, 1300.2, 1.524]),
    row("SA 3", 518.4, &[518.4, 1297.6, 1.521]),
    row("SA 4", 485.7, &[485.7, 1300.0, 1.514]),
    row("SA 5", 539.2, &[539.2, 1292.3, 1.515]),
];
const THIRD_CYCLE_SA_AVG: Row = row("SA avg", 507.9, &[507.9, 1297.56, 1.520]);
const THIRD_CYCLE_NAMES: [&str; 3] = ["cycle_length", "max_boron", "FDeltaH"];

fn recompose(r: &Row, names: &[&str], specs: &[ObjectiveSpec]) -> f64 {
    let result: EvaluationResult = names
        .iter()
        .zip(r.values)
        .map(|(n, &v)| (n.to_string(), v))
        .collect();
    compose_objective(&result, specs).expect("all objectives listed").total
}

fn criterion_1() -> Outcome {
    const TOL: f64 = 0.15;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut rows = 0;
    let mut check = |table: &str, label: &str, listed: f64, got: f64| {
        let d = (listed - got).abs();
        worst = worst.max(d);
        rows += 1;
        if d > TOL {
            failures.push(format!("{table} {label}: {got:.3} vs {listed}"));
        }
    };

    let lattice = common::load("lattice.yaml").problem.objectives;
    for r in &LATTICE {
        check("lattice", r.label, r.f, recompose(r, &LATTICE_NAMES, &lattice));
    }

    // Average rows list the mean of the five runs' F; the averaged goal
    // columns are not fed back through the penalties.
    let mut averaged_goal_gap: f64 = 0.0;
    let tables: [(&str, &str, &[&str], [(&[Row; 5], &Row); 2]); 2] = [
        (
            "first cycle",
            "first_cycle.yaml",
            &FIRST_CYCLE_NAMES,
            [(&FIRST_CYCLE_GA, &FIRST_CYCLE_GA_AVG), (&FIRST_CYCLE_SA, &FIRST_CYCLE_SA_AVG)],
        ),
        (
            "third cycle",
            "third_cycle.yaml",
            &THIRD_CYCLE_NAMES,
            [(&THIRD_CYCLE_GA, &THIRD_CYCLE_GA_AVG), (&THIRD_CYCLE_SA, &THIRD_CYCLE_SA_AVG)],
        ),
    ];
    for (table, file, names, groups) in tables {
        let specs = common::load(file).problem.objectives;
        for (runs, avg) in groups {
            let mut sum = 0.0;
            for r in runs.iter() {
                let f = recompose(r, names, &specs);
                check(table, r.label, r.f, f);
                sum += f;
            }
            check(table, avg.label, avg.f, sum / runs.len() as f64);
            averaged_goal_gap = averaged_goal_gap.max((recompose(avg, names, &specs) - avg.f).abs());
        }
    }
    let detail = format!(
        "{rows} rows, worst |dF| = {worst:.4} (tol {TOL}); average rows as mean of run F, \
         composing the averaged goal columns instead is off by up to {averaged_goal_gap:.2}"
    );
    if failures.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}; {}", failures.join("; ")))
    }
}

// ---------------------------------------------------------------------------

fn criterion_2() -> Outcome {
    let (r0, r1, n) = (0.25, 0.55, 100);
    let mut r = r0;
    let mut seq = vec![r];
    for _ in 0..n {
        r = mutation_rate_update(r, r0, r1, n);
        seq.push(r);
    }
    let increasing = seq.windows(2).all(|w| w[1] > w[0]);
    let first = seq[1];
    let end_ok = (r - r1).abs() <= 1e-9;
    let first_ok = (first - 0.253821).abs() <= 1e-6;
    outcome(
        increasing && end_ok && first_ok,
        format!("R_1 = {first:.7}, R_100 = {r:.12}, strictly increasing: {increasing}"),
    )
}

fn criterion_3() -> Outcome {
    let (t0, alpha) = (200.0f64, 0.999f64);
    let mut t = t0;
    let mut worst: f64 = 0.0;
    for n in 1..=12_500 {
        t = cool(t, alpha);
        let exact = t0 * alpha.powi(n);
        worst = worst.max(((t - exact) / exact).abs());
    }
    outcome(worst <= 1e-12, format!("max relative error {worst:.2e} over 12500 steps"))
}

fn criterion_4() -> Outcome {
    const DRAWS: u64 = 100_000;
    let mut stream = seeded(2024);
    let mut worst_sigma: f64 = 0.0;
    let mut bad = Vec::new();
    for df in [1.0, 5.0, 20.0] {
        for t in [1.0, 20.0, 200.0] {
            let p = acceptance_probability(10.0, 10.0 - df, t).unwrap();
            let expected = (-df / t).exp();
            let hits = (0..DRAWS).filter(|_| rng::unit(&mut stream) < p).count() as f64;
            let observed = hits / DRAWS as f64;
            let sigma = (expected * (1.0 - expected) / DRAWS as f64).sqrt();
            let dev = (observed - expected).abs();
            let ok = dev <= 3.0 * sigma;
            worst_sigma = worst_sigma.max(dev / sigma);
            if !ok {
                bad.push(format!("dF={df} T={t}: {observed} vs {expected:.5}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("9 cells x {DRAWS} draws, worst deviation {worst_sigma:.2} sigma {}", bad.join("; ")),
    )
}

fn preserve(def: &ProblemDefinition, seed: u64, ops: usize) -> (usize, usize) {
    let mut stream = seeded(seed);
    let mut pool = generate_population(def, 20, &mut stream).expect("generation");
    let mut checked = 0;
    let mut violations = 0;
    let mut tally = |s: &modopt::Solution, v: &mut usize| {
        checked += 1;
        if !def.solution_violations(s).is_empty() {
            *v += 1;
        }
    };
    for k in 0..ops {
        let i = k % pool.len();
        let j = (i + 1 + rng::index(&mut stream, pool.len() - 1)) % pool.len();
        let (x, y) = crossover_grouped(&pool[i], &pool[j], def, &mut stream);
        tally(&x, &mut violations);
        tally(&y, &mut violations);
        let s = mutate_swap(&x, def, &mut stream).solution;
        tally(&s, &mut violations);
        let w = mutate_within_group(&y, def, &mut stream).solution;
        tally(&w, &mut violations);
        // keep the pool drifting so later operators see operator outputs
        pool[i] = s;
        pool[j] = w;
    }
    (checked, violations)
}

fn criterion_5() -> Outcome {
    let mut total = 0;
    let mut violations = 0;
    let mut parts = Vec::new();
    for (name, def) in [
        ("first cycle", common::load("first_cycle.yaml").problem),
        ("third cycle", common::load("third_cycle.yaml").problem),
    ] {
        let (c, v) = preserve(&def, 5, 10_000);
        total += c;
        violations += v;
        parts.push(format!("{name}: {v} of {c}"));
    }
    outcome(
        violations == 0,
        format!("10000 each of crossover/swap/within-group per problem; violations {} ({total} checked)", parts.join(", ")),
    )
}

fn criterion_6() -> Outcome {
    let cfg = common::load("tsp7.yaml");
    let def = &cfg.problem;
    let ev = evaluators::build(def).unwrap();
    let best = brute_force_optimum(def, ev.as_ref(), &def.objectives, 10_000).unwrap();
    let (oracle, _) = common::tsp7_optimum();
    let oracle_ok = (-best.fitness() - oracle).abs() < 1e-9;

    let within = |f: f64| -f <= 1.02 * oracle;
    let ga_hits = (1..=20)
        .filter(|&seed| within(runner::run(&cfg, seed, 1).unwrap().best_fitness()))
        .count();
    let sa_cfg = common::load_edited(
        "tsp7.yaml",
        &[(
            "methodology: genetic_algorithm",
            "methodology: simulated_annealing\n  initial_temperature: 20.0\n  cooling_rate: 0.997\n  number_of_steps: 2000",
        )],
    );
    let sa_hits = (1..=20)
        .filter(|&seed| within(runner::run(&sa_cfg, seed, 1).unwrap().best_fitness()))
        .count();
    outcome(
        oracle_ok && ga_hits >= 18 && sa_hits >= 18,
        format!(
            "optimum {oracle:.6} (oracle agrees: {oracle_ok}); within 2%: GA {ga_hits}/20, SA {sa_hits}/20"
        ),
    )
}

fn criterion_7() -> Outcome {
    let ga_cfg = common::load("first_cycle.yaml");
    if !matches!(&ga_cfg.algorithm, Algorithm::Ga(g) if g.population_size == 40 && g.n_generations == 60) {
        return outcome(false, "first-cycle config is not pop 40 / 60 generations");
    }
    let sa_cfg = common::first_cycle_sa(20.0, 0.999, 2400);
    let mut ok = true;
    let mut summary = Vec::new();
    for (label, cfg, expected) in [("GA", &ga_cfg, 2440), ("SA", &sa_cfg, 2401)] {
        let mut best = Vec::new();
        for seed in 1..=5 {
            let rec = runner::run(cfg, seed, 1).unwrap();
            let monotone = rec.progress.windows(2).all(|w| w[1].best_so_far >= w[0].best_so_far);
            ok &= monotone && rec.evaluations() == expected;
            best.push(rec.best_fitness());
        }
        let lo = best.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = best.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        summary.push(format!("{label} best F {lo:.1}..{hi:.1} ({expected} evaluations each)"));
    }
    outcome(ok, format!("5 seeds each, monotone best-so-far; {}", summary.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut stream = seeded(8);
    let mut lost = 0;
    for _ in 0..10_000 {
        let n = 2 * (1 + rng::index(&mut stream, 50));
        // coarse values so ties are common
        let fitness: Vec<f64> = (0..n).map(|_| stream.gen_range(0..20) as f64).collect();
        let max = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let survivors = tournament_select(&fitness, &mut stream).unwrap();
        if !survivors.iter().any(|&i| fitness[i] == max) {
            lost += 1;
        }
    }
    outcome(lost == 0, format!("10000 pools of 2..100, best lost {lost} times"))
}

fn criterion_9() -> Outcome {
    let ga = common::load("first_cycle.yaml");
    let sa = common::first_cycle_sa(20.0, 0.999, 2400);
    let a = common::report_texts(&ga, 9, 1);
    let repeat = a == common::report_texts(&ga, 9, 1);
    let threads = a == common::report_texts(&ga, 9, 4);
    let sa_repeat = common::report_texts(&sa, 9, 1) == common::report_texts(&sa, 9, 1);
    outcome(
        repeat && threads && sa_repeat,
        format!("GA repeat identical: {repeat}, GA 1 vs 4 threads identical: {threads}, SA repeat identical: {sa_repeat}"),
    )
}

fn criterion_10() -> Outcome {
    let cfg = common::load("first_cycle.yaml");
    let mut problems = Vec::new();
    match &cfg.algorithm {
        Algorithm::Ga(g) => {
            if g.population_size != 40 || g.n_generations != 60 {
                problems.push("population/generations".to_string());
            }
        }
        Algorithm::Sa(_) => problems.push("methodology".into()),
    }
    let expected = [
        ("max_boron", Goal::LessThanTarget(1300.0), 1.0),
        ("PinPowerPeaking", Goal::LessThanTarget(2.1), 400.0),
        ("FDeltaH", Goal::LessThanTarget(1.48), 400.0),
        ("cycle_length", Goal::Maximize, 1.0),
    ];
    let objectives = &cfg.problem.objectives;
    let found = expected.iter().all(|(name, goal, weight)| {
        objectives
            .iter()
            .any(|o| o.name == *name && o.goal == *goal && o.weight == *weight)
    });
    if objectives.len() != 4 || !found {
        problems.push("objectives".into());
    }
    let caps: Vec<usize> = cfg.problem.groups.iter().map(|g| g.capacity).collect();
    if caps != [11, 7, 8, 9] || !cfg.problem.group_constrained {
        problems.push(format!("fixed_groups {caps:?}"));
    }
    let text = cfg.to_yaml();
    let stable = parse_config(&text).map(|again| again == cfg && again.to_yaml() == text);
    if stable != Ok(true) {
        problems.push("round trip".into());
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("pop 40, 60 generations, 4 objectives, groups {caps:?}, round trip stable, digest {}", &cfg.digest()[..12])
        } else {
            format!("mismatch: {}", problems.join(", "))
        },
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("objective recomposition", criterion_1, Duration::from_secs(1)),
        ("mutation schedule", criterion_2, Duration::from_secs(1)),
        ("cooling", criterion_3, Duration::from_secs(1)),
        ("acceptance statistics", criterion_4, Duration::from_secs(10)),
        ("constraint preservation", criterion_5, Duration::from_secs(60)),
        ("oracle equivalence", criterion_6, Duration::from_secs(60)),
        ("protocol reproduction", criterion_7, Duration::from_secs(300)),
        ("tournament argmax", criterion_8, Duration::from_secs(10)),
        ("determinism", criterion_9, Duration::from_secs(120)),
        ("config fidelity", criterion_10, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.2} s, budget {} s{}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
