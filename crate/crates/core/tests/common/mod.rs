#![allow(dead_code)]

use std::path::PathBuf;

use modopt::runner::{parse_config, RunConfig};

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

pub fn load(name: &str) -> RunConfig {
    let text = std::fs::read_to_string(config_path(name)).expect("config readable");
    parse_config(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Same text as a shipped config with selected lines replaced.
pub fn load_edited(name: &str, edits: &[(&str, &str)]) -> RunConfig {
    let mut text = std::fs::read_to_string(config_path(name)).expect("config readable");
    for (from, to) in edits {
        assert!(text.contains(from), "{from:?} not in {name}");
        text = text.replacen(from, to, 1);
    }
    parse_config(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// First-cycle problem switched to simulated annealing with the given settings.
pub fn first_cycle_sa(t0: f64, alpha: f64, steps: usize) -> RunConfig {
    load_edited(
        "first_cycle.yaml",
        &[(
            "methodology: genetic_algorithm",
            &format!(
                "methodology: simulated_annealing\n  initial_temperature: {t0:?}\n  cooling_rate: {alpha:?}\n  number_of_steps: {steps}"
            ),
        )],
    )
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

use std::collections::BTreeMap;

use modopt::evaluators::EvaluatorSpec;
use modopt::{Decision, DecisionGroup, DecisionMap, Goal, ObjectiveSpec, ProblemDefinition};

/// Fuel-only first-cycle shape: 26 positions, five decisions in groups of
/// 11, 7 and 8, no placement restrictions.
pub fn fuel_only_26() -> ProblemDefinition {
    let decisions = vec![
        Decision::new("2.0").in_group(0),
        Decision::new("2.5").in_group(1),
        Decision::new("2.5bp").in_group(1),
        Decision::new("3.2").in_group(2),
        Decision::new("3.2bp").in_group(2),
    ];
    ProblemDefinition {
        n_variables: 26,
        maps: DecisionMap::permissive(decisions.len(), 26),
        decisions,
        groups: vec![
            DecisionGroup::new("2.0", 11),
            DecisionGroup::new("2.5", 7),
            DecisionGroup::new("3.2", 8),
        ],
        objectives: vec![ObjectiveSpec::new("cycle_length", Goal::Maximize, 1.0)],
        group_constrained: true,
        fixed_positions: BTreeMap::new(),
        evaluator: EvaluatorSpec::unspecified(),
    }
}

/// City coordinates of `tsp7.yaml`, A to G.
pub const TSP7: [(f64, f64); 7] = [
    (0.0, 0.0),
    (4.0, 1.0),
    (7.0, 4.0),
    (6.0, 8.0),
    (2.0, 9.0),
    (-1.0, 6.0),
    (3.0, 5.0),
];

/// Closed tour length over `TSP7`, written out independently of the crate.
pub fn tsp7_length(order: &[usize]) -> f64 {
    let n = order.len();
    (0..n)
        .map(|i| {
            let (x0, y0) = TSP7[order[i]];
            let (x1, y1) = TSP7[order[(i + 1) % n]];
            ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt()
        })
        .sum()
}

/// Shortest tour over `TSP7` by enumerating all 5040 orders.
pub fn tsp7_optimum() -> (f64, usize) {
    let all = permutations(7);
    let best = all
        .iter()
        .map(|p| tsp7_length(p))
        .fold(f64::INFINITY, f64::min);
    (best, all.len())
}

/// Runs `cfg` and returns the text of trace.csv, progress.csv and best.json.
pub fn report_texts(cfg: &RunConfig, seed: u64, threads: usize) -> [String; 3] {
    use modopt::runner::report::{BEST_FILE, PROGRESS_FILE, TRACE_FILE};
    let record = modopt::runner::run(cfg, seed, threads).expect("run succeeds");
    let dir = tempfile::tempdir().unwrap();
    modopt::runner::write_reports(&record, cfg, seed, dir.path()).unwrap();
    [TRACE_FILE, PROGRESS_FILE, BEST_FILE].map(|f| std::fs::read_to_string(dir.path().join(f)).unwrap())
}
