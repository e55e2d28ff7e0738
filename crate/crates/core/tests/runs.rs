mod common;

use std::path::Path;
use std::process::Command;

use modopt::objective::compose_objective;
use modopt::runner::{self, read_best, write_reports};
use modopt::EvaluationResult;

#[test]
fn ga_and_sa_evaluation_counts() {
    let ga = runner::run(&common::load("first_cycle.yaml"), 1, 1).unwrap();
    assert_eq!(ga.evaluations(), 2440);
    assert_eq!(ga.progress.len(), 61);
    let sa = runner::run(&common::first_cycle_sa(20.0, 0.999, 2400), 1, 1).unwrap();
    assert_eq!(sa.evaluations(), 2401);
    assert_eq!(sa.progress.len(), 2401);
    for rec in [&ga, &sa] {
        assert!(rec.progress.windows(2).all(|w| w[1].best_so_far >= w[0].best_so_far));
        assert_eq!(rec.progress.last().unwrap().evaluations, rec.evaluations());
        assert_eq!(rec.progress.last().unwrap().best_so_far, rec.best_fitness());
    }
}

#[test]
fn every_trace_row_recomposes_exactly() {
    let cfg = common::load("third_cycle.yaml");
    let [trace, _, _] = common::report_texts(&cfg, 2, 1);
    let mut lines = trace.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let names = &header[2..2 + cfg.problem.objectives.len()];
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let result: EvaluationResult = names
            .iter()
            .zip(&cols[2..])
            .map(|(n, v)| (n.to_string(), v.parse::<f64>().unwrap()))
            .collect();
        let f: f64 = cols[2 + names.len()].parse().unwrap();
        assert_eq!(compose_objective(&result, &cfg.problem.objectives).unwrap().total, f);
        rows += 1;
    }
    assert_eq!(rows, 50 * 251);
}

#[test]
fn identical_seed_gives_identical_files() {
    let cfg = common::load("first_cycle.yaml");
    assert_eq!(common::report_texts(&cfg, 7, 1), common::report_texts(&cfg, 7, 1));
    assert_eq!(common::report_texts(&cfg, 7, 1), common::report_texts(&cfg, 7, 4));
    assert_ne!(common::report_texts(&cfg, 7, 1)[0], common::report_texts(&cfg, 8, 1)[0]);
    let sa = common::first_cycle_sa(20.0, 0.999, 500);
    assert_eq!(common::report_texts(&sa, 3, 1), common::report_texts(&sa, 3, 1));
}

#[test]
fn progress_file_is_monotone_on_read_back() {
    let cfg = common::load("lattice.yaml");
    let [_, progress, _] = common::report_texts(&cfg, 3, 2);
    let best: Vec<f64> = progress
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(best.len(), 101);
    assert!(best.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn best_file_rescoring_matches() {
    let cfg = common::load("first_cycle.yaml");
    let record = runner::run(&cfg, 4, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_reports(&record, &cfg, 4, dir.path()).unwrap();
    let best = read_best(&dir.path().join("best.json")).unwrap();
    assert_eq!(best.seed, 4);
    assert_eq!(best.evaluations, 2440);
    assert_eq!(best.config_digest, cfg.digest());
    let result: EvaluationResult = best.objectives.clone().into_iter().collect();
    let f = compose_objective(&result, &cfg.problem.objectives).unwrap().total;
    assert_eq!(f, best.fitness);
    assert_eq!(best.fitness, record.best_fitness());
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_modopt")).args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn cli_run_and_replay() {
    let input = common::config_path("tsp7.yaml");
    let out = tempfile::tempdir().unwrap();
    let o = cli(&["run", "--input", path_str(&input), "--seed", "1", "--out", path_str(out.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let best = out.path().join("best.json");
    let o = cli(&["replay", "--best", path_str(&best), "--input", path_str(&input)]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    let stored = read_best(&best).unwrap().fitness;
    assert!(text.contains(&format!("replayed F = {stored}")), "{text}");

    let o = cli(&["validate", "--input", path_str(&input)]);
    assert!(o.status.success());
    let o = cli(&["brute-force", "--input", path_str(&input)]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("5040 feasible"));
}

#[test]
fn cli_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.yaml");
    std::fs::write(&bad, "optimization:\n  methodology: hill_climbing\n").unwrap();
    assert_eq!(cli(&["validate", "--input", path_str(&bad)]).status.code(), Some(1));
    assert_eq!(
        cli(&["validate", "--input", path_str(&tmp.path().join("missing.yaml"))]).status.code(),
        Some(1)
    );
    let lattice = common::config_path("lattice.yaml");
    assert_eq!(
        cli(&["brute-force", "--input", path_str(&lattice), "--cap", "100"]).status.code(),
        Some(3)
    );

    let script = tmp.path().join("fail.sh");
    std::fs::write(&script, "#!/bin/sh\nexit 1\n").unwrap();
    use std::os::unix::fs::PermissionsExt;
    std::fs::set_permissions(&script, std::fs::Permissions::from_mode(0o755)).unwrap();
    let text = std::fs::read_to_string(common::config_path("tsp7.yaml")).unwrap();
    let head = text.split("evaluator:").next().unwrap();
    let cfg = tmp.path().join("ext.yaml");
    std::fs::write(
        &cfg,
        format!("{head}evaluator:\n  kind: external_command\n  params:\n    command: {}\n", script.display()),
    )
    .unwrap();
    let o = cli(&["run", "--input", path_str(&cfg), "--seed", "1", "--out", path_str(&tmp.path().join("o"))]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}
