//! The YAML input file.
//!
//! Top-level blocks: `optimization` (methodology, algorithm settings,
//! groups, objectives), `genome` (decisions and their maps), `evaluator`
//! (which evaluator to build and its coefficients) and an optional `run`
//! block (seed, threads). Legacy keys from older input files are accepted
//! and ignored with a logged notice; any other unknown key is an error that
//! names its path.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use sha2::{Digest, Sha256};
use yaml_rust2::yaml::Hash;
use yaml_rust2::{Yaml, YamlEmitter, YamlLoader};

use crate::annealing::SaConfig;
use crate::error::ConfigError;
use crate::evaluators::external::DEFAULT_TIMEOUT_SECS;
use crate::evaluators::{
    EvaluatorKind, EvaluatorSpec, ExternalSpec, LatticeSpec, LoadingSpec, TspSpec,
};
use crate::genetic::{CrossoverVariant, GaConfig, MutationVariant};
use crate::problem::{
    Decision, DecisionGroup, DecisionId, DecisionMap, Goal, ObjectiveSpec, ProblemDefinition,
    Violation,
};
use crate::record::Methodology;

#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    Ga(GaConfig),
    Sa(SaConfig),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunSettings {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

/// A parsed and validated input file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub methodology: Methodology,
    pub algorithm: Algorithm,
    pub problem: ProblemDefinition,
    /// `mutation.common chromosomes`: named lists of decisions. Kept and
    /// written back but not used by any operator.
    pub common_chromosomes: Vec<(String, Vec<DecisionId>)>,
    pub settings: RunSettings,
}

// ---------------------------------------------------------------------------
// YAML access helpers

#[derive(Clone, Copy)]
struct Node<'a> {
    y: &'a Yaml,
    path: &'a str,
}

fn err(path: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::new(path, msg)
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Text of a scalar used as a key or identifier. Numbers keep their source
/// spelling, so `2.0` stays `2.0`.
fn scalar_text(y: &Yaml) -> Option<String> {
    match y {
        Yaml::String(s) | Yaml::Real(s) => Some(s.clone()),
        Yaml::Integer(i) => Some(i.to_string()),
        Yaml::Boolean(b) => Some(b.to_string()),
        _ => None,
    }
}

fn kind_name(y: &Yaml) -> &'static str {
    match y {
        Yaml::Real(_) => "a real number",
        Yaml::Integer(_) => "an integer",
        Yaml::String(_) => "a string",
        Yaml::Boolean(_) => "a boolean",
        Yaml::Array(_) => "a sequence",
        Yaml::Hash(_) => "a mapping",
        Yaml::Alias(_) => "an alias",
        Yaml::Null => "null",
        Yaml::BadValue => "missing",
    }
}

impl<'a> Node<'a> {
    fn hash(&self) -> Result<&'a Hash, ConfigError> {
        match self.y {
            Yaml::Hash(h) => Ok(h),
            other => Err(err(self.path, format!("expected a mapping, found {}", kind_name(other)))),
        }
    }

    /// Mapping entries as (key text, value).
    fn entries(&self) -> Result<Vec<(String, &'a Yaml)>, ConfigError> {
        self.hash()?
            .iter()
            .map(|(k, v)| {
                scalar_text(k)
                    .map(|t| (t, v))
                    .ok_or_else(|| err(self.path, "mapping keys must be scalars"))
            })
            .collect()
    }

    fn get(&self, key: &str) -> Option<&'a Yaml> {
        match self.y {
            Yaml::Hash(h) => h
                .iter()
                .find(|(k, _)| scalar_text(k).as_deref() == Some(key))
                .map(|(_, v)| v),
            _ => None,
        }
    }

    /// Rejects keys outside `known`; `legacy` keys are logged and skipped.
    fn check_keys(&self, known: &[&str], legacy: &[&str]) -> Result<(), ConfigError> {
        for (k, _) in self.entries()? {
            if known.contains(&k.as_str()) {
                continue;
            }
            let path = join(self.path, &k);
            if legacy.contains(&k.as_str()) {
                log::info!("ignoring legacy key {path}");
                continue;
            }
            return Err(err(&path, "unknown key"));
        }
        Ok(())
    }
}

fn as_f64(y: &Yaml, path: &str) -> Result<f64, ConfigError> {
    let v = match y {
        Yaml::Integer(i) => *i as f64,
        Yaml::Real(s) => s
            .parse::<f64>()
            .map_err(|_| err(path, format!("`{s}` is not a number")))?,
        other => return Err(err(path, format!("expected a number, found {}", kind_name(other)))),
    };
    if !v.is_finite() {
        return Err(err(path, "number must be finite"));
    }
    Ok(v)
}

fn as_u64(y: &Yaml, path: &str) -> Result<u64, ConfigError> {
    match y {
        Yaml::Integer(i) if *i >= 0 => Ok(*i as u64),
        Yaml::Integer(_) => Err(err(path, "must not be negative")),
        other => Err(err(path, format!("expected an integer, found {}", kind_name(other)))),
    }
}

fn as_usize(y: &Yaml, path: &str) -> Result<usize, ConfigError> {
    as_u64(y, path).map(|v| v as usize)
}

fn as_bool(y: &Yaml, path: &str) -> Result<bool, ConfigError> {
    match y {
        Yaml::Boolean(b) => Ok(*b),
        other => Err(err(path, format!("expected true or false, found {}", kind_name(other)))),
    }
}

fn as_text(y: &Yaml, path: &str) -> Result<String, ConfigError> {
    scalar_text(y).ok_or_else(|| err(path, format!("expected a scalar, found {}", kind_name(y))))
}

/// A sequence, or a single scalar treated as a one-element sequence.
fn as_list<'a>(y: &'a Yaml) -> Vec<&'a Yaml> {
    match y {
        Yaml::Array(a) => a.iter().collect(),
        other => vec![other],
    }
}

/// Numbers given either as a sequence or as one comma-separated string.
fn number_list(y: &Yaml, path: &str) -> Result<Vec<f64>, ConfigError> {
    match y {
        Yaml::String(s) => split_items(s)
            .enumerate()
            .map(|(i, t)| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(&format!("{path}[{i}]"), format!("`{t}` is not a number")))
            })
            .collect(),
        Yaml::Array(a) => a
            .iter()
            .enumerate()
            .map(|(i, v)| as_f64(v, &format!("{path}[{i}]")))
            .collect(),
        other => Err(err(path, format!("expected a list of numbers, found {}", kind_name(other)))),
    }
}

fn split_items(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

/// A binary map: comma-separated 0/1 text, a sequence of 0/1 or booleans,
/// or a single 0/1.
fn parse_map(y: &Yaml, path: &str) -> Result<Vec<bool>, ConfigError> {
    let bit = |t: &str, i: usize| match t {
        "1" => Ok(true),
        "0" => Ok(false),
        _ => Err(err(&format!("{path}[{i}]"), format!("map entries must be 0 or 1, found `{t}`"))),
    };
    match y {
        Yaml::String(s) => split_items(s).enumerate().map(|(i, t)| bit(t, i)).collect(),
        Yaml::Integer(i) => bit(&i.to_string(), 0).map(|b| vec![b]),
        Yaml::Array(a) => a
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Yaml::Boolean(b) => Ok(*b),
                Yaml::Integer(x) => bit(&x.to_string(), i),
                other => Err(err(
                    &format!("{path}[{i}]"),
                    format!("map entries must be 0 or 1, found {}", kind_name(other)),
                )),
            })
            .collect(),
        other => Err(err(path, format!("expected a map, found {}", kind_name(other)))),
    }
}

// ---------------------------------------------------------------------------
// Parsing

const OPTIMIZATION_KEYS: &[&str] = &[
    "methodology",
    "population_size",
    "number_of_generations",
    "reproducer",
    "crossover_positions",
    "mutation",
    "fixed_problem",
    "fixed_groups",
    "selection",
    "objectives",
    "initial_temperature",
    "cooling_rate",
    "number_of_steps",
];
const GA_ONLY: &[&str] = &[
    "population_size",
    "number_of_generations",
    "reproducer",
    "crossover_positions",
    "selection",
];
const SA_ONLY: &[&str] = &["initial_temperature", "cooling_rate", "number_of_steps"];
const DECISION_LEGACY: &[&str] = &["type", "serial", "name"];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let docs = YamlLoader::load_from_str(text).map_err(|e| err("", format!("invalid YAML: {e}")))?;
    let root = docs
        .first()
        .ok_or_else(|| err("", "empty document"))?;
    let root = Node { y: root, path: "" };
    root.check_keys(&["optimization", "genome", "evaluator", "run"], &[])?;

    let opt_y = root.get("optimization").ok_or_else(|| err("optimization", "missing block"))?;
    let opt = Node { y: opt_y, path: "optimization" };
    opt.check_keys(OPTIMIZATION_KEYS, &["data_type"])?;

    let methodology_text = as_text(
        opt.get("methodology").ok_or_else(|| err("optimization.methodology", "missing"))?,
        "optimization.methodology",
    )?;
    let methodology = Methodology::from_keyword(&methodology_text).ok_or_else(|| {
        err(
            "optimization.methodology",
            format!("unknown methodology `{methodology_text}` (expected genetic_algorithm or simulated_annealing)"),
        )
    })?;
    let ignored: &[&str] = match methodology {
        Methodology::GeneticAlgorithm => SA_ONLY,
        Methodology::SimulatedAnnealing => GA_ONLY,
    };
    for key in ignored {
        if opt.get(key).is_some() {
            log::info!(
                "ignoring optimization.{key}: not used by {}",
                methodology.keyword()
            );
        }
    }

    let (groups, group_constrained) = parse_groups(opt)?;
    let objectives = parse_objectives(opt)?;
    let genome_y = root.get("genome").ok_or_else(|| err("genome", "missing block"))?;
    let genome = parse_genome(Node { y: genome_y, path: "genome" }, &groups, group_constrained)?;
    let evaluator = match root.get("evaluator") {
        Some(y) => parse_evaluator(Node { y, path: "evaluator" })?,
        None => EvaluatorSpec::unspecified(),
    };

    let problem = ProblemDefinition {
        n_variables: genome.n,
        decisions: genome.decisions,
        groups,
        maps: DecisionMap::new(genome.maps),
        objectives,
        group_constrained,
        fixed_positions: genome.fixed_positions,
        evaluator,
    };
    if let Some(v) = problem.validate().into_iter().next() {
        return Err(err(violation_path(&v), v.to_string()));
    }

    let (variants, common_chromosomes) = parse_mutation(opt, &problem, methodology)?;
    let algorithm = match methodology {
        Methodology::GeneticAlgorithm => Algorithm::Ga(parse_ga(opt, variants, group_constrained)?),
        Methodology::SimulatedAnnealing => Algorithm::Sa(parse_sa(opt, variants)?),
    };
    let settings = match root.get("run") {
        Some(y) => parse_run(Node { y, path: "run" })?,
        None => RunSettings::default(),
    };
    Ok(RunConfig {
        methodology,
        algorithm,
        problem,
        common_chromosomes,
        settings,
    })
}

fn violation_path(v: &Violation) -> &'static str {
    match v {
        Violation::CapacitySum { .. }
        | Violation::GroupUnreachable { .. }
        | Violation::UniqueShortfall { .. }
        | Violation::PinnedOverCapacity { .. } => "optimization.fixed_groups",
        Violation::NonPositiveWeight { .. } | Violation::DuplicateObjective { .. } | Violation::NoObjectives => {
            "optimization.objectives"
        }
        Violation::Evaluator(_) => "evaluator.params",
        Violation::PinnedOutOfRange { .. }
        | Violation::PinnedUnknownDecision { .. }
        | Violation::PinnedUniqueRepeated { .. } => "genome.fixed_positions",
        _ => "genome",
    }
}

fn parse_groups(opt: Node) -> Result<(Vec<DecisionGroup>, bool), ConfigError> {
    let groups = match opt.get("fixed_groups") {
        Some(y) => {
            let node = Node { y, path: "optimization.fixed_groups" };
            node.entries()?
                .into_iter()
                .map(|(k, v)| {
                    as_usize(v, &join(node.path, &k)).map(|c| DecisionGroup::new(k, c))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        None => Vec::new(),
    };
    let constrained = match opt.get("fixed_problem") {
        Some(y) => as_bool(y, "optimization.fixed_problem")?,
        None => !groups.is_empty(),
    };
    if constrained && groups.is_empty() {
        return Err(err(
            "optimization.fixed_groups",
            "fixed_problem is true but no groups are defined",
        ));
    }
    if !constrained && !groups.is_empty() {
        return Err(err(
            "optimization.fixed_groups",
            "groups are defined but fixed_problem is false",
        ));
    }
    let mut seen = HashSet::new();
    for g in &groups {
        if !seen.insert(g.id.clone()) {
            return Err(err("optimization.fixed_groups", format!("group {} is defined twice", g.id)));
        }
    }
    Ok((groups, constrained))
}

fn parse_goal(node: Node, goal_path: &str) -> Result<Goal, ConfigError> {
    let y = node.get("goal").ok_or_else(|| err(goal_path, "missing"))?;
    let keyword = as_text(y, goal_path)?;
    let target_path = join(node.path, "target");
    let target = || -> Result<f64, ConfigError> {
        let y = node
            .get("target")
            .ok_or_else(|| err(&target_path, format!("goal {keyword} needs a target")))?;
        as_f64(y, &target_path)
    };
    match keyword.as_str() {
        "maximize" | "minimize" => {
            if node.get("target").is_some() {
                log::info!("ignoring {target_path}: goal {keyword} has no target");
            }
            Ok(if keyword == "maximize" { Goal::Maximize } else { Goal::Minimize })
        }
        "less_than_target" => Ok(Goal::LessThanTarget(target()?)),
        "greater_than_target" => Ok(Goal::GreaterThanTarget(target()?)),
        other => Err(err(
            goal_path,
            format!(
                "unknown goal `{other}` (expected maximize, minimize, less_than_target or greater_than_target)"
            ),
        )),
    }
}

fn parse_objectives(opt: Node) -> Result<Vec<ObjectiveSpec>, ConfigError> {
    let y = opt
        .get("objectives")
        .ok_or_else(|| err("optimization.objectives", "missing"))?;
    let node = Node { y, path: "optimization.objectives" };
    let mut out = Vec::new();
    for (name, v) in node.entries()? {
        let path = join(node.path, &name);
        let obj = Node { y: v, path: &path };
        obj.check_keys(&["goal", "target", "weight"], &[])?;
        let goal = parse_goal(obj, &join(&path, "goal"))?;
        let weight_path = join(&path, "weight");
        let weight = as_f64(
            obj.get("weight").ok_or_else(|| err(&weight_path, "missing"))?,
            &weight_path,
        )?;
        if weight <= 0.0 {
            return Err(err(&weight_path, "weight must be positive"));
        }
        out.push(ObjectiveSpec::new(name, goal, weight));
    }
    Ok(out)
}

struct Genome {
    n: usize,
    decisions: Vec<Decision>,
    maps: Vec<Vec<bool>>,
    fixed_positions: BTreeMap<usize, usize>,
}

fn parse_genome(node: Node, groups: &[DecisionGroup], constrained: bool) -> Result<Genome, ConfigError> {
    node.check_keys(
        &["positions", "fixed_positions", "chromosomes", "symmetry_list"],
        &["assembly_data"],
    )?;
    if let Some(y) = node.get("symmetry_list") {
        check_symmetry(y, "genome.symmetry_list")?;
    }
    let chrom_y = node
        .get("chromosomes")
        .ok_or_else(|| err("genome.chromosomes", "missing"))?;
    let chrom = Node { y: chrom_y, path: "genome.chromosomes" };

    let mut decisions = Vec::new();
    let mut raw_maps: Vec<(String, Option<Vec<bool>>)> = Vec::new();
    let mut ignored_group = false;
    for (id, v) in chrom.entries()? {
        let path = join(chrom.path, &id);
        if id == "symmetry_list" {
            check_symmetry(v, &path)?;
            continue;
        }
        let d = Node { y: v, path: &path };
        d.check_keys(&["gene_group", "unique", "map", "attributes"], DECISION_LEGACY)?;
        let mut decision = Decision::new(id.as_str());
        if let Some(u) = d.get("unique") {
            decision.unique = as_bool(u, &join(&path, "unique"))?;
        }
        let group_path = join(&path, "gene_group");
        match d.get("gene_group") {
            Some(g) if constrained => {
                let name = as_text(g, &group_path)?;
                let idx = groups
                    .iter()
                    .position(|x| x.id == name)
                    .ok_or_else(|| err(&group_path, format!("group `{name}` is not listed in optimization.fixed_groups")))?;
                decision.group = Some(idx);
            }
            Some(_) => ignored_group = true,
            None if constrained => return Err(err(&group_path, "missing (fixed_problem is true)")),
            None => {}
        }
        if let Some(a) = d.get("attributes") {
            let apath = join(&path, "attributes");
            for (name, val) in (Node { y: a, path: &apath }).entries()? {
                let value = as_f64(val, &join(&apath, &name))?;
                decision.attributes.insert(name, value);
            }
        }
        let map = match d.get("map") {
            Some(m) => Some(parse_map(m, &join(&path, "map"))?),
            None => None,
        };
        raw_maps.push((path.clone(), map));
        decisions.push(decision);
    }
    if ignored_group {
        log::info!("ignoring gene_group entries: fixed_problem is false");
    }
    if decisions.is_empty() {
        return Err(err("genome.chromosomes", "no decisions defined"));
    }

    let n = match node.get("positions") {
        Some(y) => as_usize(y, "genome.positions")?,
        None => raw_maps
            .iter()
            .find_map(|(_, m)| m.as_ref().map(|m| m.len()))
            .ok_or_else(|| err("genome.positions", "missing and no decision has a map"))?,
    };
    if n == 0 {
        return Err(err("genome.positions", "must be positive"));
    }
    let mut maps = Vec::with_capacity(raw_maps.len());
    for (path, m) in raw_maps {
        match m {
            Some(m) if m.len() != n => {
                return Err(err(
                    &join(&path, "map"),
                    format!("map has {} entries, expected {n}", m.len()),
                ))
            }
            Some(m) => maps.push(m),
            None => maps.push(vec![true; n]),
        }
    }

    let mut fixed_positions = BTreeMap::new();
    if let Some(y) = node.get("fixed_positions") {
        let fp = Node { y, path: "genome.fixed_positions" };
        for (k, v) in fp.entries()? {
            let path = join(fp.path, &k);
            let pos: usize = k
                .parse()
                .map_err(|_| err(&path, "position must be a non-negative integer index"))?;
            if pos >= n {
                return Err(err(&path, format!("position out of range (N = {n})")));
            }
            let id = as_text(v, &path)?;
            let d = decisions
                .iter()
                .position(|x| x.id.as_str() == id)
                .ok_or_else(|| err(&path, format!("unknown decision `{id}`")))?;
            fixed_positions.insert(pos, d);
        }
    }
    Ok(Genome {
        n,
        decisions,
        maps,
        fixed_positions,
    })
}

fn check_symmetry(y: &Yaml, path: &str) -> Result<(), ConfigError> {
    match y {
        Yaml::Array(a) if a.is_empty() => Ok(()),
        Yaml::Null => Ok(()),
        _ => Err(err(path, "symmetry constraints are not supported; the list must be empty")),
    }
}

fn parse_mutation(
    opt: Node,
    def: &ProblemDefinition,
    methodology: Methodology,
) -> Result<(Vec<MutationVariant>, Vec<(String, Vec<DecisionId>)>), ConfigError> {
    let y = opt
        .get("mutation")
        .ok_or_else(|| err("optimization.mutation", "missing"))?;
    let node = Node { y, path: "optimization.mutation" };
    node.check_keys(&["method", "common chromosomes", "initial_rate", "final_rate"], &[])?;
    if methodology == Methodology::SimulatedAnnealing {
        for key in ["initial_rate", "final_rate"] {
            if node.get(key).is_some() {
                log::info!("ignoring optimization.mutation.{key}: not used by simulated_annealing");
            }
        }
    }
    let method_path = "optimization.mutation.method";
    let method = node.get("method").ok_or_else(|| err(method_path, "missing"))?;
    let mut variants = Vec::new();
    for (i, m) in as_list(method).into_iter().enumerate() {
        let path = format!("{method_path}[{i}]");
        let text = as_text(m, &path)?;
        let v = MutationVariant::from_keyword(&text).ok_or_else(|| {
            err(
                &path,
                format!("unknown mutation method `{text}` (expected free_replace, swap_position or within_group_replace)"),
            )
        })?;
        if !variants.contains(&v) {
            variants.push(v);
        }
    }
    if variants.is_empty() {
        return Err(err(method_path, "at least one method is required"));
    }

    let mut common = Vec::new();
    if let Some(y) = node.get("common chromosomes") {
        let cpath = "optimization.mutation.common chromosomes";
        for (k, v) in (Node { y, path: cpath }).entries()? {
            let path = join(cpath, &k);
            let ids = as_list(v)
                .into_iter()
                .map(|x| {
                    let id = as_text(x, &path)?;
                    def.decision_index(&DecisionId::new(id.as_str()))
                        .ok_or_else(|| err(&path, format!("unknown decision `{id}`")))?;
                    Ok(DecisionId::new(id))
                })
                .collect::<Result<Vec<_>, ConfigError>>()?;
            common.push((k, ids));
        }
    }
    Ok((variants, common))
}

fn required<'a>(opt: Node<'a>, key: &str) -> Result<(&'a Yaml, String), ConfigError> {
    let path = join(opt.path, key);
    let y = opt.get(key).ok_or_else(|| err(&path, "missing"))?;
    Ok((y, path))
}

fn parse_ga(opt: Node, variants: Vec<MutationVariant>, constrained: bool) -> Result<GaConfig, ConfigError> {
    let (y, p) = required(opt, "population_size")?;
    let population_size = as_usize(y, &p)?;
    let (y, p) = required(opt, "number_of_generations")?;
    let n_generations = as_usize(y, &p)?;
    let mutation = Node {
        y: opt.get("mutation").expect("checked"),
        path: "optimization.mutation",
    };
    let (y, p) = required(mutation, "initial_rate")?;
    let r_initial = as_f64(y, &p)?;
    let (y, p) = required(mutation, "final_rate")?;
    let r_final = as_f64(y, &p)?;
    let crossover = match opt.get("reproducer") {
        Some(y) => {
            let text = as_text(y, "optimization.reproducer")?;
            CrossoverVariant::from_keyword(&text).ok_or_else(|| {
                err(
                    "optimization.reproducer",
                    format!("unknown reproducer `{text}` (expected grouped, unique genes or free)"),
                )
            })?
        }
        None if constrained => CrossoverVariant::Grouped,
        None => CrossoverVariant::Free,
    };
    let crossover_positions = match opt.get("crossover_positions") {
        Some(y) => Some(as_usize(y, "optimization.crossover_positions")?),
        None => None,
    };
    if let Some(y) = opt.get("selection") {
        let sel = Node { y, path: "optimization.selection" };
        sel.check_keys(&["fitness", "method"], &[])?;
        if let Some(f) = sel.get("fitness") {
            let t = as_text(f, "optimization.selection.fitness")?;
            if t != "weighted" {
                return Err(err("optimization.selection.fitness", format!("unsupported fitness `{t}` (expected weighted)")));
            }
        }
        if let Some(m) = sel.get("method") {
            let t = as_text(m, "optimization.selection.method")?;
            if t != "tournament" {
                return Err(err("optimization.selection.method", format!("unsupported selection `{t}` (expected tournament)")));
            }
        }
    }
    let cfg = GaConfig {
        population_size,
        n_generations,
        r_initial,
        r_final,
        crossover,
        crossover_positions,
        mutation_variants: variants,
    };
    cfg.check().map_err(|e| err("optimization", e.0))?;
    Ok(cfg)
}

fn parse_sa(opt: Node, variants: Vec<MutationVariant>) -> Result<SaConfig, ConfigError> {
    let (y, p) = required(opt, "initial_temperature")?;
    let t_initial = as_f64(y, &p)?;
    let (y, p) = required(opt, "cooling_rate")?;
    let alpha = as_f64(y, &p)?;
    let (y, p) = required(opt, "number_of_steps")?;
    let n_steps = as_usize(y, &p)?;
    let cfg = SaConfig {
        t_initial,
        alpha,
        n_steps,
        perturbation_variants: variants,
    };
    cfg.check().map_err(|e| err("optimization", e.0))?;
    Ok(cfg)
}

fn parse_run(node: Node) -> Result<RunSettings, ConfigError> {
    node.check_keys(&["seed", "threads"], &[])?;
    let seed = match node.get("seed") {
        Some(y) => Some(as_u64(y, "run.seed")?),
        None => None,
    };
    let threads = match node.get("threads") {
        Some(y) => {
            let t = as_usize(y, "run.threads")?;
            if t == 0 {
                return Err(err("run.threads", "must be positive"));
            }
            Some(t)
        }
        None => None,
    };
    Ok(RunSettings { seed, threads })
}

fn get_f64(node: Node, key: &str) -> Result<f64, ConfigError> {
    let (y, p) = required(node, key)?;
    as_f64(y, &p)
}

fn get_list(node: Node, key: &str) -> Result<Vec<f64>, ConfigError> {
    let (y, p) = required(node, key)?;
    number_list(y, &p)
}

fn parse_evaluator(node: Node) -> Result<EvaluatorSpec, ConfigError> {
    node.check_keys(&["kind", "params", "rename"], &[])?;
    let (y, p) = required(node, "kind")?;
    let kind = as_text(y, &p)?;
    let empty = Yaml::Hash(Hash::new());
    let params = Node {
        y: node.get("params").unwrap_or(&empty),
        path: "evaluator.params",
    };
    params.hash()?;
    let kind = match kind.as_str() {
        "tsp" => {
            params.check_keys(&["cities"], &[])?;
            let (y, p) = required(params, "cities")?;
            let cities = (Node { y, path: &p })
                .entries()?
                .into_iter()
                .map(|(id, v)| {
                    let cp = join(&p, &id);
                    let xy = number_list(v, &cp)?;
                    match xy.as_slice() {
                        [x, y] => Ok((DecisionId::new(id), [*x, *y])),
                        _ => Err(err(&cp, "expected [x, y]")),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            EvaluatorKind::Tsp(TspSpec { cities })
        }
        "lattice_surrogate" => {
            params.check_keys(
                &["k0", "enrichment_coefficient", "poison_coefficient", "depletion_offset", "adjacency_coefficient", "adjacency"],
                &[],
            )?;
            EvaluatorKind::LatticeSurrogate(LatticeSpec {
                k0: get_f64(params, "k0")?,
                enrichment_coefficient: get_f64(params, "enrichment_coefficient")?,
                poison_coefficient: get_f64(params, "poison_coefficient")?,
                depletion_offset: get_f64(params, "depletion_offset")?,
                adjacency_coefficient: get_f64(params, "adjacency_coefficient")?,
                adjacency: get_list(params, "adjacency")?,
            })
        }
        "loading_surrogate" => {
            params.check_keys(
                &["importance", "peaking", "cycle_length_scale", "boron_scale", "fq_scale"],
                &[],
            )?;
            EvaluatorKind::LoadingSurrogate(LoadingSpec {
                importance: get_list(params, "importance")?,
                peaking: get_list(params, "peaking")?,
                cycle_length_scale: get_f64(params, "cycle_length_scale")?,
                boron_scale: get_f64(params, "boron_scale")?,
                fq_scale: get_f64(params, "fq_scale")?,
            })
        }
        "external_command" => {
            params.check_keys(&["command", "workdir", "timeout"], &[])?;
            let (y, p) = required(params, "command")?;
            let command = match y {
                Yaml::String(s) => vec![s.clone()],
                Yaml::Array(a) => a
                    .iter()
                    .enumerate()
                    .map(|(i, v)| as_text(v, &format!("{p}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?,
                other => return Err(err(&p, format!("expected a program and arguments, found {}", kind_name(other)))),
            };
            if command.is_empty() || command[0].is_empty() {
                return Err(err(&p, "command must name a program"));
            }
            let workdir = match params.get("workdir") {
                Some(y) => Some(PathBuf::from(as_text(y, "evaluator.params.workdir")?)),
                None => None,
            };
            let timeout_secs = match params.get("timeout") {
                Some(y) => as_f64(y, "evaluator.params.timeout")?,
                None => DEFAULT_TIMEOUT_SECS,
            };
            if timeout_secs <= 0.0 {
                return Err(err("evaluator.params.timeout", "must be positive"));
            }
            EvaluatorKind::ExternalCommand(ExternalSpec {
                command,
                workdir,
                timeout_secs,
            })
        }
        other => {
            return Err(err(
                "evaluator.kind",
                format!("unknown evaluator `{other}` (expected tsp, lattice_surrogate, loading_surrogate or external_command)"),
            ))
        }
    };
    let mut spec = EvaluatorSpec::new(kind);
    if let Some(y) = node.get("rename") {
        for (from, to) in (Node { y, path: "evaluator.rename" }).entries()? {
            let to = as_text(to, &join("evaluator.rename", &from))?;
            spec = spec.renamed(&from, &to);
        }
    }
    Ok(spec)
}

// ---------------------------------------------------------------------------
// Canonical serialization

fn key(s: &str) -> Yaml {
    Yaml::String(s.to_string())
}

fn real(v: f64) -> Yaml {
    Yaml::Real(format!("{v:?}"))
}

fn int(v: usize) -> Yaml {
    Yaml::Integer(v as i64)
}

fn list_text<T: ToString>(xs: &[T]) -> Yaml {
    Yaml::String(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn reals(xs: &[f64]) -> Yaml {
    Yaml::Array(xs.iter().map(|&x| real(x)).collect())
}

fn hash(entries: Vec<(Yaml, Yaml)>) -> Yaml {
    Yaml::Hash(entries.into_iter().collect())
}

impl RunConfig {
    fn optimization_yaml(&self) -> Yaml {
        let def = &self.problem;
        let mut opt = vec![(key("methodology"), key(self.methodology.keyword()))];
        let methods = Yaml::Array(
            self.variants().iter().map(|v| key(v.keyword())).collect(),
        );
        let mut mutation = vec![(key("method"), methods)];
        if !self.common_chromosomes.is_empty() {
            let common = self
                .common_chromosomes
                .iter()
                .map(|(k, ids)| {
                    (key(k), Yaml::Array(ids.iter().map(|i| key(i.as_str())).collect()))
                })
                .collect();
            mutation.push((key("common chromosomes"), hash(common)));
        }
        match &self.algorithm {
            Algorithm::Ga(ga) => {
                opt.push((key("population_size"), int(ga.population_size)));
                opt.push((key("number_of_generations"), int(ga.n_generations)));
                opt.push((key("reproducer"), key(ga.crossover.keyword())));
                if let Some(k) = ga.crossover_positions {
                    opt.push((key("crossover_positions"), int(k)));
                }
                mutation.push((key("initial_rate"), real(ga.r_initial)));
                mutation.push((key("final_rate"), real(ga.r_final)));
                opt.push((key("mutation"), hash(mutation)));
                opt.push((
                    key("selection"),
                    hash(vec![
                        (key("fitness"), key("weighted")),
                        (key("method"), key("tournament")),
                    ]),
                ));
            }
            Algorithm::Sa(sa) => {
                opt.push((key("mutation"), hash(mutation)));
                opt.push((key("initial_temperature"), real(sa.t_initial)));
                opt.push((key("cooling_rate"), real(sa.alpha)));
                opt.push((key("number_of_steps"), int(sa.n_steps)));
            }
        }
        opt.push((key("fixed_problem"), Yaml::Boolean(def.group_constrained)));
        if def.group_constrained {
            let groups = def.groups.iter().map(|g| (key(&g.id), int(g.capacity))).collect();
            opt.push((key("fixed_groups"), hash(groups)));
        }
        let objectives = def
            .objectives
            .iter()
            .map(|o| {
                let mut e = vec![(key("goal"), key(o.goal.keyword()))];
                if let Some(t) = o.goal.target() {
                    e.push((key("target"), real(t)));
                }
                e.push((key("weight"), real(o.weight)));
                (key(&o.name), hash(e))
            })
            .collect();
        opt.push((key("objectives"), hash(objectives)));
        hash(opt)
    }

    fn genome_yaml(&self) -> Yaml {
        let def = &self.problem;
        let mut genome = vec![(key("positions"), int(def.n_variables))];
        if !def.fixed_positions.is_empty() {
            let fp = def
                .fixed_positions
                .iter()
                .map(|(&p, &d)| (int(p), key(def.decisions[d].id.as_str())))
                .collect();
            genome.push((key("fixed_positions"), hash(fp)));
        }
        let chromosomes = def
            .decisions
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut e = Vec::new();
                if let Some(g) = d.group {
                    e.push((key("gene_group"), key(&def.groups[g].id)));
                }
                e.push((key("unique"), Yaml::Boolean(d.unique)));
                let bits: Vec<u8> = def.maps.row(i).iter().map(|&b| b as u8).collect();
                e.push((key("map"), list_text(&bits)));
                if !d.attributes.is_empty() {
                    let attrs = d.attributes.iter().map(|(k, &v)| (key(k), real(v))).collect();
                    e.push((key("attributes"), hash(attrs)));
                }
                (key(d.id.as_str()), hash(e))
            })
            .collect();
        genome.push((key("chromosomes"), hash(chromosomes)));
        hash(genome)
    }

    fn evaluator_yaml(&self) -> Option<Yaml> {
        let spec = &self.problem.evaluator;
        let params = match &spec.kind {
            EvaluatorKind::Unspecified => return None,
            EvaluatorKind::Tsp(t) => vec![(
                key("cities"),
                hash(
                    t.cities
                        .iter()
                        .map(|(id, xy)| (key(id.as_str()), reals(xy)))
                        .collect(),
                ),
            )],
            EvaluatorKind::LatticeSurrogate(l) => vec![
                (key("k0"), real(l.k0)),
                (key("enrichment_coefficient"), real(l.enrichment_coefficient)),
                (key("poison_coefficient"), real(l.poison_coefficient)),
                (key("depletion_offset"), real(l.depletion_offset)),
                (key("adjacency_coefficient"), real(l.adjacency_coefficient)),
                (key("adjacency"), reals(&l.adjacency)),
            ],
            EvaluatorKind::LoadingSurrogate(l) => vec![
                (key("importance"), reals(&l.importance)),
                (key("peaking"), reals(&l.peaking)),
                (key("cycle_length_scale"), real(l.cycle_length_scale)),
                (key("boron_scale"), real(l.boron_scale)),
                (key("fq_scale"), real(l.fq_scale)),
            ],
            EvaluatorKind::ExternalCommand(e) => {
                let mut p = vec![(
                    key("command"),
                    Yaml::Array(e.command.iter().map(|c| key(c)).collect()),
                )];
                if let Some(w) = &e.workdir {
                    p.push((key("workdir"), key(&w.to_string_lossy())));
                }
                p.push((key("timeout"), real(e.timeout_secs)));
                p
            }
        };
        let mut out = vec![
            (key("kind"), key(spec.kind.keyword())),
            (key("params"), hash(params)),
        ];
        if !spec.rename.is_empty() {
            let r = spec.rename.iter().map(|(a, b)| (key(a), key(b))).collect();
            out.push((key("rename"), hash(r)));
        }
        Some(hash(out))
    }

    fn document(&self, with_run: bool) -> Yaml {
        let mut top = vec![
            (key("optimization"), self.optimization_yaml()),
            (key("genome"), self.genome_yaml()),
        ];
        if let Some(e) = self.evaluator_yaml() {
            top.push((key("evaluator"), e));
        }
        if with_run && self.settings != RunSettings::default() {
            let mut run = Vec::new();
            if let Some(s) = self.settings.seed {
                run.push((key("seed"), Yaml::Integer(s as i64)));
            }
            if let Some(t) = self.settings.threads {
                run.push((key("threads"), int(t)));
            }
            top.push((key("run"), hash(run)));
        }
        hash(top)
    }

    fn emit(doc: &Yaml) -> String {
        let mut out = String::new();
        YamlEmitter::new(&mut out).dump(doc).expect("emitting to a String cannot fail");
        out.push('\n');
        out
    }

    /// Canonical YAML for this configuration; parses back to an equal value.
    pub fn to_yaml(&self) -> String {
        Self::emit(&self.document(true))
    }

    /// SHA-256 (hex) of the canonical serialization without the `run` block,
    /// so seed and thread overrides do not change it.
    pub fn digest(&self) -> String {
        let text = Self::emit(&self.document(false));
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }

    /// Mutation operators of whichever algorithm is configured.
    pub fn variants(&self) -> &[MutationVariant] {
        match &self.algorithm {
            Algorithm::Ga(g) => &g.mutation_variants,
            Algorithm::Sa(s) => &s.perturbation_variants,
        }
    }
}
