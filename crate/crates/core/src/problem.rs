//! Problem formalism: decision variables (positions), decisions, decision
//! groups, binary decision maps and objective specifications.
//!
//! A solution assigns one decision to each of the `N` positions. Decisions are
//! referenced by their index into [`ProblemDefinition::decisions`]; the textual
//! [`DecisionId`] is what appears in configuration files and reports.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::ConfigError;
use crate::evaluators::EvaluatorSpec;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecisionId(String);

impl DecisionId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DecisionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for DecisionId {
    fn from(s: &str) -> Self {
        Self(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub id: DecisionId,
    /// Index into [`ProblemDefinition::groups`].
    pub group: Option<usize>,
    /// A unique decision may appear at most once per solution.
    pub unique: bool,
    /// Free-form metadata read by evaluators (enrichment, poison worth, ...).
    pub attributes: BTreeMap<String, f64>,
}

impl Decision {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: DecisionId::new(id),
            group: None,
            unique: false,
            attributes: BTreeMap::new(),
        }
    }

    pub fn in_group(mut self, group: usize) -> Self {
        self.group = Some(group);
        self
    }

    pub fn unique(mut self, unique: bool) -> Self {
        self.unique = unique;
        self
    }

    pub fn with_attribute(mut self, name: &str, value: f64) -> Self {
        self.attributes.insert(name.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionGroup {
    pub id: String,
    pub capacity: usize,
}

impl DecisionGroup {
    pub fn new(id: impl Into<String>, capacity: usize) -> Self {
        Self {
            id: id.into(),
            capacity,
        }
    }
}

/// Per-decision boolean masks over positions; `rows[d][i]` is true when
/// decision `d` may be placed at position `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMap {
    rows: Vec<Vec<bool>>,
}

impl DecisionMap {
    pub fn new(rows: Vec<Vec<bool>>) -> Self {
        Self { rows }
    }

    /// Every decision allowed everywhere.
    pub fn permissive(n_decisions: usize, n_positions: usize) -> Self {
        Self {
            rows: vec![vec![true; n_positions]; n_decisions],
        }
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn row(&self, decision: usize) -> &[bool] {
        &self.rows[decision]
    }

    pub fn set(&mut self, decision: usize, position: usize, allowed: bool) {
        self.rows[decision][position] = allowed;
    }

    /// Checked lookup of a single map entry.
    pub fn allowed(&self, decision: usize, position: usize) -> Result<bool, ConfigError> {
        let row = self.rows.get(decision).ok_or_else(|| {
            ConfigError::new("map", format!("unknown decision index {decision}"))
        })?;
        row.get(position).copied().ok_or_else(|| {
            ConfigError::new(
                "map",
                format!("position {position} out of range (N = {})", row.len()),
            )
        })
    }

    #[inline]
    pub(crate) fn get(&self, decision: usize, position: usize) -> bool {
        self.rows[decision][position]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Goal {
    Maximize,
    Minimize,
    LessThanTarget(f64),
    GreaterThanTarget(f64),
}

impl Goal {
    pub fn keyword(&self) -> &'static str {
        match self {
            Goal::Maximize => "maximize",
            Goal::Minimize => "minimize",
            Goal::LessThanTarget(_) => "less_than_target",
            Goal::GreaterThanTarget(_) => "greater_than_target",
        }
    }

    pub fn target(&self) -> Option<f64> {
        match *self {
            Goal::LessThanTarget(t) | Goal::GreaterThanTarget(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub name: String,
    pub goal: Goal,
    pub weight: f64,
}

impl ObjectiveSpec {
    pub fn new(name: impl Into<String>, goal: Goal, weight: f64) -> Self {
        Self {
            name: name.into(),
            goal,
            weight,
        }
    }
}

/// Named objective values produced by an evaluator.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvaluationResult {
    pub values: BTreeMap<String, f64>,
}

impl EvaluationResult {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }
}

impl FromIterator<(String, f64)> for EvaluationResult {
    fn from_iter<T: IntoIterator<Item = (String, f64)>>(iter: T) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Decision index per position.
    pub assignment: Vec<usize>,
    pub evaluation: Option<EvaluationResult>,
    pub fitness: Option<f64>,
}

impl Solution {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self {
            assignment,
            evaluation: None,
            fitness: None,
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Drops cached evaluation data, e.g. after a variation operator.
    pub fn unevaluated(mut self) -> Self {
        self.evaluation = None;
        self.fitness = None;
        self
    }

    pub fn decision_ids<'a>(&'a self, def: &'a ProblemDefinition) -> Vec<&'a DecisionId> {
        self.assignment
            .iter()
            .map(|&d| &def.decisions[d].id)
            .collect()
    }
}

/// The full engineering design problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDefinition {
    pub n_variables: usize,
    pub decisions: Vec<Decision>,
    pub groups: Vec<DecisionGroup>,
    pub maps: DecisionMap,
    pub objectives: Vec<ObjectiveSpec>,
    pub group_constrained: bool,
    /// Positions pre-assigned to a fixed decision (position -> decision index).
    /// Pinned positions bypass the map and are never touched by operators.
    pub fixed_positions: BTreeMap<usize, usize>,
    pub evaluator: EvaluatorSpec,
}

/// A broken [`ProblemDefinition`] invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoPositions,
    EmptyDecisionId { decision: usize },
    DuplicateDecision { id: DecisionId },
    MapLength { decision: DecisionId, len: usize, n: usize },
    MapCount { maps: usize, decisions: usize },
    EmptyAllowedSet { position: usize },
    UnknownGroup { decision: DecisionId },
    UngroupedDecision { decision: DecisionId },
    CapacitySum { sum: usize, n: usize },
    GroupUnreachable { group: String, reachable: usize, capacity: usize },
    UniqueShortfall { group: String, unique: usize, capacity: usize },
    PinnedOutOfRange { position: usize },
    PinnedUnknownDecision { position: usize },
    PinnedUniqueRepeated { decision: DecisionId },
    PinnedOverCapacity { group: String },
    NonPositiveWeight { objective: String },
    DuplicateObjective { objective: String },
    NoObjectives,
    Evaluator(String),
}

fn position_label(p: usize) -> String {
    format!("X{} (index {p})", p + 1)
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPositions => write!(f, "problem has no decision variables"),
            Violation::EmptyDecisionId { decision } => {
                write!(f, "decision #{decision} has an empty id")
            }
            Violation::DuplicateDecision { id } => write!(f, "decision {id} is defined twice"),
            Violation::MapLength { decision, len, n } => {
                write!(f, "map of decision {decision} has length {len}, expected {n}")
            }
            Violation::MapCount { maps, decisions } => {
                write!(f, "{maps} maps for {decisions} decisions")
            }
            Violation::EmptyAllowedSet { position } => write!(
                f,
                "position {} has empty allowed set",
                position_label(*position)
            ),
            Violation::UnknownGroup { decision } => {
                write!(f, "decision {decision} refers to an unknown group")
            }
            Violation::UngroupedDecision { decision } => write!(
                f,
                "decision {decision} has no group in a group-constrained problem"
            ),
            Violation::CapacitySum { sum, n } => write!(
                f,
                "capacities do not cover all positions: capacities sum to {sum}, N = {n}"
            ),
            Violation::GroupUnreachable {
                group,
                reachable,
                capacity,
            } => write!(
                f,
                "group {group} can reach only {reachable} positions but has capacity {capacity}"
            ),
            Violation::UniqueShortfall {
                group,
                unique,
                capacity,
            } => write!(
                f,
                "group {group} has only {unique} unique decisions for capacity {capacity}"
            ),
            Violation::PinnedOutOfRange { position } => {
                write!(f, "pinned position {position} is out of range")
            }
            Violation::PinnedUnknownDecision { position } => write!(
                f,
                "position {} is pinned to an unknown decision",
                position_label(*position)
            ),
            Violation::PinnedUniqueRepeated { decision } => {
                write!(f, "unique decision {decision} is pinned more than once")
            }
            Violation::PinnedOverCapacity { group } => {
                write!(f, "pinned decisions exceed the capacity of group {group}")
            }
            Violation::NonPositiveWeight { objective } => {
                write!(f, "objective {objective} must have a positive weight")
            }
            Violation::DuplicateObjective { objective } => {
                write!(f, "objective {objective} is defined twice")
            }
            Violation::NoObjectives => write!(f, "no objectives defined"),
            Violation::Evaluator(msg) => write!(f, "evaluator: {msg}"),
        }
    }
}

/// How a solution breaks feasibility.
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionViolation {
    Length { len: usize, n: usize },
    UnknownDecision { position: usize },
    MapDisallowed { position: usize, decision: usize },
    PinnedChanged { position: usize },
    UniqueRepeated { decision: usize, count: usize },
    GroupCount { group: usize, count: usize, capacity: usize },
    Ungrouped { position: usize },
}

impl ProblemDefinition {
    pub fn n_decisions(&self) -> usize {
        self.decisions.len()
    }

    pub fn decision_index(&self, id: &DecisionId) -> Option<usize> {
        self.decisions.iter().position(|d| &d.id == id)
    }

    pub fn group_index(&self, id: &str) -> Option<usize> {
        self.groups.iter().position(|g| g.id == id)
    }

    /// Map lookup by decision id.
    pub fn allowed(&self, id: &DecisionId, position: usize) -> Result<bool, ConfigError> {
        let d = self
            .decision_index(id)
            .ok_or_else(|| ConfigError::new("map", format!("unknown decision {id}")))?;
        if position >= self.n_variables {
            return Err(ConfigError::new(
                "map",
                format!("position {position} out of range (N = {})", self.n_variables),
            ));
        }
        self.maps.allowed(d, position)
    }

    /// Space-separated decision ids, for messages.
    pub fn describe(&self, assignment: &[usize]) -> String {
        assignment
            .iter()
            .map(|&d| self.decisions.get(d).map_or("?", |x| x.id.as_str()))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn is_pinned(&self, position: usize) -> bool {
        self.fixed_positions.contains_key(&position)
    }

    /// Can decision `d` legally sit at `position`, ignoring counts?
    #[inline]
    pub fn placeable(&self, d: usize, position: usize) -> bool {
        match self.fixed_positions.get(&position) {
            Some(&pinned) => pinned == d,
            None => self.maps.get(d, position),
        }
    }

    /// Positions operators may change.
    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.n_variables)
            .filter(|p| !self.is_pinned(*p))
            .collect()
    }

    pub fn group_members(&self, group: usize) -> Vec<usize> {
        self.decisions
            .iter()
            .enumerate()
            .filter(|(_, d)| d.group == Some(group))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn allowed_at(&self, position: usize) -> Vec<usize> {
        (0..self.decisions.len())
            .filter(|&d| self.placeable(d, position))
            .collect()
    }

    /// Checks every problem invariant and returns the violations found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n_variables;
        if n == 0 {
            out.push(Violation::NoPositions);
        }

        let mut seen: HashMap<&DecisionId, usize> = HashMap::new();
        for (i, d) in self.decisions.iter().enumerate() {
            if d.id.as_str().is_empty() {
                out.push(Violation::EmptyDecisionId { decision: i });
            }
            if seen.insert(&d.id, i).is_some() {
                out.push(Violation::DuplicateDecision { id: d.id.clone() });
            }
            if let Some(g) = d.group {
                if g >= self.groups.len() {
                    out.push(Violation::UnknownGroup {
                        decision: d.id.clone(),
                    });
                }
            } else if self.group_constrained {
                out.push(Violation::UngroupedDecision {
                    decision: d.id.clone(),
                });
            }
        }

        let rows = self.maps.rows();
        let maps_ok = rows.len() == self.decisions.len();
        if !maps_ok {
            out.push(Violation::MapCount {
                maps: rows.len(),
                decisions: self.decisions.len(),
            });
        }
        let mut lengths_ok = maps_ok;
        for (d, row) in rows.iter().enumerate() {
            if row.len() != n {
                lengths_ok = false;
                let id = self
                    .decisions
                    .get(d)
                    .map(|x| x.id.clone())
                    .unwrap_or_else(|| DecisionId::new(format!("#{d}")));
                out.push(Violation::MapLength {
                    decision: id,
                    len: row.len(),
                    n,
                });
            }
        }

        let mut pins_ok = true;
        let mut pinned_use: HashMap<usize, usize> = HashMap::new();
        for (&pos, &d) in &self.fixed_positions {
            if pos >= n {
                out.push(Violation::PinnedOutOfRange { position: pos });
                pins_ok = false;
            }
            if d >= self.decisions.len() {
                out.push(Violation::PinnedUnknownDecision { position: pos });
                pins_ok = false;
            } else {
                *pinned_use.entry(d).or_default() += 1;
            }
        }
        for (&d, &count) in &pinned_use {
            if self.decisions[d].unique && count > 1 {
                out.push(Violation::PinnedUniqueRepeated {
                    decision: self.decisions[d].id.clone(),
                });
            }
        }

        if lengths_ok {
            for p in 0..n {
                if self.fixed_positions.contains_key(&p) {
                    continue;
                }
                if !(0..self.decisions.len()).any(|d| self.maps.get(d, p)) {
                    out.push(Violation::EmptyAllowedSet { position: p });
                }
            }
        }

        if self.group_constrained {
            let sum: usize = self.groups.iter().map(|g| g.capacity).sum();
            if sum != n {
                out.push(Violation::CapacitySum { sum, n });
            }
            if lengths_ok && pins_ok {
                for (gi, g) in self.groups.iter().enumerate() {
                    let members = self.group_members(gi);
                    let reachable = (0..n)
                        .filter(|&p| members.iter().any(|&d| self.placeable(d, p)))
                        .count();
                    if reachable < g.capacity {
                        out.push(Violation::GroupUnreachable {
                            group: g.id.clone(),
                            reachable,
                            capacity: g.capacity,
                        });
                    }
                    if !members.is_empty() && members.iter().all(|&d| self.decisions[d].unique) {
                        if members.len() < g.capacity {
                            out.push(Violation::UniqueShortfall {
                                group: g.id.clone(),
                                unique: members.len(),
                                capacity: g.capacity,
                            });
                        }
                    } else if members.is_empty() && g.capacity > 0 {
                        out.push(Violation::GroupUnreachable {
                            group: g.id.clone(),
                            reachable: 0,
                            capacity: g.capacity,
                        });
                    }
                    let pinned_in_group: usize = pinned_use
                        .iter()
                        .filter(|(&d, _)| self.decisions[d].group == Some(gi))
                        .map(|(_, &c)| c)
                        .sum();
                    if pinned_in_group > g.capacity {
                        out.push(Violation::PinnedOverCapacity { group: g.id.clone() });
                    }
                }
            }
        }

        if self.objectives.is_empty() {
            out.push(Violation::NoObjectives);
        }
        let mut names = std::collections::HashSet::new();
        for o in &self.objectives {
            if !(o.weight > 0.0) {
                out.push(Violation::NonPositiveWeight {
                    objective: o.name.clone(),
                });
            }
            if !names.insert(o.name.as_str()) {
                out.push(Violation::DuplicateObjective {
                    objective: o.name.clone(),
                });
            }
        }

        out.extend(
            self.evaluator
                .check(self)
                .into_iter()
                .map(Violation::Evaluator),
        );
        out
    }

    /// All the ways `sol` breaks feasibility; empty when feasible.
    pub fn solution_violations(&self, sol: &Solution) -> Vec<SolutionViolation> {
        let mut out = Vec::new();
        let n = self.n_variables;
        if sol.assignment.len() != n {
            out.push(SolutionViolation::Length {
                len: sol.assignment.len(),
                n,
            });
            return out;
        }
        let mut counts = vec![0usize; self.decisions.len()];
        for (p, &d) in sol.assignment.iter().enumerate() {
            if d >= self.decisions.len() {
                out.push(SolutionViolation::UnknownDecision { position: p });
                continue;
            }
            counts[d] += 1;
            match self.fixed_positions.get(&p) {
                Some(&pinned) if pinned != d => {
                    out.push(SolutionViolation::PinnedChanged { position: p })
                }
                Some(_) => {}
                None => {
                    if !self.maps.get(d, p) {
                        out.push(SolutionViolation::MapDisallowed {
                            position: p,
                            decision: d,
                        });
                    }
                }
            }
            if self.group_constrained && self.decisions[d].group.is_none() {
                out.push(SolutionViolation::Ungrouped { position: p });
            }
        }
        for (d, &c) in counts.iter().enumerate() {
            if self.decisions[d].unique && c > 1 {
                out.push(SolutionViolation::UniqueRepeated {
                    decision: d,
                    count: c,
                });
            }
        }
        if self.group_constrained {
            let mut group_counts = vec![0usize; self.groups.len()];
            for (d, &c) in counts.iter().enumerate() {
                if let Some(g) = self.decisions[d].group {
                    if g < group_counts.len() {
                        group_counts[g] += c;
                    }
                }
            }
            for (g, (&count, group)) in group_counts.iter().zip(&self.groups).enumerate() {
                if count != group.capacity {
                    out.push(SolutionViolation::GroupCount {
                        group: g,
                        count,
                        capacity: group.capacity,
                    });
                }
            }
        }
        out
    }

    pub fn is_feasible(&self, sol: &Solution) -> bool {
        self.solution_violations(sol).is_empty()
    }

    /// Per-group decision counts of an assignment.
    pub fn group_counts(&self, assignment: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.groups.len()];
        for &d in assignment {
            if let Some(g) = self.decisions[d].group {
                counts[g] += 1;
            }
        }
        counts
    }
}

/// Free-function form of [`ProblemDefinition::validate`].
pub fn validate_problem(def: &ProblemDefinition) -> Vec<Violation> {
    def.validate()
}

pub fn is_feasible(sol: &Solution, def: &ProblemDefinition) -> bool {
    def.is_feasible(sol)
}
