//! Adapter for external evaluation codes.
//!
//! Each evaluation gets a fresh directory. The adapter writes `solution.txt`:
//!
//! ```text
//! n=<N>
//! <i> <decision_id> <attr>=<value> ...
//! ```
//!
//! (one line per position, 0-based `i`, attributes in name order), runs the
//! command with the directory as its first argument and as working directory,
//! and reads `objectives.txt`, one `name = <decimal>` per line. Blank lines and
//! lines starting with `#` are skipped. stdout/stderr go to `stdout.log` and
//! `stderr.log` in the same directory. Directories of failed evaluations are
//! kept for inspection.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use wait_timeout::ChildExt;

use crate::error::{ConfigError, EvaluationError};
use crate::problem::{DecisionId, EvaluationResult, ProblemDefinition};

use super::Evaluator;

pub const REQUEST_FILE: &str = "solution.txt";
pub const RESPONSE_FILE: &str = "objectives.txt";
pub const DEFAULT_TIMEOUT_SECS: f64 = 300.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSpec {
    /// Program followed by extra arguments (placed after the directory).
    pub command: Vec<String>,
    /// Parent of the per-evaluation directories; system temp dir if unset.
    pub workdir: Option<PathBuf>,
    pub timeout_secs: f64,
}

pub struct ExternalCommand {
    spec: ExternalSpec,
    decisions: Vec<(DecisionId, BTreeMap<String, f64>)>,
    required: Vec<String>,
}

impl ExternalCommand {
    pub fn new(def: &ProblemDefinition, spec: &ExternalSpec) -> Result<Self, ConfigError> {
        if spec.command.is_empty() {
            return Err(ConfigError::new("evaluator.params.command", "command must not be empty"));
        }
        if !(spec.timeout_secs > 0.0) {
            return Err(ConfigError::new("evaluator.params.timeout", "timeout must be positive"));
        }
        Ok(Self {
            spec: spec.clone(),
            decisions: def
                .decisions
                .iter()
                .map(|d| (d.id.clone(), d.attributes.clone()))
                .collect(),
            required: def.objectives.iter().map(|o| o.name.clone()).collect(),
        })
    }

    fn command_line(&self) -> String {
        self.spec.command.join(" ")
    }

    pub fn request_text(&self, assignment: &[usize]) -> String {
        let mut s = format!("n={}\n", assignment.len());
        for (i, &d) in assignment.iter().enumerate() {
            let (id, attrs) = &self.decisions[d];
            let _ = write!(s, "{i} {id}");
            for (k, v) in attrs {
                let _ = write!(s, " {k}={v}");
            }
            s.push('\n');
        }
        s
    }

    fn run_in(&self, dir: &Path, assignment: &[usize]) -> Result<EvaluationResult, EvaluationError> {
        let io = |path: &Path, e: std::io::Error| EvaluationError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let request = dir.join(REQUEST_FILE);
        fs::write(&request, self.request_text(assignment)).map_err(|e| io(&request, e))?;
        let stdout_path = dir.join("stdout.log");
        let stderr_path = dir.join("stderr.log");
        let stdout = fs::File::create(&stdout_path).map_err(|e| io(&stdout_path, e))?;
        let stderr = fs::File::create(&stderr_path).map_err(|e| io(&stderr_path, e))?;

        let mut child = Command::new(&self.spec.command[0])
            .arg(dir)
            .args(&self.spec.command[1..])
            .current_dir(dir)
            .stdin(Stdio::null())
            .stdout(Stdio::from(stdout))
            .stderr(Stdio::from(stderr))
            .spawn()
            .map_err(|e| EvaluationError::CommandFailed {
                command: self.command_line(),
                status: format!("spawn error ({e})"),
                workdir: dir.to_path_buf(),
                stderr: String::new(),
            })?;
        let timeout = Duration::from_secs_f64(self.spec.timeout_secs);
        let status = match child.wait_timeout(timeout).map_err(|e| io(dir, e))? {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(EvaluationError::Timeout {
                    command: self.command_line(),
                    seconds: self.spec.timeout_secs,
                    workdir: dir.to_path_buf(),
                });
            }
        };
        if !status.success() {
            let stderr = fs::read_to_string(&stderr_path).unwrap_or_default();
            return Err(EvaluationError::CommandFailed {
                command: self.command_line(),
                status: status.to_string(),
                workdir: dir.to_path_buf(),
                stderr: tail(&stderr, 2000),
            });
        }
        let response = dir.join(RESPONSE_FILE);
        let text = fs::read_to_string(&response).map_err(|e| EvaluationError::MalformedResponse {
            file: response.clone(),
            message: format!("cannot read: {e}"),
        })?;
        let result = parse_response(&text).map_err(|message| EvaluationError::MalformedResponse {
            file: response.clone(),
            message,
        })?;
        for name in &self.required {
            if result.get(name).is_none() {
                return Err(EvaluationError::MissingObjective(name.clone()));
            }
        }
        Ok(result)
    }
}

impl Evaluator for ExternalCommand {
    fn evaluate(&self, assignment: &[usize]) -> Result<EvaluationResult, EvaluationError> {
        let mut builder = tempfile::Builder::new();
        builder.prefix("eval-");
        let dir = match &self.spec.workdir {
            Some(base) => {
                fs::create_dir_all(base).map_err(|e| EvaluationError::Io {
                    path: base.clone(),
                    message: e.to_string(),
                })?;
                builder.tempdir_in(base)
            }
            None => builder.tempdir(),
        }
        .map_err(|e| EvaluationError::Io {
            path: self.spec.workdir.clone().unwrap_or_else(std::env::temp_dir),
            message: e.to_string(),
        })?;
        let outcome = self.run_in(dir.path(), assignment);
        if outcome.is_err() {
            let kept = dir.keep();
            log::error!("evaluation failed; working directory kept at {}", kept.display());
        }
        outcome
    }
}

fn tail(s: &str, max: usize) -> String {
    if s.len() <= max {
        return s.trim_end().to_string();
    }
    let mut start = s.len() - max;
    while !s.is_char_boundary(start) {
        start += 1;
    }
    s[start..].trim_end().to_string()
}

/// Parses `name = value` lines.
pub fn parse_response(text: &str) -> Result<EvaluationResult, String> {
    let mut values = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `name = value`", lineno + 1))?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(format!("line {}: invalid objective name `{name}`", lineno + 1));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("line {}: `{}` is not a decimal number", lineno + 1, value.trim()))?;
        if !value.is_finite() {
            return Err(format!("line {}: value for `{name}` is not finite", lineno + 1));
        }
        if values.insert(name.to_string(), value).is_some() {
            return Err(format!("line {}: `{name}` given twice", lineno + 1));
        }
    }
    Ok(EvaluationResult { values })
}
