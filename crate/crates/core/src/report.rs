//! On-disk shapes of fronts and run histories.
//!
//! Optimizer runs and the exhaustive baseline write the same front format so
//! they can be compared and plotted side by side.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baseline::{CandidateTable, ExhaustiveFront};
use crate::catalog::read_json;
use crate::engine::{FrontEntry, RunResult};
use crate::error::{Error, Result};
use crate::estimator::{ObjectiveVector, Parameterization};

/// A Pareto front with provenance, as written to `front*.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontFile {
    pub objectives: Vec<String>,
    /// `optimize` or `exhaustive`.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Members with distinct objective vectors.
    pub deduplicated_count: usize,
    pub members: Vec<FrontEntry>,
}

fn distinct(members: &[FrontEntry]) -> usize {
    members
        .iter()
        .map(|m| m.objectives.iter().map(|v| v.to_bits()).collect::<Vec<_>>())
        .collect::<HashSet<_>>()
        .len()
}

impl FrontFile {
    pub fn new(objectives: &[String], source: &str, seed: Option<u64>, members: Vec<FrontEntry>) -> Self {
        FrontFile {
            objectives: objectives.to_vec(),
            source: source.to_string(),
            seed,
            deduplicated_count: distinct(&members),
            members,
        }
    }

    pub fn from_run(objectives: &[String], run: &RunResult) -> Self {
        FrontFile::new(objectives, "optimize", Some(run.config.seed), run.final_front.clone())
    }

    pub fn from_exhaustive(objectives: &[String], table: &CandidateTable, front: &ExhaustiveFront) -> Self {
        let members = front
            .front
            .iter()
            .map(|sc| FrontEntry {
                objectives: sc.objectives.clone(),
                parameterization: Parameterization {
                    memories: sc
                        .indices
                        .iter()
                        .zip(&table.memories)
                        .map(|(&i, cands)| cands[i].parameterization.clone())
                        .collect(),
                },
            })
            .collect();
        FrontFile::new(objectives, "exhaustive", None, members)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let f: FrontFile = read_json(path.as_ref())?;
        if f.members.is_empty() {
            return Err(Error::validation(path.as_ref().display().to_string(), "front has no members"));
        }
        if f.members.iter().any(|m| m.objectives.len() != f.objectives.len()) {
            return Err(Error::validation(
                path.as_ref().display().to_string(),
                "member objective count differs from the objective list",
            ));
        }
        Ok(f)
    }

    pub fn points(&self) -> Vec<ObjectiveVector> {
        self.members.iter().map(|m| m.objectives.clone()).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("front serializes");
        s.push('\n');
        s
    }

    /// Objective columns, then `<memory>.compiler` and `<memory>.codes` per
    /// memory; codes render as `name=code` joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = self.objectives.join(",");
        if let Some(first) = self.members.first() {
            for m in &first.parameterization.memories {
                write!(out, ",{0}.compiler,{0}.codes", m.memory_id).unwrap();
            }
        }
        out.push('\n');
        for entry in &self.members {
            let values: Vec<String> = entry.objectives.iter().map(|v| v.to_string()).collect();
            out.push_str(&values.join(","));
            for m in &entry.parameterization.memories {
                let codes: Vec<String> = m.codes.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(out, ",{},{}", m.compiler, codes.join(";")).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// `generation,member,<objectives...>`, one row per population member.
pub fn history_csv(objectives: &[String], history: &[Vec<ObjectiveVector>]) -> String {
    let mut out = String::from("generation,member");
    for o in objectives {
        write!(out, ",{o}").unwrap();
    }
    out.push('\n');
    for (g, population) in history.iter().enumerate() {
        for (i, v) in population.iter().enumerate() {
            write!(out, "{g},{i}").unwrap();
            for x in v.iter() {
                write!(out, ",{x}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}
