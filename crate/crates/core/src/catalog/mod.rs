//! The design space: memory compilers, their architectural parameters, the
//! constraints that make most parameter combinations infeasible, and the
//! surrogate PPA coefficients attached to every compiler.
//!
//! A [`Catalog`] and a [`SystemSpec`] are validated on construction, whether
//! built in code or deserialized from JSON, and are immutable afterwards.

mod synth;
mod toy;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use synth::generate_synthetic_system;
pub use toy::two_memory_toy;

/// Memory circuit family. Only compilers of the same kind can build a memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MemoryKind {
    #[serde(rename = "SRAM")]
    Sram,
    #[serde(rename = "ROM")]
    Rom,
    #[serde(rename = "RF")]
    Rf,
}

impl fmt::Display for MemoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MemoryKind::Sram => "SRAM",
            MemoryKind::Rom => "ROM",
            MemoryKind::Rf => "RF",
        })
    }
}

/// Inclusive integer range, serialized as `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u64; 2]", into = "[u64; 2]")]
pub struct Span {
    pub lo: u64,
    pub hi: u64,
}

impl Span {
    pub const fn new(lo: u64, hi: u64) -> Self {
        Span { lo, hi }
    }

    pub fn contains(&self, v: u64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    fn intersect(&self, other: &Span) -> Option<Span> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Span { lo, hi })
    }
}

impl From<[u64; 2]> for Span {
    fn from([lo, hi]: [u64; 2]) -> Self {
        Span { lo, hi }
    }
}

impl From<Span> for [u64; 2] {
    fn from(s: Span) -> Self {
        [s.lo, s.hi]
    }
}

/// The (words, bits) rectangle in which a rule applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub words: Span,
    pub bits: Span,
}

impl Region {
    pub const fn new(words: Span, bits: Span) -> Self {
        Region { words, bits }
    }

    pub fn applies(&self, words: u64, bits: u64) -> bool {
        self.words.contains(words) && self.bits.contains(bits)
    }

    fn overlaps(&self, other: &Region) -> bool {
        self.words.overlaps(&other.words) && self.bits.overlaps(&other.bits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryRequirement {
    pub id: String,
    pub words: u64,
    pub bits: u64,
    pub ports: u32,
    pub kind: MemoryKind,
}

/// An architectural parameter. Its codes are the positions `0..labels.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSpec {
    pub name: String,
    #[serde(rename = "codes")]
    pub labels: Vec<String>,
}

impl ParameterSpec {
    pub fn new(name: impl Into<String>, labels: &[&str]) -> Self {
        ParameterSpec {
            name: name.into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn code_count(&self) -> u32 {
        self.labels.len() as u32
    }
}

/// Restricts one parameter to a subset of its codes inside a region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceRule {
    #[serde(rename = "when")]
    pub region: Region,
    pub param: String,
    pub allowed: Vec<u32>,
}

/// Restricts a group of parameters to an explicit set of code tuples inside a
/// region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComboRule {
    #[serde(rename = "when")]
    pub region: Region,
    pub params: Vec<String>,
    pub allowed: Vec<Vec<u32>>,
}

/// Surrogate coefficients of one objective for one compiler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurrogateTerm {
    /// `(c0, c1, c2, c3)` of `c0 + c1*words*bits + c2*words + c3*bits`.
    pub base: [f64; 4],
    /// Per parameter, one multiplier per code.
    pub multipliers: BTreeMap<String, Vec<f64>>,
}

impl SurrogateTerm {
    pub fn base_value(&self, words: u64, bits: u64) -> f64 {
        let [c0, c1, c2, c3] = self.base;
        let (w, b) = (words as f64, bits as f64);
        c0 + c1 * w * b + c2 * w + c3 * b
    }
}

/// Surrogate terms keyed by objective name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SurrogateModel(pub BTreeMap<String, SurrogateTerm>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompilerSpec {
    pub name: String,
    pub kind: MemoryKind,
    pub ports: u32,
    pub words_range: Span,
    pub bits_range: Span,
    pub params: Vec<ParameterSpec>,
    #[serde(default)]
    pub choice_rules: Vec<ChoiceRule>,
    #[serde(default)]
    pub combo_rules: Vec<ComboRule>,
    pub surrogate: SurrogateModel,
}

/// One independently choosable unit of a compiler's parameterization for a
/// given memory: either a single free parameter or a combo-constrained group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    Free {
        param: usize,
        codes: Vec<u32>,
    },
    Combo {
        params: Vec<usize>,
        tuples: Vec<Vec<u32>>,
    },
}

impl Slot {
    pub fn choices(&self) -> usize {
        match self {
            Slot::Free { codes, .. } => codes.len(),
            Slot::Combo { tuples, .. } => tuples.len(),
        }
    }
}

/// The feasible parameterizations of one compiler for one memory, factored
/// into independent slots ordered by the position of their first parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasiblePlan {
    pub slots: Vec<Slot>,
}

impl FeasiblePlan {
    /// Number of feasible parameterizations (the product of slot sizes).
    pub fn candidate_count(&self) -> u128 {
        self.slots.iter().map(|s| s.choices() as u128).product()
    }
}

impl CompilerSpec {
    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    /// Kind, ports and (words, bits) ranges all match.
    pub fn can_build(&self, mem: &MemoryRequirement) -> bool {
        self.kind == mem.kind
            && self.ports == mem.ports
            && self.words_range.contains(mem.words)
            && self.bits_range.contains(mem.bits)
    }

    /// Combo rules in force for a memory of this size.
    pub fn applicable_combo_rules(&self, words: u64, bits: u64) -> impl Iterator<Item = &ComboRule> {
        self.combo_rules
            .iter()
            .filter(move |r| r.region.applies(words, bits))
    }

    fn combo_governed(&self, param: &str, words: u64, bits: u64) -> bool {
        self.applicable_combo_rules(words, bits)
            .any(|r| r.params.iter().any(|p| p == param))
    }

    /// Codes a non-combo parameter may take for this memory, ascending.
    pub fn feasible_codes(&self, mem: &MemoryRequirement, param: &str) -> Result<Vec<u32>> {
        let spec = self
            .params
            .iter()
            .find(|p| p.name == param)
            .ok_or_else(|| Error::invalid(format!("compiler `{}` has no parameter `{param}`", self.name)))?;
        if self.combo_governed(param, mem.words, mem.bits) {
            return Err(Error::invalid(format!(
                "parameter `{param}` of compiler `{}` is combo-constrained for {}x{}",
                self.name, mem.words, mem.bits
            )));
        }
        Ok(self.free_codes(spec, mem.words, mem.bits))
    }

    fn free_codes(&self, spec: &ParameterSpec, words: u64, bits: u64) -> Vec<u32> {
        let mut allowed: BTreeSet<u32> = (0..spec.code_count()).collect();
        for rule in &self.choice_rules {
            if rule.param == spec.name && rule.region.applies(words, bits) {
                let keep: BTreeSet<u32> = rule.allowed.iter().copied().collect();
                allowed = allowed.intersection(&keep).copied().collect();
            }
        }
        allowed.into_iter().collect()
    }

    /// The allowed tuples of a combo rule, sorted lexicographically.
    pub fn feasible_combinations(&self, mem: &MemoryRequirement, group: &ComboRule) -> Result<Vec<Vec<u32>>> {
        if !group.region.applies(mem.words, mem.bits) {
            return Err(Error::invalid(format!(
                "combo rule over {:?} of compiler `{}` does not apply to {}x{}",
                group.params, self.name, mem.words, mem.bits
            )));
        }
        let mut tuples = group.allowed.clone();
        tuples.sort();
        tuples.dedup();
        Ok(tuples)
    }

    /// Factor the feasible set for `mem` into slots.
    pub fn plan(&self, mem: &MemoryRequirement) -> Result<FeasiblePlan> {
        self.plan_at(mem.words, mem.bits)
    }

    fn plan_at(&self, words: u64, bits: u64) -> Result<FeasiblePlan> {
        let mut slots: Vec<(usize, Slot)> = Vec::new();
        let mut governed = vec![false; self.params.len()];
        for rule in self.applicable_combo_rules(words, bits) {
            let params: Vec<usize> = rule
                .params
                .iter()
                .map(|p| self.param_index(p).expect("validated combo parameter"))
                .collect();
            for &p in &params {
                governed[p] = true;
            }
            let mut tuples = rule.allowed.clone();
            tuples.sort();
            tuples.dedup();
            let first = *params.iter().min().expect("non-empty combo rule");
            slots.push((first, Slot::Combo { params, tuples }));
        }
        for (i, spec) in self.params.iter().enumerate() {
            if governed[i] {
                continue;
            }
            let codes = self.free_codes(spec, words, bits);
            if codes.is_empty() {
                return Err(Error::validation(
                    format!("compiler `{}`", self.name),
                    format!("parameter `{}` has no feasible code for {words}x{bits}", spec.name),
                ));
            }
            slots.push((i, Slot::Free { param: i, codes }));
        }
        slots.sort_by_key(|(first, _)| *first);
        Ok(FeasiblePlan {
            slots: slots.into_iter().map(|(_, s)| s).collect(),
        })
    }

    /// Check that `codes` names exactly this compiler's parameters with a
    /// feasible assignment for `mem`.
    pub fn check_feasible(&self, mem: &MemoryRequirement, codes: &BTreeMap<String, u32>) -> Result<()> {
        let fail = |msg: String| {
            Err(Error::invalid(format!(
                "infeasible parameterization of memory `{}` on compiler `{}`: {msg}",
                mem.id, self.name
            )))
        };
        if !self.can_build(mem) {
            return fail("compiler cannot build this memory".into());
        }
        if codes.len() != self.params.len() {
            return fail(format!("expected {} codes, got {}", self.params.len(), codes.len()));
        }
        let plan = self.plan(mem)?;
        for slot in &plan.slots {
            match slot {
                Slot::Free { param, codes: allowed } => {
                    let name = &self.params[*param].name;
                    match codes.get(name) {
                        Some(c) if allowed.binary_search(c).is_ok() => {}
                        Some(c) => return fail(format!("code {c} not allowed for `{name}`")),
                        None => return fail(format!("missing parameter `{name}`")),
                    }
                }
                Slot::Combo { params, tuples } => {
                    let mut tuple = Vec::with_capacity(params.len());
                    for &p in params {
                        match codes.get(&self.params[p].name) {
                            Some(&c) => tuple.push(c),
                            None => return fail(format!("missing parameter `{}`", self.params[p].name)),
                        }
                    }
                    if tuples.binary_search(&tuple).is_err() {
                        return fail(format!("combination {tuple:?} not allowed"));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate(&self, objectives: &[String]) -> Result<()> {
        let loc = |what: &str| format!("compiler `{}` {what}", self.name);
        if self.name.is_empty() {
            return Err(Error::validation("compiler", "empty compiler name"));
        }
        if self.ports == 0 {
            return Err(Error::validation(loc("ports"), "ports must be >= 1"));
        }
        for (what, span) in [("words_range", self.words_range), ("bits_range", self.bits_range)] {
            if span.lo == 0 || span.lo > span.hi {
                return Err(Error::validation(
                    loc(what),
                    format!("range [{}, {}] must satisfy 1 <= lo <= hi", span.lo, span.hi),
                ));
            }
        }
        if self.params.is_empty() {
            return Err(Error::validation(loc("params"), "a compiler needs at least one parameter"));
        }
        let mut names = HashSet::new();
        for (i, p) in self.params.iter().enumerate() {
            let at = loc(&format!("params[{i}]"));
            if !names.insert(p.name.as_str()) {
                return Err(Error::validation(at, format!("duplicate parameter name `{}`", p.name)));
            }
            if p.labels.is_empty() {
                return Err(Error::validation(at, format!("parameter `{}` has no codes", p.name)));
            }
            let mut labels = HashSet::new();
            for l in &p.labels {
                if !labels.insert(l.as_str()) {
                    return Err(Error::validation(at, format!("duplicate label `{l}` in `{}`", p.name)));
                }
            }
        }
        let code_count = |name: &str| self.params.iter().find(|p| p.name == name).map(|p| p.code_count());

        for (i, rule) in self.choice_rules.iter().enumerate() {
            let at = loc(&format!("choice_rules[{i}]"));
            check_region(&rule.region, &at)?;
            let Some(k) = code_count(&rule.param) else {
                return Err(Error::validation(at, format!("unknown parameter `{}`", rule.param)));
            };
            if rule.allowed.is_empty() {
                return Err(Error::validation(at, "allowed codes are empty"));
            }
            if let Some(c) = rule.allowed.iter().find(|&&c| c >= k) {
                return Err(Error::validation(
                    at,
                    format!("code {c} out of range for `{}` with {k} codes", rule.param),
                ));
            }
        }

        for (i, rule) in self.combo_rules.iter().enumerate() {
            let at = loc(&format!("combo_rules[{i}]"));
            check_region(&rule.region, &at)?;
            if rule.params.is_empty() {
                return Err(Error::validation(at, "combo rule names no parameters"));
            }
            let mut seen = HashSet::new();
            let mut counts = Vec::with_capacity(rule.params.len());
            for p in &rule.params {
                if !seen.insert(p.as_str()) {
                    return Err(Error::validation(at, format!("parameter `{p}` listed twice")));
                }
                match code_count(p) {
                    Some(k) => counts.push(k),
                    None => return Err(Error::validation(at, format!("unknown parameter `{p}`"))),
                }
            }
            if rule.allowed.is_empty() {
                return Err(Error::validation(at, "allowed combinations are empty"));
            }
            for tuple in &rule.allowed {
                if tuple.len() != rule.params.len() {
                    return Err(Error::validation(
                        at,
                        format!("tuple {tuple:?} has arity {}, expected {}", tuple.len(), rule.params.len()),
                    ));
                }
                for ((c, k), p) in tuple.iter().zip(&counts).zip(&rule.params) {
                    if c >= k {
                        return Err(Error::validation(
                            at,
                            format!("tuple {tuple:?} references code {c} of `{p}` which has {k} codes"),
                        ));
                    }
                }
            }
        }

        // Rules touching the same parameter must not overlap inside the
        // compiler's range: combo vs combo, and combo vs choice.
        let domain = Region::new(self.words_range, self.bits_range);
        let clip = |r: &Region| -> Option<Region> {
            Some(Region::new(r.words.intersect(&domain.words)?, r.bits.intersect(&domain.bits)?))
        };
        for (i, a) in self.combo_rules.iter().enumerate() {
            let Some(ra) = clip(&a.region) else { continue };
            for (j, b) in self.combo_rules.iter().enumerate().skip(i + 1) {
                let Some(rb) = clip(&b.region) else { continue };
                if let Some(p) = a.params.iter().find(|p| b.params.contains(p)) {
                    if ra.overlaps(&rb) {
                        return Err(Error::validation(
                            loc(&format!("combo_rules[{j}]")),
                            format!("parameter `{p}` is also governed by combo_rules[{i}] in an overlapping region"),
                        ));
                    }
                }
            }
            for (j, c) in self.choice_rules.iter().enumerate() {
                let Some(rc) = clip(&c.region) else { continue };
                if a.params.contains(&c.param) && ra.overlaps(&rc) {
                    return Err(Error::validation(
                        loc(&format!("choice_rules[{j}]")),
                        format!("parameter `{}` is combo-constrained by combo_rules[{i}] in an overlapping region", c.param),
                    ));
                }
            }
        }

        // Applicability is constant on the cells of the grid spanned by all
        // rule boundaries, so checking one corner per cell proves feasibility
        // everywhere in the declared ranges.
        let rules: Vec<Region> = self
            .choice_rules
            .iter()
            .map(|r| r.region)
            .chain(self.combo_rules.iter().map(|r| r.region))
            .collect();
        let words_cuts = cell_starts(self.words_range, rules.iter().map(|r| r.words));
        let bits_cuts = cell_starts(self.bits_range, rules.iter().map(|r| r.bits));
        for &w in &words_cuts {
            for &b in &bits_cuts {
                self.plan_at(w, b)?;
            }
        }

        self.validate_surrogate(objectives)
    }

    fn validate_surrogate(&self, objectives: &[String]) -> Result<()> {
        let loc = format!("compiler `{}` surrogate", self.name);
        for name in self.surrogate.0.keys() {
            if !objectives.contains(name) {
                return Err(Error::validation(&loc, format!("unknown objective `{name}`")));
            }
        }
        for obj in objectives {
            let Some(term) = self.surrogate.0.get(obj) else {
                return Err(Error::validation(&loc, format!("missing objective `{obj}`")));
            };
            let at = format!("{loc}.{obj}");
            if term.base.iter().any(|c| !c.is_finite()) {
                return Err(Error::validation(&at, "base coefficients must be finite"));
            }
            for w in [self.words_range.lo, self.words_range.hi] {
                for b in [self.bits_range.lo, self.bits_range.hi] {
                    let v = term.base_value(w, b);
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(Error::validation(&at, format!("base is {v} at {w}x{b}; must be > 0")));
                    }
                }
            }
            for name in term.multipliers.keys() {
                if self.param_index(name).is_none() {
                    return Err(Error::validation(&at, format!("multipliers for unknown parameter `{name}`")));
                }
            }
            for p in &self.params {
                let Some(m) = term.multipliers.get(&p.name) else {
                    return Err(Error::validation(&at, format!("no multipliers for parameter `{}`", p.name)));
                };
                if m.len() != p.labels.len() {
                    return Err(Error::validation(
                        &at,
                        format!("`{}` has {} codes but {} multipliers", p.name, p.labels.len(), m.len()),
                    ));
                }
                if let Some(x) = m.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                    return Err(Error::validation(&at, format!("multiplier {x} of `{}` must be > 0", p.name)));
                }
            }
        }
        Ok(())
    }
}

fn check_region(region: &Region, at: &str) -> Result<()> {
    for (what, s) in [("words", region.words), ("bits", region.bits)] {
        if s.lo > s.hi {
            return Err(Error::validation(at, format!("{what} range [{}, {}] is empty", s.lo, s.hi)));
        }
    }
    Ok(())
}

fn cell_starts(domain: Span, spans: impl Iterator<Item = Span>) -> Vec<u64> {
    let mut cuts = BTreeSet::from([domain.lo]);
    for s in spans {
        for c in [s.lo, s.hi.saturating_add(1)] {
            if domain.lo < c && c <= domain.hi {
                cuts.insert(c);
            }
        }
    }
    cuts.into_iter().collect()
}

#[derive(Deserialize)]
struct CatalogFile {
    objectives: Vec<String>,
    compilers: Vec<CompilerSpec>,
}

/// A validated set of memory compilers sharing one objective list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CatalogFile")]
pub struct Catalog {
    objectives: Vec<String>,
    compilers: Vec<CompilerSpec>,
}

impl TryFrom<CatalogFile> for Catalog {
    type Error = Error;

    fn try_from(f: CatalogFile) -> Result<Self> {
        Catalog::new(f.objectives, f.compilers)
    }
}

impl Catalog {
    pub fn new(objectives: Vec<String>, compilers: Vec<CompilerSpec>) -> Result<Self> {
        if objectives.is_empty() {
            return Err(Error::validation("catalog objectives", "at least one objective is required"));
        }
        let mut seen = HashSet::new();
        for o in &objectives {
            if !seen.insert(o.as_str()) {
                return Err(Error::validation("catalog objectives", format!("duplicate objective `{o}`")));
            }
        }
        let mut names = HashSet::new();
        for (i, c) in compilers.iter().enumerate() {
            if !names.insert(c.name.as_str()) {
                return Err(Error::validation(
                    format!("compilers[{i}]"),
                    format!("duplicate compiler name `{}`", c.name),
                ));
            }
            c.validate(&objectives)?;
        }
        Ok(Catalog { objectives, compilers })
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn objectives(&self) -> &[String] {
        &self.objectives
    }

    pub fn compilers(&self) -> &[CompilerSpec] {
        &self.compilers
    }

    pub fn compiler(&self, name: &str) -> Option<&CompilerSpec> {
        self.compilers.iter().find(|c| c.name == name)
    }

    pub fn compiler_index(&self, name: &str) -> Option<usize> {
        self.compilers.iter().position(|c| c.name == name)
    }

    /// Indices of the compilers able to build `mem`, in catalog order.
    pub fn eligible_indices(&self, mem: &MemoryRequirement) -> Result<Vec<usize>> {
        let idx: Vec<usize> = self
            .compilers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.can_build(mem))
            .map(|(i, _)| i)
            .collect();
        if idx.is_empty() {
            return Err(Error::NoEligibleCompiler {
                memory: mem.id.clone(),
                kind: mem.kind.to_string(),
                ports: mem.ports,
                words: mem.words,
                bits: mem.bits,
            });
        }
        Ok(idx)
    }

    /// Compilers able to build `mem`, in catalog order.
    pub fn eligible_compilers(&self, mem: &MemoryRequirement) -> Result<Vec<&CompilerSpec>> {
        Ok(self
            .eligible_indices(mem)?
            .into_iter()
            .map(|i| &self.compilers[i])
            .collect())
    }

    /// Fail unless every memory of `system` can be built by some compiler.
    pub fn check_system(&self, system: &SystemSpec) -> Result<()> {
        for mem in system.memories() {
            self.eligible_indices(mem)?;
        }
        Ok(())
    }
}

/// Parse and validate a catalog JSON file.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let raw: CatalogFile = read_json(path.as_ref())?;
    Catalog::try_from(raw)
}

/// Parse and validate a system JSON file.
pub fn load_system(path: impl AsRef<Path>) -> Result<SystemSpec> {
    let raw: SystemFile = read_json(path.as_ref())?;
    SystemSpec::try_from(raw)
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.to_owned(),
        source,
    })
}

#[derive(Deserialize)]
struct SystemFile {
    memories: Vec<MemoryRequirement>,
}

/// The memory inventory of one chip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemFile")]
pub struct SystemSpec {
    memories: Vec<MemoryRequirement>,
}

impl TryFrom<SystemFile> for SystemSpec {
    type Error = Error;

    fn try_from(f: SystemFile) -> Result<Self> {
        SystemSpec::new(f.memories)
    }
}

impl SystemSpec {
    pub fn new(memories: Vec<MemoryRequirement>) -> Result<Self> {
        if memories.is_empty() {
            return Err(Error::validation("system memories", "a system needs at least one memory"));
        }
        let mut ids = HashSet::new();
        for (i, m) in memories.iter().enumerate() {
            let at = format!("memories[{i}]");
            if !ids.insert(m.id.as_str()) {
                return Err(Error::validation(at, format!("duplicate memory id `{}`", m.id)));
            }
            if m.words == 0 || m.bits == 0 || m.ports == 0 {
                return Err(Error::validation(at, format!("memory `{}` needs words, bits and ports >= 1", m.id)));
            }
        }
        Ok(SystemSpec { memories })
    }

    pub fn memories(&self) -> &[MemoryRequirement] {
        &self.memories
    }

    pub fn len(&self) -> usize {
        self.memories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memories.is_empty()
    }
}
