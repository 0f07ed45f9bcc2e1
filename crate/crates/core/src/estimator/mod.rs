//! PPA estimation of discrete parameterizations.
//!
//! Evaluation is batched per compiler: every (individual, memory) pair of a
//! request is flattened, grouped with all other pairs using the same compiler,
//! sent to the backend as one batch per compiler, and scattered back by its
//! original position. System objectives are per-objective sums over memories,
//! accumulated in memory order.

mod exec;
mod serve;

use std::collections::BTreeMap;
use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, CompilerSpec, MemoryRequirement, SystemSpec};
use crate::error::{Error, Result};

pub use exec::{ExecBackend, DEFAULT_TIMEOUT};
pub use serve::serve;

/// Objective values, all minimized, in catalog objective order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(pub Vec<f64>);

impl ObjectiveVector {
    pub fn zeros(m: usize) -> Self {
        ObjectiveVector(vec![0.0; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Component-wise `self += other`.
    pub fn accumulate(&mut self, other: &[f64]) {
        debug_assert_eq!(self.0.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(other) {
            *a += b;
        }
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        ObjectiveVector(v)
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Compiler and parameter codes chosen for one memory.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MemoryParameterization {
    #[serde(rename = "id")]
    pub memory_id: String,
    pub compiler: String,
    pub codes: BTreeMap<String, u32>,
}

/// A full-system assignment, one entry per memory in system order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Parameterization {
    pub memories: Vec<MemoryParameterization>,
}

/// One memory to estimate inside a per-compiler batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchItem {
    pub words: u64,
    pub bits: u64,
    pub codes: BTreeMap<String, u32>,
}

/// All items of one compiler submitted together.
#[derive(Clone, Debug)]
pub struct BatchRequest<'a> {
    pub compiler: &'a CompilerSpec,
    pub objectives: &'a [String],
    pub items: Vec<BatchItem>,
}

/// Something that turns a batch of parameterizations into objective vectors.
///
/// Implementations must return exactly one vector per item, in item order.
pub trait Backend: Send + Sync {
    fn evaluate(&self, request: &BatchRequest<'_>) -> Result<Vec<ObjectiveVector>>;
}

impl<B: Backend + ?Sized> Backend for &B {
    fn evaluate(&self, request: &BatchRequest<'_>) -> Result<Vec<ObjectiveVector>> {
        (**self).evaluate(request)
    }
}

/// Built-in analytic estimator:
/// `objective = base(words, bits) * product of per-code multipliers`.
pub fn surrogate_eval(
    objectives: &[String],
    comp: &CompilerSpec,
    mem: &MemoryRequirement,
    codes: &BTreeMap<String, u32>,
) -> Result<ObjectiveVector> {
    comp.check_feasible(mem, codes)?;
    let mut out = Vec::with_capacity(objectives.len());
    for obj in objectives {
        let term = comp.surrogate.0.get(obj).ok_or_else(|| {
            Error::invalid(format!("compiler `{}` has no surrogate for `{obj}`", comp.name))
        })?;
        let mut v = term.base_value(mem.words, mem.bits);
        for p in &comp.params {
            v *= term.multipliers[&p.name][codes[&p.name] as usize];
        }
        out.push(v);
    }
    Ok(ObjectiveVector(out))
}

/// The in-process surrogate as a [`Backend`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SurrogateBackend;

impl Backend for SurrogateBackend {
    fn evaluate(&self, request: &BatchRequest<'_>) -> Result<Vec<ObjectiveVector>> {
        let comp = request.compiler;
        request
            .items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let mem = MemoryRequirement {
                    id: format!("item {i}"),
                    words: item.words,
                    bits: item.bits,
                    ports: comp.ports,
                    kind: comp.kind,
                };
                surrogate_eval(request.objectives, comp, &mem, &item.codes)
            })
            .collect()
    }
}

/// Evaluate per-memory parameterizations, one backend batch per compiler.
///
/// Results line up with `items`. Batches for different compilers may run
/// concurrently; the output does not depend on completion order.
pub fn evaluate_memories(
    catalog: &Catalog,
    items: &[(&MemoryRequirement, &MemoryParameterization)],
    backend: &dyn Backend,
) -> Result<Vec<ObjectiveVector>> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, (mem, p)) in items.iter().enumerate() {
        let comp = catalog
            .compiler(&p.compiler)
            .ok_or_else(|| Error::invalid(format!("unknown compiler `{}`", p.compiler)))?;
        if !comp.can_build(mem) {
            return Err(Error::invalid(format!(
                "compiler `{}` cannot build memory `{}`",
                comp.name, mem.id
            )));
        }
        groups.entry(comp.name.as_str()).or_default().push(i);
    }
    let groups: Vec<(&str, Vec<usize>)> = groups.into_iter().collect();
    let m = catalog.objectives().len();

    let answered: Vec<Vec<ObjectiveVector>> = groups
        .par_iter()
        .map(|(name, idx)| {
            let request = BatchRequest {
                compiler: catalog.compiler(name).expect("checked above"),
                objectives: catalog.objectives(),
                items: idx
                    .iter()
                    .map(|&i| {
                        let (mem, p) = items[i];
                        BatchItem {
                            words: mem.words,
                            bits: mem.bits,
                            codes: p.codes.clone(),
                        }
                    })
                    .collect(),
            };
            let out = backend.evaluate(&request)?;
            if out.len() != idx.len() || out.iter().any(|v| v.len() != m) {
                return Err(Error::invalid(format!(
                    "backend returned a malformed batch for compiler `{name}`"
                )));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut result: Vec<Option<ObjectiveVector>> = vec![None; items.len()];
    for ((_, idx), vectors) in groups.iter().zip(answered) {
        for (&i, v) in idx.iter().zip(vectors) {
            result[i] = Some(v);
        }
    }
    Ok(result.into_iter().map(|v| v.expect("every item scattered")).collect())
}

/// System objective vectors of whole-system parameterizations.
pub fn batch_evaluate(
    catalog: &Catalog,
    system: &SystemSpec,
    parameterizations: &[Parameterization],
    backend: &dyn Backend,
) -> Result<Vec<ObjectiveVector>> {
    let n_mem = system.len();
    let mut items = Vec::with_capacity(parameterizations.len() * n_mem);
    for (i, p) in parameterizations.iter().enumerate() {
        if p.memories.len() != n_mem {
            return Err(Error::invalid(format!(
                "parameterization {i} covers {} memories, system has {n_mem}",
                p.memories.len()
            )));
        }
        for (mem, mp) in system.memories().iter().zip(&p.memories) {
            if mp.memory_id != mem.id {
                return Err(Error::invalid(format!(
                    "parameterization {i} lists memory `{}` where `{}` was expected",
                    mp.memory_id, mem.id
                )));
            }
            items.push((mem, mp));
        }
    }
    let per_memory = evaluate_memories(catalog, &items, backend)?;
    let m = catalog.objectives().len();
    Ok(per_memory
        .chunks(n_mem.max(1))
        .map(|chunk| {
            let mut total = ObjectiveVector::zeros(m);
            for v in chunk {
                total.accumulate(v);
            }
            total
        })
        .collect())
}
