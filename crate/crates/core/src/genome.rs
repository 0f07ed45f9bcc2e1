//! Fixed-width real-valued encoding of a whole-system parameterization and
//! the repair that maps any finite genome to the nearest feasible one.
//!
//! Every memory owns a contiguous block. Gene 0 of a block picks the compiler
//! (index into the memory's eligible list); gene `1 + k` holds the `k`-th
//! parameter of whichever compiler was picked. Blocks are as wide as the
//! eligible compiler with the most parameters, plus one.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, FeasiblePlan, Slot, SystemSpec};
use crate::error::{Error, Result};
use crate::estimator::{MemoryParameterization, Parameterization};

/// A real-valued individual. Genes are unbounded; repair absorbs any value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Genome(pub Vec<f64>);

impl Genome {
    pub fn genes(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|g| g.is_finite())
    }
}

/// Genes belonging to one memory.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryBlock {
    pub offset: usize,
    pub width: usize,
    /// Catalog indices of the eligible compilers, in catalog order.
    pub eligible: Vec<usize>,
    /// Feasible structure of each eligible compiler for this memory.
    plans: Vec<FeasiblePlan>,
    /// Number of codes addressable at each block position.
    span: Vec<u32>,
}

impl MemoryBlock {
    /// Largest code count reachable at each position of the block.
    pub fn position_code_counts(&self) -> &[u32] {
        &self.span
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenomeLayout {
    blocks: Vec<MemoryBlock>,
    total_len: usize,
}

impl GenomeLayout {
    pub fn blocks(&self) -> &[MemoryBlock] {
        &self.blocks
    }

    pub fn total_len(&self) -> usize {
        self.total_len
    }
}

/// Lay out one block per memory, in system order.
pub fn build_layout(catalog: &Catalog, system: &SystemSpec) -> Result<GenomeLayout> {
    let mut blocks = Vec::with_capacity(system.len());
    let mut offset = 0;
    for mem in system.memories() {
        let eligible = catalog.eligible_indices(mem)?;
        let compilers: Vec<_> = eligible.iter().map(|&i| &catalog.compilers()[i]).collect();
        let width = 1 + compilers.iter().map(|c| c.params.len()).max().unwrap_or(0);
        let mut span = vec![1u32; width];
        span[0] = eligible.len() as u32;
        for c in &compilers {
            for (k, p) in c.params.iter().enumerate() {
                span[k + 1] = span[k + 1].max(p.code_count());
            }
        }
        let plans = compilers.iter().map(|c| c.plan(mem)).collect::<Result<_>>()?;
        blocks.push(MemoryBlock {
            offset,
            width,
            eligible,
            plans,
            span,
        });
        offset += width;
    }
    Ok(GenomeLayout {
        blocks,
        total_len: offset,
    })
}

/// Draw `pop_size` genomes, each gene uniform in `[-0.5, K - 0.5)` where `K`
/// is the number of codes addressable at that position.
pub fn init_population<R: Rng + ?Sized>(
    layout: &GenomeLayout,
    pop_size: usize,
    rng: &mut R,
) -> Result<Vec<Genome>> {
    if pop_size < 4 {
        return Err(Error::invalid(format!(
            "population size must be at least 4, got {pop_size}"
        )));
    }
    let spans: Vec<u32> = layout
        .blocks
        .iter()
        .flat_map(|b| b.span.iter().copied())
        .collect();
    Ok((0..pop_size)
        .map(|_| {
            Genome(
                spans
                    .iter()
                    .map(|&k| rng.random_range(-0.5..k as f64 - 0.5))
                    .collect(),
            )
        })
        .collect())
}

/// Index of the value in `0..n` closest to `x`; ties go to the lower index.
fn nearest_index(x: f64, n: usize) -> usize {
    let mut best = 0;
    let mut best_d = (x - 0.0).abs();
    for j in 1..n {
        let d = (x - j as f64).abs();
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

/// Map a genome to a feasible parameterization.
///
/// Per memory: the compiler first (nearest eligible index), then every free
/// parameter (nearest feasible code), then every combo group (feasible tuple
/// at the smallest Euclidean distance). All ties resolve to the smaller
/// code or lexicographically smaller tuple. The genome is not modified.
pub fn repair(
    layout: &GenomeLayout,
    catalog: &Catalog,
    system: &SystemSpec,
    genome: &Genome,
) -> Result<Parameterization> {
    if genome.len() != layout.total_len || layout.blocks.len() != system.len() {
        return Err(Error::invalid(format!(
            "genome of length {} does not match layout of length {}",
            genome.len(),
            layout.total_len
        )));
    }
    let memories = layout
        .blocks
        .iter()
        .zip(system.memories())
        .map(|(block, mem)| {
            let genes = &genome.0[block.offset..block.offset + block.width];
            let choice = nearest_index(genes[0], block.eligible.len());
            let comp = &catalog.compilers()[block.eligible[choice]];
            let plan = &block.plans[choice];
            let mut codes = BTreeMap::new();
            // Free parameters before combo groups; the result does not depend
            // on the order because slots are disjoint.
            for slot in &plan.slots {
                if let Slot::Free { param, codes: allowed } = slot {
                    let g = genes[1 + param];
                    let code = nearest_code(g, allowed);
                    codes.insert(comp.params[*param].name.clone(), code);
                }
            }
            for slot in &plan.slots {
                if let Slot::Combo { params, tuples } = slot {
                    let target: Vec<f64> = params.iter().map(|&p| genes[1 + p]).collect();
                    let tuple = nearest_tuple(&target, tuples);
                    for (&p, &c) in params.iter().zip(tuple) {
                        codes.insert(comp.params[p].name.clone(), c);
                    }
                }
            }
            MemoryParameterization {
                memory_id: mem.id.clone(),
                compiler: comp.name.clone(),
                codes,
            }
        })
        .collect();
    Ok(Parameterization { memories })
}

fn nearest_code(g: f64, allowed: &[u32]) -> u32 {
    let mut best = allowed[0];
    let mut best_d = (g - best as f64).abs();
    for &c in &allowed[1..] {
        let d = (g - c as f64).abs();
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn nearest_tuple<'a>(target: &[f64], tuples: &'a [Vec<u32>]) -> &'a [u32] {
    let dist = |t: &[u32]| -> f64 {
        t.iter()
            .zip(target)
            .map(|(&c, &g)| (g - c as f64) * (g - c as f64))
            .sum()
    };
    let mut best = &tuples[0];
    let mut best_d = dist(best);
    for t in &tuples[1..] {
        let d = dist(t);
        if d < best_d {
            best = t;
            best_d = d;
        }
    }
    best
}

/// Write a feasible parameterization back into a genome: compiler index at
/// gene 0, codes at parameter positions, zeros elsewhere.
pub fn encode(layout: &GenomeLayout, catalog: &Catalog, param: &Parameterization) -> Result<Genome> {
    if param.memories.len() != layout.blocks.len() {
        return Err(Error::invalid("parameterization does not match the layout"));
    }
    let mut genes = vec![0.0; layout.total_len];
    for (block, mp) in layout.blocks.iter().zip(&param.memories) {
        let comp_idx = catalog
            .compiler_index(&mp.compiler)
            .ok_or_else(|| Error::invalid(format!("unknown compiler `{}`", mp.compiler)))?;
        let choice = block
            .eligible
            .iter()
            .position(|&i| i == comp_idx)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "compiler `{}` is not eligible for memory `{}`",
                    mp.compiler, mp.memory_id
                ))
            })?;
        genes[block.offset] = choice as f64;
        let comp = &catalog.compilers()[comp_idx];
        for (k, p) in comp.params.iter().enumerate() {
            let code = mp.codes.get(&p.name).ok_or_else(|| {
                Error::invalid(format!("memory `{}` lacks parameter `{}`", mp.memory_id, p.name))
            })?;
            genes[block.offset + 1 + k] = *code as f64;
        }
    }
    Ok(Genome(genes))
}
