//! Exhaustive ground truth: every feasible candidate of every memory, every
//! system combination, and the exact global Pareto set.
//!
//! A combination that uses a candidate dominated within its own memory is
//! dominated at system level too (swap in the dominating candidate), so only
//! per-memory non-dominated candidates are combined. The remaining product is
//! streamed in fixed-size blocks; each block is reduced to its skyline and
//! merged into a running skyline, so memory stays bounded by the block size
//! plus the front.

use rayon::prelude::*;

use crate::catalog::{Catalog, Slot, SystemSpec};
use crate::error::{Error, Result};
use crate::estimator::{evaluate_memories, Backend, MemoryParameterization, ObjectiveVector};
use crate::pareto::skyline_dc;

pub const DEFAULT_CANDIDATE_CAP: u128 = 100_000;
pub const DEFAULT_COMBO_CAP: u128 = 1_000_000_000;
pub const DEFAULT_BLOCK_SIZE: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub parameterization: MemoryParameterization,
    pub objectives: ObjectiveVector,
}

/// Every feasible candidate of every memory, in system order.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateTable {
    pub memories: Vec<Vec<Candidate>>,
}

impl CandidateTable {
    /// Number of system-level combinations.
    pub fn combinations(&self) -> u128 {
        self.memories.iter().map(|c| c.len() as u128).product()
    }

    /// Number of distinct per-memory evaluations.
    pub fn evaluations(&self) -> usize {
        self.memories.iter().map(Vec::len).sum()
    }
}

/// Enumerate and evaluate every feasible parameterization of every memory.
///
/// Per memory, compilers come in catalog order and each compiler's
/// candidates in mixed-radix order over its slots (last slot fastest).
pub fn enumerate_candidates(
    catalog: &Catalog,
    system: &SystemSpec,
    backend: &dyn Backend,
    per_memory_cap: u128,
) -> Result<CandidateTable> {
    let mut params: Vec<Vec<MemoryParameterization>> = Vec::with_capacity(system.len());
    for mem in system.memories() {
        let mut plans = Vec::new();
        for comp in catalog.eligible_compilers(mem)? {
            plans.push((comp, comp.plan(mem)?));
        }
        let count: u128 = plans.iter().map(|(_, p)| p.candidate_count()).sum();
        if count > per_memory_cap {
            return Err(Error::Capacity {
                what: format!("exhaustive enumeration of memory `{}`", mem.id),
                required: count,
                cap: per_memory_cap,
            });
        }
        let mut list = Vec::with_capacity(count as usize);
        for (comp, plan) in plans {
            let radix: Vec<usize> = plan.slots.iter().map(Slot::choices).collect();
            let mut digits = vec![0usize; radix.len()];
            loop {
                let mut codes = std::collections::BTreeMap::new();
                for (slot, &d) in plan.slots.iter().zip(&digits) {
                    match slot {
                        Slot::Free { param, codes: allowed } => {
                            codes.insert(comp.params[*param].name.clone(), allowed[d]);
                        }
                        Slot::Combo { params, tuples } => {
                            for (&p, &c) in params.iter().zip(&tuples[d]) {
                                codes.insert(comp.params[p].name.clone(), c);
                            }
                        }
                    }
                }
                list.push(MemoryParameterization {
                    memory_id: mem.id.clone(),
                    compiler: comp.name.clone(),
                    codes,
                });
                if !advance(&mut digits, &radix) {
                    break;
                }
            }
        }
        params.push(list);
    }

    let items: Vec<_> = system
        .memories()
        .iter()
        .zip(&params)
        .flat_map(|(mem, list)| list.iter().map(move |p| (mem, p)))
        .collect();
    let mut values = evaluate_memories(catalog, &items, backend)?.into_iter();
    let memories = params
        .into_iter()
        .map(|list| {
            list.into_iter()
                .map(|parameterization| Candidate {
                    parameterization,
                    objectives: values.next().expect("one value per candidate"),
                })
                .collect()
        })
        .collect();
    Ok(CandidateTable { memories })
}

/// Increment a mixed-radix counter, last digit fastest. False on wrap-around.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radix[k] {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// One system-level combination: a candidate index per memory and the summed
/// objectives.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemCandidate {
    pub indices: Vec<usize>,
    pub objectives: ObjectiveVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExhaustiveOptions {
    /// Upper bound on the full combination count.
    pub combo_cap: u128,
    /// Combinations per streamed block.
    pub block_size: usize,
}

impl Default for ExhaustiveOptions {
    fn default() -> Self {
        ExhaustiveOptions {
            combo_cap: DEFAULT_COMBO_CAP,
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustiveFront {
    /// The global Pareto set in combination order (last memory fastest).
    pub front: Vec<SystemCandidate>,
    /// Size of the full system design space.
    pub total_combinations: u128,
    /// Combinations actually summed after per-memory dominance pruning.
    pub enumerated_combinations: u128,
}

/// Global Pareto set with the default block size.
pub fn exhaustive_front(table: &CandidateTable, combo_cap: u128) -> Result<ExhaustiveFront> {
    exhaustive_front_with(
        table,
        ExhaustiveOptions {
            combo_cap,
            ..ExhaustiveOptions::default()
        },
    )
}

struct BlockSky {
    ordinals: Vec<u64>,
    values: Vec<f64>,
}

pub fn exhaustive_front_with(table: &CandidateTable, opts: ExhaustiveOptions) -> Result<ExhaustiveFront> {
    if table.memories.is_empty() || table.memories.iter().any(Vec::is_empty) {
        return Err(Error::invalid("candidate table has a memory without candidates"));
    }
    if opts.block_size == 0 {
        return Err(Error::invalid("block size must be positive"));
    }
    let total = table.combinations();
    if total > opts.combo_cap {
        return Err(Error::Capacity {
            what: "exhaustive system search".into(),
            required: total,
            cap: opts.combo_cap,
        });
    }
    let m = table.memories[0][0].objectives.len();

    let kept: Vec<Vec<usize>> = table
        .memories
        .iter()
        .map(|cands| {
            let pts: Vec<&[f64]> = cands.iter().map(|c| c.objectives.values()).collect();
            skyline_dc(&pts)
        })
        .collect::<Result<_>>()?;
    let radix: Vec<usize> = kept.iter().map(Vec::len).collect();
    let enumerated: u128 = radix.iter().map(|&r| r as u128).product();
    let enumerated = u64::try_from(enumerated).map_err(|_| Error::Capacity {
        what: "exhaustive system search".into(),
        required: enumerated,
        cap: u64::MAX as u128,
    })?;

    let decode = |mut ordinal: u64, digits: &mut [usize]| {
        for k in (0..radix.len()).rev() {
            digits[k] = (ordinal % radix[k] as u64) as usize;
            ordinal /= radix[k] as u64;
        }
    };
    let vector = |digits: &[usize], out: &mut Vec<f64>| {
        let start = out.len();
        out.resize(start + m, 0.0);
        let acc = &mut out[start..];
        for (mem, &d) in digits.iter().enumerate() {
            let v = &table.memories[mem][kept[mem][d]].objectives;
            for (a, b) in acc.iter_mut().zip(v.iter()) {
                *a += b;
            }
        }
    };
    let skyline_of = |sky: BlockSky| -> Result<BlockSky> {
        let rows: Vec<&[f64]> = sky.values.chunks(m).collect();
        let keep = skyline_dc(&rows)?;
        let mut out = BlockSky {
            ordinals: Vec::with_capacity(keep.len()),
            values: Vec::with_capacity(keep.len() * m),
        };
        for i in keep {
            out.ordinals.push(sky.ordinals[i]);
            out.values.extend_from_slice(rows[i]);
        }
        Ok(out)
    };

    let block = opts.block_size as u64;
    let n_blocks = enumerated.div_ceil(block);
    let merged = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * block;
            let end = (start + block).min(enumerated);
            let mut digits = vec![0usize; radix.len()];
            decode(start, &mut digits);
            let mut sky = BlockSky {
                ordinals: Vec::with_capacity((end - start) as usize),
                values: Vec::with_capacity((end - start) as usize * m),
            };
            for ordinal in start..end {
                sky.ordinals.push(ordinal);
                vector(&digits, &mut sky.values);
                advance(&mut digits, &radix);
            }
            skyline_of(sky)
        })
        .try_reduce_with(|mut a, b| {
            a.ordinals.extend(b.ordinals);
            a.values.extend(b.values);
            skyline_of(a)
        })
        .expect("at least one block")?;

    let mut order: Vec<usize> = (0..merged.ordinals.len()).collect();
    order.sort_by_key(|&i| merged.ordinals[i]);
    let mut digits = vec![0usize; radix.len()];
    let front = order
        .into_iter()
        .map(|i| {
            decode(merged.ordinals[i], &mut digits);
            SystemCandidate {
                indices: digits.iter().enumerate().map(|(mem, &d)| kept[mem][d]).collect(),
                objectives: ObjectiveVector(merged.values[i * m..(i + 1) * m].to_vec()),
            }
        })
        .collect();

    Ok(ExhaustiveFront {
        front,
        total_combinations: total,
        enumerated_combinations: enumerated as u128,
    })
}

#[cfg(test)]
mod tests;
