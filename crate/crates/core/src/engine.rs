//! DE/rand/1/bin with NSGA-II survivor selection.
//!
//! Each generation breeds one offspring per parent, repairs and evaluates all
//! offspring in one batched call, pools parents (with cached objectives) and
//! offspring, and keeps the best half. Survivors keep their original,
//! unrepaired genomes; repair output is used only for evaluation.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, SystemSpec};
use crate::error::{Error, Result};
use crate::estimator::{batch_evaluate, Backend, ObjectiveVector, Parameterization};
use crate::genome::{build_layout, init_population, repair, Genome, GenomeLayout};
use crate::pareto::{nsga2_select, skyline_dc, FrontMember};

/// Differential evolution hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    pub pop_size: usize,
    pub generations: usize,
    /// Differential weight.
    pub f: f64,
    /// Crossover probability.
    pub cr: f64,
    pub seed: u64,
}

impl Default for DeConfig {
    fn default() -> Self {
        DeConfig {
            pop_size: 20,
            generations: 50,
            f: 0.8,
            cr: 0.9,
            seed: 0,
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 {
            return Err(Error::invalid(format!(
                "population size must be at least 4, got {}",
                self.pop_size
            )));
        }
        if self.generations < 1 {
            return Err(Error::invalid("at least one generation is required"));
        }
        if !(self.f.is_finite() && self.f > 0.0) {
            return Err(Error::invalid(format!("F must be a positive number, got {}", self.f)));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::invalid(format!("CR must lie in [0, 1], got {}", self.cr)));
        }
        Ok(())
    }
}

/// `x[r1] + f * (x[r2] - x[r3])` with `r1, r2, r3` distinct and different
/// from `target`, drawn in that order.
pub fn mutate_rand1<R: Rng + ?Sized>(
    population: &[Genome],
    target: usize,
    f: f64,
    rng: &mut R,
) -> Result<Genome> {
    let n = population.len();
    if n < 4 {
        return Err(Error::invalid(format!(
            "rand/1 mutation needs at least 4 individuals, got {n}"
        )));
    }
    let mut picked = [target; 3];
    for k in 0..3 {
        picked[k] = loop {
            let r = rng.random_range(0..n);
            if r != target && !picked[..k].contains(&r) {
                break r;
            }
        };
    }
    let [a, b, c] = picked.map(|i| population[i].genes());
    Ok(Genome(
        a.iter()
            .zip(b)
            .zip(c)
            .map(|((x1, x2), x3)| x1 + f * (x2 - x3))
            .collect(),
    ))
}

/// Binomial crossover. One index `j_rand` always comes from the mutant; every
/// other gene comes from it with probability `cr`. Exactly one uniform draw is
/// consumed per gene.
pub fn crossover_bin<R: Rng + ?Sized>(
    parent: &Genome,
    mutant: &Genome,
    cr: f64,
    rng: &mut R,
) -> Result<Genome> {
    let len = parent.len();
    if mutant.len() != len {
        return Err(Error::invalid(format!(
            "crossover of genomes with lengths {len} and {}",
            mutant.len()
        )));
    }
    if len == 0 {
        return Ok(parent.clone());
    }
    let j_rand = rng.random_range(0..len);
    Ok(Genome(
        (0..len)
            .map(|k| {
                let u: f64 = rng.random();
                if u < cr || k == j_rand {
                    mutant.0[k]
                } else {
                    parent.0[k]
                }
            })
            .collect(),
    ))
}

/// Everything needed to score genomes.
pub struct Problem<'a> {
    pub catalog: &'a Catalog,
    pub system: &'a SystemSpec,
    pub layout: GenomeLayout,
    pub backend: &'a dyn Backend,
}

impl<'a> Problem<'a> {
    pub fn new(catalog: &'a Catalog, system: &'a SystemSpec, backend: &'a dyn Backend) -> Result<Self> {
        Ok(Problem {
            catalog,
            system,
            layout: build_layout(catalog, system)?,
            backend,
        })
    }

    /// Repair (in parallel) and evaluate in one batched call.
    pub fn evaluate(&self, genomes: &[Genome]) -> Result<(Vec<Parameterization>, Vec<ObjectiveVector>)> {
        let repaired: Vec<Parameterization> = genomes
            .par_iter()
            .map(|g| repair(&self.layout, self.catalog, self.system, g))
            .collect::<Result<_>>()?;
        let objectives = batch_evaluate(self.catalog, self.system, &repaired, self.backend)?;
        Ok((repaired, objectives))
    }
}

/// The current parents with their cached evaluations.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub genomes: Vec<Genome>,
    pub repaired: Vec<Parameterization>,
    pub objectives: Vec<ObjectiveVector>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.genomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genomes.is_empty()
    }
}

/// One offspring per parent, in parent order.
pub fn breed<R: Rng + ?Sized>(parents: &[Genome], cfg: &DeConfig, rng: &mut R) -> Result<Vec<Genome>> {
    (0..parents.len())
        .map(|i| {
            let mutant = mutate_rand1(parents, i, cfg.f, rng)?;
            crossover_bin(&parents[i], &mutant, cfg.cr, rng)
        })
        .collect()
}

/// Pool parents and already-evaluated offspring and keep `N` survivors.
pub fn select_survivors(
    parents: Population,
    offspring: Population,
) -> Result<Population> {
    let n = parents.len();
    let mut genomes = parents.genomes;
    genomes.extend(offspring.genomes);
    let mut repaired = parents.repaired;
    repaired.extend(offspring.repaired);
    let mut objectives = parents.objectives;
    objectives.extend(offspring.objectives);

    let pool: Vec<FrontMember> = objectives
        .iter()
        .enumerate()
        .map(|(i, o)| FrontMember {
            objectives: o.clone(),
            payload_index: i,
        })
        .collect();
    let keep = nsga2_select(&pool, n)?;

    let mut slots: Vec<Option<(Genome, Parameterization, ObjectiveVector)>> = genomes
        .into_iter()
        .zip(repaired)
        .zip(objectives)
        .map(|((g, r), o)| Some((g, r, o)))
        .collect();
    let mut next = Population {
        genomes: Vec::with_capacity(n),
        repaired: Vec::with_capacity(n),
        objectives: Vec::with_capacity(n),
    };
    for i in keep {
        let (g, r, o) = slots[i].take().expect("selected once");
        next.genomes.push(g);
        next.repaired.push(r);
        next.objectives.push(o);
    }
    Ok(next)
}

/// Breed, evaluate only the offspring, and select.
pub fn evolve_generation<R: Rng + ?Sized>(
    parents: Population,
    cfg: &DeConfig,
    problem: &Problem<'_>,
    rng: &mut R,
) -> Result<Population> {
    let genomes = breed(&parents.genomes, cfg, rng)?;
    let (repaired, objectives) = problem.evaluate(&genomes)?;
    select_survivors(
        parents,
        Population {
            genomes,
            repaired,
            objectives,
        },
    )
}

/// One non-dominated solution of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontEntry {
    pub objectives: ObjectiveVector,
    pub parameterization: Parameterization,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub config: DeConfig,
    /// Mutually non-dominated members of the final population, sorted by
    /// objective values. Members with equal objectives are all kept.
    pub final_front: Vec<FrontEntry>,
    /// Objectives of the population after initialization (index 0) and after
    /// each generation.
    pub history: Vec<Vec<ObjectiveVector>>,
    /// Individuals actually sent to the estimator: `N + G * N`.
    pub evaluations_used: usize,
    /// Pool members ranked by selection over the run: `G * 2N`.
    pub pool_comparisons: usize,
    pub wall_time: Duration,
}

/// Full optimization run, deterministic in `cfg.seed` for a deterministic
/// backend and independent of the number of worker threads.
pub fn run_optimization(
    catalog: &Catalog,
    system: &SystemSpec,
    cfg: &DeConfig,
    backend: &dyn Backend,
) -> Result<RunResult> {
    cfg.validate()?;
    let started = Instant::now();
    let problem = Problem::new(catalog, system, backend)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let genomes = init_population(&problem.layout, cfg.pop_size, &mut rng)?;
    let (repaired, objectives) = problem.evaluate(&genomes)?;
    let mut population = Population {
        genomes,
        repaired,
        objectives,
    };
    let mut history = Vec::with_capacity(cfg.generations + 1);
    history.push(population.objectives.clone());
    for _ in 0..cfg.generations {
        population = evolve_generation(population, cfg, &problem, &mut rng)?;
        history.push(population.objectives.clone());
    }

    let front_idx = skyline_dc(&population.objectives)?;
    let mut final_front: Vec<FrontEntry> = front_idx
        .into_iter()
        .map(|i| FrontEntry {
            objectives: population.objectives[i].clone(),
            parameterization: population.repaired[i].clone(),
        })
        .collect();
    final_front.sort_by(|a, b| {
        a.objectives
            .iter()
            .zip(b.objectives.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    Ok(RunResult {
        config: *cfg,
        final_front,
        history,
        evaluations_used: cfg.pop_size * (cfg.generations + 1),
        pool_comparisons: 2 * cfg.pop_size * cfg.generations,
        wall_time: started.elapsed(),
    })
}
