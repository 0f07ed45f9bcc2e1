//! Seeded generator for synthetic catalogs and memory systems of a chosen
//! size, with genuinely conflicting area/power trade-offs.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    Catalog, ComboRule, ChoiceRule, CompilerSpec, MemoryKind, MemoryRequirement, ParameterSpec,
    Region, Span, SurrogateModel, SurrogateTerm, SystemSpec,
};
use crate::error::{Error, Result};

const CLASSES: [(MemoryKind, u32); 6] = [
    (MemoryKind::Sram, 1),
    (MemoryKind::Sram, 2),
    (MemoryKind::Rf, 1),
    (MemoryKind::Rf, 2),
    (MemoryKind::Rom, 1),
    (MemoryKind::Sram, 3),
];

const ANY_BITS: Span = Span::new(1, 1 << 20);
const ANY_WORDS: Span = Span::new(1, 1 << 40);
const KNOB_SPAN: f64 = 0.3;

/// Build a deterministic (catalog, system) pair.
///
/// Compilers carry 2–10 parameters of 2–4 codes, one combo rule pair split by
/// word count, and usually one choice rule. Per-memory candidate counts land
/// within `[0.25, 4] x candidates_per_memory_target` whenever the generator
/// can reach it; it retries a bounded number of times and otherwise keeps the
/// closest memory it drew.
pub fn generate_synthetic_system(
    seed: u64,
    n_memories: usize,
    n_compilers: usize,
    candidates_per_memory_target: usize,
) -> Result<(Catalog, SystemSpec)> {
    if n_memories == 0 || n_compilers == 0 || candidates_per_memory_target == 0 {
        return Err(Error::invalid("memory, compiler and candidate counts must all be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = candidates_per_memory_target as f64;

    let class_of = |i: usize| CLASSES[i % CLASSES.len()];
    let class_size = |i: usize| (0..n_compilers).filter(|&j| class_of(j) == class_of(i)).count();

    let compilers: Vec<CompilerSpec> = (0..n_compilers)
        .map(|i| {
            let (kind, ports) = class_of(i);
            let per_compiler = (target / class_size(i) as f64).max(1.0);
            synth_compiler(&mut rng, format!("comp{i}"), kind, ports, per_compiler)
        })
        .collect();
    let catalog = Catalog::new(vec!["area".into(), "power".into()], compilers)?;

    let mut memories = Vec::with_capacity(n_memories);
    for m in 0..n_memories {
        let mut best: Option<(f64, MemoryRequirement)> = None;
        for _ in 0..256 {
            let comp = &catalog.compilers()[rng.random_range(0..n_compilers)];
            let mem = MemoryRequirement {
                id: format!("m{m}"),
                words: log_uniform(&mut rng, comp.words_range),
                bits: rng.random_range(comp.bits_range.lo..=comp.bits_range.hi),
                ports: comp.ports,
                kind: comp.kind,
            };
            let count = candidate_count(&catalog, &mem) as f64;
            let miss = (count / target).ln().abs();
            if best.as_ref().is_none_or(|(b, _)| miss < *b) {
                best = Some((miss, mem));
            }
            if miss <= 4f64.ln() {
                break;
            }
        }
        memories.push(best.expect("at least one draw").1);
    }
    let system = SystemSpec::new(memories)?;
    Ok((catalog, system))
}

fn candidate_count(catalog: &Catalog, mem: &MemoryRequirement) -> u128 {
    catalog
        .compilers()
        .iter()
        .filter(|c| c.can_build(mem))
        .map(|c| c.plan(mem).map_or(0, |p| p.candidate_count()))
        .sum()
}

fn log_uniform(rng: &mut ChaCha8Rng, span: Span) -> u64 {
    let (lo, hi) = ((span.lo as f64).ln(), (span.hi as f64).ln());
    let v = rng.random_range(lo..=hi).exp().round() as u64;
    v.clamp(span.lo, span.hi)
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn synth_compiler(
    rng: &mut ChaCha8Rng,
    name: String,
    kind: MemoryKind,
    ports: u32,
    target: f64,
) -> CompilerSpec {
    let words_range = Span::new(1 << rng.random_range(4..=6), 1 << rng.random_range(12..=14));
    let bits_range = Span::new(
        [4, 8][rng.random_range(0..2)],
        [64, 128][rng.random_range(0..2)],
    );
    // Words split points for the two combo regions and the choice rule.
    let combo_split: u64 = 1 << rng.random_range(8..=10);
    let choice_from: u64 = 1 << rng.random_range(10..=12);

    let mut best: Option<(f64, Structure)> = None;
    for _ in 0..2000 {
        let s = Structure::draw(rng);
        let counts = s.region_counts();
        let miss = counts
            .iter()
            .map(|&c| (c as f64 / target).ln().abs())
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(b, _)| miss < *b) {
            best = Some((miss, s));
        }
        if miss <= 2f64.ln() {
            break;
        }
    }
    let s = best.expect("at least one draw").1;

    let params: Vec<ParameterSpec> = s
        .codes
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let labels: Vec<String> = (0..k).map(|c| format!("p{i}_{c}")).collect();
            ParameterSpec {
                name: format!("p{i}"),
                labels,
            }
        })
        .collect();
    let (a, b) = s.pair;
    let pair_names = vec![params[a].name.clone(), params[b].name.clone()];
    let combo_rules = vec![
        ComboRule {
            region: Region::new(Span::new(ANY_WORDS.lo, combo_split), ANY_BITS),
            params: pair_names.clone(),
            allowed: s.low_tuples.clone(),
        },
        ComboRule {
            region: Region::new(Span::new(combo_split + 1, ANY_WORDS.hi), ANY_BITS),
            params: pair_names,
            allowed: s.high_tuples.clone(),
        },
    ];
    let choice_rules = s
        .choice
        .as_ref()
        .map(|(p, allowed)| ChoiceRule {
            region: Region::new(Span::new(choice_from, ANY_WORDS.hi), ANY_BITS),
            param: params[*p].name.clone(),
            allowed: allowed.clone(),
        })
        .into_iter()
        .collect();

    // Compilers differ in overall focus: cheaper area tends to cost power.
    let area_scale: f64 = rng.random_range(0.8..1.25);
    let power_scale = rng.random_range(0.9..1.1) / area_scale;
    let area_base = [500.0, 0.02, 0.5, 5.0].map(|c| round6(c * area_scale));
    let power_base = [0.5, 1e-4, 2e-3, 2e-2].map(|c| round6(c * power_scale));

    // Knob strengths are normalized so that all parameters together move an
    // objective by at most about +-KNOB_SPAN in log space, which keeps the
    // base (bit-cell array) term dominant.
    let raw_a: Vec<f64> = params.iter().map(|_| rng.random_range(0.2..1.0)).collect();
    let raw_p: Vec<f64> = params.iter().map(|_| rng.random_range(0.2..1.0)).collect();
    let (sum_a, sum_p) = (raw_a.iter().sum::<f64>(), raw_p.iter().sum::<f64>());

    let mut area_mult = BTreeMap::new();
    let mut power_mult = BTreeMap::new();
    for (i, p) in params.iter().enumerate() {
        let k = p.labels.len();
        let step = 2.0 / (k - 1) as f64;
        // Codes are ordinal settings: positions rise monotonically over
        // [-1, 1] with some jitter. Area grows with the position and power
        // shrinks, so every parameter trades one objective against the other.
        let pos: Vec<f64> = (0..k)
            .map(|c| -1.0 + step * c as f64 + rng.random_range(-0.2..0.2) * step)
            .collect();
        let sa = KNOB_SPAN * raw_a[i] / sum_a;
        let sp = KNOB_SPAN * raw_p[i] / sum_p;
        area_mult.insert(p.name.clone(), pos.iter().map(|t| round6((sa * t).exp())).collect());
        power_mult.insert(p.name.clone(), pos.iter().map(|t| round6((-sp * t).exp())).collect());
    }

    CompilerSpec {
        name,
        kind,
        ports,
        words_range,
        bits_range,
        params,
        choice_rules,
        combo_rules,
        surrogate: SurrogateModel(BTreeMap::from([
            (
                "area".to_string(),
                SurrogateTerm {
                    base: area_base,
                    multipliers: area_mult,
                },
            ),
            (
                "power".to_string(),
                SurrogateTerm {
                    base: power_base,
                    multipliers: power_mult,
                },
            ),
        ])),
    }
}

/// The discrete shape of a compiler before coefficients are attached.
struct Structure {
    codes: Vec<u32>,
    pair: (usize, usize),
    low_tuples: Vec<Vec<u32>>,
    high_tuples: Vec<Vec<u32>>,
    choice: Option<(usize, Vec<u32>)>,
}

impl Structure {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        let n = rng.random_range(2..=10);
        let codes: Vec<u32> = (0..n).map(|_| rng.random_range(2..=4)).collect();
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let pair = (a.min(b), a.max(b));
        let all: Vec<Vec<u32>> = (0..codes[pair.0])
            .flat_map(|x| (0..codes[pair.1]).map(move |y| vec![x, y]))
            .collect();
        let subset = |rng: &mut ChaCha8Rng| {
            let size = rng.random_range(2..=all.len());
            let mut pick: Vec<Vec<u32>> = all.choose_multiple(rng, size).cloned().collect();
            pick.sort();
            pick
        };
        let low_tuples = subset(rng);
        let high_tuples = subset(rng);
        let others: Vec<usize> = (0..n)
            .filter(|&i| i != pair.0 && i != pair.1 && codes[i] >= 3)
            .collect();
        let choice = others.choose(rng).map(|&p| {
            let mut allowed: Vec<u32> = (0..codes[p]).collect();
            allowed.shuffle(rng);
            allowed.truncate(codes[p] as usize - 1);
            allowed.sort();
            (p, allowed)
        });
        Structure {
            codes,
            pair,
            low_tuples,
            high_tuples,
            choice,
        }
    }

    /// Candidate counts in each of the (combo region x choice region) cells.
    fn region_counts(&self) -> Vec<u128> {
        let free: u128 = self
            .codes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != self.pair.0 && *i != self.pair.1)
            .map(|(_, &k)| k as u128)
            .product();
        let restricted = match &self.choice {
            Some((p, allowed)) => free / self.codes[*p] as u128 * allowed.len() as u128,
            None => free,
        };
        let mut out = Vec::with_capacity(4);
        for combos in [self.low_tuples.len(), self.high_tuples.len()] {
            out.push(free * combos as u128);
            out.push(restricted * combos as u128);
        }
        out
    }
}
