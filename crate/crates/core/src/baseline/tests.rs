use super::*;
use crate::catalog::{generate_synthetic_system, two_memory_toy, ComboRule, Region, Span};
use crate::estimator::SurrogateBackend;
use crate::pareto::dominates;
use crate::test_support::{compiler, memory, objectives};
use proptest::prelude::*;

fn naive_front(table: &CandidateTable) -> Vec<(Vec<usize>, Vec<f64>)> {
    let radix: Vec<usize> = table.memories.iter().map(Vec::len).collect();
    let mut all = Vec::new();
    let mut digits = vec![0; radix.len()];
    loop {
        let mut sum = vec![0.0; table.memories[0][0].objectives.len()];
        for (mem, &d) in digits.iter().enumerate() {
            for (s, v) in sum.iter_mut().zip(table.memories[mem][d].objectives.iter()) {
                *s += v;
            }
        }
        all.push((digits.clone(), sum));
        if !advance(&mut digits, &radix) {
            break;
        }
    }
    all.iter()
        .filter(|(_, v)| !all.iter().any(|(_, w)| dominates(w, v).unwrap()))
        .cloned()
        .collect()
}

fn as_pairs(front: &ExhaustiveFront) -> Vec<(Vec<usize>, Vec<f64>)> {
    front
        .front
        .iter()
        .map(|s| (s.indices.clone(), s.objectives.0.clone()))
        .collect()
}

#[test]
fn free_parameters_multiply() {
    let cat = Catalog::new(objectives(), vec![compiler("c", 1, &[3, 2])]).unwrap();
    let sys = SystemSpec::new(vec![memory("m", 64, 8, 1)]).unwrap();
    let table = enumerate_candidates(&cat, &sys, &SurrogateBackend, 100).unwrap();
    assert_eq!(table.memories[0].len(), 6);
    let codes: Vec<Vec<u32>> = table.memories[0]
        .iter()
        .map(|c| c.parameterization.codes.values().copied().collect())
        .collect();
    assert_eq!(codes, [[0, 0], [0, 1], [1, 0], [1, 1], [2, 0], [2, 1]]);
}

#[test]
fn combo_group_counts_as_one_slot() {
    let mut c = compiler("c", 1, &[4, 3, 4]);
    c.combo_rules.push(ComboRule {
        region: Region::new(Span::new(16, 65536), Span::new(1, 512)),
        params: vec!["p0".into(), "p2".into()],
        allowed: vec![vec![1, 3], vec![0, 2]],
    });
    let cat = Catalog::new(objectives(), vec![c]).unwrap();
    let sys = SystemSpec::new(vec![memory("m", 64, 8, 1)]).unwrap();
    let table = enumerate_candidates(&cat, &sys, &SurrogateBackend, 100).unwrap();
    assert_eq!(table.memories[0].len(), 6);
    let mut seen = std::collections::HashSet::new();
    for cand in &table.memories[0] {
        assert!(seen.insert(cand.parameterization.clone()), "duplicate candidate");
    }
}

#[test]
fn candidate_cap_is_enforced() {
    let cat = Catalog::new(objectives(), vec![compiler("c", 1, &[4, 4, 4])]).unwrap();
    let sys = SystemSpec::new(vec![memory("m", 64, 8, 1)]).unwrap();
    let err = enumerate_candidates(&cat, &sys, &SurrogateBackend, 63).unwrap_err();
    assert!(matches!(err, Error::Capacity { required: 64, cap: 63, .. }));
    assert_eq!(err.exit_code(), 3);
    assert!(enumerate_candidates(&cat, &sys, &SurrogateBackend, 64).is_ok());
}

#[test]
fn toy_front_has_seven_members() {
    let (cat, sys) = two_memory_toy();
    let table = enumerate_candidates(&cat, &sys, &SurrogateBackend, 100).unwrap();
    assert_eq!(table.evaluations(), 6);
    assert_eq!(table.combinations(), 9);
    let front = exhaustive_front(&table, DEFAULT_COMBO_CAP).unwrap();
    assert_eq!(front.total_combinations, 9);
    assert_eq!(front.front.len(), 7);
    assert_eq!(as_pairs(&front), naive_front(&table));

    // The instance choice pairs each memory's balanced candidate, which is
    // Pareto-optimal per memory but dominated at system level.
    let instance = [0usize, 0usize];
    for (mem, &i) in instance.iter().enumerate() {
        let own: Vec<&[f64]> = table.memories[mem].iter().map(|c| c.objectives.values()).collect();
        assert!(skyline_dc(&own).unwrap().contains(&i));
    }
    assert!(front.front.iter().all(|s| s.indices != instance));
    assert!(front.front.iter().any(|s| dominates(&s.objectives, &[3.0, 3.0]).unwrap()));
}

#[test]
fn combo_cap_counts_the_full_product() {
    let (cat, sys) = two_memory_toy();
    let table = enumerate_candidates(&cat, &sys, &SurrogateBackend, 100).unwrap();
    let err = exhaustive_front(&table, 8).unwrap_err();
    assert!(matches!(err, Error::Capacity { required: 9, cap: 8, .. }));
    assert!(err.to_string().contains('9'));
    assert!(exhaustive_front(&table, 9).is_ok());
}

#[test]
fn degenerate_tables() {
    let cat = Catalog::new(objectives(), vec![compiler("c", 1, &[1])]).unwrap();
    let sys = SystemSpec::new(vec![memory("a", 64, 8, 1), memory("b", 128, 8, 1)]).unwrap();
    let table = enumerate_candidates(&cat, &sys, &SurrogateBackend, 100).unwrap();
    let front = exhaustive_front(&table, 10).unwrap();
    assert_eq!(front.front.len(), 1);
    assert_eq!(front.front[0].indices, [0, 0]);

    let (cat, sys) = generate_synthetic_system(3, 1, 2, 100).unwrap();
    let table = enumerate_candidates(&cat, &sys, &SurrogateBackend, 10_000).unwrap();
    let front = exhaustive_front(&table, u128::MAX).unwrap();
    let own: Vec<&[f64]> = table.memories[0].iter().map(|c| c.objectives.values()).collect();
    let expected: Vec<Vec<usize>> = skyline_dc(&own).unwrap().into_iter().map(|i| vec![i]).collect();
    let got: Vec<Vec<usize>> = front.front.iter().map(|s| s.indices.clone()).collect();
    assert_eq!(got, expected);

    let empty = CandidateTable { memories: vec![] };
    assert!(exhaustive_front(&empty, 10).is_err());
    let opts = ExhaustiveOptions { block_size: 0, ..ExhaustiveOptions::default() };
    assert!(exhaustive_front_with(&table, opts).is_err());
}

fn small_table(seed: u64, n: usize) -> CandidateTable {
    let (cat, sys) = generate_synthetic_system(seed, n, 3, 12).unwrap();
    enumerate_candidates(&cat, &sys, &SurrogateBackend, 10_000).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn streaming_matches_materialized(seed in 0u64..5000, n in 1usize..4, block in 1usize..300) {
        let table = small_table(seed, n);
        prop_assume!(table.combinations() <= 20_000);
        let opts = ExhaustiveOptions { combo_cap: u128::MAX, block_size: block };
        let front = exhaustive_front_with(&table, opts).unwrap();
        prop_assert_eq!(as_pairs(&front), naive_front(&table));
    }

    #[test]
    fn front_sums_recompute(seed in 0u64..5000, n in 2usize..5) {
        let table = small_table(seed, n);
        let front = exhaustive_front(&table, u128::MAX).unwrap();
        for s in &front.front {
            let mut sum = ObjectiveVector::zeros(s.objectives.len());
            for (mem, &i) in s.indices.iter().enumerate() {
                sum.accumulate(&table.memories[mem][i].objectives);
            }
            prop_assert_eq!(&sum, &s.objectives);
        }
        prop_assert!(front.enumerated_combinations <= front.total_combinations);
    }
}
