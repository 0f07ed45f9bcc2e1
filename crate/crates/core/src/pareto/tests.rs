use super::*;
use proptest::prelude::*;

/// The nine system sums of the two-memory toy, in combination order.
fn toy_sums() -> Vec<Vec<f64>> {
    let a = [(1.0, 1.0), (1.9, 0.01), (0.1, 1.9)];
    let b = [(2.0, 2.0), (1.0, 2.5), (2.5, 1.5)];
    a.iter()
        .flat_map(|x| b.iter().map(move |y| vec![x.0 + y.0, x.1 + y.1]))
        .collect()
}

fn naive_skyline(points: &[Vec<f64>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| dominates_unchecked(q, &points[i])))
        .collect()
}

fn members(points: &[Vec<f64>]) -> Vec<FrontMember> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| FrontMember {
            objectives: ObjectiveVector(p.clone()),
            payload_index: i,
        })
        .collect()
}

#[test]
fn dominance_examples() {
    let toy = toy_sums();
    // (1.9, 0.01) + (1.0, 2.5) against (1.0, 1.0) + (2.0, 2.0).
    assert!(dominates(&toy[4], &toy[0]).unwrap());
    assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
    assert!(!dominates(&[0.1, 1.9], &[1.9, 0.01]).unwrap());
    assert!(!dominates(&[1.9, 0.01], &[0.1, 1.9]).unwrap());
    assert!(dominates(&[1.0, 2.0], &[1.0]).is_err());
}

#[test]
fn toy_sums_match_the_worked_values() {
    let toy = toy_sums();
    let close = |p: &[f64], q: [f64; 2]| (p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12;
    assert!(close(&toy[0], [3.0, 3.0]));
    assert!(close(&toy[4], [2.9, 2.51]));
}

#[test]
fn toy_fronts_are_seven_and_two() {
    let toy = toy_sums();
    let fronts = fast_nondominated_sort(&toy).unwrap();
    assert_eq!(fronts.len(), 2);
    assert_eq!(fronts[0], [1, 2, 3, 4, 5, 7, 8]);
    assert_eq!(fronts[1], [0, 6]);
    assert_eq!(skyline_dc(&toy).unwrap(), fronts[0]);
}

#[test]
fn sorting_edge_cases() {
    let same = vec![vec![1.0, 2.0]; 4];
    assert_eq!(fast_nondominated_sort(&same).unwrap(), [vec![0, 1, 2, 3]]);
    let chain = vec![vec![3.0, 3.0], vec![1.0, 1.0], vec![2.0, 2.0]];
    assert_eq!(fast_nondominated_sort(&chain).unwrap(), [vec![1], vec![2], vec![0]]);
    assert!(fast_nondominated_sort::<Vec<f64>>(&[]).is_err());
    assert!(fast_nondominated_sort(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    assert!(skyline_dc(&[vec![f64::NAN, 1.0]]).is_err());
}

#[test]
fn crowding_examples() {
    let d = crowding_distance(&[vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]]);
    assert_eq!(d, [f64::INFINITY, 2.0, f64::INFINITY]);
    assert_eq!(crowding_distance(&[vec![5.0, 1.0]]), [f64::INFINITY]);
    assert_eq!(crowding_distance(&[vec![5.0, 1.0], vec![1.0, 5.0]]), [f64::INFINITY; 2]);
    // A constant objective adds nothing, not even boundary infinities.
    let d = crowding_distance(&[vec![0.0, 7.0], vec![1.0, 7.0], vec![3.0, 7.0]]);
    assert_eq!(d, [f64::INFINITY, 1.0, f64::INFINITY]);
    let d = crowding_distance(&vec![vec![1.0, 1.0]; 3]);
    assert_eq!(d, [0.0; 3]);
}

#[test]
fn selection_examples() {
    let tri = members(&[vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]]);
    assert_eq!(nsga2_select(&tri, 2).unwrap(), [0, 2]);
    assert_eq!(nsga2_select(&tri, 3).unwrap(), [0, 1, 2]);
    assert!(nsga2_select(&tri, 4).is_err());

    let mut pool = members(&[vec![0.0, 3.0], vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 0.0]]);
    pool.extend(members(&[vec![5.0, 5.0], vec![6.0, 6.0], vec![7.0, 7.0], vec![8.0, 8.0]]));
    for (i, m) in pool.iter_mut().enumerate() {
        m.payload_index = i;
    }
    assert_eq!(nsga2_select(&pool, 4).unwrap(), [0, 1, 2, 3]);

    // Equal crowding: the lower payload index survives.
    let mut eq = members(&[vec![0.0, 4.0], vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0], vec![4.0, 0.0]]);
    eq.reverse();
    for (i, m) in eq.iter_mut().enumerate() {
        m.payload_index = 10 + i;
    }
    assert_eq!(nsga2_select(&eq, 3).unwrap(), [10, 11, 14]);
}

#[test]
fn skyline_edge_cases() {
    assert_eq!(skyline_dc(&[vec![1.0, 1.0]]).unwrap(), [0]);
    assert_eq!(skyline_dc(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap(), [0, 1]);
    assert_eq!(skyline_dc(&[vec![-0.0, 1.0], vec![0.0, 1.0]]).unwrap(), [0, 1]);
    assert!(skyline_dc::<Vec<f64>>(&[]).is_err());
}

fn points(m: usize, max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    // Small integer grids produce many ties and duplicates.
    prop_oneof![
        prop::collection::vec(prop::collection::vec((0u8..6).prop_map(f64::from), m), 1..max_n),
        prop::collection::vec(prop::collection::vec(-1e3f64..1e3, m), 1..max_n),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn skyline_matches_naive(pts in (2usize..4).prop_flat_map(|m| points(m, 400))) {
        prop_assert_eq!(skyline_dc(&pts).unwrap(), naive_skyline(&pts));
    }

    #[test]
    fn first_front_is_the_skyline(pts in (1usize..4).prop_flat_map(|m| points(m, 120))) {
        let fronts = fast_nondominated_sort(&pts).unwrap();
        prop_assert_eq!(&fronts[0], &skyline_dc(&pts).unwrap());
        let mut all: Vec<usize> = fronts.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..pts.len()).collect::<Vec<_>>());
        for (k, front) in fronts.iter().enumerate().skip(1) {
            for &i in front {
                prop_assert!(fronts[k - 1].iter().any(|&j| dominates_unchecked(&pts[j], &pts[i])));
            }
        }
    }

    #[test]
    fn selection_is_elitist(pts in points(2, 60), frac in 0.0f64..1.0) {
        let n = ((pts.len() as f64 * frac) as usize).max(1);
        let pool = members(&pts);
        let chosen = nsga2_select(&pool, n).unwrap();
        prop_assert_eq!(chosen.len(), n);
        prop_assert!(chosen.windows(2).all(|w| w[0] < w[1]));
        let front = skyline_dc(&pts).unwrap();
        if front.len() <= n {
            prop_assert!(front.iter().all(|i| chosen.contains(i)));
        } else {
            prop_assert!(chosen.iter().all(|i| front.contains(i)));
        }
    }

    #[test]
    fn ranks_survive_monotone_transforms(
        grid in prop::collection::vec(prop::collection::vec(0u8..6, 3), 1..80),
    ) {
        let pts: Vec<Vec<f64>> = grid.iter().map(|p| p.iter().map(|&x| f64::from(x)).collect()).collect();
        let warped: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| vec![p[0].exp(), 3.0 * p[1] - 7.0, p[2].powi(3)])
            .collect();
        prop_assert_eq!(fast_nondominated_sort(&pts).unwrap(), fast_nondominated_sort(&warped).unwrap());
    }

    #[test]
    fn dominance_is_a_strict_partial_order(
        a in prop::collection::vec(0u8..4, 3),
        b in prop::collection::vec(0u8..4, 3),
        c in prop::collection::vec(0u8..4, 3),
    ) {
        let (a, b, c): (Vec<f64>, Vec<f64>, Vec<f64>) = (
            a.into_iter().map(f64::from).collect(),
            b.into_iter().map(f64::from).collect(),
            c.into_iter().map(f64::from).collect(),
        );
        prop_assert!(!dominates(&a, &a).unwrap());
        prop_assert!(!(dominates(&a, &b).unwrap() && dominates(&b, &a).unwrap()));
        if dominates(&a, &b).unwrap() && dominates(&b, &c).unwrap() {
            prop_assert!(dominates(&a, &c).unwrap());
        }
    }
}

#[test]
fn large_skyline_uses_parallel_halves() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let pts: Vec<Vec<f64>> = (0..20_000)
        .map(|_| {
            let x: f64 = rng.random_range(0.0..1.0);
            vec![x, 1.0 - x + rng.random_range(0.0..0.05), rng.random_range(0.0..1.0)]
        })
        .collect();
    assert_eq!(skyline_dc(&pts).unwrap(), naive_skyline(&pts));
}
