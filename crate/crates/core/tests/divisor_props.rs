mod common;

use common::checks;
use common::*;
use curveta_core::{Cluster, Divisor};
use proptest::prelude::*;

fn with_values(max: usize) -> impl Strategy<Value = (Cluster, Vec<i64>)> {
    cluster_strategy(max).prop_flat_map(|c| {
        let n = c.len();
        (Just(c), prop::collection::vec(0i64..12, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bases_round_trip((c, v) in with_values(10)) {
        prop_assert_eq!(checks::bases(&c, &v), Ok(()));
    }

    #[test]
    fn matrices_agree(c in cluster_strategy(10)) {
        prop_assert_eq!(checks::matrices(&c), Ok(()));
    }

    #[test]
    fn unloading_is_the_antinef_closure(
        (c, d) in antinef_strategy(10),
        cut in prop::collection::vec(0i64..6, 10),
    ) {
        let below: Vec<i64> = d.values().iter().zip(&cut).map(|(v, k)| (v - k).max(0)).collect();
        prop_assert_eq!(checks::unloading(&c, &below, &d), Ok(()));
    }

    #[test]
    fn zariski_reconstruction((c, d) in antinef_strategy(10)) {
        prop_assert_eq!(checks::zariski(&c, &d), Ok(()));
    }

    #[test]
    fn adjacent_divisors(c in cluster_strategy(10)) {
        prop_assert_eq!(checks::adjacency(&c), Ok(()));
    }

    #[test]
    fn dead_ends_keep_the_graph_connected(c in cluster_strategy(10)) {
        let g = c.dual_graph();
        let n = c.len();
        for p in 0..n {
            let mut seen = vec![false; n];
            let start = (0..n).find(|&q| q != p);
            if let Some(s) = start {
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(u) = stack.pop() {
                    for &w in &g.adjacency[u] {
                        if w != p && !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            let connected = (0..n).all(|q| q == p || seen[q]);
            prop_assert_eq!(g.is_dead_end(p), connected, "point {}", p);
            if connected {
                prop_assert_ne!(c.classify(p), curveta_core::PointKind::Satellite);
            }
        }
    }

    #[test]
    fn intersection_is_bilinear((c, d) in antinef_strategy(8), k in 1i64..4) {
        let b = curveta_core::branch_divisor(&c, c.len() - 1).unwrap();
        prop_assert_eq!(d.scale(k).intersect(&b), k * d.intersect(&b));
        prop_assert_eq!((&d + &b).intersect(&b), d.intersect(&b) + b.self_intersection());
        let n = c.intersection_matrix();
        let direct: i64 = (0..c.len())
            .flat_map(|i| (0..c.len()).map(move |j| (i, j)))
            .map(|(i, j)| d.values()[i] * n[i][j] * b.values()[j])
            .sum();
        prop_assert_eq!(d.intersect(&b), -direct);
    }
}

#[test]
fn trivial_divisor_is_fixed() {
    let c = ex28();
    let z = Divisor::zero(&c);
    assert_eq!(z.unload(&c).unwrap(), z);
}
