use proptest::prelude::*;
use uniform_channel::cayley::{build_cayley, walk_apply, GroupDistribution};
use uniform_channel::channel::{
    bernoulli_count, iterations_for_epsilon, seeded_rng, share, trace_norm, DensityMatrix,
    QuantumChannel,
};
use uniform_channel::gip::{decode_graph, encode_graph, GraphCode};
use uniform_channel::group_rep::{
    edge_count, neighbor_swap_decomposition, star_generators, symmetric_group, GroupElement,
    VertexPermutation,
};

fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(&mut seeded_rng(seed));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_action_is_a_homomorphism(n in 2usize..=8, s1 in any::<u64>(), s2 in any::<u64>(), x in any::<u64>()) {
        let a = VertexPermutation::from_one_line(&shuffled(n, s1)).unwrap();
        let b = VertexPermutation::from_one_line(&shuffled(n, s2)).unwrap();
        let (ga, gb) = (GroupElement::edge_relabel(a.clone()), GroupElement::edge_relabel(b.clone()));
        let gab = GroupElement::edge_relabel(a.compose(&b));
        let x = (x % (1u64 << edge_count(n))) as usize;
        let step = ga.map_index(gb.map_index(x).unwrap()).unwrap();
        prop_assert_eq!(gab.map_index(x).unwrap(), step);
        let inv = GroupElement::edge_relabel(a.inverse());
        prop_assert_eq!(inv.map_index(ga.map_index(x).unwrap()).unwrap(), x);
    }

    #[test]
    fn relabelling_preserves_edge_count(n in 2usize..=8, s in any::<u64>(), x in any::<u64>()) {
        let g = GroupElement::edge_relabel(VertexPermutation::from_one_line(&shuffled(n, s)).unwrap());
        let x = (x % (1u64 << edge_count(n))) as usize;
        prop_assert_eq!(g.map_index(x).unwrap().count_ones(), x.count_ones());
    }

    #[test]
    fn graph_codes_round_trip(n in 2usize..=8, x in any::<u64>()) {
        let code = GraphCode::new(n, x % (1u64 << edge_count(n))).unwrap();
        let edges = decode_graph(code);
        prop_assert_eq!(encode_graph(n, &edges).unwrap(), code);
        prop_assert!(edges.iter().all(|&(i, j)| 1 <= i && i < j && j <= n));
    }

    #[test]
    fn swap_decomposition_realises_transposition(n in 3usize..=8, p in 1usize..=8, q in 1usize..=8, x in any::<u64>()) {
        prop_assume!(p < q && q <= n);
        let d = neighbor_swap_decomposition(p, q, n).unwrap();
        let t = GroupElement::edge_relabel(VertexPermutation::transposition(p, q, n).unwrap());
        let x = (x % (1u64 << edge_count(n))) as usize;
        prop_assert_eq!(d.apply(x), t.map_index(x).unwrap());
        prop_assert!(d.swaps.iter().all(|&(a, b)| b == a + 1));
    }

    #[test]
    fn walk_keeps_distributions_stochastic(seed in any::<u64>(), steps in 1usize..20) {
        let group = symmetric_group(4).unwrap();
        let graph = build_cayley(&group, &star_generators(4).unwrap()).unwrap();
        let mut u = GroupDistribution::random(group.len(), &mut seeded_rng(seed));
        let start = u.distance_to_uniform();
        for _ in 0..steps {
            u = walk_apply(&graph, &u).unwrap();
        }
        prop_assert!((u.sum() - 1.0).abs() < 1e-12);
        prop_assert!(u.weights().iter().all(|&w| w >= 0.0));
        prop_assert!(u.distance_to_uniform() <= start + 1e-12);
    }

    #[test]
    fn mixtures_are_trace_preserving(seed in any::<u64>()) {
        let group = share(symmetric_group(3).unwrap());
        let mut rng = seeded_rng(seed);
        let channel = QuantumChannel::new(group.clone(), GroupDistribution::random(6, &mut rng)).unwrap();
        let rho = DensityMatrix::random_mixed(8, &mut rng).unwrap();
        let out = channel.apply(&rho).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-10);
        prop_assert!(out.min_eigenvalue() > -1e-9);
        prop_assert!((trace_norm(out.matrix()).unwrap() - 1.0).abs() < 1e-9);
        let diff = rho.matrix() - out.matrix();
        prop_assert!(trace_norm(&diff).unwrap() <= 2.0 + 1e-9);
    }

    #[test]
    fn smaller_epsilon_needs_more_steps(e1 in 1e-9f64..0.9, e2 in 1e-9f64..0.9, n in 3usize..=8) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let big = iterations_for_epsilon(lo, 1.0, 1.0, edge_count(n)).unwrap();
        let small = iterations_for_epsilon(hi, 1.0, 1.0, edge_count(n)).unwrap();
        prop_assert!(big >= small);
    }

    #[test]
    fn bernoulli_counts_are_reproducible(p in 0.0f64..=1.0, samples in 1u64..5000, seed in any::<u64>()) {
        let a = bernoulli_count(p, samples, seed).unwrap();
        prop_assert_eq!(a, bernoulli_count(p, samples, seed).unwrap());
        prop_assert!(a <= samples);
    }
}
