use locdetect::graph::{is_collinear, to_constraint_graph, Branch, NodeId, Position};
use locdetect::netgen::{generate, ExperimentConfig};
use locdetect::oracle::rr3p_localizable_set;
use locdetect::protocols::{run_default, Protocol};
use locdetect::rigidity::{is_minimally_rigid, pebble_game_rigid};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = Position<f64>> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Position::new(x, y))
}

proptest! {
    #[test]
    fn collinearity_ignores_order(a in point(), b in point(), c in point(), exact in any::<bool>()) {
        // Half the cases put c on the segment ab.
        let c = if exact { Position::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0) } else { c };
        let tol = 1e-9;
        let r = is_collinear(a, b, c, tol);
        for (p, q, s) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(is_collinear(p, q, s, tol), r);
        }
        if exact {
            prop_assert!(r);
        }
    }

    #[test]
    fn extensions_keep_the_laman_count(seed in any::<u64>(), steps in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = Branch::random(&mut rng, steps);
        let mut b = Branch::from_roots(NodeId(0), NodeId(1)).unwrap();
        for &(v, (p, q)) in full.members() {
            b.extend_in_place(v, p, q).unwrap();
            let (g, _) = b.to_graph();
            prop_assert_eq!(g.edge_count(), 2 * g.vertex_count() - 3);
            prop_assert!(pebble_game_rigid(&g).0);
        }
    }

    #[test]
    fn dropping_the_leaf_leaves_a_valid_block(seed in any::<u64>(), steps in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = Branch::random(&mut rng, steps);
        while let Some(smaller) = b.without_leaf() {
            prop_assert_eq!(smaller.vertex_count() + 1, b.vertex_count());
            prop_assert!(is_minimally_rigid(&smaller.to_graph().0));
            b = smaller;
        }
        prop_assert_eq!(b.vertex_count(), 2);
    }

    #[test]
    fn adding_a_beacon_keeps_every_constraint(seed in 0u64..1000, pick in any::<prop::sample::Index>()) {
        let mut net = generate::<f64>(&ExperimentConfig::new(36, 2.4, 0.1, seed)).unwrap();
        let before = to_constraint_graph(&net);
        let mut beacons = net.beacons();
        beacons.push(NodeId(pick.index(net.node_count())));
        beacons.sort_unstable();
        beacons.dedup();
        net.set_beacons(&beacons);
        let after = to_constraint_graph(&net);
        for (a, b, _) in before.edges() {
            prop_assert!(after.has_edge(a, b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn protocols_are_sound_and_monotone(
        seed in 0u64..10_000,
        density in 2.2f64..3.4,
        beacon_density in 0.06f64..0.2,
    ) {
        let net = generate::<f64>(&ExperimentConfig::new(36, density, beacon_density, seed)).unwrap();
        let oracle = rr3p_localizable_set(&net).unwrap();
        for p in Protocol::ALL {
            let trace = run_default(&net, p).unwrap();
            prop_assert!(trace.converged);
            prop_assert!(oracle.violations(&trace.localizable()).is_empty(), "{} seed {}", p, seed);
            for t in &trace.transitions {
                prop_assert!(t.from < t.to);
            }
            for v in net.beacons() {
                prop_assert_eq!(trace.final_states[v.index()], locdetect::sim::LocState::Localizable);
            }
            if p == Protocol::Te {
                prop_assert!(trace.broadcasts_per_node.iter().all(|&b| b <= 2));
            }
            prop_assert_eq!(&run_default(&net, p).unwrap(), &trace);
        }
    }
}
