use std::collections::BTreeSet;

use locdetect::graph::{build_network, to_constraint_graph, Graph, NodeId, Position};
use locdetect::netgen::{generate, ExperimentConfig};
use locdetect::oracle::{redundantly_rigid_components, rr3p_localizable_set, three_disjoint_paths_to_beacons};
use locdetect::report::load_scenario;
use locdetect::rigidity::is_globally_rigid;
use locdetect::Error;

fn square(beacons: &[bool]) -> locdetect::NetworkGraph64 {
    let pos = vec![
        Position::new(0.0, 0.0),
        Position::new(4.0, 0.0),
        Position::new(0.0, 4.0),
        Position::new(4.0, 4.0),
    ];
    build_network(pos, beacons, 10.0).unwrap()
}

#[test]
fn k4_is_one_component() {
    assert_eq!(redundantly_rigid_components(&Graph::complete(4)), vec![vec![0, 1, 2, 3]]);
}

#[test]
fn k4s_sharing_a_vertex_are_two_components() {
    let mut g = Graph::new(7);
    for block in [[0, 1, 2, 3], [3, 4, 5, 6]] {
        for i in 0..4 {
            for j in i + 1..4 {
                g.add_edge(block[i], block[j]);
            }
        }
    }
    let mut comps = redundantly_rigid_components(&g);
    comps.sort();
    assert_eq!(comps, vec![vec![0, 1, 2, 3], vec![3, 4, 5, 6]]);
}

#[test]
fn tree_has_no_component() {
    let mut g = Graph::path(5);
    g.add_edge(1, 4);
    assert!(redundantly_rigid_components(&g).iter().all(|c| c.len() < 2));
}

#[test]
fn three_beacon_neighbours_give_three_paths() {
    let paths = three_disjoint_paths_to_beacons(&Graph::complete(4), 0, &[1, 2, 3], None)
        .unwrap()
        .unwrap();
    assert_eq!(paths.len(), 3);
    assert!(paths.iter().all(|p| p.len() == 2 && p[0] == 0));
}

#[test]
fn cut_vertex_blocks_paths() {
    // 0 - 1 - {2, 3, 4}, with the beacons forming a triangle.
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (2, 4)]).unwrap();
    assert_eq!(three_disjoint_paths_to_beacons(&g, 0, &[2, 3, 4], None).unwrap(), None);
}

#[test]
fn too_few_beacons_is_an_error() {
    let err = three_disjoint_paths_to_beacons(&Graph::complete(4), 0, &[1, 2], None);
    assert!(matches!(err, Err(Error::TooFewBeacons { needed: 3, got: 2 })));
}

#[test]
fn k4_with_three_beacons_is_all_localizable() {
    let set = rr3p_localizable_set(&square(&[true, true, true, false])).unwrap();
    assert!(!set.degenerate);
    assert_eq!(set.len(), 4);
}

#[test]
fn collinear_beacons_are_degenerate() {
    let pos = vec![
        Position::new(0.0, 0.0),
        Position::new(3.0, 0.0),
        Position::new(6.0, 0.0),
        Position::new(3.0, 4.0),
    ];
    let net = build_network(pos, &[true, true, true, false], 10.0).unwrap();
    let set = rr3p_localizable_set(&net).unwrap();
    assert!(set.degenerate);
    assert_eq!(set.localizable, BTreeSet::from([NodeId(0), NodeId(1), NodeId(2)]));
}

#[test]
fn two_beacons_report_only_beacons() {
    let set = rr3p_localizable_set(&square(&[true, true])).unwrap();
    assert!(set.degenerate);
    assert_eq!(set.len(), 2);
}

#[test]
fn gap_nodes_are_in_the_set() {
    let sc = load_scenario::<f64>("gap").unwrap();
    let set = rr3p_localizable_set(&sc.net).unwrap();
    for label in ["A", "B", "C"] {
        assert!(set.contains(sc.node(label)), "{label}");
    }
}

#[test]
fn chain_interior_is_in_the_set() {
    let sc = load_scenario::<f64>("chain").unwrap();
    let set = rr3p_localizable_set(&sc.net).unwrap();
    for label in ["v1", "v3", "v4", "v5", "v6", "v7"] {
        assert!(set.contains(sc.node(label)), "{label}");
    }
}

#[test]
fn witnesses_are_valid() {
    let mut checked = 0;
    for seed in 0..20 {
        let net = generate::<f64>(&ExperimentConfig::new(60, 2.4, 0.1, seed)).unwrap();
        let set = rr3p_localizable_set(&net).unwrap();
        let cg = to_constraint_graph(&net);
        for (&v, w) in &set.witnesses {
            let comp: BTreeSet<NodeId> = set.components[w.component].iter().copied().collect();
            assert!(comp.contains(&v));
            let ends: BTreeSet<NodeId> = w.paths.iter().map(|p| *p.last().unwrap()).collect();
            assert_eq!(ends.len(), 3);
            assert_eq!(ends, w.beacons.iter().copied().collect());
            assert!(ends.iter().all(|&b| net.is_beacon(b)));
            let mut seen = BTreeSet::new();
            for p in &w.paths {
                assert_eq!(p[0], v);
                for pair in p.windows(2) {
                    assert!(cg.has_edge(pair[0], pair[1]));
                }
                for &u in &p[1..] {
                    assert!(comp.contains(&u));
                    assert!(seen.insert(u), "paths share {u:?}");
                }
            }
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn globally_rigid_networks_are_fully_localizable() {
    let mut hits = 0;
    for seed in 0..40 {
        let mut config = ExperimentConfig::new(16, 1.6, 0.2, seed);
        config.radius_factor = 6.0;
        let net = generate::<f64>(&config).unwrap();
        let cg = to_constraint_graph(&net);
        if !is_globally_rigid(cg.graph()) {
            continue;
        }
        let set = rr3p_localizable_set(&net).unwrap();
        if set.degenerate {
            continue;
        }
        assert_eq!(set.len(), net.node_count(), "seed {seed}");
        hits += 1;
    }
    assert!(hits >= 10, "only {hits} globally rigid samples");
}
