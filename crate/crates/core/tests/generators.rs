use maxtsp::cycle_cover::{find_kites, max_weight_cycle_cover, max_weight_matching_complete};
use maxtsp::harness::generate::{generate_instance, Family, MAX_WEIGHT};
use maxtsp::harness::io::{parse_instance, read_instance_file, write_instance};

#[test]
fn same_seed_same_bytes() {
    for f in Family::ALL {
        for n in [3, 6, 9, 16] {
            for seed in 0..5 {
                let a = write_instance(&generate_instance(f, n, seed).unwrap().graph);
                let b = write_instance(&generate_instance(f, n, seed).unwrap().graph);
                assert_eq!(a, b, "{f} {n} {seed}");
                assert_eq!(write_instance(&parse_instance(&a).unwrap()), a);
            }
        }
    }
}

#[test]
fn file_round_trip() {
    let dir = std::env::temp_dir().join(format!("maxtsp-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kites.txt");
    let g = generate_instance(Family::KiteHeavy, 10, 4).unwrap().graph;
    std::fs::write(&path, write_instance(&g)).unwrap();
    let back = read_instance_file(&path).unwrap();
    assert_eq!(back.graph, g);
    assert_eq!(back.name, "kites");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn weights_are_bounded() {
    for f in Family::ALL {
        for seed in 0..20 {
            let g = generate_instance(f, 11, seed).unwrap().graph;
            assert!(g.edges().all(|e| (0..=MAX_WEIGHT).contains(&g.weight(e))), "{f} {seed}");
        }
    }
}

#[test]
fn metric_family_obeys_triangle_inequality() {
    for seed in 0..30 {
        let g = generate_instance(Family::MetricEuclidean, 10, seed).unwrap().graph;
        for a in 0..10 {
            for b in 0..10 {
                for c in 0..10 {
                    if a != b && b != c && a != c {
                        assert!(g.w(a, c) <= g.w(a, b) + g.w(b, c), "seed {seed}: {a} {b} {c}");
                    }
                }
            }
        }
    }
}

fn has_kite(f: Family, n: usize, seed: u64) -> bool {
    let g = generate_instance(f, n, seed).unwrap().graph;
    let cc = max_weight_cycle_cover(&g).unwrap();
    let m = max_weight_matching_complete(&g).unwrap();
    !find_kites(&cc, &m).is_empty()
}

#[test]
fn kite_heavy_instances_have_kites() {
    for n in [6, 8, 12] {
        let hits = (0..100).filter(|&s| has_kite(Family::KiteHeavy, n, s)).count();
        assert!(hits >= 90, "n = {n}: {hits} of 100 seeds have a kite");
    }
}
