use sampling_core::nesting::{search_nesting, verify_nesting, wheels_from_nesting, NestingAssignment, SearchOutcome};
use sampling_core::{nesting_from_sampling, verify_design, CycleSystem, LabeledGraph, Vertex};

fn fano() -> CycleSystem {
    CycleSystem::new(7, 3, (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect()).unwrap()
}

/// Hub assignments whose stars tile K_n, by trying all n^|cycles| of them.
fn brute_nestings(cs: &CycleSystem) -> Vec<Vec<Vertex>> {
    let (n, c) = (cs.n(), cs.len());
    let mut out = Vec::new();
    for code in 0..(n as u64).pow(c as u32) {
        let mut x = code;
        let hubs: Vec<Vertex> = (0..c)
            .map(|_| {
                let h = (x % n as u64) as Vertex;
                x /= n as u64;
                h
            })
            .collect();
        let mut cover = vec![0u8; n * n];
        let mut ok = true;
        'cycles: for (cyc, &h) in cs.cycles().iter().zip(&hubs) {
            for &v in cyc {
                if v == h {
                    ok = false;
                    break 'cycles;
                }
                let (a, b) = (v.min(h) as usize, v.max(h) as usize);
                cover[a * n + b] += 1;
                if cover[a * n + b] > 1 {
                    ok = false;
                    break 'cycles;
                }
            }
        }
        if ok {
            out.push(hubs);
        }
    }
    out
}

#[test]
fn fano_offsets() {
    let cs = fano();
    let works: Vec<Vertex> = (0..7)
        .filter(|&c| verify_nesting(&cs, &NestingAssignment { hubs: (0..7).map(|i| (i + c) % 7).collect() }).unwrap().holds)
        .collect();
    assert_eq!(works, vec![6]);
}

#[test]
fn every_fano_nesting_round_trips() {
    let cs = fano();
    let all = brute_nestings(&cs);
    assert!(!all.is_empty());
    for hubs in &all {
        let f = NestingAssignment { hubs: hubs.clone() };
        assert!(verify_nesting(&cs, &f).unwrap().holds);
        let nw = wheels_from_nesting(&cs, &f).unwrap();
        assert!(verify_design(&nw.wheels.design()).holds);
        let (cs2, f2) = nesting_from_sampling(&nw.wheels, &nw.to_stars).unwrap();
        assert_eq!((cs2, f2), (cs.clone(), f));
    }
    let SearchOutcome::Found(found) = search_nesting(&cs, 100_000).unwrap() else { panic!() };
    assert!(all.contains(&found.hubs));
}

fn cyclic_system(n: u32, bases: &[&[u32]]) -> CycleSystem {
    let m = bases[0].len();
    let cycles = (0..n).flat_map(|i| bases.iter().map(move |b| b.iter().map(|&x| (x + i) % n).collect())).collect();
    CycleSystem::new(n as usize, m, cycles).unwrap()
}

#[test]
fn search_agrees_with_the_degree_count() {
    // a vertex on r = (n−1)/2 cycles is a hub of ((n−1) − r)/m stars
    let sts9 = {
        // affine plane of order 3: lines of Z_3 × Z_3
        let pt = |x: u32, y: u32| x * 3 + y;
        let mut lines = Vec::new();
        for (dx, dy) in [(0, 1), (1, 0), (1, 1), (1, 2)] {
            let mut seen = std::collections::BTreeSet::new();
            for x in 0..3 {
                for y in 0..3 {
                    let mut l: Vec<u32> = (0..3).map(|t| pt((x + t * dx) % 3, (y + t * dy) % 3)).collect();
                    l.sort_unstable();
                    if seen.insert(l.clone()) {
                        lines.push(l);
                    }
                }
            }
        }
        CycleSystem::new(9, 3, lines).unwrap()
    };
    assert!(sts9.coverage().holds);
    let hub_share = |n: usize, m: usize| ((n - 1) - (n - 1) / 2).is_multiple_of(m);
    assert!(!hub_share(9, 3) && hub_share(9, 4) && hub_share(7, 3) && hub_share(13, 3));
    assert_eq!(search_nesting(&sts9, 10_000_000).unwrap(), SearchOutcome::NoneExists);

    let c4_9 = cyclic_system(9, &[&[0, 1, 5, 2]]);
    assert!(c4_9.coverage().holds);
    let SearchOutcome::Found(f) = search_nesting(&c4_9, 1_000_000).unwrap() else { panic!() };
    let nw = wheels_from_nesting(&c4_9, &f).unwrap();
    assert_eq!(nesting_from_sampling(&nw.wheels, &nw.to_stars).unwrap(), (c4_9, f));
}

#[test]
fn thirteen_point_triple_system() {
    let cs = cyclic_system(13, &[&[0, 1, 4], &[0, 2, 7]]);
    assert!(cs.coverage().holds);
    let SearchOutcome::Found(f) = search_nesting(&cs, 1_000_000).unwrap() else { panic!() };
    assert!(verify_nesting(&cs, &f).unwrap().holds);
    let nw = wheels_from_nesting(&cs, &f).unwrap();
    assert_eq!(nw.wheels.design().multiplicity(), 2);
    assert!(verify_design(&nw.wheels.design()).holds);
    assert_eq!(nesting_from_sampling(&nw.wheels, &nw.to_stars).unwrap(), (cs, f));
}

#[test]
fn wheel_edge_counts() {
    let cs = fano();
    let SearchOutcome::Found(f) = search_nesting(&cs, 10_000).unwrap() else { panic!() };
    let nw = wheels_from_nesting(&cs, &f).unwrap();
    let edges: usize = nw.wheels.graphs().iter().map(LabeledGraph::edge_count).sum();
    assert_eq!(edges, 2 * 21);
}
