use proptest::prelude::*;

use rainbow_core::model::io::{read_certificates, read_family, write_certificates, write_family, CertificateRecord};
use rainbow_core::model::{automorphism_count, copy_count, enumerate_copies, host_edge_count};
use rainbow_core::verify::{check_certificate, count_bad_copies, family_is_good};
use rainbow_core::{ColoringFamily, PatternGraph};

const PATTERNS: [&str; 8] = ["K2", "P2", "I2", "K3", "S3", "P3", "C4", "P2+K1"];

fn arb_case() -> impl Strategy<Value = (PatternGraph, ColoringFamily)> {
    (0..PATTERNS.len(), 0usize..3, 1u32..=3).prop_flat_map(|(pi, extra, k)| {
        let p = PatternGraph::named(PATTERNS[pi]).unwrap();
        let n = p.num_vertices() + extra;
        let cells = n * host_edge_count(n);
        proptest::collection::vec(1..=k, cells)
            .prop_map(move |colors| (p.clone(), ColoringFamily::from_dense(n, k, colors).unwrap()))
    })
}

/// Independent checker over labeled placements.
fn naive_bad_placements(f: &ColoringFamily, p: &PatternGraph) -> u64 {
    fn rec(f: &ColoringFamily, p: &PatternGraph, map: &mut Vec<usize>, bad: &mut u64) {
        if map.len() == p.num_vertices() {
            let rainbow = |o: usize| {
                let cs: Vec<u32> = p.edges().iter().map(|&(a, b)| f.color(o, map[a], map[b])).collect();
                (0..cs.len()).all(|i| (i + 1..cs.len()).all(|j| cs[i] != cs[j]))
            };
            if !map.iter().any(|&o| rainbow(o)) {
                *bad += 1;
            }
            return;
        }
        for x in 0..f.n() {
            if !map.contains(&x) {
                map.push(x);
                rec(f, p, map, bad);
                map.pop();
            }
        }
    }
    let mut bad = 0;
    rec(f, p, &mut Vec::new(), &mut bad);
    bad
}

fn permuted(f: &ColoringFamily, perm: &[usize]) -> ColoringFamily {
    let n = f.n();
    let m = host_edge_count(n);
    let mut colors = vec![0; n * m];
    for v in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                let e = f.edge_index(perm[a], perm[b]);
                colors[perm[v] * m + e] = f.color(v, a, b);
            }
        }
    }
    ColoringFamily::from_dense(n, f.k(), colors).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verifier_matches_labeled_placements((p, f) in arb_case()) {
        let report = family_is_good(&f, &p).unwrap();
        let naive = naive_bad_placements(&f, &p);
        prop_assert_eq!(report.is_good, naive == 0);
        // each unlabeled copy is hit once per automorphism
        let aut = automorphism_count(&p).unwrap() as u64;
        prop_assert_eq!(count_bad_copies(&f, &p, u128::MAX).unwrap() * aut, naive);
        if let Some(w) = report.witness {
            prop_assert!(check_certificate(&f, &w).is_valid());
        }
    }

    #[test]
    fn goodness_is_relabeling_invariant((p, f) in arb_case(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..f.n()).collect();
        rainbow_core::rng::SplitMix64::new(seed).shuffle(&mut perm);
        let g = permuted(&f, &perm);
        prop_assert_eq!(family_is_good(&f, &p).unwrap().is_good, family_is_good(&g, &p).unwrap().is_good);
        prop_assert_eq!(count_bad_copies(&f, &p, u128::MAX).unwrap(), count_bad_copies(&g, &p, u128::MAX).unwrap());
    }

    #[test]
    fn unused_colors_change_nothing((p, f) in arb_case(), extra in 1u32..4) {
        let wide = f.with_k(f.k() + extra).unwrap();
        prop_assert_eq!(family_is_good(&f, &p).unwrap().is_good, family_is_good(&wide, &p).unwrap().is_good);
    }

    #[test]
    fn family_file_round_trips((_p, f) in arb_case()) {
        let mut buf = Vec::new();
        write_family(&f, &mut buf).unwrap();
        let back = read_family(&buf[..]).unwrap();
        prop_assert_eq!((back.n(), back.k()), (f.n(), f.k()));
        prop_assert_eq!(back.to_dense(), f.to_dense());
    }
}

#[test]
fn copy_count_identity() {
    for name in PATTERNS.iter().chain(&["K4", "S4", "P4", "2K3", "I3"]) {
        let p = PatternGraph::named(name).unwrap();
        let v = p.num_vertices() as u128;
        let aut = automorphism_count(&p).unwrap();
        for n in p.num_vertices()..=8 {
            let falling: u128 = (0..v).map(|i| n as u128 - i).product();
            let listed = enumerate_copies(&p, n).unwrap().count() as u128;
            assert_eq!(copy_count(&p, n).unwrap(), falling / aut, "{name} n={n}");
            assert_eq!(listed, falling / aut, "{name} n={n}");
        }
    }
}

#[test]
fn witness_certificates_round_trip() {
    let p = PatternGraph::named("P2").unwrap();
    let f = ColoringFamily::monochromatic(5, 2).unwrap();
    let w = family_is_good(&f, &p).unwrap().witness.unwrap();
    let mut buf = Vec::new();
    write_certificates(&[CertificateRecord::from_certificate(&w)], &mut buf).unwrap();
    let back = read_certificates(&buf[..]).unwrap();
    assert_eq!(back.len(), 1);
    assert!(check_certificate(&f, &back[0].to_violation().certificate).is_valid());
}
