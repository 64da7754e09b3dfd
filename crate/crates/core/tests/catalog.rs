mod common;

use std::collections::BTreeSet;

use repx::enumeration::{annotate, enumerate_connected, from_text, read_catalog, to_text, write_catalog};
use repx::graph6;

fn check_against_brute_force(r: usize, d: usize) {
    let catalog = enumerate_connected(r, d).unwrap();
    for n in 1..=r {
        let ours: Vec<_> = catalog.entries.iter().filter(|e| e.order == n).collect();
        let keys: BTreeSet<_> = ours.iter().map(|e| common::brute_key_of(&e.graph)).collect();
        assert_eq!(keys.len(), ours.len(), "duplicate isomorphism class at n = {n}, d = {d}");
        assert_eq!(keys, common::brute_connected_classes(n, d), "n = {n}, d = {d}");
    }
}

#[test]
fn degree_three_catalogs_match_brute_force() {
    check_against_brute_force(6, 3);
}

#[test]
fn other_degree_bounds_match_brute_force() {
    check_against_brute_force(6, 2);
    check_against_brute_force(6, 1);
    check_against_brute_force(5, 4);
    check_against_brute_force(6, 5);
}

#[test]
fn entries_are_canonical_connected_and_sorted() {
    let cat = enumerate_connected(9, 3).unwrap();
    let mut last = (0, String::new());
    for e in &cat.entries {
        assert!(e.graph.is_connected() && e.graph.max_degree() <= 3);
        assert_eq!(graph6::decode(&e.g6).unwrap(), e.graph);
        let key = (e.order, e.g6.clone());
        assert!(key > last);
        last = key;
    }
}

#[test]
fn profiles_match_naive_oracle() {
    let cat = annotate(enumerate_connected(7, 3).unwrap()).unwrap();
    for e in &cat.entries {
        let (r, c, _) = common::naive_vectors(&e.graph, 3);
        let p = e.profile().unwrap();
        assert_eq!((&p.r, &p.c), (&r, &c), "{}", e.g6);
    }
}

#[test]
fn file_round_trip_is_byte_stable() {
    let cat = annotate(enumerate_connected(8, 3).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d8_3.repcat");
    write_catalog(&path, &cat).unwrap();
    let back = read_catalog(&path).unwrap();
    assert_eq!(back, cat);
    assert_eq!(to_text(&back).unwrap(), std::fs::read_to_string(&path).unwrap());

    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let again = single.install(|| annotate(enumerate_connected(8, 3).unwrap()).unwrap());
    assert_eq!(to_text(&again).unwrap(), to_text(&cat).unwrap());
}

#[test]
fn corrupted_files_are_rejected_with_line_numbers() {
    let cat = annotate(enumerate_connected(5, 3).unwrap()).unwrap();
    let text = to_text(&cat).unwrap();
    let flipped = text.replacen("c=1,0,0,0", "c=1,0,0,1", 1);
    assert!(from_text(&flipped).is_err());
    let lines: Vec<&str> = text.lines().collect();
    let mut swapped = lines.clone();
    swapped.swap(3, 4);
    let err = from_text(&(swapped.join("\n") + "\n")).unwrap_err().to_string();
    assert!(err.contains("checksum") || err.contains("line"), "{err}");
}
