use std::collections::BTreeSet;

use lattice_schlicht::reconstruct::{catalog, Provenance};
use lattice_schlicht::search::{classify_prefix, search, NodeVerdict, SearchConfig};
use lattice_schlicht::series::taylor_of_rational;
use lattice_schlicht::Lattice;

#[test]
fn catalog_prefixes_are_never_pruned() {
    for m in [1, 2] {
        let cfg = SearchConfig::new(Lattice::new(m).unwrap());
        for e in catalog() {
            if m == 1 && e.provenance == Provenance::HalfInteger {
                continue;
            }
            for depth in 4..=18 {
                let a = taylor_of_rational(&e.function, depth);
                let v = classify_prefix(&a, &cfg);
                assert!(!matches!(v, NodeVerdict::Pruned(_)), "{} at depth {depth}: {v:?}", e.id);
            }
        }
    }
}

#[test]
fn integer_lattice_gives_nine_functions() {
    let out = search(&SearchConfig::new(Lattice::integers())).unwrap();
    assert!(out.complete);
    let got: BTreeSet<_> = out.candidates.iter().map(|c| c.function.clone().unwrap()).collect();
    let want: BTreeSet<_> = catalog()
        .into_iter()
        .filter(|e| e.provenance == Provenance::Integer)
        .map(|e| e.function)
        .collect();
    assert_eq!(got, want);
}

#[test]
fn search_is_symmetric_and_repeatable() {
    let cfg = SearchConfig::new(Lattice::half_integers());
    let first = search(&cfg).unwrap();
    let second = search(&cfg).unwrap();
    assert_eq!(first, second);
    assert_eq!(first.trace, second.trace);
    let fns: BTreeSet<_> = first.candidates.iter().map(|c| c.function.clone().unwrap()).collect();
    for f in &fns {
        assert!(fns.contains(&f.rotated()));
    }
    assert_eq!(first.unresolved().count(), 0);
    assert_eq!(fns.len(), 21);
}

#[test]
fn truncated_search_reports_incomplete() {
    let mut cfg = SearchConfig::new(Lattice::half_integers());
    cfg.max_depth = 5;
    let out = search(&cfg).unwrap();
    assert!(!out.complete);
}
