use std::collections::BTreeSet;

use symtree::oracles::{
    enumerate_datings, enumerate_edge_labelings, enumerate_phylo_trees, InstanceFamily, OracleError,
};
use symtree::rare_events::{derive_relation, Kind, Mode};
use symtree::tree::parse_tree;
use symtree::{Color, Taxon, Tree};

fn taxa(n: usize) -> Vec<Taxon> {
    (0..n)
        .map(|i| Taxon::new(format!("t{i}")).unwrap())
        .collect()
}

fn tree(s: &str) -> Tree {
    parse_tree(s).unwrap().tree
}

fn colors(names: &[&str]) -> Vec<Color> {
    names.iter().map(|c| Color::new(*c).unwrap()).collect()
}

/// Series-reduced rooted trees on `n` labeled leaves, which are in
/// bijection with unrooted phylogenetic trees on `n + 1` leaves.
fn schroeder(n: usize) -> Vec<u64> {
    let binom = |n: usize, k: usize| -> u64 {
        (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
    };
    let mut a = vec![0u64, 1, 1];
    for m in 2..n {
        let mut next = (m as u64 + 2) * a[m];
        for k in 2..m {
            next += 2 * binom(m, k) * a[k] * a[m - k + 1];
        }
        a.push(next);
    }
    a
}

#[test]
fn tree_counts_follow_the_recurrence() {
    let a = schroeder(8);
    assert_eq!(&a[1..7], &[1, 1, 4, 26, 236, 2752]);
    for n in 3..=8 {
        let trees = enumerate_phylo_trees(taxa(n)).unwrap();
        assert_eq!(trees.len() as u64, a[n - 1], "{n} taxa");
        let forms: BTreeSet<String> = trees.iter().map(|t| t.canonical_form()).collect();
        assert_eq!(forms.len(), trees.len());
        assert!(trees.iter().all(|t| t.is_phylogenetic()));
    }
}

#[test]
fn four_taxa_split_into_star_and_binaries() {
    let trees = enumerate_phylo_trees(taxa(4)).unwrap();
    assert_eq!(trees.iter().filter(|t| t.is_binary()).count(), 3);
    assert_eq!(trees.iter().filter(|t| t.n_vertices() == 5).count(), 1);
}

#[test]
fn size_guard() {
    assert_eq!(
        enumerate_phylo_trees(taxa(9)).unwrap_err(),
        OracleError::TooLarge(9, 8)
    );
    assert!(InstanceFamily::new(taxa(9)).is_err());
    let fam = InstanceFamily::new(taxa(5)).unwrap();
    assert_eq!(fam.trees().len(), 26);
}

#[test]
fn labeling_streams() {
    let star = tree("(a,b,c);");
    let all: Vec<_> = enumerate_edge_labelings(&star).collect();
    assert_eq!(all.len(), 8);
    let zero = all
        .iter()
        .find(|l| l.labels().iter().all(|&x| x == 0))
        .unwrap();
    let r = derive_relation(zero, Mode::Symmetric).unwrap();
    assert_eq!(r.len(), 3);
    assert!(r.records().all(|rec| rec.kind == Kind::Zero));
    assert_eq!(enumerate_edge_labelings(&tree("((a,b),c,d);")).count(), 32);
}

#[test]
fn dating_streams() {
    let star = tree("(a,b,c);");
    let three = colors(&["A", "B", "C"]);
    let d: Vec<_> = enumerate_datings(&star, &three, false).collect();
    assert_eq!(d.len(), 3);
    assert!(d.iter().all(|x| x.is_discriminating()));
    let quartet = tree("((a,b),c,d);");
    assert_eq!(
        enumerate_datings(&quartet, &colors(&["A", "B"]), true).count(),
        2
    );
    assert_eq!(
        enumerate_datings(&quartet, &colors(&["A"]), true).count(),
        0
    );
    let forms: BTreeSet<String> = enumerate_datings(&quartet, &three, false)
        .map(|d| d.canonical_form())
        .collect();
    assert_eq!(forms.len(), 9);
}
