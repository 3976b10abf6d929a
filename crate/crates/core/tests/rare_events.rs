use std::collections::BTreeSet;

use symtree::oracles::{brute_force_explainers, enumerate_edge_labelings, enumerate_phylo_trees};
use symtree::rare_events::{
    admissible_rooted_trees, build_quotient, central_vertices, derive_relation, enumerate_binary,
    explains, is_least_resolved, reconstruct_relation, Diagnostic, EventRelation, Mode,
    QuotientError, RootChoice,
};
use symtree::tree::parse_tree;
use symtree::{EdgeLabeledTree, Taxon};

fn rel(s: &str) -> EventRelation {
    EventRelation::parse(s).unwrap()
}

fn labeled(s: &str) -> EdgeLabeledTree {
    parse_tree(s).unwrap().labeled().unwrap()
}

fn t(s: &str) -> Taxon {
    Taxon::new(s).unwrap()
}

fn forms(ts: &[EdgeLabeledTree]) -> BTreeSet<String> {
    ts.iter().map(|t| t.canonical_form()).collect()
}

#[test]
fn three_taxon_example() {
    let tree = labeled("(x:1,y:0,z:1);");
    let r = rel("x\ty\tS\ny\tz\tS\n");
    assert_eq!(derive_relation(&tree, Mode::Symmetric).unwrap(), r);
    assert!(explains(&tree, &r).unwrap());
    let extra = rel("x\ty\tS\ny\tz\tS\nx\tz\tS\n");
    assert!(!explains(&tree, &extra).unwrap());
    let minimal = brute_force_explainers(&r, 4).unwrap();
    assert!(forms(&minimal).contains(&tree.canonical_form()));
}

#[test]
fn triangle_has_no_explainer() {
    let r = rel("x\ty\tS\nx\tz\tS\ny\tz\tS\n");
    assert!(matches!(
        build_quotient(&r),
        Err(QuotientError::NotForest(_))
    ));
    assert!(brute_force_explainers(&r, 8).unwrap().is_empty());
}

#[test]
fn all_zero_three_star() {
    let r = rel("a\tb\tZ\na\tc\tZ\nb\tc\tZ\n");
    let rec = reconstruct_relation(&r, None).unwrap();
    assert_eq!(
        rec.tree.canonical_form(),
        labeled("(a:0,b:0,c:0);").canonical_form()
    );
    let found = brute_force_explainers(&r, 4).unwrap();
    assert_eq!(forms(&found), forms(&[rec.tree]));
}

#[test]
fn least_resolved_examples() {
    let r = rel("x\ty\tS\ny\tz\tS\n");
    let rec = reconstruct_relation(&r, None).unwrap();
    assert!(is_least_resolved(&rec.tree, &r).unwrap());
    // Same relation with an interior 0-edge that could be contracted.
    let padded = parse_tree("((x:1,y:0)u:0,z:1,w:1)v;")
        .unwrap()
        .labeled()
        .unwrap();
    let r2 = derive_relation(&padded, Mode::Symmetric).unwrap();
    assert!(explains(&padded, &r2).unwrap());
    assert!(!is_least_resolved(&padded, &r2).unwrap());
    let edge = labeled("(a:1,b:0);");
    let r3 = derive_relation(&edge, Mode::Symmetric).unwrap();
    assert!(is_least_resolved(&edge, &r3).unwrap());
}

#[test]
fn binary_trees_for_the_empty_relation() {
    let r = rel("taxa\ta,b,c,d\n");
    let got = enumerate_binary(&r, false).unwrap();
    assert!(got.diagnostics.is_empty());
    assert_eq!(got.trees.len(), 6);
    // Oracle: every labeling of every binary tree on four leaves.
    let mut want = BTreeSet::new();
    for tree in enumerate_phylo_trees(r.taxa().iter().cloned()).unwrap() {
        if !tree.is_binary() {
            continue;
        }
        for l in enumerate_edge_labelings(&tree) {
            if explains(&l, &r).unwrap() {
                want.insert(l.canonical_form());
            }
        }
    }
    assert_eq!(forms(&got.trees), want);
}

#[test]
fn binary_trees_for_a_path() {
    let r = rel("a\tb\tS\nb\tc\tS\nc\td\tS\n");
    let got = enumerate_binary(&r, false).unwrap();
    let rec = reconstruct_relation(&r, None).unwrap();
    assert_eq!(forms(&got.trees), forms(&[rec.tree]));
}

#[test]
fn two_components_have_no_binary_tree() {
    let r = rel("taxa\ta,b\n");
    let got = enumerate_binary(&r, false).unwrap();
    assert!(got.trees.is_empty());
    assert_eq!(got.diagnostics, vec![Diagnostic::TwoComponents]);
    let rec = reconstruct_relation(&r, None).unwrap();
    assert_eq!(rec.diagnostics, vec![Diagnostic::Degree2Root]);
    assert!(explains(&rec.tree, &r).unwrap());
}

#[test]
fn isolated_class_expands_through_a_hub() {
    let r = rel("taxa\ta1,a2,b,c\na1\ta2\tZ\n");
    let rec = reconstruct_relation(&r, None).unwrap();
    assert!(explains(&rec.tree, &r).unwrap());
    let want = labeled("((a1:0,a2:0):1,b:1,c:1);");
    assert_eq!(rec.tree.canonical_form(), want.canonical_form());
    // No smaller labeled tree explains the relation.
    let found = brute_force_explainers(&r, rec.tree.tree().n_vertices()).unwrap();
    let min = found.iter().map(|t| t.tree().n_vertices()).min().unwrap();
    assert_eq!(min, rec.tree.tree().n_vertices());
}

#[test]
fn central_vertices_of_mixed_components() {
    let r = rel("b\ta\tD\nb\tc\tD\nc\td\tU\nd\te\tD\n");
    let q = build_quotient(&r).unwrap();
    let c: Vec<&Taxon> = central_vertices(&q, 0).iter().map(|&v| q.rep(v)).collect();
    assert_eq!(c, vec![&t("b")]);
    let adm = admissible_rooted_trees(&r).unwrap();
    assert!(!adm.options.is_empty());
    for o in &adm.options {
        assert_eq!(o.root, RootChoice::Source(t("b")));
        assert!(explains(&o.tree, &r).unwrap());
        let d = derive_relation(&o.tree, Mode::Directed).unwrap();
        assert_eq!(d.get(&t("c"), &t("d")).unwrap().a, t("c"));
    }

    let sym = build_quotient(&rel("a\tb\tU\nb\tc\tU\n")).unwrap();
    assert_eq!(central_vertices(&sym, 0).len(), 3);
}

#[test]
fn in_pointer_component_matches_exhaustive_search() {
    let r = rel("x\tv\tD\nv\ty\tU\n");
    let adm = admissible_rooted_trees(&r).unwrap();
    let got: BTreeSet<String> = adm
        .options
        .iter()
        .map(|o| {
            derive_relation(&o.tree, Mode::Directed)
                .unwrap()
                .to_string()
        })
        .collect();
    let want: BTreeSet<String> = brute_force_explainers(&r, 8)
        .unwrap()
        .iter()
        .map(|t| derive_relation(t, Mode::Directed).unwrap().to_string())
        .collect();
    assert!(!want.is_empty());
    assert_eq!(got, want);
    // Both arcs pointing into v is rejected outright.
    let both = rel("x\tv\tD\ny\tv\tD\n");
    assert!(matches!(
        build_quotient(&both),
        Err(QuotientError::InPointerConflict(..))
    ));
}

#[test]
fn directed_paths_give_caterpillars() {
    for n in 3..=7 {
        let text: String = (1..n).map(|i| format!("x{i}\tx{}\tD\n", i + 1)).collect();
        let r = rel(&text);
        let rec = reconstruct_relation(&r, None).unwrap();
        assert!(rec.tree.tree().is_rooted());
        assert!(explains(&rec.tree, &r).unwrap());
        // A spine of n-1 inner vertices joined by 1-edges, the last taxon on a 1-edge.
        assert_eq!(rec.tree.tree().n_vertices(), 2 * n - 1);
        assert_eq!(rec.tree.labels().iter().sum::<u32>() as usize, n - 1);
    }
}
