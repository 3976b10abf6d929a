use symtree::quartets::{
    check_properties, displayed_quartets, tree_from_quartets, Quartet, QuartetError, QuartetSystem,
};
use symtree::tree::parse_tree;
use symtree::{Taxon, Tree};

fn tree(s: &str) -> Tree {
    parse_tree(s).unwrap().tree
}

fn tx(s: &str) -> Taxon {
    Taxon::new(s).unwrap()
}

/// `ab|cd`.
fn q(a: &str, b: &str, c: &str, d: &str) -> Quartet {
    Quartet::new(tx(a), tx(b), tx(c), tx(d)).unwrap()
}

fn system(taxa: &[&str], qs: &[Quartet]) -> QuartetSystem {
    let mut s = QuartetSystem::new(taxa.iter().map(|t| tx(t)));
    for x in qs {
        s.insert(x.clone());
    }
    s
}

fn type1() -> Vec<Quartet> {
    vec![
        q("x", "w", "y", "u"),
        q("x", "w", "z", "u"),
        q("x", "w", "y", "z"),
        q("u", "w", "y", "z"),
        q("x", "u", "y", "z"),
    ]
}

#[test]
fn displayed_examples() {
    assert!(displayed_quartets(&tree("(a,b,c,d,e);")).is_empty());
    let quartet = displayed_quartets(&tree("((a,b),c,d);"));
    assert_eq!(
        quartet.quartets().iter().cloned().collect::<Vec<_>>(),
        vec![q("a", "b", "c", "d")]
    );
    let cat = displayed_quartets(&tree("((x,w),u,(y,z));"));
    assert_eq!(
        cat.quartets(),
        system(&["u", "w", "x", "y", "z"], &type1()).quartets()
    );
}

#[test]
fn property_examples() {
    let p = check_properties(&displayed_quartets(&tree("((x,w),u,(y,z));")));
    assert!(p.is_thin() && p.is_transitive() && p.is_saturated() && p.is_complete());

    let five = ["u", "w", "x", "y", "z"];
    let type2 = system(
        &five,
        &[
            q("y", "w", "z", "u"),
            q("x", "u", "y", "z"),
            q("x", "z", "u", "w"),
            q("x", "y", "z", "w"),
            q("x", "w", "y", "u"),
        ],
    );
    let p = check_properties(&type2);
    assert!(p.is_complete() && p.is_thin());
    assert!(!p.is_saturated());

    let two = system(
        &["a", "b", "c", "d"],
        &[q("a", "b", "c", "d"), q("a", "c", "b", "d")],
    );
    assert!(!check_properties(&two).is_thin());
}

#[test]
fn rebuild_examples() {
    let one = system(&["a", "b", "c", "d"], &[q("a", "b", "c", "d")]);
    assert_eq!(
        tree_from_quartets(&one).unwrap().canonical_form(),
        tree("((a,b),c,d);").canonical_form()
    );
    let empty = system(&["a", "b", "c", "d", "e"], &[]);
    assert_eq!(
        tree_from_quartets(&empty).unwrap().canonical_form(),
        tree("(a,b,c,d,e);").canonical_form()
    );
    // Oracle: the rebuilt tree displays exactly the input system.
    let s = system(&["u", "w", "x", "y", "z"], &type1());
    let t = tree_from_quartets(&s).unwrap();
    assert_eq!(displayed_quartets(&t).quartets(), s.quartets());
    assert_eq!(
        t.canonical_form(),
        tree("((x,w),u,(y,z));").canonical_form()
    );
}

#[test]
fn inconsistent_systems_are_rejected() {
    let two = system(
        &["a", "b", "c", "d"],
        &[q("a", "b", "c", "d"), q("a", "c", "b", "d")],
    );
    assert!(tree_from_quartets(&two).is_err());
    assert_eq!(
        Quartet::new(tx("a"), tx("a"), tx("b"), tx("c")),
        Err(QuartetError::NotDistinct)
    );
}

#[test]
fn text_round_trip() {
    let s = displayed_quartets(&tree("((a,b),c,(d,e));"));
    let back = QuartetSystem::parse(&s.to_string()).unwrap();
    assert_eq!(back, s);
}
