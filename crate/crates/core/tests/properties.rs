//! Randomized invariants over small trees built from seeded generators.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symtree::quartets::{displayed_quartets, tree_from_quartets, QuartetSystem};
use symtree::rare_events::{build_quotient, derive_relation, explains, reconstruct_relation, Mode};
use symtree::ternary::{
    check_metric, derive_ternary, equivalence_classes, generate_quartets, is_fully_resolved,
    reconstruct,
};
use symtree::tree::parse_tree;
use symtree::{Color, DatedTree, EdgeLabeledTree, Taxon, Tree};

/// A random phylogenetic tree on `n` taxa: leaves are attached either to an
/// existing inner vertex or to a new vertex subdividing an edge.
fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Tree {
    let mut names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    names.shuffle(rng);
    let mut taxa: Vec<Option<Taxon>> = vec![None];
    let mut edges = Vec::new();
    let mut inner = vec![0];
    for name in names {
        let leaf = taxa.len();
        taxa.push(Some(Taxon::new(name).unwrap()));
        if edges.len() < 3 || rng.gen_bool(0.3) {
            let v = inner[rng.gen_range(0..inner.len())];
            edges.push((v, leaf));
        } else {
            let e = rng.gen_range(0..edges.len());
            let (u, w) = edges[e];
            let v = taxa.len();
            taxa.push(None);
            inner.push(v);
            edges[e] = (u, v);
            edges.push((v, w));
            edges.push((v, leaf));
        }
    }
    Tree::from_parts(taxa, edges, None).unwrap()
}

fn random_labels(t: &Tree, rng: &mut ChaCha8Rng) -> EdgeLabeledTree {
    let labels = (0..t.n_edges()).map(|_| rng.gen_range(0..2)).collect();
    EdgeLabeledTree::new(t.clone(), labels)
}

/// A discriminating dating over `k >= 2` colors.
fn random_dating(t: &Tree, k: usize, rng: &mut ChaCha8Rng) -> DatedTree {
    let palette: Vec<Color> = (0..k)
        .map(|i| Color::new(format!("C{i}")).unwrap())
        .collect();
    let view = t.rooted_view();
    let mut colors: Vec<Option<Color>> = vec![None; t.n_vertices()];
    for &v in view.order() {
        if !t.is_inner(v) {
            continue;
        }
        let parent = view.parent(v).and_then(|p| colors[p].clone());
        let options: Vec<&Color> = palette
            .iter()
            .filter(|c| Some(*c) != parent.as_ref())
            .collect();
        colors[v] = Some(options[rng.gen_range(0..options.len())].clone());
    }
    DatedTree::new(t.clone(), colors).unwrap()
}

fn names(t: &Tree) -> Vec<String> {
    t.taxa().map(|x| x.to_string()).collect()
}

fn instance() -> impl Strategy<Value = (usize, u64)> {
    (3usize..=7, any::<u64>())
}

proptest! {
    #[test]
    fn medians_lie_on_paths((n, seed) in instance(), picks in prop::array::uniform3(0usize..7)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(n, &mut rng);
        let tx = names(&t);
        let [x, y, z] = picks.map(|i| tx[i % n].as_str());
        let m = t.median(x, y, z).unwrap();
        for p in [[x, z, y], [y, x, z], [y, z, x], [z, x, y], [z, y, x]] {
            prop_assert_eq!(t.median(p[0], p[1], p[2]).unwrap(), m);
        }
        let (u, v) = (t.vertex_of(x).unwrap(), t.vertex_of(y).unwrap());
        let on_path: BTreeSet<usize> = t
            .path_between(u, v)
            .unwrap()
            .iter()
            .flat_map(|&e| { let (a, b) = t.edge(e); [a, b] })
            .chain([u])
            .collect();
        prop_assert!(on_path.contains(&m));

        let root = t.inner_vertices().nth(rng.gen_range(0..t.inner_vertices().count())).unwrap();
        let rooted = t.with_root(Some(root)).unwrap();
        let lcas = [rooted.lca(&[x, y]).unwrap(), rooted.lca(&[x, z]).unwrap(), rooted.lca(&[y, z]).unwrap()];
        prop_assert!(lcas.contains(&rooted.median(x, y, z).unwrap()));
    }

    #[test]
    fn restriction_keeps_path_sums((n, seed) in instance(), mask in 0u32..128) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_labels(&random_tree(n, &mut rng), &mut rng);
        let tx = names(l.tree());
        let mut sub: Vec<&str> = tx.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.as_str()).collect();
        if sub.is_empty() {
            sub.push(&tx[0]);
        }
        let r = l.restrict_display(&sub).unwrap();
        for a in &sub {
            for b in &sub {
                let before = l.path_sum(l.tree().vertex_of(a).unwrap(), l.tree().vertex_of(b).unwrap()).unwrap();
                let after = r.path_sum(r.tree().vertex_of(a).unwrap(), r.tree().vertex_of(b).unwrap()).unwrap();
                prop_assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn text_round_trips((n, seed) in instance()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(n, &mut rng);
        let l = random_labels(&t, &mut rng);
        let back = parse_tree(&l.serialize()).unwrap().labeled().unwrap();
        prop_assert_eq!(back.canonical_form(), l.canonical_form());
        let d = random_dating(&t, 3, &mut rng);
        let back = parse_tree(&d.serialize()).unwrap().dated().unwrap();
        prop_assert_eq!(back.canonical_form(), d.canonical_form());
    }

    #[test]
    fn derived_relations_have_forest_quotients((n, seed) in instance()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_labels(&random_tree(n, &mut rng), &mut rng);
        let sym = derive_relation(&l, Mode::Symmetric).unwrap();
        prop_assert!(build_quotient(&sym).is_ok());
        let rec = reconstruct_relation(&sym, None).unwrap();
        prop_assert!(explains(&rec.tree, &sym).unwrap());
        prop_assert_eq!(derive_relation(&l.contract_zero_edges(), Mode::Symmetric).unwrap(), sym);

        let root = l.tree().inner_vertices().next().unwrap();
        let rooted = l.with_root(Some(root)).unwrap();
        let dir = derive_relation(&rooted, Mode::Directed).unwrap();
        prop_assert!(build_quotient(&dir).is_ok());
        let rec = reconstruct_relation(&dir, None).unwrap();
        prop_assert!(explains(&rec.tree, &dir).unwrap());
    }

    #[test]
    fn ternary_round_trip((n, seed) in instance(), k in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(n, &mut rng);
        let d = random_dating(&t, k, &mut rng);
        let map = derive_ternary(&d).unwrap();
        prop_assert!(check_metric(&map).is_valid());
        prop_assert_eq!(reconstruct(&map).unwrap().canonical_form(), d.canonical_form());
        prop_assert_eq!(is_fully_resolved(&map), t.is_binary());
        let q = generate_quartets(&map).unwrap();
        let shown = displayed_quartets(&t);
        prop_assert_eq!(q.quartets(), shown.quartets());
        let classes: BTreeSet<BTreeSet<Taxon>> = equivalence_classes(&map)
            .unwrap()
            .into_iter()
            .filter(|c| c.members.len() > 1)
            .map(|c| c.members.into_iter().collect())
            .collect();
        prop_assert_eq!(classes, t.pseudo_cherries());
    }

    #[test]
    fn quartet_systems_determine_trees((n, seed) in instance()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(n, &mut rng);
        let q = displayed_quartets(&t);
        prop_assert_eq!(tree_from_quartets(&q).unwrap().canonical_form(), t.canonical_form());
        let text = q.to_string();
        let mut lines: Vec<&str> = text.lines().collect();
        lines.shuffle(&mut rng);
        let shuffled = QuartetSystem::parse(&lines.join("\n")).unwrap();
        prop_assert_eq!(tree_from_quartets(&shuffled).unwrap().canonical_form(), t.canonical_form());
    }
}
