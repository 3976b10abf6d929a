//! Least resolved trees of a quotient and their binary refinements.
//!
//! In a least resolved tree on a discrete quotient every interior edge is
//! a 1-edge and every inner vertex carries at most one 0-leaf. Inner
//! vertices with a 0-leaf are *named* by it, the others are *hubs*. The
//! named vertices of one component form a block that realizes the
//! component's arcs; hubs join blocks (never two hubs, never two blocks
//! directly) and carry isolated classes as free 1-leaves.

use std::collections::{BTreeMap, BTreeSet};

use super::quotient::{build_quotient, QuotientGraph};
use super::reconstruct::{Diagnostic, ReconstructError};
use super::{derive_relation, EventRelation, Kind, Mode};
use crate::tree::{EdgeId, EdgeLabeledTree, TreeBuilder, VertexId};

#[derive(Debug, Clone)]
pub struct BinaryEnumeration {
    pub trees: Vec<EdgeLabeledTree>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Cartesian product; the empty product has one empty tuple.
fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for prefix in &out {
            for x in l {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        let mut alone = p.clone();
        alone.insert(0, vec![first]);
        out.push(alone);
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
    }
    out
}

/// All hypertrees (hyperedges of size at least 2) on `root` plus `rest`.
/// The hyperedges through `root` split `rest` into groups; in each group
/// the direct members `D` carry the remainder in their own subtrees.
fn hypertrees(root: usize, rest: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for groups in set_partitions(rest) {
        let per_group: Vec<Vec<Vec<Vec<usize>>>> =
            groups.iter().map(|g| group_options(root, g)).collect();
        for combo in product(&per_group) {
            out.push(combo.concat());
        }
    }
    out
}

fn group_options(root: usize, g: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << g.len()) {
        let (d, r): (Vec<usize>, Vec<usize>) =
            (0..g.len()).partition::<Vec<usize>, _>(|&i| mask & (1 << i) != 0);
        let d: Vec<usize> = d.into_iter().map(|i| g[i]).collect();
        let r: Vec<usize> = r.into_iter().map(|i| g[i]).collect();
        let mut hub = vec![root];
        hub.extend(&d);
        hub.sort();
        let choices: Vec<Vec<usize>> = r.iter().map(|_| (0..d.len()).collect()).collect();
        for f in product(&choices) {
            let subs: Vec<Vec<Vec<Vec<usize>>>> = d
                .iter()
                .enumerate()
                .map(|(di, &dv)| {
                    let below: Vec<usize> = r
                        .iter()
                        .zip(&f)
                        .filter(|&(_, &fi)| fi == di)
                        .map(|(&x, _)| x)
                        .collect();
                    hypertrees(dv, &below)
                })
                .collect();
            for combo in product(&subs) {
                let mut edges = vec![hub.clone()];
                edges.extend(combo.concat());
                out.push(edges);
            }
        }
    }
    out
}

/// Hub layout: the blocks and free classes of every hub.
type Layout = Vec<(Vec<usize>, Vec<usize>)>;

#[derive(Clone, Copy)]
enum Target {
    Hyper(usize),
    Pendant(usize),
}

fn layouts(n_blocks: usize, free: &[usize]) -> Vec<Layout> {
    if n_blocks == 0 {
        return if free.is_empty() {
            Vec::new()
        } else {
            vec![vec![(Vec::new(), free.to_vec())]]
        };
    }
    let rest: Vec<usize> = (1..n_blocks).collect();
    let mut out = Vec::new();
    for ht in hypertrees(0, &rest) {
        for groups in set_partitions(free) {
            let targets: Vec<Target> = (0..ht.len())
                .map(Target::Hyper)
                .chain((0..n_blocks).map(Target::Pendant))
                .collect();
            let choices: Vec<Vec<Target>> = groups.iter().map(|_| targets.clone()).collect();
            'assign: for assign in product(&choices) {
                let mut layout: Layout = ht.iter().map(|h| (h.clone(), Vec::new())).collect();
                for (g, t) in groups.iter().zip(&assign) {
                    match *t {
                        Target::Hyper(i) => {
                            if !layout[i].1.is_empty() {
                                continue 'assign;
                            }
                            layout[i].1 = g.clone();
                        }
                        Target::Pendant(b) => layout.push((vec![b], g.clone())),
                    }
                }
                out.push(layout);
            }
        }
    }
    out
}

fn single_vertex(q: &QuotientGraph) -> EdgeLabeledTree {
    let mut b = TreeBuilder::new();
    b.leaf(q.rep(0).clone());
    b.labeled().unwrap()
}

/// All least resolved trees explaining the quotient, on representatives,
/// pairwise non-isomorphic. With `allow_degree2_root` and exactly two
/// components, trees with one degree-2 hub are admitted and rooted there.
pub fn least_resolved_trees(q: &QuotientGraph, allow_degree2_root: bool) -> Vec<EdgeLabeledTree> {
    let n = q.n_classes();
    let comps = q.components();
    if n == 1 {
        return vec![single_vertex(q)];
    }
    if n == 2 && comps.len() == 1 {
        let mut b = TreeBuilder::new();
        let x = b.leaf(q.rep(0).clone());
        let y = b.leaf(q.rep(1).clone());
        b.connect(x, y, 1);
        return vec![b.labeled().unwrap()];
    }
    let relaxed = allow_degree2_root && comps.len() == 2;
    // Per component: `None` leaves an isolated class free, otherwise the
    // named classes of its block.
    let comp_opts: Vec<Vec<Option<Vec<usize>>>> = comps
        .iter()
        .map(|c| {
            if c.len() == 1 {
                return vec![Some(vec![c[0]]), None];
            }
            let inner: Vec<usize> = c.iter().copied().filter(|&v| q.degree(v) >= 2).collect();
            let leaves: Vec<usize> = c.iter().copied().filter(|&v| q.degree(v) == 1).collect();
            let mut opts = Vec::new();
            for mask in 0u32..(1 << leaves.len()) {
                let mut named = inner.clone();
                named.extend(
                    (0..leaves.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| leaves[i]),
                );
                if !named.is_empty() {
                    named.sort();
                    opts.push(Some(named));
                }
            }
            opts
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for choice in product(&comp_opts) {
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut free = Vec::new();
        for (ci, ch) in choice.iter().enumerate() {
            match ch {
                Some(named) => blocks.push((ci, named.clone())),
                None => free.push(comps[ci][0]),
            }
        }
        let layouts = if blocks.len() == 1 && free.is_empty() {
            vec![Vec::new()]
        } else {
            layouts(blocks.len(), &free)
        };
        for layout in layouts {
            let incidences: Vec<Vec<usize>> = layout
                .iter()
                .flat_map(|(bs, _)| bs.iter().map(|&b| blocks[b].1.clone()))
                .collect();
            for attach in product(&incidences) {
                if let Some(t) = assemble(q, &blocks, &layout, &attach, relaxed) {
                    if seen.insert(t.canonical_form()) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

fn assemble(
    q: &QuotientGraph,
    blocks: &[(usize, Vec<usize>)],
    layout: &Layout,
    attach: &[usize],
    relaxed: bool,
) -> Option<EdgeLabeledTree> {
    let mut b = TreeBuilder::new();
    let mut named: BTreeMap<usize, VertexId> = BTreeMap::new();
    for (ci, members) in blocks {
        for &c in members {
            let v = b.inner();
            let l = b.leaf(q.rep(c).clone());
            b.connect(v, l, 0);
            named.insert(c, v);
        }
        for arc in q.component_arcs(*ci) {
            match (named.get(&arc.from), named.get(&arc.to)) {
                (Some(&u), Some(&w)) => {
                    b.connect(u, w, 1);
                }
                (Some(&u), None) => {
                    let l = b.leaf(q.rep(arc.to).clone());
                    b.connect(u, l, 1);
                }
                (None, Some(&w)) => {
                    let l = b.leaf(q.rep(arc.from).clone());
                    b.connect(w, l, 1);
                }
                (None, None) => unreachable!("block arcs touch a named class"),
            }
        }
    }
    let mut hubs = Vec::new();
    let mut k = 0;
    for (bs, free) in layout {
        let h = b.inner();
        hubs.push(h);
        for &f in free {
            let l = b.leaf(q.rep(f).clone());
            b.connect(h, l, 1);
        }
        for _ in bs {
            b.connect(h, named[&attach[k]], 1);
            k += 1;
        }
    }
    let mut t = b.labeled().ok()?;
    let tree = t.tree();
    let mut root = None;
    for v in tree.inner_vertices() {
        match tree.degree(v) {
            d if d >= 3 => {}
            2 if relaxed && hubs.contains(&v) && root.is_none() => root = Some(v),
            _ => return None,
        }
    }
    if root.is_some() {
        t = t.with_root(root).ok()?;
    }
    Some(t)
}

/// `(2k-5)!!`, the number of binary trees on `k >= 3` labeled leaves.
fn t_count(k: usize) -> u128 {
    (1..=(2 * k - 5)).step_by(2).map(|x| x as u128).product()
}

/// Local binary trees on leaves `0..k`; inner nodes are `k..2k-2`.
fn binary_shapes(k: usize) -> Vec<Vec<(usize, usize)>> {
    let mut shapes = vec![vec![(0, k), (1, k), (2, k)]];
    for leaf in 3..k {
        let mut next = Vec::new();
        for s in &shapes {
            for i in 0..s.len() {
                let (a, b) = s[i];
                let m = k + leaf - 2;
                let mut t = s.clone();
                t[i] = (a, m);
                t.push((m, b));
                t.push((m, leaf));
                next.push(t);
            }
        }
        shapes = next;
    }
    shapes
}

fn local_path(edges: &[(usize, usize)], n: usize, from: usize, to: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut stack = vec![from];
    let mut seen = vec![false; n];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((u, e));
                stack.push(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut x = to;
    while let Some((p, e)) = prev[x] {
        path.push(e);
        x = p;
    }
    path
}

struct Local {
    v0: VertexId,
    nb: Vec<(VertexId, EdgeId)>,
    /// `(shape, labels of its edges)`; pendant entries are ignored.
    options: Vec<(usize, Vec<u32>)>,
}

/// Leaves of the component of `t - v0` that contains `start`.
fn side_leaves(t: &EdgeLabeledTree, v0: VertexId, start: VertexId) -> Vec<VertexId> {
    let tree = t.tree();
    let mut out = Vec::new();
    let mut stack = vec![(start, v0)];
    while let Some((v, from)) = stack.pop() {
        if tree.taxon(v).is_some() {
            out.push(v);
        }
        for &(w, _) in tree.neighbors(v) {
            if w != from {
                stack.push((w, v));
            }
        }
    }
    out
}

/// Every binary refinement of one least resolved tree.
fn refinements(
    t: &EdgeLabeledTree,
    shapes: &mut BTreeMap<usize, Vec<Vec<(usize, usize)>>>,
) -> Vec<EdgeLabeledTree> {
    let tree = t.tree();
    let rel = derive_relation(t, Mode::Symmetric).expect("symmetric derivation");
    let mut locals = Vec::new();
    for v0 in tree.inner_vertices() {
        let k = tree.degree(v0);
        if k <= 3 {
            continue;
        }
        let nb = tree.neighbors(v0).to_vec();
        let zeros: Vec<usize> = (0..k).filter(|&i| t.label(nb[i].1) == 0).collect();
        let mut forced_sides = Vec::new();
        let mut zero_leaf = None;
        if let [j] = zeros[..] {
            if let Some(x) = tree.taxon(nb[j].0) {
                zero_leaf = Some(j);
                for (i, &(w, _)) in nb.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let hit = side_leaves(t, v0, w).into_iter().any(|y| {
                        let y = tree.taxon(y).unwrap();
                        rel.get(x, y).is_some_and(|r| r.kind == Kind::SymOne)
                    });
                    if hit {
                        forced_sides.push(i);
                    }
                }
            }
        }
        let shape_list = shapes.entry(k).or_insert_with(|| binary_shapes(k));
        let mut options = Vec::new();
        for (si, s) in shape_list.iter().enumerate() {
            let interior: Vec<usize> = (0..s.len())
                .filter(|&e| s[e].0 >= k && s[e].1 >= k)
                .collect();
            let mut forced = BTreeSet::new();
            if let Some(j) = zero_leaf {
                for &i in &forced_sides {
                    forced.extend(local_path(s, 2 * k - 2, j, i));
                }
            }
            let free: Vec<usize> = interior
                .iter()
                .copied()
                .filter(|e| !forced.contains(e))
                .collect();
            for mask in 0u32..(1 << free.len()) {
                let mut labels = vec![0; s.len()];
                for (bit, &e) in free.iter().enumerate() {
                    labels[e] = (mask >> bit) & 1;
                }
                options.push((si, labels));
            }
        }
        locals.push(Local { v0, nb, options });
    }
    let choices: Vec<Vec<usize>> = locals
        .iter()
        .map(|l| (0..l.options.len()).collect())
        .collect();
    let mut out = Vec::new();
    for pick in product(&choices) {
        let mut b = TreeBuilder::new();
        let mut map: Vec<Option<VertexId>> = vec![None; tree.n_vertices()];
        let refined: BTreeMap<VertexId, usize> =
            locals.iter().enumerate().map(|(i, l)| (l.v0, i)).collect();
        for (v, slot) in map.iter_mut().enumerate() {
            if refined.contains_key(&v) {
                continue;
            }
            *slot = Some(match tree.taxon(v) {
                Some(x) => b.leaf(x.clone()),
                None => b.inner(),
            });
        }
        // Per refined vertex: the new vertex at each of its pendant slots.
        let mut slot: BTreeMap<(VertexId, EdgeId), VertexId> = BTreeMap::new();
        for (li, l) in locals.iter().enumerate() {
            let k = l.nb.len();
            let (si, labels) = &l.options[pick[li]];
            let s = &shapes[&k][*si];
            let inner: Vec<VertexId> = (0..k - 2).map(|_| b.inner()).collect();
            for (e, &(a, c)) in s.iter().enumerate() {
                if a >= k && c >= k {
                    b.connect(inner[a - k], inner[c - k], labels[e]);
                } else {
                    let (leaf, node) = if a < k { (a, c) } else { (c, a) };
                    slot.insert((l.v0, l.nb[leaf].1), inner[node - k]);
                }
            }
        }
        for (e, &(u, v)) in tree.edges().iter().enumerate() {
            let end = |x: VertexId| map[x].unwrap_or_else(|| slot[&(x, e)]);
            b.connect(end(u), end(v), t.label(e));
        }
        if let Some(r) = tree.root() {
            b.set_root(map[r].expect("the root is not refined"));
        }
        out.push(b.labeled().expect("refinements are trees"));
    }
    out
}

/// All binary trees explaining the (symmetrized) relation, on class
/// representatives. Exactly two components admit none unless
/// `allow_degree2_root` is set, which roots the trees at the degree-2 hub.
pub fn enumerate_binary(
    r: &EventRelation,
    allow_degree2_root: bool,
) -> Result<BinaryEnumeration, ReconstructError> {
    let q = build_quotient(&r.symmetrized())?;
    let mut diagnostics = Vec::new();
    if q.components().len() == 2 {
        if !allow_degree2_root {
            return Ok(BinaryEnumeration {
                trees: Vec::new(),
                diagnostics: vec![Diagnostic::TwoComponents],
            });
        }
        diagnostics.push(Diagnostic::Degree2Root);
    }
    let mut shapes = BTreeMap::new();
    let mut seen = BTreeSet::new();
    let mut trees = Vec::new();
    for lrt in least_resolved_trees(&q, allow_degree2_root) {
        for t in refinements(&lrt, &mut shapes) {
            if seen.insert(t.canonical_form()) {
                trees.push(t);
            }
        }
    }
    Ok(BinaryEnumeration { trees, diagnostics })
}

/// Sum over least resolved trees of the product over inner vertices of
/// degree `d > 3` of `t(d) 2^(d-3)` (no 0-edge) or `t(d)` (one 0-edge).
pub fn binary_count_formula(q: &QuotientGraph, allow_degree2_root: bool) -> u128 {
    if q.components().len() == 2 && !allow_degree2_root {
        return 0;
    }
    least_resolved_trees(q, allow_degree2_root)
        .iter()
        .map(|t| {
            let tree = t.tree();
            tree.inner_vertices()
                .filter(|&v| tree.degree(v) > 3)
                .map(|v| {
                    let d = tree.degree(v);
                    let zero = tree.neighbors(v).iter().any(|&(_, e)| t.label(e) == 0);
                    if zero {
                        t_count(d)
                    } else {
                        t_count(d) << (d - 3)
                    }
                })
                .product::<u128>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::super::tests::rel;
    use super::super::{explains, is_least_resolved};
    use super::*;

    #[test]
    fn shape_counts() {
        for (k, n) in [(3, 1), (4, 3), (5, 15), (6, 105)] {
            assert_eq!(binary_shapes(k).len(), n);
            assert_eq!(t_count(k), n as u128);
        }
    }

    #[test]
    fn hypertree_counts() {
        // Hypertrees on n labeled nodes: 1, 1, 4, 29, 311.
        for (n, c) in [(1, 1), (2, 1), (3, 4), (4, 29), (5, 311)] {
            let rest: Vec<usize> = (1..n).collect();
            assert_eq!(hypertrees(0, &rest).len(), c, "n = {n}");
        }
    }

    #[test]
    fn empty_on_four() {
        let r = rel("taxa\ta,b,c,d\n");
        let q = build_quotient(&r).unwrap();
        assert_eq!(least_resolved_trees(&q, false).len(), 1);
        let e = enumerate_binary(&r, false).unwrap();
        assert_eq!(e.trees.len(), 6);
        assert_eq!(binary_count_formula(&q, false), 6);
        for t in &e.trees {
            assert!(t.tree().is_binary());
            assert!(explains(t, &r).unwrap());
        }
    }

    #[test]
    fn empty_on_five() {
        let r = rel("taxa\ta,b,c,d,e\n");
        let q = build_quotient(&r).unwrap();
        let lrt = least_resolved_trees(&q, false);
        assert_eq!(lrt.len(), 16);
        for t in &lrt {
            assert!(explains(t, &r).unwrap());
            assert!(is_least_resolved(t, &r).unwrap());
        }
        assert_eq!(binary_count_formula(&q, false), 75);
        assert_eq!(enumerate_binary(&r, false).unwrap().trees.len(), 75);
    }

    #[test]
    fn path_is_its_own_refinement() {
        let r = rel("a\tb\tS\nb\tc\tS\nc\td\tS\n");
        let e = enumerate_binary(&r, false).unwrap();
        assert_eq!(e.trees.len(), 1);
        assert!(e.trees[0].tree().is_binary());
    }

    #[test]
    fn star_type_b() {
        let r = rel("a\tb\tS\na\tc\tS\na\td\tS\n");
        let e = enumerate_binary(&r, false).unwrap();
        assert_eq!(e.trees.len(), 3);
        for t in &e.trees {
            assert!(explains(t, &r).unwrap());
        }
    }

    #[test]
    fn two_components() {
        let r = rel("taxa\tc\na\tb\tS\n");
        let e = enumerate_binary(&r, false).unwrap();
        assert!(e.trees.is_empty());
        assert_eq!(e.diagnostics, vec![Diagnostic::TwoComponents]);
        let relaxed = enumerate_binary(&r, true).unwrap();
        assert!(!relaxed.trees.is_empty());
        for t in &relaxed.trees {
            assert!(t.tree().is_binary());
            assert!(explains(t, &r).unwrap());
        }
    }
}
