//! Edge-labeled and vertex-colored trees, restriction and contraction.

use std::collections::BTreeSet;

use super::{codec, EdgeId, Tree, TreeError, VertexId};
use crate::taxon::{Color, Taxon};

/// A tree with a non-negative integer event count on every edge.
#[derive(Debug, Clone)]
pub struct EdgeLabeledTree {
    tree: Tree,
    labels: Vec<u32>,
}

impl EdgeLabeledTree {
    pub fn new(tree: Tree, labels: Vec<u32>) -> EdgeLabeledTree {
        assert_eq!(tree.n_edges(), labels.len(), "one label per edge");
        EdgeLabeledTree { tree, labels }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, e: EdgeId) -> u32 {
        self.labels[e]
    }

    pub fn with_root(&self, root: Option<VertexId>) -> Result<EdgeLabeledTree, TreeError> {
        Ok(EdgeLabeledTree::new(
            self.tree.with_root(root)?,
            self.labels.clone(),
        ))
    }

    /// Label sums from `v` to every vertex.
    pub fn sums_from(&self, v: VertexId) -> Vec<u32> {
        let n = self.tree.n_vertices();
        let mut sum = vec![u32::MAX; n];
        sum[v] = 0;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &(w, e) in self.tree.neighbors(u) {
                if sum[w] == u32::MAX {
                    sum[w] = sum[u] + self.labels[e];
                    stack.push(w);
                }
            }
        }
        sum
    }

    pub fn path_sum(&self, u: VertexId, v: VertexId) -> Result<u32, TreeError> {
        Ok(self
            .tree
            .path_between(u, v)?
            .iter()
            .map(|&e| self.labels[e])
            .sum())
    }

    /// Restriction to a taxa subset: delete the other leaves and suppress
    /// the resulting degree-2 vertices, summing the labels they join.
    pub fn restrict_display<S: AsRef<str>>(&self, sub: &[S]) -> Result<EdgeLabeledTree, TreeError> {
        let r = restrict(&self.tree, sub)?;
        let labels = r
            .old_edges
            .iter()
            .map(|es| es.iter().map(|&e| self.labels[e]).sum())
            .collect();
        Ok(EdgeLabeledTree::new(r.tree, labels))
    }

    /// Contracts an interior edge; all other labels are kept.
    pub fn contract_edge(&self, e: EdgeId) -> Result<EdgeLabeledTree, TreeError> {
        if e >= self.tree.n_edges() {
            return Err(TreeError::Malformed(format!("unknown edge {e}")));
        }
        if !self.tree.is_interior_edge(e) {
            return Err(TreeError::TerminalEdge(e));
        }
        let (u, v) = self.tree.edge(e);
        let remap: Vec<VertexId> = (0..self.tree.n_vertices())
            .map(|x| {
                let x = if x == v { u } else { x };
                if x > v {
                    x - 1
                } else {
                    x
                }
            })
            .collect();
        let mut taxa = self.tree.taxa_vec().to_vec();
        taxa.remove(v);
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        for (f, &(a, b)) in self.tree.edges().iter().enumerate() {
            if f != e {
                edges.push((remap[a], remap[b]));
                labels.push(self.labels[f]);
            }
        }
        let root = self.tree.root().map(|r| remap[r]);
        Ok(EdgeLabeledTree::new(
            Tree::from_parts(taxa, edges, root)?,
            labels,
        ))
    }

    /// Contracts every interior edge labeled 0.
    pub fn contract_zero_edges(&self) -> EdgeLabeledTree {
        let mut t = self.clone();
        while let Some(e) =
            (0..t.tree.n_edges()).find(|&e| t.labels[e] == 0 && t.tree.is_interior_edge(e))
        {
            t = t.contract_edge(e).expect("interior edge");
        }
        t
    }

    pub fn canonical_form(&self) -> String {
        codec::serialize(&self.tree, Some(&self.labels), None)
    }

    pub fn serialize(&self) -> String {
        self.canonical_form()
    }
}

/// A tree whose interior vertices carry colors.
#[derive(Debug, Clone)]
pub struct DatedTree {
    tree: Tree,
    colors: Vec<Option<Color>>,
}

impl DatedTree {
    /// Every interior vertex must be colored and no leaf may be.
    pub fn new(tree: Tree, colors: Vec<Option<Color>>) -> Result<DatedTree, TreeError> {
        if colors.len() != tree.n_vertices() {
            return Err(TreeError::Malformed("one color slot per vertex".into()));
        }
        for (v, c) in colors.iter().enumerate() {
            match (tree.is_inner(v), c) {
                (true, None) => {
                    return Err(TreeError::Malformed(format!(
                        "interior vertex {v} is not colored"
                    )))
                }
                (false, Some(c)) => return Err(TreeError::Malformed(format!("leaf colored {c}"))),
                _ => {}
            }
        }
        Ok(DatedTree { tree, colors })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn color(&self, v: VertexId) -> Option<&Color> {
        self.colors[v].as_ref()
    }

    pub fn colors(&self) -> &[Option<Color>] {
        &self.colors
    }

    /// Adjacent interior vertices have distinct colors.
    pub fn is_discriminating(&self) -> bool {
        is_discriminating(&self.tree, &self.colors)
    }

    pub fn canonical_form(&self) -> String {
        codec::serialize(&self.tree, None, Some(&self.colors))
    }

    pub fn serialize(&self) -> String {
        self.canonical_form()
    }
}

pub(crate) fn is_discriminating(tree: &Tree, colors: &[Option<Color>]) -> bool {
    tree.edges()
        .iter()
        .all(|&(u, v)| match (&colors[u], &colors[v]) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        })
}

impl Tree {
    /// Maximal sets of at least two leaves adjacent to one interior vertex.
    pub fn pseudo_cherries(&self) -> BTreeSet<BTreeSet<Taxon>> {
        let mut out = BTreeSet::new();
        for v in self.inner_vertices() {
            let c: BTreeSet<Taxon> = self
                .neighbors(v)
                .iter()
                .filter_map(|&(w, _)| self.taxon(w).cloned())
                .collect();
            if c.len() >= 2 {
                out.insert(c);
            }
        }
        out
    }

    /// Restriction of the plain tree to a taxa subset.
    pub fn restrict_display<S: AsRef<str>>(&self, sub: &[S]) -> Result<Tree, TreeError> {
        Ok(restrict(self, sub)?.tree)
    }
}

struct Restriction {
    tree: Tree,
    old_edges: Vec<Vec<EdgeId>>,
}

fn restrict<S: AsRef<str>>(t: &Tree, sub: &[S]) -> Result<Restriction, TreeError> {
    if sub.is_empty() {
        return Err(TreeError::EmptySubset);
    }
    let mut kept = BTreeSet::new();
    for s in sub {
        let v = t
            .vertex_of(s.as_ref())
            .ok_or_else(|| TreeError::UnknownTaxon(s.as_ref().to_string()))?;
        kept.insert(v);
    }
    let n = t.n_vertices();
    // Steiner tree: hang from a kept taxon; a vertex belongs iff its
    // subtree holds a kept taxon.
    let anchor0 = *kept.iter().next().unwrap();
    let view = super::RootedView::new(t, anchor0);
    let mut has_kept = vec![false; n];
    for &v in view.order().iter().rev() {
        if kept.contains(&v) {
            has_kept[v] = true;
        }
        if has_kept[v] {
            if let Some(p) = view.parent(v) {
                has_kept[p] = true;
            }
        }
    }
    let in_steiner = has_kept;
    let steiner_deg = |v: VertexId| {
        t.neighbors(v)
            .iter()
            .filter(|&&(w, _)| in_steiner[w])
            .count()
    };
    // Rooted trees keep the lca of the subset as root.
    let new_root_old = t.root().map(|r| {
        let rv = super::RootedView::new(t, r);
        kept.iter().copied().reduce(|a, b| rv.lca(a, b)).unwrap()
    });
    let is_anchor: Vec<bool> = (0..n)
        .map(|v| {
            in_steiner[v] && (kept.contains(&v) || steiner_deg(v) >= 3 || Some(v) == new_root_old)
        })
        .collect();
    let mut new_id = vec![usize::MAX; n];
    let mut taxa = Vec::new();
    for v in 0..n {
        if is_anchor[v] {
            new_id[v] = taxa.len();
            taxa.push(t.taxon(v).cloned());
        }
    }
    let mut edges = Vec::new();
    let mut old_edges = Vec::new();
    for a in 0..n {
        if !is_anchor[a] {
            continue;
        }
        for &(w0, e0) in t.neighbors(a) {
            if !in_steiner[w0] {
                continue;
            }
            let mut chain = vec![e0];
            let (mut prev, mut cur) = (a, w0);
            while !is_anchor[cur] {
                let &(nx, e) = t
                    .neighbors(cur)
                    .iter()
                    .find(|&&(x, _)| x != prev && in_steiner[x])
                    .expect("suppressed vertices have Steiner degree 2");
                chain.push(e);
                prev = cur;
                cur = nx;
            }
            if a < cur {
                edges.push((new_id[a], new_id[cur]));
                old_edges.push(chain);
            }
        }
    }
    let root = new_root_old.map(|r| new_id[r]);
    let tree = Tree::from_parts(taxa, edges, root)?;
    Ok(Restriction { tree, old_edges })
}
