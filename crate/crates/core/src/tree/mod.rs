//! Tree model shared by every other module.
//!
//! Vertices and edges live in flat arrays addressed by `VertexId` and
//! `EdgeId`. Ids are internal: only taxa and colors survive serialization.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::taxon::{Color, Taxon};

pub mod codec;
mod labeled;

pub use codec::{parse_tree, ParseError, ParsedTree};
pub use labeled::{DatedTree, EdgeLabeledTree};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown taxon {0}")]
    UnknownTaxon(String),
    #[error("tree is not rooted")]
    NotRooted,
    #[error("empty taxa subset")]
    EmptySubset,
    #[error("edge {0} is a terminal edge")]
    TerminalEdge(EdgeId),
    #[error("duplicate taxon {0}")]
    DuplicateTaxon(Taxon),
    #[error("malformed tree: {0}")]
    Malformed(String),
}

/// An unrooted or rooted tree whose degree-1 vertices carry taxa.
#[derive(Debug, Clone)]
pub struct Tree {
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<(VertexId, VertexId)>,
    taxa: Vec<Option<Taxon>>,
    by_taxon: BTreeMap<Taxon, VertexId>,
    root: Option<VertexId>,
}

impl Tree {
    /// Validates and assembles a tree. Edge ids follow the order of `edges`.
    pub fn from_parts(
        taxa: Vec<Option<Taxon>>,
        edges: Vec<(VertexId, VertexId)>,
        root: Option<VertexId>,
    ) -> Result<Tree, TreeError> {
        let n = taxa.len();
        if n == 0 {
            return Err(TreeError::Malformed("empty tree".into()));
        }
        if edges.len() != n - 1 {
            return Err(TreeError::Malformed(format!(
                "{} vertices but {} edges",
                n,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n {
                return Err(TreeError::UnknownVertex(u));
            }
            if v >= n {
                return Err(TreeError::UnknownVertex(v));
            }
            if u == v {
                return Err(TreeError::Malformed(format!("loop at vertex {u}")));
            }
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        // n-1 edges plus connectivity gives acyclicity.
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(w, _) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(TreeError::Malformed("graph is not connected".into()));
        }
        let mut by_taxon = BTreeMap::new();
        for (v, t) in taxa.iter().enumerate() {
            let leaf = adj[v].len() <= 1;
            match t {
                Some(t) => {
                    if !leaf {
                        return Err(TreeError::Malformed(format!(
                            "taxon {t} on a vertex of degree {}",
                            adj[v].len()
                        )));
                    }
                    if by_taxon.insert(t.clone(), v).is_some() {
                        return Err(TreeError::DuplicateTaxon(t.clone()));
                    }
                }
                None if leaf => {
                    return Err(TreeError::Malformed(format!("leaf {v} carries no taxon")));
                }
                None => {}
            }
        }
        if let Some(r) = root {
            if r >= n {
                return Err(TreeError::UnknownVertex(r));
            }
            if n > 1 && taxa[r].is_some() {
                return Err(TreeError::Malformed("root is a leaf".into()));
            }
        }
        Ok(Tree {
            adj,
            edges,
            taxa,
            by_taxon,
            root,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_taxa(&self) -> usize {
        self.by_taxon.len()
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    pub fn is_rooted(&self) -> bool {
        self.root.is_some()
    }

    /// Same tree with a different (or no) root.
    pub fn with_root(&self, root: Option<VertexId>) -> Result<Tree, TreeError> {
        Tree::from_parts(self.taxa.clone(), self.edges.clone(), root)
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn taxon(&self, v: VertexId) -> Option<&Taxon> {
        self.taxa[v].as_ref()
    }

    pub fn vertex_of(&self, taxon: &str) -> Option<VertexId> {
        self.by_taxon.get(taxon).copied()
    }

    fn require_taxon(&self, taxon: &str) -> Result<VertexId, TreeError> {
        self.vertex_of(taxon)
            .ok_or_else(|| TreeError::UnknownTaxon(taxon.to_string()))
    }

    /// Taxa in byte order.
    pub fn taxa(&self) -> impl Iterator<Item = &Taxon> {
        self.by_taxon.keys()
    }

    /// `(taxon, vertex)` pairs in taxon order.
    pub fn leaves(&self) -> impl Iterator<Item = (&Taxon, VertexId)> {
        self.by_taxon.iter().map(|(t, &v)| (t, v))
    }

    /// Interior vertices: all vertices that carry no taxon.
    pub fn inner_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n_vertices()).filter(|&v| self.taxa[v].is_none())
    }

    pub fn is_inner(&self, v: VertexId) -> bool {
        self.taxa[v].is_none()
    }

    /// True if both endpoints are interior vertices.
    pub fn is_interior_edge(&self, e: EdgeId) -> bool {
        let (u, v) = self.edges[e];
        self.is_inner(u) && self.is_inner(v)
    }

    /// No vertex of degree 2, except a declared root.
    pub fn is_phylogenetic(&self) -> bool {
        (0..self.n_vertices()).all(|v| self.degree(v) != 2 || Some(v) == self.root)
    }

    /// Every interior vertex has degree 3 (a declared root may have degree 2).
    pub fn is_binary(&self) -> bool {
        self.inner_vertices().all(|v| {
            let d = self.degree(v);
            d == 3 || (d == 2 && Some(v) == self.root)
        })
    }

    /// The unique path from `u` to `v` as an ordered edge sequence.
    pub fn path_between(&self, u: VertexId, v: VertexId) -> Result<Vec<EdgeId>, TreeError> {
        let n = self.n_vertices();
        if u >= n {
            return Err(TreeError::UnknownVertex(u));
        }
        if v >= n {
            return Err(TreeError::UnknownVertex(v));
        }
        // Parent pointers from v, then walk from u.
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            for &(w, e) in &self.adj[x] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((x, e));
                    stack.push(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = u;
        while x != v {
            let (p, e) = parent[x].expect("connected");
            path.push(e);
            x = p;
        }
        Ok(path)
    }

    /// Rooted view at the declared root, or at vertex 0 if unrooted.
    pub fn rooted_view(&self) -> RootedView {
        RootedView::new(self, self.root.unwrap_or(0))
    }

    /// Median (triple point) of three taxa; repeats are allowed.
    pub fn median(&self, x: &str, y: &str, z: &str) -> Result<VertexId, TreeError> {
        let (x, y, z) = (
            self.require_taxon(x)?,
            self.require_taxon(y)?,
            self.require_taxon(z)?,
        );
        Ok(self.rooted_view().median(x, y, z))
    }

    /// Least common ancestor of a non-empty taxa set in a rooted tree.
    pub fn lca<S: AsRef<str>>(&self, set: &[S]) -> Result<VertexId, TreeError> {
        let root = self.root.ok_or(TreeError::NotRooted)?;
        if set.is_empty() {
            return Err(TreeError::EmptySubset);
        }
        let view = RootedView::new(self, root);
        let mut acc = self.require_taxon(set[0].as_ref())?;
        for s in &set[1..] {
            acc = view.lca(acc, self.require_taxon(s.as_ref())?);
        }
        Ok(acc)
    }

    /// The smallest taxon in byte order.
    pub fn min_taxon(&self) -> Option<&Taxon> {
        self.by_taxon.keys().next()
    }

    pub fn canonical_form(&self) -> String {
        codec::serialize(self, None, None)
    }

    pub(crate) fn taxa_vec(&self) -> &[Option<Taxon>] {
        &self.taxa
    }
}

/// Parent/depth arrays of a tree hung from a chosen vertex.
#[derive(Debug, Clone)]
pub struct RootedView {
    root: VertexId,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<usize>,
    order: Vec<VertexId>,
}

impl RootedView {
    pub fn new(t: &Tree, root: VertexId) -> RootedView {
        let n = t.n_vertices();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(w, e) in t.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((u, e));
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        RootedView {
            root,
            parent,
            depth,
            order,
        }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v].map(|(p, _)| p)
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.parent[v].map(|(_, e)| e)
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    /// Vertices in breadth-first order from the root.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn lca(&self, mut u: VertexId, mut v: VertexId) -> VertexId {
        while self.depth[u] > self.depth[v] {
            u = self.parent(u).unwrap();
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent(v).unwrap();
        }
        while u != v {
            u = self.parent(u).unwrap();
            v = self.parent(v).unwrap();
        }
        u
    }

    /// The deepest of the three pairwise lcas lies on all three paths.
    pub fn median(&self, x: VertexId, y: VertexId, z: VertexId) -> VertexId {
        let a = self.lca(x, y);
        let b = self.lca(x, z);
        let c = self.lca(y, z);
        [a, b, c]
            .into_iter()
            .max_by_key(|&w| self.depth[w])
            .unwrap()
    }

    /// Edges from `v` up to its ancestor `a`.
    pub fn edges_up(&self, mut v: VertexId, a: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while v != a {
            let (p, e) = self.parent[v].expect("a must be an ancestor of v");
            out.push(e);
            v = p;
        }
        out
    }
}

/// Incremental construction of trees, labeled trees and dated trees.
#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    taxa: Vec<Option<Taxon>>,
    colors: Vec<Option<Color>>,
    edges: Vec<(VertexId, VertexId)>,
    labels: Vec<u32>,
    root: Option<VertexId>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, taxon: Taxon) -> VertexId {
        self.taxa.push(Some(taxon));
        self.colors.push(None);
        self.taxa.len() - 1
    }

    pub fn inner(&mut self) -> VertexId {
        self.taxa.push(None);
        self.colors.push(None);
        self.taxa.len() - 1
    }

    pub fn colored(&mut self, color: Color) -> VertexId {
        let v = self.inner();
        self.colors[v] = Some(color);
        v
    }

    pub fn connect(&mut self, u: VertexId, v: VertexId, label: u32) -> EdgeId {
        self.edges.push((u, v));
        self.labels.push(label);
        self.edges.len() - 1
    }

    pub fn set_root(&mut self, v: VertexId) {
        self.root = Some(v);
    }

    pub fn n_vertices(&self) -> usize {
        self.taxa.len()
    }

    pub fn tree(self) -> Result<Tree, TreeError> {
        Tree::from_parts(self.taxa, self.edges, self.root)
    }

    pub fn labeled(self) -> Result<EdgeLabeledTree, TreeError> {
        let labels = self.labels.clone();
        Ok(EdgeLabeledTree::new(self.tree()?, labels))
    }

    pub fn dated(self) -> Result<DatedTree, TreeError> {
        let colors = self.colors.clone();
        DatedTree::new(self.tree()?, colors)
    }
}

#[cfg(test)]
pub(crate) fn tx(s: &str) -> Taxon {
    Taxon::new(s).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(names: &[&str]) -> (Tree, VertexId) {
        let mut b = TreeBuilder::new();
        let c = b.inner();
        for n in names {
            let l = b.leaf(tx(n));
            b.connect(c, l, 0);
        }
        (b.tree().unwrap(), c)
    }

    /// ab|cd with interiors p (next to a,b) and q (next to c,d).
    fn quartet() -> (Tree, VertexId, VertexId) {
        let mut b = TreeBuilder::new();
        let p = b.inner();
        let q = b.inner();
        b.connect(p, q, 0);
        for (n, at) in [("a", p), ("b", p), ("c", q), ("d", q)] {
            let l = b.leaf(tx(n));
            b.connect(at, l, 0);
        }
        (b.tree().unwrap(), p, q)
    }

    #[test]
    fn path_on_star() {
        let (t, _) = star(&["a", "b", "c"]);
        let a = t.vertex_of("a").unwrap();
        let b = t.vertex_of("b").unwrap();
        assert_eq!(t.path_between(a, b).unwrap().len(), 2);
        assert!(t.path_between(a, a).unwrap().is_empty());
        assert_eq!(t.path_between(a, 99), Err(TreeError::UnknownVertex(99)));
    }

    #[test]
    fn path_on_caterpillar() {
        let (t, p, q) = quartet();
        let a = t.vertex_of("a").unwrap();
        let c = t.vertex_of("c").unwrap();
        let path = t.path_between(a, c).unwrap();
        let ends: Vec<_> = path.iter().map(|&e| t.edge(e)).collect();
        assert_eq!(ends.len(), 3);
        assert!(ends[1] == (p, q) || ends[1] == (q, p));
    }

    #[test]
    fn medians() {
        let (t, c) = star(&["a", "b", "c"]);
        assert_eq!(t.median("a", "b", "c").unwrap(), c);
        let (t, p, q) = quartet();
        assert_eq!(t.median("a", "b", "c").unwrap(), p);
        assert_eq!(t.median("a", "c", "d").unwrap(), q);
        assert_eq!(t.median("a", "a", "d").unwrap(), t.vertex_of("a").unwrap());
        assert!(matches!(
            t.median("a", "b", "z"),
            Err(TreeError::UnknownTaxon(_))
        ));
    }

    #[test]
    fn lca_queries() {
        let (t, _, _) = quartet();
        assert_eq!(t.lca(&["a", "b"]), Err(TreeError::NotRooted));
        let mut b = TreeBuilder::new();
        let rho = b.inner();
        let u = b.inner();
        let a = b.leaf(tx("a"));
        let bb = b.leaf(tx("b"));
        let c = b.leaf(tx("c"));
        b.connect(rho, a, 0);
        b.connect(rho, u, 0);
        b.connect(u, bb, 0);
        b.connect(u, c, 0);
        b.set_root(rho);
        let t = b.tree().unwrap();
        assert_eq!(t.lca(&["b", "c"]).unwrap(), u);
        assert_eq!(t.lca(&["a", "c"]).unwrap(), rho);
        assert_eq!(t.lca(&["a"]).unwrap(), a);
        assert_eq!(t.lca::<&str>(&[]), Err(TreeError::EmptySubset));
    }

    #[test]
    fn validation() {
        assert!(Tree::from_parts(vec![Some(tx("a"))], vec![], None).is_ok());
        assert!(Tree::from_parts(vec![None], vec![], None).is_err());
        // taxon on an inner vertex
        let r = Tree::from_parts(
            vec![Some(tx("a")), Some(tx("b")), Some(tx("c"))],
            vec![(0, 1), (1, 2)],
            None,
        );
        assert!(r.is_err());
        let r = Tree::from_parts(vec![Some(tx("a")), Some(tx("a"))], vec![(0, 1)], None);
        assert_eq!(r.unwrap_err(), TreeError::DuplicateTaxon(tx("a")));
    }

    #[test]
    fn phylogenetic_predicate() {
        let mut b = TreeBuilder::new();
        let z = b.inner();
        let a = b.leaf(tx("a"));
        let c = b.leaf(tx("b"));
        b.connect(z, a, 1);
        b.connect(z, c, 1);
        let t = b.tree().unwrap();
        assert!(!t.is_phylogenetic());
        assert!(t.with_root(Some(z)).unwrap().is_phylogenetic());
    }
}
