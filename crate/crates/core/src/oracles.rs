//! Exhaustive enumeration of small trees, labelings and datings, and a
//! brute-force search for explaining trees.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::rare_events::{explains, EventRelation, Mode};
use crate::taxon::{Color, Taxon};
use crate::tree::{DatedTree, EdgeLabeledTree, Tree, VertexId};

pub const MAX_TAXA: usize = 8;
pub const MAX_EXPLAINER_TAXA: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} taxa exceed the limit of {1}")]
    TooLarge(usize, usize),
    #[error("no taxa")]
    Empty,
    #[error("vertex bound {0} exceeds {1}")]
    BoundTooLarge(usize, usize),
}

/// A taxa set with optional bounds, guarded against blowup.
#[derive(Debug, Clone)]
pub struct InstanceFamily {
    taxa: Vec<Taxon>,
    pub max_vertices: Option<usize>,
    pub alphabet: Vec<Color>,
}

impl InstanceFamily {
    pub fn new<I: IntoIterator<Item = Taxon>>(taxa: I) -> Result<InstanceFamily, OracleError> {
        let mut taxa: Vec<Taxon> = taxa.into_iter().collect();
        taxa.sort();
        taxa.dedup();
        check_size(taxa.len(), MAX_TAXA)?;
        Ok(InstanceFamily {
            taxa,
            max_vertices: None,
            alphabet: Vec::new(),
        })
    }

    pub fn taxa(&self) -> &[Taxon] {
        &self.taxa
    }

    pub fn trees(&self) -> Vec<Tree> {
        let all = enumerate_phylo_trees(self.taxa.iter().cloned()).expect("size checked");
        match self.max_vertices {
            Some(m) => all.into_iter().filter(|t| t.n_vertices() <= m).collect(),
            None => all,
        }
    }
}

fn check_size(n: usize, max: usize) -> Result<(), OracleError> {
    match n {
        0 => Err(OracleError::Empty),
        n if n > max => Err(OracleError::TooLarge(n, max)),
        _ => Ok(()),
    }
}

#[derive(Clone)]
struct Raw {
    taxa: Vec<Option<Taxon>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl Raw {
    fn tree(&self) -> Tree {
        Tree::from_parts(self.taxa.clone(), self.edges.clone(), None)
            .expect("valid by construction")
    }

    fn with_leaf_at_vertex(&self, v: VertexId, x: &Taxon) -> Raw {
        let mut r = self.clone();
        r.taxa.push(Some(x.clone()));
        r.edges.push((v, r.taxa.len() - 1));
        r
    }

    fn with_leaf_on_edge(&self, e: usize, x: &Taxon) -> Raw {
        let mut r = self.clone();
        let (u, w) = r.edges[e];
        r.taxa.push(None);
        let mid = r.taxa.len() - 1;
        r.edges[e] = (u, mid);
        r.edges.push((mid, w));
        r.taxa.push(Some(x.clone()));
        r.edges.push((mid, mid + 1));
        r
    }
}

/// Every unrooted phylogenetic tree on the taxa, once per isomorphism
/// class, ordered by canonical form. Built by inserting taxa one at a time
/// at an interior vertex or on an edge.
pub fn enumerate_phylo_trees<I: IntoIterator<Item = Taxon>>(
    taxa: I,
) -> Result<Vec<Tree>, OracleError> {
    let mut taxa: Vec<Taxon> = taxa.into_iter().collect();
    taxa.sort();
    taxa.dedup();
    check_size(taxa.len(), MAX_TAXA)?;
    let first = match taxa.len() {
        1 => Raw {
            taxa: vec![Some(taxa[0].clone())],
            edges: vec![],
        },
        2 => Raw {
            taxa: vec![Some(taxa[0].clone()), Some(taxa[1].clone())],
            edges: vec![(0, 1)],
        },
        _ => Raw {
            taxa: vec![
                None,
                Some(taxa[0].clone()),
                Some(taxa[1].clone()),
                Some(taxa[2].clone()),
            ],
            edges: vec![(0, 1), (0, 2), (0, 3)],
        },
    };
    let mut level = vec![first];
    for x in taxa.iter().skip(3) {
        let mut seen: BTreeMap<String, Raw> = BTreeMap::new();
        for r in &level {
            let t = r.tree();
            let mut grown: Vec<Raw> = t
                .inner_vertices()
                .map(|v| r.with_leaf_at_vertex(v, x))
                .collect();
            grown.extend((0..r.edges.len()).map(|e| r.with_leaf_on_edge(e, x)));
            for g in grown {
                seen.entry(g.tree().canonical_form()).or_insert(g);
            }
        }
        level = seen.into_values().collect();
    }
    let mut out: Vec<(String, Tree)> = level
        .iter()
        .map(|r| {
            let t = r.tree();
            (t.canonical_form(), t)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    Ok(out.into_iter().map(|(_, t)| t).collect())
}

/// All `2^|E|` assignments of 0 and 1 to the edges, in binary counting
/// order with edge 0 as the low bit.
pub fn enumerate_edge_labelings(t: &Tree) -> impl Iterator<Item = EdgeLabeledTree> + '_ {
    let m = t.n_edges();
    (0u64..1 << m).map(move |mask| {
        let labels = (0..m).map(|e| ((mask >> e) & 1) as u32).collect();
        EdgeLabeledTree::new(t.clone(), labels)
    })
}

/// All colorings of the interior vertices from `alphabet`; with
/// `discriminating_only`, only those where adjacent interior vertices
/// differ.
pub fn enumerate_datings<'a>(
    t: &'a Tree,
    alphabet: &'a [Color],
    discriminating_only: bool,
) -> impl Iterator<Item = DatedTree> + 'a {
    let inner: Vec<VertexId> = t.inner_vertices().collect();
    let k = alphabet.len();
    let total = if k == 0 { 0 } else { k.pow(inner.len() as u32) };
    (0..total).filter_map(move |mut code| {
        let mut colors: Vec<Option<Color>> = vec![None; t.n_vertices()];
        for &v in &inner {
            colors[v] = Some(alphabet[code % k].clone());
            code /= k;
        }
        let d = DatedTree::new(t.clone(), colors).expect("interior vertices colored");
        (!discriminating_only || d.is_discriminating()).then_some(d)
    })
}

/// Every rooting of `t`: at each interior vertex, and at a new degree-2
/// vertex on each edge.
pub fn rootings(t: &Tree) -> Vec<Tree> {
    let mut out: Vec<Tree> = t
        .inner_vertices()
        .map(|v| t.with_root(Some(v)).expect("interior root"))
        .collect();
    out.extend(subdivisions(t, true));
    out
}

/// `t` with one edge subdivided by a new degree-2 vertex, for each edge.
pub fn subdivisions(t: &Tree, rooted: bool) -> Vec<Tree> {
    let n = t.n_vertices();
    let taxa: Vec<Option<Taxon>> = (0..n).map(|v| t.taxon(v).cloned()).chain([None]).collect();
    (0..t.n_edges())
        .map(|e| {
            let mut edges = t.edges().to_vec();
            let (u, w) = edges[e];
            edges[e] = (u, n);
            edges.push((n, w));
            Tree::from_parts(taxa.clone(), edges, rooted.then_some(n)).expect("valid subdivision")
        })
        .collect()
}

fn explainers(
    r: &EventRelation,
    max_vertices: usize,
    relaxed: bool,
) -> Result<Vec<EdgeLabeledTree>, OracleError> {
    let n = r.taxa().len();
    check_size(n, MAX_EXPLAINER_TAXA)?;
    if max_vertices > 2 * n + 2 {
        return Err(OracleError::BoundTooLarge(max_vertices, 2 * n + 2));
    }
    let trees = enumerate_phylo_trees(r.taxa().iter().cloned())?;
    let mut shapes: Vec<Tree> = Vec::new();
    for t in trees {
        match r.mode() {
            Mode::Symmetric => {
                if relaxed {
                    shapes.extend(subdivisions(&t, false));
                }
                shapes.push(t);
            }
            _ => shapes.extend(rootings(&t)),
        }
    }
    let mut found: BTreeMap<String, EdgeLabeledTree> = BTreeMap::new();
    for s in shapes.iter().filter(|s| s.n_vertices() <= max_vertices) {
        for l in enumerate_edge_labelings(s) {
            if explains(&l, r).expect("taxa agree") {
                found.entry(l.canonical_form()).or_insert(l);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Every labeled tree with at most `max_vertices` vertices that explains
/// `r`, over phylogenetic trees (rooted at any vertex or on any edge when
/// `r` has directed pairs). Ordered by canonical form.
pub fn brute_force_explainers(
    r: &EventRelation,
    max_vertices: usize,
) -> Result<Vec<EdgeLabeledTree>, OracleError> {
    explainers(r, max_vertices, false)
}

/// As [`brute_force_explainers`], also admitting unrooted trees with one
/// degree-2 vertex, the shape forced by relations whose quotient has two
/// components.
pub fn brute_force_explainers_relaxed(
    r: &EventRelation,
    max_vertices: usize,
) -> Result<Vec<EdgeLabeledTree>, OracleError> {
    explainers(r, max_vertices, true)
}
