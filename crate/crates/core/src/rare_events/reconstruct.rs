//! Minimally resolved trees for a validated quotient graph.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::quotient::{build_quotient, QuotientError, QuotientGraph};
use super::{explains, EventRelation, Mode, RelationError};
use crate::taxon::Taxon;
use crate::tree::{EdgeLabeledTree, TreeBuilder, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    /// A directed component without a unique source (witness: smallest
    /// representative of the component).
    #[error("component of {0} has no unique source")]
    NoSource(Taxon),
    #[error("invalid root choice: {0}")]
    InvalidRootChoice(String),
    #[error("tree has no leaf {0}")]
    UnknownRepresentative(Taxon),
    #[error("quotient graph is not connected")]
    Disconnected,
    #[error("zero relation is not discrete")]
    NotDiscrete,
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// Non-fatal remarks attached to a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diagnostic {
    /// The hub joining exactly two components has degree 2.
    Degree2Root,
    /// No binary tree exists: the quotient has exactly two components.
    TwoComponents,
    /// Some mixed component has no central vertex.
    NoCentralVertex,
    /// A mixed relation was reconstructed without its directions.
    MixedAsUndirected,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagnostic::Degree2Root => "degree-2 root",
            Diagnostic::TwoComponents => "two components: no binary tree exists",
            Diagnostic::NoCentralVertex => "a component has no central vertex",
            Diagnostic::MixedAsUndirected => "mixed relation reconstructed without directions",
        })
    }
}

/// Where to root a directed forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootChoice {
    /// The hub joining the components.
    Hub,
    /// The primed copy of a component source, named by its representative.
    Source(Taxon),
}

impl fmt::Display for RootChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootChoice::Hub => f.write_str("hub"),
            RootChoice::Source(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub tree: EdgeLabeledTree,
    pub diagnostics: Vec<Diagnostic>,
}

/// Vertices of one component inside a shared builder.
struct Built {
    /// Attachment vertex for a hub, and the root in directed mode.
    anchor: VertexId,
}

fn is_directed(q: &QuotientGraph) -> bool {
    q.mode() != Mode::Symmetric
}

fn source_of(q: &QuotientGraph, comp: usize) -> Result<usize, ReconstructError> {
    q.source(comp)
        .ok_or_else(|| ReconstructError::NoSource(q.rep(q.components()[comp][0]).clone()))
}

/// Copies the component, primes inner classes (and the source when
/// directed), labels copied edges 1 and primed pendants 0.
fn build_component(
    b: &mut TreeBuilder,
    q: &QuotientGraph,
    comp: usize,
    directed: bool,
) -> Result<Built, ReconstructError> {
    let members = &q.components()[comp];
    let source = if directed && members.len() > 1 {
        Some(source_of(q, comp)?)
    } else {
        None
    };
    let mut at: BTreeMap<usize, VertexId> = BTreeMap::new();
    let mut first_primed = None;
    for &c in members {
        let leaf = b.leaf(q.rep(c).clone());
        if q.degree(c) >= 2 || Some(c) == source {
            let p = b.inner();
            b.connect(p, leaf, 0);
            at.insert(c, p);
            first_primed.get_or_insert(p);
        } else {
            at.insert(c, leaf);
        }
    }
    for arc in q.component_arcs(comp) {
        b.connect(at[&arc.from], at[&arc.to], 1);
    }
    let anchor = match source {
        Some(s) => at[&s],
        None => first_primed.unwrap_or(at[&members[0]]),
    };
    Ok(Built { anchor })
}

/// Minimally resolved tree of one component, on class representatives.
///
/// Directed components prime their source even when it is a leaf of the
/// component and are rooted at the primed source.
pub fn minimally_resolved_component(
    q: &QuotientGraph,
    comp: usize,
    directed: bool,
) -> Result<EdgeLabeledTree, ReconstructError> {
    let members = &q.components()[comp];
    let mut b = TreeBuilder::new();
    if members.len() == 2 && !directed {
        let x = b.leaf(q.rep(members[0]).clone());
        let y = b.leaf(q.rep(members[1]).clone());
        b.connect(x, y, 1);
        return Ok(b.labeled().expect("valid edge"));
    }
    let built = build_component(&mut b, q, comp, directed)?;
    if directed {
        b.set_root(built.anchor);
    }
    Ok(b.labeled().expect("component trees are valid"))
}

/// Minimally resolved tree of the whole quotient, on representatives.
///
/// Several components hang from a hub by 1-edges. An edge component `vw`
/// is subdivided by a new vertex with a 0-edge to one endpoint: the tail in
/// directed mode, otherwise the endpoint with the larger class, ties going
/// to the smaller representative.
pub fn minimally_resolved_forest(
    q: &QuotientGraph,
    root_choice: Option<&RootChoice>,
) -> Result<Reconstruction, ReconstructError> {
    let directed = is_directed(q);
    if !directed && root_choice.is_some() {
        return Err(ReconstructError::InvalidRootChoice(
            "undirected relations are not rooted".into(),
        ));
    }
    let comps = q.components();
    if comps.len() == 1 {
        if let Some(RootChoice::Hub) = root_choice {
            return Err(ReconstructError::InvalidRootChoice(
                "a single component has no hub".into(),
            ));
        }
        if let Some(RootChoice::Source(t)) = root_choice {
            let ok = comps[0].len() > 1 && source_of(q, 0).map(|s| q.rep(s) == t)?;
            if !ok {
                return Err(ReconstructError::InvalidRootChoice(format!(
                    "{t} is not a component source"
                )));
            }
        }
        return Ok(Reconstruction {
            tree: minimally_resolved_component(q, 0, directed)?,
            diagnostics: Vec::new(),
        });
    }
    let mut b = TreeBuilder::new();
    let hub = b.inner();
    let mut root = if directed { Some(hub) } else { None };
    let mut chosen = false;
    for (ci, members) in comps.iter().enumerate() {
        let anchor = match members.len() {
            1 => b.leaf(q.rep(members[0]).clone()),
            2 if !directed => {
                let (v, w) = (members[0], members[1]);
                let (zero, one) = if q.classes()[w].len() > q.classes()[v].len() {
                    (w, v)
                } else {
                    (v, w)
                };
                let x = b.inner();
                let lz = b.leaf(q.rep(zero).clone());
                let lo = b.leaf(q.rep(one).clone());
                b.connect(x, lz, 0);
                b.connect(x, lo, 1);
                x
            }
            _ => build_component(&mut b, q, ci, directed)?.anchor,
        };
        b.connect(hub, anchor, 1);
        if let Some(RootChoice::Source(t)) = root_choice {
            if members.len() > 1 && q.rep(source_of(q, ci)?) == t {
                root = Some(anchor);
                chosen = true;
            }
        }
    }
    if let Some(RootChoice::Source(t)) = root_choice {
        if !chosen {
            return Err(ReconstructError::InvalidRootChoice(format!(
                "{t} is not the source of a component with an arc"
            )));
        }
    }
    if let Some(r) = root {
        b.set_root(r);
    }
    let mut diagnostics = Vec::new();
    if comps.len() == 2 && root != Some(hub) {
        diagnostics.push(Diagnostic::Degree2Root);
    }
    Ok(Reconstruction {
        tree: b.labeled().expect("forest trees are valid"),
        diagnostics,
    })
}

/// Replaces each class representative by its whole class.
///
/// A representative on a 0-edge to an inner vertex `w` gets its class
/// mates as further 0-leaves of `w`; otherwise it is replaced by a new
/// vertex that keeps the representative's edge and carries the class on
/// 0-edges.
pub fn expand_classes(
    t: &EdgeLabeledTree,
    classes: &[Vec<Taxon>],
) -> Result<EdgeLabeledTree, ReconstructError> {
    let tree = t.tree();
    for c in classes {
        if tree.vertex_of(c[0].as_str()).is_none() {
            return Err(ReconstructError::UnknownRepresentative(c[0].clone()));
        }
    }
    if tree.n_vertices() == 1 {
        let members = &classes
            .iter()
            .find(|c| tree.vertex_of(c[0].as_str()).is_some())
            .expect("one class");
        let mut b = TreeBuilder::new();
        match members.len() {
            1 => return Ok(t.clone()),
            2 if !tree.is_rooted() => {
                let x = b.leaf(members[0].clone());
                let y = b.leaf(members[1].clone());
                b.connect(x, y, 0);
            }
            _ => {
                let h = b.inner();
                for m in members.iter() {
                    let l = b.leaf(m.clone());
                    b.connect(h, l, 0);
                }
                if tree.is_rooted() {
                    b.set_root(h);
                }
            }
        }
        return Ok(b.labeled().unwrap());
    }
    let mut b = TreeBuilder::new();
    let mut map: Vec<VertexId> = Vec::with_capacity(tree.n_vertices());
    for v in 0..tree.n_vertices() {
        map.push(match tree.taxon(v) {
            Some(x) => b.leaf(x.clone()),
            None => b.inner(),
        });
    }
    // Vertex that the representative's own edge should end at.
    let mut replace: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for c in classes.iter().filter(|c| c.len() > 1) {
        let r = tree.vertex_of(c[0].as_str()).unwrap();
        let (w, e) = tree.neighbors(r)[0];
        if t.label(e) == 0 && tree.is_inner(w) {
            for m in &c[1..] {
                let l = b.leaf(m.clone());
                b.connect(map[w], l, 0);
            }
        } else {
            let h = b.inner();
            replace.insert(r, h);
            b.connect(h, map[r], 0);
            for m in &c[1..] {
                let l = b.leaf(m.clone());
                b.connect(h, l, 0);
            }
        }
    }
    for (e, &(u, v)) in tree.edges().iter().enumerate() {
        let end = |x: VertexId| replace.get(&x).copied().unwrap_or(map[x]);
        b.connect(end(u), end(v), t.label(e));
    }
    if let Some(r) = tree.root() {
        b.set_root(map[r]);
    }
    Ok(b.labeled().expect("expansion keeps a valid tree"))
}

/// Validates `r` and reconstructs a minimally resolved explaining tree on
/// all taxa. Mixed relations are reconstructed from their symmetrization.
pub fn reconstruct_relation(
    r: &EventRelation,
    root_choice: Option<&RootChoice>,
) -> Result<Reconstruction, ReconstructError> {
    if r.mode() == Mode::Mixed {
        let mut rec = reconstruct_relation(&r.symmetrized(), None)?;
        rec.diagnostics.push(Diagnostic::MixedAsUndirected);
        return Ok(rec);
    }
    let q = build_quotient(r)?;
    let forest = minimally_resolved_forest(&q, root_choice)?;
    let tree = expand_classes(&forest.tree, q.classes())?;
    Ok(Reconstruction {
        tree,
        diagnostics: forest.diagnostics,
    })
}

/// True iff no single interior-edge contraction still explains `r`.
pub fn is_least_resolved(t: &EdgeLabeledTree, r: &EventRelation) -> Result<bool, RelationError> {
    for e in 0..t.tree().n_edges() {
        if t.tree().is_interior_edge(e) {
            let c = t.contract_edge(e)?;
            if explains(&c, r)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The criterion for connected quotients with discrete zero classes: every
/// 0-edge ends at a leaf and every inner vertex has exactly one 0-edge.
pub fn structural_least_resolved(
    t: &EdgeLabeledTree,
    r: &EventRelation,
) -> Result<bool, ReconstructError> {
    let q = build_quotient(r)?;
    if q.components().len() != 1 {
        return Err(ReconstructError::Disconnected);
    }
    if !q.is_discrete() {
        return Err(ReconstructError::NotDiscrete);
    }
    let tree = t.tree();
    for (e, &(u, v)) in tree.edges().iter().enumerate() {
        if t.label(e) == 0 && tree.is_inner(u) && tree.is_inner(v) {
            return Ok(false);
        }
    }
    for v in tree.inner_vertices() {
        let zeros = tree
            .neighbors(v)
            .iter()
            .filter(|&&(_, e)| t.label(e) == 0)
            .count();
        if zeros != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}
