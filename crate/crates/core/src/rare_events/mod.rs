//! Zero and single-1 relations on taxa, derived from edge-labeled trees.
//!
//! `x ~0 y` when the path between them carries only 0-labels, `x ~1 y` when
//! it carries exactly one 1-label, and in a rooted tree `x ⇀ y` when the lca
//! to `x` path is all 0 and the lca to `y` path carries exactly one 1-label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::taxon::{BadToken, Taxon};
use crate::tree::{EdgeLabeledTree, TreeError};

mod binary;
mod mixed;
mod quotient;
mod reconstruct;

pub use binary::{binary_count_formula, enumerate_binary, least_resolved_trees, BinaryEnumeration};
pub use mixed::{admissible_rooted_trees, central_vertices, Admissible, RootedOption};
pub use quotient::{build_quotient, Arc, ArcKind, QuotientError, QuotientGraph};
pub use reconstruct::{
    expand_classes, is_least_resolved, minimally_resolved_component, minimally_resolved_forest,
    reconstruct_relation, structural_least_resolved, Diagnostic, ReconstructError, Reconstruction,
    RootChoice,
};

/// Record kinds of an event relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// Path carries only 0-labels.
    Zero,
    /// Path carries exactly one 1-label.
    SymOne,
    /// `a ⇀ b` for the record `(a, b)`.
    DirOne,
    /// Exactly one 1-label, direction unknown.
    UnkOne,
}

impl Kind {
    pub fn code(self) -> char {
        match self {
            Kind::Zero => 'Z',
            Kind::SymOne => 'S',
            Kind::DirOne => 'D',
            Kind::UnkOne => 'U',
        }
    }

    pub fn from_code(s: &str) -> Option<Kind> {
        match s {
            "Z" => Some(Kind::Zero),
            "S" => Some(Kind::SymOne),
            "D" => Some(Kind::DirOne),
            "U" => Some(Kind::UnkOne),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Symmetric,
    Directed,
    Mixed,
}

/// One typed pair. For `DirOne` the order is `a ⇀ b`; other kinds are
/// stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Record {
    pub a: Taxon,
    pub b: Taxon,
    pub kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("pair {0},{1} relates a taxon to itself")]
    SelfPair(Taxon, Taxon),
    #[error("pair {0},{1} is listed twice")]
    DuplicatePair(Taxon, Taxon),
    #[error("leaf taxa of the tree differ from the relation's taxa")]
    TaxaMismatch,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

impl From<BadToken> for RelationError {
    fn from(e: BadToken) -> Self {
        RelationError::Syntax {
            line: 0,
            msg: e.to_string(),
        }
    }
}

/// Taxa plus typed pair records. Unlisted pairs are separated by at least
/// two events.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventRelation {
    taxa: BTreeSet<Taxon>,
    records: BTreeMap<(Taxon, Taxon), Record>,
}

fn key(a: &Taxon, b: &Taxon) -> (Taxon, Taxon) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl EventRelation {
    pub fn new<I: IntoIterator<Item = Taxon>>(taxa: I) -> EventRelation {
        EventRelation {
            taxa: taxa.into_iter().collect(),
            records: BTreeMap::new(),
        }
    }

    pub fn add_taxon(&mut self, t: Taxon) {
        self.taxa.insert(t);
    }

    /// Adds a record; both taxa join the taxa set.
    pub fn insert(&mut self, a: Taxon, b: Taxon, kind: Kind) -> Result<(), RelationError> {
        if a == b {
            return Err(RelationError::SelfPair(a, b));
        }
        let k = key(&a, &b);
        if self.records.contains_key(&k) {
            return Err(RelationError::DuplicatePair(k.0, k.1));
        }
        let (a, b) = if kind == Kind::DirOne {
            (a, b)
        } else {
            k.clone()
        };
        self.taxa.insert(a.clone());
        self.taxa.insert(b.clone());
        self.records.insert(k, Record { a, b, kind });
        Ok(())
    }

    pub fn taxa(&self) -> &BTreeSet<Taxon> {
        &self.taxa
    }

    /// Records in order of their unordered pair.
    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, a: &Taxon, b: &Taxon) -> Option<&Record> {
        self.records.get(&key(a, b))
    }

    /// Computed from the record kinds. `SymOne` next to directed records
    /// makes the relation mixed.
    pub fn mode(&self) -> Mode {
        let has = |k| self.records.values().any(|r| r.kind == k);
        let dir = has(Kind::DirOne);
        let unk = has(Kind::UnkOne);
        let sym = has(Kind::SymOne);
        if !dir && !unk {
            Mode::Symmetric
        } else if dir && !unk && !sym {
            Mode::Directed
        } else {
            Mode::Mixed
        }
    }

    /// Forgets directions: every one-record becomes `SymOne`.
    pub fn symmetrized(&self) -> EventRelation {
        let mut out = EventRelation::new(self.taxa.iter().cloned());
        for r in self.records.values() {
            let kind = if r.kind == Kind::Zero {
                Kind::Zero
            } else {
                Kind::SymOne
            };
            out.insert(r.a.clone(), r.b.clone(), kind).unwrap();
        }
        out
    }

    /// The induced relation on a subset of taxa.
    pub fn restrict(&self, sub: &BTreeSet<Taxon>) -> EventRelation {
        let mut out = EventRelation::new(self.taxa.intersection(sub).cloned());
        for r in self.records.values() {
            if sub.contains(&r.a) && sub.contains(&r.b) {
                out.insert(r.a.clone(), r.b.clone(), r.kind).unwrap();
            }
        }
        out
    }

    /// Parses the tab-separated relation format.
    pub fn parse(text: &str) -> Result<EventRelation, RelationError> {
        let mut rel = EventRelation::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let syn = |msg: String| RelationError::Syntax { line, msg };
            let l = raw.trim_end_matches('\r');
            if l.trim().is_empty() || l.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = l.split('\t').collect();
            if fields[0] == "taxa" {
                if fields.len() != 2 {
                    return Err(syn("expected `taxa<TAB>a,b,...`".into()));
                }
                for t in fields[1].split(',').filter(|s| !s.is_empty()) {
                    rel.add_taxon(Taxon::new(t.trim()).map_err(|e| syn(e.to_string()))?);
                }
                continue;
            }
            if fields.len() != 3 {
                return Err(syn(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let a = Taxon::new(fields[0].trim()).map_err(|e| syn(e.to_string()))?;
            let b = Taxon::new(fields[1].trim()).map_err(|e| syn(e.to_string()))?;
            let kind = Kind::from_code(fields[2].trim())
                .ok_or_else(|| syn(format!("unknown kind {:?}", fields[2])))?;
            match rel.insert(a, b, kind) {
                Ok(()) => {}
                Err(RelationError::DuplicatePair(a, b)) => {
                    return Err(syn(format!("pair {a},{b} is listed twice")))
                }
                Err(RelationError::SelfPair(a, _)) => {
                    return Err(syn(format!("pair {a},{a} relates a taxon to itself")))
                }
                Err(e) => return Err(e),
            }
        }
        Ok(rel)
    }
}

impl fmt::Display for EventRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "taxa\t{}", crate::taxon::join(&self.taxa))?;
        for r in self.records.values() {
            writeln!(f, "{}\t{}\t{}", r.a, r.b, r.kind.code())?;
        }
        Ok(())
    }
}

/// Derives the relation of a labeled tree.
///
/// Symmetric mode yields `Zero` and `SymOne` records; directed mode needs a
/// rooted tree and yields `Zero` and `DirOne` records.
pub fn derive_relation(t: &EdgeLabeledTree, mode: Mode) -> Result<EventRelation, TreeError> {
    let tree = t.tree();
    let mut rel = EventRelation::new(tree.taxa().cloned());
    let leaves: Vec<(Taxon, usize)> = tree.leaves().map(|(x, v)| (x.clone(), v)).collect();
    match mode {
        Mode::Directed => {
            let root = tree.root().ok_or(TreeError::NotRooted)?;
            let view = tree.rooted_view_at(root);
            let from_root = t.sums_from(root);
            for (i, (x, u)) in leaves.iter().enumerate() {
                for (y, v) in &leaves[i + 1..] {
                    let w = view.lca(*u, *v);
                    let sx = from_root[*u] - from_root[w];
                    let sy = from_root[*v] - from_root[w];
                    let kind = match (sx, sy) {
                        (0, 0) => Some((x, y, Kind::Zero)),
                        (0, 1) => Some((x, y, Kind::DirOne)),
                        (1, 0) => Some((y, x, Kind::DirOne)),
                        _ => None,
                    };
                    if let Some((a, b, k)) = kind {
                        rel.insert(a.clone(), b.clone(), k).unwrap();
                    }
                }
            }
        }
        _ => {
            for (i, (x, u)) in leaves.iter().enumerate() {
                let sums = t.sums_from(*u);
                for (y, v) in &leaves[i + 1..] {
                    match sums[*v] {
                        0 => rel.insert(x.clone(), y.clone(), Kind::Zero).unwrap(),
                        1 => rel.insert(x.clone(), y.clone(), Kind::SymOne).unwrap(),
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(rel)
}

/// True iff the tree's derived relation equals `r`. For mixed relations
/// the tree must be rooted and every `UnkOne`/`SymOne` pair may match a
/// directed pair in either direction.
pub fn explains(t: &EdgeLabeledTree, r: &EventRelation) -> Result<bool, RelationError> {
    let tx: BTreeSet<Taxon> = t.tree().taxa().cloned().collect();
    if &tx != r.taxa() {
        return Err(RelationError::TaxaMismatch);
    }
    match r.mode() {
        Mode::Symmetric => Ok(&derive_relation(t, Mode::Symmetric)? == r),
        Mode::Directed => {
            if !t.tree().is_rooted() {
                return Ok(false);
            }
            Ok(&derive_relation(t, Mode::Directed)? == r)
        }
        Mode::Mixed => {
            if !t.tree().is_rooted() {
                return Ok(false);
            }
            let d = derive_relation(t, Mode::Directed)?;
            if d.len() != r.len() {
                return Ok(false);
            }
            for rec in r.records() {
                let Some(got) = d.get(&rec.a, &rec.b) else {
                    return Ok(false);
                };
                let ok = match rec.kind {
                    Kind::Zero => got.kind == Kind::Zero,
                    Kind::DirOne => got.kind == Kind::DirOne && got.a == rec.a,
                    Kind::SymOne | Kind::UnkOne => got.kind == Kind::DirOne,
                };
                if !ok {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
