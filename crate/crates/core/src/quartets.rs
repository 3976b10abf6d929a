//! Quartet systems: extraction from trees, the four classical predicates
//! and reconstruction by leaf insertion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::taxon::{join, Taxon};
use crate::tree::{RootedView, Tree, TreeBuilder, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuartetError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("quartet taxa are not distinct")]
    NotDistinct,
    #[error("no placement of {0} agrees with the quartets")]
    NoPlacement(Taxon),
    #[error("several placements of {0} agree with the quartets")]
    AmbiguousPlacement(Taxon),
    #[error("tree displays different quartets (witness {0})")]
    Inconsistent(Quartet),
}

/// The split `ab|cd`, stored with each pair sorted and the pairs sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quartet {
    left: (Taxon, Taxon),
    right: (Taxon, Taxon),
}

fn pair(a: Taxon, b: Taxon) -> (Taxon, Taxon) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Quartet {
    pub fn new(a: Taxon, b: Taxon, c: Taxon, d: Taxon) -> Result<Quartet, QuartetError> {
        let all: BTreeSet<&Taxon> = [&a, &b, &c, &d].into_iter().collect();
        if all.len() != 4 {
            return Err(QuartetError::NotDistinct);
        }
        let (l, r) = (pair(a, b), pair(c, d));
        let (left, right) = if l <= r { (l, r) } else { (r, l) };
        Ok(Quartet { left, right })
    }

    pub fn left(&self) -> (&Taxon, &Taxon) {
        (&self.left.0, &self.left.1)
    }

    pub fn right(&self) -> (&Taxon, &Taxon) {
        (&self.right.0, &self.right.1)
    }

    /// The four taxa in order.
    pub fn taxa(&self) -> [&Taxon; 4] {
        let mut t = [&self.left.0, &self.left.1, &self.right.0, &self.right.1];
        t.sort();
        t
    }

    /// True iff `a` and `b` are on the same side.
    pub fn pairs(&self, a: &Taxon, b: &Taxon) -> bool {
        let p = pair(a.clone(), b.clone());
        p == self.left || p == self.right
    }
}

impl fmt::Display for Quartet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{}|{},{}",
            self.left.0, self.left.1, self.right.0, self.right.1
        )
    }
}

/// The three quartets on four distinct taxa.
pub fn resolutions(a: &Taxon, b: &Taxon, c: &Taxon, d: &Taxon) -> [Quartet; 3] {
    let q = |w: &Taxon, x: &Taxon, y: &Taxon, z: &Taxon| {
        Quartet::new(w.clone(), x.clone(), y.clone(), z.clone()).expect("distinct taxa")
    };
    [q(a, b, c, d), q(a, c, b, d), q(a, d, b, c)]
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuartetSystem {
    taxa: BTreeSet<Taxon>,
    quartets: BTreeSet<Quartet>,
}

impl QuartetSystem {
    pub fn new<I: IntoIterator<Item = Taxon>>(taxa: I) -> QuartetSystem {
        QuartetSystem {
            taxa: taxa.into_iter().collect(),
            quartets: BTreeSet::new(),
        }
    }

    /// Adds a quartet and its taxa; returns false for a duplicate.
    pub fn insert(&mut self, q: Quartet) -> bool {
        for t in q.taxa() {
            self.taxa.insert(t.clone());
        }
        self.quartets.insert(q)
    }

    pub fn contains(&self, q: &Quartet) -> bool {
        self.quartets.contains(q)
    }

    pub fn taxa(&self) -> &BTreeSet<Taxon> {
        &self.taxa
    }

    pub fn quartets(&self) -> &BTreeSet<Quartet> {
        &self.quartets
    }

    pub fn len(&self) -> usize {
        self.quartets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quartets.is_empty()
    }

    /// Quartets on the given four taxa.
    pub fn on(&self, a: &Taxon, b: &Taxon, c: &Taxon, d: &Taxon) -> Vec<&Quartet> {
        resolutions(a, b, c, d)
            .into_iter()
            .filter_map(|q| self.quartets.get(&q))
            .collect()
    }

    /// Parses `a<TAB>b<TAB>|<TAB>c<TAB>d` records with an optional
    /// `taxa<TAB>x,y,...` line; duplicates collapse.
    pub fn parse(text: &str) -> Result<QuartetSystem, QuartetError> {
        let mut sys = QuartetSystem::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let syn = |msg: String| QuartetError::Syntax { line, msg };
            let l = raw.trim_end_matches('\r');
            if l.trim().is_empty() || l.trim_start().starts_with('#') {
                continue;
            }
            let f: Vec<&str> = l.split('\t').map(str::trim).collect();
            if f[0] == "taxa" && f.len() == 2 {
                for t in f[1].split(',').filter(|s| !s.is_empty()) {
                    sys.taxa
                        .insert(Taxon::new(t.trim()).map_err(|e| syn(e.to_string()))?);
                }
                continue;
            }
            if f.len() != 5 || f[2] != "|" {
                return Err(syn("expected `a<TAB>b<TAB>|<TAB>c<TAB>d`".into()));
            }
            let t = |s: &str| Taxon::new(s).map_err(|e| syn(e.to_string()));
            let q = Quartet::new(t(f[0])?, t(f[1])?, t(f[3])?, t(f[4])?)
                .map_err(|e| syn(e.to_string()))?;
            sys.insert(q);
        }
        Ok(sys)
    }
}

impl fmt::Display for QuartetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "taxa\t{}", join(&self.taxa))?;
        for q in &self.quartets {
            writeln!(
                f,
                "{}\t{}\t|\t{}\t{}",
                q.left.0, q.left.1, q.right.0, q.right.1
            )?;
        }
        Ok(())
    }
}

struct Medians {
    view: RootedView,
    leaf: BTreeMap<Taxon, VertexId>,
}

impl Medians {
    fn new(t: &Tree) -> Medians {
        Medians {
            view: RootedView::new(t, 0),
            leaf: t.leaves().map(|(x, v)| (x.clone(), v)).collect(),
        }
    }

    fn med(&self, a: &Taxon, b: &Taxon, c: &Taxon) -> VertexId {
        self.view.median(self.leaf[a], self.leaf[b], self.leaf[c])
    }

    /// The quartet displayed on four taxa, if any.
    fn quartet(&self, a: &Taxon, b: &Taxon, c: &Taxon, d: &Taxon) -> Option<Quartet> {
        let (abc, abd, acd, bcd) = (
            self.med(a, b, c),
            self.med(a, b, d),
            self.med(a, c, d),
            self.med(b, c, d),
        );
        let q = |w: &Taxon, x: &Taxon, y: &Taxon, z: &Taxon| {
            Some(Quartet::new(w.clone(), x.clone(), y.clone(), z.clone()).unwrap())
        };
        if abc == abd && acd == bcd && abc != acd {
            q(a, b, c, d)
        } else if abc == acd && abd == bcd && abc != abd {
            q(a, c, b, d)
        } else if abd == acd && abc == bcd && abd != abc {
            q(a, d, b, c)
        } else {
            None
        }
    }
}

/// `ab|cd` is displayed iff `med(a,b,c) = med(a,b,d) != med(a,c,d) =
/// med(b,c,d)`.
pub fn displayed_quartets(t: &Tree) -> QuartetSystem {
    let mut sys = QuartetSystem::new(t.taxa().cloned());
    let taxa: Vec<Taxon> = t.taxa().cloned().collect();
    if taxa.len() < 4 {
        return sys;
    }
    let m = Medians::new(t);
    for s in taxa.iter().combinations(4) {
        if let Some(q) = m.quartet(s[0], s[1], s[2], s[3]) {
            sys.insert(q);
        }
    }
    sys
}

/// Outcome of the four predicates; `None` means the property holds,
/// otherwise the quartets of a smallest counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuartetProperties {
    /// Two quartets on one 4-set.
    pub thin: Option<Vec<Quartet>>,
    /// `ab|ce` and `ab|de` present, `ab|cd` missing (listed last).
    pub transitive: Option<Vec<Quartet>>,
    /// `ab|cd` present, neither `ae|cd` nor `ab|ce`.
    pub saturated: Option<Vec<Quartet>>,
    /// The taxa of a 4-set without any quartet.
    pub complete: Option<Vec<Taxon>>,
}

impl QuartetProperties {
    pub fn is_thin(&self) -> bool {
        self.thin.is_none()
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive.is_none()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated.is_none()
    }

    pub fn is_complete(&self) -> bool {
        self.complete.is_none()
    }
}

pub fn check_properties(q: &QuartetSystem) -> QuartetProperties {
    let taxa: Vec<&Taxon> = q.taxa.iter().collect();
    let mut thin = None;
    let mut complete = None;
    for s in taxa.iter().combinations(4) {
        let found = q.on(s[0], s[1], s[2], s[3]);
        if found.len() > 1 && thin.is_none() {
            thin = Some(found.iter().take(2).map(|&x| x.clone()).collect());
        }
        if found.is_empty() && complete.is_none() {
            complete = Some(s.iter().map(|&&t| t.clone()).collect());
        }
    }
    let mut transitive = None;
    let mut saturated = None;
    let has = |a: &Taxon, b: &Taxon, c: &Taxon, d: &Taxon| {
        q.quartets
            .contains(&Quartet::new(a.clone(), b.clone(), c.clone(), d.clone()).unwrap())
    };
    let mk = |a: &Taxon, b: &Taxon, c: &Taxon, d: &Taxon| {
        Quartet::new(a.clone(), b.clone(), c.clone(), d.clone()).unwrap()
    };
    for s in taxa.iter().combinations(5) {
        for perm in s.iter().permutations(5) {
            let [a, b, c, d, e] = [**perm[0], **perm[1], **perm[2], **perm[3], **perm[4]];
            if transitive.is_none()
                && c < d
                && has(a, b, c, e)
                && has(a, b, d, e)
                && !has(a, b, c, d)
            {
                transitive = Some(vec![mk(a, b, c, e), mk(a, b, d, e), mk(a, b, c, d)]);
            }
            if saturated.is_none() && has(a, b, c, d) && !has(a, e, c, d) && !has(a, b, c, e) {
                saturated = Some(vec![mk(a, b, c, d), mk(a, e, c, d), mk(a, b, c, e)]);
            }
        }
        if transitive.is_some() && saturated.is_some() {
            break;
        }
    }
    QuartetProperties {
        thin,
        transitive,
        saturated,
        complete,
    }
}

/// A tree under construction: adjacency plus leaf names.
#[derive(Clone)]
struct Draft {
    adj: Vec<Vec<VertexId>>,
    taxa: Vec<Option<Taxon>>,
}

#[derive(Clone, Copy)]
enum Slot {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

impl Draft {
    fn star(taxa: &[Taxon]) -> Draft {
        let mut d = Draft {
            adj: vec![Vec::new()],
            taxa: vec![None],
        };
        for t in taxa {
            let v = d.add(Some(t.clone()));
            d.link(0, v);
        }
        d
    }

    fn add(&mut self, t: Option<Taxon>) -> VertexId {
        self.adj.push(Vec::new());
        self.taxa.push(t);
        self.adj.len() - 1
    }

    fn link(&mut self, u: VertexId, v: VertexId) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    fn unlink(&mut self, u: VertexId, v: VertexId) {
        self.adj[u].retain(|&x| x != v);
        self.adj[v].retain(|&x| x != u);
    }

    fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::new();
        for v in 0..self.adj.len() {
            if self.taxa[v].is_none() {
                out.push(Slot::Vertex(v));
            }
            for &w in &self.adj[v] {
                if v < w {
                    out.push(Slot::Edge(v, w));
                }
            }
        }
        out
    }

    fn place(&self, z: &Taxon, s: Slot) -> Draft {
        let mut d = self.clone();
        let leaf = d.add(Some(z.clone()));
        match s {
            Slot::Vertex(v) => d.link(v, leaf),
            Slot::Edge(u, w) => {
                d.unlink(u, w);
                let m = d.add(None);
                d.link(u, m);
                d.link(m, w);
                d.link(m, leaf);
            }
        }
        d
    }

    fn tree(&self) -> Tree {
        let mut b = TreeBuilder::new();
        let ids: Vec<VertexId> = self
            .taxa
            .iter()
            .map(|t| match t {
                Some(x) => b.leaf(x.clone()),
                None => b.inner(),
            })
            .collect();
        for (v, nb) in self.adj.iter().enumerate() {
            for &w in nb {
                if v < w {
                    b.connect(ids[v], ids[w], 0);
                }
            }
        }
        b.tree().expect("drafts are trees")
    }
}

/// Reconstructs the tree whose displayed quartets are exactly `q`.
///
/// Taxa are inserted in order, each at the unique vertex or edge that
/// agrees with every quartet on it and three placed taxa; the result is
/// verified against `q` as a whole.
pub fn tree_from_quartets(q: &QuartetSystem) -> Result<Tree, QuartetError> {
    let taxa: Vec<Taxon> = q.taxa.iter().cloned().collect();
    let mut b = TreeBuilder::new();
    match taxa.len() {
        0 => return Err(QuartetError::NotDistinct),
        1 => {
            b.leaf(taxa[0].clone());
            return Ok(b.tree().unwrap());
        }
        2 => {
            let x = b.leaf(taxa[0].clone());
            let y = b.leaf(taxa[1].clone());
            b.connect(x, y, 0);
            return Ok(b.tree().unwrap());
        }
        _ => {}
    }
    let mut draft = Draft::star(&taxa[..3]);
    for (i, z) in taxa.iter().enumerate().skip(3) {
        let placed = &taxa[..i];
        let mut fits = Vec::new();
        for s in draft.slots() {
            let cand = draft.place(z, s);
            let m = Medians::new(&cand.tree());
            let ok = placed.iter().combinations(3).all(|t| {
                let want = q.on(t[0], t[1], t[2], z);
                let got = m.quartet(t[0], t[1], t[2], z);
                match (want.as_slice(), got) {
                    ([], None) => true,
                    ([w], Some(g)) => **w == g,
                    _ => false,
                }
            });
            if ok {
                fits.push(cand);
            }
        }
        draft = match fits.len() {
            0 => return Err(QuartetError::NoPlacement(z.clone())),
            1 => fits.pop().unwrap(),
            _ => return Err(QuartetError::AmbiguousPlacement(z.clone())),
        };
    }
    let t = draft.tree();
    let shown = displayed_quartets(&t);
    if let Some(w) = shown.quartets.symmetric_difference(&q.quartets).next() {
        return Err(QuartetError::Inconsistent(w.clone()));
    }
    Ok(t)
}
