//! The single-1 graph on zero classes, validated.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use super::{EventRelation, Kind, Mode};
use crate::taxon::{join, Taxon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    /// `a ~0 b` and `b ~0 c` but `a`, `c` lack a zero record.
    #[error("zero relation is not transitive: {0} ~0 {1} ~0 {2} but {0},{2} is not zero")]
    NotEquivalence(Taxon, Taxon, Taxon),
    /// `a`,`b` one-related, `c` in the class of `a` and `d` in that of
    /// `b`, yet `c`,`d` are not related the same way.
    #[error("classes are inconsistent: {0},{1} related but {2},{3} not")]
    ClassInconsistency(Taxon, Taxon, Taxon, Taxon),
    #[error("pair {0},{1} is one-related inside a zero class")]
    ZeroOneConflict(Taxon, Taxon),
    /// Class representatives around a cycle.
    #[error("quotient graph has a cycle: {}", join(.0))]
    NotForest(Vec<Taxon>),
    /// Arcs `x -> v` and `y -> v` (class representatives).
    #[error("two arcs point into {1}: from {0} and from {2}")]
    InPointerConflict(Taxon, Taxon, Taxon),
    #[error("class pair {0},{1} carries two kinds (witness {2},{3})")]
    MixedKindConflict(Taxon, Taxon, Taxon, Taxon),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArcKind {
    Sym,
    Dir,
    Unk,
}

/// An arc between classes. `Dir` arcs run `from -> to`; the others are
/// stored with `from < to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub kind: ArcKind,
}

/// Zero classes with their one-arcs. Class `i` is ordered by its
/// representative, the smallest member.
#[derive(Debug, Clone)]
pub struct QuotientGraph {
    classes: Vec<Vec<Taxon>>,
    class_of: BTreeMap<Taxon, usize>,
    arcs: Vec<Arc>,
    adj: Vec<Vec<(usize, usize)>>,
    components: Vec<Vec<usize>>,
    mode: Mode,
}

impl QuotientGraph {
    pub fn classes(&self) -> &[Vec<Taxon>] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn rep(&self, c: usize) -> &Taxon {
        &self.classes[c][0]
    }

    pub fn class_of(&self, t: &str) -> Option<usize> {
        self.class_of.get(t).copied()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// `(neighbor class, arc index)` pairs.
    pub fn neighbors(&self, c: usize) -> &[(usize, usize)] {
        &self.adj[c]
    }

    pub fn degree(&self, c: usize) -> usize {
        self.adj[c].len()
    }

    /// Components as sorted class lists, ordered by smallest class.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, c: usize) -> usize {
        self.components
            .iter()
            .position(|comp| comp.contains(&c))
            .unwrap()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Arcs of a component.
    pub fn component_arcs(&self, comp: usize) -> Vec<Arc> {
        let set: BTreeSet<usize> = self.components[comp].iter().copied().collect();
        self.arcs
            .iter()
            .filter(|a| set.contains(&a.from))
            .copied()
            .collect()
    }

    /// Class without an incoming `Dir` arc in a component whose arcs are
    /// all directed; `None` if there is not exactly one.
    pub fn source(&self, comp: usize) -> Option<usize> {
        let members = &self.components[comp];
        let arcs = self.component_arcs(comp);
        if arcs.iter().any(|a| a.kind != ArcKind::Dir) {
            return None;
        }
        let heads: BTreeSet<usize> = arcs.iter().map(|a| a.to).collect();
        let sources: Vec<usize> = members
            .iter()
            .copied()
            .filter(|c| !heads.contains(c))
            .collect();
        (sources.len() == 1).then(|| sources[0])
    }

    /// The same quotient with arcs replaced. The arcs must keep the
    /// underlying forest.
    pub(crate) fn with_arcs(&self, arcs: Vec<Arc>, mode: Mode) -> QuotientGraph {
        let mut adj = vec![Vec::new(); self.classes.len()];
        for (i, a) in arcs.iter().enumerate() {
            adj[a.from].push((a.to, i));
            adj[a.to].push((a.from, i));
        }
        QuotientGraph {
            classes: self.classes.clone(),
            class_of: self.class_of.clone(),
            arcs,
            adj,
            components: self.components.clone(),
            mode,
        }
    }

    /// The relation on class representatives.
    pub fn representative_relation(&self) -> EventRelation {
        let mut r = EventRelation::new((0..self.n_classes()).map(|c| self.rep(c).clone()));
        for a in &self.arcs {
            let kind = match a.kind {
                ArcKind::Sym => Kind::SymOne,
                ArcKind::Dir => Kind::DirOne,
                ArcKind::Unk => Kind::UnkOne,
            };
            r.insert(self.rep(a.from).clone(), self.rep(a.to).clone(), kind)
                .unwrap();
        }
        r
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
        true
    }
}

/// Validates a relation and builds its quotient graph.
///
/// Checks run in order: one-records inside a zero class, transitivity of
/// the zero records, class-wise constancy of one-records, the forest
/// property and, for directed input, single in-pointers.
pub fn build_quotient(r: &EventRelation) -> Result<QuotientGraph, QuotientError> {
    let taxa: Vec<Taxon> = r.taxa().iter().cloned().collect();
    let idx: BTreeMap<&Taxon, usize> = taxa.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let n = taxa.len();
    let mode = r.mode();
    let mut dsu = Dsu((0..n).collect());
    let mut zero_adj = vec![BTreeSet::new(); n];
    for rec in r.records() {
        if rec.kind == Kind::Zero {
            let (a, b) = (idx[&rec.a], idx[&rec.b]);
            dsu.union(a, b);
            zero_adj[a].insert(b);
            zero_adj[b].insert(a);
        }
    }
    for rec in r.records() {
        if rec.kind != Kind::Zero && dsu.find(idx[&rec.a]) == dsu.find(idx[&rec.b]) {
            let (a, b) = if rec.a < rec.b {
                (&rec.a, &rec.b)
            } else {
                (&rec.b, &rec.a)
            };
            return Err(QuotientError::ZeroOneConflict(a.clone(), b.clone()));
        }
    }
    // A connected zero component that is not a clique has an induced path
    // x - y - z.
    for y in 0..n {
        let nb: Vec<usize> = zero_adj[y].iter().copied().collect();
        for (i, &x) in nb.iter().enumerate() {
            for &z in &nb[i + 1..] {
                if !zero_adj[x].contains(&z) {
                    return Err(QuotientError::NotEquivalence(
                        taxa[x].clone(),
                        taxa[y].clone(),
                        taxa[z].clone(),
                    ));
                }
            }
        }
    }
    // Classes ordered by representative (taxa are already sorted).
    let mut class_id = vec![usize::MAX; n];
    let mut classes: Vec<Vec<Taxon>> = Vec::new();
    for i in 0..n {
        let root = dsu.find(i);
        if class_id[root] == usize::MAX {
            class_id[root] = classes.len();
            classes.push(Vec::new());
        }
        class_id[i] = class_id[root];
        classes[class_id[i]].push(taxa[i].clone());
    }
    // Class pair -> (kind, direction, witness).
    let symmetric_kind = |k: Kind| match (mode, k) {
        (Mode::Mixed, Kind::SymOne) => ArcKind::Unk,
        (_, Kind::SymOne) => ArcKind::Sym,
        (_, Kind::UnkOne) => ArcKind::Unk,
        _ => ArcKind::Dir,
    };
    let mut pair_info: BTreeMap<(usize, usize), (Arc, Taxon, Taxon)> = BTreeMap::new();
    for rec in r.records() {
        if rec.kind == Kind::Zero {
            continue;
        }
        let (ca, cb) = (class_id[idx[&rec.a]], class_id[idx[&rec.b]]);
        let kind = symmetric_kind(rec.kind);
        let arc = if kind == ArcKind::Dir {
            Arc {
                from: ca,
                to: cb,
                kind,
            }
        } else {
            Arc {
                from: ca.min(cb),
                to: ca.max(cb),
                kind,
            }
        };
        let k = (ca.min(cb), ca.max(cb));
        match pair_info.get(&k) {
            None => {
                pair_info.insert(k, (arc, rec.a.clone(), rec.b.clone()));
            }
            Some((prev, wa, wb)) => {
                if *prev != arc {
                    return Err(QuotientError::MixedKindConflict(
                        classes[k.0][0].clone(),
                        classes[k.1][0].clone(),
                        if wa < wb { wa.clone() } else { wb.clone() },
                        if wa < wb { wb.clone() } else { wa.clone() },
                    ));
                }
            }
        }
    }
    for (&(ca, cb), (_, wa, wb)) in &pair_info {
        for x in &classes[ca] {
            for y in &classes[cb] {
                if r.get(x, y).is_none() {
                    return Err(QuotientError::ClassInconsistency(
                        wa.clone(),
                        wb.clone(),
                        x.clone(),
                        y.clone(),
                    ));
                }
            }
        }
    }
    let k = classes.len();
    let mut arcs = Vec::new();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    let mut forest = Dsu((0..k).collect());
    for (arc, _, _) in pair_info.values() {
        if !forest.union(arc.from, arc.to) {
            let cycle = find_path(&adj, arc.to, arc.from);
            let mut reps: Vec<Taxon> = cycle.iter().map(|&c| classes[c][0].clone()).collect();
            rotate_min(&mut reps);
            return Err(QuotientError::NotForest(reps));
        }
        let i = arcs.len();
        arcs.push(*arc);
        adj[arc.from].push((arc.to, i));
        adj[arc.to].push((arc.from, i));
    }
    if mode != Mode::Symmetric {
        let mut into: Vec<Option<usize>> = vec![None; k];
        for a in &arcs {
            if a.kind != ArcKind::Dir {
                continue;
            }
            if let Some(prev) = into[a.to] {
                let (x, y) = if prev < a.from {
                    (prev, a.from)
                } else {
                    (a.from, prev)
                };
                return Err(QuotientError::InPointerConflict(
                    classes[x][0].clone(),
                    classes[a.to][0].clone(),
                    classes[y][0].clone(),
                ));
            }
            into[a.to] = Some(a.from);
        }
    }
    let mut components = Vec::new();
    let mut seen = vec![false; k];
    for s in 0..k {
        if seen[s] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(c) = stack.pop() {
            comp.push(c);
            for &(d, _) in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        comp.sort();
        components.push(comp);
    }
    let class_of = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |t| (t.clone(), i)))
        .collect();
    Ok(QuotientGraph {
        classes,
        class_of,
        arcs,
        adj,
        components,
        mode,
    })
}

fn find_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        if u == to {
            break;
        }
        for &(w, _) in &adj[u] {
            if prev[w] == usize::MAX {
                prev[w] = u;
                q.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    let mut x = to;
    while x != from {
        x = prev[x];
        path.push(x);
    }
    path
}

/// Rotates a cycle to start at its smallest element, then picks the
/// lexicographically smaller direction.
fn rotate_min(c: &mut [Taxon]) {
    let i = (0..c.len()).min_by_key(|&i| &c[i]).unwrap();
    c.rotate_left(i);
    if c.len() > 2 && c[c.len() - 1] < c[1] {
        c[1..].reverse();
    }
}
