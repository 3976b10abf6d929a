//! Symbolic ternary maps: the color of the median of every three taxa.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::quartets::Quartet;
use crate::taxon::{join, Color, Taxon};
use crate::tree::{DatedTree, TreeError};

mod metric;
mod rebuild;

pub use metric::{
    check_metric, classify_k5, generate_quartets, is_fully_resolved, unresolved_sets, K5Type,
    MetricReport, Violation,
};
pub use rebuild::{equivalence_classes, reconstruct, EquivClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TernaryError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("need at least 3 taxa, found {0}")]
    TooFewTaxa(usize),
    #[error("unknown taxon {0}")]
    UnknownTaxon(String),
    #[error("missing triples: {}", .0.iter().map(join).join(" "))]
    MissingTriple(Vec<[Taxon; 3]>),
    #[error("triple {} has colors {} and {}", join(.0), .1, .2)]
    ConflictingTriple([Taxon; 3], Color, Color),
    #[error("condition 3 fails on {}", join(.0))]
    Condition3Violation(Vec<Taxon>),
    #[error("{0}")]
    QuartetConflict(Box<QuartetClash>),
    #[error("no pseudo-cherry among {}", join(.0))]
    NoPseudoCherry(Vec<Taxon>),
    #[error("equivalence is not transitive on {0}, {1}, {2}")]
    NotTransitive(Taxon, Taxon, Taxon),
    #[error("adjacent vertices share color {0}")]
    NonDiscriminating(Color),
    #[error("no tree realizes the map (witness {})", join(.0))]
    NotRealizable(Vec<Taxon>),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Two resolvers of one constant 4-set that induce different quartets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuartetClash {
    pub taxa: Vec<Taxon>,
    pub first: Quartet,
    pub second: Quartet,
    pub first_via: Taxon,
    pub second_via: Taxon,
}

impl fmt::Display for QuartetClash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "4-set {} generates {} (via {}) and {} (via {})",
            join(&self.taxa),
            self.first,
            self.first_via,
            self.second,
            self.second_via
        )
    }
}

const UNSET: u16 = u16::MAX;

/// A total map from 3-sets of taxa to colors.
///
/// Taxa are kept sorted and addressed by index; colors are interned in a
/// palette in order of first use.
#[derive(Debug, Clone)]
pub struct TernaryMap {
    taxa: Vec<Taxon>,
    index: BTreeMap<Taxon, usize>,
    palette: Vec<Color>,
    values: Vec<u16>,
}

impl PartialEq for TernaryMap {
    fn eq(&self, other: &Self) -> bool {
        self.taxa == other.taxa
            && self
                .triples()
                .all(|[i, j, k]| self.color(i, j, k) == other.color(i, j, k))
    }
}

impl Eq for TernaryMap {}

impl TernaryMap {
    /// An empty map; every triple must be set before use.
    pub fn new<I: IntoIterator<Item = Taxon>>(taxa: I) -> TernaryMap {
        let set: BTreeSet<Taxon> = taxa.into_iter().collect();
        let taxa: Vec<Taxon> = set.into_iter().collect();
        let n = taxa.len();
        TernaryMap {
            index: taxa
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, t)| (t, i))
                .collect(),
            taxa,
            palette: Vec::new(),
            values: vec![UNSET; n * n * n],
        }
    }

    fn slot(&self, i: usize, j: usize, k: usize) -> usize {
        let mut t = [i, j, k];
        t.sort_unstable();
        let n = self.taxa.len();
        (t[0] * n + t[1]) * n + t[2]
    }

    pub fn n(&self) -> usize {
        self.taxa.len()
    }

    pub fn taxa(&self) -> &[Taxon] {
        &self.taxa
    }

    pub fn index_of(&self, t: &str) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn palette(&self) -> &[Color] {
        &self.palette
    }

    /// Palette index of a triple of distinct taxon indices.
    pub fn code(&self, i: usize, j: usize, k: usize) -> u16 {
        self.values[self.slot(i, j, k)]
    }

    pub fn color(&self, i: usize, j: usize, k: usize) -> Option<&Color> {
        self.palette.get(self.code(i, j, k) as usize)
    }

    pub fn get(&self, a: &str, b: &str, c: &str) -> Option<&Color> {
        let (i, j, k) = (self.index_of(a)?, self.index_of(b)?, self.index_of(c)?);
        if i == j || j == k || i == k {
            return None;
        }
        self.color(i, j, k)
    }

    fn intern(&mut self, c: &Color) -> u16 {
        match self.palette.iter().position(|p| p == c) {
            Some(i) => i as u16,
            None => {
                self.palette.push(c.clone());
                (self.palette.len() - 1) as u16
            }
        }
    }

    /// Sets a triple by index; returns the previous color code.
    pub fn set_index(&mut self, i: usize, j: usize, k: usize, c: &Color) -> u16 {
        assert!(i != j && j != k && i != k, "triple taxa must be distinct");
        let code = self.intern(c);
        let s = self.slot(i, j, k);
        std::mem::replace(&mut self.values[s], code)
    }

    pub fn set(&mut self, a: &str, b: &str, c: &str, color: &Color) -> Result<(), TernaryError> {
        let ix = |t: &str| {
            self.index_of(t)
                .ok_or_else(|| TernaryError::UnknownTaxon(t.to_string()))
        };
        let (i, j, k) = (ix(a)?, ix(b)?, ix(c)?);
        self.set_index(i, j, k, color);
        Ok(())
    }

    /// Sorted index triples.
    pub fn triples(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        (0..self.n()).combinations(3).map(|c| [c[0], c[1], c[2]])
    }

    /// Triples that have no color yet.
    pub fn missing(&self) -> Vec<[Taxon; 3]> {
        self.triples()
            .filter(|&[i, j, k]| self.code(i, j, k) == UNSET)
            .map(|[i, j, k]| {
                [
                    self.taxa[i].clone(),
                    self.taxa[j].clone(),
                    self.taxa[k].clone(),
                ]
            })
            .collect()
    }

    /// The induced map on a subset of taxon indices.
    pub fn restrict(&self, idx: &[usize]) -> TernaryMap {
        let mut out = TernaryMap::new(idx.iter().map(|&i| self.taxa[i].clone()));
        for c in idx.iter().combinations(3) {
            if let Some(col) = self.color(*c[0], *c[1], *c[2]) {
                let col = col.clone();
                let (a, b, d) = (
                    out.index[&self.taxa[*c[0]]],
                    out.index[&self.taxa[*c[1]]],
                    out.index[&self.taxa[*c[2]]],
                );
                out.set_index(a, b, d, &col);
            }
        }
        out
    }

    /// Parses `x<TAB>y<TAB>z<TAB>color` records with an optional `taxa`
    /// line. Every 3-set must be present; agreeing duplicates are fine.
    pub fn parse(text: &str) -> Result<TernaryMap, TernaryError> {
        let mut taxa: BTreeSet<Taxon> = BTreeSet::new();
        let mut records: Vec<(usize, [Taxon; 3], Color)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let syn = |msg: String| TernaryError::Syntax { line, msg };
            let l = raw.trim_end_matches('\r');
            if l.trim().is_empty() || l.trim_start().starts_with('#') {
                continue;
            }
            let f: Vec<&str> = l.split('\t').map(str::trim).collect();
            if f[0] == "taxa" && f.len() == 2 {
                for t in f[1].split(',').filter(|s| !s.is_empty()) {
                    taxa.insert(Taxon::new(t.trim()).map_err(|e| syn(e.to_string()))?);
                }
                continue;
            }
            if f.len() != 4 {
                return Err(syn(format!(
                    "expected 4 tab-separated fields, found {}",
                    f.len()
                )));
            }
            let t = |s: &str| Taxon::new(s).map_err(|e| syn(e.to_string()));
            let tri = [t(f[0])?, t(f[1])?, t(f[2])?];
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(syn("triple taxa must be distinct".into()));
            }
            let color = Color::new(f[3]).map_err(|e| syn(e.to_string()))?;
            taxa.extend(tri.iter().cloned());
            records.push((line, tri, color));
        }
        if taxa.len() < 3 {
            return Err(TernaryError::TooFewTaxa(taxa.len()));
        }
        let mut map = TernaryMap::new(taxa);
        for (_, tri, color) in &records {
            let (i, j, k) = (map.index[&tri[0]], map.index[&tri[1]], map.index[&tri[2]]);
            if let Some(prev) = map.color(i, j, k) {
                if prev != color {
                    let mut s = tri.clone();
                    s.sort();
                    return Err(TernaryError::ConflictingTriple(
                        s,
                        prev.clone(),
                        color.clone(),
                    ));
                }
            }
            map.set_index(i, j, k, color);
        }
        let missing = map.missing();
        if !missing.is_empty() {
            return Err(TernaryError::MissingTriple(missing));
        }
        Ok(map)
    }
}

impl fmt::Display for TernaryMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "taxa\t{}", join(&self.taxa))?;
        for [i, j, k] in self.triples() {
            let c = self.color(i, j, k).map(Color::as_str).unwrap_or("?");
            writeln!(
                f,
                "{}\t{}\t{}\t{}",
                self.taxa[i], self.taxa[j], self.taxa[k], c
            )?;
        }
        Ok(())
    }
}

/// `δ(x,y,z)` is the color of the median of `x`, `y`, `z`.
/// Non-discriminating colorings are accepted.
pub fn derive_ternary(t: &DatedTree) -> Result<TernaryMap, TernaryError> {
    let tree = t.tree();
    if tree.n_taxa() < 3 {
        return Err(TernaryError::TooFewTaxa(tree.n_taxa()));
    }
    let mut map = TernaryMap::new(tree.taxa().cloned());
    let leaves: Vec<usize> = map
        .taxa
        .iter()
        .map(|x| tree.vertex_of(x.as_str()).unwrap())
        .collect();
    let view = tree.rooted_view_at(tree.root().unwrap_or(0));
    let triples: Vec<[usize; 3]> = map.triples().collect();
    for [i, j, k] in triples {
        let m = view.median(leaves[i], leaves[j], leaves[k]);
        let c = t.color(m).expect("medians are inner vertices").clone();
        map.set_index(i, j, k, &c);
    }
    Ok(map)
}

/// Color histogram over the 3-subsets of a taxa subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSignature {
    pub counts: BTreeMap<Color, usize>,
}

impl PartitionSignature {
    /// Counts in ascending order.
    pub fn sorted_counts(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.counts.values().copied().collect();
        c.sort_unstable();
        c
    }

    pub fn n_values(&self) -> usize {
        self.counts.len()
    }

    /// Exactly two values with counts `n` and `m` in either order.
    pub fn is_partitioned(&self, n: usize, m: usize) -> bool {
        let c = self.sorted_counts();
        c.len() == 2 && c[0] == n.min(m) && c[1] == n.max(m)
    }
}

impl fmt::Display for PartitionSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sorted_counts().iter().join("-"))
    }
}

pub fn partition_signature<S: AsRef<str>>(
    d: &TernaryMap,
    s: &[S],
) -> Result<PartitionSignature, TernaryError> {
    let mut idx = Vec::new();
    for t in s {
        idx.push(
            d.index_of(t.as_ref())
                .ok_or_else(|| TernaryError::UnknownTaxon(t.as_ref().to_string()))?,
        );
    }
    idx.sort_unstable();
    idx.dedup();
    if idx.len() < 3 {
        return Err(TernaryError::TooFewTaxa(idx.len()));
    }
    Ok(signature_of(d, &idx))
}

pub(crate) fn signature_of(d: &TernaryMap, idx: &[usize]) -> PartitionSignature {
    let mut counts = BTreeMap::new();
    for c in idx.iter().combinations(3) {
        if let Some(col) = d.color(*c[0], *c[1], *c[2]) {
            *counts.entry(col.clone()).or_insert(0) += 1;
        }
    }
    PartitionSignature { counts }
}
