//! The 4- and 5-point conditions, K5 colorings and generated quartets.

use std::fmt;

use itertools::Itertools;

use super::{signature_of, QuartetClash, TernaryError, TernaryMap};
use crate::quartets::{Quartet, QuartetSystem};
use crate::taxon::{join, Taxon};

/// One failed condition with its witness taxa and ascending color counts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub taxa: Vec<Taxon>,
    pub condition: u8,
    pub counts: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CONDITION{} {} {}",
            self.condition,
            join(&self.taxa),
            self.counts.iter().join("-")
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricReport {
    pub violations: Vec<Violation>,
}

impl MetricReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn names(d: &TernaryMap, idx: &[usize]) -> Vec<Taxon> {
    idx.iter().map(|&i| d.taxa()[i].clone()).collect()
}

/// Condition 3 on a 4-set of indices: at most two values, and two values
/// only as 2-2.
fn four_ok(d: &TernaryMap, s: &[usize]) -> bool {
    let v = [
        d.code(s[0], s[1], s[2]),
        d.code(s[0], s[1], s[3]),
        d.code(s[0], s[2], s[3]),
        d.code(s[1], s[2], s[3]),
    ];
    let first = v.iter().filter(|&&x| x == v[0]).count();
    match first {
        4 | 2 => v
            .iter()
            .all(|&x| x == v[0] || v.iter().filter(|&&y| y == x).count() == 2),
        _ => false,
    }
}

/// Every violation of Conditions 3 and 4, ordered by witness.
pub fn check_metric(d: &TernaryMap) -> MetricReport {
    let mut violations = Vec::new();
    let n = d.n();
    for s in (0..n).combinations(4) {
        if !four_ok(d, &s) {
            violations.push(Violation {
                taxa: names(d, &s),
                condition: 3,
                counts: signature_of(d, &s).sorted_counts(),
            });
        }
    }
    for s in (0..n).combinations(5) {
        let sig = signature_of(d, &s);
        if sig.is_partitioned(5, 5) {
            violations.push(Violation {
                taxa: names(d, &s),
                condition: 4,
                counts: sig.sorted_counts(),
            });
        }
    }
    violations.sort();
    MetricReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum K5Type {
    /// Color classes of sizes 4, 3, 3.
    Type1,
    /// 5, 5.
    Type2,
    /// 6, 4.
    Type3,
    /// 7, 3.
    Type4,
    /// 10.
    Type5,
}

/// Colors the edge `ab` of `K5` on `s` by the value of the other three
/// taxa and classifies by color class sizes.
pub fn classify_k5<S: AsRef<str>>(d: &TernaryMap, s: &[S]) -> Result<K5Type, TernaryError> {
    let mut idx = Vec::new();
    for t in s {
        idx.push(
            d.index_of(t.as_ref())
                .ok_or_else(|| TernaryError::UnknownTaxon(t.as_ref().to_string()))?,
        );
    }
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != 5 {
        return Err(TernaryError::TooFewTaxa(idx.len()));
    }
    classify_indices(d, &idx)
}

pub(crate) fn classify_indices(d: &TernaryMap, idx: &[usize]) -> Result<K5Type, TernaryError> {
    for skip in 0..5 {
        let four: Vec<usize> = (0..5).filter(|&i| i != skip).map(|i| idx[i]).collect();
        if !four_ok(d, &four) {
            return Err(TernaryError::Condition3Violation(names(d, idx)));
        }
    }
    let sizes = signature_of(d, idx).sorted_counts();
    Ok(match sizes.as_slice() {
        [3, 3, 4] => K5Type::Type1,
        [5, 5] => K5Type::Type2,
        [4, 6] => K5Type::Type3,
        [3, 7] => K5Type::Type4,
        [10] => K5Type::Type5,
        _ => return Err(TernaryError::Condition3Violation(names(d, idx))),
    })
}

/// If `e` resolves the constant 4-set `s`, the index pairs of the quartet
/// it induces: `xy|zu` when `δ(x,y,e) = δ(z,u,e)` equals the 4-set value
/// and the other four triples with `e` share a second value.
fn resolved_by(d: &TernaryMap, s: &[usize; 4], e: usize) -> Option<[usize; 4]> {
    let m = d.code(s[0], s[1], s[2]);
    let [a, b, c, f] = *s;
    for [x, y, z, u] in [[a, b, c, f], [a, c, b, f], [a, f, b, c]] {
        if d.code(x, y, e) != m || d.code(z, u, e) != m {
            continue;
        }
        let other = d.code(x, z, e);
        if other != m
            && [d.code(x, u, e), d.code(y, z, e), d.code(y, u, e)]
                .iter()
                .all(|&v| v == other)
        {
            return Some([x, y, z, u]);
        }
    }
    None
}

fn constant(d: &TernaryMap, s: &[usize; 4]) -> bool {
    let m = d.code(s[0], s[1], s[2]);
    d.code(s[0], s[1], s[3]) == m && d.code(s[0], s[2], s[3]) == m && d.code(s[1], s[2], s[3]) == m
}

/// Constant 4-sets that no fifth taxon resolves into a 4-6 partition.
pub fn unresolved_sets(d: &TernaryMap) -> Vec<Vec<Taxon>> {
    let n = d.n();
    let mut out = Vec::new();
    for s in (0..n).combinations(4) {
        let s4 = [s[0], s[1], s[2], s[3]];
        if !constant(d, &s4) {
            continue;
        }
        let resolved = (0..n).filter(|e| !s.contains(e)).any(|e| {
            let mut five = s.clone();
            five.push(e);
            five.sort_unstable();
            signature_of(d, &five).is_partitioned(4, 6)
        });
        if !resolved {
            out.push(names(d, &s));
        }
    }
    out
}

pub fn is_fully_resolved(d: &TernaryMap) -> bool {
    unresolved_sets(d).is_empty()
}

fn quartet(d: &TernaryMap, q: [usize; 4]) -> Quartet {
    let t = |i: usize| d.taxa()[i].clone();
    Quartet::new(t(q[0]), t(q[1]), t(q[2]), t(q[3])).expect("distinct taxa")
}

/// Quartets generated by the map: a 2-2 partitioned 4-set yields the
/// pairing of its equal triples' shared pairs; a constant 4-set yields the
/// quartet induced by any resolver.
pub fn generate_quartets(d: &TernaryMap) -> Result<QuartetSystem, TernaryError> {
    let n = d.n();
    let mut sys = QuartetSystem::new(d.taxa().iter().cloned());
    for s in (0..n).combinations(4) {
        let [a, b, c, f] = [s[0], s[1], s[2], s[3]];
        let (abc, abf, acf, bcf) = (
            d.code(a, b, c),
            d.code(a, b, f),
            d.code(a, c, f),
            d.code(b, c, f),
        );
        if abc == abf && acf == bcf && abc != acf {
            sys.insert(quartet(d, [a, b, c, f]));
        } else if abc == acf && abf == bcf && abc != abf {
            sys.insert(quartet(d, [a, c, b, f]));
        } else if abf == acf && abc == bcf && abf != abc {
            sys.insert(quartet(d, [a, f, b, c]));
        } else if constant(d, &[a, b, c, f]) {
            let mut found: Option<(Quartet, usize)> = None;
            for e in (0..n).filter(|e| !s.contains(e)) {
                if let Some(q) = resolved_by(d, &[a, b, c, f], e) {
                    let q = quartet(d, q);
                    match &found {
                        None => found = Some((q, e)),
                        Some((p, pe)) if *p != q => {
                            return Err(TernaryError::QuartetConflict(Box::new(QuartetClash {
                                taxa: names(d, &s),
                                first: p.clone(),
                                second: q,
                                first_via: d.taxa()[*pe].clone(),
                                second_via: d.taxa()[e].clone(),
                            })))
                        }
                        Some(_) => {}
                    }
                }
            }
            if let Some((q, _)) = found {
                sys.insert(q);
            }
        }
    }
    Ok(sys)
}
