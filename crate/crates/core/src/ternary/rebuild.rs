//! Equivalence classes of a ternary map and bottom-up reconstruction.

use itertools::Itertools;

use super::{derive_ternary, TernaryError, TernaryMap};
use crate::taxon::{Color, Taxon};
use crate::tree::{DatedTree, TreeBuilder, VertexId};

/// One class of the equivalence; `color` is set for classes of size ≥2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    pub members: Vec<Taxon>,
    pub color: Option<Color>,
}

/// The value `m` under which `x` and `y` are equivalent, as a palette code.
fn related(d: &TernaryMap, x: usize, y: usize) -> Option<u16> {
    let n = d.n();
    let others: Vec<usize> = (0..n).filter(|&u| u != x && u != y).collect();
    let candidates: Vec<u16> = others.iter().map(|&z| d.code(x, y, z)).unique().collect();
    candidates.into_iter().find(|&m| {
        others
            .iter()
            .tuple_combinations()
            .all(|(&u, &v)| (d.code(x, u, v) == m) == (d.code(y, u, v) == m))
    })
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// A class as taxon indices with its color code.
type IndexClass = (Vec<usize>, Option<u16>);

fn index_classes(d: &TernaryMap) -> Result<Vec<IndexClass>, TernaryError> {
    let n = d.n();
    let mut rel = vec![vec![None; n]; n];
    let mut parent: Vec<usize> = (0..n).collect();
    for (x, y) in (0..n).tuple_combinations() {
        if let Some(m) = related(d, x, y) {
            rel[x][y] = Some(m);
            rel[y][x] = Some(m);
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(x);
    }
    let t = |i: usize| d.taxa()[i].clone();
    let mut out = Vec::new();
    for g in groups {
        if g.len() == 1 {
            out.push((g, None));
            continue;
        }
        let m = rel[g[0]][g[1]];
        for (i, &x) in g.iter().enumerate() {
            for &y in &g[i + 1..] {
                if rel[x][y] != m {
                    // Some member links the unrelated pair.
                    let z = g
                        .iter()
                        .copied()
                        .find(|&z| z != x && z != y && rel[x][z].is_some() && rel[z][y].is_some())
                        .or_else(|| g.iter().copied().find(|&z| z != x && z != y))
                        .unwrap_or(y);
                    return Err(TernaryError::NotTransitive(t(x), t(z), t(y)));
                }
            }
        }
        out.push((g, m));
    }
    Ok(out)
}

/// The partition of the taxa into equivalence classes, ordered by smallest
/// member. Fails with a witness when the relation is not transitive or a
/// class mixes values.
pub fn equivalence_classes(d: &TernaryMap) -> Result<Vec<EquivClass>, TernaryError> {
    if d.n() < 3 {
        return Err(TernaryError::TooFewTaxa(d.n()));
    }
    Ok(index_classes(d)?
        .into_iter()
        .map(|(g, m)| EquivClass {
            members: g.iter().map(|&i| d.taxa()[i].clone()).collect(),
            color: m.map(|m| d.palette()[m as usize].clone()),
        })
        .collect())
}

#[derive(Debug, Clone)]
enum Item {
    Leaf(usize),
    Hub { color: u16, children: Vec<Item> },
}

impl Item {
    /// A hub whose equally colored child hubs are folded into it: such a
    /// child stands for the same vertex, seen in an earlier round.
    fn hub(color: u16, items: Vec<Item>) -> Item {
        let mut children = Vec::new();
        for it in items {
            match it {
                Item::Hub {
                    color: c,
                    children: ch,
                } if c == color => children.extend(ch),
                other => children.push(other),
            }
        }
        Item::Hub { color, children }
    }

    fn build(&self, d: &TernaryMap, b: &mut TreeBuilder) -> VertexId {
        match self {
            Item::Leaf(i) => b.leaf(d.taxa()[*i].clone()),
            Item::Hub { color, children } => {
                let v = b.colored(d.palette()[*color as usize].clone());
                for c in children {
                    let w = c.build(d, b);
                    b.connect(v, w, 0);
                }
                v
            }
        }
    }
}

/// Rebuilds the unique discriminating dated tree realizing `d` by
/// collapsing equivalence classes until one class remains.
pub fn reconstruct(d: &TernaryMap) -> Result<DatedTree, TernaryError> {
    let n = d.n();
    if n < 3 {
        return Err(TernaryError::TooFewTaxa(n));
    }
    if !d.missing().is_empty() {
        return Err(TernaryError::MissingTriple(d.missing()));
    }
    // Each item is addressed by its representative, the smallest taxon.
    let mut reps: Vec<usize> = (0..n).collect();
    let mut items: Vec<Item> = (0..n).map(Item::Leaf).collect();
    let root = loop {
        if items.len() == 2 {
            let b = items.pop().unwrap();
            let a = items.pop().unwrap();
            break match (a, b) {
                (
                    Item::Hub { color, children },
                    Item::Hub {
                        color: c2,
                        children: ch2,
                    },
                ) if color == c2 => Item::hub(color, children.into_iter().chain(ch2).collect()),
                (
                    Item::Hub {
                        color,
                        mut children,
                    },
                    other,
                )
                | (
                    other,
                    Item::Hub {
                        color,
                        mut children,
                    },
                ) => {
                    children.push(other);
                    Item::Hub { color, children }
                }
                (Item::Leaf(_), Item::Leaf(_)) => unreachable!("two taxa never remain"),
            };
        }
        let sub = d.restrict(&reps);
        let classes = index_classes(&sub)?;
        let code = |c: u16| {
            // translate a palette code of the restriction back to `d`
            let col = &sub.palette()[c as usize];
            d.palette().iter().position(|p| p == col).unwrap() as u16
        };
        if classes.len() == 1 {
            let m = classes[0].1.expect("a class of several items has a value");
            break Item::hub(code(m), items);
        }
        if classes.iter().all(|(g, _)| g.len() == 1) {
            return Err(TernaryError::NoPseudoCherry(
                reps.iter().map(|&i| d.taxa()[i].clone()).collect(),
            ));
        }
        let mut slots: Vec<Option<Item>> = items.into_iter().map(Some).collect();
        let mut next: Vec<(usize, Item)> = Vec::new();
        for (g, m) in classes {
            let members: Vec<Item> = g.iter().map(|&i| slots[i].take().unwrap()).collect();
            let rep = reps[g[0]];
            match m {
                Some(m) => next.push((rep, Item::hub(code(m), members))),
                None => next.push((rep, members.into_iter().next().unwrap())),
            }
        }
        next.sort_by_key(|(r, _)| *r);
        reps = next.iter().map(|(r, _)| *r).collect();
        items = next.into_iter().map(|(_, it)| it).collect();
    };
    let mut b = TreeBuilder::new();
    root.build(d, &mut b);
    let tree = b.dated()?;
    if let Some(color) = non_discriminating(&tree) {
        return Err(TernaryError::NonDiscriminating(color));
    }
    let back = derive_ternary(&tree)?;
    if let Some([i, j, k]) = d
        .triples()
        .find(|&[i, j, k]| back.color(i, j, k) != d.color(i, j, k))
    {
        return Err(TernaryError::NotRealizable(vec![
            d.taxa()[i].clone(),
            d.taxa()[j].clone(),
            d.taxa()[k].clone(),
        ]));
    }
    Ok(tree)
}

fn non_discriminating(t: &DatedTree) -> Option<Color> {
    t.tree()
        .edges()
        .iter()
        .find_map(|&(u, v)| match (t.color(u), t.color(v)) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => None,
        })
}
