//! Roots for relations with known and unknown directions.

use std::collections::VecDeque;

use super::quotient::{build_quotient, Arc, ArcKind, QuotientGraph};
use super::reconstruct::{
    expand_classes, minimally_resolved_forest, Diagnostic, ReconstructError, RootChoice,
};
use super::{EventRelation, Mode};
use crate::taxon::Taxon;
use crate::tree::EdgeLabeledTree;

/// One admissible rooted tree.
#[derive(Debug, Clone)]
pub struct RootedOption {
    /// Central vertex used per component, as class representatives.
    pub centers: Vec<Taxon>,
    /// Component holding the root; `None` for the hub.
    pub component: Option<usize>,
    pub root: RootChoice,
    pub tree: EdgeLabeledTree,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone)]
pub struct Admissible {
    pub options: Vec<RootedOption>,
    pub diagnostics: Vec<Diagnostic>,
}

fn distances(q: &QuotientGraph, from: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; q.n_classes()];
    d[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in q.neighbors(u) {
            if d[w] == usize::MAX {
                d[w] = d[u] + 1;
                queue.push_back(w);
            }
        }
    }
    d
}

/// Classes of component `comp` from which every directed arc points away.
/// Arcs of unknown direction (and symmetric ones) can always be oriented.
pub fn central_vertices(q: &QuotientGraph, comp: usize) -> Vec<usize> {
    let arcs = q.component_arcs(comp);
    q.components()[comp]
        .iter()
        .copied()
        .filter(|&v| {
            let d = distances(q, v);
            arcs.iter()
                .filter(|a| a.kind == ArcKind::Dir)
                .all(|a| d[a.from] < d[a.to])
        })
        .collect()
}

fn orient_away(q: &QuotientGraph, centers: &[usize]) -> Vec<Arc> {
    let mut dist = vec![0; q.n_classes()];
    for &c in centers {
        for (v, d) in distances(q, c).into_iter().enumerate() {
            if d != usize::MAX {
                dist[v] = d;
            }
        }
    }
    q.arcs()
        .iter()
        .map(|a| {
            let (from, to) = if dist[a.from] < dist[a.to] {
                (a.from, a.to)
            } else {
                (a.to, a.from)
            };
            Arc {
                from,
                to,
                kind: ArcKind::Dir,
            }
        })
        .collect()
}

/// Every rooted minimally resolved tree obtained by orienting the arcs of
/// each component away from one of its central vertices, for each
/// admissible root. Empty with `NoCentralVertex` when some component has
/// no central vertex.
pub fn admissible_rooted_trees(r: &EventRelation) -> Result<Admissible, ReconstructError> {
    let q = build_quotient(r)?;
    let comps = q.components();
    let centers: Vec<Vec<usize>> = (0..comps.len()).map(|c| central_vertices(&q, c)).collect();
    if centers.iter().any(|c| c.is_empty()) {
        return Ok(Admissible {
            options: Vec::new(),
            diagnostics: vec![Diagnostic::NoCentralVertex],
        });
    }
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for cs in &centers {
        combos = combos
            .into_iter()
            .flat_map(|p| {
                cs.iter().map(move |&c| {
                    let mut p = p.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    let mut options = Vec::new();
    for combo in combos {
        let oriented = q.with_arcs(orient_away(&q, &combo), Mode::Directed);
        let mut roots: Vec<(Option<usize>, RootChoice)> = Vec::new();
        if comps.len() > 1 {
            roots.push((None, RootChoice::Hub));
        }
        for (ci, &c) in combo.iter().enumerate() {
            if comps[ci].len() > 1 {
                roots.push((Some(ci), RootChoice::Source(q.rep(c).clone())));
            }
        }
        if roots.is_empty() {
            // A single isolated class: the single-vertex tree.
            roots.push((None, RootChoice::Hub));
        }
        for (component, root) in roots {
            let choice = (comps.len() > 1).then_some(&root);
            let forest = minimally_resolved_forest(&oriented, choice)?;
            options.push(RootedOption {
                centers: combo.iter().map(|&c| q.rep(c).clone()).collect(),
                component,
                root,
                tree: expand_classes(&forest.tree, q.classes())?,
                diagnostics: forest.diagnostics,
            });
        }
    }
    Ok(Admissible {
        options,
        diagnostics: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{rel, t};
    use super::super::{derive_relation, explains};
    use super::*;

    fn example() -> EventRelation {
        rel("b\ta\tD\nb\tc\tD\nc\td\tU\nd\te\tD\n")
    }

    #[test]
    fn book_example_centers() {
        let q = build_quotient(&example()).unwrap();
        let c: Vec<&Taxon> = central_vertices(&q, 0).iter().map(|&v| q.rep(v)).collect();
        assert_eq!(c, vec![&t("b")]);
    }

    #[test]
    fn book_example_trees() {
        let r = example();
        let adm = admissible_rooted_trees(&r).unwrap();
        assert_eq!(adm.options.len(), 1);
        let opt = &adm.options[0];
        assert_eq!(opt.root, RootChoice::Source(t("b")));
        assert!(explains(&opt.tree, &r).unwrap());
        let d = derive_relation(&opt.tree, Mode::Directed).unwrap();
        assert_eq!(d.get(&t("c"), &t("d")).unwrap().a, t("c"));
    }

    #[test]
    fn symmetric_path_all_central() {
        let q = build_quotient(&rel("a\tb\tU\nb\tc\tU\n")).unwrap();
        assert_eq!(central_vertices(&q, 0), vec![0, 1, 2]);
    }

    #[test]
    fn in_pointer_pattern() {
        let r = rel("x\tv\tD\nv\ty\tU\n");
        let adm = admissible_rooted_trees(&r).unwrap();
        assert_eq!(adm.options.len(), 1);
        assert_eq!(adm.options[0].root, RootChoice::Source(t("x")));
        assert!(explains(&adm.options[0].tree, &r).unwrap());
        let none = admissible_rooted_trees(&rel("x\tv\tD\ny\tw\tD\nv\tw\tU\n")).unwrap();
        assert!(none.options.is_empty());
        assert_eq!(none.diagnostics, vec![Diagnostic::NoCentralVertex]);
    }

    #[test]
    fn directed_only() {
        let r = rel("taxa\tz\na\tb\tD\nb\tc\tD\n");
        let adm = admissible_rooted_trees(&r).unwrap();
        let roots: Vec<String> = adm.options.iter().map(|o| o.root.to_string()).collect();
        assert_eq!(roots, vec!["hub", "a"]);
        for o in &adm.options {
            assert!(explains(&o.tree, &r).unwrap());
        }
    }
}
