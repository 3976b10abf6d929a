//! Subcommand bodies and their text output.

use symtree::oracles::{self, OracleError};
use symtree::quartets::{displayed_quartets, tree_from_quartets, QuartetError, QuartetSystem};
use symtree::rare_events::{
    admissible_rooted_trees, build_quotient, enumerate_binary, reconstruct_relation as rebuild,
    Diagnostic, EventRelation, Mode, QuotientError, ReconstructError, RootChoice,
};
use symtree::taxon::join;
use symtree::ternary::{
    check_metric, derive_ternary as derive_map, generate_quartets, reconstruct, unresolved_sets,
    TernaryError, TernaryMap,
};
use symtree::tree::{parse_tree, ParsedTree};
use symtree::{Color, Taxon, TreeError};

/// Data for standard output, lines for standard error, and the exit code.
pub struct Outcome {
    pub data: String,
    pub diagnostics: Vec<String>,
    pub code: u8,
}

impl Outcome {
    fn ok(data: String) -> Outcome {
        Outcome {
            data,
            diagnostics: Vec::new(),
            code: 0,
        }
    }

    fn warn(mut self, diags: &[Diagnostic]) -> Outcome {
        self.diagnostics
            .extend(diags.iter().map(|d| format!("warning: {d}")));
        self
    }
}

pub enum Failure {
    Syntax(String),
    /// Message plus witness lines.
    Invalid(String, Vec<String>),
    Unrealizable(String),
    Internal(String),
}

impl Failure {
    pub fn into_outcome(self) -> Outcome {
        let (code, diagnostics) = match self {
            Failure::Syntax(m) => (2, vec![format!("error: {m}")]),
            Failure::Invalid(m, w) => {
                (3, std::iter::once(format!("error: {m}")).chain(w).collect())
            }
            Failure::Unrealizable(m) => (4, vec![format!("error: {m}")]),
            Failure::Internal(m) => (1, vec![format!("internal error: {m}")]),
        };
        Outcome {
            data: String::new(),
            diagnostics,
            code,
        }
    }
}

fn syntax(e: impl std::fmt::Display) -> Failure {
    Failure::Syntax(e.to_string())
}

fn tree(text: &str) -> Result<ParsedTree, Failure> {
    parse_tree(text).map_err(syntax)
}

fn relation(text: &str) -> Result<EventRelation, Failure> {
    EventRelation::parse(text).map_err(syntax)
}

fn ternary(text: &str) -> Result<TernaryMap, Failure> {
    TernaryMap::parse(text).map_err(syntax)
}

/// One witness line per quotient failure.
pub fn quotient_witness(e: &QuotientError) -> String {
    match e {
        QuotientError::NotEquivalence(a, b, c) => format!("NOT_EQUIVALENCE {}", join([a, b, c])),
        QuotientError::ClassInconsistency(a, b, c, d) => {
            format!("CLASS_INCONSISTENCY {} {}", join([a, b]), join([c, d]))
        }
        QuotientError::ZeroOneConflict(a, b) => format!("ZERO_ONE {}", join([a, b])),
        QuotientError::NotForest(cycle) => format!("CYCLE {}", join(cycle)),
        QuotientError::InPointerConflict(x, v, y) => format!("IN_POINTERS {}", join([x, v, y])),
        QuotientError::MixedKindConflict(a, b, c, d) => {
            format!("MIXED_KIND {} {}", join([a, b]), join([c, d]))
        }
    }
}

fn reconstruct_failure(e: ReconstructError) -> Failure {
    match e {
        ReconstructError::Quotient(q) => {
            Failure::Invalid(q.to_string(), vec![quotient_witness(&q)])
        }
        ReconstructError::NoSource(_) => Failure::Unrealizable(e.to_string()),
        ReconstructError::InvalidRootChoice(_) | ReconstructError::Relation(_) => syntax(e),
        other => Failure::Internal(other.to_string()),
    }
}

fn ternary_failure(e: TernaryError) -> Failure {
    match e {
        TernaryError::NotTransitive(a, b, c) => Failure::Invalid(
            "equivalence is not transitive".into(),
            vec![format!("NOT_TRANSITIVE {}", join([a, b, c]))],
        ),
        TernaryError::QuartetConflict(c) => Failure::Invalid(
            "a 4-set generates two quartets".into(),
            vec![format!(
                "QUARTET_CONFLICT {} {} {}",
                join(&c.taxa),
                c.first,
                c.second
            )],
        ),
        TernaryError::Condition3Violation(_) => Failure::Invalid(e.to_string(), Vec::new()),
        TernaryError::NoPseudoCherry(_)
        | TernaryError::NotRealizable(_)
        | TernaryError::NonDiscriminating(_) => Failure::Unrealizable(e.to_string()),
        TernaryError::Tree(_) => Failure::Internal(e.to_string()),
        _ => syntax(e),
    }
}

pub fn derive_relation(text: &str, directed: bool) -> Result<Outcome, Failure> {
    let p = tree(text)?;
    let t = p
        .labeled()
        .ok_or_else(|| Failure::Syntax("every edge needs a 0/1 label".into()))?;
    let mode = if directed {
        Mode::Directed
    } else {
        Mode::Symmetric
    };
    match symtree::rare_events::derive_relation(&t, mode) {
        Ok(r) => Ok(Outcome::ok(r.to_string())),
        Err(TreeError::NotRooted) => {
            Err(Failure::Syntax("directed mode needs a #rooted tree".into()))
        }
        Err(e) => Err(Failure::Internal(e.to_string())),
    }
}

pub fn derive_ternary(text: &str) -> Result<Outcome, Failure> {
    let p = tree(text)?;
    let d = p.dated().map_err(syntax)?;
    let map = derive_map(&d).map_err(syntax)?;
    let mut out = Outcome::ok(map.to_string());
    if !p.discriminating {
        out.diagnostics
            .push("warning: adjacent interior vertices share a color".into());
    }
    Ok(out)
}

pub fn check_relation(text: &str) -> Result<Outcome, Failure> {
    let r = relation(text)?;
    Ok(match build_quotient(&r) {
        Ok(_) => Outcome::ok("OK\n".into()),
        Err(e) => Outcome {
            data: format!("{}\n", quotient_witness(&e)),
            diagnostics: Vec::new(),
            code: 3,
        },
    })
}

/// `OK`, or one line per violation ordered by witness.
pub fn report_validation(lines: &[String]) -> String {
    if lines.is_empty() {
        "OK\n".into()
    } else {
        lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

pub fn check_ternary(text: &str, require_binary: bool) -> Result<Outcome, Failure> {
    let d = ternary(text)?;
    let mut lines: Vec<String> = check_metric(&d)
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect();
    if require_binary {
        lines.extend(
            unresolved_sets(&d)
                .iter()
                .map(|s| format!("UNRESOLVED {}", join(s))),
        );
    }
    Ok(Outcome {
        code: if lines.is_empty() { 0 } else { 3 },
        data: report_validation(&lines),
        diagnostics: Vec::new(),
    })
}

pub fn reconstruct_relation(
    text: &str,
    all_binary: bool,
    allow_degree2_root: bool,
    root: Option<&str>,
) -> Result<Outcome, Failure> {
    let r = relation(text)?;
    if all_binary {
        let e = enumerate_binary(&r, allow_degree2_root).map_err(reconstruct_failure)?;
        let data: String = e.trees.iter().map(|t| t.serialize()).collect();
        let mut out = Outcome::ok(data).warn(&e.diagnostics);
        if e.trees.is_empty() {
            out.diagnostics
                .push("error: no binary tree explains the relation".into());
            out.code = 4;
        }
        return Ok(out);
    }
    let choice = match root {
        None => None,
        Some("hub") => Some(RootChoice::Hub),
        Some(t) => Some(RootChoice::Source(Taxon::new(t).map_err(syntax)?)),
    };
    let rec = rebuild(&r, choice.as_ref()).map_err(reconstruct_failure)?;
    Ok(Outcome::ok(rec.tree.serialize()).warn(&rec.diagnostics))
}

pub fn reconstruct_ternary(text: &str) -> Result<Outcome, Failure> {
    let d = ternary(text)?;
    let t = reconstruct(&d).map_err(ternary_failure)?;
    Ok(Outcome::ok(t.serialize()))
}

pub fn quartets_of_tree(text: &str) -> Result<Outcome, Failure> {
    let p = tree(text)?;
    Ok(Outcome::ok(displayed_quartets(&p.tree).to_string()))
}

pub fn quartets_of_ternary(text: &str) -> Result<Outcome, Failure> {
    let d = ternary(text)?;
    let q = generate_quartets(&d).map_err(ternary_failure)?;
    Ok(Outcome::ok(q.to_string()))
}

pub fn quartet_tree(text: &str) -> Result<Outcome, Failure> {
    let q = QuartetSystem::parse(text).map_err(syntax)?;
    match tree_from_quartets(&q) {
        Ok(t) => Ok(Outcome::ok(t.canonical_form())),
        Err(e @ (QuartetError::Syntax { .. } | QuartetError::NotDistinct)) => Err(syntax(e)),
        Err(e) => Err(Failure::Unrealizable(e.to_string())),
    }
}

pub fn roots(text: &str) -> Result<Outcome, Failure> {
    let r = relation(text)?;
    let adm = admissible_rooted_trees(&r).map_err(reconstruct_failure)?;
    let mut data = String::new();
    let mut diagnostics: Vec<String> = Vec::new();
    for o in &adm.options {
        let comp = o.component.map_or("-".to_string(), |c| c.to_string());
        data.push_str(&format!("ROOT {comp} {}\n", o.root));
        data.push_str(&o.tree.serialize());
        for d in &o.diagnostics {
            let line = format!("warning: {d}");
            if !diagnostics.contains(&line) {
                diagnostics.push(line);
            }
        }
    }
    let mut out = Outcome {
        data,
        diagnostics,
        code: 0,
    }
    .warn(&adm.diagnostics);
    if adm.options.is_empty() {
        out.diagnostics.push("error: no admissible root".into());
        out.code = 4;
    }
    Ok(out)
}

fn oracle_failure(e: OracleError) -> Failure {
    syntax(e)
}

fn listing(items: impl Iterator<Item = String>, count: bool) -> Outcome {
    if count {
        Outcome::ok(format!("{}\n", items.count()))
    } else {
        Outcome::ok(items.collect())
    }
}

pub fn enumerate_trees(taxa: &[String], count: bool) -> Result<Outcome, Failure> {
    let taxa: Vec<Taxon> = taxa
        .iter()
        .map(Taxon::new)
        .collect::<Result<_, _>>()
        .map_err(syntax)?;
    let trees = oracles::enumerate_phylo_trees(taxa).map_err(oracle_failure)?;
    Ok(listing(trees.iter().map(|t| t.canonical_form()), count))
}

pub fn enumerate_labelings(text: &str, count: bool) -> Result<Outcome, Failure> {
    let p = tree(text)?;
    Ok(listing(
        oracles::enumerate_edge_labelings(&p.tree).map(|t| t.serialize()),
        count,
    ))
}

pub fn enumerate_datings(
    text: &str,
    colors: &[String],
    discriminating: bool,
    count: bool,
) -> Result<Outcome, Failure> {
    let p = tree(text)?;
    let colors: Vec<Color> = colors
        .iter()
        .map(Color::new)
        .collect::<Result<_, _>>()
        .map_err(syntax)?;
    Ok(listing(
        oracles::enumerate_datings(&p.tree, &colors, discriminating).map(|t| t.serialize()),
        count,
    ))
}

pub fn enumerate_explainers(
    text: &str,
    max_vertices: Option<usize>,
    relaxed: bool,
    count: bool,
) -> Result<Outcome, Failure> {
    let r = relation(text)?;
    let bound = max_vertices.unwrap_or(2 * r.taxa().len() + 2);
    let found = if relaxed {
        oracles::brute_force_explainers_relaxed(&r, bound)
    } else {
        oracles::brute_force_explainers(&r, bound)
    }
    .map_err(oracle_failure)?;
    Ok(listing(found.iter().map(|t| t.serialize()), count))
}
