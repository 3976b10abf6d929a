//! Text format for trees.
//!
//! ```text
//! #unrooted
//! ((a:0,b:1)p:1,c:0,d:0)q;
//! ```
//!
//! Names on degree-1 vertices are taxa, names on other vertices are colors.
//! Labels follow `:` and must be 0 or 1 on input. Serialization hangs the
//! tree from the declared root, or else from the neighbor of the smallest
//! taxon, and orders children by their smallest descendant taxon; the output
//! is therefore a canonical form.

use std::fmt::Write as _;

use thiserror::Error;

use super::{labeled::is_discriminating, Tree, TreeError, VertexId};
use crate::taxon::{token_char, Color, Taxon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("duplicate taxon {0}")]
    DuplicateTaxon(Taxon),
    #[error("bad edge label {value:?} at byte {pos}: expected 0 or 1")]
    BadLabel { pos: usize, value: String },
    #[error("{0}")]
    Tree(TreeError),
}

/// A parsed tree with whatever labels and colors the text carried.
#[derive(Debug, Clone)]
pub struct ParsedTree {
    pub tree: Tree,
    /// Present iff every edge carried a label.
    pub labels: Option<Vec<u32>>,
    /// Colors of interior vertices; `None` where the text named none.
    pub colors: Vec<Option<Color>>,
    pub discriminating: bool,
}

impl ParsedTree {
    pub fn labeled(&self) -> Option<super::EdgeLabeledTree> {
        self.labels
            .as_ref()
            .map(|l| super::EdgeLabeledTree::new(self.tree.clone(), l.clone()))
    }

    pub fn dated(&self) -> Result<super::DatedTree, TreeError> {
        super::DatedTree::new(self.tree.clone(), self.colors.clone())
    }
}

struct Node {
    name: Option<(String, usize)>,
    label: Option<(u32, usize)>,
    children: Vec<usize>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn token(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && token_char(self.src[self.pos] as char) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            (
                String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                start,
            )
        })
    }

    fn node(&mut self, depth: usize) -> Result<usize, ParseError> {
        if depth > 10_000 {
            return Err(self.err("nesting too deep"));
        }
        let mut children = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                children.push(self.node(depth + 1)?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected ',' or ')'")),
                }
            }
        }
        let name = self.token();
        if children.is_empty() && name.is_none() {
            return Err(self.err("expected a taxon or '('"));
        }
        let mut label = None;
        if self.peek() == Some(b':') {
            self.pos += 1;
            let (value, at) = self
                .token()
                .ok_or_else(|| self.err("expected an edge label"))?;
            match value.as_str() {
                "0" => label = Some((0, at)),
                "1" => label = Some((1, at)),
                _ => return Err(ParseError::BadLabel { pos: at, value }),
            }
        }
        self.nodes.push(Node {
            name,
            label,
            children,
        });
        Ok(self.nodes.len() - 1)
    }
}

/// Parses the tree format; see the module docs.
pub fn parse_tree(text: &str) -> Result<ParsedTree, ParseError> {
    let mut rooted = false;
    let mut header_seen = false;
    let mut body = String::new();
    let mut offsets = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            if !header_seen && body.trim().is_empty() {
                match trimmed {
                    "#rooted" => {
                        rooted = true;
                        header_seen = true;
                    }
                    "#unrooted" => header_seen = true,
                    _ => {}
                }
            }
        } else {
            offsets.push((body.len(), offset));
            body.push_str(line);
        }
        offset += line.len();
    }
    let to_src = |p: usize| {
        let &(b, s) = offsets
            .iter()
            .rev()
            .find(|&&(b, _)| b <= p)
            .unwrap_or(&(0, 0));
        s + (p - b)
    };
    let fix = |e: ParseError| match e {
        ParseError::SyntaxError { pos, msg } => ParseError::SyntaxError {
            pos: to_src(pos),
            msg,
        },
        ParseError::BadLabel { pos, value } => ParseError::BadLabel {
            pos: to_src(pos),
            value,
        },
        e => e,
    };
    let mut p = Parser {
        src: body.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    let top = p.node(0).map_err(fix)?;
    if p.peek() != Some(b';') {
        return Err(fix(p.err("expected ';'")));
    }
    p.pos += 1;
    if p.peek().is_some() {
        return Err(fix(p.err("trailing input after ';'")));
    }
    if let Some((_, at)) = p.nodes[top].label {
        return Err(fix(ParseError::SyntaxError {
            pos: at,
            msg: "the outermost node has no parent edge to label".into(),
        }));
    }
    // Parser nodes become vertices one-to-one.
    let n = p.nodes.len();
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut degree = vec![0usize; n];
    for (i, node) in p.nodes.iter().enumerate() {
        for &c in &node.children {
            edges.push((i, c));
            labels.push(p.nodes[c].label);
            degree[i] += 1;
            degree[c] += 1;
        }
    }
    let labeled = labels.iter().filter(|l| l.is_some()).count();
    if labeled != 0 && labeled != labels.len() {
        let missing = edges
            .iter()
            .zip(&labels)
            .find(|(_, l)| l.is_none())
            .map(|(&(_, c), _)| p.nodes[c].name.as_ref().map_or(0, |(_, at)| *at))
            .unwrap_or(0);
        return Err(fix(ParseError::SyntaxError {
            pos: missing,
            msg: "edge labels must be given on all edges or on none".into(),
        }));
    }
    let mut taxa = Vec::with_capacity(n);
    let mut colors = Vec::with_capacity(n);
    let mut seen = std::collections::BTreeSet::new();
    for (i, node) in p.nodes.iter().enumerate() {
        let leaf = degree[i] <= 1;
        match (&node.name, leaf) {
            (Some((name, _)), true) => {
                let t = Taxon::new(name.clone()).expect("lexer yields tokens");
                if !seen.insert(t.clone()) {
                    return Err(ParseError::DuplicateTaxon(t));
                }
                taxa.push(Some(t));
                colors.push(None);
            }
            (None, true) => {
                return Err(ParseError::SyntaxError {
                    pos: 0,
                    msg: "leaf without a taxon".into(),
                })
            }
            (name, false) => {
                taxa.push(None);
                colors.push(name.as_ref().map(|(c, _)| Color::new(c.clone()).unwrap()));
            }
        }
    }
    let root = rooted.then_some(top);
    let tree = Tree::from_parts(taxa, edges, root).map_err(ParseError::Tree)?;
    let discriminating = is_discriminating(&tree, &colors);
    let labels = (labeled > 0).then(|| labels.into_iter().map(|l| l.unwrap().0).collect());
    Ok(ParsedTree {
        tree,
        labels,
        colors,
        discriminating,
    })
}

/// The vertex a tree is hung from when serialized.
pub fn display_root(t: &Tree) -> VertexId {
    if let Some(r) = t.root() {
        return r;
    }
    let (_, s) = t.leaves().next().expect("trees carry at least one taxon");
    match t.neighbors(s).first() {
        Some(&(w, _)) if t.is_inner(w) => w,
        _ => s,
    }
}

/// Deterministic text form; equal for isomorphic inputs.
pub fn serialize(t: &Tree, labels: Option<&[u32]>, colors: Option<&[Option<Color>]>) -> String {
    let root = display_root(t);
    let view = t.rooted_view_at(root);
    // Smallest descendant taxon of every vertex, bottom-up.
    let n = t.n_vertices();
    let mut min_tx: Vec<Option<&Taxon>> = (0..n).map(|v| t.taxon(v)).collect();
    for &v in view.order().iter().rev() {
        if let Some(p) = view.parent(v) {
            if let Some(m) = min_tx[v] {
                if min_tx[p].is_none_or(|pm| m < pm) {
                    min_tx[p] = Some(m);
                }
            }
        }
    }
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for &v in view.order() {
        if let Some(p) = view.parent(v) {
            children[p].push(v);
        }
    }
    for c in &mut children {
        c.sort_by_key(|&v| min_tx[v]);
    }
    let mut out = String::from(if t.is_rooted() {
        "#rooted\n"
    } else {
        "#unrooted\n"
    });
    // Iterative to keep deep caterpillars off the call stack.
    enum Step {
        Open(VertexId),
        Close(VertexId),
        Comma,
    }
    let mut stack = vec![Step::Open(root)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Comma => out.push(','),
            Step::Open(v) => {
                if children[v].is_empty() {
                    stack.push(Step::Close(v));
                } else {
                    out.push('(');
                    stack.push(Step::Close(v));
                    for (i, &c) in children[v].iter().enumerate().rev() {
                        stack.push(Step::Open(c));
                        if i > 0 {
                            stack.push(Step::Comma);
                        }
                    }
                }
            }
            Step::Close(v) => {
                if !children[v].is_empty() {
                    out.push(')');
                }
                if let Some(x) = t.taxon(v) {
                    out.push_str(x.as_str());
                } else if let Some(Some(c)) = colors.map(|c| &c[v]) {
                    out.push_str(c.as_str());
                }
                if let (Some(l), Some(e)) = (labels, view.parent_edge(v)) {
                    let _ = write!(out, ":{}", l[e]);
                }
            }
        }
    }
    out.push_str(";\n");
    out
}

impl Tree {
    pub(crate) fn rooted_view_at(&self, root: VertexId) -> super::RootedView {
        super::RootedView::new(self, root)
    }
}
