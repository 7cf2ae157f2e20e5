//! Newick emission and parsing for unrooted ternary trees.
//!
//! Emitted trees are rooted at the internal node `k0` (the parent of leaf 0
//! after canonical renumbering), which has three children. The root carries
//! no meaning; readers should treat the tree as unrooted. Internal nodes are
//! labeled `k0 .. k{n-3}` and children are listed by smallest leaf id, so the
//! text depends only on the topology.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tree::Tree;

pub fn to_newick(tree: &Tree, labels: &[String]) -> String {
    let t = tree.canonicalize();
    let root = t.parent_of_leaf(0);
    let min_leaf = t.min_leaf_below(root);
    let mut out = String::new();
    emit(&t, labels, &min_leaf, root, usize::MAX, &mut out);
    out.push(';');
    out
}

fn emit(t: &Tree, labels: &[String], min_leaf: &[usize], v: usize, from: usize, out: &mut String) {
    if t.is_leaf(v) {
        out.push_str(&quote(&labels[v]));
        return;
    }
    let mut kids: Vec<usize> = t.neighbors(v).iter().copied().filter(|&w| w != from).collect();
    kids.sort_by_key(|&w| min_leaf[w]);
    out.push('(');
    for (i, &w) in kids.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        emit(t, labels, min_leaf, w, v, out);
    }
    out.push(')');
    out.push_str(&t.node_name(v, labels));
}

fn quote(label: &str) -> String {
    if label.chars().any(|c| "()[]':;,".contains(c) || c.is_whitespace()) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

/// Undirected node/edge list in Graphviz DOT syntax.
pub fn to_dot(tree: &Tree, labels: &[String]) -> String {
    let t = tree.canonicalize();
    let mut out = String::from("graph tree {\n");
    for v in 0..t.node_count() {
        let shape = if t.is_leaf(v) { "box" } else { "point" };
        writeln!(out, "  \"{}\" [shape={shape}];", t.node_name(v, labels)).unwrap();
    }
    for (a, b) in t.edges() {
        writeln!(out, "  \"{}\" -- \"{}\";", t.node_name(a, labels), t.node_name(b, labels)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Debug)]
struct RawNode {
    label: Option<String>,
    children: Vec<usize>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nodes: Vec<RawNode>,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            msg: format!("{} (at byte {})", msg.into(), self.pos),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn node(&mut self) -> Result<usize> {
        let mut children = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                children.push(self.node()?);
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
        let label = self.label()?;
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && !b",);[ \t\r\n".contains(&self.s[self.pos]) {
                self.pos += 1;
            }
            let len = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
            len.parse::<f64>().map_err(|_| self.err(format!("bad branch length {len:?}")))?;
        }
        if children.is_empty() && label.is_none() {
            return Err(self.err("unlabeled leaf"));
        }
        self.nodes.push(RawNode { label, children });
        Ok(self.nodes.len() - 1)
    }

    fn label(&mut self) -> Result<Option<String>> {
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                let mut out = Vec::new();
                loop {
                    match self.s.get(self.pos) {
                        None => return Err(self.err("unterminated quoted label")),
                        Some(b'\'') if self.s.get(self.pos + 1) == Some(&b'\'') => {
                            out.push(b'\'');
                            self.pos += 2;
                        }
                        Some(b'\'') => {
                            self.pos += 1;
                            break;
                        }
                        Some(&c) => {
                            out.push(c);
                            self.pos += 1;
                        }
                    }
                }
                Ok(Some(String::from_utf8_lossy(&out).into_owned()))
            }
            _ => {
                let start = self.pos;
                while self.pos < self.s.len() && !b"(),:;[' \t\r\n".contains(&self.s[self.pos]) {
                    self.pos += 1;
                }
                if self.pos == start {
                    Ok(None)
                } else {
                    Ok(Some(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()))
                }
            }
        }
    }
}

/// Parse Newick text into a tree plus its leaf labels in order of appearance.
///
/// The root may have three children, or two (a rooted binary tree, which is
/// unrooted by joining the two sides). Every other internal node must have
/// two children. Internal labels and branch lengths are ignored.
pub fn parse_newick(text: &str) -> Result<(Tree, Vec<String>)> {
    let (nodes, root) = parse_raw(text)?;
    let mut labels = Vec::new();
    collect_leaves(&nodes, root, &mut labels);
    let tree = build(&nodes, root, &labels)?;
    Ok((tree, labels))
}

/// Parse Newick text whose leaves are exactly `labels`, keeping their ids.
pub fn parse_newick_with_labels(text: &str, labels: &[String]) -> Result<Tree> {
    let (nodes, root) = parse_raw(text)?;
    let mut found = Vec::new();
    collect_leaves(&nodes, root, &mut found);
    let mut a = found.clone();
    let mut b = labels.to_vec();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::InvalidLabels(format!(
            "tree leaves {found:?} do not match the expected labels"
        )));
    }
    build(&nodes, root, labels)
}

fn parse_raw(text: &str) -> Result<(Vec<RawNode>, usize)> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    let root = p.node()?;
    if p.peek() != Some(b';') {
        return Err(p.err("expected ';'"));
    }
    p.pos += 1;
    if p.peek().is_some() {
        return Err(p.err("trailing content after ';'"));
    }
    Ok((p.nodes, root))
}

fn collect_leaves(nodes: &[RawNode], v: usize, out: &mut Vec<String>) {
    if nodes[v].children.is_empty() {
        out.push(nodes[v].label.clone().unwrap_or_default());
    }
    for &c in &nodes[v].children {
        collect_leaves(nodes, c, out);
    }
}

fn build(nodes: &[RawNode], root: usize, labels: &[String]) -> Result<Tree> {
    let n = labels.len();
    if n < 4 {
        return Err(Error::TooFewObjects(n));
    }
    let ids: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    if ids.len() != n {
        return Err(Error::InvalidLabels("duplicate leaf label".into()));
    }
    let mut next_internal = n;
    let mut edges = Vec::with_capacity(2 * n - 3);

    // maps a raw node to its tree node id, recording edges to its children
    fn visit(
        nodes: &[RawNode],
        v: usize,
        ids: &HashMap<&str, usize>,
        next_internal: &mut usize,
        edges: &mut Vec<(usize, usize)>,
        is_root: bool,
    ) -> Result<usize> {
        let node = &nodes[v];
        if node.children.is_empty() {
            let l = node.label.as_deref().unwrap_or("");
            return ids
                .get(l)
                .copied()
                .ok_or_else(|| Error::InvalidLabels(format!("unknown leaf {l:?}")));
        }
        let want = if is_root { 3 } else { 2 };
        if node.children.len() != want {
            return Err(Error::InvalidTree(format!(
                "node with {} children (expected {want}); only ternary trees are supported",
                node.children.len()
            )));
        }
        let id = *next_internal;
        *next_internal += 1;
        for &c in &node.children {
            let cid = visit(nodes, c, ids, next_internal, edges, false)?;
            edges.push((id, cid));
        }
        Ok(id)
    }

    let r = &nodes[root];
    if r.children.len() == 2 {
        let a = visit(nodes, r.children[0], &ids, &mut next_internal, &mut edges, false)?;
        let b = visit(nodes, r.children[1], &ids, &mut next_internal, &mut edges, false)?;
        edges.push((a, b));
    } else {
        visit(nodes, root, &ids, &mut next_internal, &mut edges, true)?;
    }
    if next_internal != 2 * n - 2 {
        return Err(Error::InvalidTree(format!(
            "{} internal nodes for {n} leaves",
            next_internal - n
        )));
    }
    Tree::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartet::embedded_pairings;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn emits_rooted_at_k0() {
        // (y,((u,v),(w,x)))
        let l = labels(&["u", "v", "w", "x", "y"]);
        let t = Tree::from_edges(5, &[(0, 5), (1, 5), (2, 6), (3, 6), (5, 7), (6, 7), (4, 7)]).unwrap();
        assert_eq!(to_newick(&t, &l), "(u,v,((w,x)k2,y)k1)k0;");
    }

    #[test]
    fn parse_roundtrip_preserves_quartets() {
        let l = labels(&["u", "v", "w", "x", "y"]);
        let t = Tree::from_edges(5, &[(0, 5), (1, 5), (2, 6), (3, 6), (5, 7), (6, 7), (4, 7)]).unwrap();
        let text = to_newick(&t, &l);
        let back = parse_newick_with_labels(&text, &l).unwrap();
        assert_eq!(embedded_pairings(&back), embedded_pairings(&t));
    }

    #[test]
    fn rooted_binary_input_is_unrooted() {
        let l = labels(&["u", "v", "w", "x", "y"]);
        let a = parse_newick_with_labels("(y,((u,v),(w,x)));", &l).unwrap();
        let b = parse_newick_with_labels("((u:0.1,v:2e-1)k9,((w,x),y):0.5);", &l).unwrap();
        assert_eq!(embedded_pairings(&a), embedded_pairings(&b));
    }

    #[test]
    fn quoted_labels() {
        let l = labels(&["a b", "it's", "c", "d"]);
        let t = Tree::from_edges(4, &[(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).unwrap();
        let text = to_newick(&t, &l);
        assert!(text.contains("'a b'") && text.contains("'it''s'"));
        let (_, found) = parse_newick(&text).unwrap();
        assert_eq!(found.len(), 4);
        let back = parse_newick_with_labels(&text, &l).unwrap();
        assert_eq!(embedded_pairings(&back), embedded_pairings(&t));
    }

    #[test]
    fn rejects_multifurcation_and_garbage() {
        let l = labels(&["a", "b", "c", "d", "e"]);
        assert!(parse_newick_with_labels("(a,b,c,(d,e));", &l).is_err());
        assert!(parse_newick_with_labels("(a,b,(c,d,e));", &l).is_err());
        assert!(parse_newick_with_labels("(a,b,(c,(d,e)))", &l).is_err());
        assert!(parse_newick_with_labels("(a,b,(c,(d,z)));", &l).is_err());
        assert!(parse_newick_with_labels("(a,b,(c,(d,e)));x", &l).is_err());
    }

    #[test]
    fn dot_lists_every_edge() {
        let l = labels(&["a", "b", "c", "d"]);
        let t = Tree::from_edges(4, &[(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).unwrap();
        let dot = to_dot(&t, &l);
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.contains("\"k0\" -- \"k1\""));
    }
}
