//! Compact bracket notation for labeled trees.
//!
//! Grammar: `tree := label | label '(' tree (',' tree)* ')'`. Labels may
//! contain any character; `(`, `)`, `,` and `\` must be escaped with a
//! backslash. Surrounding whitespace is ignored, so
//! `a(b(e,f), c(g), d)` and `a(b(e,f),c(g),d)` parse identically.

use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

use crate::tree::{NodeLabel, OrderedTree, TreeError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BracketError {
    #[error("empty label at offset {offset}")]
    EmptyLabel { offset: usize },
    #[error("unbalanced or unexpected `{found}` at offset {offset}")]
    Unexpected { offset: usize, found: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input at offset {offset}")]
    TrailingInput { offset: usize },
    #[error("dangling escape at offset {offset}")]
    DanglingEscape { offset: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

struct Parser<'a> {
    chars: Peekable<CharIndices<'a>>,
    len: usize,
    // Surface-order node records: (parent index, label).
    nodes: Vec<(Option<usize>, String)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.char_indices().peekable(),
            len: text.len(),
            nodes: Vec::new(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(&(_, ch)) if ch.is_whitespace()) {
            self.chars.next();
        }
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.len, |&(i, _)| i)
    }

    fn label(&mut self) -> Result<String, BracketError> {
        self.skip_ws();
        let start = self.offset();
        let mut out = String::new();
        loop {
            match self.chars.peek() {
                Some(&(_, '(' | ')' | ',')) => break,
                Some(&(offset, '\\')) => {
                    self.chars.next();
                    match self.chars.next() {
                        Some((_, escaped)) => out.push(escaped),
                        None => return Err(BracketError::DanglingEscape { offset }),
                    }
                }
                Some(&(_, ch)) => {
                    out.push(ch);
                    self.chars.next();
                }
                None => break,
            }
        }
        let out = out.trim_end().to_string();
        if out.is_empty() {
            return Err(BracketError::EmptyLabel { offset: start });
        }
        Ok(out)
    }

    fn tree(&mut self, parent: Option<usize>) -> Result<(), BracketError> {
        let label = self.label()?;
        let index = self.nodes.len();
        self.nodes.push((parent, label));
        self.skip_ws();
        if matches!(self.chars.peek(), Some(&(_, '('))) {
            self.chars.next();
            loop {
                self.tree(Some(index))?;
                self.skip_ws();
                match self.chars.next() {
                    Some((_, ',')) => continue,
                    Some((_, ')')) => break,
                    Some((offset, found)) => {
                        return Err(BracketError::Unexpected { offset, found })
                    }
                    None => return Err(BracketError::UnexpectedEnd),
                }
            }
        }
        Ok(())
    }
}

/// Parse one tree from bracket notation.
pub fn parse_bracket(text: &str) -> Result<OrderedTree, BracketError> {
    let mut parser = Parser::new(text);
    parser.tree(None)?;
    parser.skip_ws();
    if let Some(&(offset, _)) = parser.chars.peek() {
        return Err(BracketError::TrailingInput { offset });
    }
    let parents: Vec<Option<usize>> = parser.nodes.iter().map(|(p, _)| *p).collect();
    let labels: Vec<NodeLabel> = parser
        .nodes
        .into_iter()
        .map(|(_, label)| NodeLabel::new(label))
        .collect();
    Ok(OrderedTree::build(&parents, labels)?)
}

fn escape_into(out: &mut String, label: &str) {
    for ch in label.chars() {
        if matches!(ch, '(' | ')' | ',' | '\\') {
            out.push('\\');
        }
        out.push(ch);
    }
}

fn render_node(tree: &OrderedTree, node: usize, out: &mut String) {
    escape_into(out, &tree.label(node).surface);
    let kids = tree.children(node);
    if !kids.is_empty() {
        out.push('(');
        for (pos, &child) in kids.iter().enumerate() {
            if pos > 0 {
                out.push(',');
            }
            render_node(tree, child, out);
        }
        out.push(')');
    }
}

/// Render a tree back to bracket notation using node surface forms.
pub fn render_bracket(tree: &OrderedTree) -> String {
    let mut out = String::new();
    render_node(tree, tree.root(), &mut out);
    out
}
