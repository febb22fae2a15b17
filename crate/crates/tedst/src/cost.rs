//! Edit-cost schedules and the lexical resources they consult.
//!
//! Three schedules are built in:
//!
//! * `unit` — delete/insert/exchange cost 1, match 0; subtree operations
//!   cost the sum of their parts. The generic tree-distance setting.
//! * `illustration` — unit node costs, but a subtree operation costs half
//!   the sum of its parts.
//! * `entailment` — the asymmetric schedule used for premise-to-hypothesis
//!   matching: node deletes are cheap (5 for stop words, 7 otherwise),
//!   node inserts expensive (5 / 100), exchanges free when the source word
//!   is subsumed by the target, 5 when the source is a stop word, 100 when
//!   the subsumption runs the wrong way or the words are antonyms, 50
//!   otherwise. Subtree deletes are free, subtree inserts cost double the
//!   sum of their parts, subtree exchanges cost 0 for identical spans and
//!   half the sum of their parts otherwise.
//!
//! All numeric parameters can be overridden from a `key = value` file.

use std::collections::{HashMap, HashSet};
use std::str::FromStr;

use thiserror::Error;

use crate::tree::NodeLabel;

/// The four node-level edit operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditKind {
    Delete,
    Insert,
    Exchange,
    Match,
}

impl EditKind {
    /// One-character symbol used in operation strings: d, i, x, m.
    pub fn symbol(self) -> char {
        match self {
            EditKind::Delete => 'd',
            EditKind::Insert => 'i',
            EditKind::Exchange => 'x',
            EditKind::Match => 'm',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Unit,
    Illustration,
    Entailment,
}

/// Numeric cost parameters. Only the entailment schedule reads the
/// word/stop-word distinctions; the multiplier and divisor shape its
/// subtree rules.
#[derive(Debug, Clone, PartialEq)]
pub struct CostConfig {
    pub kind: ModelKind,
    pub stopword_delete: f64,
    pub word_delete: f64,
    pub stopword_insert: f64,
    pub word_insert: f64,
    pub subsumed_exchange: f64,
    pub stopword_exchange: f64,
    pub reverse_or_antonym_exchange: f64,
    pub default_exchange: f64,
    pub subtree_delete: f64,
    pub insert_multiplier: f64,
    pub exchange_divisor: f64,
}

impl Default for CostConfig {
    fn default() -> Self {
        CostConfig::unit()
    }
}

impl CostConfig {
    fn with_kind(kind: ModelKind) -> Self {
        CostConfig {
            kind,
            stopword_delete: 5.0,
            word_delete: 7.0,
            stopword_insert: 5.0,
            word_insert: 100.0,
            subsumed_exchange: 0.0,
            stopword_exchange: 5.0,
            reverse_or_antonym_exchange: 100.0,
            default_exchange: 50.0,
            subtree_delete: 0.0,
            insert_multiplier: 2.0,
            exchange_divisor: 2.0,
        }
    }

    pub fn unit() -> Self {
        Self::with_kind(ModelKind::Unit)
    }

    pub fn illustration() -> Self {
        Self::with_kind(ModelKind::Illustration)
    }

    pub fn entailment() -> Self {
        Self::with_kind(ModelKind::Entailment)
    }

    /// Set one named parameter.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), CostError> {
        if value < 0.0 || !value.is_finite() {
            return Err(CostError::NegativeCost {
                key: key.to_string(),
                value,
            });
        }
        let slot = match key {
            "stopword_delete" => &mut self.stopword_delete,
            "word_delete" => &mut self.word_delete,
            "stopword_insert" => &mut self.stopword_insert,
            "word_insert" => &mut self.word_insert,
            "subsumed_exchange" => &mut self.subsumed_exchange,
            "stopword_exchange" => &mut self.stopword_exchange,
            "reverse_or_antonym_exchange" => &mut self.reverse_or_antonym_exchange,
            "default_exchange" => &mut self.default_exchange,
            "subtree_delete" => &mut self.subtree_delete,
            "insert_multiplier" => &mut self.insert_multiplier,
            "exchange_divisor" => &mut self.exchange_divisor,
            _ => {
                return Err(CostError::UnknownParameter {
                    key: key.to_string(),
                })
            }
        };
        *slot = value;
        Ok(())
    }

    /// Apply a `key = number` override file. `#` lines and blank lines are
    /// ignored.
    pub fn apply_overrides(&mut self, text: &str) -> Result<(), CostError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(CostError::BadOverrideLine { line: lineno + 1 })?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CostError::BadOverrideLine { line: lineno + 1 })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CostError {
    #[error("unknown cost parameter `{key}`")]
    UnknownParameter { key: String },
    #[error("cost parameter `{key}` must be a nonnegative number, got {value}")]
    NegativeCost { key: String, value: f64 },
    #[error("override line {line} is not `key = number`")]
    BadOverrideLine { line: usize },
    #[error("{kind:?} cost requires a {side} label")]
    MissingLabel { kind: EditKind, side: &'static str },
    #[error("subtree cost requires spans of at least 2 nodes, got {len}")]
    SpanTooShort { len: usize },
    #[error("exchange spans differ in length ({left} vs {right})")]
    SpanLengthMismatch { left: usize, right: usize },
}

/// Lexical relations understood by the relation file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    Synonym,
    Hypernym,
    Antonym,
}

impl FromStr for RelationKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "synonym" => Ok(RelationKind::Synonym),
            "hypernym" => Ok(RelationKind::Hypernym),
            "antonym" => Ok(RelationKind::Antonym),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("relation line {line}: expected `word1<TAB>relation<TAB>word2`")]
    BadRelationLine { line: usize },
    #[error("relation line {line}: unknown relation `{relation}` (expected synonym, hypernym or antonym)")]
    UnknownRelation { line: usize, relation: String },
}

/// Accumulates stop words and relation edges before the reachability
/// closure is computed.
#[derive(Debug, Default, Clone)]
pub struct LexiconBuilder {
    stopwords: HashSet<String>,
    edges: Vec<(String, RelationKind, String)>,
}

impl LexiconBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_stopword(&mut self, form: &str) -> &mut Self {
        self.stopwords.insert(form.trim().to_lowercase());
        self
    }

    pub fn add_relation(&mut self, word1: &str, kind: RelationKind, word2: &str) -> &mut Self {
        self.edges
            .push((word1.to_lowercase(), kind, word2.to_lowercase()));
        self
    }

    /// Parse a stop-word file: one form per line, `#` lines ignored.
    pub fn add_stopwords_text(&mut self, text: &str) -> &mut Self {
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.add_stopword(line);
        }
        self
    }

    /// Parse a relation file: `word1<TAB>relation<TAB>word2` per line,
    /// `#` lines ignored.
    pub fn add_relations_text(&mut self, text: &str) -> Result<&mut Self, LexiconError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (w1, rel, w2) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), Some(c)) if !a.trim().is_empty() && !c.trim().is_empty() => {
                    (a.trim(), b.trim(), c.trim())
                }
                _ => return Err(LexiconError::BadRelationLine { line: lineno + 1 }),
            };
            let kind = rel.parse().map_err(|_| LexiconError::UnknownRelation {
                line: lineno + 1,
                relation: rel.to_string(),
            })?;
            self.add_relation(w1, kind, w2);
        }
        Ok(self)
    }

    /// Freeze the lexicon, computing the subsumption closure over
    /// synonym (both directions) and hypernym (directed) edges.
    pub fn build(&self) -> Lexicon {
        let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
        let mut antonyms: HashSet<(String, String)> = HashSet::new();
        for (w1, kind, w2) in &self.edges {
            match kind {
                RelationKind::Synonym => {
                    adjacency.entry(w1).or_default().push(w2);
                    adjacency.entry(w2).or_default().push(w1);
                }
                RelationKind::Hypernym => {
                    adjacency.entry(w1).or_default().push(w2);
                }
                RelationKind::Antonym => {
                    antonyms.insert((w1.clone(), w2.clone()));
                    antonyms.insert((w2.clone(), w1.clone()));
                }
            }
        }

        // Unbounded-depth reachability from every word that appears in a
        // synonym or hypernym edge.
        let mut subsumption: HashMap<String, HashSet<String>> = HashMap::new();
        for &start in adjacency.keys() {
            let mut reached: HashSet<&str> = HashSet::new();
            let mut queue = vec![start];
            while let Some(word) = queue.pop() {
                if let Some(nexts) = adjacency.get(word) {
                    for &next in nexts {
                        if next != start && reached.insert(next) {
                            queue.push(next);
                        }
                    }
                }
            }
            subsumption.insert(
                start.to_string(),
                reached.into_iter().map(str::to_string).collect(),
            );
        }

        Lexicon {
            stopwords: self.stopwords.clone(),
            antonyms,
            subsumption,
        }
    }
}

/// Immutable lexical resource: stop words, antonym pairs, and the
/// precomputed subsumption closure.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    stopwords: HashSet<String>,
    antonyms: HashSet<(String, String)>,
    subsumption: HashMap<String, HashSet<String>>,
}

impl Lexicon {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Stop-word membership, tested on the case-folded surface form.
    pub fn is_stopword(&self, surface: &str) -> bool {
        self.stopwords.contains(&surface.to_lowercase())
    }

    /// True iff `x` equals `y` or `y` is reachable from `x` through
    /// synonym/hypernym edges. Keys are case-folded.
    pub fn subsumes_keys(&self, x: &str, y: &str) -> bool {
        let x = x.to_lowercase();
        let y = y.to_lowercase();
        if x == y {
            return true;
        }
        self.subsumption
            .get(&x)
            .is_some_and(|reached| reached.contains(&y))
    }

    /// Direct antonymy (symmetric, no closure).
    pub fn are_antonyms(&self, x: &str, y: &str) -> bool {
        self.antonyms
            .contains(&(x.to_lowercase(), y.to_lowercase()))
    }
}

fn require_label<'a>(
    kind: EditKind,
    side: &'static str,
    label: Option<&'a NodeLabel>,
) -> Result<&'a NodeLabel, CostError> {
    label.ok_or(CostError::MissingLabel { kind, side })
}

fn require_span<'a>(
    kind: EditKind,
    side: &'static str,
    span: Option<&'a [NodeLabel]>,
) -> Result<&'a [NodeLabel], CostError> {
    let span = span.ok_or(CostError::MissingLabel { kind, side })?;
    if span.len() < 2 {
        return Err(CostError::SpanTooShort { len: span.len() });
    }
    Ok(span)
}

/// True iff the two labels carry the same case-folded comparison key.
/// This is the equality predicate that separates match from exchange;
/// synonymy is deliberately not enough.
pub fn labels_match(x: &NodeLabel, y: &NodeLabel) -> bool {
    x.key.eq_ignore_ascii_case(&y.key) || x.folded_key() == y.folded_key()
}

/// True iff `x` can stand in for `y`: identical keys, or `y` reachable
/// from `x` through the lexicon's synonym/hypernym closure.
pub fn subsumes(x: &NodeLabel, y: &NodeLabel, lexicon: &Lexicon) -> bool {
    labels_match(x, y) || lexicon.subsumes_keys(&x.key, &y.key)
}

/// A cost schedule bound to its lexicon. Queries are read-only and
/// deterministic.
#[derive(Debug, Clone, Default)]
pub struct CostModel {
    pub config: CostConfig,
    pub lexicon: Lexicon,
}

impl CostModel {
    pub fn new(config: CostConfig, lexicon: Lexicon) -> Self {
        CostModel { config, lexicon }
    }

    pub fn unit() -> Self {
        CostModel::new(CostConfig::unit(), Lexicon::empty())
    }

    pub fn illustration() -> Self {
        CostModel::new(CostConfig::illustration(), Lexicon::empty())
    }

    pub fn entailment(lexicon: Lexicon) -> Self {
        CostModel::new(CostConfig::entailment(), lexicon)
    }

    pub fn labels_match(&self, x: &NodeLabel, y: &NodeLabel) -> bool {
        labels_match(x, y)
    }

    pub fn subsumes(&self, x: &NodeLabel, y: &NodeLabel) -> bool {
        subsumes(x, y, &self.lexicon)
    }

    fn is_stopword(&self, label: &NodeLabel) -> bool {
        self.lexicon.is_stopword(&label.surface)
    }

    /// Cost of deleting a single node.
    pub fn delete_cost(&self, x: &NodeLabel) -> f64 {
        match self.config.kind {
            ModelKind::Unit | ModelKind::Illustration => 1.0,
            ModelKind::Entailment => {
                if self.is_stopword(x) {
                    self.config.stopword_delete
                } else {
                    self.config.word_delete
                }
            }
        }
    }

    /// Cost of inserting a single node.
    pub fn insert_cost(&self, y: &NodeLabel) -> f64 {
        match self.config.kind {
            ModelKind::Unit | ModelKind::Illustration => 1.0,
            ModelKind::Entailment => {
                if self.is_stopword(y) {
                    self.config.stopword_insert
                } else {
                    self.config.word_insert
                }
            }
        }
    }

    /// Cost of exchanging node `x` for node `y`. The entailment rules are
    /// evaluated top to bottom: subsumption first, so a subsumed stop word
    /// costs 0, not 5.
    pub fn exchange_cost(&self, x: &NodeLabel, y: &NodeLabel) -> f64 {
        match self.config.kind {
            ModelKind::Unit | ModelKind::Illustration => {
                if labels_match(x, y) {
                    0.0
                } else {
                    1.0
                }
            }
            ModelKind::Entailment => {
                if self.subsumes(x, y) {
                    self.config.subsumed_exchange
                } else if self.is_stopword(x) {
                    self.config.stopword_exchange
                } else if self.subsumes(y, x) || self.lexicon.are_antonyms(&x.key, &y.key) {
                    self.config.reverse_or_antonym_exchange
                } else {
                    self.config.default_exchange
                }
            }
        }
    }

    /// Match cost is 0 in every model.
    pub fn match_cost(&self) -> f64 {
        0.0
    }

    /// Single-node cost dispatched on the operation kind. `x` is the
    /// source-tree label (absent for inserts), `y` the target-tree label
    /// (absent for deletes).
    pub fn node_cost(
        &self,
        kind: EditKind,
        x: Option<&NodeLabel>,
        y: Option<&NodeLabel>,
    ) -> Result<f64, CostError> {
        match kind {
            EditKind::Delete => Ok(self.delete_cost(require_label(kind, "source", x)?)),
            EditKind::Insert => Ok(self.insert_cost(require_label(kind, "target", y)?)),
            EditKind::Exchange => Ok(self.exchange_cost(
                require_label(kind, "source", x)?,
                require_label(kind, "target", y)?,
            )),
            EditKind::Match => {
                require_label(kind, "source", x)?;
                require_label(kind, "target", y)?;
                Ok(self.match_cost())
            }
        }
    }

    fn identical_key_spans(xs: &[NodeLabel], ys: &[NodeLabel]) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| labels_match(x, y))
    }

    /// Cost of one grouped subtree operation over spans of two or more
    /// nodes. `xs`/`ys` follow the same source/target convention as
    /// [`CostModel::node_cost`].
    pub fn subtree_cost(
        &self,
        kind: EditKind,
        xs: Option<&[NodeLabel]>,
        ys: Option<&[NodeLabel]>,
    ) -> Result<f64, CostError> {
        let part_sum = |kind: EditKind, xs: &[NodeLabel], ys: &[NodeLabel]| -> f64 {
            match kind {
                EditKind::Delete => xs.iter().map(|x| self.delete_cost(x)).sum(),
                EditKind::Insert => ys.iter().map(|y| self.insert_cost(y)).sum(),
                EditKind::Exchange => xs
                    .iter()
                    .zip(ys)
                    .map(|(x, y)| self.exchange_cost(x, y))
                    .sum(),
                EditKind::Match => 0.0,
            }
        };

        let (xs, ys): (&[NodeLabel], &[NodeLabel]) = match kind {
            EditKind::Delete => (require_span(kind, "source", xs)?, &[]),
            EditKind::Insert => (&[], require_span(kind, "target", ys)?),
            EditKind::Exchange | EditKind::Match => {
                let xs = require_span(kind, "source", xs)?;
                let ys = require_span(kind, "target", ys)?;
                if xs.len() != ys.len() {
                    return Err(CostError::SpanLengthMismatch {
                        left: xs.len(),
                        right: ys.len(),
                    });
                }
                (xs, ys)
            }
        };

        Ok(match self.config.kind {
            ModelKind::Unit => part_sum(kind, xs, ys),
            ModelKind::Illustration => part_sum(kind, xs, ys) / 2.0,
            ModelKind::Entailment => match kind {
                EditKind::Delete => self.config.subtree_delete,
                EditKind::Insert => self.config.insert_multiplier * part_sum(kind, xs, ys),
                EditKind::Exchange | EditKind::Match => {
                    if Self::identical_key_spans(xs, ys) {
                        0.0
                    } else {
                        part_sum(EditKind::Exchange, xs, ys) / self.config.exchange_divisor
                    }
                }
            },
        })
    }
}
