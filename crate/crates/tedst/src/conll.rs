//! CoNLL dependency-tree reading and writing.
//!
//! Sentences are blocks of tab-separated token lines separated by blank
//! lines. The first eight columns are read (id, form, lemma, cpostag,
//! postag, feats, head, deprel); any further columns are ignored and `_`
//! marks an absent value. Head 0 designates the root.
//!
//! Pair files interleave premise and hypothesis blocks, each pair
//! introduced by a header line `# id=<text> gold=<yes|no>` and containing
//! exactly one tree per side.

use thiserror::Error;

use crate::entail::{Gold, PairRecord};
use crate::tree::{NodeLabel, OrderedTree, TreeError};

/// One CoNLL token line, retaining the eight leading columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConllToken {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub cpostag: String,
    pub postag: String,
    pub feats: String,
    /// Surface index of the head token; 0 for the root.
    pub head: usize,
    pub deprel: String,
}

impl ConllToken {
    /// Re-emit the retained columns, tab-separated.
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            self.form,
            self.lemma,
            self.cpostag,
            self.postag,
            self.feats,
            self.head,
            self.deprel
        )
    }

    fn parse(line: &str, lineno: usize) -> Result<ConllToken, ConllError> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 8 {
            return Err(ConllError::ColumnCount {
                line: lineno,
                got: cols.len(),
            });
        }
        let id = cols[0]
            .parse()
            .map_err(|_| ConllError::BadId { line: lineno })?;
        let head = cols[6]
            .parse()
            .map_err(|_| ConllError::BadHead { line: lineno })?;
        Ok(ConllToken {
            id,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            cpostag: cols[3].to_string(),
            postag: cols[4].to_string(),
            feats: cols[5].to_string(),
            head,
            deprel: cols[7].to_string(),
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConllError {
    #[error("line {line}: expected at least 8 tab-separated columns, got {got}")]
    ColumnCount { line: usize, got: usize },
    #[error("line {line}: token id is not a positive integer")]
    BadId { line: usize },
    #[error("line {line}: head is not a nonnegative integer")]
    BadHead { line: usize },
    #[error("line {line}: token ids must run 1..n consecutively")]
    NonConsecutiveIds { line: usize },
    #[error("line {line}: {source}")]
    Tree { line: usize, source: TreeError },
    #[error("line {line}: expected pair header `# id=<text> gold=<yes|no>`")]
    BadPairHeader { line: usize },
    #[error("pair `{id}` starting at line {line}: expected exactly 2 trees, found {found}")]
    PairBlockCount {
        id: String,
        line: usize,
        found: usize,
    },
    #[error("content at line {line} appears before any pair header")]
    MissingPairHeader { line: usize },
}

fn opt_col(value: &str) -> Option<String> {
    if value == "_" || value.is_empty() {
        None
    } else {
        Some(value.to_string())
    }
}

/// A sentence block plus the 1-based line number of its first token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<ConllToken>,
    pub start_line: usize,
}

impl Sentence {
    /// Build the dependency tree: labels keyed by lemma where present,
    /// children ordered by surface position.
    pub fn to_tree(&self) -> Result<OrderedTree, ConllError> {
        let n = self.tokens.len();
        let mut parents = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for tok in &self.tokens {
            parents.push(if tok.head == 0 {
                None
            } else {
                Some(tok.head - 1)
            });
            let mut label = match opt_col(&tok.lemma) {
                Some(lemma) => NodeLabel::with_key(tok.form.clone(), lemma),
                None => NodeLabel::new(tok.form.clone()),
            };
            label.tag = opt_col(&tok.postag).or_else(|| opt_col(&tok.cpostag));
            label.rel = opt_col(&tok.deprel);
            labels.push(label);
        }
        OrderedTree::build(&parents, labels).map_err(|source| {
            let offender = match source {
                TreeError::MultipleRoots(_, i)
                | TreeError::DanglingParent { index: i, .. }
                | TreeError::Cycle { index: i }
                | TreeError::EmptyLabel { index: i } => i,
                _ => 0,
            };
            ConllError::Tree {
                line: self.start_line + offender,
                source,
            }
        })
    }

    /// Re-emit the sentence, one token line per token.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for tok in &self.tokens {
            out.push_str(&tok.to_line());
            out.push('\n');
        }
        out
    }
}

/// Split text into sentence blocks. `#` comment lines are skipped.
pub fn parse_conll_sentences(text: &str) -> Result<Vec<Sentence>, ConllError> {
    let mut sentences = Vec::new();
    let mut current: Vec<ConllToken> = Vec::new();
    let mut start_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            if !current.is_empty() {
                sentences.push(Sentence {
                    tokens: std::mem::take(&mut current),
                    start_line,
                });
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let token = ConllToken::parse(line, lineno)?;
        if current.is_empty() {
            start_line = lineno;
        }
        if token.id != current.len() + 1 {
            return Err(ConllError::NonConsecutiveIds { line: lineno });
        }
        current.push(token);
    }
    if !current.is_empty() {
        sentences.push(Sentence {
            tokens: current,
            start_line,
        });
    }
    Ok(sentences)
}

/// Parse every sentence into a dependency tree.
pub fn parse_conll(text: &str) -> Result<Vec<OrderedTree>, ConllError> {
    parse_conll_sentences(text)?
        .iter()
        .map(Sentence::to_tree)
        .collect()
}

/// Parse a pair file: `# id=<text> gold=<yes|no>` followed by a premise
/// block and a hypothesis block. More or fewer than two blocks per header
/// is an error (multi-sentence sides are not supported).
pub fn parse_pairs(text: &str) -> Result<Vec<PairRecord>, ConllError> {
    struct RawPair {
        id: String,
        gold: Gold,
        line: usize,
        blocks: Vec<Sentence>,
    }

    let mut pairs: Vec<RawPair> = Vec::new();
    let mut current: Vec<ConllToken> = Vec::new();
    let mut start_line = 0;

    let flush = |current: &mut Vec<ConllToken>,
                 pairs: &mut Vec<RawPair>,
                 start_line: usize|
     -> Result<(), ConllError> {
        if current.is_empty() {
            return Ok(());
        }
        let sentence = Sentence {
            tokens: std::mem::take(current),
            start_line,
        };
        match pairs.last_mut() {
            Some(pair) => {
                pair.blocks.push(sentence);
                Ok(())
            }
            None => Err(ConllError::MissingPairHeader { line: start_line }),
        }
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            flush(&mut current, &mut pairs, start_line)?;
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            flush(&mut current, &mut pairs, start_line)?;
            let (id, gold) =
                parse_pair_header(rest).ok_or(ConllError::BadPairHeader { line: lineno })?;
            pairs.push(RawPair {
                id,
                gold,
                line: lineno,
                blocks: Vec::new(),
            });
            continue;
        }
        let token = ConllToken::parse(line, lineno)?;
        if current.is_empty() {
            start_line = lineno;
        }
        if token.id != current.len() + 1 {
            return Err(ConllError::NonConsecutiveIds { line: lineno });
        }
        current.push(token);
    }
    flush(&mut current, &mut pairs, start_line)?;

    pairs
        .into_iter()
        .map(|pair| {
            if pair.blocks.len() != 2 {
                return Err(ConllError::PairBlockCount {
                    id: pair.id,
                    line: pair.line,
                    found: pair.blocks.len(),
                });
            }
            Ok(PairRecord {
                id: pair.id,
                premise: pair.blocks[0].to_tree()?,
                hypothesis: pair.blocks[1].to_tree()?,
                gold: pair.gold,
            })
        })
        .collect()
}

fn parse_pair_header(rest: &str) -> Option<(String, Gold)> {
    let mut id = None;
    let mut gold = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("id", value)) => id = Some(value.to_string()),
            Some(("gold", value)) => gold = Some(value.parse().ok()?),
            _ => return None,
        }
    }
    Some((id?, gold?))
}
