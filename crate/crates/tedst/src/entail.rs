//! Premise-hypothesis classification from matching costs.
//!
//! Four scorers are available: bag-of-words overlap and token-level
//! Levenshtein distance as string baselines, and the two tree matchers
//! (plain node-level distance and the grouped subtree variant). Scores
//! become yes/no (or yes/unknown/no) decisions against one or two
//! thresholds, and decisions are rolled up into per-class precision,
//! recall, F-score and overall accuracy.

use serde::Serialize;
use thiserror::Error;

use crate::cost::{CostModel, Lexicon};
use crate::grouping::{ted_st, GroupError};
use crate::ted::ted;
use crate::tree::{NodeLabel, OrderedTree};

/// Gold annotation of a premise-hypothesis pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Gold {
    Yes,
    No,
}

impl std::fmt::Display for Gold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Gold::Yes => "yes",
            Gold::No => "no",
        })
    }
}

impl std::str::FromStr for Gold {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "yes" => Ok(Gold::Yes),
            "no" => Ok(Gold::No),
            _ => Err(()),
        }
    }
}

/// One instance: a premise tree, a hypothesis tree, and the gold label.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub id: String,
    pub premise: OrderedTree,
    pub hypothesis: OrderedTree,
    pub gold: Gold,
}

/// Which way a score argues for entailment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Entail when the score is small (edit costs).
    Distance,
    /// Entail when the score is large (overlap ratios).
    Similarity,
}

/// Decision thresholds. Binary mode reads `low` only; three-way mode uses
/// both, with `low <= high`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub low: f64,
    pub high: f64,
    pub polarity: Polarity,
}

impl Thresholds {
    pub fn binary(low: f64, polarity: Polarity) -> Self {
        Thresholds {
            low,
            high: low,
            polarity,
        }
    }

    pub fn three_way(low: f64, high: f64, polarity: Polarity) -> Self {
        debug_assert!(low <= high);
        Thresholds {
            low,
            high,
            polarity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Binary,
    ThreeWay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

/// A classified score. `method` names the scorer that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    pub value: Verdict,
    pub score: f64,
    pub method: String,
}

/// The available scorers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bow,
    Levenshtein,
    ZsTed,
    TedSt,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bow => "bow",
            Method::Levenshtein => "levenshtein",
            Method::ZsTed => "zs_ted",
            Method::TedSt => "ted_st",
        }
    }

    pub fn polarity(self) -> Polarity {
        match self {
            Method::Bow => Polarity::Similarity,
            _ => Polarity::Distance,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Share of hypothesis tokens covered by some premise token, in [0, 1].
///
/// Tokens are compared by key (or surface form when `use_lemma` is
/// false); a premise token also covers a hypothesis token it subsumes.
/// Each token on either side is consumed at most once, scanning left to
/// right through the postorder sequences.
pub fn bow_score(
    premise: &OrderedTree,
    hypothesis: &OrderedTree,
    lexicon: &Lexicon,
    use_lemma: bool,
) -> f64 {
    let p_tokens = premise.labels();
    let h_tokens = hypothesis.labels();
    let mut used = vec![false; p_tokens.len()];
    let mut matched = 0usize;
    for h in h_tokens {
        let hit = p_tokens.iter().enumerate().find(|(i, p)| {
            if used[*i] {
                return false;
            }
            let equal = if use_lemma {
                crate::cost::labels_match(p, h)
            } else {
                p.surface.to_lowercase() == h.surface.to_lowercase()
            };
            equal || crate::cost::subsumes(p, h, lexicon)
        });
        if let Some((i, _)) = hit {
            used[i] = true;
            matched += 1;
        }
    }
    matched as f64 / h_tokens.len() as f64
}

/// Plain token-sequence edit distance with unit insert/delete/substitute
/// and free moves on key equality.
pub fn token_levenshtein(p_tokens: &[NodeLabel], h_tokens: &[NodeLabel]) -> usize {
    let n = h_tokens.len();
    let mut row: Vec<usize> = (0..=n).collect();
    for p in p_tokens {
        let mut diag = row[0];
        row[0] += 1;
        for (j, h) in h_tokens.iter().enumerate() {
            let sub = diag + usize::from(!crate::cost::labels_match(p, h));
            diag = row[j + 1];
            row[j + 1] = sub.min(row[j] + 1).min(row[j + 1] + 1);
        }
    }
    row[n]
}

/// Threshold a score.
///
/// Distance polarity: yes below `low`; in three-way mode, no above `high`
/// and unknown in between. Similarity polarity mirrors the comparisons:
/// yes above `high` (above `low` in binary mode), no below `low`.
pub fn classify(score: f64, th: &Thresholds, mode: Mode) -> Decision {
    let value = match (th.polarity, mode) {
        (Polarity::Distance, Mode::Binary) => {
            if score < th.low {
                Verdict::Yes
            } else {
                Verdict::No
            }
        }
        (Polarity::Distance, Mode::ThreeWay) => {
            if score < th.low {
                Verdict::Yes
            } else if score > th.high {
                Verdict::No
            } else {
                Verdict::Unknown
            }
        }
        (Polarity::Similarity, Mode::Binary) => {
            if score > th.low {
                Verdict::Yes
            } else {
                Verdict::No
            }
        }
        (Polarity::Similarity, Mode::ThreeWay) => {
            if score > th.high {
                Verdict::Yes
            } else if score < th.low {
                Verdict::No
            } else {
                Verdict::Unknown
            }
        }
    };
    Decision {
        value,
        score,
        method: String::new(),
    }
}

/// Aggregated results. The yes-class metrics count an unknown prediction
/// as a non-yes prediction; unknown is never correct for accuracy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub total: usize,
    pub gold_yes_pred_yes: usize,
    pub gold_yes_pred_no: usize,
    pub gold_yes_pred_unknown: usize,
    pub gold_no_pred_yes: usize,
    pub gold_no_pred_no: usize,
    pub gold_no_pred_unknown: usize,
    pub p_yes: f64,
    pub r_yes: f64,
    pub f_yes: f64,
    pub p_no: f64,
    pub r_no: f64,
    pub f_no: f64,
    pub accuracy: f64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("got {decisions} decisions for {gold} gold labels")]
    LengthMismatch { decisions: usize, gold: usize },
    #[error("cannot evaluate an empty dataset")]
    Empty,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f_score(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Confusion counts and derived metrics for a decision sequence.
pub fn evaluate(decisions: &[Decision], gold: &[Gold]) -> Result<MetricsReport, EvalError> {
    if decisions.len() != gold.len() {
        return Err(EvalError::LengthMismatch {
            decisions: decisions.len(),
            gold: gold.len(),
        });
    }
    if decisions.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut counts = [[0usize; 3]; 2]; // [gold][pred], pred: yes/no/unknown
    for (d, g) in decisions.iter().zip(gold) {
        let gi = match g {
            Gold::Yes => 0,
            Gold::No => 1,
        };
        let pi = match d.value {
            Verdict::Yes => 0,
            Verdict::No => 1,
            Verdict::Unknown => 2,
        };
        counts[gi][pi] += 1;
    }
    let total = decisions.len();
    let p_yes = ratio(counts[0][0], counts[0][0] + counts[1][0]);
    let r_yes = ratio(counts[0][0], counts[0].iter().sum());
    let p_no = ratio(counts[1][1], counts[0][1] + counts[1][1]);
    let r_no = ratio(counts[1][1], counts[1].iter().sum());
    Ok(MetricsReport {
        total,
        gold_yes_pred_yes: counts[0][0],
        gold_yes_pred_no: counts[0][1],
        gold_yes_pred_unknown: counts[0][2],
        gold_no_pred_yes: counts[1][0],
        gold_no_pred_no: counts[1][1],
        gold_no_pred_unknown: counts[1][2],
        p_yes,
        r_yes,
        f_yes: f_score(p_yes, r_yes),
        p_no,
        r_no,
        f_no: f_score(p_no, r_no),
        accuracy: ratio(counts[0][0] + counts[1][1], total),
    })
}

/// Per-pair record emitted by the pipeline. `marker` carries the
/// operation string for tree methods (grouped marker for the subtree
/// variant) and is absent for the string baselines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResult {
    pub id: String,
    pub method: Method,
    pub score: f64,
    pub decision: Verdict,
    pub gold: Gold,
    pub marker: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub results: Vec<PairResult>,
    pub metrics: MetricsReport,
}

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Score one pair with the chosen method. Trees are always compared in
/// the premise-to-hypothesis direction. Returns the score and, for tree
/// methods, the operation or marker string.
pub fn pair_score(
    pair: &PairRecord,
    method: Method,
    model: &CostModel,
) -> Result<(f64, Option<String>), PipelineError> {
    Ok(match method {
        Method::Bow => (
            bow_score(&pair.premise, &pair.hypothesis, &model.lexicon, true),
            None,
        ),
        Method::Levenshtein => (
            token_levenshtein(pair.premise.labels(), pair.hypothesis.labels()) as f64,
            None,
        ),
        Method::ZsTed => {
            let script = ted(&pair.premise, &pair.hypothesis, model);
            (script.total_cost, Some(script.kinds_string()))
        }
        Method::TedSt => {
            let grouped = ted_st(&pair.premise, &pair.hypothesis, model)?;
            (grouped.total_cost, Some(grouped.marker_string))
        }
    })
}

/// Score, classify and evaluate a whole dataset.
pub fn run_pipeline(
    dataset: &[PairRecord],
    method: Method,
    model: &CostModel,
    th: &Thresholds,
    mode: Mode,
) -> Result<PipelineOutput, PipelineError> {
    if dataset.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    let mut results = Vec::with_capacity(dataset.len());
    let mut decisions = Vec::with_capacity(dataset.len());
    let mut gold = Vec::with_capacity(dataset.len());
    for pair in dataset {
        let (score, marker) = pair_score(pair, method, model)?;
        let mut decision = classify(score, th, mode);
        decision.method = method.name().to_string();
        results.push(PairResult {
            id: pair.id.clone(),
            method,
            score,
            decision: decision.value,
            gold: pair.gold,
            marker,
        });
        decisions.push(decision);
        gold.push(pair.gold);
    }
    let metrics = evaluate(&decisions, &gold)?;
    Ok(PipelineOutput { results, metrics })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Accuracy,
    FYes,
}

/// Thresholds chosen by [`tune_thresholds`], with the objective value they
/// achieved on the development data. `degenerate` flags a single-score
/// grid, where the returned thresholds are that score.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub thresholds: Thresholds,
    pub objective_value: f64,
    pub degenerate: bool,
}

#[derive(Debug, Error, PartialEq)]
pub enum TuneError {
    #[error("development set must contain both classes")]
    SingleClass,
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

fn objective_value(
    scores: &[f64],
    gold: &[Gold],
    th: &Thresholds,
    mode: Mode,
    objective: Objective,
) -> f64 {
    let decisions: Vec<Decision> = scores.iter().map(|&s| classify(s, th, mode)).collect();
    let report = evaluate(&decisions, gold).expect("same length by construction");
    match objective {
        Objective::Accuracy => report.accuracy,
        Objective::FYes => report.f_yes,
    }
}

/// Cut points around the distinct sorted score values: one below
/// everything, one between each adjacent pair, one above everything.
fn cut_points(distinct: &[f64]) -> Vec<f64> {
    let k = distinct.len();
    let mut cuts = Vec::with_capacity(k + 1);
    cuts.push(distinct[0] - 1.0);
    for w in distinct.windows(2) {
        cuts.push((w[0] + w[1]) / 2.0);
    }
    cuts.push(distinct[k - 1] + 1.0);
    cuts
}

/// Grid-search thresholds on a development set.
///
/// Candidates are the cut points between distinct observed scores; ties
/// on the objective resolve to the midpoint of the first maximal
/// contiguous run of optimal cuts (binary mode) or the first optimal
/// pair in cut order (three-way mode).
pub fn tune_thresholds(
    dev: &[PairRecord],
    method: Method,
    model: &CostModel,
    mode: Mode,
    objective: Objective,
) -> Result<TuneOutcome, TuneError> {
    if dev.is_empty()
        || dev.iter().all(|p| p.gold == Gold::Yes)
        || dev.iter().all(|p| p.gold == Gold::No)
    {
        return Err(TuneError::SingleClass);
    }
    let polarity = method.polarity();
    let gold: Vec<Gold> = dev.iter().map(|p| p.gold).collect();
    // Search in distance orientation; similarity scores are negated in
    // and the chosen cuts negated (and swapped) back out.
    let raw: Vec<f64> = dev
        .iter()
        .map(|p| pair_score(p, method, model).map(|(s, _)| s))
        .collect::<Result<_, _>>()?;
    let scores: Vec<f64> = match polarity {
        Polarity::Distance => raw.clone(),
        Polarity::Similarity => raw.iter().map(|s| -s).collect(),
    };

    let mut distinct = scores.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();

    let restore = |low: f64, high: f64| match polarity {
        Polarity::Distance => Thresholds {
            low,
            high,
            polarity,
        },
        Polarity::Similarity => Thresholds {
            low: -high,
            high: -low,
            polarity,
        },
    };

    if distinct.len() == 1 {
        let value = distinct[0];
        let thresholds = restore(value, value);
        return Ok(TuneOutcome {
            objective_value: objective_value(&raw, &gold, &thresholds, mode, objective),
            thresholds,
            degenerate: true,
        });
    }

    let cuts = cut_points(&distinct);
    let eval_dist = |low: f64, high: f64| {
        objective_value(
            &scores,
            &gold,
            &Thresholds {
                low,
                high,
                polarity: Polarity::Distance,
            },
            mode,
            objective,
        )
    };

    let (low, high, best) = match mode {
        Mode::Binary => {
            let values: Vec<f64> = cuts.iter().map(|&c| eval_dist(c, c)).collect();
            let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let run_start = values.iter().position(|&v| v == best).unwrap();
            let mut run_end = run_start;
            while run_end + 1 < values.len() && values[run_end + 1] == best {
                run_end += 1;
            }
            // Midpoint of the score interval the optimal run spans. The
            // outermost cuts stand in for the unbounded ends.
            let lo_edge = if run_start == 0 {
                cuts[0]
            } else {
                distinct[run_start - 1]
            };
            let hi_edge = if run_end == cuts.len() - 1 {
                cuts[cuts.len() - 1]
            } else {
                distinct[run_end]
            };
            let low = (lo_edge + hi_edge) / 2.0;
            (low, low, best)
        }
        Mode::ThreeWay => {
            let mut best = f64::NEG_INFINITY;
            let mut pick = (cuts[0], cuts[0]);
            for (ti, &tlow) in cuts.iter().enumerate() {
                for &thigh in &cuts[ti..] {
                    let v = eval_dist(tlow, thigh);
                    if v > best {
                        best = v;
                        pick = (tlow, thigh);
                    }
                }
            }
            (pick.0, pick.1, best)
        }
    };

    Ok(TuneOutcome {
        thresholds: restore(low, high),
        objective_value: best,
        degenerate: false,
    })
}
