//! Tree edit distance with edit-sequence tracking.
//!
//! This is the keyroot dynamic program over postorder-numbered trees:
//! a permanent table `dist[i][j]` holds the distance between the subtrees
//! rooted at i and j, and for each pair of keyroots a temporary forest
//! table is filled over the node ranges below them. Alongside every cost
//! cell we keep the operation sequence that produced it, so the result is
//! a full [`EditScript`], not just a number. The forest tables are
//! reallocated for each keyroot pair; the tree tables persist.

use thiserror::Error;

use crate::cost::{CostModel, EditKind};
use crate::tree::OrderedTree;

/// One node-level edit operation. `src` is a postorder index into the
/// source tree (absent for inserts), `dst` into the target tree (absent
/// for deletes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditOp {
    pub kind: EditKind,
    pub src: Option<usize>,
    pub dst: Option<usize>,
}

impl EditOp {
    pub fn delete(src: usize) -> Self {
        EditOp {
            kind: EditKind::Delete,
            src: Some(src),
            dst: None,
        }
    }

    pub fn insert(dst: usize) -> Self {
        EditOp {
            kind: EditKind::Insert,
            src: None,
            dst: Some(dst),
        }
    }

    pub fn exchange(src: usize, dst: usize) -> Self {
        EditOp {
            kind: EditKind::Exchange,
            src: Some(src),
            dst: Some(dst),
        }
    }

    pub fn matched(src: usize, dst: usize) -> Self {
        EditOp {
            kind: EditKind::Match,
            src: Some(src),
            dst: Some(dst),
        }
    }
}

/// Minimum-cost sequence of node edits transforming one tree into another.
///
/// Source indices appear in strictly ascending postorder across the ops
/// that carry them, and cover the source tree exactly; likewise target
/// indices.
#[derive(Debug, Clone, PartialEq)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
    pub total_cost: f64,
}

impl EditScript {
    /// Operation symbols in order, e.g. `dddmmiiimm`.
    pub fn kinds_string(&self) -> String {
        self.ops.iter().map(|op| op.kind.symbol()).collect()
    }
}

/// Side-by-side rendering of the two postorder sequences: `None` is a gap.
/// `s1` has gaps exactly at insert positions, `s2` at delete positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub s1: Vec<Option<usize>>,
    pub s2: Vec<Option<usize>>,
}

impl Alignment {
    pub fn len(&self) -> usize {
        self.s1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s1.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("op {pos} has the wrong index shape for its kind")]
    OpShape { pos: usize },
    #[error("op {pos}: {side} index {index} out of order or out of range")]
    IndexOrder {
        pos: usize,
        side: &'static str,
        index: usize,
    },
    #[error("script does not cover the {side} tree exactly ({covered} of {expected} nodes)")]
    Coverage {
        side: &'static str,
        covered: usize,
        expected: usize,
    },
    #[error("op {pos} is a match between labels with different keys")]
    MatchLabelMismatch { pos: usize },
}

/// Check a script against the trees it claims to transform: index shapes,
/// strictly ascending full coverage on both sides, and key equality at
/// match positions.
pub fn validate_script(
    t1: &OrderedTree,
    t2: &OrderedTree,
    script: &EditScript,
) -> Result<(), ScriptError> {
    let mut next_src = 1usize;
    let mut next_dst = 1usize;
    for (pos, op) in script.ops.iter().enumerate() {
        let shape_ok = match op.kind {
            EditKind::Delete => op.src.is_some() && op.dst.is_none(),
            EditKind::Insert => op.src.is_none() && op.dst.is_some(),
            EditKind::Exchange | EditKind::Match => op.src.is_some() && op.dst.is_some(),
        };
        if !shape_ok {
            return Err(ScriptError::OpShape { pos });
        }
        if let Some(src) = op.src {
            if src != next_src || src > t1.len() {
                return Err(ScriptError::IndexOrder {
                    pos,
                    side: "source",
                    index: src,
                });
            }
            next_src += 1;
        }
        if let Some(dst) = op.dst {
            if dst != next_dst || dst > t2.len() {
                return Err(ScriptError::IndexOrder {
                    pos,
                    side: "target",
                    index: dst,
                });
            }
            next_dst += 1;
        }
        if op.kind == EditKind::Match
            && !crate::cost::labels_match(t1.label(op.src.unwrap()), t2.label(op.dst.unwrap()))
        {
            return Err(ScriptError::MatchLabelMismatch { pos });
        }
    }
    if next_src != t1.len() + 1 {
        return Err(ScriptError::Coverage {
            side: "source",
            covered: next_src - 1,
            expected: t1.len(),
        });
    }
    if next_dst != t2.len() + 1 {
        return Err(ScriptError::Coverage {
            side: "target",
            covered: next_dst - 1,
            expected: t2.len(),
        });
    }
    Ok(())
}

/// Lay the script out as two gap-padded postorder rows.
pub fn build_alignment(
    t1: &OrderedTree,
    t2: &OrderedTree,
    script: &EditScript,
) -> Result<Alignment, ScriptError> {
    validate_script(t1, t2, script)?;
    let mut s1 = Vec::with_capacity(script.ops.len());
    let mut s2 = Vec::with_capacity(script.ops.len());
    for op in &script.ops {
        s1.push(op.src);
        s2.push(op.dst);
    }
    Ok(Alignment { s1, s2 })
}

/// A cost cell plus the operation sequence that reached it.
#[derive(Debug, Clone, Default)]
struct Cell {
    cost: f64,
    ops: Vec<EditOp>,
}

/// Temporary forest table for one keyroot pair. Row r corresponds to the
/// source prefix ending at node `l1 + r - 1` (row 0 is the empty forest),
/// and likewise for columns.
struct ForestTable {
    cells: Vec<Cell>,
    cols: usize,
}

impl ForestTable {
    fn new(rows: usize, cols: usize) -> Self {
        ForestTable {
            cells: vec![Cell::default(); rows * cols],
            cols,
        }
    }

    fn get(&self, r: usize, c: usize) -> &Cell {
        &self.cells[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, cell: Cell) {
        self.cells[r * self.cols + c] = cell;
    }
}

fn extend(base: &Cell, add_cost: f64, op: EditOp) -> Cell {
    let mut ops = Vec::with_capacity(base.ops.len() + 1);
    ops.extend_from_slice(&base.ops);
    ops.push(op);
    Cell {
        cost: base.cost + add_cost,
        ops,
    }
}

fn concat(base: &Cell, tail: &Cell) -> Cell {
    let mut ops = Vec::with_capacity(base.ops.len() + tail.ops.len());
    ops.extend_from_slice(&base.ops);
    ops.extend_from_slice(&tail.ops);
    Cell {
        cost: base.cost + tail.cost,
        ops,
    }
}

/// Minimum-cost edit script between two trees.
///
/// Ties are broken deterministically: the diagonal (match/exchange) wins
/// over delete, delete over insert. Only the cost is canonical; which of
/// several optimal scripts comes back depends on that rule.
pub fn ted(t1: &OrderedTree, t2: &OrderedTree, model: &CostModel) -> EditScript {
    let m = t1.len();
    let n = t2.len();
    let mut dist: Vec<Vec<Cell>> = vec![vec![Cell::default(); n + 1]; m + 1];

    for &x in t1.keyroots().indices() {
        for &y in t2.keyroots().indices() {
            forest_pass(t1, t2, x, y, model, &mut dist);
        }
    }

    let root = std::mem::take(&mut dist[m][n]);
    EditScript {
        ops: root.ops,
        total_cost: root.cost,
    }
}

fn forest_pass(
    t1: &OrderedTree,
    t2: &OrderedTree,
    x: usize,
    y: usize,
    model: &CostModel,
    dist: &mut [Vec<Cell>],
) {
    let l1 = t1.lld(x);
    let l2 = t2.lld(y);
    let rows = x - l1 + 2;
    let cols = y - l2 + 2;
    let mut fd = ForestTable::new(rows, cols);

    for r in 1..rows {
        let i = l1 + r - 1;
        let cell = extend(
            fd.get(r - 1, 0),
            model.delete_cost(t1.label(i)),
            EditOp::delete(i),
        );
        fd.set(r, 0, cell);
    }
    for c in 1..cols {
        let j = l2 + c - 1;
        let cell = extend(
            fd.get(0, c - 1),
            model.insert_cost(t2.label(j)),
            EditOp::insert(j),
        );
        fd.set(0, c, cell);
    }

    for r in 1..rows {
        let i = l1 + r - 1;
        for c in 1..cols {
            let j = l2 + c - 1;
            let del = extend(
                fd.get(r - 1, c),
                model.delete_cost(t1.label(i)),
                EditOp::delete(i),
            );
            let ins = extend(
                fd.get(r, c - 1),
                model.insert_cost(t2.label(j)),
                EditOp::insert(j),
            );
            let both_trees = t1.lld(i) == l1 && t2.lld(j) == l2;
            let diag = if both_trees {
                let (kind_op, cost) = if model.labels_match(t1.label(i), t2.label(j)) {
                    (EditOp::matched(i, j), model.match_cost())
                } else {
                    (
                        EditOp::exchange(i, j),
                        model.exchange_cost(t1.label(i), t2.label(j)),
                    )
                };
                extend(fd.get(r - 1, c - 1), cost, kind_op)
            } else {
                // Jump over the whole subtree pair rooted at (i, j), whose
                // script is already in the permanent table.
                let pr = t1.lld(i) - l1;
                let pc = t2.lld(j) - l2;
                concat(fd.get(pr, pc), &dist[i][j])
            };

            // Preference on ties: diagonal, then delete, then insert.
            let mut best = diag;
            if del.cost < best.cost {
                best = del;
            }
            if ins.cost < best.cost {
                best = ins;
            }
            if both_trees {
                dist[i][j] = best.clone();
            }
            fd.set(r, c, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::parse_bracket;
    use crate::cost::{CostModel, LexiconBuilder};

    fn fig2_t1() -> OrderedTree {
        parse_bracket("a(b(e,f),c(g),d)").unwrap()
    }

    fn fig2_t2() -> OrderedTree {
        parse_bracket("a(c(g),d(x(y,z)))").unwrap()
    }

    /// The known optimal script for the two example trees under unit
    /// costs, spelled out with its node indices.
    pub(crate) fn fig2_script() -> EditScript {
        EditScript {
            ops: vec![
                EditOp::delete(1),
                EditOp::delete(2),
                EditOp::delete(3),
                EditOp::matched(4, 1),
                EditOp::matched(5, 2),
                EditOp::insert(3),
                EditOp::insert(4),
                EditOp::insert(5),
                EditOp::matched(6, 6),
                EditOp::matched(7, 7),
            ],
            total_cost: 6.0,
        }
    }

    #[test]
    fn distance_between_example_trees_is_6() {
        let script = ted(&fig2_t1(), &fig2_t2(), &CostModel::unit());
        assert_eq!(script.total_cost, 6.0);
        validate_script(&fig2_t1(), &fig2_t2(), &script).unwrap();
    }

    #[test]
    fn example_tree_script_is_the_expected_one() {
        // With diagonal-then-delete-then-insert tie-breaking the DP lands
        // on the same optimal script the worked example uses.
        let script = ted(&fig2_t1(), &fig2_t2(), &CostModel::unit());
        assert_eq!(script.kinds_string(), "dddmmiiimm");
    }

    #[test]
    fn identity_script_is_all_matches() {
        let t = fig2_t1();
        let script = ted(&t, &t, &CostModel::unit());
        assert_eq!(script.total_cost, 0.0);
        assert!(script.ops.iter().all(|op| op.kind == EditKind::Match));
    }

    #[test]
    fn single_exchange() {
        let a = parse_bracket("a").unwrap();
        let b = parse_bracket("b").unwrap();
        let script = ted(&a, &b, &CostModel::unit());
        assert_eq!(script.total_cost, 1.0);
        assert_eq!(script.kinds_string(), "x");
    }

    #[test]
    fn forced_insert() {
        let a = parse_bracket("a").unwrap();
        let ab = parse_bracket("a(b)").unwrap();
        let script = ted(&a, &ab, &CostModel::unit());
        assert_eq!(script.total_cost, 1.0);
    }

    #[test]
    fn synonym_pair_is_an_exchange_not_a_match() {
        let mut b = LexiconBuilder::new();
        b.add_relation("car", crate::cost::RelationKind::Synonym, "automobile");
        let model = CostModel::entailment(b.build());
        let t1 = parse_bracket("car").unwrap();
        let t2 = parse_bracket("automobile").unwrap();
        let script = ted(&t1, &t2, &model);
        assert_eq!(script.kinds_string(), "x");
        assert_eq!(script.total_cost, 0.0);
    }

    #[test]
    fn alignment_of_example_script_places_gaps_per_op_kind() {
        let t1 = fig2_t1();
        let t2 = fig2_t2();
        let align = build_alignment(&t1, &t2, &fig2_script()).unwrap();
        let row1: Vec<&str> = align
            .s1
            .iter()
            .map(|slot| slot.map_or("_", |i| t1.label(i).surface.as_str()))
            .collect();
        let row2: Vec<&str> = align
            .s2
            .iter()
            .map(|slot| slot.map_or("_", |j| t2.label(j).surface.as_str()))
            .collect();
        assert_eq!(row1, ["e", "f", "b", "g", "c", "_", "_", "_", "d", "a"]);
        assert_eq!(row2, ["_", "_", "_", "g", "c", "y", "z", "x", "d", "a"]);
    }

    #[test]
    fn alignment_of_identity_script_has_no_gaps() {
        let t = fig2_t1();
        let script = ted(&t, &t, &CostModel::unit());
        let align = build_alignment(&t, &t, &script).unwrap();
        assert!(align.s1.iter().all(Option::is_some));
        assert!(align.s2.iter().all(Option::is_some));
    }

    #[test]
    fn alignment_of_single_exchange() {
        let a = parse_bracket("a").unwrap();
        let b = parse_bracket("b").unwrap();
        let script = EditScript {
            ops: vec![EditOp::exchange(1, 1)],
            total_cost: 1.0,
        };
        let align = build_alignment(&a, &b, &script).unwrap();
        assert_eq!(align.s1, vec![Some(1)]);
        assert_eq!(align.s2, vec![Some(1)]);
    }

    #[test]
    fn validate_rejects_out_of_order_and_partial_scripts() {
        let t1 = fig2_t1();
        let t2 = fig2_t2();
        let mut script = fig2_script();
        script.ops.swap(0, 1);
        assert!(matches!(
            validate_script(&t1, &t2, &script),
            Err(ScriptError::IndexOrder { .. })
        ));

        let mut script = fig2_script();
        script.ops.pop();
        assert!(matches!(
            validate_script(&t1, &t2, &script),
            Err(ScriptError::Coverage { .. })
        ));
    }

    #[test]
    fn script_cost_is_additive_over_ops() {
        let t1 = fig2_t1();
        let t2 = fig2_t2();
        let model = CostModel::unit();
        let script = ted(&t1, &t2, &model);
        let recomputed: f64 = script
            .ops
            .iter()
            .map(|op| {
                model
                    .node_cost(
                        op.kind,
                        op.src.map(|i| t1.label(i)),
                        op.dst.map(|j| t2.label(j)),
                    )
                    .unwrap()
            })
            .sum();
        assert_eq!(script.total_cost, recomputed);
    }
}
