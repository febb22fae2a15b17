//! Collapse runs of identical node edits into subtree operations.
//!
//! A node-level script is rewritten run by run: within each maximal run of
//! one operation kind, the scan looks for the longest suffix whose aligned
//! node range is exactly a subtree (checked on the source tree for
//! deletes, the target tree for inserts, and both trees for exchanges and
//! matches). A qualifying suffix of two or more nodes becomes a single
//! subtree operation; the scan then continues leftward through what is
//! left of the run. In the marker string every collapsed position keeps
//! `+` except the last, which keeps the operation symbol, so `dddmmiiimm`
//! over the worked example trees becomes `++d+m++imm`.

use thiserror::Error;

use crate::cost::{CostError, CostModel, EditKind};
use crate::ted::{build_alignment, ted, Alignment, EditScript, ScriptError};
use crate::tree::OrderedTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Node,
    Subtree,
}

/// One grouped operation. Spans are inclusive postorder ranges; subtree
/// granularity implies a span of at least two nodes that passes the
/// subtree test on its tree.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedOp {
    pub kind: EditKind,
    pub granularity: Granularity,
    pub src_span: Option<(usize, usize)>,
    pub dst_span: Option<(usize, usize)>,
    pub cost: f64,
}

impl GroupedOp {
    /// Number of script positions this op covers.
    pub fn width(&self) -> usize {
        let span = self.src_span.or(self.dst_span).expect("op carries a span");
        span.1 - span.0 + 1
    }
}

/// A node script after subtree collapsing. `marker_string` has the same
/// length as the original script, with `+` at every non-final position of
/// each collapsed run.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedScript {
    pub ops: Vec<GroupedOp>,
    pub marker_string: String,
    pub total_cost: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("alignment row {row} disagrees with the script at position {pos}")]
    AlignmentMismatch { row: &'static str, pos: usize },
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// Group a validated script. Costs are left at zero; see
/// [`assign_group_costs`].
pub fn group_script(
    script: &EditScript,
    align: &Alignment,
    t1: &OrderedTree,
    t2: &OrderedTree,
) -> Result<GroupedScript, GroupError> {
    group_with_counter(script, align, t1, t2, &mut 0)
}

/// Same as [`group_script`], returning the number of scan steps the pass
/// performed. The count grows at worst quadratically in the script length.
pub fn group_script_with_stats(
    script: &EditScript,
    align: &Alignment,
    t1: &OrderedTree,
    t2: &OrderedTree,
) -> Result<(GroupedScript, u64), GroupError> {
    let mut steps = 0u64;
    let grouped = group_with_counter(script, align, t1, t2, &mut steps)?;
    Ok((grouped, steps))
}

fn group_with_counter(
    script: &EditScript,
    align: &Alignment,
    t1: &OrderedTree,
    t2: &OrderedTree,
    steps: &mut u64,
) -> Result<GroupedScript, GroupError> {
    crate::ted::validate_script(t1, t2, script)?;
    if align.len() != script.ops.len() {
        return Err(GroupError::AlignmentMismatch {
            row: "length",
            pos: align.len().min(script.ops.len()),
        });
    }
    for (pos, op) in script.ops.iter().enumerate() {
        if align.s1[pos] != op.src {
            return Err(GroupError::AlignmentMismatch { row: "s1", pos });
        }
        if align.s2[pos] != op.dst {
            return Err(GroupError::AlignmentMismatch { row: "s2", pos });
        }
    }

    let ops = &script.ops;
    let len = ops.len();
    let mut marker: Vec<char> = ops.iter().map(|op| op.kind.symbol()).collect();
    let mut grouped: Vec<GroupedOp> = Vec::new();

    // Does the script segment [f, e] cover subtree span(s) of the
    // appropriate tree(s)? Node indices inside one run are consecutive,
    // so the endpoints determine the range.
    let span_ok = |kind: EditKind, f: usize, e: usize| -> bool {
        let src_ok = || t1.is_subtree_span(ops[f].src.unwrap(), ops[e].src.unwrap());
        let dst_ok = || t2.is_subtree_span(ops[f].dst.unwrap(), ops[e].dst.unwrap());
        match kind {
            EditKind::Delete => src_ok(),
            EditKind::Insert => dst_ok(),
            EditKind::Exchange | EditKind::Match => src_ok() && dst_ok(),
        }
    };

    let mut run_start = 0;
    while run_start < len {
        let kind = ops[run_start].kind;
        let mut run_end = run_start;
        while run_end + 1 < len && ops[run_end + 1].kind == kind {
            run_end += 1;
            *steps += 1;
        }

        // Scan the run right to left, collapsing the longest qualifying
        // suffix each time.
        let mut emitted_rev: Vec<GroupedOp> = Vec::new();
        let mut cursor = Some(run_end);
        while let Some(end) = cursor {
            let mut collapsed_from = None;
            for f in run_start..end {
                *steps += 1;
                if span_ok(kind, f, end) {
                    collapsed_from = Some(f);
                    break;
                }
            }
            cursor = match collapsed_from {
                Some(f) => {
                    for slot in marker.iter_mut().take(end).skip(f) {
                        *slot = '+';
                    }
                    emitted_rev.push(GroupedOp {
                        kind,
                        granularity: Granularity::Subtree,
                        src_span: ops[f].src.map(|lo| (lo, ops[end].src.unwrap())),
                        dst_span: ops[f].dst.map(|lo| (lo, ops[end].dst.unwrap())),
                        cost: 0.0,
                    });
                    f.checked_sub(1)
                }
                None => {
                    emitted_rev.push(GroupedOp {
                        kind,
                        granularity: Granularity::Node,
                        src_span: ops[end].src.map(|i| (i, i)),
                        dst_span: ops[end].dst.map(|j| (j, j)),
                        cost: 0.0,
                    });
                    end.checked_sub(1)
                }
            }
            .filter(|&e| e >= run_start);
        }
        grouped.extend(emitted_rev.into_iter().rev());
        run_start = run_end + 1;
    }

    Ok(GroupedScript {
        ops: grouped,
        marker_string: marker.into_iter().collect(),
        total_cost: 0.0,
    })
}

/// Price a grouped script: node-granularity ops by the single-node rules,
/// subtree-granularity ops by the subtree rules, summed into `total_cost`.
pub fn assign_group_costs(
    mut grouped: GroupedScript,
    t1: &OrderedTree,
    t2: &OrderedTree,
    model: &CostModel,
) -> Result<GroupedScript, CostError> {
    let mut total = 0.0;
    for op in &mut grouped.ops {
        op.cost = match op.granularity {
            Granularity::Node => model.node_cost(
                op.kind,
                op.src_span.map(|(i, _)| t1.label(i)),
                op.dst_span.map(|(j, _)| t2.label(j)),
            )?,
            Granularity::Subtree => model.subtree_cost(
                op.kind,
                op.src_span.map(|(lo, hi)| t1.label_span(lo, hi)),
                op.dst_span.map(|(lo, hi)| t2.label_span(lo, hi)),
            )?,
        };
        total += op.cost;
    }
    grouped.total_cost = total;
    Ok(grouped)
}

/// Full pipeline: optimal node script, alignment, grouping, grouped costs.
pub fn ted_st(
    t1: &OrderedTree,
    t2: &OrderedTree,
    model: &CostModel,
) -> Result<GroupedScript, GroupError> {
    let script = ted(t1, t2, model);
    let align = build_alignment(t1, t2, &script)?;
    let grouped = group_script(&script, &align, t1, t2)?;
    Ok(assign_group_costs(grouped, t1, t2, model)?)
}
