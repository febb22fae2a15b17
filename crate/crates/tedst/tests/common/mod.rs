//! Shared helpers for the integration suites: seeded random tree
//! generation and script verification that stays independent of the
//! distance implementation.

use rand::Rng;

use tedst::cost::{CostModel, EditKind};
use tedst::ted::EditScript;
use tedst::tree::{NodeLabel, OrderedTree};

/// Random ordered tree with `n` nodes and labels drawn from `alphabet`.
/// Node 0 is the root; every later node attaches to an earlier one, which
/// realizes every ordered tree shape under preorder numbering.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, alphabet: &[&str]) -> OrderedTree {
    let mut parents = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        parents.push(if i == 0 {
            None
        } else {
            Some(rng.gen_range(0..i))
        });
        labels.push(NodeLabel::new(alphabet[rng.gen_range(0..alphabet.len())]));
    }
    OrderedTree::build(&parents, labels).expect("generated tree is well-formed")
}

/// Per-op cost recomputation straight from the cost schedule, bypassing
/// the DP's bookkeeping.
pub fn recompute_script_cost(
    t1: &OrderedTree,
    t2: &OrderedTree,
    script: &EditScript,
    model: &CostModel,
) -> f64 {
    script
        .ops
        .iter()
        .map(|op| {
            model
                .node_cost(
                    op.kind,
                    op.src.map(|i| t1.label(i)),
                    op.dst.map(|j| t2.label(j)),
                )
                .expect("ops carry the labels their kind requires")
        })
        .sum()
}

fn is_ancestor(t: &OrderedTree, anc: usize, node: usize) -> bool {
    node < anc && node >= t.lld(anc)
}

/// Assert that replaying `script` on `t1` yields a tree label- and
/// order-isomorphic to `t2`.
///
/// A script whose operations cover both trees exactly, in ascending
/// postorder, whose match/exchange pairs preserve the ancestor relation
/// in both directions, and whose match pairs carry equal keys, rebuilds
/// precisely the target tree: deletes drop their nodes, the surviving
/// nodes land at their paired target positions, and inserts fill the
/// rest. The rebuilt label sequence is checked against the target's.
pub fn assert_script_replays(t1: &OrderedTree, t2: &OrderedTree, script: &EditScript) {
    tedst::ted::validate_script(t1, t2, script).expect("script is well-formed for the tree pair");

    let mapped: Vec<(usize, usize)> = script
        .ops
        .iter()
        .filter(|op| matches!(op.kind, EditKind::Match | EditKind::Exchange))
        .map(|op| (op.src.unwrap(), op.dst.unwrap()))
        .collect();
    for (a, &(i1, j1)) in mapped.iter().enumerate() {
        for &(i2, j2) in &mapped[a + 1..] {
            assert_eq!(
                is_ancestor(t1, i2, i1),
                is_ancestor(t2, j2, j1),
                "mapping breaks the ancestor relation: ({i1},{j1}) vs ({i2},{j2})"
            );
        }
    }

    // Rebuild the target label sequence from script provenance: matched
    // positions keep the source label, everything else takes the target
    // label. Matched keys must already agree, so the rebuilt sequence has
    // to be key-identical to the target's postorder labels.
    let mut rebuilt: Vec<Option<&NodeLabel>> = vec![None; t2.len() + 1];
    for op in &script.ops {
        match op.kind {
            EditKind::Delete => {}
            EditKind::Match => rebuilt[op.dst.unwrap()] = Some(t1.label(op.src.unwrap())),
            EditKind::Insert | EditKind::Exchange => {
                rebuilt[op.dst.unwrap()] = Some(t2.label(op.dst.unwrap()))
            }
        }
    }
    for (j, slot) in rebuilt.iter().enumerate().skip(1) {
        let produced = slot.expect("every target node is produced");
        assert_eq!(
            produced.folded_key(),
            t2.label(j).folded_key(),
            "node {j} of the rebuilt tree has the wrong label"
        );
    }
}
