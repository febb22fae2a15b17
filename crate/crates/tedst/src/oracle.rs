//! Brute-force tree edit distance for small inputs.
//!
//! Enumerates every valid mapping between the two node sets — one-to-one,
//! postorder-preserving and ancestor-preserving — and prices it directly:
//! mapped pairs cost 0 (equal keys) or the exchange cost, unmapped source
//! nodes cost a delete, unmapped target nodes an insert. This shares no
//! machinery with the dynamic program and exists to check it.

use thiserror::Error;

use crate::cost::CostModel;
use crate::tree::OrderedTree;

/// Default cap on `t1.len() + t2.len()`.
pub const DEFAULT_ORACLE_BOUND: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("trees have {nodes} nodes combined, above the brute-force bound of {bound}")]
    SizeBound { nodes: usize, bound: usize },
}

/// Exhaustive minimum mapping cost, capped at [`DEFAULT_ORACLE_BOUND`]
/// combined nodes.
pub fn brute_force_ted(
    t1: &OrderedTree,
    t2: &OrderedTree,
    model: &CostModel,
) -> Result<f64, OracleError> {
    brute_force_ted_bounded(t1, t2, model, DEFAULT_ORACLE_BOUND)
}

/// Exhaustive minimum mapping cost with an explicit size cap.
pub fn brute_force_ted_bounded(
    t1: &OrderedTree,
    t2: &OrderedTree,
    model: &CostModel,
    bound: usize,
) -> Result<f64, OracleError> {
    let nodes = t1.len() + t2.len();
    if nodes > bound {
        return Err(OracleError::SizeBound { nodes, bound });
    }
    let insert_total: f64 = (1..=t2.len()).map(|j| model.insert_cost(t2.label(j))).sum();
    let mut search = Search {
        t1,
        t2,
        model,
        insert_total,
        best: f64::INFINITY,
        pairs: Vec::with_capacity(t1.len()),
    };
    search.descend(1, 0.0, 0.0);
    Ok(search.best)
}

struct Search<'a> {
    t1: &'a OrderedTree,
    t2: &'a OrderedTree,
    model: &'a CostModel,
    insert_total: f64,
    best: f64,
    pairs: Vec<(usize, usize)>,
}

impl Search<'_> {
    /// Extend the mapping from source node `i` onward. `cost` covers the
    /// decided deletes and exchanges, `inserted` the insert costs already
    /// claimed by mapped target nodes.
    fn descend(&mut self, i: usize, cost: f64, inserted: f64) {
        if cost >= self.best {
            return;
        }
        if i > self.t1.len() {
            // Remaining target nodes are inserts.
            let total = cost + (self.insert_total - inserted);
            if total < self.best {
                self.best = total;
            }
            return;
        }

        // Map i to some target node after the last used one.
        let next_dst = self.pairs.last().map_or(1, |&(_, j)| j + 1);
        for j in next_dst..=self.t2.len() {
            if !self.consistent(i, j) {
                continue;
            }
            let xi = self.t1.label(i);
            let yj = self.t2.label(j);
            let pair_cost = if self.model.labels_match(xi, yj) {
                self.model.match_cost()
            } else {
                self.model.exchange_cost(xi, yj)
            };
            self.pairs.push((i, j));
            self.descend(
                i + 1,
                cost + pair_cost,
                inserted + self.model.insert_cost(yj),
            );
            self.pairs.pop();
        }

        // Or leave i unmapped (deleted).
        let del = self.model.delete_cost(self.t1.label(i));
        self.descend(i + 1, cost + del, inserted);
    }

    /// Ancestor preservation against every chosen pair. Earlier sources
    /// are all smaller than `i`, so "i' inside the subtree of i" is the
    /// only containment direction to mirror.
    fn consistent(&self, i: usize, j: usize) -> bool {
        let li = self.t1.lld(i);
        let lj = self.t2.lld(j);
        self.pairs.iter().all(|&(pi, pj)| (pi >= li) == (pj >= lj))
    }
}
