use std::collections::HashSet;

use super::{CycleCandidate, CycleSource};
use crate::error::{Error, Result};
use crate::matrix::{ReducedMatrix, Weights};
use crate::scalar::{Cost, Weight};

#[derive(Clone, Debug)]
pub struct CtreeOutcome<W> {
    /// Distinct cycles, each listed from the first root that reached it.
    pub cycles: Vec<CycleCandidate<W>>,
    pub nodes: u64,
    /// False when the node budget ran out first.
    pub complete: bool,
}

/// Depth-first trees of simple paths, one per root, keeping every prefix
/// below `bound` and recording each closure back to the root whose value
/// is below `bound`.
pub fn ctree_search<W: Weight>(
    r: &ReducedMatrix<W>,
    bound: W,
    node_budget: Option<u64>,
) -> Result<CtreeOutcome<W>> {
    if bound <= W::zero() {
        return Err(Error::InvalidArgument(format!(
            "cycle bound must be positive, got {bound}"
        )));
    }
    let n = r.n();
    let mut walk = Walk {
        r,
        bound,
        budget: node_budget.unwrap_or(u64::MAX),
        nodes: 0,
        visited: vec![false; n + 1],
        path: Vec::with_capacity(n),
        seen: HashSet::new(),
        cycles: Vec::new(),
    };
    let mut complete = true;
    for root in 1..=n {
        walk.visited[root] = true;
        walk.path.push(root);
        let done = walk.grow(root, W::zero());
        walk.path.pop();
        walk.visited[root] = false;
        if !done {
            complete = false;
            break;
        }
    }
    Ok(CtreeOutcome {
        cycles: walk.cycles,
        nodes: walk.nodes,
        complete,
    })
}

struct Walk<'a, W> {
    r: &'a ReducedMatrix<W>,
    bound: W,
    budget: u64,
    nodes: u64,
    visited: Vec<bool>,
    path: Vec<usize>,
    seen: HashSet<Vec<usize>>,
    cycles: Vec<CycleCandidate<W>>,
}

impl<W: Weight> Walk<'_, W> {
    /// Returns false when the budget is exhausted.
    fn grow(&mut self, root: usize, value: W) -> bool {
        let b = *self.path.last().expect("path holds the root");
        for &k in self.r.min_order(b) {
            if k == b {
                continue;
            }
            let Cost::Finite(w) = self.r.at(b, k) else {
                break;
            };
            let next = value + w;
            if next >= self.bound {
                break;
            }
            if k == root {
                if self.path.len() >= 2 {
                    let c = CycleCandidate::new(self.path.clone(), next, CycleSource::Ctree);
                    if self.seen.insert(c.key()) {
                        self.cycles.push(c);
                    }
                }
                continue;
            }
            if self.visited[k] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            self.visited[k] = true;
            self.path.push(k);
            let ok = self.grow(root, next);
            self.path.pop();
            self.visited[k] = false;
            if !ok {
                return false;
            }
        }
        true
    }
}
