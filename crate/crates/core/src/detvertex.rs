//! Start vertices of a weighted cycle from which every partial sum stays
//! below a bound.

use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Weights `w(1..k)` read cyclically; weight `i` sits on the arc leaving
/// the `i`-th vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCycle<W> {
    weights: Vec<W>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldOutcome {
    pub start: usize,
    /// The folding did not isolate a valid start and the scan answer was used.
    pub fell_back: bool,
}

impl<W: Weight> WeightedCycle<W> {
    pub fn new(weights: Vec<W>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a weighted cycle needs at least 2 weights, got {}",
                weights.len()
            )));
        }
        Ok(WeightedCycle { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    pub fn total(&self) -> W {
        self.weights.iter().fold(W::zero(), |a, &w| a + w)
    }

    fn check_index(&self, start: usize) -> Result<()> {
        if start == 0 || start > self.len() {
            return Err(Error::InvalidArgument(format!(
                "start {start} outside 1..={}",
                self.len()
            )));
        }
        Ok(())
    }

    /// The `k` partial sums of the rotation beginning at `start`.
    pub fn prefix_sums(&self, start: usize) -> Result<Vec<W>> {
        self.check_index(start)?;
        let k = self.len();
        let mut acc = W::zero();
        Ok((0..k)
            .map(|j| {
                acc = acc + self.weights[(start - 1 + j) % k];
                acc
            })
            .collect())
    }

    pub fn is_determining(&self, start: usize, bound: W) -> Result<bool> {
        Ok(self.prefix_sums(start)?.iter().all(|&s| s < bound))
    }

    /// All valid starts for `bound`, ascending, in `O(k)`.
    pub fn determining_vertices(&self, bound: W) -> Result<Vec<usize>> {
        let k = self.len();
        let total = self.total();
        let no_start = || Error::NoDeterminingVertex {
            total: total.to_string(),
            bound: bound.to_string(),
        };
        if total >= bound {
            return Err(no_start());
        }
        // p[t] = w1 + ... + wt
        let mut p = vec![W::zero(); k + 1];
        for t in 1..=k {
            p[t] = p[t - 1] + self.weights[t - 1];
        }
        // suffix[t] = max p[t..=k]; prefix[t] = max p[1..=t]
        let mut suffix = vec![p[k]; k + 2];
        for t in (1..k).rev() {
            suffix[t] = suffix[t + 1].max(p[t]);
        }
        let mut prefix = vec![p[1]; k + 1];
        for t in 2..=k {
            prefix[t] = prefix[t - 1].max(p[t]);
        }
        let starts: Vec<usize> = (1..=k)
            .filter(|&s| {
                let base = p[s - 1];
                let tail_ok = suffix[s] - base < bound;
                let wrap_ok = s == 1 || total + prefix[s - 1] - base < bound;
                tail_ok && wrap_ok
            })
            .collect();
        if starts.is_empty() {
            return Err(no_start());
        }
        Ok(starts)
    }

    /// The start right after the last maximum partial sum. Valid whenever
    /// `total < bound` and `bound >= 0`.
    pub fn canonical_start(&self, bound: W) -> Result<usize> {
        let k = self.len();
        let mut acc = W::zero();
        let mut best = (self.weights[0], 1);
        for t in 1..=k {
            acc = acc + self.weights[t - 1];
            if acc >= best.0 {
                best = (acc, t);
            }
        }
        let start = best.1 % k + 1;
        if self.total() < bound && self.is_determining(start, bound)? {
            Ok(start)
        } else {
            self.determining_vertices(bound).map(|v| v[0])
        }
    }

    /// Repeatedly merges runs of like sign and folds each positive run into
    /// the negative run before it when their sum stays negative, finally
    /// joining the ends of the cycle. The label of the surviving block is the
    /// answer. Requires a negative total.
    pub fn fold_procedure(&self) -> Result<FoldOutcome> {
        if self.total() >= W::zero() {
            return Err(Error::NoDeterminingVertex {
                total: self.total().to_string(),
                bound: "0".into(),
            });
        }
        if let Some(start) = self.fold() {
            if self.is_determining(start, W::zero())? {
                return Ok(FoldOutcome {
                    start,
                    fell_back: false,
                });
            }
        }
        Ok(FoldOutcome {
            start: self.canonical_start(W::zero())?,
            fell_back: true,
        })
    }

    fn fold(&self) -> Option<usize> {
        let neg = |w: W| w < W::zero();
        // (label, sum); zero counts as non-negative
        let mut blocks: Vec<(usize, W)> = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| (i + 1, w))
            .collect();
        loop {
            let before = blocks.len();
            blocks = merge_like(blocks, neg);
            if blocks.len() == 1 {
                return Some(blocks[0].0);
            }

            let mut absorbed = Vec::with_capacity(blocks.len());
            let mut i = 0;
            while i < blocks.len() {
                let (label, w) = blocks[i];
                if neg(w)
                    && i + 1 < blocks.len()
                    && !neg(blocks[i + 1].1)
                    && neg(w + blocks[i + 1].1)
                {
                    absorbed.push((label, w + blocks[i + 1].1));
                    i += 2;
                } else {
                    absorbed.push((label, w));
                    i += 1;
                }
            }
            blocks = absorbed;
            if blocks.len() < before {
                continue;
            }

            // Linear passes are stuck; join the two ends of the cycle.
            let (first, last) = (blocks[0], blocks[blocks.len() - 1]);
            let joinable = neg(first.1) == neg(last.1) || (neg(last.1) && neg(last.1 + first.1));
            if !joinable {
                return None;
            }
            blocks.pop();
            blocks[0] = (last.0, last.1 + first.1);
        }
    }
}

fn merge_like<W: Weight>(blocks: Vec<(usize, W)>, neg: impl Fn(W) -> bool) -> Vec<(usize, W)> {
    let mut out: Vec<(usize, W)> = Vec::with_capacity(blocks.len());
    for (label, w) in blocks {
        match out.last_mut() {
            Some(prev) if neg(prev.1) == neg(w) => prev.1 = prev.1 + w,
            _ => out.push((label, w)),
        }
    }
    out
}
