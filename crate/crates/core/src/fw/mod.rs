//! Floyd-Warshall and its bounded-subpath variants.
//!
//! * [`classic_apsp`]: all-pairs shortest paths, stopping at the first
//!   negative cycle.
//! * [`nvs_search`]: grows paths whose every prefix is negative and stops at
//!   the first negative cycle.
//! * [`nnvs_search`]: the same sweep with a positive bound the caller may
//!   lower while it runs; collects every cycle it closes.
//! * [`ctree_search`]: exhaustive depth-first enumeration of bounded cycles.

mod classic;
mod ctree;
mod search;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::Result;
use crate::perm::{cycle_notation, Permutation};
use crate::scalar::{Cost, Weight};

pub use classic::{classic_apsp, ApspOutcome};
pub use ctree::{ctree_search, CtreeOutcome};
pub use search::{nnvs_search, nvs_search, NnvsOutcome, NvsOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleSource {
    Phase1Trial,
    Nvs,
    Nnvs,
    Ctree,
    Apsp,
    Exhaustive,
}

/// A cycle found by one of the searches, with its value in the matrix it
/// was found in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CycleCandidate<W> {
    pub vertices: Vec<usize>,
    pub value: W,
    pub source: CycleSource,
}

impl<W: Weight> CycleCandidate<W> {
    pub fn new(vertices: Vec<usize>, value: W, source: CycleSource) -> Self {
        CycleCandidate {
            vertices,
            value,
            source,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Rotation starting at the smallest vertex; equal for every rotation of
    /// the same cycle.
    pub fn key(&self) -> Vec<usize> {
        rotation_key(&self.vertices)
    }

    pub fn to_permutation(&self, n: usize) -> Result<Permutation> {
        Permutation::from_cycles(n, &[&self.vertices])
    }

    pub fn is_disjoint(&self, other: &CycleCandidate<W>) -> bool {
        !self.vertices.iter().any(|v| other.vertices.contains(v))
    }

    pub fn notation(&self) -> String {
        cycle_notation(&self.vertices)
    }
}

pub fn rotation_key(vertices: &[usize]) -> Vec<usize> {
    let Some(pos) = vertices
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
    else {
        return Vec::new();
    };
    vertices[pos..]
        .iter()
        .chain(&vertices[..pos])
        .copied()
        .collect()
}

/// Entry bookkeeping during a subpath sweep: open entries still have to be
/// extended, closed ones already were.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryState {
    Fresh,
    Underlined,
    Italicized,
}

/// Best known path values and predecessors; `pred(i, k) == 0` marks the
/// direct arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTable<W> {
    n: usize,
    dist: Vec<Cost<W>>,
    pred: Vec<usize>,
    pub block: usize,
}

impl<W: Weight> PathTable<W> {
    pub(crate) fn new(n: usize, dist: Vec<Cost<W>>, pred: Vec<usize>, block: usize) -> Self {
        PathTable {
            n,
            dist,
            pred,
            block,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, i: usize, k: usize) -> Cost<W> {
        self.dist[(i - 1) * self.n + (k - 1)]
    }

    pub fn pred(&self, i: usize, k: usize) -> usize {
        self.pred[(i - 1) * self.n + (k - 1)]
    }

    /// Follows predecessors back from `k`. `None` when `k` is unreachable
    /// or the links do not lead back to `i`.
    pub fn path(&self, i: usize, k: usize) -> Option<Vec<usize>> {
        if i == k {
            return Some(vec![i]);
        }
        if !self.dist(i, k).is_finite() {
            return None;
        }
        let mut rev = vec![k];
        let mut cur = k;
        for _ in 0..self.n {
            let p = self.pred(i, cur);
            if p == 0 || p == i {
                rev.push(i);
                rev.reverse();
                return Some(rev);
            }
            rev.push(p);
            cur = p;
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = |f: &dyn Fn(usize, usize) -> serde_json::Value| -> Vec<Vec<serde_json::Value>> {
            (1..=self.n)
                .map(|i| (1..=self.n).map(|k| f(i, k)).collect())
                .collect()
        };
        serde_json::json!({
            "block": self.block,
            "dist": rows(&|i, k| serde_json::to_value(self.dist(i, k)).unwrap_or_default()),
            "pred": rows(&|i, k| self.pred(i, k).into()),
        })
    }
}

/// Open paths ordered by `(value, origin, terminal)`, at most one per
/// `(origin, terminal)`.
#[derive(Clone, Debug, Default)]
pub struct NegPathSet<W> {
    ordered: BTreeSet<(W, usize, usize)>,
    by_pair: HashMap<(usize, usize), W>,
}

impl<W: Weight> NegPathSet<W> {
    pub fn new() -> Self {
        NegPathSet {
            ordered: BTreeSet::new(),
            by_pair: HashMap::new(),
        }
    }

    /// Inserts or replaces the entry for `(origin, terminal)`.
    pub fn insert(&mut self, value: W, origin: usize, terminal: usize) {
        if let Some(old) = self.by_pair.insert((origin, terminal), value) {
            self.ordered.remove(&(old, origin, terminal));
        }
        self.ordered.insert((value, origin, terminal));
    }

    pub fn remove(&mut self, origin: usize, terminal: usize) -> Option<W> {
        let old = self.by_pair.remove(&(origin, terminal))?;
        self.ordered.remove(&(old, origin, terminal));
        Some(old)
    }

    pub fn contains(&self, origin: usize, terminal: usize) -> bool {
        self.by_pair.contains_key(&(origin, terminal))
    }

    pub fn pop_min(&mut self) -> Option<(W, usize, usize)> {
        let first = self.ordered.pop_first()?;
        self.by_pair.remove(&(first.1, first.2));
        Some(first)
    }

    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(W, usize, usize)> {
        self.ordered.iter()
    }
}

/// Columns passed moving from column `a` to column `b` in a row-by-row
/// sweep: `b - a` ahead in the same sweep, `(n - a) + b` in the next.
pub fn column_distance(a: usize, b: usize, n: usize) -> usize {
    if a < b {
        b - a
    } else {
        (n - a) + b
    }
}

/// Column distance summed over every arc of `path`.
pub fn arc_column_sum(path: &[usize], n: usize) -> usize {
    path.windows(2)
        .map(|w| column_distance(w[0], w[1], n))
        .sum()
}

/// Columns scanned to build `path` from its first vertex: the first arc is
/// reached after scanning up to its terminal column, every later arc adds
/// its column distance.
pub fn column_span(path: &[usize], n: usize) -> usize {
    match path {
        [_, first, ..] => *first + arc_column_sum(&path[1..], n),
        _ => 0,
    }
}
