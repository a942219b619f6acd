use std::collections::HashSet;

use serde_json::json;

use super::{CycleCandidate, CycleSource, EntryState, NegPathSet, PathTable};
use crate::error::{Error, Result};
use crate::matrix::{ReducedMatrix, Weights};
use crate::scalar::{Cost, Weight};
use crate::trace::{event, TraceSink};

#[derive(Clone, Debug)]
pub struct NvsOutcome<W> {
    pub cycle: Option<CycleCandidate<W>>,
    /// Blocks started, including the one where the cycle closed.
    pub blocks: usize,
    /// Every path of two or more arcs that was opened, in order.
    pub extended: Vec<(Vec<usize>, W)>,
    pub table: PathTable<W>,
}

#[derive(Clone, Debug)]
pub struct NnvsOutcome<W> {
    pub cycles: Vec<CycleCandidate<W>>,
    pub blocks: usize,
    /// The bound in force after each change, starting with the initial one.
    pub bounds: Vec<W>,
    pub table: PathTable<W>,
}

enum Flow<W> {
    Stop,
    Continue(Option<W>),
}

struct Sweep<'a, W> {
    r: &'a ReducedMatrix<W>,
    n: usize,
    bound: W,
    label: Vec<Cost<W>>,
    path: Vec<Vec<usize>>,
    state: Vec<EntryState>,
    open: NegPathSet<W>,
    block: usize,
    extended: Vec<(Vec<usize>, W)>,
    trace: &'a mut dyn TraceSink,
}

impl<'a, W: Weight> Sweep<'a, W> {
    fn new(r: &'a ReducedMatrix<W>, bound: W, trace: &'a mut dyn TraceSink) -> Self {
        let n = r.n();
        let mut s = Sweep {
            r,
            n,
            bound,
            label: vec![Cost::Inf; n * n],
            path: vec![Vec::new(); n * n],
            state: vec![EntryState::Fresh; n * n],
            open: NegPathSet::new(),
            block: 0,
            extended: Vec::new(),
            trace,
        };
        for a in 1..=n {
            for k in 1..=n {
                if a == k {
                    continue;
                }
                if let Cost::Finite(w) = r.at(a, k) {
                    if w < bound {
                        s.underline(a, k, w, vec![a, k]);
                    }
                }
            }
        }
        s
    }

    fn idx(&self, a: usize, k: usize) -> usize {
        (a - 1) * self.n + (k - 1)
    }

    fn underline(&mut self, a: usize, k: usize, value: W, path: Vec<usize>) {
        let i = self.idx(a, k);
        if self.trace.enabled() {
            self.trace.emit(event(
                "path-underlined",
                json!({ "block": self.block, "path": path, "value": value.to_string() }),
            ));
        }
        if path.len() > 2 {
            self.extended.push((path.clone(), value));
        }
        self.label[i] = Cost::Finite(value);
        self.path[i] = path;
        self.state[i] = EntryState::Underlined;
        self.open.insert(value, a, k);
    }

    fn run(
        &mut self,
        max_blocks: usize,
        on_cycle: &mut dyn FnMut(CycleCandidate<W>, usize) -> Flow<W>,
    ) {
        while !self.open.is_empty() && self.block < max_blocks {
            self.block += 1;
            for j in 1..=self.n {
                if self.trace.enabled() {
                    self.trace.emit(event(
                        "column-entered",
                        json!({ "block": self.block, "column": j }),
                    ));
                }
                for a in 1..=self.n {
                    let i = self.idx(a, j);
                    if self.state[i] != EntryState::Underlined {
                        continue;
                    }
                    self.state[i] = EntryState::Italicized;
                    self.open.remove(a, j);
                    if self.trace.enabled() {
                        self.trace.emit(event(
                            "path-italicized",
                            json!({ "block": self.block, "path": self.path[i] }),
                        ));
                    }
                    let Cost::Finite(base) = self.label[i] else {
                        continue;
                    };
                    if base >= self.bound {
                        continue;
                    }
                    let prefix = self.path[i].clone();
                    if let Flow::Stop = self.extend(a, j, base, &prefix, on_cycle) {
                        return;
                    }
                }
            }
            if self.trace.enabled() {
                self.trace
                    .emit(event("block-snapshot", self.table().to_json()));
            }
        }
    }

    fn extend(
        &mut self,
        a: usize,
        j: usize,
        base: W,
        prefix: &[usize],
        on_cycle: &mut dyn FnMut(CycleCandidate<W>, usize) -> Flow<W>,
    ) -> Flow<W> {
        let r = self.r;
        for &k in r.min_order(j) {
            if k == j {
                continue;
            }
            let Cost::Finite(w) = r.at(j, k) else {
                break;
            };
            let value = base + w;
            if value >= self.bound {
                break;
            }
            if k == a {
                let cycle = CycleCandidate::new(prefix.to_vec(), value, CycleSource::Nvs);
                if self.trace.enabled() {
                    self.trace.emit(event(
                        "cycle-found",
                        json!({ "block": self.block, "cycle": cycle.vertices, "value": value.to_string() }),
                    ));
                }
                match on_cycle(cycle, self.block) {
                    Flow::Stop => return Flow::Stop,
                    Flow::Continue(Some(b)) if b < self.bound => {
                        self.bound = b;
                        if value >= b {
                            break;
                        }
                    }
                    Flow::Continue(_) => {}
                }
                continue;
            }
            if prefix.contains(&k) {
                continue;
            }
            if Cost::Finite(value) < self.label[self.idx(a, k)] {
                let mut p = prefix.to_vec();
                p.push(k);
                self.underline(a, k, value, p);
            }
        }
        Flow::Continue(None)
    }

    fn table(&self) -> PathTable<W> {
        let pred = self
            .path
            .iter()
            .map(|p| if p.len() > 2 { p[p.len() - 2] } else { 0 })
            .collect();
        PathTable::new(self.n, self.label.clone(), pred, self.block)
    }
}

/// Grows paths whose every prefix is negative, one arc at a time in row
/// order, sweeping columns `1..n` per block. Returns the first cycle that
/// closes with a negative value, or none once a block opens no new path.
pub fn nvs_search<W: Weight>(r: &ReducedMatrix<W>, trace: &mut dyn TraceSink) -> NvsOutcome<W> {
    let mut found = None;
    let mut sweep = Sweep::new(r, W::zero(), trace);
    sweep.run(usize::MAX, &mut |c, _| {
        found = Some(c);
        Flow::Stop
    });
    NvsOutcome {
        cycle: found,
        blocks: sweep.block,
        extended: std::mem::take(&mut sweep.extended),
        table: sweep.table(),
    }
}

/// The sweep with prefixes bounded by `bound` instead of zero, run for at
/// most `n` blocks. Each distinct cycle is passed to `on_cycle`, which may
/// return a smaller bound for the rest of the search.
pub fn nnvs_search<W: Weight>(
    r: &ReducedMatrix<W>,
    bound: W,
    on_cycle: &mut dyn FnMut(&CycleCandidate<W>) -> Option<W>,
    trace: &mut dyn TraceSink,
) -> Result<NnvsOutcome<W>> {
    if bound <= W::zero() {
        return Err(Error::InvalidArgument(format!(
            "cycle bound must be positive, got {bound}"
        )));
    }
    let mut cycles: Vec<CycleCandidate<W>> = Vec::new();
    let mut seen = HashSet::new();
    let mut bounds = vec![bound];
    let mut sweep = Sweep::new(r, bound, trace);
    let n = r.n();
    sweep.run(n, &mut |mut c, _| {
        if !seen.insert(c.key()) {
            return Flow::Continue(None);
        }
        c.source = CycleSource::Nnvs;
        let lowered = on_cycle(&c).filter(|&b| b < *bounds.last().unwrap());
        cycles.push(c);
        match lowered {
            Some(b) if b <= W::zero() => {
                bounds.push(b);
                Flow::Stop
            }
            Some(b) => {
                bounds.push(b);
                Flow::Continue(Some(b))
            }
            None => Flow::Continue(None),
        }
    });
    Ok(NnvsOutcome {
        cycles,
        blocks: sweep.block,
        bounds,
        table: sweep.table(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::reduce;
    use crate::perm::Permutation;
    use crate::trace::{NullTrace, VecTrace};

    fn d3_reduced() -> ReducedMatrix<i64> {
        let d3 = Permutation::parse_cycles(8, "(1 4 2 3)(5 7 8 6)").unwrap();
        reduce(&fixtures::ex34(), &d3).unwrap()
    }

    #[test]
    fn worked_eight_point_reduction_has_no_negative_cycle() {
        let out = nvs_search(&d3_reduced(), &mut NullTrace);
        assert!(out.cycle.is_none());
        assert_eq!(out.extended, vec![(vec![7, 4, 6], -5)]);
    }

    #[test]
    fn two_cycle() {
        let r = ReducedMatrix::from_entries(
            2,
            vec![
                Cost::Finite(0),
                Cost::Finite(-3),
                Cost::Finite(1),
                Cost::Finite(0),
            ],
        )
        .unwrap();
        let out = nvs_search(&r, &mut NullTrace);
        let c = out.cycle.unwrap();
        assert_eq!(c.vertices, vec![1, 2]);
        assert_eq!(c.value, -2);
        assert_eq!(out.blocks, 1);
    }

    #[test]
    fn twenty_point_final_cancellation() {
        let m = fixtures::ex35();
        let d7 = Permutation::from_images(&[
            7, 8, 11, 17, 18, 14, 5, 1, 4, 12, 9, 20, 19, 13, 16, 6, 10, 15, 3, 2,
        ])
        .unwrap();
        let r = reduce(&m, &d7).unwrap();
        let c = nvs_search(&r, &mut NullTrace).cycle.unwrap();
        let mut set = c.vertices.clone();
        set.sort_unstable();
        assert_eq!(set, vec![6, 11, 12, 13, 18, 20]);
        assert_eq!(c.value, -1);
        assert_eq!(r.cycle_value(&c.vertices), Cost::Finite(-1));
    }

    #[test]
    fn bounded_search_below_six_is_empty() {
        let out = nnvs_search(&d3_reduced(), 6, &mut |_| None, &mut NullTrace).unwrap();
        assert!(out.cycles.is_empty());
        assert_eq!(out.bounds, vec![6]);
    }

    #[test]
    fn bounded_search_rejects_non_positive_bound() {
        assert!(nnvs_search(&d3_reduced(), 0, &mut |_| None, &mut NullTrace).is_err());
    }

    #[test]
    fn bound_one_with_positive_entries_is_empty() {
        let r = ReducedMatrix::<i64>::from_entries(
            3,
            (0..9)
                .map(|i| Cost::Finite(if i % 4 == 0 { 0 } else { 1 }))
                .collect(),
        )
        .unwrap();
        let out = nnvs_search(&r, 1, &mut |_| None, &mut NullTrace).unwrap();
        assert!(out.cycles.is_empty());
    }

    #[test]
    fn lowering_the_bound_prunes_later_cycles() {
        let r = d3_reduced();
        let all = nnvs_search(&r, 40, &mut |_| None, &mut NullTrace).unwrap();
        assert!(all.cycles.len() > 1);
        let mut calls = 0;
        let low = nnvs_search(
            &r,
            40,
            &mut |c| {
                calls += 1;
                Some(c.value)
            },
            &mut NullTrace,
        )
        .unwrap();
        assert!(low.cycles.windows(2).all(|w| w[1].value < w[0].value));
        assert_eq!(calls, low.cycles.len());
        assert_eq!(low.bounds.len(), low.cycles.len() + 1);
    }

    #[test]
    fn trace_events_are_emitted() {
        let mut t = VecTrace::default();
        nvs_search(&d3_reduced(), &mut t);
        assert_eq!(t.of_kind("column-entered").count() % 8, 0);
        assert!(t.of_kind("block-snapshot").count() >= 1);
        assert!(t
            .of_kind("path-underlined")
            .any(|e| e["path"] == json!([7, 4, 6])));
    }
}
