use std::collections::HashSet;

use serde_json::json;

use super::{BagEntry, Phase1Config, SolverState};
use crate::error::Result;
use crate::fw::{CycleCandidate, CycleSource};
use crate::matrix::{min::diff_at, CostMatrix, MinIndex, Weights};
use crate::perm::Permutation;
use crate::scalar::{Cost, Weight};
use crate::trace::{event, TraceSink};

/// Greedy descent from `d0`; see [`run_phase1`].
pub fn phase1<W: Weight>(
    m: &CostMatrix<W>,
    d0: Permutation,
    cfg: Phase1Config,
    trace: &mut dyn TraceSink,
) -> Result<SolverState<W>> {
    let mut state = SolverState::new(m.clone(), d0)?;
    run_phase1(&mut state, cfg, trace)?;
    Ok(state)
}

/// Rounds of: order vertices by DIFF, and from each of the first
/// `cfg.starts` negative ones walk the MIN columns for up to `cfg.trials`
/// trials, collecting negative cycles. The best cycle (or pair of disjoint
/// cycles) of the first start that has one is applied. Stops when no start
/// yields a negative move.
pub fn run_phase1<W: Weight>(
    state: &mut SolverState<W>,
    cfg: Phase1Config,
    trace: &mut dyn TraceSink,
) -> Result<()> {
    let n = state.n();
    let mut diff: Vec<W> = (1..=n)
        .map(|a| diff_at(&state.matrix, &state.current, &state.min, a))
        .collect::<Result<_>>()?;

    loop {
        let base = state.history.len() - 1;
        let view = View::new(&state.matrix, &state.min, &state.current);

        let mut starts: Vec<usize> = (1..=n).filter(|&a| diff[a - 1] < W::zero()).collect();
        starts.sort_by_key(|&a| (diff[a - 1], a));
        starts.truncate(cfg.starts);

        let mut chosen = None;
        let mut kept: Vec<CycleCandidate<W>> = Vec::new();
        for &a in &starts {
            let mut best: Option<Move<W>> = None;
            for t in 1..=cfg.trials.min(n) {
                let c = state.min.get(a, t);
                if c == view.d.apply(a) {
                    break;
                }
                let y = view.dinv.apply(c);
                let w = match view.r(a, y) {
                    Cost::Finite(w) if w < W::zero() => w,
                    _ => break,
                };
                let walk = view.walk(a, y, w);
                for mv in view.moves(&walk) {
                    for cyc in &mv.cycles {
                        kept.push(cyc.clone());
                    }
                    if best.as_ref().is_none_or(|b| mv.better_than(b)) {
                        best = Some(mv);
                    }
                }
            }
            if let Some(mv) = best {
                chosen = Some(mv);
                break;
            }
        }

        let mut seen: HashSet<Vec<usize>> = state
            .bag
            .iter()
            .filter(|e| e.base == base)
            .map(|e| e.cycle.key())
            .collect();
        for cycle in kept {
            if seen.insert(cycle.key()) {
                state.bag.push(BagEntry { base, cycle });
            }
        }

        let Some(mv) = chosen else {
            return Ok(());
        };
        let touched: Vec<usize> = mv.cycles.iter().flat_map(|c| c.vertices.clone()).collect();
        if trace.enabled() {
            trace.emit(event(
                "phase1-step",
                json!({
                    "cycles": mv.cycles.iter().map(|c| c.notation()).collect::<Vec<_>>(),
                    "value": mv.value.to_string(),
                }),
            ));
        }
        state.apply(1, mv.cycles)?;
        for a in touched {
            diff[a - 1] = diff_at(&state.matrix, &state.current, &state.min, a)?;
        }
    }
}

/// Reduced costs relative to `d` without materialising the matrix.
struct View<'a, W> {
    m: &'a CostMatrix<W>,
    min: &'a MinIndex,
    d: &'a Permutation,
    dinv: Permutation,
}

struct Walk<W> {
    path: Vec<usize>,
    /// `prefix[k]` is the sum of the first `k` arcs.
    prefix: Vec<W>,
    /// Position of the vertex the walk returned to, which is also pushed
    /// as the last element of `path`.
    repeat: Option<usize>,
}

#[derive(Clone, Debug)]
struct Move<W> {
    cycles: Vec<CycleCandidate<W>>,
    value: W,
}

impl<W: Weight> Move<W> {
    fn size(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }

    fn better_than(&self, other: &Move<W>) -> bool {
        let key = |m: &Move<W>| {
            (
                m.value,
                m.size(),
                m.cycles
                    .iter()
                    .map(|c| c.vertices.clone())
                    .collect::<Vec<_>>(),
            )
        };
        key(self) < key(other)
    }
}

impl<'a, W: Weight> View<'a, W> {
    fn new(m: &'a CostMatrix<W>, min: &'a MinIndex, d: &'a Permutation) -> Self {
        View {
            m,
            min,
            d,
            dinv: d.inverse(),
        }
    }

    fn r(&self, x: usize, y: usize) -> Cost<W> {
        match self.m.at(x, self.d.apply(x)) {
            Cost::Finite(base) => self.m.at(x, self.d.apply(y)).minus(base),
            Cost::Inf => Cost::Inf,
        }
    }

    /// Follows the cheapest non-`D` column out of each vertex while the
    /// running sum stays negative.
    fn walk(&self, a: usize, first: usize, w: W) -> Walk<W> {
        let n = self.m.n();
        let mut walk = Walk {
            path: vec![a],
            prefix: vec![W::zero()],
            repeat: None,
        };
        let (mut y, mut w) = (first, w);
        for _ in 0..=n {
            let total = *walk.prefix.last().unwrap() + w;
            if let Some(q) = walk.path.iter().position(|&v| v == y) {
                walk.path.push(y);
                walk.prefix.push(total);
                walk.repeat = Some(q);
                break;
            }
            walk.path.push(y);
            walk.prefix.push(total);
            if total >= W::zero() {
                break;
            }
            let x = y;
            let Some(&c) = self.min.row(x).iter().find(|&&c| c != self.d.apply(x)) else {
                break;
            };
            y = self.dinv.apply(c);
            w = match self.r(x, y) {
                Cost::Finite(w) => w,
                Cost::Inf => break,
            };
        }
        walk
    }

    fn close(&self, walk: &Walk<W>, k: usize) -> Option<CycleCandidate<W>> {
        let a = walk.path[0];
        let back = self.r(walk.path[k], a).finite()?;
        Some(CycleCandidate::new(
            walk.path[..=k].to_vec(),
            walk.prefix[k] + back,
            CycleSource::Phase1Trial,
        ))
    }

    /// Negative closures of the walk's negative prefixes, the cycle it ran
    /// into, and that cycle together with the closure just before it.
    fn moves(&self, walk: &Walk<W>) -> Vec<Move<W>> {
        let neg = |c: &CycleCandidate<W>| c.value < W::zero();
        let mut out: Vec<Move<W>> = Vec::new();
        let mut seen = HashSet::new();
        let mut push = |cycles: Vec<CycleCandidate<W>>, out: &mut Vec<Move<W>>| {
            let key: Vec<Vec<usize>> = cycles.iter().map(|c| c.key()).collect();
            if seen.insert(key) {
                let value = cycles.iter().fold(W::zero(), |s, c| s + c.value);
                out.push(Move { cycles, value });
            }
        };

        let last = match walk.repeat {
            Some(_) => walk.path.len() - 2,
            None => walk.path.len() - 1,
        };
        for k in 1..=last {
            if walk.prefix[k] >= W::zero() {
                continue;
            }
            if let Some(c) = self.close(walk, k).filter(neg) {
                push(vec![c], &mut out);
            }
        }
        if let Some(q) = walk.repeat {
            let end = walk.path.len() - 1;
            let inner = CycleCandidate::new(
                walk.path[q..end].to_vec(),
                walk.prefix[end] - walk.prefix[q],
                CycleSource::Phase1Trial,
            );
            if neg(&inner) {
                if q >= 2 && walk.prefix[q - 1] < W::zero() {
                    if let Some(outer) = self.close(walk, q - 1).filter(neg) {
                        push(vec![outer, inner.clone()], &mut out);
                    }
                }
                push(vec![inner], &mut out);
            }
        }
        out
    }
}
