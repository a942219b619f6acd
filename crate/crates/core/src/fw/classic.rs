use super::{rotation_key, CycleCandidate, CycleSource, PathTable};
use crate::matrix::Weights;
use crate::scalar::{Cost, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ApspOutcome<W> {
    Paths(PathTable<W>),
    NegativeCycle(CycleCandidate<W>),
}

impl<W> ApspOutcome<W> {
    pub fn negative_cycle(&self) -> Option<&CycleCandidate<W>> {
        match self {
            ApspOutcome::NegativeCycle(c) => Some(c),
            ApspOutcome::Paths(_) => None,
        }
    }

    pub fn paths(&self) -> Option<&PathTable<W>> {
        match self {
            ApspOutcome::Paths(t) => Some(t),
            ApspOutcome::NegativeCycle(_) => None,
        }
    }
}

/// Triangle operations for intermediate columns `j = 1..n`. The diagonal
/// starts at zero whatever the matrix holds; the first diagonal entry to
/// turn negative is reported as a negative cycle, rotated to its smallest
/// vertex.
pub fn classic_apsp<W: Weight, M: Weights<W> + ?Sized>(m: &M) -> ApspOutcome<W> {
    let n = m.n();
    let idx = |i: usize, k: usize| (i - 1) * n + (k - 1);
    let mut dist = Vec::with_capacity(n * n);
    for i in 1..=n {
        for k in 1..=n {
            dist.push(if i == k { Cost::zero() } else { m.at(i, k) });
        }
    }
    let mut pred = vec![0usize; n * n];
    let via = |pred: &[usize], j: usize, k: usize| match pred[idx(j, k)] {
        0 => j,
        p => p,
    };

    for j in 1..=n {
        for i in 1..=n {
            let dij = dist[idx(i, j)];
            if !dij.is_finite() {
                continue;
            }
            for k in 1..=n {
                let cand = dij + dist[idx(j, k)];
                if cand < dist[idx(i, k)] {
                    dist[idx(i, k)] = cand;
                    pred[idx(i, k)] = via(&pred, j, k);
                    if i == k {
                        let cycle = walk_back(m, &pred, n, i)
                            .or_else(|| bellman_ford_cycle(m))
                            .expect("a negative diagonal implies a negative cycle");
                        return ApspOutcome::NegativeCycle(cycle);
                    }
                }
            }
        }
    }
    ApspOutcome::Paths(PathTable::new(n, dist, pred, 1))
}

/// Follows the predecessor links of row `i` back from `i` until a vertex
/// repeats, and keeps the enclosed cycle if it is negative.
fn walk_back<W: Weight, M: Weights<W> + ?Sized>(
    m: &M,
    pred: &[usize],
    n: usize,
    i: usize,
) -> Option<CycleCandidate<W>> {
    let mut seq = vec![i];
    let mut cur = i;
    loop {
        let p = match pred[(i - 1) * n + (cur - 1)] {
            0 => i,
            p => p,
        };
        if let Some(pos) = seq.iter().position(|&v| v == p) {
            let mut cycle: Vec<usize> = seq[pos..].to_vec();
            cycle.reverse();
            return negative(m, cycle);
        }
        if seq.len() > n {
            return None;
        }
        seq.push(p);
        cur = p;
    }
}

fn negative<W: Weight, M: Weights<W> + ?Sized>(
    m: &M,
    cycle: Vec<usize>,
) -> Option<CycleCandidate<W>> {
    let cycle = rotation_key(&cycle);
    match m.cycle_value(&cycle) {
        Cost::Finite(v) if v < W::zero() => Some(CycleCandidate::new(cycle, v, CycleSource::Apsp)),
        _ => None,
    }
}

fn bellman_ford_cycle<W: Weight, M: Weights<W> + ?Sized>(m: &M) -> Option<CycleCandidate<W>> {
    let n = m.n();
    let mut dist = vec![W::zero(); n + 1];
    let mut pred = vec![0usize; n + 1];
    let mut last = 0;
    for _ in 0..n {
        last = 0;
        for u in 1..=n {
            for v in 1..=n {
                if u == v {
                    continue;
                }
                if let Cost::Finite(w) = m.at(u, v) {
                    if dist[u] + w < dist[v] {
                        dist[v] = dist[u] + w;
                        pred[v] = u;
                        last = v;
                    }
                }
            }
        }
        if last == 0 {
            return None;
        }
    }
    let mut v = last;
    for _ in 0..n {
        v = pred[v];
    }
    let mut cycle = vec![v];
    let mut u = pred[v];
    while u != v {
        cycle.push(u);
        u = pred[u];
    }
    cycle.reverse();
    negative(m, cycle)
}
