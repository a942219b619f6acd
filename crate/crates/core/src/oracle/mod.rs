//! Reference solvers for cross-checking: exhaustive tours and assignments,
//! the Hungarian method, Bellman-Ford, and exhaustive cycle listing.
//!
//! Nothing here calls into the cancelling pipeline.

mod hungarian;

use crate::error::{Error, Result};
use crate::fw::{CycleCandidate, CycleSource};
use crate::matrix::{CostMatrix, Weights};
use crate::perm::Permutation;
use crate::scalar::{Cost, Weight};

pub use hungarian::hungarian_ap;

pub const BRUTE_TSP_MAX_N: usize = 11;
pub const BRUTE_AP_MAX_N: usize = 9;
pub const ENUMERATE_MAX_N: usize = 10;

fn cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::TooLarge { n, cap })
    } else {
        Ok(())
    }
}

fn min_finite<W: Weight>(m: &CostMatrix<W>) -> W {
    m.entries()
        .iter()
        .filter_map(|c| c.finite())
        .min()
        .unwrap_or_else(W::zero)
}

/// Cheapest tour by exhaustive search over orders starting at vertex 1.
/// Among equal values the lexicographically first order wins.
pub fn brute_tsp<W: Weight>(m: &CostMatrix<W>) -> Result<(Permutation, W)> {
    let n = m.n();
    cap(n, BRUTE_TSP_MAX_N)?;
    if n < 2 {
        return Err(Error::Infeasible("a tour needs at least 2 vertices".into()));
    }
    let floor = min_finite(m).min(W::zero());
    let mut best: Option<(Vec<usize>, W)> = None;
    let mut order = vec![1usize];
    let mut used = vec![false; n + 1];
    used[1] = true;
    tsp_dfs(m, floor, &mut order, &mut used, W::zero(), &mut best);
    let (order, value) = best.ok_or_else(|| Error::Infeasible("no finite tour".into()))?;
    Ok((Permutation::from_cycles(n, &[order])?, value))
}

fn tsp_dfs<W: Weight>(
    m: &CostMatrix<W>,
    floor: W,
    order: &mut Vec<usize>,
    used: &mut [bool],
    value: W,
    best: &mut Option<(Vec<usize>, W)>,
) {
    let n = m.n();
    let last = *order.last().unwrap();
    if order.len() == n {
        if let Cost::Finite(w) = m.at(last, 1) {
            let total = value + w;
            if best.as_ref().is_none_or(|b| total < b.1) {
                *best = Some((order.clone(), total));
            }
        }
        return;
    }
    if let Some((_, b)) = best {
        let remaining = W::from(n - order.len() + 1).unwrap();
        if value + floor * remaining >= *b {
            return;
        }
    }
    for v in 2..=n {
        if used[v] {
            continue;
        }
        let Cost::Finite(w) = m.at(last, v) else {
            continue;
        };
        used[v] = true;
        order.push(v);
        tsp_dfs(m, floor, order, used, value + w, best);
        order.pop();
        used[v] = false;
    }
}

/// Cheapest permutation by exhaustive search over row forms; the
/// infinite diagonal excludes fixed points.
pub fn brute_ap<W: Weight>(m: &CostMatrix<W>) -> Result<(Permutation, W)> {
    let n = m.n();
    cap(n, BRUTE_AP_MAX_N)?;
    let floor = min_finite(m).min(W::zero());
    let mut best: Option<(Vec<usize>, W)> = None;
    let mut images = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    ap_dfs(m, floor, &mut images, &mut used, W::zero(), &mut best);
    let (images, value) = best.ok_or_else(|| Error::Infeasible("no finite assignment".into()))?;
    Ok((Permutation::from_images(&images)?, value))
}

fn ap_dfs<W: Weight>(
    m: &CostMatrix<W>,
    floor: W,
    images: &mut Vec<usize>,
    used: &mut [bool],
    value: W,
    best: &mut Option<(Vec<usize>, W)>,
) {
    let n = m.n();
    let row = images.len() + 1;
    if row > n {
        if best.as_ref().is_none_or(|b| value < b.1) {
            *best = Some((images.clone(), value));
        }
        return;
    }
    if let Some((_, b)) = best {
        let remaining = W::from(n - images.len()).unwrap();
        if value + floor * remaining >= *b {
            return;
        }
    }
    for col in 1..=n {
        if used[col] {
            continue;
        }
        let Cost::Finite(w) = m.at(row, col) else {
            continue;
        };
        used[col] = true;
        images.push(col);
        ap_dfs(m, floor, images, used, value + w, best);
        images.pop();
        used[col] = false;
    }
}

/// Single-source shortest path values, or `None` when a negative cycle is
/// reachable from `source`. The diagonal is ignored.
pub fn bellman_ford<W: Weight, M: Weights<W> + ?Sized>(
    m: &M,
    source: usize,
) -> Option<Vec<Cost<W>>> {
    let n = m.n();
    let mut dist = vec![Cost::Inf; n];
    dist[source - 1] = Cost::zero();
    for round in 0..=n {
        let mut changed = false;
        for u in 1..=n {
            let Cost::Finite(du) = dist[u - 1] else {
                continue;
            };
            for v in 1..=n {
                if u == v {
                    continue;
                }
                if let Cost::Finite(w) = m.at(u, v) {
                    if Cost::Finite(du + w) < dist[v - 1] {
                        dist[v - 1] = Cost::Finite(du + w);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Some(dist);
        }
        if round == n {
            return None;
        }
    }
    None
}

/// Every simple cycle with value below `bound` that has a start from which
/// all partial sums stay below `bound`, listed from the first such start
/// after its smallest vertex.
pub fn enumerate_cycles<W: Weight, M: Weights<W> + ?Sized>(
    m: &M,
    bound: W,
) -> Result<Vec<CycleCandidate<W>>> {
    let n = m.n();
    cap(n, ENUMERATE_MAX_N)?;
    let mut out = Vec::new();
    for low in 1..=n {
        let mut path = vec![low];
        let mut used = vec![false; n + 1];
        used[low] = true;
        cycle_dfs(m, bound, low, &mut path, &mut used, &mut out);
    }
    Ok(out)
}

fn cycle_dfs<W: Weight, M: Weights<W> + ?Sized>(
    m: &M,
    bound: W,
    low: usize,
    path: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<CycleCandidate<W>>,
) {
    let n = m.n();
    let last = *path.last().unwrap();
    if path.len() >= 2 {
        let weights: Option<Vec<W>> = (0..path.len())
            .map(|i| m.at(path[i], path[(i + 1) % path.len()]).finite())
            .collect();
        if let Some(weights) = weights {
            let total = weights.iter().fold(W::zero(), |a, &w| a + w);
            if total < bound {
                let k = weights.len();
                let start = (0..k).find(|&s| {
                    let mut acc = W::zero();
                    (0..k).all(|j| {
                        acc = acc + weights[(s + j) % k];
                        acc < bound
                    })
                });
                if let Some(s) = start {
                    let vertices = path[s..].iter().chain(&path[..s]).copied().collect();
                    out.push(CycleCandidate::new(
                        vertices,
                        total,
                        CycleSource::Exhaustive,
                    ));
                }
            }
        }
    }
    for v in low + 1..=n {
        if used[v] || !m.at(last, v).is_finite() {
            continue;
        }
        used[v] = true;
        path.push(v);
        cycle_dfs(m, bound, low, path, used, out);
        path.pop();
        used[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn worked_eight_point_optima() {
        let m = fixtures::ex34();
        let (tour, v) = brute_tsp(&m).unwrap();
        assert_eq!(v, 161);
        assert!(tour.is_n_cycle());
        assert_eq!(m.value(&tour), Cost::Finite(161));
        assert_eq!(brute_ap(&m).unwrap().1, 155);
        assert_eq!(hungarian_ap(&m).unwrap().1, 155);
    }

    #[test]
    fn two_points() {
        let m = CostMatrix::<i64>::parse("2\ninf 4\n9 inf\n").unwrap();
        let t = Permutation::from_images(&[2, 1]).unwrap();
        assert_eq!(brute_tsp(&m).unwrap(), (t.clone(), 13));
        assert_eq!(brute_ap(&m).unwrap(), (t.clone(), 13));
        assert_eq!(hungarian_ap(&m).unwrap(), (t, 13));
    }

    #[test]
    fn caps_and_infeasibility() {
        let big = CostMatrix::<i64>::random(12, 1, 9, 0).unwrap();
        assert!(matches!(brute_tsp(&big), Err(Error::TooLarge { .. })));
        assert!(matches!(brute_ap(&big), Err(Error::TooLarge { .. })));
        let dead = CostMatrix::<i64>::parse("3\ninf inf inf\n1 inf 1\n1 1 inf\n").unwrap();
        assert!(matches!(brute_ap(&dead), Err(Error::Infeasible(_))));
        assert!(matches!(hungarian_ap(&dead), Err(Error::Infeasible(_))));
        assert!(matches!(brute_tsp(&dead), Err(Error::Infeasible(_))));
    }

    #[test]
    fn bellman_ford_on_small_example() {
        let m = fixtures::ex32();
        assert!(bellman_ford(&m, 1).is_none());
        let mut open = m.entries().to_vec();
        open[9 * 10] = Cost::Inf;
        let open = CostMatrix::new(10, open).unwrap();
        let d = bellman_ford(&open, 1).unwrap();
        assert_eq!(d[6], Cost::Finite(3));
        assert_eq!(d[9], Cost::Finite(-2));
        assert_eq!(d[1], Cost::Inf);
    }

    #[test]
    fn enumerate_respects_bound() {
        let m = fixtures::ex34();
        let d3 = Permutation::parse_cycles(8, "(1 4 2 3)(5 7 8 6)").unwrap();
        let r = crate::matrix::reduce(&m, &d3).unwrap();
        assert!(enumerate_cycles(&r, 6).unwrap().is_empty());
        assert!(enumerate_cycles(&r, -1_000_000_000).unwrap().is_empty());
        let some = enumerate_cycles(&r, 30).unwrap();
        assert!(!some.is_empty());
        for c in &some {
            assert_eq!(r.cycle_value(&c.vertices), Cost::Finite(c.value));
        }
    }
}
