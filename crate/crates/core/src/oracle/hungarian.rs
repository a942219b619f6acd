use crate::error::{Error, Result};
use crate::matrix::{CostMatrix, Weights};
use crate::perm::Permutation;
use crate::scalar::Weight;

/// Minimum-value permutation by the `O(n^3)` potentials method. Infinite
/// entries are forbidden assignments; arithmetic is done in `i128`.
pub fn hungarian_ap<W: Weight>(m: &CostMatrix<W>) -> Result<(Permutation, W)> {
    let n = m.n();
    let cost =
        |i: usize, j: usize| -> Option<i128> { m.at(i, j).finite().and_then(|w| w.to_i128()) };

    // u: row potentials, v: column potentials, p[j]: row matched to column j
    // (column 0 is the virtual start), way[j]: previous column on the
    // augmenting path.
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![None::<i128>; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<i128> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0, j) {
                    let cur = c - u[i0] - v[j];
                    if minv[j].is_none_or(|mv| cur < mv) {
                        minv[j] = Some(cur);
                        way[j] = j0;
                    }
                }
                if let Some(mv) = minv[j] {
                    if delta.is_none_or(|d| mv < d) {
                        delta = Some(mv);
                        j1 = j;
                    }
                }
            }
            let delta =
                delta.ok_or_else(|| Error::Infeasible(format!("row {i} cannot be assigned")))?;
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if let Some(mv) = minv[j].as_mut() {
                    *mv -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut images = vec![0usize; n];
    for j in 1..=n {
        images[p[j] - 1] = j;
    }
    let perm = Permutation::from_images(&images)?;
    let mut value = W::zero();
    for (row, &col) in images.iter().enumerate() {
        value = value
            + m.at(row + 1, col)
                .finite()
                .ok_or_else(|| Error::Infeasible("no finite assignment".into()))?;
    }
    Ok((perm, value))
}
