use super::{CostMatrix, Weights};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::Weight;

/// Each row's columns sorted by weight, ties by column; `Inf` last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinIndex {
    rows: Vec<Vec<usize>>,
    rank: Vec<Vec<usize>>,
}

pub fn min_index<W: Weight>(m: &CostMatrix<W>) -> MinIndex {
    let n = m.n();
    let mut rows = Vec::with_capacity(n);
    let mut rank = Vec::with_capacity(n);
    for i in 1..=n {
        let mut cols: Vec<usize> = (1..=n).collect();
        cols.sort_by_key(|&j| (m.at(i, j), j));
        let mut r = vec![0; n];
        for (t, &j) in cols.iter().enumerate() {
            r[j - 1] = t + 1;
        }
        rows.push(cols);
        rank.push(r);
    }
    MinIndex { rows, rank }
}

impl MinIndex {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i - 1]
    }

    /// The column in position `t` (1-based) of row `i`.
    pub fn get(&self, i: usize, t: usize) -> usize {
        self.rows[i - 1][t - 1]
    }

    /// Position (1-based) of column `j` within row `i`.
    pub fn ordinal(&self, i: usize, j: usize) -> usize {
        self.rank[i - 1][j - 1]
    }
}

/// `DIFF(a) = d(a, MIN(a, 1)) - d(a, D(a))`; zero when `D(a)` already is the
/// row minimum. Negative entries mark rows that can improve.
pub fn diff_vector<W: Weight>(
    m: &CostMatrix<W>,
    d: &Permutation,
    min: &MinIndex,
) -> Result<Vec<W>> {
    (1..=m.n()).map(|a| diff_at(m, d, min, a)).collect()
}

pub(crate) fn diff_at<W: Weight>(
    m: &CostMatrix<W>,
    d: &Permutation,
    min: &MinIndex,
    a: usize,
) -> Result<W> {
    let target = d.apply(a);
    let current = m.at(a, target).finite().ok_or(Error::InfiniteArc(a))?;
    let best = min.get(a, 1);
    if best == target {
        return Ok(W::zero());
    }
    Ok(m.at(a, best).finite().map_or(W::zero(), |w| w - current))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::Cost;

    #[test]
    fn worked_min_row() {
        let min = min_index(&fixtures::ex34());
        assert_eq!(min.row(1), &[5, 4, 7, 2, 8, 3, 6, 1]);
        assert_eq!(min.ordinal(1, 5), 1);
        assert_eq!(min.ordinal(1, 1), 8);
    }

    #[test]
    fn ties_by_column() {
        let m = CostMatrix::<i64>::from_fn(5, |_, _| Cost::Finite(7)).unwrap();
        let min = min_index(&m);
        assert_eq!(min.row(3), &[1, 2, 4, 5, 3]);
    }

    #[test]
    fn worked_diff_vectors() {
        let m = fixtures::ex34();
        let min = min_index(&m);
        let d = Permutation::parse_cycles(8, "(1 2 3 4 5 6 7 8)").unwrap();
        assert_eq!(
            diff_vector(&m, &d, &min).unwrap(),
            vec![-11, 0, -18, 0, -30, -23, -4, 0]
        );
        let d1 = d
            .compose(&Permutation::parse_cycles(8, "(5 6 4)").unwrap())
            .unwrap();
        assert_eq!(diff_vector(&m, &d1, &min).unwrap()[3], -31);
    }

    #[test]
    fn diff_zero_on_row_minima() {
        let m =
            CostMatrix::<i64>::from_fn(4, |i, j| Cost::Finite(if j == i % 4 + 1 { 1 } else { 10 }))
                .unwrap();
        let d = Permutation::parse_cycles(4, "(1 2 3 4)").unwrap();
        assert_eq!(diff_vector(&m, &d, &min_index(&m)).unwrap(), vec![0; 4]);
    }
}
