use super::{CostMatrix, Weights};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::{Cost, Weight};

/// `r(u, v) = d(u, D(v)) - d(u, D(u))`: the columns of the base matrix
/// permuted by `D^-1` and each row shifted so the arc of `D` costs zero.
///
/// A cycle `s` of value `x` here corresponds to `value(D.compose(s)) = value(D) + x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedMatrix<W> {
    n: usize,
    perm: Permutation,
    inverse: Permutation,
    data: Vec<Cost<W>>,
    order: Vec<Vec<usize>>,
}

pub fn reduce<W: Weight>(m: &CostMatrix<W>, d: &Permutation) -> Result<ReducedMatrix<W>> {
    let n = m.n();
    if d.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: d.n(),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    for u in 1..=n {
        let base = m.at(u, d.apply(u)).finite().ok_or(Error::InfiniteArc(u))?;
        data.extend((1..=n).map(|v| m.at(u, d.apply(v)).minus(base)));
    }
    Ok(ReducedMatrix::build(n, d.clone(), data))
}

impl<W: Weight> ReducedMatrix<W> {
    /// A reduced matrix given directly, with `D` the identity. The diagonal
    /// must be zero.
    pub fn from_entries(n: usize, data: Vec<Cost<W>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        for u in 1..=n {
            if data[(u - 1) * n + (u - 1)] != Cost::zero() {
                return Err(Error::MatrixEntry {
                    row: u,
                    col: u,
                    message: "reduced diagonal must be 0".into(),
                });
            }
        }
        Ok(Self::build(n, Permutation::identity(n), data))
    }

    fn build(n: usize, perm: Permutation, data: Vec<Cost<W>>) -> Self {
        // Sorting by (value, D(v)) reproduces the base MIN order mapped through D^-1.
        let order = (0..n)
            .map(|u| {
                let mut cols: Vec<usize> = (1..=n).collect();
                cols.sort_by_key(|&v| (data[u * n + v - 1], perm.apply(v)));
                cols
            })
            .collect();
        let inverse = perm.inverse();
        ReducedMatrix {
            n,
            perm,
            inverse,
            data,
            order,
        }
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn inverse(&self) -> &Permutation {
        &self.inverse
    }

    /// Row `u`'s columns in ascending reduced value; equals
    /// `[D^-1(c) for c in MIN(M) row u]`.
    pub fn min_order(&self, u: usize) -> &[usize] {
        &self.order[u - 1]
    }

    pub fn row(&self, u: usize) -> &[Cost<W>] {
        &self.data[(u - 1) * self.n..u * self.n]
    }
}

impl<W: Weight> Weights<W> for ReducedMatrix<W> {
    fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Cost<W> {
        self.data[(i - 1) * self.n + (j - 1)]
    }
}
