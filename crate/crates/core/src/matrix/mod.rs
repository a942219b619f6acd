//! Dense cost matrices, the sorted row index, and reductions by a derangement.

mod io;
pub(crate) mod min;
mod reduced;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::{Cost, Weight};

pub use min::{diff_vector, min_index, MinIndex};
pub use reduced::{reduce, ReducedMatrix};

/// Read access shared by every square weight table the searches run on.
/// Indices are 1-based.
pub trait Weights<W: Weight> {
    fn n(&self) -> usize;
    fn at(&self, i: usize, j: usize) -> Cost<W>;

    /// Arc sum of a closed walk `v[0] -> v[1] -> ... -> v[0]`.
    fn cycle_value(&self, vertices: &[usize]) -> Cost<W> {
        let k = vertices.len();
        Cost::total((0..k).map(|i| self.at(vertices[i], vertices[(i + 1) % k])))
    }

    /// Arc sum of an open path.
    fn path_value(&self, vertices: &[usize]) -> Cost<W> {
        Cost::total(vertices.windows(2).map(|w| self.at(w[0], w[1])))
    }
}

/// An `n x n` arc-weight table with `+INF` on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CostMatrix<W> {
    n: usize,
    data: Vec<Cost<W>>,
}

impl<W: Weight> CostMatrix<W> {
    /// Row-major entries. The diagonal must be `Inf` and finite entries must
    /// leave room for sums of `2n` terms.
    pub fn new(n: usize, data: Vec<Cost<W>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix must have n >= 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        let m = CostMatrix { n, data };
        m.validate()?;
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Cost<W>>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::MatrixFormat {
                    line: i + 1,
                    message: format!("row {} has {} entries, expected {n}", i + 1, row.len()),
                });
            }
            data.extend(row);
        }
        Self::new(n, data)
    }

    /// Builds from `f(i, j)` for off-diagonal cells; the diagonal is set to `Inf`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cost<W>) -> Result<Self> {
        let mut data = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                data.push(if i == j { Cost::Inf } else { f(i, j) });
            }
        }
        Self::new(n, data)
    }

    /// Uniform weights in `lo..=hi` off the diagonal.
    pub fn random(n: usize, lo: W, hi: W, seed: u64) -> Result<Self> {
        let (a, b) = match (lo.to_i64(), hi.to_i64()) {
            (Some(a), Some(b)) if a <= b => (a, b),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "bad weight range [{lo}, {hi}]"
                )))
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Uniform::new_inclusive(a, b);
        Self::from_fn(n, |_, _| {
            Cost::Finite(W::from(dist.sample(&mut rng)).expect("in range by construction"))
        })
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        let room = W::from(2 * n + 2).ok_or_else(|| Error::Overflow(format!("n = {n}")))?;
        let limit = W::max_value() / room;
        for i in 1..=n {
            for j in 1..=n {
                match self.at(i, j) {
                    Cost::Finite(_) if i == j => {
                        return Err(Error::MatrixEntry {
                            row: i,
                            col: j,
                            message: "diagonal entries must be inf".into(),
                        })
                    }
                    Cost::Finite(w) if w > limit || w < -limit => {
                        return Err(Error::MatrixEntry {
                            row: i,
                            col: j,
                            message: format!("|{w}| exceeds the headroom limit {limit}"),
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Cost<W>] {
        &self.data[(i - 1) * self.n..i * self.n]
    }

    pub fn entries(&self) -> &[Cost<W>] {
        &self.data
    }

    /// `sum_a d(a, p(a))`. Fixed points hit the diagonal, so only
    /// derangements can be finite.
    pub fn value(&self, p: &Permutation) -> Cost<W> {
        assert_eq!(p.n(), self.n, "permutation size differs from matrix");
        Cost::total((1..=self.n).map(|a| self.at(a, p.apply(a))))
    }

    /// Adds `c` to every finite entry.
    pub fn shift_rows(&self, c: W) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|e| match *e {
                Cost::Finite(w) => w
                    .checked_add(&c)
                    .map(Cost::Finite)
                    .ok_or_else(|| Error::Overflow(format!("{w} + {c}"))),
                Cost::Inf => Ok(Cost::Inf),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, data)
    }

    /// Widens or narrows the scalar type.
    pub fn cast<V: Weight>(&self) -> Result<CostMatrix<V>> {
        let data = self
            .data
            .iter()
            .map(|e| match *e {
                Cost::Finite(w) => V::from(w)
                    .map(Cost::Finite)
                    .ok_or_else(|| Error::Overflow(format!("{w} does not fit"))),
                Cost::Inf => Ok(Cost::Inf),
            })
            .collect::<Result<Vec<_>>>()?;
        CostMatrix::new(self.n, data)
    }
}

impl<W: Weight> Weights<W> for CostMatrix<W> {
    fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Cost<W> {
        self.data[(i - 1) * self.n + (j - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn worked_matrix_entries() {
        let m = fixtures::ex34();
        assert_eq!(m.n(), 8);
        assert_eq!(m.at(1, 2), Cost::Finite(23));
        assert_eq!(m.at(8, 7), Cost::Finite(92));
        assert_eq!(m.at(4, 4), Cost::Inf);
    }

    #[test]
    fn values_of_worked_permutations() {
        let m = fixtures::ex34();
        let d3 = Permutation::parse_cycles(8, "(1 4 2 3)(5 7 8 6)").unwrap();
        assert_eq!(m.value(&d3), Cost::Finite(155));
        let sigma1 = Permutation::parse_cycles(8, "(1 4 8 6 5 7 2 3)").unwrap();
        assert_eq!(m.value(&sigma1), Cost::Finite(161));
        let fixed = Permutation::parse_cycles(8, "(1 2 3 4 5 6 7)").unwrap();
        assert_eq!(m.value(&fixed), Cost::Inf);
    }

    #[test]
    fn rejects_finite_diagonal() {
        let err = CostMatrix::<i64>::new(2, vec![Cost::Finite(0), 1.into(), 1.into(), Cost::Inf]);
        assert!(matches!(
            err,
            Err(Error::MatrixEntry { row: 1, col: 1, .. })
        ));
    }

    #[test]
    fn rejects_entries_without_headroom() {
        let err = CostMatrix::<i32>::new(2, vec![Cost::Inf, i32::MAX.into(), 1.into(), Cost::Inf]);
        assert!(matches!(
            err,
            Err(Error::MatrixEntry { row: 1, col: 2, .. })
        ));
    }

    #[test]
    fn shift_by_zero_is_identity() {
        let m = fixtures::ex34();
        assert_eq!(m.shift_rows(0).unwrap(), m);
        assert_eq!(m.shift_rows(7).unwrap().at(1, 2), Cost::Finite(30));
    }

    #[test]
    fn random_is_seeded() {
        let a = CostMatrix::<i64>::random(6, -5, 20, 3).unwrap();
        assert_eq!(a, CostMatrix::random(6, -5, 20, 3).unwrap());
        assert!(a.entries().iter().all(|c| match c {
            Cost::Finite(w) => (-5..=20).contains(w),
            Cost::Inf => true,
        }));
        assert!(CostMatrix::<i64>::random(3, 5, 1, 0).is_err());
    }

    #[test]
    fn random_weights_centre_on_midpoint() {
        let m = CostMatrix::<i64>::random(317, 1, 100, 11).unwrap();
        let w: Vec<f64> = m
            .entries()
            .iter()
            .filter_map(|c| c.finite())
            .map(|w| w as f64)
            .collect();
        assert!(w.len() >= 100_000);
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        let sd = ((100.0f64 * 100.0 - 1.0) / 12.0).sqrt() / (w.len() as f64).sqrt();
        assert!((mean - 50.5).abs() < 3.0 * sd, "mean {mean}");
    }
}
