//! The three-phase pipeline: greedy cycle construction from the sorted row
//! index, cancellation to the assignment optimum, and bounded searches for
//! a cheaper tour.

mod phase1;
mod phase2;
mod phase3;
mod report;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fw::CycleCandidate;
use crate::matrix::{min_index, CostMatrix, MinIndex};
use crate::perm::Permutation;
use crate::scalar::{log_round, Weight};

pub use phase1::{phase1, run_phase1};
pub use phase2::phase2;
pub use phase3::{disjoint_products, phase3, Certificate, Phase3Config, TourResult};
pub use report::{instance_hash, solve, SolveOptions, SolveReport, Timings};

/// One derangement in the descent and the cycles that produced it from its
/// predecessor.
#[derive(Clone, Debug, Serialize)]
pub struct Step<W> {
    pub phase: u8,
    pub derangement: Permutation,
    pub value: W,
    pub applied: Vec<CycleCandidate<W>>,
}

/// A negative cycle kept for later tour harvesting, with the index of the
/// history entry it was measured against.
#[derive(Clone, Debug, Serialize)]
pub struct BagEntry<W> {
    pub base: usize,
    pub cycle: CycleCandidate<W>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phase1Config {
    /// Start vertices tried per round, most negative DIFF first.
    pub starts: usize,
    /// Trials per start, one per leading MIN column.
    pub trials: usize,
}

impl Phase1Config {
    pub fn for_size(n: usize) -> Self {
        Phase1Config {
            starts: log_round(n) + 1,
            trials: log_round(n) + 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverState<W> {
    pub matrix: CostMatrix<W>,
    pub min: MinIndex,
    pub current: Permutation,
    pub history: Vec<Step<W>>,
    pub bag: Vec<BagEntry<W>>,
    pub bounds: Vec<W>,
    pub best_tour: Option<(Permutation, W)>,
}

impl<W: Weight> SolverState<W> {
    pub fn new(matrix: CostMatrix<W>, d0: Permutation) -> Result<Self> {
        if d0.n() != matrix.n() {
            return Err(Error::SizeMismatch {
                expected: matrix.n(),
                got: d0.n(),
            });
        }
        let value = matrix.value(&d0).finite().ok_or_else(|| {
            Error::InvalidArgument(format!("starting permutation {d0} has infinite value"))
        })?;
        let min = min_index(&matrix);
        Ok(SolverState {
            matrix,
            min,
            current: d0.clone(),
            history: vec![Step {
                phase: 0,
                derangement: d0,
                value,
                applied: Vec::new(),
            }],
            bag: Vec::new(),
            bounds: Vec::new(),
            best_tour: None,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn current_value(&self) -> W {
        self.history.last().expect("history starts non-empty").value
    }

    /// Replaces `current` by `current . (product of cycles)`.
    pub(crate) fn apply(&mut self, phase: u8, cycles: Vec<CycleCandidate<W>>) -> Result<()> {
        let n = self.n();
        let mut next = self.current.clone();
        let mut delta = W::zero();
        for c in &cycles {
            next = next.compose(&c.to_permutation(n)?)?;
            delta = delta + c.value;
        }
        let value = self.current_value() + delta;
        debug_assert_eq!(self.matrix.value(&next).finite(), Some(value));
        self.current = next.clone();
        self.history.push(Step {
            phase,
            derangement: next,
            value,
            applied: cycles,
        });
        Ok(())
    }

    pub(crate) fn offer_tour(&mut self, tour: Permutation, value: W) -> bool {
        if self.best_tour.as_ref().is_none_or(|(_, v)| value < *v) {
            self.best_tour = Some((tour, value));
            true
        } else {
            false
        }
    }
}
