//! Negative cycle cancelling for the assignment problem and the travelling
//! salesman problem over dense integer cost matrices.
//!
//! A derangement `D` is improved by cycles that are negative in the reduced
//! matrix `r(u, v) = d(u, D(v)) - d(u, D(u))`. Cancelling until none remain
//! gives the assignment optimum; bounded cycle searches on top of that
//! produce a tour and, when they come up empty, certify it.

pub mod detvertex;
pub mod error;
pub mod fw;
pub mod matrix;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod perm;
pub mod phases;
pub mod scalar;
pub mod trace;

pub use detvertex::{FoldOutcome, WeightedCycle};
pub use error::{Error, Result};
pub use fw::{
    classic_apsp, column_span, ctree_search, nnvs_search, nvs_search, ApspOutcome, CycleCandidate,
    CycleSource, PathTable,
};
pub use matrix::{diff_vector, min_index, reduce, CostMatrix, MinIndex, ReducedMatrix, Weights};
pub use perm::{CycleDecomposition, Permutation};
pub use phases::{
    phase1, phase2, phase3, solve, Certificate, Phase1Config, Phase3Config, SolveOptions,
    SolveReport, SolverState, TourResult,
};
pub use scalar::{log_round, Cost, Weight};

pub type CostMatrixI32 = CostMatrix<i32>;
pub type CostMatrixI64 = CostMatrix<i64>;
pub type CostMatrixI128 = CostMatrix<i128>;
pub type ReducedMatrixI64 = ReducedMatrix<i64>;
pub type WeightedCycleI64 = WeightedCycle<i64>;

/// Bundled instances.
pub mod fixtures {
    use crate::matrix::CostMatrix;

    pub const EX32_MAT: &str = include_str!("../fixtures/ex32.mat");
    pub const EX34_MAT: &str = include_str!("../fixtures/ex34.mat");
    pub const EX35_MAT: &str = include_str!("../fixtures/ex35.mat");

    /// 25 cycle weights with total -4 whose only folding answer is start 18.
    pub const FOLD_CYCLE: [i64; 25] = [
        -7, -10, 1, 2, -7, 4, -9, 11, -2, -1, -4, -4, -8, 9, 9, 21, 1, -2, -1, -3, -3, -12, 6, 2, 3,
    ];

    /// Ten vertices, six arcs, one negative cycle `(1 3 7 10)`.
    pub fn ex32() -> CostMatrix<i64> {
        CostMatrix::parse(EX32_MAT).expect("bundled fixture parses")
    }

    /// 8 x 8 instance: assignment optimum 155, tour optimum 161.
    pub fn ex34() -> CostMatrix<i64> {
        CostMatrix::parse(EX34_MAT).expect("bundled fixture parses")
    }

    /// 20 x 20 instance: assignment optimum 212, tour optimum 213.
    pub fn ex35() -> CostMatrix<i64> {
        CostMatrix::parse(EX35_MAT).expect("bundled fixture parses")
    }
}
