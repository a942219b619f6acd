use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{phase1, phase2, phase3, Certificate, Phase1Config, Phase3Config, Step};
use crate::error::{Error, Result};
use crate::matrix::CostMatrix;
use crate::perm::Permutation;
use crate::scalar::Weight;
use crate::trace::TraceSink;

const START_ATTEMPTS: u64 = 1000;

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub seed: u64,
    /// Starting derangement; a random finite n-cycle when absent.
    pub initial: Option<Permutation>,
    pub restarts: Option<usize>,
    pub threads: Option<usize>,
    pub phase1: Option<Phase1Config>,
    pub product_cap: Option<usize>,
    pub ctree_budget: Option<u64>,
    pub product_budget: Option<u64>,
    pub timings: bool,
}

/// Wall-clock milliseconds per phase.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Timings {
    pub phase1_ms: f64,
    pub phase2_ms: f64,
    pub phase3_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport<W> {
    pub instance_hash: String,
    pub n: usize,
    pub seed: u64,
    pub initial: Permutation,
    pub initial_value: W,
    pub phase1_steps: Vec<Step<W>>,
    pub phase2_steps: Vec<Step<W>>,
    pub ap_permutation: Permutation,
    pub ap_value: W,
    pub sigma1: Permutation,
    pub sigma1_value: W,
    pub bounds: Vec<W>,
    pub tour: Permutation,
    pub tour_value: W,
    pub certified: bool,
    pub certificate: Option<Certificate>,
    pub restarts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// SHA-256 of the canonical text form, hex encoded.
pub fn instance_hash<W: Weight>(m: &CostMatrix<W>) -> String {
    hex::encode(Sha256::digest(m.to_text().as_bytes()))
}

fn starting_tour<W: Weight>(m: &CostMatrix<W>, seed: u64) -> Result<Permutation> {
    for attempt in 0..START_ATTEMPTS {
        let d = Permutation::random_n_cycle(m.n(), seed.wrapping_add(attempt))?;
        if m.value(&d).is_finite() {
            return Ok(d);
        }
    }
    Err(Error::Infeasible(format!(
        "no finite tour among {START_ATTEMPTS} random starts"
    )))
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

/// All three phases end to end.
pub fn solve<W: Weight>(
    m: &CostMatrix<W>,
    opts: &SolveOptions,
    trace: &mut dyn TraceSink,
) -> Result<SolveReport<W>> {
    let n = m.n();
    if n < 2 {
        return Err(Error::Infeasible("a tour needs at least 2 vertices".into()));
    }
    let d0 = match &opts.initial {
        Some(d) => {
            if d.n() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    got: d.n(),
                });
            }
            if !d.is_derangement() {
                return Err(Error::InvalidArgument(format!("{d} has a fixed point")));
            }
            d.clone()
        }
        None => starting_tour(m, opts.seed)?,
    };

    let mut p3 = Phase3Config::for_size(n, opts.seed);
    let p1 = opts.phase1.unwrap_or(p3.phase1);
    p3.phase1 = p1;
    p3.threads = opts.threads;
    if let Some(r) = opts.restarts {
        p3.restarts = r;
    }
    if let Some(c) = opts.product_cap {
        p3.product_cap = c;
    }
    if let Some(b) = opts.ctree_budget {
        p3.ctree_budget = b;
    }
    if let Some(b) = opts.product_budget {
        p3.product_budget = b;
    }

    let t = Instant::now();
    let mut state = phase1(m, d0.clone(), p1, trace)?;
    let phase1_ms = ms(t);
    let after1 = state.history.len();
    let t = Instant::now();
    phase2(&mut state, trace)?;
    let phase2_ms = ms(t);
    let ap_permutation = state.current.clone();
    let ap_value = state.current_value();
    let t = Instant::now();
    let tour = phase3(&mut state, &p3, trace)?;
    let phase3_ms = ms(t);

    Ok(SolveReport {
        instance_hash: instance_hash(m),
        n,
        seed: opts.seed,
        initial: d0,
        initial_value: state.history[0].value,
        phase1_steps: state.history[1..after1].to_vec(),
        phase2_steps: state.history[after1..].to_vec(),
        ap_permutation,
        ap_value,
        sigma1: tour.sigma1,
        sigma1_value: tour.sigma1_value,
        bounds: tour.bounds,
        tour: tour.tour,
        tour_value: tour.value,
        certified: tour.certified,
        certificate: tour.certificate,
        restarts: tour.restarts_run,
        timings: opts.timings.then_some(Timings {
            phase1_ms,
            phase2_ms,
            phase3_ms,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::trace::{NullTrace, VecTrace};

    fn worked_opts() -> SolveOptions {
        SolveOptions {
            initial: Some(Permutation::parse_cycles(8, "(1 2 3 4 5 6 7 8)").unwrap()),
            ..Default::default()
        }
    }

    #[test]
    fn eight_point_end_to_end() {
        let r = solve(&fixtures::ex34(), &worked_opts(), &mut NullTrace).unwrap();
        assert_eq!(r.phase1_steps.len(), 3);
        assert!(r.phase2_steps.is_empty());
        assert_eq!(r.ap_value, 155);
        assert_eq!(r.tour_value, 161);
        assert!(r.certified);
        assert!(r.tour.is_n_cycle());
        assert!(r.timings.is_none());
    }

    #[test]
    fn report_json_is_deterministic() {
        let m = fixtures::ex35();
        let opts = SolveOptions {
            seed: 7,
            ..Default::default()
        };
        let a = serde_json::to_string(&solve(&m, &opts, &mut NullTrace).unwrap()).unwrap();
        let b = serde_json::to_string(&solve(&m, &opts, &mut NullTrace).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timings"));
        assert!(a.contains(&instance_hash(&m)));
    }

    #[test]
    fn trace_records_phase_steps() {
        let mut t = VecTrace::default();
        solve(&fixtures::ex34(), &worked_opts(), &mut t).unwrap();
        assert_eq!(t.of_kind("phase1-step").count(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        let one = CostMatrix::<i64>::parse("1\ninf\n").unwrap();
        assert!(solve(&one, &SolveOptions::default(), &mut NullTrace).is_err());
        let opts = SolveOptions {
            initial: Some(Permutation::identity(8)),
            ..Default::default()
        };
        assert!(solve(&fixtures::ex34(), &opts, &mut NullTrace).is_err());
    }
}
