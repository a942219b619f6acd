use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{run_phase1, BagEntry, Phase1Config, SolverState, Step};
use crate::error::{Error, Result};
use crate::fw::{ctree_search, nnvs_search, CycleCandidate};
use crate::matrix::reduce;
use crate::perm::Permutation;
use crate::scalar::{log_round, Weight};
use crate::trace::{event, NullTrace, TraceSink};

/// Why a tour is known to be optimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// The tour costs the same as the assignment optimum.
    NoGap,
    /// The bounded sweep closed no cycle below the gap.
    EmptyBoundedSearch,
    /// Every cycle below the gap, and every disjoint product of them, was
    /// checked.
    ExhaustiveSearch,
}

#[derive(Clone, Debug)]
pub struct Phase3Config {
    pub restarts: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub phase1: Phase1Config,
    /// Most cycles combined in one product while harvesting and during the
    /// bounded sweep.
    pub product_cap: usize,
    pub ctree_budget: u64,
    pub product_budget: u64,
}

impl Phase3Config {
    pub fn for_size(n: usize, seed: u64) -> Self {
        Phase3Config {
            restarts: n * log_round(n),
            seed,
            threads: None,
            phase1: Phase1Config::for_size(n),
            product_cap: log_round(n),
            ctree_budget: 20_000_000,
            product_budget: 5_000_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TourResult<W> {
    pub tour: Permutation,
    pub value: W,
    pub certified: bool,
    pub certificate: Option<Certificate>,
    pub sigma1: Permutation,
    pub sigma1_value: W,
    pub ap_value: W,
    pub bounds: Vec<W>,
    pub restarts_run: usize,
    pub bounded_cycles: usize,
    pub ctree_cycles: usize,
}

/// Products of pairwise disjoint cycles from `cycles`, at most `cap` at a
/// time, that turn `sigma` into a tour. Values use the reduced-cost
/// identity `value(sigma . s) = sigma_value + value(s)`.
pub fn disjoint_products<W: Weight>(
    cycles: &[CycleCandidate<W>],
    sigma: &Permutation,
    sigma_value: W,
    cap: usize,
) -> Vec<(Permutation, W)> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used = vec![false; sigma.n() + 1];
    products_from(
        cycles,
        0,
        cap,
        sigma,
        sigma_value,
        &mut chosen,
        &mut used,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn products_from<W: Weight>(
    cycles: &[CycleCandidate<W>],
    from: usize,
    cap: usize,
    sigma: &Permutation,
    value: W,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<(Permutation, W)>,
) {
    if chosen.len() == cap {
        return;
    }
    for i in from..cycles.len() {
        let c = &cycles[i];
        if c.vertices.iter().any(|&v| used[v]) {
            continue;
        }
        chosen.push(i);
        for &v in &c.vertices {
            used[v] = true;
        }
        let next = value + c.value;
        if let Some(tour) = apply_cycles(sigma, chosen.iter().map(|&k| &cycles[k])) {
            if tour.is_n_cycle() {
                out.push((tour, next));
            }
        }
        products_from(cycles, i + 1, cap, sigma, next, chosen, used, out);
        for &v in &c.vertices {
            used[v] = false;
        }
        chosen.pop();
    }
}

fn apply_cycles<'a, W: Weight + 'a>(
    sigma: &Permutation,
    cycles: impl IntoIterator<Item = &'a CycleCandidate<W>>,
) -> Option<Permutation> {
    let n = sigma.n();
    let cycles: Vec<&[usize]> = cycles.into_iter().map(|c| c.vertices.as_slice()).collect();
    let s = Permutation::from_cycles(n, &cycles).ok()?;
    sigma.compose(&s).ok()
}

/// Best tour among the derangements of a run and the products of each
/// one's bag cycles. The flag is true when that tour is the starting
/// derangement itself.
fn harvest<W: Weight>(
    history: &[Step<W>],
    bag: &[BagEntry<W>],
    cap: usize,
) -> Option<(Permutation, W, bool)> {
    let mut best: Option<(Permutation, W, bool)> = None;
    let mut offer = |p: Permutation, v: W, initial: bool| {
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((p, v, initial));
        }
    };
    for (i, step) in history.iter().enumerate().rev() {
        if step.derangement.is_n_cycle() {
            offer(step.derangement.clone(), step.value, i == 0);
        }
        let cycles: Vec<CycleCandidate<W>> = bag
            .iter()
            .filter(|e| e.base == i)
            .map(|e| e.cycle.clone())
            .collect();
        for (tour, value) in disjoint_products(&cycles, &step.derangement, step.value, cap) {
            offer(tour, value, false);
        }
    }
    best
}

fn restart_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7265_7374_6172_7473);
    (0..count).map(|_| rng.gen()).collect()
}

fn restarts<W: Weight>(
    state: &SolverState<W>,
    cfg: &Phase3Config,
) -> Result<Option<(Permutation, W)>> {
    let n = state.n();
    let seeds = restart_seeds(cfg.seed, cfg.restarts);
    let run = |&seed: &u64| -> Result<Option<(Permutation, W)>> {
        let d0 = Permutation::random_n_cycle(n, seed)?;
        if !state.matrix.value(&d0).is_finite() {
            return Ok(None);
        }
        let mut st = SolverState::new(state.matrix.clone(), d0)?;
        run_phase1(&mut st, cfg.phase1, &mut NullTrace)?;
        Ok(harvest(&st.history, &st.bag, cfg.product_cap).map(|(p, v, _)| (p, v)))
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<Result<Option<(Permutation, W)>>> =
        pool.install(|| seeds.par_iter().map(run).collect());
    let mut best: Option<(Permutation, W)> = None;
    for r in results {
        if let Some((p, v)) = r? {
            if best.as_ref().is_none_or(|b| v < b.1) {
                best = Some((p, v));
            }
        }
    }
    Ok(best)
}

/// Tour extraction and certification on top of the assignment optimum held
/// in `state.current`.
pub fn phase3<W: Weight>(
    state: &mut SolverState<W>,
    cfg: &Phase3Config,
    trace: &mut dyn TraceSink,
) -> Result<TourResult<W>> {
    let sigma_ap = state.current.clone();
    let ap = state.current_value();

    let mut restarts_run = 0;
    let harvested = harvest(&state.history, &state.bag, cfg.product_cap);
    let mut best = harvested.as_ref().map(|(p, v, _)| (p.clone(), *v));
    if harvested.as_ref().is_none_or(|h| h.2) && cfg.restarts > 0 {
        restarts_run = cfg.restarts;
        if let Some((p, v)) = restarts(state, cfg)? {
            if best.as_ref().is_none_or(|b| v < b.1) {
                best = Some((p, v));
            }
        }
    }
    let (sigma1, sigma1_value) =
        best.ok_or_else(|| Error::Infeasible("no tour found within the restart budget".into()))?;
    state.offer_tour(sigma1.clone(), sigma1_value);
    if trace.enabled() {
        trace.emit(event(
            "tour-harvested",
            json!({ "tour": sigma1.to_string(), "value": sigma1_value.to_string() }),
        ));
    }

    let mut result = TourResult {
        tour: sigma1.clone(),
        value: sigma1_value,
        certified: false,
        certificate: None,
        sigma1,
        sigma1_value,
        ap_value: ap,
        bounds: Vec::new(),
        restarts_run,
        bounded_cycles: 0,
        ctree_cycles: 0,
    };

    let gap = sigma1_value - ap;
    result.bounds.push(gap);
    if gap <= W::zero() {
        result.certified = true;
        result.certificate = Some(Certificate::NoGap);
        state.bounds = result.bounds.clone();
        return Ok(result);
    }

    let r = reduce(&state.matrix, &sigma_ap)?;
    let mut products = ProductSearch::new(&sigma_ap, ap, gap, cfg.product_budget);
    let mut found: Vec<CycleCandidate<W>> = Vec::new();
    let depth = cfg.product_cap.max(1);
    let bounded = {
        let mut on_cycle = |c: &CycleCandidate<W>| -> Option<W> {
            let before = products.bound;
            products.with_cycle(c, &found, depth - 1);
            let at = found.partition_point(|o| o.value <= c.value);
            found.insert(at, c.clone());
            (products.bound < before).then_some(products.bound)
        };
        nnvs_search(&r, gap, &mut on_cycle, trace)?
    };
    result.bounds.extend(bounded.bounds.iter().skip(1).copied());
    result.bounded_cycles = bounded.cycles.len();
    if let Some((tour, value)) = products.take_best() {
        result.tour = tour;
        result.value = value;
    }

    if bounded.cycles.is_empty() {
        finish(state, &mut result, Some(Certificate::EmptyBoundedSearch));
        return Ok(result);
    }
    let bound = result.value - ap;
    if bound <= W::zero() {
        finish(state, &mut result, Some(Certificate::NoGap));
        return Ok(result);
    }

    let tree = ctree_search(&r, bound, Some(cfg.ctree_budget))?;
    result.ctree_cycles = tree.cycles.len();
    let mut cycles = tree.cycles;
    cycles.sort_by_key(|c| (c.value, c.key()));
    let mut search = ProductSearch::new(&sigma_ap, ap, bound, cfg.product_budget);
    let product_complete = search.run(&cycles, 0, usize::MAX, W::zero());
    if let Some((tour, value)) = search.take_best() {
        result.tour = tour;
        result.value = value;
        result.bounds.push(value - ap);
        if trace.enabled() {
            trace.emit(event(
                "tour-improved",
                json!({ "tour": result.tour.to_string(), "value": value.to_string() }),
            ));
        }
    }
    let cert = (tree.complete && product_complete).then_some(Certificate::ExhaustiveSearch);
    finish(state, &mut result, cert);
    Ok(result)
}

fn finish<W: Weight>(
    state: &mut SolverState<W>,
    result: &mut TourResult<W>,
    cert: Option<Certificate>,
) {
    result.certified = cert.is_some();
    result.certificate = cert;
    state.bounds = result.bounds.clone();
    state.offer_tour(result.tour.clone(), result.value);
}

/// Depth-first choice of pairwise disjoint non-negative cycles, sorted by
/// value, whose total stays below the gap. Cycles are applied to `sigma` in
/// place; `bound` shrinks whenever a cheaper tour turns up.
struct ProductSearch<W> {
    sigma: Vec<usize>,
    images: Vec<usize>,
    used: Vec<bool>,
    ap: W,
    bound: W,
    budget: u64,
    nodes: u64,
    best: Option<(Vec<usize>, W)>,
}

impl<W: Weight> ProductSearch<W> {
    fn new(sigma: &Permutation, ap: W, bound: W, budget: u64) -> Self {
        let mut images = vec![0];
        images.extend(sigma.images());
        ProductSearch {
            sigma: images.clone(),
            used: vec![false; images.len()],
            images,
            ap,
            bound,
            budget,
            nodes: 0,
            best: None,
        }
    }

    fn take_best(&mut self) -> Option<(Permutation, W)> {
        self.best.take().map(|(images, value)| {
            let p = Permutation::from_images(&images[1..]).expect("product of disjoint cycles");
            (p, value)
        })
    }

    fn apply(&mut self, c: &CycleCandidate<W>) {
        let k = c.vertices.len();
        for (i, &v) in c.vertices.iter().enumerate() {
            self.images[v] = self.sigma[c.vertices[(i + 1) % k]];
            self.used[v] = true;
        }
    }

    fn undo(&mut self, c: &CycleCandidate<W>) {
        for &v in &c.vertices {
            self.images[v] = self.sigma[v];
            self.used[v] = false;
        }
    }

    fn is_tour(&self) -> bool {
        let n = self.images.len() - 1;
        let mut v = 1;
        for step in 1..=n {
            v = self.images[v];
            if v == 1 {
                return step == n;
            }
        }
        false
    }

    fn offer(&mut self, value: W) {
        if value < self.bound && self.is_tour() {
            self.bound = value;
            self.best = Some((self.images.clone(), self.ap + value));
        }
    }

    /// Tours using `c` alone or together with up to `depth` of `others`.
    fn with_cycle(&mut self, c: &CycleCandidate<W>, others: &[CycleCandidate<W>], depth: usize) {
        if c.value >= self.bound {
            return;
        }
        self.apply(c);
        self.offer(c.value);
        if depth > 0 && self.nodes < self.budget {
            self.run(others, 0, depth, c.value);
        }
        self.undo(c);
    }

    /// False when the node budget ran out.
    fn run(&mut self, cycles: &[CycleCandidate<W>], from: usize, depth: usize, value: W) -> bool {
        if depth == 0 {
            return true;
        }
        for (i, c) in cycles.iter().enumerate().skip(from) {
            let next = value + c.value;
            if next >= self.bound {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            if c.vertices.iter().any(|&v| self.used[v]) {
                continue;
            }
            self.apply(c);
            self.offer(next);
            let ok = self.run(cycles, i + 1, depth - 1, next);
            self.undo(c);
            if !ok {
                return false;
            }
        }
        true
    }
}
