use serde_json::json;

use super::SolverState;
use crate::error::Result;
use crate::fw::{classic_apsp, nvs_search, CycleCandidate};
use crate::matrix::reduce;
use crate::scalar::Weight;
use crate::trace::{event, TraceSink};

/// Cancels negative cycles of the reduced matrix until none is left. Each
/// round runs the negative-subpath sweep; when it comes back empty the
/// classic all-pairs pass confirms there is no negative cycle, and
/// supplies one if the sweep missed it. Returns the number of cycles
/// applied.
pub fn phase2<W: Weight>(state: &mut SolverState<W>, trace: &mut dyn TraceSink) -> Result<usize> {
    let mut applied = 0;
    loop {
        let r = reduce(&state.matrix, &state.current)?;
        let cycle: Option<CycleCandidate<W>> = match nvs_search(&r, trace).cycle {
            Some(c) => Some(c),
            None => classic_apsp(&r).negative_cycle().cloned(),
        };
        let Some(cycle) = cycle else {
            return Ok(applied);
        };
        if trace.enabled() {
            trace.emit(event(
                "phase2-step",
                json!({
                    "cycle": cycle.notation(),
                    "value": cycle.value.to_string(),
                    "source": cycle.source,
                }),
            ));
        }
        state.apply(2, vec![cycle])?;
        applied += 1;
    }
}
