//! k-Opt local search and the bounded 3-swap probe.

use std::ops::ControlFlow;

use num_bigint::BigUint;

use crate::Pivot;

use super::swaps::{apply_swap, for_each_swap, SwapMove};
use super::{Tour, TspError, TspInstance};

/// First improving swap of size at most `k` in enumeration order, if any.
fn find_first_improving(
    inst: &TspInstance,
    tour: &Tour,
    k: usize,
    budget: Option<u64>,
) -> Result<Option<SwapMove>, TspError> {
    let mut found = None;
    for_each_swap(inst, tour, k, budget, |mv, removed, added| {
        if added < removed {
            found = Some(mv);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// All improving swaps together with their weight decrease, in enumeration
/// order.
pub(crate) fn improving_swaps_with_deltas(
    inst: &TspInstance,
    tour: &Tour,
    k: usize,
    budget: Option<u64>,
) -> Result<Vec<(SwapMove, BigUint)>, TspError> {
    let mut out = Vec::new();
    for_each_swap(inst, tour, k, budget, |mv, removed, added| {
        if added < removed {
            out.push((mv, removed - added));
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Exhaustive search for an improving swap of size at most 3.
///
/// Returns the first improving move in enumeration order, or `None` when the
/// tour admits no improving 3-swap. The neighborhood is small enough that no
/// budget applies.
pub fn find_improving_3swap(inst: &TspInstance, tour: &Tour) -> Option<SwapMove> {
    find_first_improving(inst, tour, 3, None)
        .expect("unbudgeted enumeration cannot fail on a size-checked tour")
}

/// Runs k-Opt to a local optimum (within budget).
///
/// Swap sizes 2..=k are scanned in the deterministic enumeration order, so
/// a fixed `(start, pivot)` always reproduces the same trace. The returned
/// tour admits no improving swap of size at most `k`. A budget overrun while
/// scanning a neighborhood aborts the whole search with a budget error.
pub fn k_opt_local_search(
    inst: &TspInstance,
    start: &Tour,
    k: usize,
    pivot: Pivot,
    budget: Option<u64>,
) -> Result<(Tour, Vec<SwapMove>), TspError> {
    let mut tour = start.clone();
    let mut trace = Vec::new();
    loop {
        let mv = match pivot {
            Pivot::FirstImprovement => find_first_improving(inst, &tour, k, budget)?,
            Pivot::BestImprovement => {
                let mut best: Option<(SwapMove, BigUint)> = None;
                for (mv, delta) in improving_swaps_with_deltas(inst, &tour, k, budget)? {
                    // strictly-greater keeps the earliest move on ties
                    if best.as_ref().is_none_or(|(_, d)| delta > *d) {
                        best = Some((mv, delta));
                    }
                }
                best.map(|(mv, _)| mv)
            }
        };
        match mv {
            Some(mv) => {
                tour = apply_swap(&tour, &mv)?;
                trace.push(mv);
            }
            None => return Ok((tour, trace)),
        }
    }
}
