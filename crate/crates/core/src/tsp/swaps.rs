//! k-swap moves and exhaustive neighborhood enumeration.
//!
//! Removing `s` edges from a tour leaves `s` segments. Every way to close
//! them back into a single Hamiltonian cycle corresponds to a cyclic
//! arrangement of the segments with per-segment orientations, so enumerating
//! arrangements enumerates exactly the single-cycle reconnections. Pairings
//! that re-add a removed edge are covered by a smaller remove-set and are
//! skipped here, which keeps remove- and add-sets disjoint.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::pair;

use super::{Tour, TspError, TspInstance};

/// An exchange of tour edges for non-tour edges of equal cardinality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwapMove {
    /// Edges removed from the tour, sorted normalized pairs.
    pub remove: Vec<(usize, usize)>,
    /// Edges added to the tour, sorted normalized pairs.
    pub add: Vec<(usize, usize)>,
}

impl SwapMove {
    pub fn new(mut remove: Vec<(usize, usize)>, mut add: Vec<(usize, usize)>) -> Self {
        for e in remove.iter_mut().chain(add.iter_mut()) {
            *e = pair(e.0, e.1);
        }
        remove.sort_unstable();
        add.sort_unstable();
        SwapMove { remove, add }
    }

    pub fn size(&self) -> usize {
        self.remove.len()
    }

    /// The move that undoes this one.
    pub fn reversed(&self) -> SwapMove {
        SwapMove {
            remove: self.add.clone(),
            add: self.remove.clone(),
        }
    }
}

/// Applies a swap, returning the resulting canonical tour.
///
/// Fails if the removed edges are not all in the tour, an added edge already
/// is, the sets are unbalanced or empty, or the result is not a single cycle.
pub fn apply_swap(tour: &Tour, mv: &SwapMove) -> Result<Tour, TspError> {
    if mv.remove.is_empty() {
        return Err(TspError::EmptySwap);
    }
    if mv.remove.len() != mv.add.len() {
        return Err(TspError::UnbalancedSwap {
            removed: mv.remove.len(),
            added: mv.add.len(),
        });
    }
    let mut edges = tour.edge_set();
    for &(u, v) in &mv.remove {
        if !edges.remove(&pair(u, v)) {
            return Err(TspError::RemoveNotInTour(u, v));
        }
    }
    for &(u, v) in &mv.add {
        if tour.edge_set().contains(&pair(u, v)) {
            return Err(TspError::AddAlreadyInTour(u, v));
        }
        if !edges.insert(pair(u, v)) {
            return Err(TspError::InvalidSwap(format!("edge {u}-{v} added twice")));
        }
    }
    Tour::from_edge_set(tour.len(), &edges)
        .map_err(|e| TspError::InvalidSwap(e.to_string()))
}

/// Visits every valid swap of size 2..=`max_size` from `tour`.
///
/// Candidates are visited in a fixed order: ascending swap size, then
/// lexicographic remove-set, then lexicographic add-set. The visitor gets the
/// move together with the removed and added weight sums and may stop early.
/// `budget` caps the number of examined reconnection arrangements.
pub(crate) fn for_each_swap<F>(
    inst: &TspInstance,
    tour: &Tour,
    max_size: usize,
    budget: Option<u64>,
    mut visit: F,
) -> Result<(), TspError>
where
    F: FnMut(SwapMove, &BigUint, &BigUint) -> ControlFlow<()>,
{
    inst.check_tour(tour)?;
    let n = tour.len();
    let order = tour.order();

    // Tour edges sorted by normalized pair; combinations over this list come
    // out in lexicographic remove-set order.
    let mut tour_edges: Vec<((usize, usize), usize)> = (0..n)
        .map(|i| (pair(order[i], order[(i + 1) % n]), i))
        .collect();
    tour_edges.sort_unstable();

    let mut spent: u64 = 0;
    let charge = |spent: &mut u64| -> Result<(), TspError> {
        *spent += 1;
        match budget {
            Some(b) if *spent > b => Err(TspError::BudgetExceeded { budget: b }),
            _ => Ok(()),
        }
    };

    for s in 2..=max_size.min(n) {
        for combo in (0..tour_edges.len()).combinations(s) {
            let remove: Vec<(usize, usize)> = combo.iter().map(|&i| tour_edges[i].0).collect();
            let remove_set: BTreeSet<(usize, usize)> = remove.iter().copied().collect();
            let mut positions: Vec<usize> = combo.iter().map(|&i| tour_edges[i].1).collect();
            positions.sort_unstable();

            // segment j runs from the edge at positions[j] (exclusive) to the
            // edge at positions[j+1] (inclusive end vertex)
            let segments: Vec<(usize, usize)> = (0..s)
                .map(|j| {
                    let head = order[(positions[j] + 1) % n];
                    let tail = order[positions[(j + 1) % s]];
                    (head, tail)
                })
                .collect();

            let mut removed_sum = BigUint::zero();
            for &(u, v) in &remove {
                removed_sum += inst.weight(u, v);
            }

            // segment 0 stays first and unflipped, killing rotation and
            // reflection symmetry of the cyclic arrangement
            let mut add_sets: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
            for perm in (1..s).permutations(s - 1) {
                'flips: for flip_mask in 0u32..1 << (s - 1) {
                    charge(&mut spent)?;
                    let mut adds = Vec::with_capacity(s);
                    let mut tail = segments[0].1;
                    for (slot, &sj) in perm.iter().enumerate() {
                        let (h, t) = if flip_mask >> slot & 1 == 1 {
                            (segments[sj].1, segments[sj].0)
                        } else {
                            segments[sj]
                        };
                        let e = pair(tail, h);
                        if remove_set.contains(&e) {
                            continue 'flips;
                        }
                        adds.push(e);
                        tail = t;
                    }
                    let closing = pair(tail, segments[0].0);
                    if remove_set.contains(&closing) {
                        continue 'flips;
                    }
                    adds.push(closing);
                    adds.sort_unstable();
                    if adds.windows(2).any(|w| w[0] == w[1]) {
                        continue 'flips;
                    }
                    add_sets.insert(adds);
                }
            }

            for add in add_sets {
                let mut added_sum = BigUint::zero();
                for &(u, v) in &add {
                    added_sum += inst.weight(u, v);
                }
                let mv = SwapMove {
                    remove: remove.clone(),
                    add,
                };
                if let ControlFlow::Break(()) = visit(mv, &removed_sum, &added_sum) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// Every swap of size at most `k` that strictly decreases the tour weight,
/// in deterministic enumeration order.
///
/// Exhaustive over remove-sets and reconnections, so the work grows like
/// `C(n, k) * (k-1)! * 2^(k-1)`; keep that at or below roughly `10^8` or
/// pass a `budget` to cap it. Size-1 swaps are omitted because the only way
/// to reconnect a single broken edge is to re-add it. A budget overrun
/// aborts with an error rather than returning a truncated neighborhood.
pub fn enumerate_improving_k_swaps(
    inst: &TspInstance,
    tour: &Tour,
    k: usize,
    budget: Option<u64>,
) -> Result<Vec<SwapMove>, TspError> {
    let mut out = Vec::new();
    for_each_swap(inst, tour, k, budget, |mv, removed, added| {
        if added < removed {
            out.push(mv);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
