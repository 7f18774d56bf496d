//! Max-Cut/Flip to TSP/k-Opt instance compiler and verification harness.
//!
//! The library has three layers:
//!
//! * Problem layer: [`maxcut`] (weighted Max-Cut instances, cuts, the Flip
//!   neighborhood) and [`tsp`] (tours, k-swaps, exhaustive neighborhood
//!   enumeration, k-Opt local search, Hamiltonian cycle enumeration).
//! * Construction layer: [`gadgets`] (parity and XOR gadgets with exhaustive
//!   subtour oracles) and [`reduction`] (compiling a bounded-degree Max-Cut
//!   instance into a sparse weighted graph plus its completion to a full
//!   TSP instance).
//! * Correspondence layer: [`correspondence`] (the bijection between cuts and
//!   standard tours, x-change moves, transition graphs) and [`verify`] (one
//!   executable check per structural claim, runnable end to end on small
//!   instances).

pub mod correspondence;
pub mod gadgets;
pub mod maxcut;
pub mod reduction;
pub mod tsp;
pub mod verify;

/// Pivot rule shared by both local searches.
///
/// Both rules are deterministic: ties are broken by ascending vertex id
/// (Flip) or by enumeration order (k-Opt), so every run is replayable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pivot {
    /// Take the first improving move in enumeration order.
    FirstImprovement,
    /// Take the move with the largest improvement; ties go to the first
    /// such move in enumeration order.
    BestImprovement,
}

/// Normalizes an unordered vertex pair to `(min, max)`.
#[inline]
pub(crate) fn pair(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}
