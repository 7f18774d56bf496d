//! The bijection between cuts and standard tours, x-change moves, and the
//! transition graph over standard tours.
//!
//! A tour of the completed instance is standard when it stays on g-edges and
//! induces a standard subtour in every parity gadget; per H-vertex it then
//! uses exactly one of two disjoint edge bundles (first-set or second-set),
//! and per H-edge the gadget pattern matches the two endpoint cases. Cuts
//! and standard tours are in bijection through exactly this data.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use thiserror::Error;

use crate::maxcut::Cut;
use crate::reduction::ReductionArtifact;
use crate::tsp::{apply_swap, SwapMove, Tour};

#[derive(Debug, Error)]
pub enum CorrespondenceError {
    #[error("cut has {cut} bits but the source instance has {expected} vertices")]
    CutSizeMismatch { cut: usize, expected: usize },
    #[error("tour has {tour} vertices but the graph has {expected}")]
    TourSizeMismatch { tour: usize, expected: usize },
    #[error("tour is not standard: {0}")]
    NonStandardTour(String),
    #[error("instance has {vertices} vertices, enumeration limit is {limit}")]
    EnumerationLimit { vertices: usize, limit: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Which of the two per-vertex edge bundles a standard tour uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexCase {
    FirstSet,
    SecondSet,
}

/// Full evidence that a tour is standard: the case of every H-vertex and the
/// standard subtour pattern of every H-edge, stored explicitly so x-changes
/// can be assembled by pattern lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardTourWitness {
    pub vertex_cases: Vec<VertexCase>,
    /// Pattern 1..=4 per H-edge (input order).
    pub edge_patterns: Vec<u8>,
}

impl StandardTourWitness {
    pub fn to_cut(&self) -> Cut {
        Cut::new(
            self.vertex_cases
                .iter()
                .map(|&c| c == VertexCase::FirstSet)
                .collect(),
        )
    }
}

/// Outcome of [`classify_tour`].
#[derive(Clone, Debug)]
pub enum TourClass {
    Standard(StandardTourWitness),
    NonStandard(NonStandardReport),
}

impl TourClass {
    pub fn is_standard(&self) -> bool {
        matches!(self, TourClass::Standard(_))
    }
}

/// Names the first offense that disqualifies a tour from being standard.
#[derive(Clone, Debug)]
pub struct NonStandardReport {
    pub reason: String,
}

fn check_tour_size(a: &ReductionArtifact, tour: &Tour) -> Result<(), CorrespondenceError> {
    if tour.len() != a.vertex_count() {
        return Err(CorrespondenceError::TourSizeMismatch {
            tour: tour.len(),
            expected: a.vertex_count(),
        });
    }
    Ok(())
}

fn check_cut_size(a: &ReductionArtifact, cut: &Cut) -> Result<(), CorrespondenceError> {
    if cut.len() != a.source().vertex_count() {
        return Err(CorrespondenceError::CutSizeMismatch {
            cut: cut.len(),
            expected: a.source().vertex_count(),
        });
    }
    Ok(())
}

/// Builds the standard tour corresponding to a cut: the forced edges at
/// degree-two vertices, each H-vertex's bundle for its side, and each
/// H-edge's standard subtour for its endpoint sides.
pub fn cut_to_tour(a: &ReductionArtifact, cut: &Cut) -> Result<Tour, CorrespondenceError> {
    check_cut_size(a, cut)?;
    let mut edges: BTreeSet<(usize, usize)> = a.forced_edges().clone();
    for rec in a.vertex_records() {
        let bundle = if cut.in_first_set(rec.h_vertex) {
            rec.first_set_bundle()
        } else {
            rec.second_set_bundle()
        };
        edges.extend(bundle);
    }
    for rec in a.edge_records() {
        let pattern = rec.pattern_for(
            cut.in_first_set(rec.x_side),
            cut.in_first_set(rec.y_side),
        );
        edges.extend(rec.standard_subtours[pattern - 1].iter().copied());
    }
    Tour::from_edge_set(a.vertex_count(), &edges).map_err(|e| {
        CorrespondenceError::Internal(format!("standard tour assembly failed: {e}"))
    })
}

/// Inspects every gadget's induced subtour and every vertex bundle.
pub fn classify_tour(
    a: &ReductionArtifact,
    tour: &Tour,
) -> Result<TourClass, CorrespondenceError> {
    check_tour_size(a, tour)?;
    let non_standard =
        |reason: String| Ok(TourClass::NonStandard(NonStandardReport { reason }));
    let edges = tour.edge_set();
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| !a.is_g_edge(u, v)) {
        return non_standard(format!("tour uses non-edge {u}-{v}"));
    }

    // parity gadgets, in psi order
    let mut patterns = vec![0u8; a.source().edge_count()];
    for &e in a.psi() {
        let rec = a.edge_record(e);
        let induced: BTreeSet<(usize, usize)> = rec
            .internal_edge_set()
            .intersection(&edges)
            .copied()
            .collect();
        match rec.standard_subtours.iter().position(|sub| *sub == induced) {
            Some(i) => patterns[e] = i as u8 + 1,
            None => {
                return non_standard(format!(
                    "{} gadget of H-edge {e} (psi {}) induces a non-standard subtour",
                    rec.kind, rec.psi_index
                ))
            }
        }
    }

    // vertex bundles
    let mut cases = Vec::with_capacity(a.source().vertex_count());
    for rec in a.vertex_records() {
        let first = rec.first_set_bundle();
        let second = rec.second_set_bundle();
        let uses_first = first.is_subset(&edges);
        let uses_second = second.is_subset(&edges);
        let case = match (uses_first, uses_second) {
            (true, false) if second.is_disjoint(&edges) => VertexCase::FirstSet,
            (false, true) if first.is_disjoint(&edges) => VertexCase::SecondSet,
            _ => {
                return non_standard(format!(
                    "H-vertex {} uses neither bundle cleanly",
                    rec.h_vertex
                ))
            }
        };
        cases.push(case);
    }

    // gadget patterns must agree with the endpoint cases
    for rec in a.edge_records() {
        let expected = rec.pattern_for(
            cases[rec.x_side] == VertexCase::FirstSet,
            cases[rec.y_side] == VertexCase::FirstSet,
        );
        if patterns[rec.h_edge] != expected as u8 {
            return non_standard(format!(
                "H-edge {} has pattern {} but its endpoints imply {expected}",
                rec.h_edge, patterns[rec.h_edge]
            ));
        }
    }

    Ok(TourClass::Standard(StandardTourWitness {
        vertex_cases: cases,
        edge_patterns: patterns,
    }))
}

/// The total solution mapping: standard tours map through their witness,
/// everything else to the all-first cut.
pub fn tour_to_cut(a: &ReductionArtifact, tour: &Tour) -> Result<Cut, CorrespondenceError> {
    check_tour_size(a, tour)?;
    match classify_tour(a, tour)? {
        TourClass::Standard(witness) => Ok(witness.to_cut()),
        TourClass::NonStandard(_) => Ok(Cut::all_first(a.source().vertex_count())),
    }
}

/// Per-part tally of an x-change, for auditing the move size.
///
/// `door_part` counts the left first-set edge and the doors, `xor_part` the
/// right first-set and second-set edges plus the rail changes, and
/// `parity_part` the internal gadget changes. They measure `d + 2`, `2p`,
/// and `3d + 4d_out` respectively, summing to `2k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XChangeAudit {
    pub swap_size: usize,
    pub door_part: usize,
    pub xor_part: usize,
    pub parity_part: usize,
    /// `(h_edge, involved edges)` per related gadget.
    pub parity_by_edge: Vec<(usize, usize)>,
}

fn assemble_x_change(
    a: &ReductionArtifact,
    witness: &StandardTourWitness,
    x: usize,
) -> Result<(SwapMove, XChangeAudit), CorrespondenceError> {
    if x >= a.source().vertex_count() {
        return Err(CorrespondenceError::Internal(format!(
            "H-vertex {x} out of range"
        )));
    }
    let rec = a.vertex_record(x);
    let (old_bundle, new_bundle) = match witness.vertex_cases[x] {
        VertexCase::FirstSet => (rec.first_set_bundle(), rec.second_set_bundle()),
        VertexCase::SecondSet => (rec.second_set_bundle(), rec.first_set_bundle()),
    };
    let mut remove: Vec<(usize, usize)> = old_bundle.difference(&new_bundle).copied().collect();
    let mut add: Vec<(usize, usize)> = new_bundle.difference(&old_bundle).copied().collect();

    let door_set: BTreeSet<(usize, usize)> = rec
        .doors
        .iter()
        .copied()
        .chain([rec.left_first_set])
        .collect();
    let involved_vertex_part = remove.len() + add.len();
    let door_part = remove
        .iter()
        .chain(add.iter())
        .filter(|e| door_set.contains(e))
        .count();
    let xor_part = involved_vertex_part - door_part;

    let mut parity_by_edge = Vec::new();
    for &e in &rec.incident_gadgets {
        let erec = a.edge_record(e);
        let old_pattern = witness.edge_patterns[e] as usize;
        // X-side changes toggle 1<->2 and 3<->4, Y-side 1<->3 and 2<->4
        let new_pattern = if erec.x_side == x {
            match old_pattern {
                1 => 2,
                2 => 1,
                3 => 4,
                _ => 3,
            }
        } else {
            match old_pattern {
                1 => 3,
                3 => 1,
                2 => 4,
                _ => 2,
            }
        };
        let old_sub = &erec.standard_subtours[old_pattern - 1];
        let new_sub = &erec.standard_subtours[new_pattern - 1];
        let mut involved = 0;
        for &edge in old_sub.difference(new_sub) {
            remove.push(edge);
            involved += 1;
        }
        for &edge in new_sub.difference(old_sub) {
            add.push(edge);
            involved += 1;
        }
        parity_by_edge.push((e, involved));
    }

    let mv = SwapMove::new(remove, add);
    if mv.remove.len() != a.k() || mv.add.len() != a.k() {
        return Err(CorrespondenceError::Internal(format!(
            "x-change at {x} removes {} and adds {} edges, expected {} each",
            mv.remove.len(),
            mv.add.len(),
            a.k()
        )));
    }
    let parity_part = parity_by_edge.iter().map(|&(_, c)| c).sum();
    let audit = XChangeAudit {
        swap_size: mv.remove.len(),
        door_part,
        xor_part,
        parity_part,
        parity_by_edge,
    };
    Ok((mv, audit))
}

/// The swap toggling H-vertex `x` between its first-set and second-set
/// configurations, using only standard subtour changes. Always a swap of
/// exactly `k` edges; applying it turns `tour` into the standard tour of
/// the flipped cut.
pub fn x_change(
    a: &ReductionArtifact,
    tour: &Tour,
    x: usize,
) -> Result<SwapMove, CorrespondenceError> {
    x_change_with_audit(a, tour, x).map(|(mv, _)| mv)
}

/// [`x_change`] plus the per-part move-size tally.
pub fn x_change_with_audit(
    a: &ReductionArtifact,
    tour: &Tour,
    x: usize,
) -> Result<(SwapMove, XChangeAudit), CorrespondenceError> {
    let witness = match classify_tour(a, tour)? {
        TourClass::Standard(w) => w,
        TourClass::NonStandard(report) => {
            return Err(CorrespondenceError::NonStandardTour(report.reason))
        }
    };
    assemble_x_change(a, &witness, x)
}

/// Weight of a tour that stays on g-edges.
pub fn standard_tour_weight(
    a: &ReductionArtifact,
    tour: &Tour,
) -> Result<BigUint, CorrespondenceError> {
    check_tour_size(a, tour)?;
    let mut total: i64 = 0;
    for (u, v) in tour.edges() {
        match a.g_edges().get(&(u, v)) {
            Some(w) => total += w,
            None => {
                return Err(CorrespondenceError::NonStandardTour(format!(
                    "tour uses non-edge {u}-{v}"
                )))
            }
        }
    }
    Ok(BigUint::from(total as u64))
}

/// Transition graph over the standard tours: one node per cut (indexed by
/// its mask), one arc per weight-decreasing x-change.
#[derive(Clone, Debug)]
pub struct StandardTransitionGraph {
    /// Standard tour per cut mask.
    pub tours: Vec<Tour>,
    pub weights: Vec<BigUint>,
    /// Arcs `(mask, mask)`, sorted ascending.
    pub arcs: Vec<(u64, u64)>,
}

impl StandardTransitionGraph {
    pub fn sinks(&self) -> Vec<u64> {
        let mut has_out = vec![false; self.tours.len()];
        for &(from, _) in &self.arcs {
            has_out[from as usize] = true;
        }
        (0..self.tours.len() as u64)
            .filter(|&m| !has_out[m as usize])
            .collect()
    }
}

/// Enumerates all standard tours and their x-change arcs. While building,
/// every x-change is verified to land exactly on the standard tour of the
/// flipped cut.
pub fn standard_transition_graph(
    a: &ReductionArtifact,
    limit: usize,
) -> Result<StandardTransitionGraph, CorrespondenceError> {
    let n = a.source().vertex_count();
    if n > limit {
        return Err(CorrespondenceError::EnumerationLimit {
            vertices: n,
            limit,
        });
    }
    let mut tours = Vec::with_capacity(1 << n);
    let mut weights = Vec::with_capacity(1 << n);
    for mask in 0..1u64 << n {
        let tour = cut_to_tour(a, &Cut::from_mask(n, mask))?;
        weights.push(standard_tour_weight(a, &tour)?);
        tours.push(tour);
    }
    let mut arcs = Vec::new();
    for mask in 0..1u64 << n {
        let from = &tours[mask as usize];
        let witness = match classify_tour(a, from)? {
            TourClass::Standard(w) => w,
            TourClass::NonStandard(r) => {
                return Err(CorrespondenceError::Internal(format!(
                    "assembled tour for mask {mask} is not standard: {}",
                    r.reason
                )))
            }
        };
        for x in 0..n {
            let (mv, _) = assemble_x_change(a, &witness, x)?;
            let landed = apply_swap(from, &mv).map_err(|e| {
                CorrespondenceError::Internal(format!("x-change at {x} failed to apply: {e}"))
            })?;
            let flipped = mask ^ (1 << x);
            if landed != tours[flipped as usize] {
                return Err(CorrespondenceError::Internal(format!(
                    "x-change at {x} from mask {mask} landed off the standard tour"
                )));
            }
            if weights[flipped as usize] < weights[mask as usize] {
                arcs.push((mask, flipped));
            }
        }
    }
    arcs.sort_unstable();
    Ok(StandardTransitionGraph {
        tours,
        weights,
        arcs,
    })
}
