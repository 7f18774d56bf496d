//! Compiles a bounded-degree Max-Cut instance into a sparse weighted graph
//! and completes it into a TSP instance.
//!
//! The constructed graph starts from a cycle of `3(n+m)` edges with one
//! assigned edge per H-vertex and per H-edge (uniformly spaced three apart).
//! Each H-vertex gets a second-set path of alternating doors and gateways in
//! parallel to its assigned first-set edge; each H-edge consumes one gateway
//! at each endpoint plus its assigned cycle edge and replaces them with a
//! parity gadget; each H-vertex gets an XOR gadget spliced into its first-set
//! edge and the door closest to `x_r`, padding every x-change to exactly `k`
//! edges. Completion adds the remaining pairs as non-edges weighted
//! `M * 4^max(lambda(u), lambda(v))` over a bijective vertex priority
//! `lambda`, which is what keeps non-edges out of every local optimum.

mod builder;
mod orientation;

pub use builder::build_reduction;
pub use orientation::{maximum_matching, partial_edge_orientation, Orientation};

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::{EdgeRole, ParityKind};
use crate::maxcut::MaxCutInstance;
use crate::pair;
use crate::tsp::{EdgeClass, TspInstance};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("vertex {vertex} has degree {degree}, maximum supported is 5")]
    DegreeTooHigh { vertex: usize, degree: usize },
    #[error("k = {k} is infeasible, minimum feasible k is {min}")]
    InfeasibleK { k: usize, min: usize },
    #[error("isolated vertex {0} requires k >= 2")]
    IsolatedVertexNeedsLargerK(usize),
    #[error("{u}-{v} is a g-edge, not a non-edge")]
    NotANonEdge { u: usize, v: usize },
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// What a vertex of the constructed graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexRole {
    /// Degree-two cycle vertex between two assigned edges.
    CycleFiller,
    FirstSetLeft { h_vertex: usize },
    FirstSetRight { h_vertex: usize },
    /// Interior vertex of a second-set path; `position` counts 1..=2d along
    /// the path. These double as parity gadget terminals once their gateway
    /// is consumed.
    SecondSet { h_vertex: usize, position: usize },
    XorRailA { h_vertex: usize, index: usize },
    XorRailB { h_vertex: usize, index: usize },
    XorMidpoint { h_vertex: usize, index: usize },
    GadgetZ { h_edge: usize },
    GadgetZPrime { h_edge: usize },
    ParityInternal { h_edge: usize, local: usize },
}

/// Everything the construction knows about one H-vertex.
#[derive(Clone, Debug)]
pub struct VertexRecord {
    pub h_vertex: usize,
    pub x_left: usize,
    pub x_right: usize,
    pub degree: usize,
    pub out_degree: usize,
    pub xor_order: usize,
    /// `x_1, x'_1, ..., x_d, x'_d` in path order.
    pub second_set_vertices: Vec<usize>,
    /// Door edges in path order; the last one is the closest door to `x_r`
    /// (rerouted to the XOR gadget's b-rail when the order is positive).
    pub doors: Vec<(usize, usize)>,
    /// H-edge that consumed gateway `i+1`.
    pub gateway_consumers: Vec<usize>,
    pub left_first_set: (usize, usize),
    pub right_first_set: (usize, usize),
    pub right_second_set: (usize, usize),
    pub xor_rail_a: Vec<usize>,
    pub xor_rail_b: Vec<usize>,
    pub xor_midpoints: Vec<usize>,
    /// XOR subtour incident to the left and right first-set edges.
    pub xor_subtour_first: BTreeSet<(usize, usize)>,
    /// XOR subtour incident to the closest door and the right second-set edge.
    pub xor_subtour_second: BTreeSet<(usize, usize)>,
    /// Incident H-edges in gateway order (equals increasing psi order).
    pub incident_gadgets: Vec<usize>,
}

impl VertexRecord {
    pub fn closest_door_to_xr(&self) -> (usize, usize) {
        *self.doors.last().expect("every vertex has doors")
    }

    /// Edges only a first-set tour uses at this vertex: both first-set edges
    /// plus the rail edges exclusive to the first XOR subtour. Rungs are
    /// shared between the two subtours and already forced by their
    /// degree-two midpoints, so the two bundles are disjoint.
    pub fn first_set_bundle(&self) -> BTreeSet<(usize, usize)> {
        let mut bundle: BTreeSet<(usize, usize)> = self
            .xor_subtour_first
            .difference(&self.xor_subtour_second)
            .copied()
            .collect();
        bundle.insert(self.left_first_set);
        bundle.insert(self.right_first_set);
        bundle
    }

    /// Edges only a second-set tour uses at this vertex: all doors, the
    /// right second-set edge, and the rails exclusive to the second XOR
    /// subtour.
    pub fn second_set_bundle(&self) -> BTreeSet<(usize, usize)> {
        let mut bundle: BTreeSet<(usize, usize)> = self
            .xor_subtour_second
            .difference(&self.xor_subtour_first)
            .copied()
            .collect();
        bundle.extend(self.doors.iter().copied());
        bundle.insert(self.right_second_set);
        bundle
    }
}

/// Everything the construction knows about one H-edge's parity gadget.
#[derive(Clone, Debug)]
pub struct EdgeRecord {
    pub h_edge: usize,
    pub kind: ParityKind,
    pub psi_index: usize,
    /// H-vertex on the gadget's X side (tail of a directed edge, input-order
    /// first endpoint of an undirected one).
    pub x_side: usize,
    pub y_side: usize,
    /// Global ids of X, X', Y, Y', Z, Z'.
    pub terminals: [usize; 6],
    pub local_to_global: Vec<usize>,
    pub internal_edges: Vec<(usize, usize, EdgeRole)>,
    pub standard_subtours: [BTreeSet<(usize, usize)>; 4],
    pub same_set_weight: i64,
    pub diff_set_weight: i64,
}

impl EdgeRecord {
    pub fn internal_edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.internal_edges.iter().map(|&(u, v, _)| pair(u, v)).collect()
    }

    /// Standard subtour pattern for the given endpoint sides (pattern 1 when
    /// both are in the first set, 2 when only the Y side is, 3 when only the
    /// X side is, 4 when neither is).
    pub fn pattern_for(&self, x_side_first: bool, y_side_first: bool) -> usize {
        match (x_side_first, y_side_first) {
            (true, true) => 1,
            (false, true) => 2,
            (true, false) => 3,
            (false, false) => 4,
        }
    }
}

/// The compiled graph with all construction bookkeeping.
#[derive(Clone, Debug)]
pub struct ReductionArtifact {
    source: MaxCutInstance,
    orientation: Orientation,
    k: usize,
    vertex_count: usize,
    edges: BTreeMap<(usize, usize), i64>,
    adjacency: Vec<Vec<usize>>,
    roles: Vec<VertexRole>,
    vertex_records: Vec<VertexRecord>,
    edge_records: Vec<EdgeRecord>,
    psi: Vec<usize>,
    lambda: Vec<usize>,
    m_weight: BigUint,
    forced_edges: BTreeSet<(usize, usize)>,
}

impl ReductionArtifact {
    pub fn source(&self) -> &MaxCutInstance {
        &self.source
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// All g-edges with their weights.
    pub fn g_edges(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.edges
    }

    pub fn g_edge_list(&self) -> Vec<(usize, usize)> {
        self.edges.keys().copied().collect()
    }

    pub fn is_g_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&pair(u, v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn vertex_records(&self) -> &[VertexRecord] {
        &self.vertex_records
    }

    pub fn vertex_record(&self, h_vertex: usize) -> &VertexRecord {
        &self.vertex_records[h_vertex]
    }

    pub fn edge_records(&self) -> &[EdgeRecord] {
        &self.edge_records
    }

    pub fn edge_record(&self, h_edge: usize) -> &EdgeRecord {
        &self.edge_records[h_edge]
    }

    /// H-edge indices in gadget assignment order (directed before
    /// undirected, input order within each group).
    pub fn psi(&self) -> &[usize] {
        &self.psi
    }

    /// Bijective vertex priority onto `1..=N`.
    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    /// Sum of all edge weights appearing in the constructed graph.
    pub fn m_weight(&self) -> &BigUint {
        &self.m_weight
    }

    /// True when every H-weight is zero, making all non-edge weights zero
    /// and the completion unable to penalize non-edges.
    pub fn is_degenerate(&self) -> bool {
        self.m_weight.is_zero()
    }

    /// Edges incident to degree-two vertices; every tour of the graph
    /// contains all of them.
    pub fn forced_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.forced_edges
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        source: MaxCutInstance,
        orientation: Orientation,
        k: usize,
        vertex_count: usize,
        edges: BTreeMap<(usize, usize), i64>,
        roles: Vec<VertexRole>,
        vertex_records: Vec<VertexRecord>,
        edge_records: Vec<EdgeRecord>,
        psi: Vec<usize>,
        lambda: Vec<usize>,
    ) -> Self {
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for &(u, v) in edges.keys() {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let m_weight = edges
            .values()
            .map(|&w| BigUint::from(w as u64))
            .sum();
        let mut forced_edges = BTreeSet::new();
        for v in 0..vertex_count {
            if adjacency[v].len() == 2 {
                for &w in &adjacency[v] {
                    forced_edges.insert(pair(v, w));
                }
            }
        }
        ReductionArtifact {
            source,
            orientation,
            k,
            vertex_count,
            edges,
            adjacency,
            roles,
            vertex_records,
            edge_records,
            psi,
            lambda,
            m_weight,
            forced_edges,
        }
    }

    /// Re-derives every structural invariant of the construction and fails
    /// on the first violation. The builder runs this before handing out an
    /// artifact.
    pub fn check_invariants(&self) -> Result<(), ReductionError> {
        let fail = |msg: String| Err(ReductionError::Internal(msg));
        let n = self.source.vertex_count();
        let m = self.source.edge_count();

        // degree profile
        for v in 0..self.vertex_count {
            let d = self.degree(v);
            if !(2..=4).contains(&d) {
                return fail(format!("vertex {v} has degree {d}"));
            }
        }
        for v in 0..self.vertex_count {
            if self.degree(v) != 2 && !self.adjacency[v].iter().any(|&w| self.degree(w) == 2) {
                return fail(format!("vertex {v} is not adjacent to a degree-two vertex"));
            }
        }
        let parity_vertices: BTreeSet<usize> = self
            .edge_records
            .iter()
            .flat_map(|r| r.local_to_global.iter().copied())
            .collect();
        for v in 0..self.vertex_count {
            if self.degree(v) == 4 && !parity_vertices.contains(&v) {
                return fail(format!("degree-four vertex {v} is outside every parity gadget"));
            }
        }

        // lambda is a bijection onto 1..=N with degree-two vertices on top
        let mut seen = vec![false; self.vertex_count + 1];
        for &l in &self.lambda {
            if l == 0 || l > self.vertex_count || seen[l] {
                return fail(format!("lambda value {l} is out of range or repeated"));
            }
            seen[l] = true;
        }
        let n2 = (0..self.vertex_count).filter(|&v| self.degree(v) == 2).count();
        for v in 0..self.vertex_count {
            if self.degree(v) == 2 && self.lambda[v] <= self.vertex_count - n2 {
                return fail(format!(
                    "degree-two vertex {v} has priority {} below the top block",
                    self.lambda[v]
                ));
            }
        }

        // the xor order formula and the gadget order along second-set paths
        for rec in &self.vertex_records {
            let expect =
                self.k as i64 - 2 * rec.degree as i64 - 2 * rec.out_degree as i64 - 1;
            if rec.xor_order as i64 != expect {
                return fail(format!(
                    "vertex {} has xor order {}, expected {expect}",
                    rec.h_vertex, rec.xor_order
                ));
            }
            let psi_indices: Vec<usize> = rec
                .incident_gadgets
                .iter()
                .map(|&e| self.edge_records[e].psi_index)
                .collect();
            if psi_indices.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!(
                    "gadgets along vertex {} are not in increasing psi order: {psi_indices:?}",
                    rec.h_vertex
                ));
            }
        }

        // flexible H-edges form a forest in H
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, v: usize) -> usize {
            if parent[v] != v {
                let root = find(parent, parent[v]);
                parent[v] = root;
            }
            parent[v]
        }
        for rec in &self.edge_records {
            if rec.kind == ParityKind::Flexible {
                let (u, v, _) = self.source.edges()[rec.h_edge];
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru == rv {
                    return fail("flexible H-edges contain a cycle".into());
                }
                parent[ru] = rv;
            }
        }

        // closed-form counts
        let strict = self
            .edge_records
            .iter()
            .filter(|r| r.kind == ParityKind::Strict)
            .count();
        let flexible = m - strict;
        let sum_d: usize = (0..n).map(|v| self.source.degree(v)).sum();
        let sum_p: usize = self.vertex_records.iter().map(|r| r.xor_order).sum();
        let expected_vertices = 3 * (n + m) + 2 * sum_d + 3 * sum_p + 8 * strict + 2 * flexible;
        if self.vertex_count != expected_vertices {
            return fail(format!(
                "{} vertices, closed form predicts {expected_vertices}",
                self.vertex_count
            ));
        }
        let xor_net: usize = self
            .vertex_records
            .iter()
            .map(|r| {
                if r.xor_order == 0 {
                    0
                } else if r.degree >= 1 {
                    4 * r.xor_order
                } else {
                    // an isolated vertex's splice removes one shared edge
                    // instead of a first-set edge plus a door
                    4 * r.xor_order + 1
                }
            })
            .sum();
        let second_set_edges: usize = (0..n)
            .map(|v| match self.source.degree(v) {
                0 => 0,
                d => 2 * d + 1,
            })
            .sum();
        let expected_edges =
            3 * (n + m) - m + second_set_edges - 2 * m + 18 * strict + 10 * flexible + xor_net;
        if self.edges.len() != expected_edges {
            return fail(format!(
                "{} edges, closed form predicts {expected_edges}",
                self.edges.len()
            ));
        }

        // M is the sum of the gadget weight pairs
        let expected_m: BigUint = self
            .edge_records
            .iter()
            .map(|r| BigUint::from(2 * (r.same_set_weight + r.diff_set_weight) as u64))
            .sum();
        if self.m_weight != expected_m {
            return fail(format!("M = {} but gadget weights sum to {expected_m}", self.m_weight));
        }
        Ok(())
    }
}

/// Smallest k the construction supports for this instance and orientation:
/// the XOR order `k - 2d(x) - 2d'(x) - 1` must be nonnegative everywhere.
pub fn min_feasible_k(h: &MaxCutInstance, orientation: &Orientation) -> usize {
    (0..h.vertex_count())
        .map(|v| 2 * h.degree(v) + 2 * orientation.out_degree(v) + 1)
        .max()
        .unwrap_or(1)
}

/// Weight of the non-edge `uv` in the completed instance.
pub fn nonedge_weight(
    a: &ReductionArtifact,
    u: usize,
    v: usize,
) -> Result<BigUint, ReductionError> {
    if u >= a.vertex_count() {
        return Err(ReductionError::InvalidVertex(u));
    }
    if v >= a.vertex_count() {
        return Err(ReductionError::InvalidVertex(v));
    }
    if u == v || a.is_g_edge(u, v) {
        let (u, v) = pair(u, v);
        return Err(ReductionError::NotANonEdge { u, v });
    }
    let shift = 2 * a.lambda[u].max(a.lambda[v]);
    Ok(a.m_weight() << shift)
}

/// Completes the sparse graph into a full TSP instance: g-edges keep their
/// construction weights, every other pair becomes a non-edge weighted
/// `M * 4^max(lambda(u), lambda(v))`.
pub fn complete_instance(a: &ReductionArtifact) -> TspInstance {
    let n = a.vertex_count();
    let mut inst = TspInstance::new(n);
    for u in 0..n {
        for v in u + 1..n {
            match a.g_edges().get(&(u, v)) {
                Some(&w) => {
                    inst.set_weight(u, v, BigUint::from(w as u64));
                }
                None => {
                    inst.set_weight(u, v, nonedge_weight(a, u, v).expect("uv is a non-edge"));
                    inst.set_class(u, v, EdgeClass::NonEdge);
                }
            }
        }
    }
    inst
}

/// Adds the maximum pairwise weight to every edge, making the instance
/// metric without changing any swap's improvement delta (removed and added
/// sets always have equal cardinality).
pub fn metricize(inst: &TspInstance) -> TspInstance {
    let n = inst.vertex_count();
    let mut shift = BigUint::zero();
    for u in 0..n {
        for v in u + 1..n {
            if inst.weight(u, v) > &shift {
                shift = inst.weight(u, v).clone();
            }
        }
    }
    let mut out = inst.clone();
    for u in 0..n {
        for v in u + 1..n {
            out.set_weight(u, v, inst.weight(u, v) + &shift);
        }
    }
    out
}

/// Serializable summary of an artifact: counts, k, M, the psi and lambda
/// tables, and the per-H-vertex role table, plus the source instance so the
/// artifact can be rebuilt deterministically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub h_vertices: usize,
    pub h_edges: usize,
    pub source_edges: Vec<(usize, usize, i64)>,
    pub k: usize,
    pub g_vertices: usize,
    pub g_edges: usize,
    pub m_weight: String,
    pub degenerate: bool,
    pub psi: Vec<usize>,
    pub lambda: Vec<usize>,
    pub gadgets: Vec<ManifestGadget>,
    pub vertices: Vec<ManifestVertex>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestGadget {
    pub h_edge: usize,
    pub kind: String,
    pub psi_index: usize,
    pub x_side: usize,
    pub y_side: usize,
    pub terminals: [usize; 6],
    pub same_set_weight: i64,
    pub diff_set_weight: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestVertex {
    pub h_vertex: usize,
    pub x_left: usize,
    pub x_right: usize,
    pub degree: usize,
    pub out_degree: usize,
    pub xor_order: usize,
    pub doors: Vec<(usize, usize)>,
    pub left_first_set: (usize, usize),
    pub right_first_set: (usize, usize),
    pub right_second_set: (usize, usize),
}

impl Manifest {
    pub fn from_artifact(a: &ReductionArtifact) -> Self {
        Manifest {
            h_vertices: a.source().vertex_count(),
            h_edges: a.source().edge_count(),
            source_edges: a.source().edges().to_vec(),
            k: a.k(),
            g_vertices: a.vertex_count(),
            g_edges: a.g_edges().len(),
            m_weight: a.m_weight().to_string(),
            degenerate: a.is_degenerate(),
            psi: a.psi().to_vec(),
            lambda: a.lambda().to_vec(),
            gadgets: a
                .edge_records()
                .iter()
                .map(|r| ManifestGadget {
                    h_edge: r.h_edge,
                    kind: r.kind.to_string(),
                    psi_index: r.psi_index,
                    x_side: r.x_side,
                    y_side: r.y_side,
                    terminals: r.terminals,
                    same_set_weight: r.same_set_weight,
                    diff_set_weight: r.diff_set_weight,
                })
                .collect(),
            vertices: a
                .vertex_records()
                .iter()
                .map(|r| ManifestVertex {
                    h_vertex: r.h_vertex,
                    x_left: r.x_left,
                    x_right: r.x_right,
                    degree: r.degree,
                    out_degree: r.out_degree,
                    xor_order: r.xor_order,
                    doors: r.doors.clone(),
                    left_first_set: r.left_first_set,
                    right_first_set: r.right_first_set,
                    right_second_set: r.right_second_set,
                })
                .collect(),
        }
    }
}
