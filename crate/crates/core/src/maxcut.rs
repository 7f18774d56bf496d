//! Weighted Max-Cut instances, cuts, and the Flip local search.
//!
//! Edge weights are signed machine integers; only the reduction's completion
//! weights need arbitrary precision. Instances and cuts are immutable after
//! construction and safe to share across threads.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{pair, Pivot};

/// Default cap on `vertex_count` for whole-state-space enumeration.
pub const DEFAULT_ENUM_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum MaxCutError {
    #[error("cut has {cut} bits but instance has {instance} vertices")]
    SizeMismatch { cut: usize, instance: usize },
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("instance has {vertices} vertices, enumeration limit is {limit}")]
    EnumerationLimit { vertices: usize, limit: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A weighted undirected graph without self-loops or parallel edges.
///
/// Parallel edges are rejected rather than merged: the reduction assigns one
/// gadget per edge, so merging would silently change instance semantics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaxCutInstance {
    vertex_count: usize,
    edges: Vec<(usize, usize, i64)>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

impl MaxCutInstance {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, i64)>,
    ) -> Result<Self, MaxCutError> {
        let mut seen = BTreeSet::new();
        for &(u, v, _) in &edges {
            if u >= vertex_count {
                return Err(MaxCutError::InvalidVertex(u));
            }
            if v >= vertex_count {
                return Err(MaxCutError::InvalidVertex(v));
            }
            if u == v {
                return Err(MaxCutError::SelfLoop(u));
            }
            if !seen.insert(pair(u, v)) {
                let (a, b) = pair(u, v);
                return Err(MaxCutError::DuplicateEdge(a, b));
            }
        }
        let mut inst = MaxCutInstance {
            vertex_count,
            edges,
            adjacency: Vec::new(),
        };
        inst.rebuild_adjacency();
        Ok(inst)
    }

    fn rebuild_adjacency(&mut self) {
        self.adjacency = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            self.adjacency[u].push(i);
            self.adjacency[v].push(i);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in input order as `(u, v, w)`.
    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    /// Indices into [`Self::edges`] of the edges incident to `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    fn check_vertex(&self, v: usize) -> Result<(), MaxCutError> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(MaxCutError::InvalidVertex(v))
        }
    }

    fn check_cut(&self, cut: &Cut) -> Result<(), MaxCutError> {
        if cut.len() == self.vertex_count {
            Ok(())
        } else {
            Err(MaxCutError::SizeMismatch {
                cut: cut.len(),
                instance: self.vertex_count,
            })
        }
    }
}

/// A 2-partition of the vertices; `true` means the vertex is in the first set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    membership: Vec<bool>,
}

impl Cut {
    pub fn new(membership: Vec<bool>) -> Self {
        Cut { membership }
    }

    /// The cut with every vertex in the first set.
    pub fn all_first(n: usize) -> Self {
        Cut {
            membership: vec![true; n],
        }
    }

    /// Decodes bit `i` of `mask` as the membership of vertex `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Cut {
            membership: (0..n).map(|v| mask >> v & 1 == 1).collect(),
        }
    }

    /// Canonical bit-vector encoding, usable as a transition-graph node id.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.membership.len() <= 64);
        self.membership
            .iter()
            .enumerate()
            .fold(0, |m, (v, &b)| if b { m | 1 << v } else { m })
    }

    pub fn len(&self) -> usize {
        self.membership.len()
    }

    pub fn is_empty(&self) -> bool {
        self.membership.is_empty()
    }

    pub fn in_first_set(&self, v: usize) -> bool {
        self.membership[v]
    }

    pub fn complement(&self) -> Cut {
        Cut {
            membership: self.membership.iter().map(|&b| !b).collect(),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.membership {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Total weight of the edges crossing the cut.
pub fn cut_value(inst: &MaxCutInstance, cut: &Cut) -> Result<i64, MaxCutError> {
    inst.check_cut(cut)?;
    Ok(inst
        .edges
        .iter()
        .filter(|&&(u, v, _)| cut.in_first_set(u) != cut.in_first_set(v))
        .map(|&(_, _, w)| w)
        .sum())
}

/// Change in cut value if `v` were flipped, computed from `v`'s incidence
/// list rather than by re-evaluating the whole cut.
pub fn flip_gain(inst: &MaxCutInstance, cut: &Cut, v: usize) -> Result<i64, MaxCutError> {
    inst.check_cut(cut)?;
    inst.check_vertex(v)?;
    let mut gain = 0;
    for &ei in &inst.adjacency[v] {
        let (a, b, w) = inst.edges[ei];
        let other = if a == v { b } else { a };
        if cut.in_first_set(v) == cut.in_first_set(other) {
            gain += w; // edge enters the cut-set
        } else {
            gain -= w; // edge leaves the cut-set
        }
    }
    Ok(gain)
}

/// Moves `v` to the other side of the cut.
pub fn flip(cut: &Cut, v: usize) -> Result<Cut, MaxCutError> {
    if v >= cut.len() {
        return Err(MaxCutError::InvalidVertex(v));
    }
    let mut membership = cut.membership.clone();
    membership[v] = !membership[v];
    Ok(Cut { membership })
}

/// Vertices whose flip strictly increases the cut value, ascending.
pub fn improving_flips(inst: &MaxCutInstance, cut: &Cut) -> Result<Vec<usize>, MaxCutError> {
    inst.check_cut(cut)?;
    (0..inst.vertex_count)
        .filter_map(|v| match flip_gain(inst, cut, v) {
            Ok(g) if g > 0 => Some(Ok(v)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Runs the Flip algorithm to a local optimum.
///
/// Returns the final cut and the sequence of flipped vertices. Replaying the
/// trace from `start` reproduces the result with strictly increasing values.
pub fn flip_local_search(
    inst: &MaxCutInstance,
    start: &Cut,
    pivot: Pivot,
) -> Result<(Cut, Vec<usize>), MaxCutError> {
    inst.check_cut(start)?;
    let mut cut = start.clone();
    let mut trace = Vec::new();
    loop {
        let chosen = match pivot {
            Pivot::FirstImprovement => (0..inst.vertex_count)
                .find(|&v| flip_gain(inst, &cut, v).unwrap() > 0),
            Pivot::BestImprovement => (0..inst.vertex_count)
                .map(|v| (v, flip_gain(inst, &cut, v).unwrap()))
                .filter(|&(_, g)| g > 0)
                // max_by_key returns the last maximum; ties must go to the
                // lowest vertex id, so compare on (gain, Reverse(v)).
                .max_by_key(|&(v, g)| (g, std::cmp::Reverse(v)))
                .map(|(v, _)| v),
        };
        match chosen {
            Some(v) => {
                cut = flip(&cut, v)?;
                trace.push(v);
            }
            None => return Ok((cut, trace)),
        }
    }
}

/// Directed graph over all `2^n` cuts with an arc for every improving flip.
#[derive(Clone, Debug)]
pub struct TransitionGraph {
    /// Objective value of the cut whose mask is the node index.
    pub values: Vec<i64>,
    /// Arcs `(mask, mask)`, sorted ascending.
    pub arcs: Vec<(u64, u64)>,
}

impl TransitionGraph {
    /// Node ids (cut masks) with no outgoing arc, ascending.
    pub fn sinks(&self) -> Vec<u64> {
        let mut has_out = vec![false; self.values.len()];
        for &(from, _) in &self.arcs {
            has_out[from as usize] = true;
        }
        (0..self.values.len() as u64)
            .filter(|&m| !has_out[m as usize])
            .collect()
    }
}

/// Enumerates the full Flip transition graph; `n` must be at most `limit`.
pub fn maxcut_transition_graph(
    inst: &MaxCutInstance,
    limit: usize,
) -> Result<TransitionGraph, MaxCutError> {
    let n = inst.vertex_count;
    if n > limit {
        return Err(MaxCutError::EnumerationLimit {
            vertices: n,
            limit,
        });
    }
    let mut values = Vec::with_capacity(1 << n);
    let mut arcs = Vec::new();
    for mask in 0..1u64 << n {
        let cut = Cut::from_mask(n, mask);
        values.push(cut_value(inst, &cut)?);
        for v in 0..n {
            if flip_gain(inst, &cut, v)? > 0 {
                arcs.push((mask, mask ^ (1 << v)));
            }
        }
    }
    arcs.sort_unstable();
    Ok(TransitionGraph { values, arcs })
}

/// Parses the Max-Cut text format.
///
/// Line 1 is `n m`, followed by `m` lines `u v w` with 0-based vertex ids and
/// decimal signed weights. Lines starting with `#` are comments.
pub fn parse_maxcut(text: &str) -> Result<MaxCutInstance, MaxCutError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|&(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines
        .next()
        .ok_or(MaxCutError::Parse { line: 0, msg: "empty file".into() })?;
    let parse_err = |line: usize, msg: &str| MaxCutError::Parse { line, msg: msg.into() };
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line_no, "expected vertex count"))?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line_no, "expected edge count"))?;
    if parts.next().is_some() {
        return Err(parse_err(line_no, "trailing tokens after `n m`"));
    }
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, "fewer edge lines than declared"))?;
        let mut parts = line.split_whitespace();
        let mut field = |name: &str| {
            parts
                .next()
                .ok_or_else(|| parse_err(line_no, &format!("missing {name}")))
        };
        let u: usize = field("u")?
            .parse()
            .map_err(|_| parse_err(line_no, "bad vertex id"))?;
        let v: usize = field("v")?
            .parse()
            .map_err(|_| parse_err(line_no, "bad vertex id"))?;
        let w: i64 = field("w")?
            .parse()
            .map_err(|_| parse_err(line_no, "bad weight"))?;
        if parts.next().is_some() {
            return Err(parse_err(line_no, "trailing tokens after `u v w`"));
        }
        edges.push((u, v, w));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, "more edge lines than declared"));
    }
    MaxCutInstance::new(n, edges)
}

/// Writes the Max-Cut text format; `parse_maxcut` inverts it exactly.
pub fn write_maxcut(inst: &MaxCutInstance) -> String {
    let mut out = format!("{} {}\n", inst.vertex_count, inst.edges.len());
    for &(u, v, w) in &inst.edges {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

/// Parses a cut file: a single line of `0`/`1` characters, `1` = first set.
pub fn parse_cut(text: &str, n: usize) -> Result<Cut, MaxCutError> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or(MaxCutError::Parse { line: 0, msg: "empty cut file".into() })?;
    let membership: Vec<bool> = line
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(MaxCutError::Parse { line: 1, msg: format!("bad bit {c:?}") }),
        })
        .collect::<Result<_, _>>()?;
    if membership.len() != n {
        return Err(MaxCutError::SizeMismatch { cut: membership.len(), instance: n });
    }
    Ok(Cut::new(membership))
}

/// Random connected-ish graph with bounded degree, for randomized suites.
///
/// Candidate edges are tried in random order and accepted while both
/// endpoints stay under `max_degree`; weights are uniform in `weights`.
pub fn random_bounded_degree_instance<R: Rng>(
    n: usize,
    max_degree: usize,
    weights: std::ops::RangeInclusive<i64>,
    rng: &mut R,
) -> MaxCutInstance {
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    for i in (1..candidates.len()).rev() {
        let j = rng.gen_range(0..=i);
        candidates.swap(i, j);
    }
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in candidates {
        if degree[u] < max_degree && degree[v] < max_degree && rng.gen_bool(0.8) {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v, rng.gen_range(weights.clone())));
        }
    }
    MaxCutInstance::new(n, edges).expect("generated edges are simple by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge() -> MaxCutInstance {
        MaxCutInstance::new(2, vec![(0, 1, 5)]).unwrap()
    }

    fn path_xyz() -> MaxCutInstance {
        // x-y weight 3, y-z weight -2
        MaxCutInstance::new(3, vec![(0, 1, 3), (1, 2, -2)]).unwrap()
    }

    /// Oracle: evaluate the cut value directly from the definition.
    fn cut_value_oracle(inst: &MaxCutInstance, cut: &Cut) -> i64 {
        let mut total = 0;
        for &(u, v, w) in inst.edges() {
            if cut.in_first_set(u) != cut.in_first_set(v) {
                total += w;
            }
        }
        total
    }

    #[test]
    fn cut_value_single_edge() {
        let inst = single_edge();
        let split = Cut::new(vec![true, false]);
        let same = Cut::new(vec![true, true]);
        assert_eq!(cut_value(&inst, &split).unwrap(), 5);
        assert_eq!(cut_value(&inst, &same).unwrap(), 0);
    }

    #[test]
    fn cut_value_path() {
        let inst = path_xyz();
        // {x, z} | {y}: both edges cross, 3 + (-2) = 1
        let cut = Cut::new(vec![true, false, true]);
        assert_eq!(cut_value(&inst, &cut).unwrap(), 1);
    }

    #[test]
    fn cut_value_size_mismatch() {
        let inst = single_edge();
        let bad = Cut::new(vec![true]);
        assert!(matches!(
            cut_value(&inst, &bad),
            Err(MaxCutError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn flip_gain_matches_recomputation() {
        let inst = single_edge();
        let same = Cut::new(vec![true, true]);
        let split = Cut::new(vec![true, false]);
        assert_eq!(flip_gain(&inst, &same, 0).unwrap(), 5);
        assert_eq!(flip_gain(&inst, &split, 0).unwrap(), -5);
    }

    #[test]
    fn flip_gain_isolated_vertex() {
        let inst = MaxCutInstance::new(3, vec![(0, 1, 7)]).unwrap();
        let cut = Cut::all_first(3);
        assert_eq!(flip_gain(&inst, &cut, 2).unwrap(), 0);
    }

    #[test]
    fn flip_gain_invalid_vertex() {
        let inst = single_edge();
        let cut = Cut::all_first(2);
        assert!(matches!(
            flip_gain(&inst, &cut, 9),
            Err(MaxCutError::InvalidVertex(9))
        ));
    }

    #[test]
    fn flip_is_involution() {
        let cut = Cut::new(vec![true, false, true]);
        let back = flip(&flip(&cut, 1).unwrap(), 1).unwrap();
        assert_eq!(cut, back);
        let only_x = flip(&Cut::all_first(3), 0).unwrap();
        assert_eq!(only_x, Cut::new(vec![false, true, true]));
    }

    #[test]
    fn flipping_every_vertex_complements() {
        let mut cut = Cut::new(vec![true, false, true, true]);
        let original = cut.clone();
        for v in 0..4 {
            cut = flip(&cut, v).unwrap();
        }
        assert_eq!(cut, original.complement());
    }

    #[test]
    fn improving_flips_single_edge() {
        let inst = single_edge();
        assert_eq!(improving_flips(&inst, &Cut::all_first(2)).unwrap(), vec![0, 1]);
        assert!(improving_flips(&inst, &Cut::new(vec![true, false]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn improving_flips_matches_bruteforce_on_path() {
        let inst = path_xyz();
        for mask in 0..8u64 {
            let cut = Cut::from_mask(3, mask);
            let expected: Vec<usize> = (0..3)
                .filter(|&v| {
                    let flipped = flip(&cut, v).unwrap();
                    cut_value_oracle(&inst, &flipped) > cut_value_oracle(&inst, &cut)
                })
                .collect();
            assert_eq!(improving_flips(&inst, &cut).unwrap(), expected);
        }
    }

    #[test]
    fn local_search_from_local_optimum_is_empty() {
        let inst = single_edge();
        let split = Cut::new(vec![true, false]);
        let (end, trace) = flip_local_search(&inst, &split, Pivot::FirstImprovement).unwrap();
        assert!(trace.is_empty());
        assert_eq!(end, split);
    }

    #[test]
    fn local_search_single_edge_first_improvement() {
        let inst = single_edge();
        let (end, trace) =
            flip_local_search(&inst, &Cut::all_first(2), Pivot::FirstImprovement).unwrap();
        assert_eq!(trace, vec![0]);
        assert_eq!(cut_value(&inst, &end).unwrap(), 5);
    }

    #[test]
    fn local_search_trace_strictly_increases() {
        let inst = path_xyz();
        for pivot in [Pivot::FirstImprovement, Pivot::BestImprovement] {
            for mask in 0..8u64 {
                let start = Cut::from_mask(3, mask);
                let (end, trace) = flip_local_search(&inst, &start, pivot).unwrap();
                let mut cut = start.clone();
                let mut value = cut_value(&inst, &cut).unwrap();
                for &v in &trace {
                    cut = flip(&cut, v).unwrap();
                    let next = cut_value(&inst, &cut).unwrap();
                    assert!(next > value, "trace not strictly improving");
                    value = next;
                }
                assert_eq!(cut, end);
                assert!(improving_flips(&inst, &end).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn transition_graph_single_edge() {
        let inst = single_edge();
        let tg = maxcut_transition_graph(&inst, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(tg.values.len(), 4);
        // both same-side cuts (00, 11) point at both split cuts (01, 10)
        assert_eq!(
            tg.arcs,
            vec![(0b00, 0b01), (0b00, 0b10), (0b11, 0b01), (0b11, 0b10)]
        );
        assert_eq!(tg.sinks(), vec![0b01, 0b10]);
    }

    #[test]
    fn transition_graph_no_edges() {
        let inst = MaxCutInstance::new(3, vec![]).unwrap();
        let tg = maxcut_transition_graph(&inst, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(tg.values.len(), 8);
        assert!(tg.arcs.is_empty());
    }

    #[test]
    fn transition_graph_all_negative_weights() {
        let inst = MaxCutInstance::new(3, vec![(0, 1, -4), (1, 2, -1), (0, 2, -3)]).unwrap();
        let tg = maxcut_transition_graph(&inst, DEFAULT_ENUM_LIMIT).unwrap();
        let sinks = tg.sinks();
        assert!(sinks.contains(&0b000), "all-first cut must be a sink");
        assert!(sinks.contains(&0b111), "all-second cut must be a sink");
        for &s in &sinks {
            let cut = Cut::from_mask(3, s);
            assert!(improving_flips(&inst, &cut).unwrap().is_empty());
        }
    }

    #[test]
    fn transition_graph_respects_limit() {
        let inst = MaxCutInstance::new(5, vec![]).unwrap();
        assert!(matches!(
            maxcut_transition_graph(&inst, 4),
            Err(MaxCutError::EnumerationLimit { vertices: 5, limit: 4 })
        ));
    }

    #[test]
    fn local_search_ends_in_transition_graph_sink() {
        let inst = path_xyz();
        let tg = maxcut_transition_graph(&inst, DEFAULT_ENUM_LIMIT).unwrap();
        let sinks = tg.sinks();
        for mask in 0..8u64 {
            let (end, _) = flip_local_search(
                &inst,
                &Cut::from_mask(3, mask),
                Pivot::BestImprovement,
            )
            .unwrap();
            assert!(sinks.contains(&end.mask()));
        }
    }

    #[test]
    fn parse_rejects_duplicates_and_self_loops() {
        assert!(matches!(
            parse_maxcut("2 2\n0 1 5\n1 0 2\n"),
            Err(MaxCutError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            parse_maxcut("2 1\n1 1 5\n"),
            Err(MaxCutError::SelfLoop(1))
        ));
    }

    #[test]
    fn parse_accepts_comments_and_signed_weights() {
        let inst = parse_maxcut("# test instance\n3 2\n0 1 3\n# middle comment\n1 2 -2\n").unwrap();
        assert_eq!(inst.vertex_count(), 3);
        assert_eq!(inst.edges(), &[(0, 1, 3), (1, 2, -2)]);
    }

    #[test]
    fn write_parse_roundtrip() {
        let inst = path_xyz();
        let text = write_maxcut(&inst);
        let back = parse_maxcut(&text).unwrap();
        assert_eq!(back.edges(), inst.edges());
        assert_eq!(back.vertex_count(), inst.vertex_count());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;

        fn arb_instance() -> impl Strategy<Value = MaxCutInstance> {
            (2usize..8, any::<u64>()).prop_map(|(n, seed)| {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                random_bounded_degree_instance(n, 5, -9..=9, &mut rng)
            })
        }

        proptest! {
            #[test]
            fn incremental_gain_matches_recomputation(
                inst in arb_instance(),
                mask in any::<u64>(),
                v_raw in 0usize..8,
            ) {
                let n = inst.vertex_count();
                let cut = Cut::from_mask(n, mask);
                let v = v_raw % n;
                let gain = flip_gain(&inst, &cut, v).unwrap();
                let flipped = flip(&cut, v).unwrap();
                prop_assert_eq!(
                    cut_value(&inst, &flipped).unwrap(),
                    cut_value(&inst, &cut).unwrap() + gain
                );
            }

            #[test]
            fn cut_symmetry(inst in arb_instance(), mask in any::<u64>()) {
                let cut = Cut::from_mask(inst.vertex_count(), mask);
                prop_assert_eq!(
                    cut_value(&inst, &cut).unwrap(),
                    cut_value(&inst, &cut.complement()).unwrap()
                );
            }
        }
    }
}
