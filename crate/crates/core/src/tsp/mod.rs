//! TSP instances with arbitrary-precision weights, tours, k-swaps, and the
//! k-Opt local search.
//!
//! Completion weights of reduced instances grow like `M * 4^lambda`, which
//! exceeds any fixed-width integer almost immediately, so every weight here
//! is a [`BigUint`]. Tours are kept in a canonical form (started at vertex 0,
//! oriented toward the smaller neighbor of 0) so they can serve as map keys.

mod hamiltonian;
mod search;
mod swaps;

pub use hamiltonian::hamiltonian_cycles;
pub use search::{find_improving_3swap, k_opt_local_search};
pub use swaps::{apply_swap, enumerate_improving_k_swaps, SwapMove};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::pair;

/// Default cap on `vertex_count` for Hamiltonian cycle enumeration.
pub const DEFAULT_TOUR_ENUM_LIMIT: usize = 64;

/// Default cap on examined reconnection candidates per neighborhood scan.
pub const DEFAULT_SWAP_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum TspError {
    #[error("tour has {tour} vertices but instance has {instance}")]
    SizeMismatch { tour: usize, instance: usize },
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),
    #[error("not a tour: {0}")]
    NotATour(String),
    #[error("swap removes edge {0}-{1} which is not in the tour")]
    RemoveNotInTour(usize, usize),
    #[error("swap adds edge {0}-{1} which is already in the tour")]
    AddAlreadyInTour(usize, usize),
    #[error("swap removes {removed} edges but adds {added}")]
    UnbalancedSwap { removed: usize, added: usize },
    #[error("swap is empty")]
    EmptySwap,
    #[error("invalid swap: {0}")]
    InvalidSwap(String),
    #[error("enumeration budget of {budget} candidates exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("graph has {vertices} vertices, enumeration limit is {limit}")]
    EnumerationLimit { vertices: usize, limit: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Edge classification carried through the reduction.
///
/// `G` edges come from the constructed sparse graph; `X` edges (non-edges)
/// exist only to complete the instance. Instances built by hand default to
/// all `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    GEdge,
    NonEdge,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeClass::GEdge => "G",
            EdgeClass::NonEdge => "X",
        })
    }
}

/// A complete graph with symmetric nonnegative weights.
#[derive(Clone, Debug)]
pub struct TspInstance {
    vertex_count: usize,
    weights: Vec<BigUint>,
    classes: Vec<EdgeClass>,
}

impl TspInstance {
    /// All-zero instance on `n` vertices; every pair starts as a g-edge.
    pub fn new(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        TspInstance {
            vertex_count: n,
            weights: vec![BigUint::zero(); pairs],
            classes: vec![EdgeClass::GEdge; pairs],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn index(&self, u: usize, v: usize) -> usize {
        let (a, b) = pair(u, v);
        debug_assert!(a < b && b < self.vertex_count);
        a * self.vertex_count - a * (a + 1) / 2 + (b - a - 1)
    }

    pub fn weight(&self, u: usize, v: usize) -> &BigUint {
        &self.weights[self.index(u, v)]
    }

    pub fn class(&self, u: usize, v: usize) -> EdgeClass {
        self.classes[self.index(u, v)]
    }

    pub fn set_weight(&mut self, u: usize, v: usize, w: BigUint) {
        let i = self.index(u, v);
        self.weights[i] = w;
    }

    pub fn set_class(&mut self, u: usize, v: usize, class: EdgeClass) {
        let i = self.index(u, v);
        self.classes[i] = class;
    }

    /// True when some tour edge is a non-edge.
    pub fn tour_uses_non_edge(&self, tour: &Tour) -> bool {
        tour.edges().any(|(u, v)| self.class(u, v) == EdgeClass::NonEdge)
    }

    fn check_tour(&self, tour: &Tour) -> Result<(), TspError> {
        if tour.len() == self.vertex_count {
            Ok(())
        } else {
            Err(TspError::SizeMismatch {
                tour: tour.len(),
                instance: self.vertex_count,
            })
        }
    }
}

/// A Hamiltonian cycle in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    /// Canonicalizes a vertex sequence: rotated to start at vertex 0 and
    /// oriented so the second element is the smaller neighbor of 0.
    pub fn new(order: Vec<usize>) -> Result<Self, TspError> {
        let n = order.len();
        if n < 3 {
            return Err(TspError::NotATour(format!("only {n} vertices")));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(TspError::NotATour(format!(
                    "vertex {v} out of range for {n} vertices"
                )));
            }
            if seen[v] {
                return Err(TspError::NotATour(format!("vertex {v} repeated")));
            }
            seen[v] = true;
        }
        let zero = order.iter().position(|&v| v == 0).unwrap();
        let mut rotated: Vec<usize> = order[zero..]
            .iter()
            .chain(&order[..zero])
            .copied()
            .collect();
        if rotated[1] > rotated[n - 1] {
            rotated[1..].reverse();
        }
        Ok(Tour { order: rotated })
    }

    /// Reassembles a tour from an edge set; fails unless the set is a single
    /// cycle covering all `n` vertices.
    pub fn from_edge_set(n: usize, edges: &BTreeSet<(usize, usize)>) -> Result<Self, TspError> {
        if edges.len() != n {
            return Err(TspError::NotATour(format!(
                "{} edges cannot form a cycle on {n} vertices",
                edges.len()
            )));
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(TspError::NotATour(format!("bad edge {u}-{v}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        if adj.iter().any(|a| a.len() != 2) {
            return Err(TspError::NotATour("a vertex does not have degree 2".into()));
        }
        let mut order = Vec::with_capacity(n);
        let mut prev = usize::MAX;
        let mut cur = 0;
        for _ in 0..n {
            order.push(cur);
            let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
            prev = cur;
            cur = next;
        }
        if cur != 0 || order.len() != n {
            return Err(TspError::NotATour("edge set is not a single cycle".into()));
        }
        Tour::new(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Tour edges as normalized pairs, in cyclic position order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| pair(self.order[i], self.order[(i + 1) % n]))
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges().collect()
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &v in &self.order {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Sum of edge weights along the tour.
pub fn tour_weight(inst: &TspInstance, tour: &Tour) -> Result<BigUint, TspError> {
    inst.check_tour(tour)?;
    let mut total = BigUint::zero();
    for (u, v) in tour.edges() {
        total += inst.weight(u, v);
    }
    Ok(total)
}

/// Uniformly random tour for sampling starts.
pub fn random_tour<R: Rng>(n: usize, rng: &mut R) -> Tour {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    Tour::new(order).expect("a permutation of 0..n is a tour")
}

/// Parses the TSP text format: line 1 is `N`, then one line `u v w class`
/// per unordered pair with `u < v`, decimal weights, class `G` or `X`.
pub fn parse_tsp(text: &str) -> Result<TspInstance, TspError> {
    let parse_err = |line: usize, msg: String| TspError::Parse { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|&(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(line_no, "expected vertex count".into()))?;
    let mut inst = TspInstance::new(n);
    let mut filled = vec![false; inst.weights.len()];
    for _ in 0..inst.weights.len() {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing pair lines".into()))?;
        let mut parts = line.split_whitespace();
        let mut field = || {
            parts
                .next()
                .ok_or_else(|| parse_err(line_no, "missing field".into()))
        };
        let u: usize = field()?
            .parse()
            .map_err(|_| parse_err(line_no, "bad vertex id".into()))?;
        let v: usize = field()?
            .parse()
            .map_err(|_| parse_err(line_no, "bad vertex id".into()))?;
        if u >= v || v >= n {
            return Err(parse_err(line_no, format!("pair {u} {v} must satisfy u < v < {n}")));
        }
        let w: BigUint = field()?
            .parse()
            .map_err(|_| parse_err(line_no, "bad weight".into()))?;
        let class = match field()? {
            "G" => EdgeClass::GEdge,
            "X" => EdgeClass::NonEdge,
            other => return Err(parse_err(line_no, format!("bad class {other:?}"))),
        };
        let idx = inst.index(u, v);
        if filled[idx] {
            return Err(parse_err(line_no, format!("duplicate pair {u} {v}")));
        }
        filled[idx] = true;
        inst.weights[idx] = w;
        inst.classes[idx] = class;
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, "more pair lines than expected".into()));
    }
    Ok(inst)
}

/// Writes the TSP text format; `parse_tsp` inverts it exactly.
pub fn write_tsp(inst: &TspInstance) -> String {
    let n = inst.vertex_count;
    let mut out = format!("{n}\n");
    for u in 0..n {
        for v in u + 1..n {
            out.push_str(&format!(
                "{u} {v} {} {}\n",
                inst.weight(u, v),
                inst.class(u, v)
            ));
        }
    }
    out
}

/// Parses a tour file: space-separated vertex ids on one line.
pub fn parse_tour(text: &str, n: usize) -> Result<Tour, TspError> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or(TspError::Parse { line: 0, msg: "empty tour file".into() })?;
    let order: Vec<usize> = line
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| TspError::Parse { line: 1, msg: format!("bad vertex id {t:?}") })
        })
        .collect::<Result<_, _>>()?;
    if order.len() != n {
        return Err(TspError::SizeMismatch { tour: order.len(), instance: n });
    }
    Tour::new(order)
}
