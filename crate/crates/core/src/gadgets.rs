//! Parity gadgets, XOR gadgets, and their exhaustive subtour oracles.
//!
//! The two parity gadgets exist only as literal edge lists transcribed from
//! their drawings, so construction re-derives every structural claim about
//! them by exhaustive enumeration and fails loudly on any mismatch. A
//! mis-transcribed edge cannot survive [`build_parity_gadget`].
//!
//! Local vertex ids are stable small integers:
//!
//! Strict gadget (14 vertices, 18 edges):
//! `0=X, 1=X', 2=Y, 3=Y', 4=Z, 5=Z', 6=a, 7=a', 8=b, 9=b'`, and four
//! unlabeled degree-two midpoints `10` (on a'-X), `11` (on a-X'),
//! `12` (on b-b'), `13` (on Y-Y').
//!
//! Flexible gadget (8 vertices, 10 edges):
//! `0=X, 1=X', 2=Y, 3=Y', 4=Z, 5=Z'`, and two degree-two midpoints
//! `6` (on X-X') and `7` (on Y-Y').

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::pair;

#[derive(Clone, Debug, Error)]
pub enum GadgetError {
    #[error("{kind} gadget failed self-validation: {}", failures.join("; "))]
    Transcription {
        kind: ParityKind,
        failures: Vec<String>,
    },
    #[error("edge set is not a subtour: {0}")]
    NotASubtour(String),
    #[error("no standard subtour pattern {0}; patterns are 1..=4")]
    BadPattern(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityKind {
    Strict,
    Flexible,
}

impl fmt::Display for ParityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityKind::Strict => "strict",
            ParityKind::Flexible => "flexible",
        })
    }
}

/// Weight role of a gadget edge. Same-set edges carry the same-set weight,
/// different-set edges the different-set weight, plain edges weigh zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    SameSet,
    DifferentSet,
    Plain,
}

impl fmt::Display for EdgeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeRole::SameSet => "S",
            EdgeRole::DifferentSet => "D",
            EdgeRole::Plain => "P",
        })
    }
}

/// The six terminals every parity gadget exposes to the surrounding graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    X,
    XPrime,
    Y,
    YPrime,
    Z,
    ZPrime,
}

impl Terminal {
    pub const ALL: [Terminal; 6] = [
        Terminal::X,
        Terminal::XPrime,
        Terminal::Y,
        Terminal::YPrime,
        Terminal::Z,
        Terminal::ZPrime,
    ];
}

/// Classification of a subtour: one of the four standard endpoint patterns
/// or none of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SubtourClass {
    /// Pattern 1..=4: (1) a single Z-Z' path; (2) an X-X' path plus a Z-Z'
    /// path; (3) a Y-Y' path plus a Z-Z' path; (4) all three paths.
    Standard(u8),
    NonStandard,
}

/// A parity gadget as literal, self-validated graph data.
#[derive(Clone, Debug)]
pub struct ParityGadget {
    kind: ParityKind,
    vertex_count: usize,
    terminals: [usize; 6],
    edges: Vec<(usize, usize, EdgeRole)>,
    standard_subtours: [BTreeSet<(usize, usize)>; 4],
}

impl ParityGadget {
    pub fn kind(&self) -> ParityKind {
        self.kind
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize, EdgeRole)] {
        &self.edges
    }

    /// Local id of a terminal.
    pub fn terminal(&self, t: Terminal) -> usize {
        self.terminals[t as usize]
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals.contains(&v)
    }

    /// The unique standard subtour realizing `pattern` (1..=4).
    pub fn standard_subtour(&self, pattern: usize) -> Result<&BTreeSet<(usize, usize)>, GadgetError> {
        if !(1..=4).contains(&pattern) {
            return Err(GadgetError::BadPattern(pattern));
        }
        Ok(&self.standard_subtours[pattern - 1])
    }

    /// `(r_x, r_y)` such that changing the X-side engagement involves
    /// `2*r_x - 1` edges and the Y-side `2*r_y - 1`.
    pub fn change_parameters(&self) -> (usize, usize) {
        match self.kind {
            ParityKind::Strict => (4, 2),
            ParityKind::Flexible => (2, 2),
        }
    }

    fn role_of(&self, u: usize, v: usize) -> Option<EdgeRole> {
        let e = pair(u, v);
        self.edges
            .iter()
            .find(|&&(a, b, _)| pair(a, b) == e)
            .map(|&(_, _, r)| r)
    }
}

fn strict_edges() -> Vec<(usize, usize, EdgeRole)> {
    use EdgeRole::*;
    let (x, xp, y, yp, z, zp, a, ap, b, bp) = (0, 1, 2, 3, 4, 5, 6, 7, 8, 9);
    let (m_apx, m_axp, m_bbp, m_yyp) = (10, 11, 12, 13);
    vec![
        (a, b, Plain),
        (a, zp, DifferentSet),
        (z, zp, SameSet),
        (z, yp, DifferentSet),
        (a, yp, SameSet),
        (x, b, Plain),
        (xp, bp, Plain),
        (ap, bp, Plain),
        (y, zp, Plain),
        (z, ap, Plain),
        (ap, m_apx, Plain),
        (m_apx, x, Plain),
        (a, m_axp, Plain),
        (m_axp, xp, Plain),
        (b, m_bbp, Plain),
        (m_bbp, bp, Plain),
        (y, m_yyp, Plain),
        (m_yyp, yp, Plain),
    ]
}

fn flexible_edges() -> Vec<(usize, usize, EdgeRole)> {
    use EdgeRole::*;
    let (x, xp, y, yp, z, zp, r, s) = (0, 1, 2, 3, 4, 5, 6, 7);
    vec![
        (x, r, Plain),
        (r, xp, Plain),
        (yp, s, Plain),
        (s, y, Plain),
        (y, zp, Plain),
        (z, x, Plain),
        (z, zp, SameSet),
        (xp, yp, SameSet),
        (yp, z, DifferentSet),
        (xp, zp, DifferentSet),
    ]
}

/// Builds (and self-validates) a parity gadget.
///
/// The full lemma suite of [`verify_gadget`] runs once per kind per process;
/// any failed assertion means the literal edge list no longer matches the
/// intended gadget and construction refuses to hand it out.
pub fn build_parity_gadget(kind: ParityKind) -> Result<ParityGadget, GadgetError> {
    static STRICT: OnceLock<Result<ParityGadget, GadgetError>> = OnceLock::new();
    static FLEXIBLE: OnceLock<Result<ParityGadget, GadgetError>> = OnceLock::new();
    let cell = match kind {
        ParityKind::Strict => &STRICT,
        ParityKind::Flexible => &FLEXIBLE,
    };
    cell.get_or_init(|| {
        let (vertex_count, edges) = match kind {
            ParityKind::Strict => (14, strict_edges()),
            ParityKind::Flexible => (8, flexible_edges()),
        };
        let mut gadget = ParityGadget {
            kind,
            vertex_count,
            terminals: [0, 1, 2, 3, 4, 5],
            edges,
            standard_subtours: Default::default(),
        };
        let mut standard: [Option<BTreeSet<(usize, usize)>>; 4] = Default::default();
        for (edge_set, class) in enumerate_subtours(&gadget) {
            if let SubtourClass::Standard(i) = class {
                standard[i as usize - 1] = Some(edge_set.into_iter().collect());
            }
        }
        for (i, slot) in standard.into_iter().enumerate() {
            match slot {
                Some(s) => gadget.standard_subtours[i] = s,
                None => {
                    return Err(GadgetError::Transcription {
                        kind,
                        failures: vec![format!("no standard subtour for pattern {}", i + 1)],
                    })
                }
            }
        }
        let report = verify_gadget(&gadget);
        if report.passed() {
            Ok(gadget)
        } else {
            Err(GadgetError::Transcription {
                kind,
                failures: report.failures(),
            })
        }
    })
    .clone()
}

/// Checks whether `chosen` is a valid subtour of `g`: spanning vertex-disjoint
/// paths of length at least one, with Z and Z' as path endpoints and all other
/// endpoints among the terminals X, X', Y, Y'.
fn check_subtour(g: &ParityGadget, chosen: &BTreeSet<(usize, usize)>) -> Result<SubtourClass, String> {
    let n = g.vertex_count;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in chosen {
        if g.role_of(u, v).is_none() {
            return Err(format!("edge {u}-{v} is not a gadget edge"));
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let z = g.terminal(Terminal::Z);
    let zp = g.terminal(Terminal::ZPrime);
    let mut endpoints = Vec::new();
    for (v, nbrs) in adj.iter().enumerate() {
        match nbrs.len() {
            0 => return Err(format!("vertex {v} is uncovered")),
            1 => endpoints.push(v),
            2 => {}
            d => return Err(format!("vertex {v} has degree {d}")),
        }
    }
    if adj[z].len() != 1 || adj[zp].len() != 1 {
        return Err("Z and Z' must be path endpoints".into());
    }
    let allowed: BTreeSet<usize> = Terminal::ALL.iter().map(|&t| g.terminal(t)).collect();
    if endpoints.iter().any(|v| !allowed.contains(v)) {
        return Err("a path endpoint is not a terminal".into());
    }

    // walk each path to find its endpoint pair; anything not reached from an
    // endpoint is a cycle component, which a subtour must not contain
    let mut pairs = BTreeSet::new();
    let mut visited = vec![false; n];
    for &start in &endpoints {
        if visited[start] {
            continue;
        }
        let mut prev = usize::MAX;
        let mut cur = start;
        visited[cur] = true;
        loop {
            let next = adj[cur].iter().copied().find(|&w| w != prev);
            match next {
                Some(w) if !visited[w] => {
                    visited[w] = true;
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
        pairs.insert(pair(start, cur));
    }
    if visited.iter().any(|&v| !v) {
        return Err("edge set contains a cycle".into());
    }
    let x = pair(g.terminal(Terminal::X), g.terminal(Terminal::XPrime));
    let y = pair(g.terminal(Terminal::Y), g.terminal(Terminal::YPrime));
    let zz = pair(z, zp);
    let class = if pairs == BTreeSet::from([zz]) {
        SubtourClass::Standard(1)
    } else if pairs == BTreeSet::from([zz, x]) {
        SubtourClass::Standard(2)
    } else if pairs == BTreeSet::from([zz, y]) {
        SubtourClass::Standard(3)
    } else if pairs == BTreeSet::from([zz, x, y]) {
        SubtourClass::Standard(4)
    } else {
        SubtourClass::NonStandard
    };
    Ok(class)
}

/// Exhaustively enumerates all subtours of a parity gadget.
///
/// Recursion over the edge list prunes on vertex degrees (Z and Z' can take
/// at most one edge, everything else at most two), then each surviving edge
/// set is classified. Sorted by edge set.
pub fn enumerate_subtours(g: &ParityGadget) -> Vec<(Vec<(usize, usize)>, SubtourClass)> {
    let z = g.terminal(Terminal::Z);
    let zp = g.terminal(Terminal::ZPrime);
    let cap: Vec<usize> = (0..g.vertex_count)
        .map(|v| if v == z || v == zp { 1 } else { 2 })
        .collect();
    let mut degrees = vec![0usize; g.vertex_count];
    let mut chosen = BTreeSet::new();
    let mut out = Vec::new();
    recurse(g, 0, &cap, &mut degrees, &mut chosen, &mut out);
    out.sort();
    return out;

    fn recurse(
        g: &ParityGadget,
        i: usize,
        cap: &[usize],
        degrees: &mut Vec<usize>,
        chosen: &mut BTreeSet<(usize, usize)>,
        out: &mut Vec<(Vec<(usize, usize)>, SubtourClass)>,
    ) {
        if i == g.edges.len() {
            if let Ok(class) = check_subtour(g, chosen) {
                out.push((chosen.iter().copied().collect(), class));
            }
            return;
        }
        let (u, v, _) = g.edges[i];
        recurse(g, i + 1, cap, degrees, chosen, out);
        if degrees[u] < cap[u] && degrees[v] < cap[v] {
            degrees[u] += 1;
            degrees[v] += 1;
            chosen.insert(pair(u, v));
            recurse(g, i + 1, cap, degrees, chosen, out);
            chosen.remove(&pair(u, v));
            degrees[u] -= 1;
            degrees[v] -= 1;
        }
    }
}

/// Weight of a subtour under the given same-set and different-set weights.
pub fn subtour_weight(
    g: &ParityGadget,
    subtour: &BTreeSet<(usize, usize)>,
    same_set_w: i64,
    diff_set_w: i64,
) -> Result<i64, GadgetError> {
    check_subtour(g, subtour).map_err(GadgetError::NotASubtour)?;
    let mut total = 0;
    for &(u, v) in subtour {
        match g.role_of(u, v).expect("checked above") {
            EdgeRole::SameSet => total += same_set_w,
            EdgeRole::DifferentSet => total += diff_set_w,
            EdgeRole::Plain => {}
        }
    }
    Ok(total)
}

/// Number of edges involved in changing between standard subtours `i` and
/// `j` (the symmetric difference of their edge sets).
pub fn subtour_change_size(g: &ParityGadget, i: usize, j: usize) -> Result<usize, GadgetError> {
    let a = g.standard_subtour(i)?;
    let b = g.standard_subtour(j)?;
    Ok(a.symmetric_difference(b).count())
}

/// One named assertion of the gadget lemma suite.
#[derive(Clone, Debug)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Pass/fail report of the full lemma suite for one gadget.
#[derive(Clone, Debug)]
pub struct GadgetReport {
    pub kind: ParityKind,
    pub assertions: Vec<Assertion>,
}

impl GadgetReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.assertions
            .iter()
            .filter(|a| !a.passed)
            .map(|a| format!("{}: {}", a.name, a.detail))
            .collect()
    }
}

/// Builds the gadget of the requested kind and runs the lemma suite on it.
pub fn verify_parity_gadget(kind: ParityKind) -> Result<GadgetReport, GadgetError> {
    build_parity_gadget(kind).map(|g| verify_gadget(&g))
}

/// Runs every lemma assertion against an arbitrary gadget value.
///
/// Checked: uniqueness of the four standard subtours, the exact non-standard
/// count (0 strict, 3 flexible), the weight dichotomy, the change-size
/// parameters, the degree profile of the gadget once each terminal gains its
/// one external edge, and the 2+2 split of weighted edges.
pub fn verify_gadget(g: &ParityGadget) -> GadgetReport {
    let mut assertions = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        assertions.push(Assertion {
            name: name.into(),
            passed,
            detail,
        });
    };

    let terminals: BTreeSet<usize> = Terminal::ALL.iter().map(|&t| g.terminal(t)).collect();
    check(
        "terminals-distinct",
        terminals.len() == 6,
        format!("{} distinct terminals", terminals.len()),
    );

    let subtours = enumerate_subtours(g);
    let expected_total = match g.kind {
        ParityKind::Strict => 4,
        ParityKind::Flexible => 7,
    };
    check(
        "subtour-count",
        subtours.len() == expected_total,
        format!("{} subtours, expected {expected_total}", subtours.len()),
    );

    let mut per_pattern = [0usize; 4];
    let mut non_standard = 0usize;
    let mut standard_sets: BTreeMap<u8, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (edges, class) in &subtours {
        match class {
            SubtourClass::Standard(i) => {
                per_pattern[*i as usize - 1] += 1;
                standard_sets.insert(*i, edges.iter().copied().collect());
            }
            SubtourClass::NonStandard => non_standard += 1,
        }
    }
    for (i, &count) in per_pattern.iter().enumerate() {
        check(
            &format!("unique-standard-subtour-{}", i + 1),
            count == 1,
            format!("pattern {} realized by {count} subtours", i + 1),
        );
    }
    let expected_non_standard = match g.kind {
        ParityKind::Strict => 0,
        ParityKind::Flexible => 3,
    };
    check(
        "non-standard-count",
        non_standard == expected_non_standard,
        format!("{non_standard} non-standard subtours, expected {expected_non_standard}"),
    );

    // weight dichotomy, probed with (1,0) and (0,1)
    for (i, expect_same) in [(1u8, true), (2, false), (3, false), (4, true)] {
        if let Some(sub) = standard_sets.get(&i) {
            let w_same = subtour_weight(g, sub, 1, 0).unwrap_or(i64::MIN);
            let w_diff = subtour_weight(g, sub, 0, 1).unwrap_or(i64::MIN);
            let (want_same, want_diff) = if expect_same { (1, 0) } else { (0, 1) };
            check(
                &format!("weight-class-subtour-{i}"),
                w_same == want_same && w_diff == want_diff,
                format!("same-set part {w_same} (want {want_same}), different-set part {w_diff} (want {want_diff})"),
            );
        }
    }

    if standard_sets.len() == 4 {
        let size = |i: u8, j: u8| {
            standard_sets[&i]
                .symmetric_difference(&standard_sets[&j])
                .count()
        };
        let (rx, ry) = g.change_parameters();
        for (i, j, want) in [(1, 2, 2 * rx - 1), (3, 4, 2 * rx - 1), (1, 3, 2 * ry - 1), (2, 4, 2 * ry - 1)] {
            check(
                &format!("change-size-{i}-{j}"),
                size(i, j) == want,
                format!("{} edges involved, expected {want}", size(i, j)),
            );
        }
        let bound = 2 * rx.max(ry) - 1;
        for (i, j) in [(1, 4), (2, 3)] {
            check(
                &format!("change-size-{i}-{j}"),
                size(i, j) > bound,
                format!("{} edges involved, expected more than {bound}", size(i, j)),
            );
        }
    }

    // degree profile once every terminal gains its single external edge
    let mut degree = vec![0usize; g.vertex_count];
    for &(u, v, _) in &g.edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    for &t in &terminals {
        degree[t] += 1;
    }
    let degree_four: BTreeSet<usize> = (0..g.vertex_count).filter(|&v| degree[v] == 4).collect();
    let expected_four: BTreeSet<usize> = match g.kind {
        // Z, Z', a, Y'
        ParityKind::Strict => BTreeSet::from([4, 5, 6, 3]),
        // Z, Z', X', Y'
        ParityKind::Flexible => BTreeSet::from([4, 5, 1, 3]),
    };
    check(
        "degree-four-vertices",
        degree_four == expected_four,
        format!("{degree_four:?}, expected {expected_four:?}"),
    );
    check(
        "degree-profile",
        degree.iter().all(|&d| (2..=4).contains(&d)),
        format!("degrees {degree:?}"),
    );

    let same = g.edges.iter().filter(|e| e.2 == EdgeRole::SameSet).count();
    let diff = g.edges.iter().filter(|e| e.2 == EdgeRole::DifferentSet).count();
    check(
        "weighted-edge-split",
        same == 2 && diff == 2,
        format!("{same} same-set and {diff} different-set edges"),
    );

    GadgetReport {
        kind: g.kind,
        assertions,
    }
}

/// The ladder gadget spliced into an H-vertex's first-set edge and its door
/// closest to `x_r`.
///
/// Local ids: rail vertices `a_i = i-1` and `b_i = p+i-1` for `i` in `1..=p`,
/// rung midpoints `c_i = 2p+i-1`.
#[derive(Clone, Copy, Debug)]
pub struct XorGadget {
    order: usize,
}

/// Builds the XOR gadget of the given order; order 0 is the empty graph.
pub fn build_xor_gadget(order: usize) -> XorGadget {
    XorGadget { order }
}

impl XorGadget {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertex_count(&self) -> usize {
        3 * self.order
    }

    /// Local id of rail vertex `a_i`, `i` in `1..=p`.
    pub fn rail_a(&self, i: usize) -> usize {
        debug_assert!((1..=self.order).contains(&i));
        i - 1
    }

    pub fn rail_b(&self, i: usize) -> usize {
        debug_assert!((1..=self.order).contains(&i));
        self.order + i - 1
    }

    pub fn midpoint(&self, i: usize) -> usize {
        debug_assert!((1..=self.order).contains(&i));
        2 * self.order + i - 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let p = self.order;
        let mut edges = Vec::new();
        for i in 1..p {
            edges.push((self.rail_a(i), self.rail_a(i + 1)));
            edges.push((self.rail_b(i), self.rail_b(i + 1)));
        }
        for i in 1..=p {
            edges.push((self.rail_a(i), self.midpoint(i)));
            edges.push((self.midpoint(i), self.rail_b(i)));
        }
        edges
    }

    /// The subtours in closed form: all rungs plus alternating rail edges.
    ///
    /// For order at least 2 there are exactly two, one with `a_1` as an
    /// endpoint and one with `b_1`; for order 1 they coincide and for order
    /// 0 the single subtour is empty. The exhaustive
    /// [`enumerate_xor_subtours`] cross-checks this construction.
    pub fn subtours(&self) -> Vec<BTreeSet<(usize, usize)>> {
        let p = self.order;
        if p == 0 {
            return vec![BTreeSet::new()];
        }
        let rungs: BTreeSet<(usize, usize)> = (1..=p)
            .flat_map(|i| {
                [
                    pair(self.rail_a(i), self.midpoint(i)),
                    pair(self.midpoint(i), self.rail_b(i)),
                ]
            })
            .collect();
        let snake = |start_on_b: bool| -> BTreeSet<(usize, usize)> {
            let mut edges = rungs.clone();
            for i in 1..p {
                let on_b = start_on_b == (i % 2 == 1);
                if on_b {
                    edges.insert(pair(self.rail_b(i), self.rail_b(i + 1)));
                } else {
                    edges.insert(pair(self.rail_a(i), self.rail_a(i + 1)));
                }
            }
            edges
        };
        if p == 1 {
            vec![rungs]
        } else {
            // starting at a_1 the path crosses rung 1 and continues on the
            // b rail; starting at b_1 it continues on the a rail
            vec![snake(true), snake(false)]
        }
    }

    /// The subtour with `a_1` as an endpoint (the first-set side once the
    /// gadget is assigned to a vertex).
    pub fn subtour_from_a1(&self) -> BTreeSet<(usize, usize)> {
        self.subtours().swap_remove(0)
    }

    /// The subtour with `b_1` as an endpoint.
    pub fn subtour_from_b1(&self) -> BTreeSet<(usize, usize)> {
        let mut subs = self.subtours();
        subs.pop().unwrap()
    }
}

/// Exhaustively enumerates the subtours of an XOR gadget: every spanning
/// path with both endpoints in `{a_1, a_p, b_1, b_p}`.
pub fn enumerate_xor_subtours(g: &XorGadget) -> Vec<Vec<(usize, usize)>> {
    let p = g.order();
    if p == 0 {
        return vec![Vec::new()];
    }
    let n = g.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let allowed: BTreeSet<usize> = [g.rail_a(1), g.rail_a(p), g.rail_b(1), g.rail_b(p)]
        .into_iter()
        .collect();

    let mut found: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    for &start in &allowed {
        let mut used = vec![false; n];
        used[start] = true;
        let mut path = vec![start];
        dfs(&adj, &allowed, &mut used, &mut path, n, &mut found);
    }
    return found.into_iter().collect();

    fn dfs(
        adj: &[Vec<usize>],
        allowed: &BTreeSet<usize>,
        used: &mut Vec<bool>,
        path: &mut Vec<usize>,
        n: usize,
        found: &mut BTreeSet<Vec<(usize, usize)>>,
    ) {
        if path.len() == n {
            let last = *path.last().unwrap();
            if allowed.contains(&last) {
                let mut edges: Vec<(usize, usize)> =
                    path.windows(2).map(|w| pair(w[0], w[1])).collect();
                edges.sort_unstable();
                found.insert(edges);
            }
            return;
        }
        let v = *path.last().unwrap();
        for &w in &adj[v] {
            if !used[w] {
                used[w] = true;
                path.push(w);
                dfs(adj, allowed, used, path, n, found);
                path.pop();
                used[w] = false;
            }
        }
    }
}

/// Dump format used by the CLI and golden-file tests: one line per edge,
/// `u v role` with `u < v` and role `S`, `D`, or `P`.
pub fn dump_parity_gadget(g: &ParityGadget) -> String {
    let mut out = String::new();
    for &(u, v, role) in &g.edges {
        let (u, v) = pair(u, v);
        out.push_str(&format!("{u} {v} {role}\n"));
    }
    out
}

/// Same dump format for XOR gadgets; every edge is plain.
pub fn dump_xor_gadget(g: &XorGadget) -> String {
    let mut out = String::new();
    for (u, v) in g.edges() {
        let (u, v) = pair(u, v);
        out.push_str(&format!("{u} {v} P\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_gadget_shape() {
        let g = build_parity_gadget(ParityKind::Strict).unwrap();
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(g.edges().len(), 18);
    }

    #[test]
    fn flexible_gadget_shape() {
        let g = build_parity_gadget(ParityKind::Flexible).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edges().len(), 10);
    }

    #[test]
    fn strict_has_exactly_four_subtours_all_standard() {
        let g = build_parity_gadget(ParityKind::Strict).unwrap();
        let subs = enumerate_subtours(&g);
        assert_eq!(subs.len(), 4);
        let mut seen = BTreeSet::new();
        for (_, class) in subs {
            match class {
                SubtourClass::Standard(i) => {
                    assert!(seen.insert(i));
                }
                SubtourClass::NonStandard => panic!("strict gadget has a non-standard subtour"),
            }
        }
        assert_eq!(seen, BTreeSet::from([1, 2, 3, 4]));
    }

    #[test]
    fn flexible_has_seven_subtours_three_non_standard() {
        let g = build_parity_gadget(ParityKind::Flexible).unwrap();
        let subs = enumerate_subtours(&g);
        assert_eq!(subs.len(), 7);
        let non_standard = subs
            .iter()
            .filter(|(_, c)| *c == SubtourClass::NonStandard)
            .count();
        assert_eq!(non_standard, 3);
    }

    #[test]
    fn subtour_weights_follow_dichotomy() {
        for kind in [ParityKind::Strict, ParityKind::Flexible] {
            let g = build_parity_gadget(kind).unwrap();
            let w = |i: usize, s: i64, d: i64| {
                subtour_weight(&g, g.standard_subtour(i).unwrap(), s, d).unwrap()
            };
            assert_eq!(w(1, 5, 0), 5);
            assert_eq!(w(2, 5, 0), 0);
            assert_eq!(w(3, 5, 0), 0);
            assert_eq!(w(4, 5, 0), 5);
            assert_eq!(w(1, 0, 2), 0);
            assert_eq!(w(2, 0, 2), 2);
            assert_eq!(w(4, 0, 2), 0);
        }
    }

    #[test]
    fn change_sizes() {
        let strict = build_parity_gadget(ParityKind::Strict).unwrap();
        assert_eq!(subtour_change_size(&strict, 1, 2).unwrap(), 7);
        assert_eq!(subtour_change_size(&strict, 3, 4).unwrap(), 7);
        assert_eq!(subtour_change_size(&strict, 1, 3).unwrap(), 3);
        assert_eq!(subtour_change_size(&strict, 2, 4).unwrap(), 3);
        assert!(subtour_change_size(&strict, 1, 4).unwrap() > 7);
        assert!(subtour_change_size(&strict, 2, 3).unwrap() > 7);
        assert_eq!(subtour_change_size(&strict, 1, 1).unwrap(), 0);

        let flexible = build_parity_gadget(ParityKind::Flexible).unwrap();
        assert_eq!(subtour_change_size(&flexible, 1, 2).unwrap(), 3);
        assert_eq!(subtour_change_size(&flexible, 1, 3).unwrap(), 3);
        assert_eq!(subtour_change_size(&flexible, 3, 4).unwrap(), 3);
        assert_eq!(subtour_change_size(&flexible, 2, 4).unwrap(), 3);
        assert!(subtour_change_size(&flexible, 1, 4).unwrap() > 3);
        assert!(subtour_change_size(&flexible, 2, 3).unwrap() > 3);

        assert!(subtour_change_size(&strict, 0, 2).is_err());
        assert!(subtour_change_size(&strict, 1, 5).is_err());
    }

    #[test]
    fn verify_passes_for_both_kinds() {
        for kind in [ParityKind::Strict, ParityKind::Flexible] {
            let report = verify_parity_gadget(kind).unwrap();
            assert!(report.passed(), "{:?}", report.failures());
        }
    }

    #[test]
    fn corrupted_gadget_fails_verification() {
        let mut g = build_parity_gadget(ParityKind::Strict).unwrap();
        g.edges.pop();
        let report = verify_gadget(&g);
        assert!(!report.passed());
        assert!(!report.failures().is_empty());
    }

    #[test]
    fn subtour_weight_rejects_non_subtours() {
        let g = build_parity_gadget(ParityKind::Flexible).unwrap();
        let bogus: BTreeSet<(usize, usize)> = [(0, 6)].into_iter().collect();
        assert!(matches!(
            subtour_weight(&g, &bogus, 1, 1),
            Err(GadgetError::NotASubtour(_))
        ));
    }

    #[test]
    fn xor_order_zero_and_one() {
        let g0 = build_xor_gadget(0);
        assert_eq!(g0.vertex_count(), 0);
        assert!(g0.edges().is_empty());
        assert_eq!(enumerate_xor_subtours(&g0), vec![Vec::new()]);
        assert_eq!(g0.subtours().len(), 1);

        let g1 = build_xor_gadget(1);
        let subs = enumerate_xor_subtours(&g1);
        assert_eq!(subs.len(), 1);
        assert_eq!(g1.subtours().len(), 1);
    }

    #[test]
    fn xor_shapes() {
        let g2 = build_xor_gadget(2);
        assert_eq!(g2.vertex_count(), 6);
        assert_eq!(g2.edges().len(), 6);
        let g4 = build_xor_gadget(4);
        assert_eq!(g4.vertex_count(), 12);
        assert_eq!(g4.edges().len(), 14);
    }

    #[test]
    fn xor_two_subtours_and_swap_size() {
        for p in 2..=6 {
            let g = build_xor_gadget(p);
            let subs = enumerate_xor_subtours(&g);
            assert_eq!(subs.len(), 2, "order {p}");
            let a: BTreeSet<_> = subs[0].iter().copied().collect();
            let b: BTreeSet<_> = subs[1].iter().copied().collect();
            assert_eq!(a.symmetric_difference(&b).count(), 2 * (p - 1), "order {p}");
        }
    }

    #[test]
    fn xor_closed_form_matches_enumeration() {
        for p in 0..=6 {
            let g = build_xor_gadget(p);
            let closed: BTreeSet<BTreeSet<(usize, usize)>> = g.subtours().into_iter().collect();
            let enumerated: BTreeSet<BTreeSet<(usize, usize)>> = enumerate_xor_subtours(&g)
                .into_iter()
                .map(|v| v.into_iter().collect())
                .collect();
            assert_eq!(closed, enumerated, "order {p}");
        }
    }

    #[test]
    fn xor_subtour_endpoints() {
        for p in 2..=5 {
            let g = build_xor_gadget(p);
            let degree_one = |edges: &BTreeSet<(usize, usize)>| -> BTreeSet<usize> {
                let mut d = vec![0usize; g.vertex_count()];
                for &(u, v) in edges {
                    d[u] += 1;
                    d[v] += 1;
                }
                (0..g.vertex_count()).filter(|&v| d[v] == 1).collect()
            };
            let a = g.subtour_from_a1();
            let expect_a = if p % 2 == 0 { g.rail_a(p) } else { g.rail_b(p) };
            assert_eq!(degree_one(&a), BTreeSet::from([g.rail_a(1), expect_a]));
            let b = g.subtour_from_b1();
            let expect_b = if p % 2 == 0 { g.rail_b(p) } else { g.rail_a(p) };
            assert_eq!(degree_one(&b), BTreeSet::from([g.rail_b(1), expect_b]));
        }
    }

    #[test]
    fn dumps_are_stable() {
        let g = build_parity_gadget(ParityKind::Strict).unwrap();
        assert_eq!(dump_parity_gadget(&g), dump_parity_gadget(&g));
        assert!(dump_parity_gadget(&g).lines().count() == 18);
        let x = build_xor_gadget(3);
        assert!(dump_xor_gadget(&x).lines().all(|l| l.ends_with(" P")));
    }
}
