//! The verification harness: one executable check per structural claim,
//! runnable end to end on small instances.
//!
//! Every check produces a [`CheckReport`] whose items are individually
//! passed, failed, or skipped. A skipped item (typically a budget overrun)
//! never counts as a pass. Reports are deterministic functions of the
//! artifact and the seed.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correspondence::{
    classify_tour, cut_to_tour, standard_transition_graph, tour_to_cut, x_change,
};
use crate::gadgets::{
    build_xor_gadget, enumerate_xor_subtours, verify_parity_gadget, ParityKind,
};
use crate::maxcut::{improving_flips, maxcut_transition_graph, Cut};
use crate::reduction::{complete_instance, ReductionArtifact};
use crate::tsp::{
    apply_swap, enumerate_improving_k_swaps, find_improving_3swap, k_opt_local_search,
    random_tour, tour_weight, Tour, TspError, TspInstance,
};
use crate::Pivot;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckItem {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Outcome of one check: named items plus counters.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub check: String,
    pub items: Vec<CheckItem>,
    pub counters: BTreeMap<String, u64>,
}

impl CheckReport {
    fn new(check: &str) -> Self {
        CheckReport {
            check: check.into(),
            items: Vec::new(),
            counters: BTreeMap::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, status: CheckStatus, detail: impl Into<String>) {
        self.items.push(CheckItem {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn assert(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.push(name, status, detail);
    }

    fn count(&mut self, key: &str, delta: u64) {
        *self.counters.entry(key.into()).or_insert(0) += delta;
    }

    /// Worst status over the items: any failure fails the check; a skipped
    /// item keeps the check from claiming a full pass.
    pub fn status(&self) -> CheckStatus {
        if self.items.iter().any(|i| i.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else if self.items.iter().any(|i| i.status == CheckStatus::Skip) {
            CheckStatus::Skip
        } else {
            CheckStatus::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() != CheckStatus::Fail
    }

    /// Human-readable rendering, one line per item.
    pub fn render(&self) -> String {
        let mut out = format!("check {}: {}\n", self.check, self.status());
        for item in &self.items {
            out.push_str(&format!("  [{}] {}: {}\n", item.status, item.name, item.detail));
        }
        if !self.counters.is_empty() {
            let counters: Vec<String> = self
                .counters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!("  counters: {}\n", counters.join(" ")));
        }
        out
    }

    /// Machine-readable summary: `name status key=value ...`.
    pub fn summary_line(&self) -> String {
        let mut line = format!("{} {}", self.check, self.status());
        line.push_str(&format!(
            " items={} failures={}",
            self.items.len(),
            self.items.iter().filter(|i| i.status == CheckStatus::Fail).count()
        ));
        for (k, v) in &self.counters {
            line.push_str(&format!(" {k}={v}"));
        }
        line
    }
}

/// Tunables shared by the checks; every field has a CLI flag.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Non-edge tours sampled by the 3-swap lemma check.
    pub samples: usize,
    /// Random starts for the end-to-end local search check.
    pub starts: usize,
    pub seed: u64,
    /// Reconnection-candidate budget per neighborhood scan.
    pub budget: Option<u64>,
    /// Cap on the source vertex count for transition-graph enumeration.
    pub enum_limit: usize,
    /// Cap on the graph vertex count for Hamiltonian cycle enumeration.
    pub tour_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 1000,
            starts: 50,
            seed: 0,
            budget: Some(crate::tsp::DEFAULT_SWAP_BUDGET),
            enum_limit: crate::maxcut::DEFAULT_ENUM_LIMIT,
            tour_limit: crate::tsp::DEFAULT_TOUR_ENUM_LIMIT,
        }
    }
}

pub const CHECK_NAMES: [&str; 6] = [
    "gadget-suite",
    "all-tours-standard",
    "isomorphism",
    "no-nonedge-local-optimum",
    "local-search-end-to-end",
    "tightness",
];

/// Runs the named check; `None` for an unknown name.
pub fn run_check(name: &str, a: &ReductionArtifact, opts: &VerifyOptions) -> Option<CheckReport> {
    match name {
        "gadget-suite" => Some(check_gadget_suite()),
        "all-tours-standard" => Some(check_all_tours_standard(a, opts.tour_limit)),
        "isomorphism" => Some(check_isomorphism(a, opts.enum_limit)),
        "no-nonedge-local-optimum" => {
            Some(check_no_nonedge_local_optimum(a, opts.samples, opts.seed))
        }
        "local-search-end-to-end" => {
            Some(check_local_search_end_to_end(a, opts.starts, opts.seed, opts.budget))
        }
        "tightness" => Some(check_tightness(a, opts)),
        _ => None,
    }
}

/// Runs the whole suite in a fixed order.
pub fn run_all(a: &ReductionArtifact, opts: &VerifyOptions) -> Vec<CheckReport> {
    CHECK_NAMES
        .iter()
        .map(|name| run_check(name, a, opts).expect("all names are known"))
        .collect()
}

/// Gadget lemma suite: both parity gadgets pass their full assertion set and
/// XOR gadgets of order 0..=6 have the right subtour counts and swap sizes.
pub fn check_gadget_suite() -> CheckReport {
    let mut report = CheckReport::new("gadget-suite");
    for kind in [ParityKind::Strict, ParityKind::Flexible] {
        match verify_parity_gadget(kind) {
            Ok(gadget_report) => {
                for assertion in &gadget_report.assertions {
                    report.assert(
                        format!("{kind}-{}", assertion.name),
                        assertion.passed,
                        assertion.detail.clone(),
                    );
                }
            }
            Err(e) => report.assert(format!("{kind}-construction"), false, e.to_string()),
        }
    }
    for p in 0..=6usize {
        let gadget = build_xor_gadget(p);
        let subtours = enumerate_xor_subtours(&gadget);
        let expected = if p <= 1 { 1 } else { 2 };
        report.assert(
            format!("xor-{p}-subtour-count"),
            subtours.len() == expected,
            format!("{} subtours, expected {expected}", subtours.len()),
        );
        if p >= 2 && subtours.len() == 2 {
            let a: std::collections::BTreeSet<_> = subtours[0].iter().copied().collect();
            let b: std::collections::BTreeSet<_> = subtours[1].iter().copied().collect();
            let diff = a.symmetric_difference(&b).count();
            report.assert(
                format!("xor-{p}-swap-size"),
                diff == 2 * (p - 1),
                format!("changing subtours swaps {} edges, expected {}", diff / 2, p - 1),
            );
        }
        report.count("xor_orders", 1);
    }
    report
}

/// Exhaustive tour census: the sparse graph has exactly `2^n` Hamiltonian
/// cycles and every one of them is standard.
pub fn check_all_tours_standard(a: &ReductionArtifact, tour_limit: usize) -> CheckReport {
    let mut report = CheckReport::new("all-tours-standard");
    let n = a.source().vertex_count();
    let tours = match crate::tsp::hamiltonian_cycles(&a.g_edge_list(), a.vertex_count(), tour_limit)
    {
        Ok(tours) => tours,
        Err(e) => {
            report.push("enumeration", CheckStatus::Skip, e.to_string());
            return report;
        }
    };
    report.count("tours", tours.len() as u64);
    let expected = 1u64 << n;
    report.assert(
        "tour-count",
        tours.len() as u64 == expected,
        format!("{} tours, expected {expected}", tours.len()),
    );
    let mut non_standard = 0;
    for tour in &tours {
        match classify_tour(a, tour) {
            Ok(class) if class.is_standard() => {}
            _ => non_standard += 1,
        }
    }
    report.assert(
        "all-standard",
        non_standard == 0,
        format!("{non_standard} non-standard tours"),
    );
    report
}

/// The Flip transition graph and the standard-tour transition graph are
/// isomorphic under the cut/tour bijection.
pub fn check_isomorphism(a: &ReductionArtifact, enum_limit: usize) -> CheckReport {
    let mut report = CheckReport::new("isomorphism");
    let flip_graph = match maxcut_transition_graph(a.source(), enum_limit) {
        Ok(g) => g,
        Err(e) => {
            report.push("enumeration", CheckStatus::Skip, e.to_string());
            return report;
        }
    };
    let tour_graph = match standard_transition_graph(a, enum_limit) {
        Ok(g) => g,
        Err(e) => {
            report.push("standard-graph", CheckStatus::Fail, e.to_string());
            return report;
        }
    };
    report.count("nodes", flip_graph.values.len() as u64);
    report.count("arcs", flip_graph.arcs.len() as u64);
    let forward = flip_graph.arcs.iter().all(|arc| tour_graph.arcs.contains(arc));
    report.assert(
        "flip-arcs-have-tour-arcs",
        forward,
        "every improving flip maps to a weight-decreasing x-change",
    );
    let backward = tour_graph.arcs.iter().all(|arc| flip_graph.arcs.contains(arc));
    report.assert(
        "tour-arcs-have-flip-arcs",
        backward,
        "every weight-decreasing x-change maps to an improving flip",
    );
    report.assert(
        "sinks-correspond",
        flip_graph.sinks() == tour_graph.sinks(),
        format!(
            "{} flip local optima vs {} tour local optima",
            flip_graph.sinks().len(),
            tour_graph.sinks().len()
        ),
    );
    report
}

fn random_cut<R: Rng>(n: usize, rng: &mut R) -> Cut {
    Cut::new((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

/// Samples a tour of the completed instance containing at least one
/// non-edge. Even indices draw uniform random permutations; odd indices
/// relocate a single vertex of a random standard tour, which exercises the
/// one-non-edge regime.
fn sample_nonedge_tour(
    a: &ReductionArtifact,
    inst: &TspInstance,
    index: usize,
    rng: &mut ChaCha8Rng,
) -> Tour {
    let n = a.vertex_count();
    loop {
        let candidate = if index % 2 == 0 {
            random_tour(n, rng)
        } else {
            let cut = random_cut(a.source().vertex_count(), rng);
            let standard = cut_to_tour(a, &cut).expect("cuts map to standard tours");
            let mut order = standard.order().to_vec();
            let from = rng.gen_range(0..order.len());
            let v = order.remove(from);
            let to = rng.gen_range(0..=order.len());
            order.insert(to, v);
            let relocated = Tour::new(order).expect("relocation keeps a permutation");
            if relocated == standard {
                continue;
            }
            relocated
        };
        if inst.tour_uses_non_edge(&candidate) {
            return candidate;
        }
    }
}

/// Every sampled tour with a non-edge admits an improving 3-swap, found by
/// exhaustive search over swaps of size at most 3.
pub fn check_no_nonedge_local_optimum(
    a: &ReductionArtifact,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let mut report = CheckReport::new("no-nonedge-local-optimum");
    if a.is_degenerate() {
        report.push(
            "degenerate",
            CheckStatus::Skip,
            "all H-weights are zero, so non-edges cost nothing and cannot be improved away",
        );
        return report;
    }
    let inst = complete_instance(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut misses = 0u64;
    let mut bad_moves = 0u64;
    for index in 0..samples {
        let tour = sample_nonedge_tour(a, &inst, index, &mut rng);
        match find_improving_3swap(&inst, &tour) {
            Some(mv) => {
                hits += 1;
                let before = tour_weight(&inst, &tour).unwrap();
                match apply_swap(&tour, &mv) {
                    Ok(next) if tour_weight(&inst, &next).unwrap() < before => {}
                    _ => bad_moves += 1,
                }
            }
            None => misses += 1,
        }
    }
    report.count("samples", samples as u64);
    report.count("hits", hits);
    report.count("misses", misses);
    report.assert(
        "improving-3-swap-found",
        misses == 0,
        format!("{hits} hits, {misses} misses over {samples} samples"),
    );
    report.assert(
        "returned-moves-improve",
        bad_moves == 0,
        format!("{bad_moves} returned moves failed to improve"),
    );
    report
}

/// Budgeted k-Opt from random tours of the completed instance: every run
/// that terminates within budget ends on a standard, non-edge-free tour
/// whose cut image is a Flip local optimum.
pub fn check_local_search_end_to_end(
    a: &ReductionArtifact,
    starts: usize,
    seed: u64,
    budget: Option<u64>,
) -> CheckReport {
    let mut report = CheckReport::new("local-search-end-to-end");
    if a.is_degenerate() {
        report.push(
            "degenerate",
            CheckStatus::Skip,
            "all H-weights are zero, so k-Opt cannot be driven off non-edges",
        );
        return report;
    }
    let inst = complete_instance(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terminated = 0u64;
    let mut standard = 0u64;
    let mut locally_optimal_images = 0u64;
    let mut decreasing_traces = 0u64;
    let mut skipped = 0u64;
    for _ in 0..starts {
        let start = random_tour(a.vertex_count(), &mut rng);
        match k_opt_local_search(&inst, &start, a.k(), Pivot::FirstImprovement, budget) {
            Ok((terminal, trace)) => {
                terminated += 1;
                let mut cur = start.clone();
                let mut w = tour_weight(&inst, &cur).unwrap();
                let mut decreasing = true;
                for mv in &trace {
                    cur = apply_swap(&cur, mv).unwrap();
                    let next = tour_weight(&inst, &cur).unwrap();
                    if next >= w {
                        decreasing = false;
                    }
                    w = next;
                }
                if decreasing && cur == terminal {
                    decreasing_traces += 1;
                }
                let is_standard = !inst.tour_uses_non_edge(&terminal)
                    && classify_tour(a, &terminal).map(|c| c.is_standard()).unwrap_or(false);
                if is_standard {
                    standard += 1;
                }
                let image = tour_to_cut(a, &terminal).unwrap();
                if improving_flips(a.source(), &image).unwrap().is_empty() {
                    locally_optimal_images += 1;
                }
            }
            Err(TspError::BudgetExceeded { .. }) => skipped += 1,
            Err(e) => {
                report.push("search", CheckStatus::Fail, e.to_string());
                return report;
            }
        }
    }
    report.count("starts", starts as u64);
    report.count("terminated", terminated);
    report.count("budget_exhausted", skipped);
    if skipped > 0 {
        report.push(
            "budget",
            CheckStatus::Skip,
            format!("{skipped} of {starts} starts exhausted the budget"),
        );
    }
    report.assert(
        "terminals-standard",
        standard == terminated,
        format!("{standard} of {terminated} terminating runs ended standard and non-edge-free"),
    );
    report.assert(
        "images-locally-optimal",
        locally_optimal_images == terminated,
        format!("{locally_optimal_images} of {terminated} cut images are Flip local optima"),
    );
    report.assert(
        "traces-strictly-decreasing",
        decreasing_traces == terminated,
        format!("{decreasing_traces} of {terminated} traces replay with strictly decreasing weight"),
    );

    // a run started on the tour of a Flip local optimum must stop immediately
    let (optimal_cut, _) = crate::maxcut::flip_local_search(
        a.source(),
        &Cut::all_first(a.source().vertex_count()),
        Pivot::FirstImprovement,
    )
    .unwrap();
    let optimal_tour = cut_to_tour(a, &optimal_cut).unwrap();
    match k_opt_local_search(&inst, &optimal_tour, a.k(), Pivot::FirstImprovement, budget) {
        Ok((terminal, trace)) => report.assert(
            "local-optimum-start-is-terminal",
            trace.is_empty() && terminal == optimal_tour,
            format!("{} moves from a locally optimal start", trace.len()),
        ),
        Err(TspError::BudgetExceeded { .. }) => {
            report.push("local-optimum-start-is-terminal", CheckStatus::Skip, "budget")
        }
        Err(e) => report.push("local-optimum-start-is-terminal", CheckStatus::Fail, e.to_string()),
    }
    report
}

/// Tightness of the reduction with R = the standard tours: R contains all
/// local optima (standard tours by exhaustive k-swap enumeration where the
/// budget allows, non-edge tours by the 3-swap lemma), every cut's tour lies
/// in R with an exact round trip, and arcs between R-members mirror Flip
/// arcs (the isomorphism check).
pub fn check_tightness(a: &ReductionArtifact, opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("tightness");
    if a.is_degenerate() {
        report.push(
            "degenerate",
            CheckStatus::Skip,
            "all H-weights are zero; non-standard tours are local optima too",
        );
        return report;
    }
    let n = a.source().vertex_count();
    if n > opts.enum_limit {
        report.push(
            "enumeration",
            CheckStatus::Skip,
            format!("{n} source vertices exceed limit {}", opts.enum_limit),
        );
        return report;
    }

    // condition: phi-images cover R and g round-trips
    let mut round_trips_ok = true;
    for mask in 0..1u64 << n {
        let cut = Cut::from_mask(n, mask);
        let tour = match cut_to_tour(a, &cut) {
            Ok(t) => t,
            Err(_) => {
                round_trips_ok = false;
                break;
            }
        };
        let standard = classify_tour(a, &tour).map(|c| c.is_standard()).unwrap_or(false);
        if !standard || tour_to_cut(a, &tour).unwrap() != cut {
            round_trips_ok = false;
            break;
        }
    }
    report.assert(
        "cuts-map-into-R-with-round-trip",
        round_trips_ok,
        format!("all {} cuts", 1u64 << n),
    );

    // condition: arcs between R-members mirror Flip arcs
    let iso = check_isomorphism(a, opts.enum_limit);
    report.assert(
        "R-arcs-mirror-flip-arcs",
        iso.passed() && iso.status() != CheckStatus::Skip,
        format!("isomorphism check: {}", iso.status()),
    );

    // condition: no tour outside R is a local optimum; sampled non-edge
    // tours all admit an improving 3-swap
    let lemma = check_no_nonedge_local_optimum(a, opts.samples, opts.seed);
    report.assert(
        "sampled-nonedge-tours-improvable",
        lemma.passed(),
        format!("3-swap lemma check: {}", lemma.status()),
    );

    // standard tours: exhaustive k-swap enumeration, where the budget
    // allows, must find exactly the improving x-changes
    let inst = complete_instance(a);
    let tour_graph = match standard_transition_graph(a, opts.enum_limit) {
        Ok(g) => g,
        Err(e) => {
            report.push("standard-graph", CheckStatus::Fail, e.to_string());
            return report;
        }
    };
    let mut exhausted = false;
    let mut complete_ok = true;
    let mut moves_checked = 0u64;
    'masks: for mask in 0..1u64 << n {
        let tour = &tour_graph.tours[mask as usize];
        let moves = match enumerate_improving_k_swaps(&inst, tour, a.k(), opts.budget) {
            Ok(moves) => moves,
            Err(TspError::BudgetExceeded { .. }) => {
                exhausted = true;
                break 'masks;
            }
            Err(e) => {
                report.push("kswap-enumeration", CheckStatus::Fail, e.to_string());
                return report;
            }
        };
        let mut landed_masks = std::collections::BTreeSet::new();
        for mv in &moves {
            moves_checked += 1;
            let landed = match apply_swap(tour, mv) {
                Ok(t) => t,
                Err(_) => {
                    complete_ok = false;
                    continue;
                }
            };
            let image = match classify_tour(a, &landed) {
                Ok(class) if class.is_standard() => tour_to_cut(a, &landed).unwrap(),
                _ => {
                    complete_ok = false;
                    continue;
                }
            };
            let landed_mask = image.mask();
            landed_masks.insert(landed_mask);
            // the move must be exactly the x-change of the differing vertex
            let differing: Vec<usize> =
                (0..n).filter(|&v| mask >> v & 1 != landed_mask >> v & 1).collect();
            let is_x_change = differing.len() == 1
                && x_change(a, tour, differing[0]).map(|xc| xc == *mv).unwrap_or(false);
            if !is_x_change {
                complete_ok = false;
            }
        }
        let expected: std::collections::BTreeSet<u64> = tour_graph
            .arcs
            .iter()
            .filter(|&&(from, _)| from == mask)
            .map(|&(_, to)| to)
            .collect();
        if landed_masks != expected {
            complete_ok = false;
        }
    }
    report.count("improving_kswaps_checked", moves_checked);
    if exhausted {
        report.push(
            "improving-kswaps-are-x-changes",
            CheckStatus::Skip,
            "k-swap exhaustion skipped: budget exceeded",
        );
    } else {
        report.assert(
            "improving-kswaps-are-x-changes",
            complete_ok,
            format!("{moves_checked} improving k-swaps, all x-changes matching the arc set"),
        );
    }
    report
}

/// Machine-readable suite summary: one line per check.
pub fn summary(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for report in reports {
        out.push_str(&report.summary_line());
        out.push('\n');
    }
    out
}
