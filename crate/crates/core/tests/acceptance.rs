//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p cut2tour --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cut2tour::correspondence::{
    classify_tour, cut_to_tour, standard_transition_graph, standard_tour_weight, tour_to_cut,
    x_change, x_change_with_audit,
};
use cut2tour::gadgets::{
    build_parity_gadget, build_xor_gadget, enumerate_subtours, enumerate_xor_subtours,
    subtour_change_size, subtour_weight, ParityKind, SubtourClass,
};
use cut2tour::maxcut::{
    cut_value, maxcut_transition_graph, random_bounded_degree_instance, Cut, MaxCutInstance,
};
use cut2tour::reduction::{
    build_reduction, complete_instance, maximum_matching, min_feasible_k,
    partial_edge_orientation, ReductionArtifact,
};
use cut2tour::tsp::{
    apply_swap, enumerate_improving_k_swaps, hamiltonian_cycles, k_opt_local_search, random_tour,
    Tour,
};
use cut2tour::verify::{
    check_local_search_end_to_end, check_no_nonedge_local_optimum, run_all, summary, CheckStatus,
    VerifyOptions,
};
use cut2tour::Pivot;

fn h1() -> MaxCutInstance {
    MaxCutInstance::new(2, vec![(0, 1, 5)]).unwrap()
}

fn h2() -> MaxCutInstance {
    MaxCutInstance::new(3, vec![(0, 1, 3), (1, 2, -2)]).unwrap()
}

fn h1_artifact() -> ReductionArtifact {
    build_reduction(&h1(), 3).unwrap()
}

fn h2_artifact() -> ReductionArtifact {
    build_reduction(&h2(), 7).unwrap()
}

/// Five random degree-at-most-3 instances at their minimal feasible k.
fn random_suite(seed: u64) -> Vec<ReductionArtifact> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut artifacts = Vec::new();
    while artifacts.len() < 5 {
        let n = rng.gen_range(2..=4);
        let h = random_bounded_degree_instance(n, 3, -5..=5, &mut rng);
        let orientation = partial_edge_orientation(&h).unwrap();
        let mut k = min_feasible_k(&h, &orientation);
        if (0..n).any(|v| h.degree(v) == 0) {
            k = k.max(2);
        }
        artifacts.push(build_reduction(&h, k).unwrap());
    }
    artifacts
}

fn criterion(name: &str, limit: Duration, body: impl FnOnce() + std::panic::UnwindSafe) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(body);
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) if elapsed <= limit => {
            println!("acceptance {name}: PASS ({elapsed:.2?})");
        }
        Ok(()) => {
            println!("acceptance {name}: FAIL (took {elapsed:.2?}, limit {limit:.2?})");
            panic!("{name} exceeded its runtime limit");
        }
        Err(cause) => {
            println!("acceptance {name}: FAIL ({elapsed:.2?})");
            std::panic::resume_unwind(cause);
        }
    }
}

#[test]
fn acceptance_01_gadget_lemma_suite() {
    criterion("01 gadget-lemma-suite", Duration::from_secs(1), || {
        let strict = build_parity_gadget(ParityKind::Strict).unwrap();
        let subs = enumerate_subtours(&strict);
        assert_eq!(subs.len(), 4);
        assert!(subs.iter().all(|(_, c)| matches!(c, SubtourClass::Standard(_))));

        let flexible = build_parity_gadget(ParityKind::Flexible).unwrap();
        let subs = enumerate_subtours(&flexible);
        assert_eq!(subs.len(), 7);
        let standard = subs
            .iter()
            .filter(|(_, c)| matches!(c, SubtourClass::Standard(_)))
            .count();
        assert_eq!(standard, 4);
        assert_eq!(subs.len() - standard, 3);

        // change sizes: (7, 3, >7) strict and (3, 3, >3) flexible
        for (g, x_size, bound) in [(&strict, 7usize, 7usize), (&flexible, 3, 3)] {
            assert_eq!(subtour_change_size(g, 1, 2).unwrap(), x_size);
            assert_eq!(subtour_change_size(g, 3, 4).unwrap(), x_size);
            assert_eq!(subtour_change_size(g, 1, 3).unwrap(), 3);
            assert_eq!(subtour_change_size(g, 2, 4).unwrap(), 3);
            assert!(subtour_change_size(g, 1, 4).unwrap() > bound);
            assert!(subtour_change_size(g, 2, 3).unwrap() > bound);
        }

        // weight dichotomy for an arbitrary probe pair
        for g in [&strict, &flexible] {
            for (pattern, want) in [(1, 9), (2, 4), (3, 4), (4, 9)] {
                let sub = g.standard_subtour(pattern).unwrap();
                assert_eq!(subtour_weight(g, sub, 9, 4).unwrap(), want);
            }
        }

        // XOR gadgets: switching subtours swaps exactly p-1 edges
        for p in 2..=6usize {
            let subs = enumerate_xor_subtours(&build_xor_gadget(p));
            assert_eq!(subs.len(), 2);
            let a: BTreeSet<_> = subs[0].iter().copied().collect();
            let b: BTreeSet<_> = subs[1].iter().copied().collect();
            assert_eq!(a.symmetric_difference(&b).count(), 2 * (p - 1));
        }
    });
}

/// Oracle: exhaustive maximum matching by branching on the lowest
/// unmatched vertex.
fn exhaustive_maximum_matching(n: usize, adj: &[Vec<usize>]) -> usize {
    fn rec(v: usize, n: usize, adj: &[Vec<usize>], used: &mut [bool]) -> usize {
        if v == n {
            return 0;
        }
        if used[v] {
            return rec(v + 1, n, adj, used);
        }
        let mut best = rec(v + 1, n, adj, used);
        used[v] = true;
        for &w in &adj[v] {
            if w > v && !used[w] {
                used[w] = true;
                best = best.max(1 + rec(v + 1, n, adj, used));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    rec(0, n, adj, &mut vec![false; n])
}

#[test]
fn acceptance_02_orientation_properties() {
    criterion("02 orientation-properties", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(1002);
        for round in 0..200 {
            let n = 2 + round % 39;
            let h = random_bounded_degree_instance(n, 5, -9..=9, &mut rng);
            // star and out-degree postconditions are asserted internally
            let o = partial_edge_orientation(&h).unwrap();

            let mut star_degree = vec![0usize; n];
            for &e in o.star_edges() {
                let (u, v, _) = h.edges()[e];
                star_degree[u] += 1;
                star_degree[v] += 1;
            }
            for &e in o.star_edges() {
                let (u, v, _) = h.edges()[e];
                assert!(
                    star_degree[u] < 2 || star_degree[v] < 2,
                    "star part has a path of length 3"
                );
            }
            for v in 0..n {
                assert!(o.out_degree(v) <= 2);
            }

            if n <= 12 {
                let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
                for &(u, v, _) in h.edges() {
                    adj[u].push(v);
                    adj[v].push(u);
                }
                let blossom_size = maximum_matching(n, &adj)
                    .iter()
                    .filter(|m| m.is_some())
                    .count()
                    / 2;
                assert_eq!(
                    blossom_size,
                    exhaustive_maximum_matching(n, &adj),
                    "blossom disagrees with exhaustive matching on {n} vertices"
                );
            }
        }
    });
}

#[test]
fn acceptance_03_exhaustive_tour_census() {
    criterion("03 exhaustive-tour-census", Duration::from_secs(60), || {
        for (a, expected) in [(h1_artifact(), 4usize), (h2_artifact(), 8)] {
            let tours =
                hamiltonian_cycles(&a.g_edge_list(), a.vertex_count(), 64).unwrap();
            assert_eq!(tours.len(), expected);
            for tour in &tours {
                assert!(
                    classify_tour(&a, tour).unwrap().is_standard(),
                    "a tour of the sparse graph is not standard"
                );
            }
        }
    });
}

#[test]
fn acceptance_04_bijection_and_duality() {
    criterion("04 bijection-and-duality", Duration::from_secs(30), || {
        for a in [h1_artifact(), h2_artifact()] {
            let n = a.source().vertex_count();
            let tours: Vec<Tour> = (0..1u64 << n)
                .map(|mask| cut_to_tour(&a, &Cut::from_mask(n, mask)).unwrap())
                .collect();
            for (mask, tour) in tours.iter().enumerate() {
                let cut = Cut::from_mask(n, mask as u64);
                assert_eq!(tour_to_cut(&a, tour).unwrap(), cut, "round trip failed");
            }
            for m1 in 0..1u64 << n {
                for m2 in 0..1u64 << n {
                    let w1 = BigInt::from(standard_tour_weight(&a, &tours[m1 as usize]).unwrap());
                    let w2 = BigInt::from(standard_tour_weight(&a, &tours[m2 as usize]).unwrap());
                    let v1 = cut_value(a.source(), &Cut::from_mask(n, m1)).unwrap();
                    let v2 = cut_value(a.source(), &Cut::from_mask(n, m2)).unwrap();
                    assert_eq!(w1 - w2, BigInt::from(v2 - v1), "duality failed");
                }
            }
        }
    });
}

#[test]
fn acceptance_05_x_change_audit() {
    criterion("05 x-change-audit", Duration::from_secs(60), || {
        let mut artifacts = vec![h1_artifact(), h2_artifact()];
        artifacts.extend(random_suite(1005));
        for a in &artifacts {
            let n = a.source().vertex_count();
            for mask in 0..1u64 << n {
                let tour = cut_to_tour(a, &Cut::from_mask(n, mask)).unwrap();
                for x in 0..n {
                    let (mv, audit) = x_change_with_audit(a, &tour, x).unwrap();
                    assert_eq!(mv.remove.len(), a.k(), "remove side is not k");
                    assert_eq!(mv.add.len(), a.k(), "add side is not k");
                    let rec = a.vertex_record(x);
                    let (d, d_out, p) = (rec.degree, rec.out_degree, rec.xor_order);
                    assert_eq!(audit.door_part, d + 2, "door tally");
                    assert_eq!(audit.xor_part, 2 * p, "xor tally");
                    assert_eq!(audit.parity_part, 3 * d + 4 * d_out, "parity tally");
                    assert_eq!(
                        audit.door_part + audit.xor_part + audit.parity_part,
                        2 * a.k(),
                        "total involved edges"
                    );
                    // per-gadget terms: 7 when x is the X side of a strict
                    // gadget, 3 otherwise
                    for &(e, involved) in &audit.parity_by_edge {
                        let erec = a.edge_record(e);
                        let expected =
                            if erec.kind == ParityKind::Strict && erec.x_side == x { 7 } else { 3 };
                        assert_eq!(involved, expected, "per-gadget term");
                    }
                }
            }
        }
    });
}

#[test]
fn acceptance_06_transition_graph_isomorphism() {
    criterion("06 transition-graph-isomorphism", Duration::from_secs(300), || {
        let mut artifacts = vec![h1_artifact(), h2_artifact()];
        artifacts.extend(random_suite(1006));
        for a in &artifacts {
            let flip_graph = maxcut_transition_graph(a.source(), 20).unwrap();
            let tour_graph = standard_transition_graph(a, 20).unwrap();
            assert_eq!(
                flip_graph.arcs, tour_graph.arcs,
                "arc sets differ under the cut/tour bijection"
            );
            assert_eq!(flip_graph.sinks(), tour_graph.sinks(), "sink sets differ");
        }
    });
}

#[test]
fn acceptance_07_neighborhood_completeness() {
    criterion("07 neighborhood-completeness", Duration::from_secs(120), || {
        let a = h1_artifact();
        let inst = complete_instance(&a);
        let flip_graph = maxcut_transition_graph(a.source(), 20).unwrap();
        for mask in 0..4u64 {
            let tour = cut_to_tour(&a, &Cut::from_mask(2, mask)).unwrap();
            let moves = enumerate_improving_k_swaps(&inst, &tour, 3, None).unwrap();
            let mut landed_masks = BTreeSet::new();
            for mv in &moves {
                let landed = apply_swap(&tour, mv).unwrap();
                assert!(
                    classify_tour(&a, &landed).unwrap().is_standard(),
                    "an improving k-swap left the standard tours"
                );
                let landed_mask = tour_to_cut(&a, &landed).unwrap().mask();
                let flipped: Vec<usize> = (0..2)
                    .filter(|&v| mask >> v & 1 != landed_mask >> v & 1)
                    .collect();
                assert_eq!(flipped.len(), 1, "swap changed more than one vertex");
                let expected = x_change(&a, &tour, flipped[0]).unwrap();
                assert_eq!(*mv, expected, "improving k-swap is not an x-change");
                landed_masks.insert(landed_mask);
            }
            let expected_arcs: BTreeSet<u64> = flip_graph
                .arcs
                .iter()
                .filter(|&&(from, _)| from == mask)
                .map(|&(_, to)| to)
                .collect();
            assert_eq!(landed_masks, expected_arcs, "improving arcs differ");
        }
    });
}

#[test]
fn acceptance_08_nonedge_three_swap_lemma() {
    criterion("08 nonedge-three-swap-lemma", Duration::from_secs(600), || {
        for (a, seed) in [(h1_artifact(), 81u64), (h2_artifact(), 82)] {
            let report = check_no_nonedge_local_optimum(&a, 1000, seed);
            assert_eq!(report.counters["samples"], 1000);
            assert_eq!(report.counters["misses"], 0, "{}", report.render());
            assert_eq!(report.status(), CheckStatus::Pass, "{}", report.render());
        }
    });
}

#[test]
fn acceptance_09_end_to_end_local_search() {
    criterion("09 end-to-end-local-search", Duration::from_secs(300), || {
        let a = h1_artifact();
        let report = check_local_search_end_to_end(&a, 50, 99, Some(100_000_000));
        assert_eq!(report.counters["starts"], 50);
        assert_eq!(report.counters["terminated"], 50, "{}", report.render());
        assert_eq!(report.counters["budget_exhausted"], 0);
        assert_eq!(report.status(), CheckStatus::Pass, "{}", report.render());
    });
}

#[test]
fn acceptance_10_determinism() {
    criterion("10 determinism", Duration::from_secs(120), || {
        let a = h1_artifact();
        let opts = VerifyOptions {
            samples: 120,
            starts: 10,
            seed: 424242,
            ..VerifyOptions::default()
        };

        // reports
        let run1: Vec<String> = run_all(&a, &opts).iter().map(|r| r.render()).collect();
        let run2: Vec<String> = run_all(&a, &opts).iter().map(|r| r.render()).collect();
        assert_eq!(run1, run2, "verification reports differ between runs");
        assert_eq!(
            summary(&run_all(&a, &opts)),
            summary(&run_all(&a, &opts)),
            "summaries differ between runs"
        );

        // local search traces
        let inst = complete_instance(&a);
        let mut rng1 = ChaCha8Rng::seed_from_u64(7);
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let s1 = random_tour(15, &mut rng1);
            let s2 = random_tour(15, &mut rng2);
            assert_eq!(s1, s2);
            let (t1, trace1) =
                k_opt_local_search(&inst, &s1, 3, Pivot::FirstImprovement, None).unwrap();
            let (t2, trace2) =
                k_opt_local_search(&inst, &s2, 3, Pivot::FirstImprovement, None).unwrap();
            assert_eq!(t1, t2);
            assert_eq!(trace1, trace2, "k-Opt traces differ for identical input");
        }

        // serialized files
        let file1 = cut2tour::tsp::write_tsp(&inst);
        let file2 = cut2tour::tsp::write_tsp(&complete_instance(&h1_artifact()));
        assert_eq!(file1, file2, "serialized instances differ");
        let manifest1 =
            serde_json::to_string_pretty(&cut2tour::reduction::Manifest::from_artifact(&a))
                .unwrap();
        let manifest2 = serde_json::to_string_pretty(&cut2tour::reduction::Manifest::from_artifact(
            &h1_artifact(),
        ))
        .unwrap();
        assert_eq!(manifest1, manifest2, "manifests differ");
    });
}
