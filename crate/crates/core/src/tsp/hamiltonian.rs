//! Exhaustive Hamiltonian cycle enumeration over a sparse edge set.
//!
//! Edges incident to degree-two vertices must appear in every Hamiltonian
//! cycle; committing them during the search prunes most of the branching in
//! gadget-heavy graphs where nearly all vertices sit on forced chains.

use std::collections::BTreeSet;

use crate::pair;

use super::{Tour, TspError};

/// Enumerates every Hamiltonian cycle of the graph once, canonical form,
/// sorted. `vertex_count` must be at most `limit`.
pub fn hamiltonian_cycles(
    edges: &[(usize, usize)],
    vertex_count: usize,
    limit: usize,
) -> Result<Vec<Tour>, TspError> {
    if vertex_count > limit {
        return Err(TspError::EnumerationLimit {
            vertices: vertex_count,
            limit,
        });
    }
    if vertex_count < 3 {
        return Ok(Vec::new());
    }
    let mut edge_set = BTreeSet::new();
    for &(u, v) in edges {
        if u >= vertex_count || v >= vertex_count {
            return Err(TspError::InvalidVertex(u.max(v)));
        }
        if u == v {
            return Err(TspError::NotATour(format!("self-loop at {u}")));
        }
        edge_set.insert(pair(u, v));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for &(u, v) in &edge_set {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    if adj.iter().any(|a| a.len() < 2) {
        return Ok(Vec::new());
    }

    // forced adjacency: both edges of every degree-two vertex
    let mut forced: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); vertex_count];
    for v in 0..vertex_count {
        if adj[v].len() == 2 {
            for &w in &adj[v] {
                forced[v].insert(w);
                forced[w].insert(v);
            }
        }
    }
    if forced.iter().any(|f| f.len() > 2) {
        return Ok(Vec::new());
    }

    let mut search = Search {
        adj,
        forced,
        used: vec![false; vertex_count],
        path: Vec::with_capacity(vertex_count),
        found: Vec::new(),
    };
    search.used[0] = true;
    search.path.push(0);
    search.extend();
    let mut tours = search.found;
    tours.sort_unstable();
    Ok(tours)
}

struct Search {
    adj: Vec<Vec<usize>>,
    forced: Vec<BTreeSet<usize>>,
    used: Vec<bool>,
    path: Vec<usize>,
    found: Vec<Tour>,
}

impl Search {
    fn extend(&mut self) {
        let n = self.adj.len();
        let v = *self.path.last().unwrap();

        if self.path.len() == n {
            // close the cycle back to vertex 0
            let first = self.path[1];
            if self.adj[v].contains(&0)
                && self.forced[v].iter().all(|&w| w == self.path[self.path.len() - 2] || w == 0)
                && self.forced[0].iter().all(|&w| w == first || w == v)
                && first < v
            {
                // each undirected cycle is walked in both directions; keep
                // the canonical one
                self.found
                    .push(Tour::new(self.path.clone()).expect("search path is a permutation"));
            }
            return;
        }

        let candidates: Vec<usize> = if self.path.len() == 1 {
            // vertex 0 has two cycle slots, so two pending forced edges are
            // fine here; one of them may close the cycle at the very end
            if self.forced[0].len() == 2 {
                self.forced[0].iter().copied().collect()
            } else {
                self.adj[0].clone()
            }
        } else {
            let prev = self.path[self.path.len() - 2];
            let pending: Vec<usize> =
                self.forced[v].iter().copied().filter(|&w| w != prev).collect();
            match pending.len() {
                0 => self.adj[v].iter().copied().filter(|&w| !self.used[w]).collect(),
                1 if !self.used[pending[0]] => pending,
                _ => return, // a forced edge can no longer be satisfied
            }
        };

        for w in candidates {
            if self.used[w] {
                continue;
            }
            self.used[w] = true;
            self.path.push(w);
            self.extend();
            self.path.pop();
            self.used[w] = false;
        }
    }
}
