//! The construction pipeline: base cycle, second-set paths, parity gadget
//! assignment, XOR splicing, priorities.

use std::collections::BTreeMap;

use crate::gadgets::{build_parity_gadget, build_xor_gadget, EdgeRole, ParityKind, Terminal};
use crate::maxcut::MaxCutInstance;
use crate::pair;

use super::orientation::partial_edge_orientation;
use super::{
    min_feasible_k, EdgeRecord, Orientation, ReductionArtifact, ReductionError, VertexRecord,
    VertexRole,
};

/// Compiles `h` into the sparse TSP graph for neighborhood size `k`.
///
/// `k` must be at least [`min_feasible_k`]; isolated H-vertices additionally
/// need `k >= 2` so that both parallel connections between their endpoints
/// get subdivided apart.
pub fn build_reduction(
    h: &MaxCutInstance,
    k: usize,
) -> Result<ReductionArtifact, ReductionError> {
    let orientation = partial_edge_orientation(h)?;
    let min = min_feasible_k(h, &orientation);
    if k < min {
        return Err(ReductionError::InfeasibleK { k, min });
    }
    if k < 2 {
        if let Some(v) = (0..h.vertex_count()).find(|&v| h.degree(v) == 0) {
            return Err(ReductionError::IsolatedVertexNeedsLargerK(v));
        }
    }
    Builder {
        h,
        orientation,
        k,
        roles: Vec::new(),
        edges: BTreeMap::new(),
    }
    .build()
}

struct Builder<'a> {
    h: &'a MaxCutInstance,
    orientation: Orientation,
    k: usize,
    roles: Vec<VertexRole>,
    edges: BTreeMap<(usize, usize), i64>,
}

struct VertexDraft {
    x_left: usize,
    x_right: usize,
    second_set: Vec<usize>,
    doors: Vec<(usize, usize)>,
    gateways: Vec<(usize, usize)>,
    gateway_consumers: Vec<Option<usize>>,
    incident_gadgets: Vec<usize>,
}

impl Builder<'_> {
    fn add_vertex(&mut self, role: VertexRole) -> usize {
        self.roles.push(role);
        self.roles.len() - 1
    }

    fn add_edge(&mut self, u: usize, v: usize, w: i64) -> Result<(), ReductionError> {
        if u == v {
            return Err(ReductionError::Internal(format!("self-loop at {u}")));
        }
        if self.edges.insert(pair(u, v), w).is_some() {
            return Err(ReductionError::Internal(format!("parallel edge {u}-{v}")));
        }
        Ok(())
    }

    fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), ReductionError> {
        self.edges
            .remove(&pair(u, v))
            .map(|_| ())
            .ok_or_else(|| ReductionError::Internal(format!("missing edge {u}-{v}")))
    }

    fn build(mut self) -> Result<ReductionArtifact, ReductionError> {
        let n = self.h.vertex_count();
        let m = self.h.edge_count();
        let ring = 3 * (n + m);

        // base cycle: slot s covers ids 3s, 3s+1, 3s+2; the edge (3s, 3s+1)
        // is assigned to H-vertex s (s < n) or H-edge s-n, and 3s+2 is the
        // filler keeping assigned edges at distance three
        for slot in 0..n + m {
            if slot < n {
                self.add_vertex(VertexRole::FirstSetLeft { h_vertex: slot });
                self.add_vertex(VertexRole::FirstSetRight { h_vertex: slot });
            } else {
                self.add_vertex(VertexRole::GadgetZ { h_edge: slot - n });
                self.add_vertex(VertexRole::GadgetZPrime { h_edge: slot - n });
            }
            self.add_vertex(VertexRole::CycleFiller);
        }
        for j in 0..ring {
            self.add_edge(j, (j + 1) % ring, 0)?;
        }

        // second-set paths
        let mut drafts: Vec<VertexDraft> = Vec::with_capacity(n);
        for x in 0..n {
            let d = self.h.degree(x);
            let (x_left, x_right) = (3 * x, 3 * x + 1);
            let second_set: Vec<usize> = (0..2 * d)
                .map(|i| {
                    self.add_vertex(VertexRole::SecondSet {
                        h_vertex: x,
                        position: i + 1,
                    })
                })
                .collect();
            let mut doors = Vec::new();
            let mut gateways = Vec::new();
            if d == 0 {
                // the second-set path degenerates to a single door that
                // shares its endpoints with the first-set edge; the XOR
                // splice (order >= 1 here) separates the two
                doors.push(pair(x_left, x_right));
            } else {
                let mut path = vec![x_left];
                path.extend(&second_set);
                path.push(x_right);
                for (j, w) in path.windows(2).enumerate() {
                    let e = pair(w[0], w[1]);
                    self.add_edge(e.0, e.1, 0)?;
                    if j % 2 == 0 {
                        doors.push(e);
                    } else {
                        gateways.push(e);
                    }
                }
            }
            let gateway_consumers = vec![None; gateways.len()];
            drafts.push(VertexDraft {
                x_left,
                x_right,
                second_set,
                doors,
                gateways,
                gateway_consumers,
                incident_gadgets: Vec::new(),
            });
        }

        // parity gadget assignment in psi order: directed H-edges first,
        // input order within each group, consuming at each endpoint the
        // available gateway closest to x_left
        let mut psi: Vec<usize> = self.orientation.directed_edge_indices();
        psi.extend((0..m).filter(|e| self.orientation.is_star_edge(*e)));
        let mut edge_records: Vec<Option<EdgeRecord>> = (0..m).map(|_| None).collect();
        for (psi_index, &e) in psi.clone().iter().enumerate() {
            let (eu, ev, w) = self.h.edges()[e];
            let (x_side, y_side, kind) = match self.orientation.direction(e) {
                Some((tail, head)) => (tail, head, ParityKind::Strict),
                None => (eu, ev, ParityKind::Flexible),
            };
            let take_gateway = |drafts: &mut Vec<VertexDraft>, v: usize| -> Result<usize, ReductionError> {
                let draft = &mut drafts[v];
                let i = draft
                    .gateway_consumers
                    .iter()
                    .position(|c| c.is_none())
                    .ok_or_else(|| {
                        ReductionError::Internal(format!("vertex {v} is out of gateways"))
                    })?;
                draft.gateway_consumers[i] = Some(e);
                draft.incident_gadgets.push(e);
                Ok(i)
            };
            let gx = take_gateway(&mut drafts, x_side)?;
            let gy = take_gateway(&mut drafts, y_side)?;
            let (x_i, x_ip) = drafts[x_side].gateways[gx];
            let (y_j, y_jp) = drafts[y_side].gateways[gy];
            let z_bar = 3 * (n + e);
            let z_bar_p = z_bar + 1;
            self.remove_edge(x_i, x_ip)?;
            self.remove_edge(y_j, y_jp)?;
            self.remove_edge(z_bar, z_bar_p)?;

            let gadget = build_parity_gadget(kind)
                .map_err(|err| ReductionError::Internal(err.to_string()))?;
            let mut local_to_global = vec![usize::MAX; gadget.vertex_count()];
            // the gateway endpoint nearer x_left takes the unprimed terminal
            local_to_global[gadget.terminal(Terminal::X)] = x_i.min(x_ip);
            local_to_global[gadget.terminal(Terminal::XPrime)] = x_i.max(x_ip);
            local_to_global[gadget.terminal(Terminal::Y)] = y_j.min(y_jp);
            local_to_global[gadget.terminal(Terminal::YPrime)] = y_j.max(y_jp);
            local_to_global[gadget.terminal(Terminal::Z)] = z_bar;
            local_to_global[gadget.terminal(Terminal::ZPrime)] = z_bar_p;
            for local in 0..gadget.vertex_count() {
                if local_to_global[local] == usize::MAX {
                    local_to_global[local] =
                        self.add_vertex(VertexRole::ParityInternal { h_edge: e, local });
                }
            }
            let (same_w, diff_w) = if w >= 0 {
                (w, 0)
            } else {
                let negated = w.checked_neg().ok_or_else(|| {
                    ReductionError::Internal(format!("H-edge weight {w} cannot be negated"))
                })?;
                (0, negated)
            };
            let mut internal_edges = Vec::new();
            for &(lu, lv, role) in gadget.edges() {
                let weight = match role {
                    EdgeRole::SameSet => same_w,
                    EdgeRole::DifferentSet => diff_w,
                    EdgeRole::Plain => 0,
                };
                let (gu, gv) = (local_to_global[lu], local_to_global[lv]);
                self.add_edge(gu, gv, weight)?;
                internal_edges.push((pair(gu, gv).0, pair(gu, gv).1, role));
            }
            let standard_subtours = std::array::from_fn(|i| {
                gadget
                    .standard_subtour(i + 1)
                    .expect("patterns 1..=4 exist")
                    .iter()
                    .map(|&(lu, lv)| pair(local_to_global[lu], local_to_global[lv]))
                    .collect()
            });
            let terminals = std::array::from_fn(|t| local_to_global[gadget.terminal(Terminal::ALL[t])]);
            edge_records[e] = Some(EdgeRecord {
                h_edge: e,
                kind,
                psi_index,
                x_side,
                y_side,
                terminals,
                local_to_global,
                internal_edges,
                standard_subtours,
                same_set_weight: same_w,
                diff_set_weight: diff_w,
            });
        }

        // XOR gadget splicing, one per H-vertex
        let mut vertex_records = Vec::with_capacity(n);
        for (x, mut draft) in drafts.into_iter().enumerate() {
            let d = self.h.degree(x);
            let d_out = self.orientation.out_degree(x);
            let p = self.k - 2 * d - 2 * d_out - 1;
            let (x_left, x_right) = (draft.x_left, draft.x_right);
            let door_end = if d >= 1 {
                *draft.second_set.last().unwrap()
            } else {
                x_left
            };

            let mut rail_a = Vec::new();
            let mut rail_b = Vec::new();
            let mut midpoints = Vec::new();
            let (left_fs, right_fs, right_ss, sub_first, sub_second);
            if p == 0 {
                left_fs = pair(x_left, x_right);
                right_fs = left_fs;
                right_ss = *draft.doors.last().unwrap();
                sub_first = Default::default();
                sub_second = Default::default();
            } else {
                self.remove_edge(x_left, x_right)?;
                if d >= 1 {
                    self.remove_edge(door_end, x_right)?;
                }
                for i in 1..=p {
                    rail_a.push(self.add_vertex(VertexRole::XorRailA { h_vertex: x, index: i }));
                }
                for i in 1..=p {
                    rail_b.push(self.add_vertex(VertexRole::XorRailB { h_vertex: x, index: i }));
                }
                for i in 1..=p {
                    midpoints
                        .push(self.add_vertex(VertexRole::XorMidpoint { h_vertex: x, index: i }));
                }
                self.add_edge(x_left, rail_a[0], 0)?;
                self.add_edge(rail_a[p - 1], x_right, 0)?;
                self.add_edge(door_end, rail_b[0], 0)?;
                self.add_edge(rail_b[p - 1], x_right, 0)?;
                for i in 0..p - 1 {
                    self.add_edge(rail_a[i], rail_a[i + 1], 0)?;
                    self.add_edge(rail_b[i], rail_b[i + 1], 0)?;
                }
                for i in 0..p {
                    self.add_edge(rail_a[i], midpoints[i], 0)?;
                    self.add_edge(midpoints[i], rail_b[i], 0)?;
                }
                draft.doors.pop();
                draft.doors.push(pair(door_end, rail_b[0]));

                left_fs = pair(x_left, rail_a[0]);
                if p % 2 == 0 {
                    right_fs = pair(rail_a[p - 1], x_right);
                    right_ss = pair(rail_b[p - 1], x_right);
                } else {
                    right_fs = pair(rail_b[p - 1], x_right);
                    right_ss = pair(rail_a[p - 1], x_right);
                }
                let xor = build_xor_gadget(p);
                let to_global = |&(lu, lv): &(usize, usize)| {
                    let map = |l: usize| {
                        if l < p {
                            rail_a[l]
                        } else if l < 2 * p {
                            rail_b[l - p]
                        } else {
                            midpoints[l - 2 * p]
                        }
                    };
                    pair(map(lu), map(lv))
                };
                sub_first = xor.subtour_from_a1().iter().map(to_global).collect();
                sub_second = xor.subtour_from_b1().iter().map(to_global).collect();
            }

            vertex_records.push(VertexRecord {
                h_vertex: x,
                x_left,
                x_right,
                degree: d,
                out_degree: d_out,
                xor_order: p,
                second_set_vertices: draft.second_set,
                doors: draft.doors,
                gateway_consumers: draft
                    .gateway_consumers
                    .into_iter()
                    .map(|c| c.expect("all gateways consumed"))
                    .collect(),
                left_first_set: left_fs,
                right_first_set: right_fs,
                right_second_set: right_ss,
                xor_rail_a: rail_a,
                xor_rail_b: rail_b,
                xor_midpoints: midpoints,
                xor_subtour_first: sub_first,
                xor_subtour_second: sub_second,
                incident_gadgets: draft.incident_gadgets,
            });
        }

        let edge_records: Vec<EdgeRecord> = edge_records
            .into_iter()
            .map(|r| r.expect("every H-edge got a gadget"))
            .collect();
        let lambda = self.assign_priorities(&vertex_records, &edge_records, &psi)?;

        let artifact = ReductionArtifact::from_parts(
            self.h.clone(),
            self.orientation,
            self.k,
            self.roles.len(),
            self.edges,
            self.roles,
            vertex_records,
            edge_records,
            psi,
            lambda,
        );
        artifact.check_invariants()?;
        Ok(artifact)
    }

    /// Priorities N down to 1: degree-two vertices first (ascending id),
    /// then every x_left, then per H-vertex the XOR block
    /// `a_1..a_p, x_r, b_p..b_1`, then per gadget in psi order the fixed
    /// vertex orders (degree-three before degree-four vertices).
    fn assign_priorities(
        &self,
        vertex_records: &[VertexRecord],
        edge_records: &[EdgeRecord],
        psi: &[usize],
    ) -> Result<Vec<usize>, ReductionError> {
        let total = self.roles.len();
        let mut degree = vec![0usize; total];
        for &(u, v) in self.edges.keys() {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut lambda = vec![0usize; total];
        let mut next = total;
        let mut assign = |lambda: &mut Vec<usize>, v: usize| -> Result<(), ReductionError> {
            if lambda[v] != 0 {
                return Err(ReductionError::Internal(format!(
                    "vertex {v} assigned a priority twice"
                )));
            }
            lambda[v] = next;
            next -= 1;
            Ok(())
        };
        for v in 0..total {
            if degree[v] == 2 {
                assign(&mut lambda, v)?;
            }
        }
        for rec in vertex_records {
            assign(&mut lambda, rec.x_left)?;
        }
        for rec in vertex_records {
            for &a in &rec.xor_rail_a {
                assign(&mut lambda, a)?;
            }
            assign(&mut lambda, rec.x_right)?;
            for &b in rec.xor_rail_b.iter().rev() {
                assign(&mut lambda, b)?;
            }
        }
        for &e in psi {
            let rec = &edge_records[e];
            // local ids in priority order: strict (Y, X, b, X', b', a', Z,
            // Z', a, Y'), flexible (Y, X, Z, Z', X', Y')
            let order: &[usize] = match rec.kind {
                ParityKind::Strict => &[2, 0, 8, 1, 9, 7, 4, 5, 6, 3],
                ParityKind::Flexible => &[2, 0, 4, 5, 1, 3],
            };
            for &local in order {
                assign(&mut lambda, rec.local_to_global[local])?;
            }
        }
        if next != 0 {
            return Err(ReductionError::Internal(format!(
                "{next} vertices never received a priority"
            )));
        }
        Ok(lambda)
    }
}
