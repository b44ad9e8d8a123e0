//! Weight-preserving graph automorphisms and the orbit partitions they
//! induce on vertices and edges.

use crate::error::{CoreError, Result};
use crate::problems::WeightedGraph;
use std::collections::HashMap;

/// Exhaustive search cap; enough for PG construction at desk scale.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 10;

/// Disjoint orbit blocks covering the vertex set and the edge set.
///
/// Edge orbits index into the graph's edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub vertex_orbits: Vec<Vec<usize>>,
    pub edge_orbits: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn all_singletons(&self) -> bool {
        self.vertex_orbits.iter().all(|o| o.len() == 1)
    }

    /// Orbit id per vertex, in vertex order.
    pub fn vertex_orbit_ids(&self, n: usize) -> Vec<usize> {
        let mut ids = vec![0usize; n];
        for (k, orbit) in self.vertex_orbits.iter().enumerate() {
            for &v in orbit {
                ids[v] = k;
            }
        }
        ids
    }
}

struct UnionFind {
    parent: Vec<usize>,
    blocks: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), blocks: n }
    }
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.blocks -= 1;
        }
    }
    fn block_list(&mut self, n: usize) -> Vec<Vec<usize>> {
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
        blocks.sort_by_key(|b| b[0]);
        blocks
    }
}

/// Vertex and edge orbits under the weight-preserving automorphism group,
/// found by pruned exhaustive permutation search. Edge weights are compared
/// exactly, so symmetric instances must be built from identical literals.
pub fn automorphism_orbits(graph: &WeightedGraph) -> Result<OrbitPartition> {
    let n = graph.num_vertices();
    if n > MAX_AUTOMORPHISM_VERTICES {
        return Err(CoreError::capacity(format!(
            "automorphism search limited to n ≤ {MAX_AUTOMORPHISM_VERTICES}, got {n}"
        )));
    }
    graph.validate()?;

    // Adjacency weight lookup and per-vertex (degree, sorted weights) profile.
    let mut weight: HashMap<(usize, usize), f64> = HashMap::new();
    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, &(i, j, w)) in graph.edges().iter().enumerate() {
        let key = (i.min(j), i.max(j));
        weight.insert(key, w);
        edge_index.insert(key, k);
    }
    let mut profile: Vec<(usize, Vec<u64>)> = Vec::with_capacity(n);
    for v in 0..n {
        let mut ws: Vec<u64> = graph
            .edges()
            .iter()
            .filter(|&&(i, j, _)| i == v || j == v)
            .map(|&(_, _, w)| w.to_bits())
            .collect();
        ws.sort_unstable();
        profile.push((ws.len(), ws));
    }

    let mut vertices = UnionFind::new(n);
    let mut edges = UnionFind::new(graph.edges().len());

    // Backtracking assignment of perm[v] in vertex order with profile and
    // edge-consistency pruning.
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(
        0,
        n,
        &mut perm,
        &mut used,
        &profile,
        &weight,
        &edge_index,
        graph,
        &mut vertices,
        &mut edges,
    );

    Ok(OrbitPartition {
        vertex_orbits: vertices.block_list(n),
        edge_orbits: edges.block_list(graph.edges().len()),
    })
}

#[allow(clippy::too_many_arguments)]
fn search(
    v: usize,
    n: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    profile: &[(usize, Vec<u64>)],
    weight: &HashMap<(usize, usize), f64>,
    edge_index: &HashMap<(usize, usize), usize>,
    graph: &WeightedGraph,
    vertices: &mut UnionFind,
    edges: &mut UnionFind,
) {
    if v == n {
        for (i, &pi) in perm.iter().enumerate() {
            vertices.union(i, pi);
        }
        for &(i, j, _) in graph.edges() {
            let from = edge_index[&(i.min(j), i.max(j))];
            let (pi, pj) = (perm[i], perm[j]);
            let to = edge_index[&(pi.min(pj), pi.max(pj))];
            edges.union(from, to);
        }
        return;
    }
    // Orbits can only coarsen; once everything is merged further
    // automorphisms change nothing.
    if vertices.blocks == 1 && edges.blocks <= 1 {
        return;
    }
    for cand in 0..n {
        if used[cand] || profile[v] != profile[cand] {
            continue;
        }
        let mut ok = true;
        for u in 0..v {
            let key = (u.min(v), u.max(v));
            let mapped = (perm[u].min(cand), perm[u].max(cand));
            match (weight.get(&key), weight.get(&mapped)) {
                (Some(a), Some(b)) if a == b => {}
                (None, None) => {}
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        perm[v] = cand;
        used[cand] = true;
        search(v + 1, n, perm, used, profile, weight, edge_index, graph, vertices, edges);
        used[cand] = false;
        perm[v] = usize::MAX;
    }
}
