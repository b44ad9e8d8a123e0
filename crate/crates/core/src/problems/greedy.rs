//! Single-pass greedy Max-Cut.

use super::{approximation_ratio, ProblemInstance, Solution, WeightedGraph};
use crate::error::Result;

/// One pass over the vertices in index order, moving each vertex to the
/// other side whenever that increases the cut weight. Deterministic.
pub fn greedy_maxcut(graph: &WeightedGraph) -> Result<Solution> {
    graph.validate()?;
    let n = graph.num_vertices();
    let mut side = vec![0u8; n];
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, w) in graph.edges() {
        adj[i].push((j, w));
        adj[j].push((i, w));
    }
    for v in 0..n {
        // Gain from flipping v: cut edges become uncut (−w), uncut become cut (+w).
        let mut delta = 0.0;
        for &(u, w) in &adj[v] {
            if side[u] == side[v] {
                delta += w;
            } else {
                delta -= w;
            }
        }
        if delta > 0.0 {
            side[v] ^= 1;
        }
    }
    let value = graph.cut_value(&side);
    let instance = ProblemInstance::maxcut(graph.clone());
    let ratio = if n <= super::MAX_BRUTE_FORCE_VERTICES {
        let h = instance.graph.total_weight() / 2.0 - value;
        approximation_ratio(&instance, h)?
    } else {
        f64::NAN
    };
    Ok(Solution { bits: side, value, ratio })
}
