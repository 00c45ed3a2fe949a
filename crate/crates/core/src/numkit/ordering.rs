use std::collections::VecDeque;

use super::CsrMatrix;

/// Column ordering applied before sparse LU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnOrdering {
    Natural,
    /// Reverse Cuthill–McKee on the pattern of `A + Aᵀ`.
    #[default]
    Rcm,
}

impl ColumnOrdering {
    pub fn permutation(self, a: &CsrMatrix) -> Vec<usize> {
        match self {
            ColumnOrdering::Natural => (0..a.ncols()).collect(),
            ColumnOrdering::Rcm => reverse_cuthill_mckee(a),
        }
    }
}

/// Reverse Cuthill–McKee ordering of the symmetrized pattern of a square matrix.
///
/// Each connected component starts from a minimum-degree vertex; neighbours
/// are queued by increasing degree. Returns `perm` with `perm[k]` the
/// original index placed at position `k`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in a.triplets() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (degree[v], v));

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut nbrs = Vec::new();
    for &start in &by_degree {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            nbrs.clear();
            nbrs.extend(adj[v].iter().copied().filter(|&w| !visited[w]));
            nbrs.sort_by_key(|&w| (degree[w], w));
            for &w in &nbrs {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}
