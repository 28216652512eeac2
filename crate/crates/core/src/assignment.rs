//! Bipartite matching and linear assignment on square instances.
//!
//! Rows and columns are both indexed `0..n`. Adjacency lists must be sorted
//! ascending for [`lex_min_perfect_matching`] to return the lexicographically
//! smallest permutation.

const UNMATCHED: usize = usize::MAX;

/// Maximum-cardinality matching (Hopcroft–Karp). Returns `row -> column`.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_cols: usize) -> Vec<Option<usize>> {
    let n_rows = adj.len();
    let mut row_match = vec![UNMATCHED; n_rows];
    let mut col_match = vec![UNMATCHED; n_cols];
    let mut dist = vec![0usize; n_rows];
    let mut queue = Vec::with_capacity(n_rows);

    loop {
        // BFS layers from free rows.
        queue.clear();
        let mut found_free = false;
        for r in 0..n_rows {
            if row_match[r] == UNMATCHED {
                dist[r] = 0;
                queue.push(r);
            } else {
                dist[r] = usize::MAX;
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let r = queue[head];
            head += 1;
            for &c in &adj[r] {
                let next = col_match[c];
                if next == UNMATCHED {
                    found_free = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[r] + 1;
                    queue.push(next);
                }
            }
        }
        if !found_free {
            break;
        }

        let mut augmented = false;
        for r in 0..n_rows {
            if row_match[r] == UNMATCHED && augment_layered(r, adj, &mut row_match, &mut col_match, &mut dist) {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }

    row_match
        .into_iter()
        .map(|c| (c != UNMATCHED).then_some(c))
        .collect()
}

fn augment_layered(
    r: usize,
    adj: &[Vec<usize>],
    row_match: &mut [usize],
    col_match: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &c in &adj[r] {
        let next = col_match[c];
        let ok = next == UNMATCHED
            || (dist[next] == dist[r].wrapping_add(1) && augment_layered(next, adj, row_match, col_match, dist));
        if ok {
            row_match[r] = c;
            col_match[c] = r;
            return true;
        }
    }
    dist[r] = usize::MAX;
    false
}

/// Lexicographically smallest perfect matching of a square bipartite graph,
/// as a permutation `row -> column`, or `None` if no perfect matching exists.
///
/// Starts from any perfect matching and fixes rows in order; row `i` is moved
/// to a smaller column `j` whenever an alternating cycle through `(i, j)`
/// exists among the rows and columns that are not yet fixed.
pub fn lex_min_perfect_matching(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let initial = hopcroft_karp(adj, n);
    let mut row_match: Vec<usize> = initial.into_iter().collect::<Option<Vec<_>>>()?;
    let mut col_match = vec![UNMATCHED; n];
    for (r, &c) in row_match.iter().enumerate() {
        col_match[c] = r;
    }

    let mut col_fixed = vec![false; n];
    let mut visited = vec![false; n];
    for i in 0..n {
        let current = row_match[i];
        for &j in &adj[i] {
            if col_fixed[j] {
                continue;
            }
            if j == current {
                break;
            }
            // Row r loses column j to row i and must reach the column i gives up.
            let r = col_match[j];
            visited.iter_mut().for_each(|v| *v = false);
            visited[j] = true;
            if reroute(r, current, adj, &col_fixed, &mut visited, &mut row_match, &mut col_match) {
                row_match[i] = j;
                col_match[j] = i;
                break;
            }
        }
        col_fixed[row_match[i]] = true;
    }
    Some(row_match)
}

fn reroute(
    r: usize,
    target: usize,
    adj: &[Vec<usize>],
    col_fixed: &[bool],
    visited: &mut [bool],
    row_match: &mut [usize],
    col_match: &mut [usize],
) -> bool {
    for &c in &adj[r] {
        if col_fixed[c] || visited[c] {
            continue;
        }
        visited[c] = true;
        let ok = c == target || reroute(col_match[c], target, adj, col_fixed, visited, row_match, col_match);
        if ok {
            row_match[r] = c;
            col_match[c] = r;
            return true;
        }
    }
    false
}

/// Result of [`hungarian`]: an optimal permutation and feasible dual potentials
/// with `cost[i][j] - row_potential[i] - col_potential[j] >= 0`, tight on the
/// assignment.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub row_to_col: Vec<usize>,
    pub row_potential: Vec<f64>,
    pub col_potential: Vec<f64>,
}

impl Assignment {
    pub fn reduced_cost(&self, cost: &[Vec<f64>], i: usize, j: usize) -> f64 {
        cost[i][j] - self.row_potential[i] - self.col_potential[j]
    }
}

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian method,
/// shortest augmenting paths with potentials, `O(n³)`).
pub fn hungarian(cost: &[Vec<f64>]) -> Assignment {
    let n = cost.len();
    debug_assert!(cost.iter().all(|row| row.len() == n));

    // 1-based internally; index 0 is the virtual source column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![f64::INFINITY; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);

        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut step = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < step {
                    step = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += step;
                    v[j] -= step;
                } else {
                    minv[j] -= step;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }

        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
    }
    Assignment {
        row_to_col,
        row_potential: u[1..].to_vec(),
        col_potential: v[1..].to_vec(),
    }
}
