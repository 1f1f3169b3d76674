//! Maximum-weight bipartite assignment (Hungarian method, O(n²m)).

/// Maximum-weight assignment on a dense, possibly rectangular matrix.
/// Returns, for every row, the assigned column. Rows or columns left over
/// in a rectangular problem stay unassigned. Entries must be finite.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = weights[0].len();
    if cols == 0 {
        return vec![None; rows];
    }
    if rows > cols {
        let transposed: Vec<Vec<f64>> = (0..cols)
            .map(|c| (0..rows).map(|r| weights[r][c]).collect())
            .collect();
        let by_col = max_weight_assignment(&transposed);
        let mut out = vec![None; rows];
        for (c, r) in by_col.into_iter().enumerate() {
            if let Some(r) = r {
                out[r] = Some(c);
            }
        }
        return out;
    }

    // Minimize negated weights; 1-based with a virtual column 0.
    let n = rows;
    let m = cols;
    let cost = |i: usize, j: usize| -weights[i - 1][j - 1];
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
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
    let mut out = vec![None; rows];
    for j in 1..=m {
        if p[j] != 0 {
            out[p[j] - 1] = Some(j - 1);
        }
    }
    out
}

/// Connected components of a bipartite edge list, as (left nodes, right nodes, edge indices).
pub(crate) fn components(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
) -> Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let mut parent: Vec<usize> = (0..n_left + n_right).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(l, r) in edges {
        let a = find(&mut parent, l);
        let b = find(&mut parent, n_left + r);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comp_of = vec![usize::MAX; n_left + n_right];
    let mut comps: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> = Vec::new();
    for (ei, &(l, _)) in edges.iter().enumerate() {
        let root = find(&mut parent, l);
        if comp_of[root] == usize::MAX {
            comp_of[root] = comps.len();
            comps.push((Vec::new(), Vec::new(), Vec::new()));
        }
        let c = &mut comps[comp_of[root]];
        c.2.push(ei);
    }
    for comp in &mut comps {
        let mut ls: Vec<usize> = comp.2.iter().map(|&e| edges[e].0).collect();
        let mut rs: Vec<usize> = comp.2.iter().map(|&e| edges[e].1).collect();
        ls.sort_unstable();
        ls.dedup();
        rs.sort_unstable();
        rs.dedup();
        comp.0 = ls;
        comp.1 = rs;
    }
    comps
}

/// Maximum-weight matching over a sparse edge list with positive weights,
/// solved independently per connected component. Returns matched edges as
/// (left, right) and the total weight.
pub fn max_weight_matching(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize, f64)],
) -> (Vec<(usize, usize)>, f64) {
    let plain: Vec<(usize, usize)> = edges.iter().map(|&(l, r, _)| (l, r)).collect();
    let mut pairs = Vec::new();
    let mut total = 0.0;
    for (ls, rs, es) in components(n_left, n_right, &plain) {
        if es.len() == 1 {
            let (l, r, w) = edges[es[0]];
            pairs.push((l, r));
            total += w;
            continue;
        }
        let mut matrix = vec![vec![0.0; rs.len()]; ls.len()];
        for &e in &es {
            let (l, r, w) = edges[e];
            let li = ls.binary_search(&l).unwrap();
            let ri = rs.binary_search(&r).unwrap();
            if w > matrix[li][ri] {
                matrix[li][ri] = w;
            }
        }
        for (li, c) in max_weight_assignment(&matrix).into_iter().enumerate() {
            if let Some(ri) = c {
                if matrix[li][ri] > 0.0 {
                    pairs.push((ls[li], rs[ri]));
                    total += matrix[li][ri];
                }
            }
        }
    }
    pairs.sort_unstable();
    (pairs, total)
}
