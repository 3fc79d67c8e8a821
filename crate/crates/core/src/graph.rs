//! Small directed-graph utilities over dense vertex indices.

use std::collections::VecDeque;

/// Strongly connected components of the graph restricted to `alive` vertices.
///
/// Returns `comp[v]` (usize::MAX for dead vertices) and the number of components.
/// Components are numbered in reverse topological order: every edge goes from a
/// component to one with an equal or smaller number.
pub fn scc(succ: &[Vec<usize>], alive: Option<&[bool]>) -> (Vec<usize>, usize) {
    let n = succ.len();
    let is_alive = |v: usize| alive.map_or(true, |a| a[v]);
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut ncomp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if !is_alive(root) || index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if !is_alive(w) {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    (comp, ncomp)
}

/// Vertices reachable from `sources` along `succ`, restricted to `alive`.
pub fn reachable(succ: &[Vec<usize>], sources: &[usize], alive: Option<&[bool]>) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if alive.map_or(true, |a| a[s]) && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if !seen[w] && alive.map_or(true, |a| a[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Reverses an adjacency list.
pub fn reverse(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); succ.len()];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    pred
}

/// Shortest path (as a vertex sequence) from `from` to any vertex satisfying `goal`,
/// using only edges accepted by `allow`. Edges are `(target, label)` pairs.
pub fn bfs_path<L: Copy>(
    edges: &[Vec<(usize, L)>],
    from: usize,
    goal: impl Fn(usize) -> bool,
    allow: impl Fn(usize, usize) -> bool,
) -> Option<(usize, Vec<L>)> {
    let n = edges.len();
    let mut parent: Vec<Option<(usize, L)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut labels = Vec::new();
            let mut cur = v;
            while let Some((p, l)) = parent[cur] {
                labels.push(l);
                cur = p;
            }
            labels.reverse();
            return Some((v, labels));
        }
        for &(w, l) in &edges[v] {
            if !seen[w] && allow(v, w) {
                seen[w] = true;
                parent[w] = Some((v, l));
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_reverse_topological() {
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![]];
        let (comp, n) = scc(&succ, None);
        assert_eq!(n, 3);
        assert_eq!(comp[1], comp[2]);
        assert!(comp[0] > comp[1]);
        assert!(comp[1] > comp[3]);
    }

    #[test]
    fn bfs_finds_shortest() {
        let edges = vec![vec![(1, 'a'), (2, 'b')], vec![(3, 'c')], vec![(3, 'd')], vec![]];
        let (end, labels) = bfs_path(&edges, 0, |v| v == 3, |_, _| true).unwrap();
        assert_eq!(end, 3);
        assert_eq!(labels, vec!['a', 'c']);
    }
}
