use std::collections::VecDeque;

use super::BipartiteRelation;

/// Maximum matching size by Hopcroft–Karp: breadth-first layering from all
/// free left vertices, then vertex-disjoint shortest augmenting paths by
/// depth-first search. Shares no code with the phase machinery.
pub fn oracle_max_matching(r: &BipartiteRelation) -> usize {
    const FREE: usize = usize::MAX;
    const INF: usize = usize::MAX;
    let l = r.left_len();
    let mut pair_l = vec![FREE; l];
    let mut pair_r = vec![FREE; r.right_len()];
    let mut dist = vec![INF; l];
    let mut size = 0;
    loop {
        let mut queue = VecDeque::new();
        for x in 0..l {
            if pair_l[x] == FREE {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = INF;
            }
        }
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for &y in r.neighbors(x) {
                let w = pair_r[y as usize];
                if w == FREE {
                    found = true;
                } else if dist[w] == INF {
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        let mut next_edge = vec![0usize; l];
        for x in 0..l {
            if pair_l[x] == FREE && augment(r, x, &mut pair_l, &mut pair_r, &mut dist, &mut next_edge) {
                size += 1;
            }
        }
    }
}

fn augment(
    r: &BipartiteRelation,
    root: usize,
    pair_l: &mut [usize],
    pair_r: &mut [usize],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    const FREE: usize = usize::MAX;
    // Iterative DFS along layered edges; `stack` holds left vertices.
    let mut stack = vec![root];
    while let Some(&x) = stack.last() {
        let nbrs = r.neighbors(x);
        if next_edge[x] == nbrs.len() {
            dist[x] = usize::MAX;
            stack.pop();
            continue;
        }
        let y = nbrs[next_edge[x]] as usize;
        next_edge[x] += 1;
        let w = pair_r[y];
        if w == FREE {
            // Unwind: each stacked vertex takes the edge it advanced along.
            let mut y = y;
            while let Some(x) = stack.pop() {
                let prev = pair_l[x];
                pair_l[x] = y;
                pair_r[y] = x;
                y = prev;
            }
            return true;
        }
        if dist[w] == dist[x].wrapping_add(1) {
            stack.push(w);
        }
    }
    false
}
