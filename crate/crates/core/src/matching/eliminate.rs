use serde::Serialize;

use super::state::NONE;
use super::{AugmentingPath, BipartiteRelation, MatchingState};
use crate::graph_color::{greedy_coloring_canonical, LocalGraph};

/// What one call to [`eliminate_short_augmenting`] did.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub sweeps: usize,
    pub flips: usize,
    /// Left points whose image changed, `|{x : g'(x) != g(x)}|`.
    pub changed: usize,
    /// Unmatched left points before the call.
    pub unmatched_before: usize,
}

/// Reusable breadth-first search state over the alternating graph.
pub(crate) struct PathSearch {
    stamp: u32,
    seen_right: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<(u32, u32)>,
}

impl PathSearch {
    pub(crate) fn new(r: &BipartiteRelation) -> Self {
        PathSearch {
            stamp: 0,
            seen_right: vec![0; r.right_len()],
            parent: vec![NONE; r.right_len()],
            queue: Vec::new(),
        }
    }

    /// A shortest `g`-augmenting path from the free vertex `x0` with length
    /// below `limit` (unbounded when `limit` is `None`).
    pub(crate) fn shortest(
        &mut self,
        r: &BipartiteRelation,
        g: &MatchingState,
        x0: usize,
        limit: Option<usize>,
    ) -> Option<AugmentingPath> {
        if limit == Some(0) {
            return None;
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen_right.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        self.queue.clear();
        self.queue.push((x0 as u32, 0));
        let mut head = 0;
        while head < self.queue.len() {
            let (x, depth) = self.queue[head];
            head += 1;
            for &y in r.neighbors(x as usize) {
                if self.seen_right[y as usize] == self.stamp {
                    continue;
                }
                self.seen_right[y as usize] = self.stamp;
                self.parent[y as usize] = x;
                let next = g.mate_right_raw(y as usize);
                if next == NONE {
                    return Some(self.trace(g, x0, y));
                }
                if limit.map_or(true, |n| (depth as usize) + 1 < n) {
                    self.queue.push((next, depth + 1));
                }
            }
        }
        None
    }

    /// Left vertices reachable from `x0` by alternating paths, and the right
    /// vertices seen on the way; used for Hall-violation witnesses.
    pub(crate) fn reachable(
        &mut self,
        r: &BipartiteRelation,
        g: &MatchingState,
        x0: usize,
    ) -> (Vec<usize>, Vec<usize>) {
        let mut left = vec![x0];
        let mut right = Vec::new();
        let mut seen = vec![false; r.right_len()];
        let mut head = 0;
        while head < left.len() {
            let x = left[head];
            head += 1;
            for &y in r.neighbors(x) {
                if std::mem::replace(&mut seen[y as usize], true) {
                    continue;
                }
                right.push(y as usize);
                if let Some(next) = g.preimage(y as usize) {
                    left.push(next);
                }
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        (left, right)
    }

    fn trace(&self, g: &MatchingState, x0: usize, end: u32) -> AugmentingPath {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut y = end;
        loop {
            let x = self.parent[y as usize];
            left.push(x);
            right.push(y);
            if x as usize == x0 {
                break;
            }
            y = g.mate_left_raw(x as usize);
        }
        left.reverse();
        right.reverse();
        AugmentingPath { left, right }
    }
}

/// Shortest augmenting paths of length below `n`, one per free origin in
/// canonical order.
pub fn short_augmenting_paths(r: &BipartiteRelation, g: &MatchingState, n: usize) -> Vec<AugmentingPath> {
    let mut search = PathSearch::new(r);
    g.free_left()
        .filter_map(|x| search.shortest(r, g, x, Some(n)))
        .collect()
}

/// Colors the intersection graph of `paths`: two paths are adjacent when
/// they share a left or a right vertex.
pub fn color_paths(r: &BipartiteRelation, paths: &[AugmentingPath]) -> Vec<Vec<usize>> {
    let mut by_left: Vec<Vec<u32>> = vec![Vec::new(); r.left_len()];
    let mut by_right: Vec<Vec<u32>> = vec![Vec::new(); r.right_len()];
    for (i, p) in paths.iter().enumerate() {
        for &x in &p.left {
            by_left[x as usize].push(i as u32);
        }
        for &y in &p.right {
            by_right[y as usize].push(i as u32);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); paths.len()];
    for group in by_left.iter().chain(by_right.iter()) {
        for (a, &i) in group.iter().enumerate() {
            for &j in &group[a + 1..] {
                adj[i as usize].push(j as usize);
            }
        }
    }
    let graph = LocalGraph::from_neighbor_lists(adj).expect("distinct path indices");
    greedy_coloring_canonical(&graph).classes()
}

/// Returns `g'` with `dom(g') ⊇ dom(g)`, no augmenting path of length `< n`,
/// and at most `n · |L ∖ dom(g)|` changed points.
///
/// Each sweep collects shortest short paths from the current free origins,
/// colors their intersection graph, and flips color classes in order; a path
/// invalidated by an earlier class is skipped. Sweeps repeat until none
/// finds a path.
pub fn eliminate_short_augmenting(
    r: &BipartiteRelation,
    g: &MatchingState,
    n: usize,
) -> (MatchingState, EliminationReport) {
    let mut cur = g.clone();
    let mut report = EliminationReport {
        unmatched_before: g.unmatched_left(),
        ..Default::default()
    };
    if n == 0 {
        return (cur, report);
    }
    loop {
        let paths = short_augmenting_paths(r, &cur, n);
        if paths.is_empty() {
            break;
        }
        report.sweeps += 1;
        for class in color_paths(r, &paths) {
            for i in class {
                if cur.check_augmenting(r, &paths[i]).is_ok() {
                    cur.flip_unchecked(&paths[i]);
                    report.flips += 1;
                }
            }
        }
        debug_assert!(cur.is_compatible(r));
    }
    report.changed = (0..r.left_len()).filter(|&x| cur.get(x) != g.get(x)).count();
    (cur, report)
}
