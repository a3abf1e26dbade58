//! Greedy colorings of finite graphs and of translate-overlap graphs.

use rayon::prelude::*;
use serde::Serialize;

use crate::action_space::{ActionError, ActionWindow, PointSet};
use crate::group_model::{multiply_set, Shape};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at {0}")]
    SelfLoop(usize),
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("vertex {vertex} has degree {degree} above the declared bound {bound}")]
    DegreeBound {
        vertex: usize,
        degree: usize,
        bound: usize,
    },
    #[error("order is not a permutation of the vertices")]
    BadOrder,
}

/// A finite simple undirected graph on `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalGraph {
    adj: Vec<Vec<usize>>,
    degree_bound: Option<usize>,
}

impl LocalGraph {
    pub fn new(n: usize) -> Self {
        LocalGraph {
            adj: vec![Vec::new(); n],
            degree_bound: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = LocalGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds from neighbor lists, symmetrizing and dropping repeats.
    pub fn from_neighbor_lists(mut adj: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = adj.len();
        let mut extra: Vec<(usize, usize)> = Vec::new();
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                if v >= n {
                    return Err(GraphError::OutOfRange(v));
                }
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                extra.push((v, u));
            }
        }
        for (v, u) in extra {
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(LocalGraph {
            adj,
            degree_bound: None,
        })
    }

    /// Adds `{u, v}`; repeated edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for w in [u, v] {
            if w >= self.adj.len() {
                return Err(GraphError::OutOfRange(w));
            }
        }
        if !self.adj[u].contains(&v) {
            self.adj[u].push(v);
            self.adj[v].push(u);
        }
        Ok(())
    }

    /// Declares and checks a maximum degree.
    pub fn with_degree_bound(mut self, bound: usize) -> Result<Self, GraphError> {
        if let Some((vertex, a)) = self.adj.iter().enumerate().find(|(_, a)| a.len() > bound) {
            return Err(GraphError::DegreeBound {
                vertex,
                degree: a.len(),
                bound,
            });
        }
        self.degree_bound = Some(bound);
        Ok(self)
    }

    pub fn degree_bound(&self) -> Option<usize> {
        self.degree_bound
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub count: usize,
}

impl Coloring {
    /// First monochromatic edge, if any. Independent of how the coloring
    /// was produced.
    pub fn conflict(&self, graph: &LocalGraph) -> Option<(usize, usize)> {
        if self.colors.len() != graph.len() {
            return Some((0, 0));
        }
        (0..graph.len())
            .into_par_iter()
            .find_map_first(|u| {
                graph
                    .neighbors(u)
                    .iter()
                    .find(|&&v| self.colors[u] == self.colors[v])
                    .map(|&v| (u, v))
            })
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Colors vertices in `order`, each with the least color unused by its
/// already-colored neighbors; at most `max_degree + 1` colors.
pub fn greedy_coloring(graph: &LocalGraph, order: &[usize]) -> Result<Coloring, GraphError> {
    let n = graph.len();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(GraphError::BadOrder);
    }
    const NONE: usize = usize::MAX;
    let mut colors = vec![NONE; n];
    let mut mark = vec![NONE; graph.max_degree() + 2];
    let mut count = 0;
    for &v in order {
        for &u in graph.neighbors(v) {
            let c = colors[u];
            if c != NONE && c < mark.len() {
                mark[c] = v;
            }
        }
        let c = (0..).find(|&c| mark[c] != v).expect("a free color exists");
        colors[v] = c;
        count = count.max(c + 1);
    }
    Ok(Coloring { colors, count })
}

/// Greedy coloring in canonical (index) order.
pub fn greedy_coloring_canonical(graph: &LocalGraph) -> Coloring {
    let order: Vec<usize> = (0..graph.len()).collect();
    greedy_coloring(graph, &order).expect("identity order is valid")
}

/// Partitions the carrier into classes within which the translates `T x` are
/// pairwise disjoint, by greedy coloring of the overlap graph
/// (`x ~ x'` iff `Tx ∩ Tx' ≠ ∅`) in carrier order, so at most `|T⁻¹T|`
/// classes arise.
///
/// Each class keeps the set of points its members forbid, `T⁻¹T C_k`, so a
/// point finds its color by probing one bit per class.
pub fn translate_overlap_partition(
    window: &ActionWindow,
    t: &Shape,
) -> Result<Vec<PointSet>, ActionError> {
    window.check_shape("T", t)?;
    let model = window.model();
    let diff = multiply_set(model, &t.inverse(model), t);
    let ds = window.translators(&diff);
    let mut forbidden: Vec<PointSet> = Vec::new();
    let mut classes: Vec<PointSet> = Vec::new();
    for x in 0..window.size() {
        let k = match forbidden.iter().position(|f| !f.contains(x)) {
            Some(k) => k,
            None => {
                forbidden.push(window.empty_set());
                classes.push(window.empty_set());
                forbidden.len() - 1
            }
        };
        let forb = &mut forbidden[k];
        window.for_each_image(&ds, x, |p| forb.insert(p));
        classes[k].insert(x);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::GroupModel;

    #[test]
    fn small_graphs() {
        let g = LocalGraph::new(5);
        assert_eq!(greedy_coloring_canonical(&g).count, 1);
        let mut k4 = LocalGraph::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                k4.add_edge(u, v).unwrap();
            }
        }
        let k4 = k4.with_degree_bound(3).unwrap();
        let c = greedy_coloring_canonical(&k4);
        assert_eq!(c.count, 4);
        assert_eq!(c.conflict(&k4), None);
        assert!(LocalGraph::from_edges(2, &[(1, 1)]).is_err());
        assert!(greedy_coloring(&k4, &[0, 1, 1, 2]).is_err());
    }

    #[test]
    fn conflict_detected() {
        let g = LocalGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let bad = Coloring {
            colors: vec![0, 1, 1],
            count: 2,
        };
        assert_eq!(bad.conflict(&g), Some((1, 2)));
    }

    #[test]
    fn overlap_partition() {
        let w = ActionWindow::torus(1, 8).unwrap();
        let single = Shape::from_coords([[0]]);
        assert_eq!(translate_overlap_partition(&w, &single).unwrap().len(), 1);
        let t = Shape::from_coords([[0], [1]]);
        let p = translate_overlap_partition(&w, &t).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].iter().collect::<Vec<_>>(), vec![0, 2, 4, 6]);

        let z2 = GroupModel::Lattice { dim: 2 };
        let w = ActionWindow::torus(2, 32).unwrap();
        let t = z2.folner_set(4).unwrap();
        let classes = translate_overlap_partition(&w, &t).unwrap();
        let bound = multiply_set(&z2, &t.inverse(&z2), &t).len();
        assert!(classes.len() <= bound);
        let mut all = w.empty_set();
        for c in &classes {
            assert!(all.is_disjoint(c));
            all.union_with(c);
            let mut occ = w.empty_set();
            for x in c.iter() {
                let tx = w.translate_set(&t, x);
                assert!(occ.is_disjoint(&tx));
                occ.union_with(&tx);
            }
        }
        assert_eq!(all.len(), w.size());
    }
}
