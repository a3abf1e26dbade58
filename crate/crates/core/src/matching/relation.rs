use serde::Serialize;

use super::MatchingError;

/// A finite bipartite relation `R ⊆ L × R` with `L = 0..left`, `R = 0..right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteRelation {
    right: usize,
    adj: Vec<Vec<u32>>,
    radj: Vec<Vec<u32>>,
}

impl BipartiteRelation {
    /// Builds from left adjacency lists; lists are sorted and deduplicated.
    pub fn from_adjacency(right: usize, mut adj: Vec<Vec<u32>>) -> Result<Self, MatchingError> {
        if right > u32::MAX as usize || adj.len() > u32::MAX as usize {
            return Err(MatchingError::TooLarge);
        }
        let mut radj = vec![Vec::new(); right];
        for (x, ys) in adj.iter_mut().enumerate() {
            ys.sort_unstable();
            ys.dedup();
            for &y in ys.iter() {
                if y as usize >= right {
                    return Err(MatchingError::VertexOutOfRange { side: "right", index: y as usize });
                }
                radj[y as usize].push(x as u32);
            }
        }
        Ok(BipartiteRelation { right, adj, radj })
    }

    pub fn from_edges(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self, MatchingError> {
        let mut adj = vec![Vec::new(); left];
        for &(x, y) in edges {
            if x >= left {
                return Err(MatchingError::VertexOutOfRange { side: "left", index: x });
            }
            adj[x].push(y as u32);
        }
        BipartiteRelation::from_adjacency(right, adj)
    }

    pub fn left_len(&self) -> usize {
        self.adj.len()
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// `R_x`, sorted.
    #[inline]
    pub fn neighbors(&self, x: usize) -> &[u32] {
        &self.adj[x]
    }

    /// `R^y`, sorted.
    #[inline]
    pub fn left_neighbors(&self, y: usize) -> &[u32] {
        &self.radj[y]
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.adj.len() && self.adj[x].binary_search(&(y as u32)).is_ok()
    }

    pub fn min_left_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_right_degree(&self) -> usize {
        self.radj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y as usize)))
    }
}
