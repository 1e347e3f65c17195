//! The directed k-nearest-neighbor graph and the neighbor sets derived
//! from it.
//!
//! Every vertex has exactly `k` outbound edges to its nearest other points,
//! ordered by distance with ties broken by ascending index. Inbound edges
//! give the reverse nearest neighbors. Shared nearest neighbors are read off
//! the inbound edges of a point's own neighbors, so once the graph exists
//! all three sets cost time proportional to the edges touched.

mod kdtree;

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::data::{check_k, squared_distance, Dataset};
use crate::error::{Error, Result};

pub use kdtree::KdTree;

/// A candidate neighbor: squared distance and index. Ordered by distance,
/// then by index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Candidate {
    pub dist2: f64,
    pub index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Directed KNN graph over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnGraph {
    k: usize,
    // row-major, k entries per vertex
    out_edges: Vec<usize>,
    out_dists: Vec<f64>,
    in_edges: Vec<Vec<usize>>,
}

impl KnnGraph {
    fn from_candidates(k: usize, rows: Vec<Vec<Candidate>>) -> Self {
        let n = rows.len();
        let mut out_edges = Vec::with_capacity(n * k);
        let mut out_dists = Vec::with_capacity(n * k);
        let mut in_edges = vec![Vec::new(); n];
        for (src, row) in rows.into_iter().enumerate() {
            debug_assert_eq!(row.len(), k);
            for c in row {
                out_edges.push(c.index);
                out_dists.push(c.dist2.sqrt());
                // sources are visited in ascending order, so in_edges stay sorted
                in_edges[c.index].push(src);
            }
        }
        KnnGraph {
            k,
            out_edges,
            out_dists,
            in_edges,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.in_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_edges.is_empty()
    }

    fn check_index(&self, p: usize) -> Result<()> {
        if p >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: p,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// The `k` nearest neighbors of `p`, nearest first.
    pub fn out_edges(&self, p: usize) -> &[usize] {
        &self.out_edges[p * self.k..(p + 1) * self.k]
    }

    /// Distances matching [`out_edges`](Self::out_edges).
    pub fn out_distances(&self, p: usize) -> &[f64] {
        &self.out_dists[p * self.k..(p + 1) * self.k]
    }

    /// Vertices that list `p` among their neighbors, ascending.
    pub fn in_edges(&self, p: usize) -> &[usize] {
        &self.in_edges[p]
    }

    pub fn in_degree(&self, p: usize) -> usize {
        self.in_edges[p].len()
    }

    /// Distance from `p` to its k-th nearest neighbor.
    pub fn k_distance(&self, p: usize) -> f64 {
        self.out_dists[(p + 1) * self.k - 1]
    }

    /// All edges as `(src, dst, distance)`, grouped by source.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len()).flat_map(move |p| {
            self.out_edges(p)
                .iter()
                .zip(self.out_distances(p))
                .map(move |(&q, &d)| (p, q, d))
        })
    }
}

/// Builds the graph by scanning all pairs. O(N²) time.
pub fn build_knn_graph_bruteforce(data: &Dataset, k: usize) -> Result<KnnGraph> {
    let n = data.len();
    check_k(k, n)?;
    let rows = (0..n)
        .into_par_iter()
        .map(|p| {
            let query = data.coords(p);
            let mut all: Vec<Candidate> = (0..n)
                .filter(|&j| j != p)
                .map(|j| Candidate {
                    dist2: squared_distance(query, data.coords(j)),
                    index: j,
                })
                .collect();
            if k < all.len() {
                all.select_nth_unstable(k - 1);
                all.truncate(k);
            }
            all.sort_unstable();
            all
        })
        .collect();
    Ok(KnnGraph::from_candidates(k, rows))
}

/// Builds the graph with one k-d tree query per point. Produces exactly the
/// same graph as [`build_knn_graph_bruteforce`].
pub fn build_knn_graph_kdtree(data: &Dataset, k: usize) -> Result<KnnGraph> {
    let n = data.len();
    check_k(k, n)?;
    let tree = KdTree::build(data);
    let rows = (0..n)
        .into_par_iter()
        .map(|p| tree.nearest_excluding(data.coords(p), k, p))
        .collect();
    Ok(KnnGraph::from_candidates(k, rows))
}

/// S_RNN: points that count `p` among their k nearest neighbors.
pub fn reverse_neighbors(g: &KnnGraph, p: usize) -> Result<Vec<usize>> {
    g.check_index(p)?;
    Ok(g.in_edges(p).to_vec())
}

/// S_SNN: points other than `p` that share at least one nearest neighbor
/// with `p`. Sorted ascending.
pub fn shared_neighbors(g: &KnnGraph, p: usize) -> Result<Vec<usize>> {
    g.check_index(p)?;
    let mut out: Vec<usize> = g
        .out_edges(p)
        .iter()
        .flat_map(|&x| g.in_edges(x).iter().copied())
        .filter(|&x| x != p)
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The three neighbor sets of one point and their union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSets {
    /// S_KNN, nearest first.
    pub knn: Vec<usize>,
    /// S_RNN, ascending.
    pub rnn: Vec<usize>,
    /// S_SNN, ascending.
    pub snn: Vec<usize>,
    /// S = S_KNN ∪ S_RNN ∪ S_SNN, ascending and without duplicates.
    pub extended: Vec<usize>,
}

pub fn extended_neighborhood(g: &KnnGraph, p: usize) -> Result<NeighborSets> {
    let rnn = reverse_neighbors(g, p)?;
    let snn = shared_neighbors(g, p)?;
    let knn = g.out_edges(p).to_vec();
    let mut extended: Vec<usize> = knn.iter().chain(&rnn).chain(&snn).copied().collect();
    extended.sort_unstable();
    extended.dedup();
    Ok(NeighborSets {
        knn,
        rnn,
        snn,
        extended,
    })
}

/// [`extended_neighborhood`] for every vertex.
pub fn all_neighborhoods(g: &KnnGraph) -> Vec<NeighborSets> {
    (0..g.len())
        .into_par_iter()
        .map(|p| extended_neighborhood(g, p).expect("vertex index in range"))
        .collect()
}
