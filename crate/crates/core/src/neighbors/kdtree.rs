use std::collections::BinaryHeap;

use super::Candidate;
use crate::data::{squared_distance, Dataset};

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf { start: usize, end: usize },
    Split { left: usize, right: usize },
}

#[derive(Debug, Clone)]
struct Node {
    // bounding box, lo then hi
    bounds: Vec<f64>,
    kind: NodeKind,
}

/// Exact k-d tree over a dataset.
///
/// Nodes split at the median of the dimension with the widest spread;
/// leaves hold at most 16 points. Queries prune a subtree only when its
/// bounding box is strictly farther than the current k-th candidate, so
/// equal-distance points with smaller indices are never missed.
#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    coords: Vec<f64>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    pub fn build(data: &Dataset) -> Self {
        let dim = data.dim();
        let coords: Vec<f64> = data.points().iter().flat_map(|p| p.coords().iter().copied()).collect();
        let mut tree = KdTree {
            dim,
            coords,
            order: (0..data.len()).collect(),
            nodes: Vec::new(),
        };
        tree.build_node(0, data.len());
        tree
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let d = self.dim;
        let mut bounds = vec![f64::INFINITY; d];
        bounds.extend(std::iter::repeat_n(f64::NEG_INFINITY, d));
        for &i in &self.order[start..end] {
            let p = &self.coords[i * d..(i + 1) * d];
            for j in 0..d {
                bounds[j] = bounds[j].min(p[j]);
                bounds[d + j] = bounds[d + j].max(p[j]);
            }
        }
        let (split_dim, spread) =
            (0..d)
                .map(|j| (j, bounds[d + j] - bounds[j]))
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );

        let id = self.nodes.len();
        self.nodes.push(Node {
            bounds,
            kind: NodeKind::Leaf { start, end },
        });
        if end - start <= LEAF_SIZE || spread <= 0.0 {
            return id;
        }

        let mid = (end - start) / 2;
        let coords = &self.coords;
        self.order[start..end].select_nth_unstable_by(mid, |&a, &b| {
            coords[a * d + split_dim].total_cmp(&coords[b * d + split_dim])
        });
        let left = self.build_node(start, start + mid);
        let right = self.build_node(start + mid, end);
        self.nodes[id].kind = NodeKind::Split { left, right };
        id
    }

    fn box_distance2(&self, node: usize, q: &[f64]) -> f64 {
        let b = &self.nodes[node].bounds;
        let d = self.dim;
        // summed in coordinate order, like squared_distance, so the bound
        // never exceeds the distance of any point inside the box
        (0..d)
            .map(|j| {
                let gap = if q[j] < b[j] {
                    b[j] - q[j]
                } else if q[j] > b[d + j] {
                    q[j] - b[d + j]
                } else {
                    0.0
                };
                gap * gap
            })
            .sum()
    }

    /// The `k` nearest points to `q` other than index `skip`, sorted by
    /// (distance, index).
    pub(crate) fn nearest_excluding(&self, q: &[f64], k: usize, skip: usize) -> Vec<Candidate> {
        let mut heap = BinaryHeap::with_capacity(k + 1);
        if k > 0 && !self.nodes.is_empty() {
            self.search(0, q, k, skip, &mut heap);
        }
        heap.into_sorted_vec()
    }

    fn search(&self, node: usize, q: &[f64], k: usize, skip: usize, heap: &mut BinaryHeap<Candidate>) {
        match self.nodes[node].kind {
            NodeKind::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if i == skip {
                        continue;
                    }
                    let cand = Candidate {
                        dist2: squared_distance(q, self.point(i)),
                        index: i,
                    };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            NodeKind::Split { left, right } => {
                let dl = self.box_distance2(left, q);
                let dr = self.box_distance2(right, q);
                let (first, d_first, second, d_second) = if dl <= dr {
                    (left, dl, right, dr)
                } else {
                    (right, dr, left, dl)
                };
                for (child, dist) in [(first, d_first), (second, d_second)] {
                    if heap.len() == k && dist > heap.peek().expect("heap is full").dist2 {
                        continue;
                    }
                    self.search(child, q, k, skip, heap);
                }
            }
        }
    }
}
