//! A static kd-tree for k-th nearest-neighbour distances under the
//! Chebyshev (L∞) or Euclidean metric.

use alloc::vec::Vec;

use crate::knn::Metric;

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// kd-tree over a borrowed row-major point set.
#[derive(Debug)]
pub struct KdTree<'a> {
    points: &'a [f64],
    dim: usize,
    indices: Vec<usize>,
    nodes: Vec<Node>,
}

impl<'a> KdTree<'a> {
    /// Builds the tree. `points.len()` must be a multiple of `dim`.
    pub fn new(points: &'a [f64], dim: usize) -> Self {
        assert!(
            dim > 0 && points.len().is_multiple_of(dim),
            "ragged point set"
        );
        let n = points.len() / dim;
        let mut tree = Self {
            points,
            dim,
            indices: (0..n).collect(),
            nodes: Vec::new(),
        };
        if n > 0 {
            tree.build(0, n);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    #[inline]
    fn coord(&self, i: usize, axis: usize) -> f64 {
        self.points[i * self.dim + axis]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        // split on the axis of largest spread
        let mut axis = 0;
        let mut best = -1.0;
        for a in 0..self.dim {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in &self.indices[start..end] {
                let v = self.coord(i, a);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi - lo > best {
                best = hi - lo;
                axis = a;
            }
        }
        let mid = start + (end - start) / 2;
        let (points, dim) = (self.points, self.dim);
        self.indices[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points[a * dim + axis].total_cmp(&points[b * dim + axis])
        });
        let value = self.coord(self.indices[mid], axis);
        self.nodes.push(Node::Leaf { start, end }); // placeholder
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    /// Distance from point `query` (an index into the tree's point set) to
    /// its `k`-th nearest other point. Coincident points count as neighbours
    /// at distance zero.
    pub fn kth_neighbor_distance(&self, query: usize, k: usize, metric: Metric) -> f64 {
        assert!(k >= 1 && k < self.len(), "need 1 <= k < n");
        let q = &self.points[query * self.dim..(query + 1) * self.dim];
        let mut best = Best::new(k);
        self.search(0, q, query, metric, &mut best);
        match metric {
            Metric::Chebyshev => best.worst(),
            Metric::Euclidean => libm::sqrt(best.worst()),
        }
    }

    fn search(&self, node: usize, q: &[f64], skip: usize, metric: Metric, best: &mut Best) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.indices[start..end] {
                    if i == skip {
                        continue;
                    }
                    let p = &self.points[i * self.dim..(i + 1) * self.dim];
                    let d = match metric {
                        Metric::Chebyshev => p
                            .iter()
                            .zip(q)
                            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())),
                        Metric::Euclidean => p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(),
                    };
                    best.offer(d);
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                let (near, far) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.search(near, q, skip, metric, best);
                let plane = match metric {
                    Metric::Chebyshev => diff.abs(),
                    Metric::Euclidean => diff * diff,
                };
                if plane <= best.worst() {
                    self.search(far, q, skip, metric, best);
                }
            }
        }
    }
}

/// The k smallest distances seen so far, sorted ascending.
struct Best {
    k: usize,
    dists: Vec<f64>,
}

impl Best {
    fn new(k: usize) -> Self {
        Self {
            k,
            dists: Vec::with_capacity(k + 1),
        }
    }

    fn worst(&self) -> f64 {
        if self.dists.len() < self.k {
            f64::INFINITY
        } else {
            self.dists[self.k - 1]
        }
    }

    fn offer(&mut self, d: f64) {
        if d >= self.worst() {
            return;
        }
        let pos = self.dists.partition_point(|&x| x <= d);
        self.dists.insert(pos, d);
        self.dists.truncate(self.k);
    }
}
