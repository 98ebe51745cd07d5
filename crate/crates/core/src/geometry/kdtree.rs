use std::collections::BinaryHeap;

use super::{cmp_candidate, euclidean};

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

/// Static kd-tree: median split on the axis of widest spread, leaves hold at
/// most `LEAF_SIZE` points. Points in the left subtree have coordinate
/// `<= value` on the split axis, points on the right `>= value`.
#[derive(Debug, Clone)]
pub(super) struct KdTree {
    dim: usize,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate(f64, usize);

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        cmp_candidate((self.0, self.1), (other.0, other.1))
    }
}

impl KdTree {
    pub(super) fn build(dim: usize, points: &[f64]) -> Self {
        let n = points.len() / dim;
        let mut tree = Self {
            dim,
            order: (0..n).collect(),
            nodes: Vec::with_capacity(2 * n / LEAF_SIZE + 1),
        };
        tree.build_node(points, 0, n);
        tree
    }

    fn coord(&self, points: &[f64], i: usize, axis: usize) -> f64 {
        points[i * self.dim + axis]
    }

    fn build_node(&mut self, points: &[f64], start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start, end });
        if end - start <= LEAF_SIZE {
            return id;
        }

        let (mut axis, mut spread) = (0, f64::NEG_INFINITY);
        for a in 0..self.dim {
            let (lo, hi) = self.order[start..end]
                .iter()
                .map(|&i| self.coord(points, i, a))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c), hi.max(c)));
            if hi - lo > spread {
                spread = hi - lo;
                axis = a;
            }
        }
        // All points coincide: nothing to split.
        if spread <= 0.0 {
            return id;
        }

        let mid = (end - start) / 2;
        let dim = self.dim;
        self.order[start..end]
            .select_nth_unstable_by(mid, |&a, &b| points[a * dim + axis].total_cmp(&points[b * dim + axis]));
        let value = self.coord(points, self.order[start + mid], axis);

        let left = self.build_node(points, start, start + mid);
        let right = self.build_node(points, start + mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    pub(super) fn traversal(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order.len());
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            match self.nodes[id] {
                Node::Leaf { start, end } => out.extend_from_slice(&self.order[start..end]),
                Node::Split { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        out
    }

    pub(super) fn k_nearest(&self, points: &[f64], query: &[f64], k: usize) -> Vec<(f64, usize)> {
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.search(0, points, query, k, &mut heap);
        heap.into_iter().map(|c| (c.0, c.1)).collect()
    }

    fn search(&self, id: usize, points: &[f64], query: &[f64], k: usize, heap: &mut BinaryHeap<Candidate>) {
        match self.nodes[id] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let c = Candidate(euclidean(&points[i * self.dim..(i + 1) * self.dim], query), i);
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("heap holds k items") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = query[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(near, points, query, k, heap);
                // Equal bound still visits: a tied point there may have a lower index.
                if heap.len() < k || diff.abs() <= heap.peek().map_or(f64::INFINITY, |c| c.0) {
                    self.search(far, points, query, k, heap);
                }
            }
        }
    }
}
