//! Datasets of scattered samples and exact k-nearest-neighbor search.
//!
//! One-dimensional data is indexed by a sort permutation and queried with a
//! two-pointer sweep; higher dimensions use a kd-tree. Both return exactly the
//! K points with the smallest Euclidean distance, breaking distance ties in
//! favour of the lower dataset index.

mod kdtree;

use std::cmp::Ordering;

use crate::error::{Error, Result};

use kdtree::KdTree;

/// A single sample: a position in D-dimensional space and a scalar value.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub position: Vec<f64>,
    pub value: f64,
}

impl SamplePoint {
    pub fn new(position: impl Into<Vec<f64>>, value: f64) -> Self {
        Self {
            position: position.into(),
            value,
        }
    }
}

/// An immutable set of N ≥ 1 samples sharing one dimension D ≥ 1.
///
/// Positions are stored row-major in a flat buffer, so `position(i)` is a
/// slice of length `dim()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    positions: Vec<f64>,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(dim: usize, positions: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if positions.len() != dim * values.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * values.len(),
                found: positions.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            let pos = &positions[i * dim..(i + 1) * dim];
            if !v.is_finite() || pos.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite(i));
            }
        }
        Ok(Self { dim, positions, values })
    }

    /// Builds a one-dimensional dataset from paired abscissae and values.
    pub fn from_1d(xs: &[f64], values: &[f64]) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                found: values.len(),
            });
        }
        Self::new(1, xs.to_vec(), values.to_vec())
    }

    pub fn from_points(dim: usize, points: impl IntoIterator<Item = SamplePoint>) -> Result<Self> {
        let mut positions = Vec::new();
        let mut values = Vec::new();
        for p in points {
            if p.position.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.position.len(),
                });
            }
            positions.extend_from_slice(&p.position);
            values.push(p.value);
        }
        Self::new(dim, positions, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a constructed dataset; provided for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Flat row-major position buffer.
    pub fn raw_positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.positions.chunks_exact(self.dim)
    }

    pub fn point(&self, i: usize) -> SamplePoint {
        SamplePoint::new(self.position(i), self.value(i))
    }

    /// Same positions, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.dim, self.positions.clone(), values)
    }

    /// Every position shifted by `offset`.
    pub fn translated(&self, offset: &[f64]) -> Result<Self> {
        if offset.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: offset.len(),
            });
        }
        let positions = self
            .positions
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(offset).map(|(a, b)| a + b))
            .collect();
        Self::new(self.dim, positions, self.values.clone())
    }

    /// Per-axis minimum and maximum of all positions.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.positions() {
            for (axis, &c) in p.iter().enumerate() {
                lo[axis] = lo[axis].min(c);
                hi[axis] = hi[axis].max(c);
            }
        }
        (lo, hi)
    }
}

/// Euclidean distance between two points of equal dimension.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Ordering on (distance, index) used for every neighbor comparison.
#[inline]
pub(crate) fn cmp_candidate(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// The K nearest samples to a query, sorted by ascending distance.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborSet {
    query: Vec<f64>,
    indices: Vec<usize>,
    distances: Vec<f64>,
}

impl NeighborSet {
    /// Assembles a neighbor set from candidates; sorts them by (distance, index).
    pub fn from_candidates(query: Vec<f64>, mut candidates: Vec<(f64, usize)>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::InvalidK(0));
        }
        candidates.sort_by(|a, b| cmp_candidate(*a, *b));
        let (distances, indices) = candidates.into_iter().unzip();
        Ok(Self {
            query,
            indices,
            distances,
        })
    }

    pub fn query(&self) -> &[f64] {
        &self.query
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Distance to the farthest (K-th) neighbor.
    pub fn d_max(&self) -> f64 {
        *self.distances.last().expect("neighbor set is never empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.distances.iter().copied())
    }
}

#[derive(Debug, Clone)]
enum IndexKind {
    /// Dataset indices ordered by (coordinate, index), with the coordinates.
    Sorted {
        order: Vec<usize>,
        coords: Vec<f64>,
    },
    Tree(KdTree),
}

/// Exact nearest-neighbor index over a dataset's positions.
///
/// Immutable after construction and safe to query from many threads.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    dim: usize,
    points: Vec<f64>,
    kind: IndexKind,
}

impl SpatialIndex {
    pub fn build(dataset: &Dataset) -> Self {
        Self::from_flat(dataset.dim(), dataset.raw_positions().to_vec())
            .expect("dataset invariants guarantee a valid point buffer")
    }

    /// Builds an index over a flat row-major buffer of `dim`-dimensional points.
    pub fn from_flat(dim: usize, points: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if points.is_empty() || !points.len().is_multiple_of(dim) {
            return Err(Error::Empty);
        }
        let n = points.len() / dim;
        let kind = if dim == 1 {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| points[a].total_cmp(&points[b]).then(a.cmp(&b)));
            let coords = order.iter().map(|&i| points[i]).collect();
            IndexKind::Sorted { order, coords }
        } else {
            IndexKind::Tree(KdTree::build(dim, &points))
        };
        Ok(Self { dim, points, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// Dataset indices in index traversal order (sort order in 1D, leaf order
    /// for the kd-tree). Every index appears exactly once.
    pub fn traversal(&self) -> Vec<usize> {
        match &self.kind {
            IndexKind::Sorted { order, .. } => order.clone(),
            IndexKind::Tree(tree) => tree.traversal(),
        }
    }

    /// The `k` nearest points to `query`, ties broken toward lower indices.
    pub fn k_nearest(&self, query: &[f64], k: usize) -> Result<NeighborSet> {
        if k < 1 {
            return Err(Error::InvalidK(k));
        }
        if k > self.len() {
            return Err(Error::InsufficientPoints {
                requested: k,
                available: self.len(),
            });
        }
        if query.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: query.len(),
            });
        }
        let candidates = match &self.kind {
            IndexKind::Sorted { order, coords } => sorted_k_nearest(order, coords, query[0], k),
            IndexKind::Tree(tree) => tree.k_nearest(&self.points, query, k),
        };
        NeighborSet::from_candidates(query.to_vec(), candidates)
    }

    /// Distance from `query` to the nearest indexed point.
    pub fn nearest_distance(&self, query: &[f64]) -> Result<f64> {
        let set = self.k_nearest(query, 1)?;
        Ok(euclidean(self.point(set.indices()[0]), query))
    }
}

/// Two-pointer sweep outward from the query's insertion point. Picks the K
/// smallest distances, then pulls in every further point tied with the
/// K-th distance so the final (distance, index) sort resolves ties exactly.
fn sorted_k_nearest(order: &[usize], coords: &[f64], q: f64, k: usize) -> Vec<(f64, usize)> {
    let dist = |pos: usize| euclidean(&coords[pos..pos + 1], &[q]);
    let start = coords.partition_point(|&c| c < q);
    let (mut left, mut right) = (start, start);
    let mut out = Vec::with_capacity(k + 4);

    while out.len() < k {
        let take_left = match (left > 0, right < coords.len()) {
            (true, true) => dist(left - 1) <= dist(right),
            (true, false) => true,
            (false, true) => false,
            (false, false) => unreachable!("k <= n"),
        };
        if take_left {
            left -= 1;
            out.push((dist(left), order[left]));
        } else {
            out.push((dist(right), order[right]));
            right += 1;
        }
    }

    let d_max = out.iter().map(|c| c.0).fold(0.0, f64::max);
    while left > 0 && dist(left - 1) == d_max {
        left -= 1;
        out.push((d_max, order[left]));
    }
    while right < coords.len() && dist(right) == d_max {
        out.push((d_max, order[right]));
        right += 1;
    }
    if out.len() > k {
        out.sort_by(|a, b| cmp_candidate(*a, *b));
        out.truncate(k);
    }
    out
}
