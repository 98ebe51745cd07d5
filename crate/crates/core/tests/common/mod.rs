//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use scatter_smooth::geometry::euclidean;

/// Small deterministic generator so oracle inputs do not depend on the
/// library's noise source.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    match n {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Solves `(AᵀWA) x = AᵀWb` by Cramer's rule; `None` when singular.
pub fn cramer_weighted_ls(rows: &[Vec<f64>], w: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let q = rows[0].len();
    let mut g = vec![vec![0.0; q]; q];
    let mut r = vec![0.0; q];
    for ((row, wi), bi) in rows.iter().zip(w).zip(b) {
        for i in 0..q {
            r[i] += wi * row[i] * bi;
            for j in 0..q {
                g[i][j] += wi * row[i] * row[j];
            }
        }
    }
    let d = det(&g);
    if d.abs() < 1e-300 {
        return None;
    }
    Some(
        (0..q)
            .map(|c| {
                let mut gc = g.clone();
                for i in 0..q {
                    gc[i][c] = r[i];
                }
                det(&gc) / d
            })
            .collect(),
    )
}

/// K nearest by full sort on (distance, index).
pub fn brute_knn(points: &[Vec<f64>], query: &[f64], k: usize) -> Vec<(f64, usize)> {
    let mut all: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (euclidean(p, query), i))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all.truncate(k);
    all
}

/// `Σᵢ minⱼ ‖pᵢ − kⱼ‖` over graph-space points.
pub fn brute_distance_error(approx: &[Vec<f64>], reference: &[Vec<f64>]) -> f64 {
    approx
        .iter()
        .map(|p| reference.iter().map(|r| euclidean(p, r)).fold(f64::INFINITY, f64::min))
        .sum()
}

pub fn tricube(r: f64) -> f64 {
    if r < 1.0 {
        (1.0 - r * r * r).powi(3)
    } else {
        0.0
    }
}
