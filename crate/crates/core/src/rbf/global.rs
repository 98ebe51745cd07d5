use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{euclidean, Dataset};
use crate::kernels::KernelProfile;
use crate::linsolve::{solve_least_squares, DenseMatrix};
use crate::lowess::{basis_monomials, PolynomialBasis};

/// Default ratio between the support radius and the center spacing.
pub const DEFAULT_OVERLAP: f64 = 2.0;

/// Centers on a uniform grid spanning the bounding box, endpoints included.
///
/// In one dimension this yields exactly `m` centers (`m = 1` gives the
/// midpoint). In D dimensions the grid has `⌊m^(1/D)⌋` nodes per axis, so
/// `m` is rounded down to the nearest perfect D-th power.
pub fn place_centers(dataset: &Dataset, m: usize) -> Result<Vec<Vec<f64>>> {
    if m < 1 {
        return Err(Error::Config("at least one center is required".into()));
    }
    let dim = dataset.dim();
    let per_axis = nodes_per_axis(m, dim);
    let (lo, hi) = dataset.bounding_box();
    let axes: Vec<Vec<f64>> = (0..dim).map(|a| linspace(lo[a], hi[a], per_axis)).collect();

    let total = per_axis.pow(dim as u32);
    let mut centers = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut c = vec![0.0; dim];
        for a in (0..dim).rev() {
            c[a] = axes[a][rem % per_axis];
            rem /= per_axis;
        }
        centers.push(c);
    }
    Ok(centers)
}

fn nodes_per_axis(m: usize, dim: usize) -> usize {
    if dim == 1 {
        return m;
    }
    let mut n = (m as f64).powf(1.0 / dim as f64).round() as usize;
    while n > 1 && n.pow(dim as u32) > m {
        n -= 1;
    }
    while (n + 1).pow(dim as u32) <= m {
        n += 1;
    }
    n.max(1)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// Grid spacing of `place_centers(dataset, m)`: the largest per-axis step.
/// With a single node per axis the full extent is used instead (or 1 when the
/// data has no extent at all).
pub fn center_spacing(dataset: &Dataset, m: usize) -> f64 {
    let per_axis = nodes_per_axis(m.max(1), dataset.dim());
    let (lo, hi) = dataset.bounding_box();
    let extent = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max);
    let spacing = if per_axis > 1 {
        extent / (per_axis - 1) as f64
    } else {
        extent
    };
    if spacing > 0.0 {
        spacing
    } else {
        1.0
    }
}

/// A fitted global approximation `f(x) = Σ λᵢ Φ(‖x − ξᵢ‖ / ρ) + P(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalRbfModel {
    dim: usize,
    centers: Vec<Vec<f64>>,
    support: f64,
    weights: Vec<f64>,
    tail_degree: Option<u32>,
    tail: Vec<f64>,
    tail_basis: Option<PolynomialBasis>,
    kernel: KernelProfile,
}

/// Least-squares fit with `m` uniformly placed centers, a degree-`degree`
/// polynomial tail, and support radius `overlap × center spacing`.
pub fn fit_global(dataset: &Dataset, m: usize, degree: u32, overlap: f64) -> Result<GlobalRbfModel> {
    if !(overlap > 0.0 && overlap.is_finite()) {
        return Err(Error::Config(format!(
            "support overlap must be positive, got {overlap}"
        )));
    }
    let centers = place_centers(dataset, m)?;
    let support = overlap * center_spacing(dataset, m);
    fit_global_with(dataset, centers, support, Some(degree), KernelProfile::Tricube)
}

/// Least-squares fit with explicit centers, support radius and optional tail.
pub fn fit_global_with(
    dataset: &Dataset,
    centers: Vec<Vec<f64>>,
    support: f64,
    tail_degree: Option<u32>,
    kernel: KernelProfile,
) -> Result<GlobalRbfModel> {
    let dim = dataset.dim();
    if centers.is_empty() {
        return Err(Error::Config("at least one center is required".into()));
    }
    if let Some(c) = centers.iter().find(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: c.len(),
        });
    }
    if !(support > 0.0 && support.is_finite()) {
        return Err(Error::InvalidRadius(support));
    }
    let tail_basis = tail_degree.map(|d| basis_monomials(dim, d, None)).transpose()?;
    let cols = centers.len() + tail_basis.as_ref().map_or(0, |b| b.len());
    if dataset.len() < cols {
        return Err(Error::InsufficientPoints {
            requested: cols,
            available: dataset.len(),
        });
    }

    let mut data = Vec::with_capacity(dataset.len() * cols);
    for x in dataset.positions() {
        data.extend(centers.iter().map(|c| kernel.eval(euclidean(x, c) / support)));
        if let Some(b) = &tail_basis {
            b.extend_row(x, 1.0, &mut data);
        }
    }
    let a = DenseMatrix::new(dataset.len(), cols, data)?;
    let mut eta = solve_least_squares(&a, dataset.values())?;
    let tail = eta.split_off(centers.len());

    Ok(GlobalRbfModel {
        dim,
        centers,
        support,
        weights: eta,
        tail_degree,
        tail,
        tail_basis,
        kernel,
    })
}

impl GlobalRbfModel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail_degree(&self) -> Option<u32> {
        self.tail_degree
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let rbf: f64 = self
            .centers
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| w * self.kernel.eval(euclidean(x, c) / self.support))
            .sum();
        rbf + self.tail_basis.as_ref().map_or(0.0, |b| b.evaluate(&self.tail, x))
    }

    pub fn evaluate_many<Q: AsRef<[f64]>>(&self, xs: &[Q]) -> Vec<f64> {
        xs.iter().map(|x| self.evaluate(x.as_ref())).collect()
    }

    /// Text form:
    ///
    /// ```text
    /// rbf-model v1 <D> <M> <d|none> <rho>
    /// <center coords...> <lambda>      (M lines)
    /// <tail coefficients...>           (possibly empty line)
    /// ```
    ///
    /// Reals are written with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let degree = self.tail_degree.map_or("none".to_string(), |d| d.to_string());
        writeln!(
            s,
            "rbf-model v1 {} {} {} {}",
            self.dim,
            self.centers.len(),
            degree,
            fmt_real(self.support)
        )
        .unwrap();
        for (c, w) in self.centers.iter().zip(&self.weights) {
            let fields: Vec<String> = c.iter().chain(std::iter::once(w)).map(|v| fmt_real(*v)).collect();
            writeln!(s, "{}", fields.join(" ")).unwrap();
        }
        let tail: Vec<String> = self.tail.iter().map(|v| fmt_real(*v)).collect();
        writeln!(s, "{}", tail.join(" ")).unwrap();
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Config(format!("rbf-model: {m}"));
        let mut lines = text.lines();
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .collect();
        if header.len() != 6 || header[0] != "rbf-model" || header[1] != "v1" {
            return Err(bad("expected `rbf-model v1 D M d rho`"));
        }
        let dim: usize = header[2].parse().map_err(|_| bad("bad D"))?;
        let m: usize = header[3].parse().map_err(|_| bad("bad M"))?;
        let tail_degree = match header[4] {
            "none" => None,
            d => Some(d.parse::<u32>().map_err(|_| bad("bad d"))?),
        };
        let support = parse_real(header[5]).ok_or_else(|| bad("bad rho"))?;
        if dim == 0 || m == 0 || !(support > 0.0) {
            return Err(bad("D, M and rho must be positive"));
        }

        let mut centers = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next().ok_or_else(|| bad("missing center line"))?;
            let vals = line
                .split_whitespace()
                .map(parse_real)
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| bad("bad center line"))?;
            if vals.len() != dim + 1 {
                return Err(bad("center line must hold D coordinates and a weight"));
            }
            centers.push(vals[..dim].to_vec());
            weights.push(vals[dim]);
        }
        let tail = lines
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(parse_real)
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| bad("bad tail line"))?;
        let tail_basis = tail_degree.map(|d| basis_monomials(dim, d, None)).transpose()?;
        if tail.len() != tail_basis.as_ref().map_or(0, |b| b.len()) {
            return Err(bad("tail coefficient count does not match degree"));
        }
        Ok(Self {
            dim,
            centers,
            support,
            weights,
            tail_degree,
            tail,
            tail_basis,
            kernel: KernelProfile::Tricube,
        })
    }
}

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, f: impl Fn(f64) -> f64) -> Dataset {
        let xs: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        Dataset::from_1d(&xs, &ys).unwrap()
    }

    #[test]
    fn center_placement_1d() {
        let ds = uniform(11, |x| x);
        assert_eq!(place_centers(&ds, 2).unwrap(), vec![vec![-1.0], vec![1.0]]);
        assert_eq!(place_centers(&ds, 1).unwrap(), vec![vec![0.0]]);
        let c = place_centers(&ds, 20).unwrap();
        assert_eq!(c.len(), 20);
        for (i, ci) in c.iter().enumerate() {
            assert!((ci[0] - (-1.0 + 2.0 * i as f64 / 19.0)).abs() < 1e-15);
        }
        assert!((center_spacing(&ds, 20) - 2.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn center_placement_2d_grid() {
        let ds = Dataset::new(2, vec![0.0, 0.0, 2.0, 1.0], vec![0.0, 0.0]).unwrap();
        let c = place_centers(&ds, 10).unwrap();
        assert_eq!(c.len(), 9);
        assert!(c.contains(&vec![1.0, 0.5]));
        assert!(c.contains(&vec![2.0, 1.0]));
    }

    #[test]
    fn constant_data_is_reproduced() {
        let ds = uniform(200, |_| 3.25);
        for degree in 0..=2 {
            let model = fit_global(&ds, 8, degree, DEFAULT_OVERLAP).unwrap();
            for i in 0..50 {
                let x = -1.2 + 2.4 * i as f64 / 49.0;
                assert!((model.evaluate(&[x]) - 3.25).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn interpolates_with_centers_at_samples() {
        let ds = uniform(9, |x| (3.0 * x).cos());
        let centers: Vec<Vec<f64>> = ds.positions().map(|p| p.to_vec()).collect();
        let spacing = 0.25;
        for support in [0.5 * spacing, 1.5 * spacing] {
            let model = fit_global_with(&ds, centers.clone(), support, None, KernelProfile::Tricube).unwrap();
            for i in 0..ds.len() {
                assert!((model.evaluate(ds.position(i)) - ds.value(i)).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn outside_all_supports_only_tail_remains() {
        let ds = uniform(50, |x| x * x);
        let model = fit_global(&ds, 5, 0, 1.0).unwrap();
        assert_eq!(model.evaluate(&[10.0]), model.tail()[0]);
    }

    #[test]
    fn single_center_at_origin() {
        let ds = uniform(5, |_| 1.0);
        let model = fit_global_with(&ds, vec![vec![0.0]], 0.1, None, KernelProfile::Tricube).unwrap();
        // Only the sample at 0 sees the kernel, so λ₁ = 1.
        assert!((model.weights()[0] - 1.0).abs() < 1e-14);
        assert!((model.evaluate(&[0.0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let ds = uniform(100, |x| (4.0 * x).sin() + 0.1 * x);
        let model = fit_global(&ds, 7, 2, 1.7).unwrap();
        let back = GlobalRbfModel::from_text(&model.to_text()).unwrap();
        assert_eq!(back, model);

        let bare = fit_global_with(&ds, vec![vec![0.0], vec![0.5]], 0.8, None, KernelProfile::Tricube).unwrap();
        let text = bare.to_text();
        assert!(text.starts_with("rbf-model v1 1 2 none "));
        assert_eq!(GlobalRbfModel::from_text(&text).unwrap(), bare);
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(GlobalRbfModel::from_text("").is_err());
        assert!(GlobalRbfModel::from_text("rbf-model v2 1 1 0 1.0\n0 1\n0\n").is_err());
        assert!(GlobalRbfModel::from_text("rbf-model v1 1 2 0 1.0\n0 1\n").is_err());
        assert!(GlobalRbfModel::from_text("rbf-model v1 1 1 1 1.0\n0 1\n0\n").is_err());
    }

    #[test]
    fn too_few_points() {
        let ds = uniform(4, |x| x);
        assert!(matches!(
            fit_global(&ds, 4, 1, 2.0),
            Err(Error::InsufficientPoints { .. })
        ));
    }
}
