use crate::error::{Error, Result};

/// Monomial basis in D variables: exponent tuples of total degree ≤ d.
///
/// Terms are ordered by total degree, then by descending lexicographic
/// exponent (for D = 2: `1, x, y, x², xy, y²`). The constant term is always
/// first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialBasis {
    dim: usize,
    exponents: Vec<Vec<u32>>,
}

/// Full monomial basis of total degree ≤ `degree` in `dim` variables, minus
/// the terms listed in `mask`.
pub fn basis_monomials(dim: usize, degree: u32, mask: Option<&[Vec<u32>]>) -> Result<PolynomialBasis> {
    if dim == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    let mut exponents = Vec::new();
    for total in 0..=degree {
        let mut current = vec![0u32; dim];
        push_with_total(&mut exponents, &mut current, 0, total);
    }
    let mut basis = PolynomialBasis { dim, exponents };
    if let Some(mask) = mask {
        basis = basis.masked(mask)?;
    }
    Ok(basis)
}

// Emits tuples with the given total in descending lexicographic order.
fn push_with_total(out: &mut Vec<Vec<u32>>, current: &mut [u32], axis: usize, remaining: u32) {
    if axis + 1 == current.len() {
        current[axis] = remaining;
        out.push(current.to_vec());
        return;
    }
    for e in (0..=remaining).rev() {
        current[axis] = e;
        push_with_total(out, current, axis + 1, remaining - e);
    }
    current[axis] = 0;
}

impl PolynomialBasis {
    /// Removes the listed terms.
    pub fn masked(&self, mask: &[Vec<u32>]) -> Result<Self> {
        for term in mask {
            if term.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: term.len(),
                });
            }
            if term.iter().all(|&e| e == 0) {
                return Err(Error::ConstantTermRequired);
            }
            if !self.exponents.contains(term) {
                return Err(Error::Config(format!("mask term {term:?} is not in the basis")));
            }
        }
        Ok(Self {
            dim: self.dim,
            exponents: self.exponents.iter().filter(|e| !mask.contains(e)).cloned().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    /// Highest total degree among the terms.
    pub fn degree(&self) -> u32 {
        self.exponents.iter().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Keeps only terms of total degree ≤ `degree`.
    pub fn truncated(&self, degree: u32) -> Self {
        Self {
            dim: self.dim,
            exponents: self
                .exponents
                .iter()
                .filter(|e| e.iter().sum::<u32>() <= degree)
                .cloned()
                .collect(),
        }
    }

    /// Appends each monomial evaluated at `offset / scale` to `row`.
    pub fn extend_row(&self, offset: &[f64], scale: f64, row: &mut Vec<f64>) {
        for exps in &self.exponents {
            let mut v = 1.0;
            for (&c, &e) in offset.iter().zip(exps) {
                if e > 0 {
                    v *= (c / scale).powi(e as i32);
                }
            }
            row.push(v);
        }
    }

    /// Evaluates `Σ coeffs[j] · monomial_j(offset)`.
    pub fn evaluate(&self, coeffs: &[f64], offset: &[f64]) -> f64 {
        let mut row = Vec::with_capacity(self.len());
        self.extend_row(offset, 1.0, &mut row);
        row.iter().zip(coeffs).map(|(m, c)| m * c).sum()
    }

    /// Divides each coefficient by `scale^degree(term)`, converting
    /// coefficients of the scaled basis back to the unscaled one.
    pub(crate) fn unscale(&self, coeffs: &mut [f64], scale: f64) {
        for (c, exps) in coeffs.iter_mut().zip(&self.exponents) {
            let deg: u32 = exps.iter().sum();
            if deg > 0 {
                *c /= scale.powi(deg as i32);
            }
        }
    }
}
