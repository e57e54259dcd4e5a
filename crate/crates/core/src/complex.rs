//! Bounded cochain complexes of finite-dimensional rational vector spaces.

use thiserror::Error;

use crate::linalg::{rank, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("differential in degree {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        degree: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("d∘d is nonzero starting in degree {0}")]
    NotAComplex(usize),
    #[error("bigrading annotation does not match the graded dimensions")]
    Bigrading,
}

/// `C^0 -> C^1 -> ... -> C^top`, with `d_k : C^k -> C^{k+1}` stored as a
/// `dim C^{k+1} x dim C^k` matrix. The last space maps to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    dims: Vec<usize>,
    differentials: Vec<RationalMatrix>,
    bigrading: Option<Vec<Vec<(usize, usize)>>>,
}

impl CochainComplex {
    pub fn new(dims: Vec<usize>, differentials: Vec<RationalMatrix>) -> Result<Self, ComplexError> {
        let expected = dims.len().saturating_sub(1);
        if differentials.len() != expected {
            return Err(ComplexError::Shape {
                degree: differentials.len(),
                rows: 0,
                cols: 0,
                expected_rows: 0,
                expected_cols: 0,
            });
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(ComplexError::Shape {
                    degree: k,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: dims[k + 1],
                    expected_cols: dims[k],
                });
            }
        }
        for k in 0..differentials.len().saturating_sub(1) {
            if !differentials[k + 1].mul(&differentials[k]).is_zero() {
                return Err(ComplexError::NotAComplex(k));
            }
        }
        Ok(Self {
            dims,
            differentials,
            bigrading: None,
        })
    }

    /// Attaches a `(p, q)` label to every basis element.
    pub fn with_bigrading(mut self, bigrading: Vec<Vec<(usize, usize)>>) -> Result<Self, ComplexError> {
        if bigrading.len() != self.dims.len()
            || bigrading.iter().zip(&self.dims).any(|(b, &n)| b.len() != n)
            || bigrading
                .iter()
                .enumerate()
                .any(|(k, b)| b.iter().any(|&(p, q)| p + q != k))
        {
            return Err(ComplexError::Bigrading);
        }
        self.bigrading = Some(bigrading);
        Ok(self)
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_k : C^k -> C^{k+1}`; the zero map out of the top degree.
    pub fn differential(&self, k: usize) -> RationalMatrix {
        match self.differentials.get(k) {
            Some(d) => d.clone(),
            None => RationalMatrix::zeros(self.dim(k + 1), self.dim(k)),
        }
    }

    pub fn differential_ref(&self, k: usize) -> Option<&RationalMatrix> {
        self.differentials.get(k)
    }

    pub fn bigrading(&self) -> Option<&[Vec<(usize, usize)>]> {
        self.bigrading.as_deref()
    }

    /// Betti numbers `dim H^k` for `k = 0..=top_degree`.
    pub fn betti(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.iter().map(rank).collect();
        (0..self.dims.len())
            .map(|k| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let incoming = if k == 0 { 0 } else { ranks[k - 1] };
                self.dims[k] - out - incoming
            })
            .collect()
    }
}

/// Discrete convolution `(a * b)_k = Σ_{i+j=k} a_i b_j`.
pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_complex() {
        let d0 = RationalMatrix::from_i64(&[&[1]]);
        let d1 = RationalMatrix::from_i64(&[&[1]]);
        assert_eq!(
            CochainComplex::new(vec![1, 1, 1], vec![d0, d1]),
            Err(ComplexError::NotAComplex(0))
        );
    }

    #[test]
    fn rejects_bad_shapes() {
        let d0 = RationalMatrix::zeros(2, 1);
        assert!(matches!(
            CochainComplex::new(vec![1, 1], vec![d0]),
            Err(ComplexError::Shape { .. })
        ));
    }

    #[test]
    fn betti_of_interval() {
        // 0 -> Q^2 -> Q -> 0 with d = [1 -1]
        let c = CochainComplex::new(vec![2, 1], vec![RationalMatrix::from_i64(&[&[1, -1]])]).unwrap();
        assert_eq!(c.betti(), vec![1, 0]);
    }

    #[test]
    fn convolution() {
        assert_eq!(convolve(&[1, 0, 1], &[1, 1]), vec![1, 1, 1, 1]);
        assert_eq!(convolve(&[1, 0, 0, 1], &[1, 0, 0, 1]), vec![1, 0, 0, 2, 0, 0, 1]);
    }
}
