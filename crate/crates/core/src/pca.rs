//! Principal component analysis of small dense tables.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcaResult {
    /// Column means subtracted before projection.
    pub mean: Vec<f64>,
    /// Unit loading vectors of the first two components.
    pub loadings: [Vec<f64>; 2],
    /// Every covariance eigenvalue, largest first.
    pub explained_variance: Vec<f64>,
    /// Per-row projections of the centered data on PC1 and PC2.
    pub scores: Vec<[f64; 2]>,
}

impl PcaResult {
    pub fn pc1(&self) -> &[f64] {
        &self.loadings[0]
    }

    pub fn pc2(&self) -> &[f64] {
        &self.loadings[1]
    }

    pub fn total_variance(&self) -> f64 {
        self.explained_variance.iter().sum()
    }

    /// Share of the total variance carried by PC1 and PC2 (1 when there is none).
    pub fn leading_pair_fraction(&self) -> f64 {
        let total = self.total_variance();
        if total <= 0.0 {
            return 1.0;
        }
        (self.explained_variance[0] + self.explained_variance[1]) / total
    }
}

/// Orients `v` so its largest-magnitude entry (first on ties) is positive.
fn orient(v: &mut [f64]) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// PCA on rows of `data`: centered, unscaled, sample covariance (`N - 1`).
pub fn pca(data: &[Vec<f64>]) -> Result<PcaResult> {
    if data.len() < 2 {
        return Err(Error::invalid(format!(
            "PCA needs at least 2 rows, got {}",
            data.len()
        )));
    }
    let cols = data[0].len();
    if cols < 2 {
        return Err(Error::invalid("PCA needs at least 2 columns"));
    }
    if let Some(row) = data.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: row.len(),
        });
    }
    let rows = data.len();
    let mean: Vec<f64> = (0..cols)
        .map(|c| data.iter().map(|r| r[c]).sum::<f64>() / rows as f64)
        .collect();
    let centered = DMatrix::from_fn(rows, cols, |r, c| data[r][c] - mean[c]);
    let cov = (centered.transpose() * &centered) / (rows - 1) as f64;
    let eigen = cov.symmetric_eigen();

    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .expect("finite eigenvalues")
            .then(a.cmp(&b))
    });
    let explained_variance: Vec<f64> = order
        .iter()
        .map(|&i| eigen.eigenvalues[i].max(0.0))
        .collect();
    let loading = |i: usize| {
        let mut v: Vec<f64> = eigen
            .eigenvectors
            .column(order[i])
            .iter()
            .copied()
            .collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        orient(&mut v);
        v
    };
    let loadings = [loading(0), loading(1)];
    let scores = (0..rows)
        .map(|r| {
            let proj = |l: &[f64]| (0..cols).map(|c| centered[(r, c)] * l[c]).sum::<f64>();
            [proj(&loadings[0]), proj(&loadings[1])]
        })
        .collect();
    Ok(PcaResult {
        mean,
        loadings,
        explained_variance,
        scores,
    })
}
