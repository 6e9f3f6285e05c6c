//! Principal component analysis backed by a deterministic cyclic Jacobi
//! eigensolver on the sample covariance.

use rayon::prelude::*;

use super::logistic::MlError;

/// Fitted PCA basis: column means, k orthonormal component rows, and the
/// descending explained variances.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
}

/// Sample covariance (divisor n-1) of the centered rows. Row chunks are
/// accumulated in parallel and merged in index order so the result does
/// not depend on the worker count.
fn covariance(x: &[Vec<f64>], mean: &[f64]) -> Vec<Vec<f64>> {
    let d = mean.len();
    let chunk = 256;
    let partials: Vec<Vec<f64>> = x
        .par_chunks(chunk)
        .map(|rows| {
            let mut acc = vec![0.0f64; d * d];
            let mut centered = vec![0.0f64; d];
            for row in rows {
                for j in 0..d {
                    centered[j] = row[j] - mean[j];
                }
                for i in 0..d {
                    let ci = centered[i];
                    if ci == 0.0 {
                        continue;
                    }
                    let dst = &mut acc[i * d..(i + 1) * d];
                    for (a, &cj) in dst.iter_mut().zip(&centered) {
                        *a += ci * cj;
                    }
                }
            }
            acc
        })
        .collect();
    let mut flat = vec![0.0f64; d * d];
    for part in partials {
        for (a, b) in flat.iter_mut().zip(part) {
            *a += b;
        }
    }
    let scale = 1.0 / (x.len() as f64 - 1.0);
    (0..d)
        .map(|i| flat[i * d..(i + 1) * d].iter().map(|v| v * scale).collect())
        .collect()
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// (eigenvalues, eigenvectors as rows), unsorted.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v = vec![vec![0.0f64; d]; d];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let frobenius: f64 = matrix.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-14 * frobenius.max(1e-300);
    let max_sweeps = 100;
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p][p];
                let aqq = a[q][q];
                let theta = (aqq - app) / (2.0 * apq);
                // Smaller-magnitude tangent root keeps rotations stable.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..d {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..d {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for i in 0..d {
                    let vpi = v[p][i];
                    let vqi = v[q][i];
                    v[p][i] = c * vpi - s * vqi;
                    v[q][i] = s * vpi + c * vqi;
                }
            }
        }
    }
    let eigenvalues = (0..d).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}

/// Fit the top-k components. Component signs are fixed so the
/// largest-magnitude entry of each row is positive.
pub fn pca_fit(x: &[Vec<f64>], k: usize) -> Result<PcaModel, MlError> {
    if x.len() < 2 {
        return Err(MlError::TooFewRows);
    }
    let d = x[0].len();
    let max = d.min(x.len());
    if k == 0 || k > max {
        return Err(MlError::BadComponentCount { k, max });
    }
    let n = x.len() as f64;
    let mut mean = vec![0.0f64; d];
    for row in x {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let cov = covariance(x, &mean);
    let (eigenvalues, eigenvectors) = jacobi_eigen(&cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        eigenvalues[j].partial_cmp(&eigenvalues[i]).unwrap().then(i.cmp(&j))
    });
    let mut components = Vec::with_capacity(k);
    let mut explained_variance = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        let mut row = eigenvectors[idx].clone();
        let mut dominant = 0usize;
        for (j, value) in row.iter().enumerate() {
            if value.abs() > row[dominant].abs() {
                dominant = j;
            }
        }
        if row[dominant] < 0.0 {
            for value in &mut row {
                *value = -*value;
            }
        }
        components.push(row);
        explained_variance.push(eigenvalues[idx].max(0.0));
    }
    Ok(PcaModel { mean, components, explained_variance })
}

/// Scores = (X - mean) . components^T.
pub fn pca_transform(model: &PcaModel, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, MlError> {
    let d = model.mean.len();
    let mut scores = Vec::with_capacity(x.len());
    for row in x {
        if row.len() != d {
            return Err(MlError::DimensionMismatch { expected: d, got: row.len() });
        }
        let centered: Vec<f64> = row.iter().zip(&model.mean).map(|(v, m)| v - m).collect();
        scores.push(
            model
                .components
                .iter()
                .map(|c| c.iter().zip(&centered).map(|(a, b)| a * b).sum())
                .collect(),
        );
    }
    Ok(scores)
}
