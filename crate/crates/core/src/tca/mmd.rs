use nalgebra::DMatrix;

use super::kernel::{gram_matrix, KernelSpec};
use crate::bench::ObjectiveVector;
use crate::error::{Error, Result};

/// MMD coefficient matrix: `1/m^2` on the source block, `1/n^2` on the target block,
/// `-1/(mn)` elsewhere.
pub fn scaling_matrix(m: usize, n: usize) -> Result<DMatrix<f64>> {
    if m == 0 || n == 0 {
        return Err(Error::arg("scaling matrix needs m, n >= 1"));
    }
    let (mf, nf) = (m as f64, n as f64);
    Ok(DMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, true) => 1.0 / (mf * mf),
        (false, false) => 1.0 / (nf * nf),
        _ => -1.0 / (mf * nf),
    }))
}

/// `I - (1/size) 1 1^T`.
pub fn centering_matrix(size: usize) -> Result<DMatrix<f64>> {
    if size == 0 {
        return Err(Error::arg("centering matrix needs size >= 1"));
    }
    let c = 1.0 / size as f64;
    Ok(DMatrix::from_fn(
        size,
        size,
        |i, j| {
            if i == j {
                1.0 - c
            } else {
                -c
            }
        },
    ))
}

/// Empirical squared MMD between two samples, `tr(K L)` over their joint Gram matrix.
pub fn mmd(x: &[ObjectiveVector], y: &[ObjectiveVector], k: &KernelSpec) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::arg("mmd needs two nonempty samples"));
    }
    let dim = x[0].len();
    if x.iter().chain(y).any(|p| p.len() != dim) {
        return Err(Error::arg("mmd samples differ in vector length"));
    }
    let joint: Vec<ObjectiveVector> = x.iter().chain(y).cloned().collect();
    let gram = gram_matrix(&joint, k)?;
    let l = scaling_matrix(x.len(), y.len())?;
    Ok((gram * l).trace())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_examples() {
        let l = scaling_matrix(2, 3).unwrap();
        assert_eq!(l[(0, 1)], 0.25);
        assert!((l[(3, 4)] - 1.0 / 9.0).abs() < 1e-15);
        assert!((l[(0, 4)] + 1.0 / 6.0).abs() < 1e-15);
        assert!((l[(4, 1)] + 1.0 / 6.0).abs() < 1e-15);
        for r in 0..5 {
            assert!(l.row(r).sum().abs() < 1e-15);
        }
        let l11 = scaling_matrix(1, 1).unwrap();
        assert_eq!(l11, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        assert!(scaling_matrix(0, 3).is_err());
    }

    #[test]
    fn centering_examples() {
        let h = centering_matrix(2).unwrap();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]));
        let h40 = centering_matrix(40).unwrap();
        let ones = DMatrix::from_element(40, 1, 1.0);
        assert!((&h40 * ones).norm() < 1e-12);
        assert!((&h40 * &h40 - &h40).norm() < 1e-12);
        assert_eq!(h40, h40.transpose());
        assert!(centering_matrix(0).is_err());
    }

    #[test]
    fn identical_samples_have_zero_mmd() {
        let x: Vec<ObjectiveVector> = (0..6)
            .map(|i| ObjectiveVector(vec![i as f64 * 0.3, (i * i) as f64 * 0.1]))
            .collect();
        let k = KernelSpec::gaussian(0.8).unwrap();
        assert!(mmd(&x, &x, &k).unwrap().abs() < 1e-12);
        assert!(mmd(&x, &[], &k).is_err());
    }
}
