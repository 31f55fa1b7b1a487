//! Small dense linear-algebra helpers shared across the crate.
//!
//! Everything here is a thin layer over nalgebra: sorted symmetric/Hermitian
//! eigendecompositions, PSD square-root factors with a semidefinite clamp, and
//! deterministic pairwise summation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenvalues clamped to zero when they fall in `[-SEMIDEFINITE_CLAMP, 0]`.
pub const SEMIDEFINITE_CLAMP: f64 = 1e-10;

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
/// Returns `(values, vectors)` with eigenvectors as columns.
pub fn sym_eigen_sorted(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    sort_eigen(eig.eigenvalues, eig.eigenvectors)
}

/// Hermitian eigendecomposition with real eigenvalues sorted ascending.
pub fn herm_eigen_sorted(m: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    sort_eigen(eig.eigenvalues, eig.eigenvectors)
}

fn sort_eigen<T: nalgebra::Scalar + Copy>(
    values: DVector<f64>,
    vectors: DMatrix<T>,
) -> (DVector<f64>, DMatrix<T>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let sorted_values = DVector::from_iterator(n, order.iter().map(|&i| values[i]));
    let mut sorted_vectors = vectors.clone();
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    (sorted_values, sorted_vectors)
}

/// `(m + mᵀ) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest absolute deviation from symmetry.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

/// Largest absolute deviation from Hermitian symmetry.
pub fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Square-root factor `L` of a PSD matrix with `L Lᵀ = m`, built from a
/// symmetric eigendecomposition. Eigenvalues in `[-SEMIDEFINITE_CLAMP, 0]` are
/// clamped to zero; returns `None` if any eigenvalue is more negative.
pub fn psd_sqrt_factor(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let (values, vectors) = sym_eigen_sorted(m);
    let mut factor = vectors;
    for (j, &v) in values.iter().enumerate() {
        let clamped = if v >= 0.0 {
            v
        } else if v >= -SEMIDEFINITE_CLAMP {
            0.0
        } else {
            return None;
        };
        let s = clamped.sqrt();
        factor.column_mut(j).scale_mut(s);
    }
    Some(factor)
}

/// Deterministic pairwise sum; independent of thread count when fed a
/// precomputed slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Kronecker product of complex matrices.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C;

    #[test]
    fn hermitian_eigen_of_pauli_y_like() {
        // [[0, -i], [i, 0]] has eigenvalues -1, 1
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C::new(0.0, 0.0),
                C::new(0.0, -1.0),
                C::new(0.0, 1.0),
                C::new(0.0, 0.0),
            ],
        );
        let (vals, vecs) = herm_eigen_sorted(&m);
        assert_relative_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-12);
        // reconstruct
        let rec = &vecs
            * DMatrix::from_diagonal(&DVector::from_iterator(
                2,
                vals.iter().map(|&v| C::new(v, 0.0)),
            ))
            * vecs.adjoint();
        assert!((rec - m).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn psd_factor_reconstructs() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let l = psd_sqrt_factor(&m).unwrap();
        assert!(((&l * l.transpose()) - &m).amax() < 1e-12);
    }

    #[test]
    fn psd_factor_rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -0.5]);
        assert!(psd_sqrt_factor(&m).is_none());
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64) * 0.001).collect();
        assert_relative_eq!(pairwise_sum(&xs), 499.5, epsilon = 1e-9);
    }
}
