//! Representation of a group algebra from a copositive state.
//!
//! A state is a valuation on the basis of the chosen algebra: on the function
//! side the basis is the point indicators (so the state is a measure by its
//! weights), on the measure side the basis is the Dirac measures (so the state
//! is a function by its values). The Gram matrix of pairings `⟨a*b⟩` decides
//! copositivity; its range, orthonormalised, carries the left-multiplication
//! representation with the coset of the unit as cyclic vector.

use crate::group::FiniteGroup;
use crate::linalg::herm_eigen_sorted;
use crate::algebra::AlgebraSide;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GnsError {
    #[error("state vector has length {len}, group order is {order}")]
    LengthMismatch { len: usize, order: usize },
    #[error("state is not coreal: Gram deviates from Hermitian by {deviation:.3e}")]
    NotCoreal { deviation: f64 },
    #[error("state is not copositive: Gram matrix has eigenvalue {min_eigen:.3e}")]
    NotCopositive { min_eigen: f64 },
}

/// Eigenvalues of the Gram matrix below this are rejected as negative.
pub const COPOSITIVITY_TOLERANCE: f64 = 1e-10;
/// Relative singular-value cutoff for the null-space rank decision.
pub const NULL_SPACE_CUTOFF: f64 = 1e-10;

/// Output of [`construct`]: the Gram matrix, the quotient data and the
/// left-multiplication representation.
#[derive(Debug, Clone)]
pub struct GnsResult {
    /// Hermitian PSD matrix of pairings `⟨basis_x* · basis_y⟩`.
    pub gram: DMatrix<Complex64>,
    /// Dimension of the null ideal.
    pub null_rank: usize,
    /// Orthonormal basis of the quotient, as coefficient vectors over the
    /// algebra basis (orthonormal in the Gram inner product).
    pub quotient_basis: Vec<DVector<Complex64>>,
    /// One representation matrix per algebra basis element, acting on the
    /// quotient in the `quotient_basis` coordinates.
    pub rep_matrices: Vec<DMatrix<Complex64>>,
    /// Coordinates of the coset of the algebra unit.
    pub cyclic_vector: DVector<Complex64>,
}

impl GnsResult {
    pub fn quotient_dim(&self) -> usize {
        self.quotient_basis.len()
    }

    /// Pure-state valuation `⟨1|π(basis_i)|1⟩`.
    pub fn pure_state(&self, basis_index: usize) -> Complex64 {
        let m = &self.rep_matrices[basis_index];
        (self.cyclic_vector.adjoint() * m * &self.cyclic_vector)[(0, 0)]
    }
}

/// Gram matrix of the state on the chosen side.
///
/// Functions: `e_x* e_y = δ_xy e_x`, so the Gram is diagonal in the state's
/// weights. Measures: `d[x]* d[y] = d[x⁻¹y]`, so the Gram is the group matrix
/// of the state's values.
pub fn gram_matrix(
    group: &Arc<FiniteGroup>,
    side: AlgebraSide,
    state: &[Complex64],
) -> Result<DMatrix<Complex64>, GnsError> {
    let n = group.order();
    if state.len() != n {
        return Err(GnsError::LengthMismatch {
            len: state.len(),
            order: n,
        });
    }
    let mut gram = DMatrix::zeros(n, n);
    match side {
        AlgebraSide::Functions => {
            for x in 0..n {
                gram[(x, x)] = state[x];
            }
        }
        AlgebraSide::Measures => {
            for x in 0..n {
                for y in 0..n {
                    gram[(x, y)] = state[group.mul(group.inverse(x), y)];
                }
            }
        }
    }
    Ok(gram)
}

/// Left-multiplication matrix of basis element `i` on the algebra basis.
fn left_mult_matrix(group: &FiniteGroup, side: AlgebraSide, i: usize) -> DMatrix<Complex64> {
    let n = group.order();
    let mut m = DMatrix::zeros(n, n);
    match side {
        AlgebraSide::Functions => {
            // e_i · e_j = δ_ij e_i
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        AlgebraSide::Measures => {
            // d[i] · d[j] = d[ij]
            for j in 0..n {
                m[(group.mul(i, j), j)] = Complex64::new(1.0, 0.0);
            }
        }
    }
    m
}

/// Coefficients of the algebra unit over the basis.
fn unit_coefficients(group: &FiniteGroup, side: AlgebraSide) -> DVector<Complex64> {
    let n = group.order();
    match side {
        // the constant function 1 is the sum of all indicators
        AlgebraSide::Functions => DVector::from_element(n, Complex64::new(1.0, 0.0)),
        // the unit measure is the Dirac mass at the identity
        AlgebraSide::Measures => {
            let mut v = DVector::zeros(n);
            v[group.identity()] = Complex64::new(1.0, 0.0);
            v
        }
    }
}

/// Run the construction for a state given by its valuations on the basis of
/// the chosen algebra.
pub fn construct(
    group: &Arc<FiniteGroup>,
    side: AlgebraSide,
    state: &[Complex64],
) -> Result<GnsResult, GnsError> {
    let n = group.order();
    let gram = gram_matrix(group, side, state)?;

    let herm_dev = crate::linalg::hermitian_deviation(&gram);
    let scale = gram.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if herm_dev > COPOSITIVITY_TOLERANCE * scale {
        return Err(GnsError::NotCoreal { deviation: herm_dev });
    }
    let gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);

    let (eigenvalues, eigenvectors) = herm_eigen_sorted(&gram);
    let min_eigen = eigenvalues[0];
    if min_eigen < -COPOSITIVITY_TOLERANCE {
        return Err(GnsError::NotCopositive { min_eigen });
    }
    let max_eigen = eigenvalues[n - 1].max(0.0);
    let cutoff = NULL_SPACE_CUTOFF * max_eigen;

    let kept: Vec<usize> = (0..n).filter(|&k| eigenvalues[k] > cutoff).collect();
    let null_rank = n - kept.len();

    // Eigenvectors of the Hermitian Gram are G-orthogonal; scaling by
    // 1/sqrt(eigenvalue) makes them orthonormal in the quotient inner product.
    let quotient_basis: Vec<DVector<Complex64>> = kept
        .iter()
        .map(|&k| {
            let scale = Complex64::new(1.0 / eigenvalues[k].sqrt(), 0.0);
            DVector::from(eigenvectors.column(k)) * scale
        })
        .collect();

    let r = quotient_basis.len();
    let mut basis_matrix = DMatrix::zeros(n, r);
    for (j, b) in quotient_basis.iter().enumerate() {
        basis_matrix.set_column(j, b);
    }
    let gram_basis = &gram * &basis_matrix; // n x r
    let rep_matrices: Vec<DMatrix<Complex64>> = (0..n)
        .map(|i| {
            let m = left_mult_matrix(group, side, i);
            // π(a)_{kl} = ⟨b_k | a · b_l⟩ in the Gram inner product
            gram_basis.adjoint() * m * &basis_matrix
        })
        .collect();

    let cyclic_vector = gram_basis.adjoint() * unit_coefficients(group, side);

    Ok(GnsResult {
        gram,
        null_rank,
        quotient_basis,
        rep_matrices,
        cyclic_vector,
    })
}

/// Cauchy-Schwarz slack `⟨a*a⟩⟨b*b⟩ − |⟨a*b⟩|²` for coefficient vectors `a`,
/// `b`; `ok` iff the slack is not negative beyond 1e-12. A genuinely negative
/// slack certifies that the state is not copositive.
pub fn cauchy_schwarz_check(
    group: &Arc<FiniteGroup>,
    side: AlgebraSide,
    state: &[Complex64],
    a: &DVector<Complex64>,
    b: &DVector<Complex64>,
) -> Result<(bool, f64), GnsError> {
    let gram = gram_matrix(group, side, state)?;
    let aa = (a.adjoint() * &gram * a)[(0, 0)].re;
    let bb = (b.adjoint() * &gram * b)[(0, 0)].re;
    let ab = (a.adjoint() * &gram * b)[(0, 0)];
    let slack = aa * bb - ab.norm_sqr();
    Ok((slack >= -1e-12, slack))
}
