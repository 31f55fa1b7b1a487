//! The Linear Dirac algebra: finite weighted sums of group elements as
//! observables, representation states `⟨u|π|v⟩` as valuations.
//!
//! Elements come from SU(2) (the quantum binomial model and its tensor powers)
//! or from a finite group with an explicitly supplied unitary representation.
//! The option bound `(F-K)/2 + sqrt((F-K)² + 4FKσ²)/2` is the positive
//! eigenvalue of `F|a⟩⟨a| - K|b⟩⟨b|`, realised by [`positive_part_trace`].

use crate::group::FiniteGroup;
use crate::linalg::{herm_eigen_sorted, hermitian_deviation, kron};
use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiracError {
    #[error("elements live on different groups")]
    GroupMismatch,
    #[error("matrix is not special unitary: deviation {deviation:.3e}")]
    NotSpecialUnitary { deviation: f64 },
    #[error("representation check failed: {law} deviates by {deviation:.3e}")]
    NotRepresentation { law: &'static str, deviation: f64 },
    #[error("matrix is not Hermitian: deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("tensor Hilbert dimension {dim} exceeds cap {max}")]
    DimOverflow { dim: usize, max: usize },
    #[error("vector dimension {got} does not match representation dimension {expected}")]
    DimMismatch { got: usize, expected: usize },
    #[error("argument {name} = {value} outside its admissible range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("vector is not unit norm: |norm - 1| = {deviation:.3e}")]
    NotUnit { deviation: f64 },
}

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Frobenius tolerance for element equality and validation.
pub const ELEMENT_TOLERANCE: f64 = 1e-12;
/// Tolerance for representation-law validation.
pub const REP_TOLERANCE: f64 = 1e-10;
/// Hard cap on tensor Hilbert-space dimension (eight binary intervals).
pub const MAX_HILBERT_DIM: usize = 256;

/// A special-unitary 2x2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2(Matrix2<Complex64>);

impl Su2 {
    pub fn identity() -> Self {
        Su2(Matrix2::identity())
    }

    pub fn from_matrix(m: Matrix2<Complex64>) -> Result<Self, DiracError> {
        let unitary_dev = (m * m.adjoint() - Matrix2::identity())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let det_dev = (m.determinant() - C1).norm();
        let deviation = unitary_dev.max(det_dev);
        if deviation > ELEMENT_TOLERANCE {
            return Err(DiracError::NotSpecialUnitary { deviation });
        }
        Ok(Su2(m))
    }

    /// Rotation `exp(-i θ n·σ / 2)` about the unit axis `n`.
    pub fn rotation(axis: [f64; 3], theta: f64) -> Self {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (nx, ny, nz) = (axis[0] / norm, axis[1] / norm, axis[2] / norm);
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        // cos(θ/2) I - i sin(θ/2) (n·σ)
        Su2(Matrix2::new(
            Complex64::new(c, -s * nz),
            Complex64::new(-s * ny, -s * nx),
            Complex64::new(s * ny, -s * nx),
            Complex64::new(c, s * nz),
        ))
    }

    /// Rotation about the y axis: real orthogonal, sends (1,0) to
    /// (cos(θ/2), sin(θ/2)).
    pub fn rotation_y(theta: f64) -> Self {
        Self::rotation([0.0, 1.0, 0.0], theta)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn mul(&self, other: &Su2) -> Su2 {
        Su2(self.0 * other.0)
    }

    pub fn inverse(&self) -> Su2 {
        Su2(self.0.adjoint())
    }

    pub fn approx_eq(&self, other: &Su2, tol: f64) -> bool {
        (self.0 - other.0)
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
            <= tol
    }
}

/// An element of the model group: an index into a finite group, or an SU(2)
/// matrix.
#[derive(Debug, Clone)]
pub enum GroupElement {
    Finite { group: Arc<FiniteGroup>, index: usize },
    Su2(Su2),
}

impl GroupElement {
    pub fn finite(group: Arc<FiniteGroup>, index: usize) -> Self {
        GroupElement::Finite { group, index }
    }

    pub fn su2(m: Su2) -> Self {
        GroupElement::Su2(m)
    }

    pub fn identity_of(&self) -> GroupElement {
        match self {
            GroupElement::Finite { group, .. } => GroupElement::Finite {
                group: group.clone(),
                index: group.identity(),
            },
            GroupElement::Su2(_) => GroupElement::Su2(Su2::identity()),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, DiracError> {
        match (self, other) {
            (
                GroupElement::Finite { group: g1, index: x },
                GroupElement::Finite { group: g2, index: y },
            ) => {
                if !(Arc::ptr_eq(g1, g2) || g1 == g2) {
                    return Err(DiracError::GroupMismatch);
                }
                Ok(GroupElement::Finite {
                    group: g1.clone(),
                    index: g1.mul(*x, *y),
                })
            }
            (GroupElement::Su2(a), GroupElement::Su2(b)) => Ok(GroupElement::Su2(a.mul(b))),
            _ => Err(DiracError::GroupMismatch),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Finite { group, index } => GroupElement::Finite {
                group: group.clone(),
                index: group.inverse(*index),
            },
            GroupElement::Su2(m) => GroupElement::Su2(m.inverse()),
        }
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        match (self, other) {
            (
                GroupElement::Finite { group: g1, index: x },
                GroupElement::Finite { group: g2, index: y },
            ) => (Arc::ptr_eq(g1, g2) || g1 == g2) && x == y,
            (GroupElement::Su2(a), GroupElement::Su2(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }
}

/// A finite formal sum `Σ λ_n d[x_n]`; terms with equal elements are merged
/// and zero coefficients dropped on construction.
#[derive(Debug, Clone)]
pub struct DiracObservable {
    terms: Vec<(Complex64, GroupElement)>,
}

impl DiracObservable {
    pub fn new(raw: Vec<(Complex64, GroupElement)>) -> Self {
        let mut terms: Vec<(Complex64, GroupElement)> = Vec::new();
        for (coeff, elem) in raw {
            if let Some(existing) = terms
                .iter_mut()
                .find(|(_, e)| e.approx_eq(&elem, ELEMENT_TOLERANCE))
            {
                existing.0 += coeff;
            } else {
                terms.push((coeff, elem));
            }
        }
        terms.retain(|(c, _)| c.norm() > 0.0);
        DiracObservable { terms }
    }

    /// A single Dirac measure `d[x]`.
    pub fn element(x: GroupElement) -> Self {
        DiracObservable {
            terms: vec![(C1, x)],
        }
    }

    pub fn terms(&self) -> &[(Complex64, GroupElement)] {
        &self.terms
    }

    pub fn scale(&self, factor: Complex64) -> DiracObservable {
        DiracObservable::new(
            self.terms
                .iter()
                .map(|(c, e)| (c * factor, e.clone()))
                .collect(),
        )
    }

    /// Bilinear expansion of the convolution product.
    pub fn product(&self, other: &DiracObservable) -> Result<DiracObservable, DiracError> {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, ea) in &self.terms {
            for (cb, eb) in &other.terms {
                raw.push((ca * cb, ea.mul(eb)?));
            }
        }
        Ok(DiracObservable::new(raw))
    }

    /// `Σ λ_n d[x_n] ↦ Σ conj(λ_n) d[x_n⁻¹]`.
    pub fn involution(&self) -> DiracObservable {
        DiracObservable::new(
            self.terms
                .iter()
                .map(|(c, e)| (c.conj(), e.inverse()))
                .collect(),
        )
    }

    /// `a* · a`, the normed square.
    pub fn normed_square(&self) -> Result<DiracObservable, DiracError> {
        self.involution().product(self)
    }
}

/// A finite-dimensional unitary representation.
#[derive(Debug, Clone)]
pub enum UnitaryRep {
    /// Scalar representation `x ↦ 1`.
    Trivial,
    /// The defining representation of SU(2) on C².
    Su2Fundamental,
    /// Explicit unitary matrices, one per finite-group element.
    Finite {
        group: Arc<FiniteGroup>,
        matrices: Vec<DMatrix<Complex64>>,
    },
    /// Tensor product `x ↦ π₁[x] ⊗ π₂[x]`.
    Tensor(Box<UnitaryRep>, Box<UnitaryRep>),
}

impl UnitaryRep {
    /// Validate explicit matrices: unitarity, the unit at the identity, the
    /// group law on all pairs and adjoints at inverses.
    pub fn finite(
        group: Arc<FiniteGroup>,
        matrices: Vec<DMatrix<Complex64>>,
    ) -> Result<Self, DiracError> {
        let n = group.order();
        if matrices.len() != n {
            return Err(DiracError::DimMismatch {
                got: matrices.len(),
                expected: n,
            });
        }
        let dim = matrices[0].nrows();
        let norm = |m: &DMatrix<Complex64>| m.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for m in &matrices {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(DiracError::DimMismatch {
                    got: m.nrows(),
                    expected: dim,
                });
            }
            let dev = norm(&(m * m.adjoint() - DMatrix::<Complex64>::identity(dim, dim)));
            if dev > REP_TOLERANCE {
                return Err(DiracError::NotRepresentation {
                    law: "unitarity",
                    deviation: dev,
                });
            }
        }
        let dev = norm(&(&matrices[group.identity()] - DMatrix::<Complex64>::identity(dim, dim)));
        if dev > REP_TOLERANCE {
            return Err(DiracError::NotRepresentation {
                law: "identity",
                deviation: dev,
            });
        }
        for x in 0..n {
            for y in 0..n {
                let dev = norm(&(&matrices[x] * &matrices[y] - &matrices[group.mul(x, y)]));
                if dev > REP_TOLERANCE {
                    return Err(DiracError::NotRepresentation {
                        law: "group law",
                        deviation: dev,
                    });
                }
            }
            let dev = norm(&(matrices[x].adjoint() - &matrices[group.inverse(x)]));
            if dev > REP_TOLERANCE {
                return Err(DiracError::NotRepresentation {
                    law: "inverse adjoint",
                    deviation: dev,
                });
            }
        }
        Ok(UnitaryRep::Finite { group, matrices })
    }

    /// Left-regular representation by permutation matrices.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|x| {
                let mut m = DMatrix::zeros(n, n);
                for y in 0..n {
                    m[(group.mul(x, y), y)] = C1;
                }
                m
            })
            .collect();
        UnitaryRep::Finite { group, matrices }
    }

    pub fn hilbert_dim(&self) -> usize {
        match self {
            UnitaryRep::Trivial => 1,
            UnitaryRep::Su2Fundamental => 2,
            UnitaryRep::Finite { matrices, .. } => matrices[0].nrows(),
            UnitaryRep::Tensor(a, b) => a.hilbert_dim() * b.hilbert_dim(),
        }
    }

    /// The unitary matrix of `x`.
    pub fn apply(&self, x: &GroupElement) -> Result<DMatrix<Complex64>, DiracError> {
        match self {
            UnitaryRep::Trivial => Ok(DMatrix::from_element(1, 1, C1)),
            UnitaryRep::Su2Fundamental => match x {
                GroupElement::Su2(m) => {
                    let mm = m.matrix();
                    Ok(DMatrix::from_row_slice(
                        2,
                        2,
                        &[mm[(0, 0)], mm[(0, 1)], mm[(1, 0)], mm[(1, 1)]],
                    ))
                }
                _ => Err(DiracError::GroupMismatch),
            },
            UnitaryRep::Finite { group, matrices } => match x {
                GroupElement::Finite { group: g, index } => {
                    if !(Arc::ptr_eq(group, g) || group == g) {
                        return Err(DiracError::GroupMismatch);
                    }
                    Ok(matrices[*index].clone())
                }
                _ => Err(DiracError::GroupMismatch),
            },
            UnitaryRep::Tensor(a, b) => Ok(kron(&a.apply(x)?, &b.apply(x)?)),
        }
    }
}

/// Extend a representation linearly over a Dirac observable: `Σ λ_n π[x_n]`.
pub fn rep_extend(
    obs: &DiracObservable,
    rep: &UnitaryRep,
) -> Result<DMatrix<Complex64>, DiracError> {
    let dim = rep.hilbert_dim();
    let mut acc = DMatrix::zeros(dim, dim);
    for (coeff, elem) in obs.terms() {
        acc += rep.apply(elem)? * *coeff;
    }
    Ok(acc)
}

/// A representation state `⟨u|π|v⟩`.
#[derive(Debug, Clone)]
pub struct RepState {
    rep: UnitaryRep,
    u: DVector<Complex64>,
    v: DVector<Complex64>,
}

impl RepState {
    pub fn new(
        rep: UnitaryRep,
        u: DVector<Complex64>,
        v: DVector<Complex64>,
    ) -> Result<Self, DiracError> {
        let dim = rep.hilbert_dim();
        if u.len() != dim {
            return Err(DiracError::DimMismatch {
                got: u.len(),
                expected: dim,
            });
        }
        if v.len() != dim {
            return Err(DiracError::DimMismatch {
                got: v.len(),
                expected: dim,
            });
        }
        Ok(RepState { rep, u, v })
    }

    /// A driving state: `u = v` with unit norm.
    pub fn driving(rep: UnitaryRep, u: DVector<Complex64>) -> Result<Self, DiracError> {
        let dev = (u.norm() - 1.0).abs();
        if dev > REP_TOLERANCE {
            return Err(DiracError::NotUnit { deviation: dev });
        }
        RepState::new(rep, u.clone(), u)
    }

    pub fn rep(&self) -> &UnitaryRep {
        &self.rep
    }

    pub fn u(&self) -> &DVector<Complex64> {
        &self.u
    }

    pub fn v(&self) -> &DVector<Complex64> {
        &self.v
    }

    pub fn is_driving(&self) -> bool {
        self.u == self.v && (self.u.norm() - 1.0).abs() <= REP_TOLERANCE
    }

    /// Pairing `⟨u|π[x]|v⟩`.
    pub fn pair_element(&self, x: &GroupElement) -> Result<Complex64, DiracError> {
        let m = self.rep.apply(x)?;
        Ok((self.u.adjoint() * m * &self.v)[(0, 0)])
    }

    /// Linear extension of the pairing over an observable.
    pub fn pair(&self, obs: &DiracObservable) -> Result<Complex64, DiracError> {
        let mut acc = C0;
        for (coeff, elem) in obs.terms() {
            acc += coeff * self.pair_element(elem)?;
        }
        Ok(acc)
    }

    /// Numeraire change by `d[x]`: same representation, rotated vectors.
    pub fn numeraire_change(&self, x: &GroupElement) -> Result<RepState, DiracError> {
        let m = self.rep.apply(x)?;
        Ok(RepState {
            rep: self.rep.clone(),
            u: &m * &self.u,
            v: &m * &self.v,
        })
    }

    /// Conditional valuation of `d[x]`: the same element scaled by its
    /// valuation.
    pub fn conditional_valuation(
        &self,
        x: &GroupElement,
    ) -> Result<(Complex64, GroupElement), DiracError> {
        Ok((self.pair_element(x)?, x.clone()))
    }
}

/// Compose two driving states over consecutive intervals: tensor the
/// representations and the vectors. The later interval goes on the left.
pub fn semigroup_compose(later: &RepState, earlier: &RepState) -> Result<RepState, DiracError> {
    let dim = later.rep.hilbert_dim() * earlier.rep.hilbert_dim();
    if dim > MAX_HILBERT_DIM {
        return Err(DiracError::DimOverflow {
            dim,
            max: MAX_HILBERT_DIM,
        });
    }
    let rep = UnitaryRep::Tensor(Box::new(later.rep.clone()), Box::new(earlier.rep.clone()));
    let u = DVector::from(later.u.kronecker(&earlier.u));
    let v = DVector::from(later.v.kronecker(&earlier.v));
    RepState::new(rep, u, v)
}

/// Trace of the positive part of a Hermitian matrix, with the projection onto
/// the positive eigenspace. Realises the supremum of `tr[M E]` over all
/// projections `E`.
pub fn positive_part_trace(
    m: &DMatrix<Complex64>,
) -> Result<(f64, DMatrix<Complex64>), DiracError> {
    let scale = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let dev = hermitian_deviation(m);
    if dev > 1e-12 * scale {
        return Err(DiracError::NotHermitian { deviation: dev });
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let (values, vectors) = herm_eigen_sorted(&herm);
    let n = m.nrows();
    let cutoff = 1e-12 * scale;
    let mut trace = 0.0;
    let mut projection = DMatrix::zeros(n, n);
    for k in 0..n {
        if values[k] > cutoff {
            trace += values[k];
            let v = vectors.column(k);
            projection += &v * v.adjoint();
        }
    }
    Ok((trace, projection))
}

/// Closed-form exchange-option bound
/// `(F-K)/2 + sqrt((F-K)² + 4 F K σ²)/2`, the positive eigenvalue of
/// `F|a⟩⟨a| - K|b⟩⟨b|` when `|⟨a|b⟩|² = 1 - σ²`.
pub fn option_bound(f: f64, k: f64, sigma: f64) -> Result<f64, DiracError> {
    if !(f > 0.0) {
        return Err(DiracError::OutOfRange {
            name: "forward",
            value: f,
        });
    }
    if !(k > 0.0) {
        return Err(DiracError::OutOfRange {
            name: "strike",
            value: k,
        });
    }
    if !(0.0..=1.0).contains(&sigma) {
        return Err(DiracError::OutOfRange {
            name: "sigma",
            value: sigma,
        });
    }
    let d = f - k;
    Ok(0.5 * d + 0.5 * (d * d + 4.0 * f * k * sigma * sigma).sqrt())
}

/// Volatility from two unit vectors: `sqrt(1 - |⟨u|v⟩|²)`, the absolute sine
/// of the angle between them.
pub fn sigma_from_vectors(
    u: &DVector<Complex64>,
    v: &DVector<Complex64>,
) -> Result<f64, DiracError> {
    for w in [u, v] {
        let dev = (w.norm() - 1.0).abs();
        if dev > REP_TOLERANCE {
            return Err(DiracError::NotUnit { deviation: dev });
        }
    }
    let overlap = u.dotc(v).norm_sqr();
    Ok((1.0 - overlap).max(0.0).sqrt())
}
