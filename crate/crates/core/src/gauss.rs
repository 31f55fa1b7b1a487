//! The Quadratic Gauss algebra: Gauss states `N(mu, nu)` paired against
//! exponential-quadratic observables `alpha · exp(x·phi + x·zeta x / 2)`.
//!
//! Pairing, numeraire change and conditional valuation are closed-form in the
//! parameters whenever `I - nu zeta` has positive eigenvalues; the domain check
//! and the determinant both come from the symmetric similarity
//! `nu^{1/2} zeta nu^{1/2}`, which has the same spectrum as `nu zeta`.

use crate::linalg::{asymmetry, sym_eigen_sorted, symmetrize};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GaussError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("factor dimension {dim} exceeds cap {max}")]
    DimTooLarge { dim: usize, max: usize },
    #[error("matrix is not symmetric: deviation {deviation:.3e}")]
    NotSymmetric { deviation: f64 },
    #[error("covariance is not positive semidefinite: eigenvalue {min_eigen:.3e}")]
    NotPsd { min_eigen: f64 },
    #[error("pairing undefined: I - nu zeta has eigenvalue {min_eigen:.3e}")]
    DomainViolation { min_eigen: f64 },
    #[error("parameter {name} is not finite")]
    NotFinite { name: &'static str },
}

/// Construction tolerance for symmetry of covariance/quadratic matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Eigenvalue tolerance below which a covariance is rejected as indefinite.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// `I - nu zeta` must have eigenvalues above this for the pairing to exist.
pub const DOMAIN_TOLERANCE: f64 = 1e-10;
/// Closed forms are kept to desk-scale factor dimensions.
pub const MAX_FACTOR_DIM: usize = 8;

/// Gauss measure with mean `mu` and PSD covariance `nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussState {
    mu: DVector<f64>,
    nu: DMatrix<f64>,
}

impl GaussState {
    pub fn new(mu: DVector<f64>, nu: DMatrix<f64>) -> Result<Self, GaussError> {
        let dim = mu.len();
        if dim > MAX_FACTOR_DIM {
            return Err(GaussError::DimTooLarge {
                dim,
                max: MAX_FACTOR_DIM,
            });
        }
        if nu.nrows() != dim || nu.ncols() != dim {
            return Err(GaussError::DimMismatch {
                left: dim,
                right: nu.nrows(),
            });
        }
        if !mu.iter().all(|v| v.is_finite()) || !nu.iter().all(|v| v.is_finite()) {
            return Err(GaussError::NotFinite { name: "state" });
        }
        let dev = asymmetry(&nu);
        if dev > SYMMETRY_TOLERANCE {
            return Err(GaussError::NotSymmetric { deviation: dev });
        }
        let nu = symmetrize(&nu);
        if dim > 0 {
            let (values, _) = sym_eigen_sorted(&nu);
            if values[0] < -PSD_TOLERANCE {
                return Err(GaussError::NotPsd {
                    min_eigen: values[0],
                });
            }
        }
        Ok(GaussState { mu, nu })
    }

    /// Point mass at the origin, the unit of convolution.
    pub fn point_mass(dim: usize) -> Self {
        GaussState {
            mu: DVector::zeros(dim),
            nu: DMatrix::zeros(dim, dim),
        }
    }

    pub fn standard(dim: usize) -> Self {
        GaussState {
            mu: DVector::zeros(dim),
            nu: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.nu
    }

    /// Convolution: means and covariances add.
    pub fn convolve(&self, other: &GaussState) -> Result<GaussState, GaussError> {
        check_dims(self.dim(), other.dim())?;
        Ok(GaussState {
            mu: &self.mu + &other.mu,
            nu: &self.nu + &other.nu,
        })
    }

    /// State involution `N(mu,nu) ↦ N(-mu,nu)`.
    pub fn involution(&self) -> GaussState {
        GaussState {
            mu: -&self.mu,
            nu: self.nu.clone(),
        }
    }

    /// States are coreal: the coinvolution fixes them.
    pub fn coinvolution(&self) -> GaussState {
        self.clone()
    }

    /// Antipode `N(mu,nu) ↦ N(-mu,nu)`.
    pub fn antipode(&self) -> GaussState {
        self.involution()
    }

    /// Total mass.
    pub fn counit(&self) -> f64 {
        1.0
    }

    /// Diagonal coproduct: the duplicated-pair state in dimension `2d` with
    /// every block of the covariance equal to `nu`.
    pub fn coproduct(&self) -> GaussState {
        let d = self.dim();
        let mut mu = DVector::zeros(2 * d);
        let mut nu = DMatrix::zeros(2 * d, 2 * d);
        for i in 0..d {
            mu[i] = self.mu[i];
            mu[d + i] = self.mu[i];
            for j in 0..d {
                let v = self.nu[(i, j)];
                nu[(i, j)] = v;
                nu[(i, d + j)] = v;
                nu[(d + i, j)] = v;
                nu[(d + i, d + j)] = v;
            }
        }
        GaussState { mu, nu }
    }
}

/// Exponential-quadratic observable `alpha · exp(x·phi + x·zeta x / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadObservable {
    alpha: f64,
    phi: DVector<f64>,
    zeta: DMatrix<f64>,
}

impl QuadObservable {
    pub fn new(alpha: f64, phi: DVector<f64>, zeta: DMatrix<f64>) -> Result<Self, GaussError> {
        let dim = phi.len();
        if dim > MAX_FACTOR_DIM {
            return Err(GaussError::DimTooLarge {
                dim,
                max: MAX_FACTOR_DIM,
            });
        }
        if zeta.nrows() != dim || zeta.ncols() != dim {
            return Err(GaussError::DimMismatch {
                left: dim,
                right: zeta.nrows(),
            });
        }
        if !alpha.is_finite() {
            return Err(GaussError::NotFinite { name: "alpha" });
        }
        if !phi.iter().all(|v| v.is_finite()) || !zeta.iter().all(|v| v.is_finite()) {
            return Err(GaussError::NotFinite { name: "observable" });
        }
        let dev = asymmetry(&zeta);
        if dev > SYMMETRY_TOLERANCE {
            return Err(GaussError::NotSymmetric { deviation: dev });
        }
        Ok(QuadObservable {
            alpha,
            phi,
            zeta: symmetrize(&zeta),
        })
    }

    /// Exponential-linear observable (`zeta = 0`).
    pub fn linear(alpha: f64, phi: DVector<f64>) -> Self {
        let d = phi.len();
        QuadObservable {
            alpha,
            phi,
            zeta: DMatrix::zeros(d, d),
        }
    }

    /// The unit observable: constant 1.
    pub fn unit(dim: usize) -> Self {
        QuadObservable {
            alpha: 1.0,
            phi: DVector::zeros(dim),
            zeta: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn phi(&self) -> &DVector<f64> {
        &self.phi
    }

    pub fn zeta(&self) -> &DMatrix<f64> {
        &self.zeta
    }

    pub fn with_alpha(&self, alpha: f64) -> QuadObservable {
        QuadObservable {
            alpha,
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: f64) -> QuadObservable {
        self.with_alpha(self.alpha * factor)
    }

    /// Pointwise evaluation.
    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        let quad = 0.5 * (x.transpose() * &self.zeta * x)[(0, 0)];
        self.alpha * (x.dot(&self.phi) + quad).exp()
    }

    /// Pointwise product: scales multiply, coefficients add.
    pub fn multiply(&self, other: &QuadObservable) -> Result<QuadObservable, GaussError> {
        check_dims(self.dim(), other.dim())?;
        Ok(QuadObservable {
            alpha: self.alpha * other.alpha,
            phi: &self.phi + &other.phi,
            zeta: &self.zeta + &other.zeta,
        })
    }

    /// Involution: conjugation fixes a real observable.
    pub fn involution(&self) -> QuadObservable {
        self.clone()
    }

    /// Coinvolution `E(phi,zeta) ↦ E(-phi,zeta)`.
    pub fn coinvolution(&self) -> QuadObservable {
        QuadObservable {
            alpha: self.alpha,
            phi: -&self.phi,
            zeta: self.zeta.clone(),
        }
    }

    /// Antipode `E(phi,zeta) ↦ E(-phi,zeta)`.
    pub fn antipode(&self) -> QuadObservable {
        self.coinvolution()
    }

    /// Counit: evaluation at the origin.
    pub fn counit(&self) -> f64 {
        self.alpha
    }

    /// Coproduct: the pulled-back observable on the doubled factor space,
    /// every block of the quadratic form equal to `zeta`.
    pub fn coproduct(&self) -> QuadObservable {
        let d = self.dim();
        let mut phi = DVector::zeros(2 * d);
        let mut zeta = DMatrix::zeros(2 * d, 2 * d);
        for i in 0..d {
            phi[i] = self.phi[i];
            phi[d + i] = self.phi[i];
            for j in 0..d {
                let v = self.zeta[(i, j)];
                zeta[(i, j)] = v;
                zeta[(i, d + j)] = v;
                zeta[(d + i, j)] = v;
                zeta[(d + i, d + j)] = v;
            }
        }
        QuadObservable {
            alpha: self.alpha,
            phi,
            zeta,
        }
    }

    /// Normed square `a* · a` of a real observable: `(alpha², 2phi, 2zeta)`.
    pub fn normed_square(&self) -> QuadObservable {
        QuadObservable {
            alpha: self.alpha * self.alpha,
            phi: 2.0 * &self.phi,
            zeta: 2.0 * &self.zeta,
        }
    }
}

fn check_dims(left: usize, right: usize) -> Result<(), GaussError> {
    if left == right {
        Ok(())
    } else {
        Err(GaussError::DimMismatch { left, right })
    }
}

/// Finiteness check for the pairing of a state with an observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCheck {
    /// Smallest eigenvalue of `I - nu zeta`.
    pub min_eigen: f64,
    pub ok: bool,
}

/// Spectrum of `nu zeta` via the symmetric similarity
/// `nu^{1/2} zeta nu^{1/2}`, ascending.
fn nu_zeta_spectrum(state: &GaussState, obs: &QuadObservable) -> DVector<f64> {
    let root = crate::linalg::psd_sqrt_factor(&state.nu)
        .expect("covariance validated PSD at construction");
    // psd_sqrt_factor returns L with L Lᵀ = nu; Lᵀ zeta L has the spectrum of
    // nu zeta and is symmetric.
    let sym = symmetrize(&(root.transpose() * &obs.zeta * &root));
    let (values, _) = sym_eigen_sorted(&sym);
    values
}

/// Check that the pairing of `state` with `obs` is defined.
pub fn domain_check(state: &GaussState, obs: &QuadObservable) -> Result<DomainCheck, GaussError> {
    check_dims(state.dim(), obs.dim())?;
    if state.dim() == 0 {
        return Ok(DomainCheck {
            min_eigen: 1.0,
            ok: true,
        });
    }
    let spectrum = nu_zeta_spectrum(state, obs);
    let min_eigen = 1.0 - spectrum[spectrum.len() - 1];
    Ok(DomainCheck {
        min_eigen,
        ok: min_eigen > DOMAIN_TOLERANCE,
    })
}

struct PairingParts {
    /// `(I - nu zeta)⁻¹ (mu + nu phi)` — the numeraire-changed mean.
    new_mean: DVector<f64>,
    /// `(I - zeta nu)⁻¹ (phi + zeta mu)` — the conditional-valuation coefficients.
    new_phi: DVector<f64>,
    /// `det(I - nu zeta)`, positive within the domain.
    det: f64,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    lu_t: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

fn pairing_parts(state: &GaussState, obs: &QuadObservable) -> Result<PairingParts, GaussError> {
    let check = domain_check(state, obs)?;
    if !check.ok {
        return Err(GaussError::DomainViolation {
            min_eigen: check.min_eigen,
        });
    }
    let d = state.dim();
    let m = DMatrix::identity(d, d) - &state.nu * &obs.zeta;
    let lu = m.clone().lu();
    let lu_t = m.transpose().lu();
    let new_mean = lu
        .solve(&(&state.mu + &state.nu * &obs.phi))
        .expect("nonsingular within the domain");
    let new_phi = lu_t
        .solve(&(&obs.phi + &obs.zeta * &state.mu))
        .expect("nonsingular within the domain");
    let det = nu_zeta_spectrum(state, obs)
        .iter()
        .map(|l| 1.0 - l)
        .product();
    Ok(PairingParts {
        new_mean,
        new_phi,
        det,
        lu,
        lu_t,
    })
}

/// Closed-form pairing
/// `alpha · det(I - nu zeta)^{-1/2} · exp[((I-nu zeta)⁻¹(mu+nu phi))·phi/2 + mu·((I-zeta nu)⁻¹(phi+zeta mu))/2]`.
pub fn pair(state: &GaussState, obs: &QuadObservable) -> Result<f64, GaussError> {
    if state.dim() == 0 {
        return Ok(obs.alpha);
    }
    let parts = pairing_parts(state, obs)?;
    let exponent =
        0.5 * parts.new_mean.dot(&obs.phi) + 0.5 * state.mu.dot(&parts.new_phi);
    Ok(obs.alpha * exponent.exp() / parts.det.sqrt())
}

/// Numeraire change of the state by the observable: returns the pairing as the
/// scale and the reweighted state
/// `N((I-nu zeta)⁻¹(mu+nu phi), (I-nu zeta)⁻¹ nu)`.
pub fn numeraire_change(
    state: &GaussState,
    obs: &QuadObservable,
) -> Result<(f64, GaussState), GaussError> {
    let scale = pair(state, obs)?;
    if state.dim() == 0 {
        return Ok((scale, state.clone()));
    }
    let parts = pairing_parts(state, obs)?;
    let new_nu = symmetrize(
        &parts
            .lu
            .solve(&state.nu)
            .expect("nonsingular within the domain"),
    );
    let new_state = GaussState::new(parts.new_mean, new_nu)?;
    Ok((scale, new_state))
}

/// Conditional valuation of the observable by the state:
/// `alpha·⟨N|E⟩ · E((I-zeta nu)⁻¹(phi+zeta mu), (I-zeta nu)⁻¹ zeta)`
/// with the pairing taken at unit scale.
pub fn conditional_valuation(
    state: &GaussState,
    obs: &QuadObservable,
) -> Result<QuadObservable, GaussError> {
    let unit_pairing = pair(state, &obs.with_alpha(1.0))?;
    if state.dim() == 0 {
        return Ok(obs.scaled(unit_pairing));
    }
    let parts = pairing_parts(state, obs)?;
    let new_zeta = symmetrize(
        &parts
            .lu_t
            .solve(&obs.zeta)
            .expect("nonsingular within the domain"),
    );
    QuadObservable::new(obs.alpha * unit_pairing, parts.new_phi, new_zeta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn state1(mu: f64, nu: f64) -> GaussState {
        GaussState::new(
            DVector::from_vec(vec![mu]),
            DMatrix::from_element(1, 1, nu),
        )
        .unwrap()
    }

    fn obs1(alpha: f64, phi: f64, zeta: f64) -> QuadObservable {
        QuadObservable::new(
            alpha,
            DVector::from_vec(vec![phi]),
            DMatrix::from_element(1, 1, zeta),
        )
        .unwrap()
    }

    #[test]
    fn point_mass_pairs_to_alpha() {
        let state = GaussState::point_mass(2);
        let obs = QuadObservable::new(
            2.5,
            DVector::from_vec(vec![0.7, -1.1]),
            DMatrix::from_row_slice(2, 2, &[0.4, 0.1, 0.1, -0.3]),
        )
        .unwrap();
        assert_relative_eq!(pair(&state, &obs).unwrap(), 2.5, epsilon = 1e-14);
    }

    #[test]
    fn standard_normal_quadratic_pairing_is_sqrt_two() {
        let v = pair(&state1(0.0, 1.0), &obs1(1.0, 0.0, 0.5)).unwrap();
        assert_relative_eq!(v, 2.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn standard_normal_linear_pairing_is_exp_half() {
        let v = pair(&state1(0.0, 1.0), &obs1(1.0, 1.0, 0.0)).unwrap();
        assert_relative_eq!(v, 0.5_f64.exp(), epsilon = 1e-12);
    }

    #[test]
    fn multiply_unit_is_identity() {
        let a = obs1(1.3, 0.4, 0.2);
        let u = QuadObservable::unit(1);
        assert_eq!(a.multiply(&u).unwrap(), a);
    }

    #[test]
    fn multiply_adds_parameters() {
        let a = obs1(1.0, 1.0, 0.2);
        let b = obs1(1.0, -1.0, 0.3);
        let ab = a.multiply(&b).unwrap();
        assert_relative_eq!(ab.phi()[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(ab.zeta()[(0, 0)], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn normed_square_matches_pointwise_square() {
        let a = obs1(1.7, 0.3, -0.2);
        let sq = a.normed_square();
        for &x in &[-1.0, 0.0, 0.5, 2.0] {
            let xv = DVector::from_vec(vec![x]);
            assert_relative_eq!(sq.eval(&xv), a.eval(&xv).powi(2), max_relative = 1e-13);
        }
    }

    #[test]
    fn convolution_adds_parameters_and_unit_is_point_mass() {
        let s = state1(1.0, 1.0);
        let t = state1(2.0, 3.0);
        let st = s.convolve(&t).unwrap();
        assert_relative_eq!(st.mean()[0], 3.0, epsilon = 1e-15);
        assert_relative_eq!(st.covariance()[(0, 0)], 4.0, epsilon = 1e-15);
        let unit = GaussState::point_mass(1);
        assert_eq!(s.convolve(&unit).unwrap(), s);
    }

    #[test]
    fn numeraire_change_examples() {
        // identity numeraire
        let s = state1(0.3, 0.8);
        let (scale, ns) = numeraire_change(&s, &QuadObservable::unit(1)).unwrap();
        assert_relative_eq!(scale, 1.0, epsilon = 1e-14);
        assert_eq!(ns, s);
        // drift adjustment by an exponential-linear observable
        let (scale, ns) = numeraire_change(&state1(0.0, 1.0), &obs1(1.0, 1.0, 0.0)).unwrap();
        assert_relative_eq!(scale, 0.5_f64.exp(), epsilon = 1e-12);
        assert_relative_eq!(ns.mean()[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(ns.covariance()[(0, 0)], 1.0, epsilon = 1e-12);
        // variance inflation by a quadratic observable
        let (scale, ns) = numeraire_change(&state1(0.0, 1.0), &obs1(1.0, 0.0, 0.5)).unwrap();
        assert_relative_eq!(scale, 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(ns.mean()[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(ns.covariance()[(0, 0)], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn conditional_valuation_examples() {
        // conditioning on a point mass changes nothing
        let a = obs1(1.2, 0.5, 0.3);
        let out = conditional_valuation(&GaussState::point_mass(1), &a).unwrap();
        assert_eq!(out, a);
        // linear observables keep their coefficients
        let nu = 0.7;
        let phi = 0.9;
        let out = conditional_valuation(&state1(0.0, nu), &obs1(1.0, phi, 0.0)).unwrap();
        assert_relative_eq!(out.alpha(), (0.5 * nu * phi * phi).exp(), epsilon = 1e-12);
        assert_relative_eq!(out.phi()[0], phi, epsilon = 1e-13);
        assert_relative_eq!(out.zeta()[(0, 0)], 0.0, epsilon = 1e-13);
        // quadratic coefficient transforms by (1 - zeta nu)⁻¹
        let out = conditional_valuation(&state1(0.0, 0.5), &obs1(1.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(out.zeta()[(0, 0)], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn hopf_parameter_maps() {
        let a = obs1(1.0, 0.7, 0.3);
        // antipode twice is the identity
        assert_eq!(a.antipode().antipode(), a);
        // product of the coproduct legs doubles phi and quadruples zeta
        let cp = a.coproduct();
        let mut folded_phi = DVector::zeros(1);
        folded_phi[0] = cp.phi()[0] + cp.phi()[1];
        let folded_zeta =
            cp.zeta()[(0, 0)] + cp.zeta()[(0, 1)] + cp.zeta()[(1, 0)] + cp.zeta()[(1, 1)];
        assert_relative_eq!(folded_phi[0], 2.0 * 0.7, epsilon = 1e-15);
        assert_relative_eq!(folded_zeta, 4.0 * 0.3, epsilon = 1e-15);
        // states are coreal
        let s = state1(0.4, 0.9);
        assert_eq!(s.coinvolution(), s);
        assert_relative_eq!(s.antipode().mean()[0], -0.4, epsilon = 1e-15);
    }

    #[test]
    fn domain_check_examples() {
        let ok = domain_check(&state1(0.0, 1.0), &obs1(1.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(ok.min_eigen, 1.0, epsilon = 1e-14);
        assert!(ok.ok);
        let boundary = domain_check(&state1(0.0, 1.0), &obs1(1.0, 0.0, 1.0)).unwrap();
        assert_relative_eq!(boundary.min_eigen, 0.0, epsilon = 1e-12);
        assert!(!boundary.ok);
        let scalar = domain_check(&state1(0.0, 2.0), &obs1(1.0, 0.0, 0.4)).unwrap();
        assert_relative_eq!(scalar.min_eigen, 0.2, epsilon = 1e-12);
        assert!(scalar.ok);
        // pairing refuses out-of-domain inputs
        assert!(matches!(
            pair(&state1(0.0, 1.0), &obs1(1.0, 0.0, 1.5)),
            Err(GaussError::DomainViolation { .. })
        ));
    }

    #[test]
    fn asymmetric_inputs_are_rejected() {
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, -0.2, 1.0]);
        assert!(matches!(
            GaussState::new(DVector::zeros(2), bad),
            Err(GaussError::NotSymmetric { .. })
        ));
    }
}
