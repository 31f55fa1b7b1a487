//! Pricing engine built on the two group algebras that drive it: functions on a
//! group multiply pointwise and split along the group law, measures convolve and
//! split along the diagonal, and integration pairs the two. The crate keeps both
//! pictures runnable side by side.
//!
//! - [`group`] / [`algebra`] / [`gns`]: finite multiplication-table groups, the
//!   function and measure operations with an exhaustive axiom checker, and the
//!   representation built from a copositive state.
//! - [`gauss`]: mean/covariance states against exponential-quadratic observables,
//!   with closed forms for pairing, numeraire change and conditional valuation.
//! - [`dirac`]: weighted sums of group elements against representation states,
//!   the quantum-binomial option bound and projection optimisation.
//! - [`quadrature`]: Gauss-Hermite rules and seeded Monte Carlo used as oracles
//!   and as the pricing backend.
//! - [`pricing`]: timelines, economies, discount factors, option pricing and
//!   implied volatility for both model families.

pub mod algebra;
pub mod dirac;
pub mod gauss;
pub mod gns;
pub mod group;
pub mod io;
pub mod linalg;
pub mod pricing;
pub mod quadrature;

pub use num_complex::Complex64;
