//! Classical option formulas and comparators: Black and Bachelier prices,
//! implied-volatility inversion, the three-moment exchange bound, and the
//! maximum over the one-parameter family of two-point binomial models.

use super::PricingError;
use crate::dirac;
use crate::quadrature::{normal_cdf, normal_pdf};

/// Quoting convention for implied volatility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolConvention {
    Normal,
    Lognormal,
}

/// A priced option with its quoted vols. `None` vols mean the price sits
/// outside the convention's arbitrage band (or the strike leg is degenerate).
#[derive(Debug, Clone, PartialEq)]
pub struct OptionQuote {
    pub expiry: f64,
    pub forward: f64,
    pub strike: f64,
    pub price: f64,
    pub vol_normal: Option<f64>,
    pub vol_lognormal: Option<f64>,
}

impl OptionQuote {
    /// Build a quote from an undiscounted price, filling both implied vols.
    pub fn from_undiscounted(expiry: f64, forward: f64, strike: f64, price: f64) -> OptionQuote {
        let vol_normal = implied_vol(price, forward, strike, expiry, VolConvention::Normal).ok();
        let vol_lognormal =
            implied_vol(price, forward, strike, expiry, VolConvention::Lognormal).ok();
        OptionQuote {
            expiry,
            forward,
            strike,
            price,
            vol_normal,
            vol_lognormal,
        }
    }
}

/// Undiscounted Black call price on a forward.
pub fn black_call(forward: f64, strike: f64, sigma: f64, expiry: f64) -> f64 {
    let intrinsic = (forward - strike).max(0.0);
    let v = sigma * expiry.max(0.0).sqrt();
    if v <= 0.0 || forward <= 0.0 || strike <= 0.0 {
        return intrinsic;
    }
    let d1 = (forward / strike).ln() / v + 0.5 * v;
    forward * normal_cdf(d1) - strike * normal_cdf(d1 - v)
}

/// Undiscounted Bachelier (normal) call price on a forward.
pub fn bachelier_call(forward: f64, strike: f64, sigma: f64, expiry: f64) -> f64 {
    let intrinsic = (forward - strike).max(0.0);
    let v = sigma * expiry.max(0.0).sqrt();
    if v <= 0.0 {
        return intrinsic;
    }
    let d = (forward - strike) / v;
    (forward - strike) * normal_cdf(d) + v * normal_pdf(d)
}

/// Invert the Black or Bachelier price for the volatility with a safeguarded
/// Newton iteration; the returned vol reprices within 1e-10.
pub fn implied_vol(
    price: f64,
    forward: f64,
    strike: f64,
    expiry: f64,
    convention: VolConvention,
) -> Result<f64, PricingError> {
    const PRICE_TOLERANCE: f64 = 1e-10;
    const MAX_ITERATIONS: usize = 100;

    if expiry <= 0.0 {
        return Err(PricingError::NotPositive("expiry"));
    }
    let intrinsic = (forward - strike).max(0.0);
    let upper = match convention {
        VolConvention::Normal => f64::INFINITY,
        VolConvention::Lognormal => forward,
    };
    if convention == VolConvention::Lognormal && (forward <= 0.0 || strike <= 0.0) {
        return Err(PricingError::NotPositive("forward and strike"));
    }
    if price < intrinsic - PRICE_TOLERANCE || price >= upper {
        return Err(PricingError::NoRoot {
            price,
            lower: intrinsic,
            upper,
        });
    }
    if price <= intrinsic + PRICE_TOLERANCE {
        return Ok(0.0);
    }

    let value = |sigma: f64| match convention {
        VolConvention::Normal => bachelier_call(forward, strike, sigma, expiry),
        VolConvention::Lognormal => black_call(forward, strike, sigma, expiry),
    };
    let vega = |sigma: f64| {
        let v = sigma * expiry.sqrt();
        match convention {
            VolConvention::Normal => {
                let d = (forward - strike) / v;
                normal_pdf(d) * expiry.sqrt()
            }
            VolConvention::Lognormal => {
                let d1 = (forward / strike).ln() / v + 0.5 * v;
                forward * normal_pdf(d1) * expiry.sqrt()
            }
        }
    };

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut guard = 0;
    while value(hi) < price {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(PricingError::NoRoot {
                price,
                lower: intrinsic,
                upper,
            });
        }
    }
    let mut sigma = 0.5 * hi;
    for _ in 0..MAX_ITERATIONS {
        let err = value(sigma) - price;
        if err.abs() <= PRICE_TOLERANCE {
            return Ok(sigma);
        }
        if err > 0.0 {
            hi = sigma;
        } else {
            lo = sigma;
        }
        let slope = vega(sigma);
        let newton = sigma - err / slope;
        sigma = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(sigma)
}

/// Exchange-option volatility from the three moments
/// `σ² = 1 - m_uv² / (m_u m_v)`.
pub fn three_moment_sigma(m_u: f64, m_v: f64, m_uv: f64) -> Result<f64, PricingError> {
    if m_u <= 0.0 || m_v <= 0.0 {
        return Err(PricingError::NotPositive("moments"));
    }
    let sigma_sq = 1.0 - m_uv * m_uv / (m_u * m_v);
    if !(-1e-12..=1.0 + 1e-12).contains(&sigma_sq) {
        return Err(PricingError::MomentInconsistency { sigma_sq });
    }
    Ok(sigma_sq.clamp(0.0, 1.0).sqrt())
}

/// The closed-form exchange bound: the positive eigenvalue of
/// `F|a⟩⟨a| - K|b⟩⟨b|`.
pub fn classical_option_bound(forward: f64, strike: f64, sigma: f64) -> Result<f64, PricingError> {
    Ok(dirac::option_bound(forward, strike, sigma)?)
}

/// Maximum option value over the one-parameter family of two-point models
/// calibrated to the moments `⟨u⟩`, `⟨v⟩`, `⟨√(uv)⟩`.
pub fn classical_binomial_max(
    forward: f64,
    strike: f64,
    m_u: f64,
    m_v: f64,
    m_uv: f64,
) -> Result<f64, PricingError> {
    let sigma = three_moment_sigma(m_u, m_v, m_uv)?;
    binomial_max_from_sigma(forward, strike, sigma)
}

/// Same maximum, parametrised directly by the exchange volatility.
///
/// Rescaling by the strike leg reduces the family to two-point distributions
/// of `y = sqrt(u/v)` on the half-line with `E[y] = M1` and `E[y²] = M2`; the
/// option value `K E[(y² - 1)⁺]` has an interior optimum at the positive root
/// of `M1 a² + (s² + 1 - M1²) a - M1 s² = 0` where `a = M1 - y1` and
/// `s² = M2 - M1²`.
pub fn binomial_max_from_sigma(
    forward: f64,
    strike: f64,
    sigma: f64,
) -> Result<f64, PricingError> {
    if forward <= 0.0 || strike <= 0.0 {
        return Err(PricingError::NotPositive("forward and strike"));
    }
    if !(0.0..=1.0).contains(&sigma) {
        return Err(PricingError::MomentInconsistency {
            sigma_sq: sigma * sigma,
        });
    }
    let m2 = forward / strike;
    let m1 = ((1.0 - sigma * sigma) * m2).sqrt();
    let s2 = m2 - m1 * m1;
    if s2 <= 0.0 {
        return Ok((forward - strike).max(0.0));
    }

    // value of the two-point model at parameter a in (0, M1]
    let eval = |a: f64| -> f64 {
        let y1 = m1 - a;
        let y2 = m1 + s2 / a;
        let p = s2 / (a * a + s2);
        strike * (p * (y1 * y1 - 1.0).max(0.0) + (1.0 - p) * (y2 * y2 - 1.0).max(0.0))
    };

    let b = s2 + 1.0 - m1 * m1;
    let disc = b * b + 4.0 * m1 * m1 * s2;
    let interior = (-b + disc.sqrt()) / (2.0 * m1);

    let mut best = (forward - strike).max(0.0); // the both-in-the-money regime
    for candidate in [interior, m1, m1 - 1.0, 1e-9 * m1] {
        if candidate > 0.0 && candidate <= m1 {
            best = best.max(eval(candidate));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn black_atm_reference_value() {
        let p = black_call(1.0, 1.0, 0.2, 1.0);
        assert_relative_eq!(p, 0.0796557, epsilon = 5e-8);
    }

    #[test]
    fn implied_vol_recovers_black_input() {
        let p = black_call(1.0, 1.0, 0.2, 1.0);
        let v = implied_vol(p, 1.0, 1.0, 1.0, VolConvention::Lognormal).unwrap();
        assert_relative_eq!(v, 0.2, epsilon = 1e-8);
    }

    #[test]
    fn implied_vol_round_trips_in_price() {
        for &(f, k, t, p_rel) in &[
            (1.0, 0.8, 0.5, 0.22),
            (1.0, 1.3, 2.0, 0.31),
            (0.03, 0.035, 5.0, 0.012),
        ] {
            let price = (f - k as f64).max(0.0) + p_rel * f * 0.1;
            if price < f {
                let v = implied_vol(price, f, k, t, VolConvention::Lognormal).unwrap();
                assert!((black_call(f, k, v, t) - price).abs() <= 1e-10);
            }
            let v = implied_vol(price, f, k, t, VolConvention::Normal).unwrap();
            assert!((bachelier_call(f, k, v, t) - price).abs() <= 1e-10);
        }
    }

    #[test]
    fn intrinsic_price_means_zero_vol() {
        assert_eq!(
            implied_vol(0.2, 1.2, 1.0, 1.0, VolConvention::Lognormal).unwrap(),
            0.0
        );
        assert_eq!(
            implied_vol(0.0, 0.9, 1.0, 1.0, VolConvention::Normal).unwrap(),
            0.0
        );
    }

    #[test]
    fn out_of_band_prices_are_rejected() {
        assert!(implied_vol(1.1, 1.0, 1.0, 1.0, VolConvention::Lognormal).is_err());
        assert!(implied_vol(0.1, 1.0, 1.3, 1.0, VolConvention::Lognormal)
            .is_ok_and(|v| v > 0.0));
        assert!(implied_vol(-0.01, 1.0, 1.0, 1.0, VolConvention::Normal).is_err());
    }

    #[test]
    fn three_moment_sigma_examples() {
        // perfectly correlated numeraires have zero exchange volatility
        assert_relative_eq!(three_moment_sigma(1.0, 1.0, 1.0).unwrap(), 0.0);
        let s = three_moment_sigma(1.0, 1.0, 0.98).unwrap();
        assert_relative_eq!(s, 0.0396_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(s, 0.199, epsilon = 1e-3);
        // inconsistent moments violate Cauchy-Schwarz
        assert!(three_moment_sigma(1.0, 1.0, 1.1).is_err());
    }

    #[test]
    fn binomial_max_examples() {
        // zero volatility collapses to intrinsic value
        assert_relative_eq!(
            binomial_max_from_sigma(1.2, 1.0, 0.0).unwrap(),
            0.2,
            epsilon = 1e-14
        );
        // at the money the maximum attains the bound F sigma
        let m = binomial_max_from_sigma(1.0, 1.0, 0.2).unwrap();
        assert_relative_eq!(m, 0.2, epsilon = 1e-6);
        // deep in the money approaches the forward
        let m = binomial_max_from_sigma(1.0, 1e-6, 0.3).unwrap();
        assert_relative_eq!(m, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn binomial_max_attains_bound_and_matches_sweep() {
        for &(f, k, sigma) in &[
            (1.0, 1.0, 0.2),
            (1.1, 1.0, 0.2),
            (1.0, 1.4, 0.35),
            (0.9, 0.5, 0.6),
            (1.0, 3.0, 0.4),
        ] {
            let closed = binomial_max_from_sigma(f, k, sigma).unwrap();
            let bound = classical_option_bound(f, k, sigma).unwrap();
            assert!(closed <= bound + 1e-9, "f={f} k={k} s={sigma}");
            // dense sweep over the family parameter
            let m2 = f / k;
            let m1 = ((1.0 - sigma * sigma) * m2).sqrt();
            let s2: f64 = m2 - m1 * m1;
            let mut sweep: f64 = (f - k as f64).max(0.0);
            let steps = 200_000;
            for i in 1..=steps {
                let a = m1 * i as f64 / steps as f64;
                let y1 = m1 - a;
                let y2 = m1 + s2 / a;
                let p = s2 / (a * a + s2);
                let v =
                    k * (p * (y1 * y1 - 1.0).max(0.0) + (1.0 - p) * (y2 * y2 - 1.0).max(0.0));
                sweep = sweep.max(v);
            }
            assert!(
                closed >= sweep - 1e-7,
                "closed {closed} below sweep {sweep} at f={f} k={k} s={sigma}"
            );
            // the family maximum achieves the projection bound
            assert_relative_eq!(closed, bound, epsilon = 1e-6);
        }
    }

    #[test]
    fn bound_monotone_in_sigma() {
        let mut last = 0.0;
        for i in 0..=50 {
            let sigma = i as f64 / 50.0;
            let b = classical_option_bound(1.05, 0.95, sigma).unwrap();
            assert!(b >= last - 1e-14);
            last = b;
        }
    }
}
