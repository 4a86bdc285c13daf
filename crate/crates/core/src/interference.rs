//! Aggregate interference from a thinned 3-D Poisson field of Rayleigh-faded
//! transmitters under the bounded path loss `1/(1 + d^alpha)`.
//!
//! The closed forms here have a numerical twin: [`laplace_quadrature_oracle`]
//! and [`mean_quadrature_oracle`] integrate the radial intensity directly and
//! share no algebra with the closed forms beyond the integrand.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Arguments of the interference Laplace transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceArgs {
    /// Dimensionless Laplace argument.
    pub s: f64,
    /// Density of the (thinned) process, per cubic metre.
    pub xi: f64,
    /// Path-loss exponent.
    pub alpha: f64,
}

impl LaplaceArgs {
    pub fn new(s: f64, xi: f64, alpha: f64) -> Self {
        LaplaceArgs { s, xi, alpha }
    }

    fn check(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.s >= 0.0) || !self.s.is_finite() {
            return Err(Error::Domain(format!("laplace argument s must be finite and >= 0 (got {})", self.s)));
        }
        check_density(self.xi)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 3.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must exceed 3 (got {alpha})")))
    }
}

fn check_density(xi: f64) -> Result<()> {
    if xi >= 0.0 && xi.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("density must be finite and >= 0 (got {xi})")))
    }
}

/// `4π² / (α sin(3π/α))`, the mean interference per unit density.
fn campbell_constant(alpha: f64) -> f64 {
    4.0 * PI * PI / (alpha * (3.0 * PI / alpha).sin())
}

/// Negative log of the Laplace transform, `-ln L_I(s, ξ)`.
///
/// Products of transforms are sums of exponents, so callers that multiply
/// many factors (or compare values that would underflow) work with this.
pub fn laplace_exponent(args: LaplaceArgs) -> Result<f64> {
    args.check()?;
    let LaplaceArgs { s, xi, alpha } = args;
    if s == 0.0 || xi == 0.0 {
        return Ok(0.0);
    }
    Ok(campbell_constant(alpha) * xi * s * (1.0 + s).powf((3.0 - alpha) / alpha))
}

/// Laplace transform of the aggregate interference, `E[exp(-s I)]`.
///
/// ```
/// use swipt_stochgeom::interference::{laplace_interference, LaplaceArgs};
/// let l = laplace_interference(LaplaceArgs::new(1.0, 1e-4, 4.0)).unwrap();
/// assert!((l - 0.998_826_988_139_287).abs() < 1e-12);
/// ```
pub fn laplace_interference(args: LaplaceArgs) -> Result<f64> {
    Ok((-laplace_exponent(args)?).exp())
}

/// Mean aggregate interference `E[Σ h_x / (1 + d_x^α)]` for density `xi`.
pub fn mean_interference(xi: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_density(xi)?;
    Ok(campbell_constant(alpha) * xi)
}

/// Upper bound on the expected interference contributed by points farther
/// than `radius` from the receiver.
pub fn truncation_tail_bound(radius: f64, xi: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_density(xi)?;
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("radius must be positive (got {radius})")));
    }
    Ok(4.0 * PI * xi * radius.powf(3.0 - alpha) / (alpha - 3.0))
}

/// `truncation_tail_bound / mean_interference`, which does not depend on the
/// density.
pub fn tail_bound_ratio(radius: f64, alpha: f64) -> Result<f64> {
    let bound = truncation_tail_bound(radius, 1.0, alpha)?;
    Ok(bound / mean_interference(1.0, alpha)?)
}

/// Smallest radius whose [`tail_bound_ratio`] does not exceed `ratio`.
pub fn radius_for_tail_ratio(ratio: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(ratio > 0.0) {
        return Err(Error::Domain(format!("tail ratio must be positive (got {ratio})")));
    }
    // ratio = R^(3-α) α sin(3π/α) / (π (α-3))
    let k = alpha * (3.0 * PI / alpha).sin() / (PI * (alpha - 3.0));
    Ok((ratio / k).powf(1.0 / (3.0 - alpha)))
}

/// `∫₀^∞ r² / (c + r^α) dr` by adaptive quadrature.
///
/// The half-line is cut into geometric panels starting at the knee
/// `c^(1/α)`. Beyond the last panel the integrand is replaced by its
/// majorant `r^(2-α)`, integrated in closed form; the panels continue until
/// the error of that replacement, at most `c R^(3-2α) / (2α-3)`, is
/// negligible.
pub fn radial_integral(c: f64, alpha: f64) -> Result<f64> {
    radial_integral_from(0.0, c, alpha)
}

/// `∫_lo^∞ r² / (c + r^α) dr`, by the same scheme as [`radial_integral`].
pub fn radial_integral_from(lo: f64, c: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("radial integral offset must be positive (got {c})")));
    }
    if !(lo >= 0.0) || !lo.is_finite() {
        return Err(Error::Domain(format!("radial integral start must be finite and >= 0 (got {lo})")));
    }
    let integrand = |r: f64| r * r / (c + r.powf(alpha));
    let tol = Tolerance::default();

    let knee = c.powf(1.0 / alpha);
    let mut total = 0.0;
    let mut lo = lo;
    if lo < knee {
        total += integrate(integrand, lo, knee, tol)?.value;
        lo = knee;
    }
    loop {
        let replacement = lo.powf(3.0 - alpha) / (alpha - 3.0);
        let replacement_error = c * lo.powf(3.0 - 2.0 * alpha) / (2.0 * alpha - 3.0);
        if replacement_error <= 1e-15 * (total + replacement) {
            return Ok(total + replacement);
        }
        let hi = 2.0 * lo;
        total += integrate(integrand, lo, hi, tol)?.value;
        lo = hi;
    }
}

/// Laplace transform evaluated from its radial integral,
/// `exp(-4πξ ∫₀^∞ s r² / (1 + s + r^α) dr)`.
pub fn laplace_quadrature_oracle(args: LaplaceArgs) -> Result<f64> {
    args.check()?;
    let LaplaceArgs { s, xi, alpha } = args;
    if s == 0.0 || xi == 0.0 {
        return Ok(1.0);
    }
    let integral = s * radial_integral(1.0 + s, alpha)?;
    Ok((-4.0 * PI * xi * integral).exp())
}

/// Mean interference evaluated from `4πξ ∫₀^∞ r² / (1 + r^α) dr`.
pub fn mean_quadrature_oracle(xi: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_density(xi)?;
    if xi == 0.0 {
        return Ok(0.0);
    }
    Ok(4.0 * PI * xi * radial_integral(1.0, alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Frozen from a 30-digit mpmath quadrature of the radial integrals.
    const LAPLACE_S1_XI1E4_A4: f64 = 0.998_826_988_139_287_240;
    const MEAN_XI1E4_A4: f64 = 1.395_772_839_927_775_9e-3;
    const MEAN_XI1E4_A6: f64 = 6.579_736_267_392_905_7e-4;

    #[test]
    fn laplace_trivial_points() {
        assert_eq!(laplace_interference(LaplaceArgs::new(0.0, 1e-4, 4.0)).unwrap(), 1.0);
        assert_eq!(laplace_interference(LaplaceArgs::new(1.0, 0.0, 4.0)).unwrap(), 1.0);
        assert_eq!(laplace_quadrature_oracle(LaplaceArgs::new(0.0, 3.0, 4.0)).unwrap(), 1.0);
    }

    #[test]
    fn laplace_reference_value() {
        let args = LaplaceArgs::new(1.0, 1e-4, 4.0);
        assert_relative_eq!(laplace_interference(args).unwrap(), LAPLACE_S1_XI1E4_A4, max_relative = 1e-14);
        assert_relative_eq!(laplace_quadrature_oracle(args).unwrap(), LAPLACE_S1_XI1E4_A4, max_relative = 1e-12);
    }

    #[test]
    fn laplace_large_argument_matches_oracle() {
        let args = LaplaceArgs::new(8200.0, 1e-4, 4.0);
        let closed = laplace_interference(args).unwrap();
        let oracle = laplace_quadrature_oracle(args).unwrap();
        assert_relative_eq!(closed, oracle, max_relative = 1e-9);
    }

    #[test]
    fn mean_reference_values() {
        assert_eq!(mean_interference(0.0, 4.0).unwrap(), 0.0);
        assert_eq!(mean_quadrature_oracle(0.0, 4.0).unwrap(), 0.0);
        assert_relative_eq!(mean_interference(1e-4, 4.0).unwrap(), MEAN_XI1E4_A4, max_relative = 1e-14);
        assert_relative_eq!(mean_quadrature_oracle(1e-4, 4.0).unwrap(), MEAN_XI1E4_A4, max_relative = 1e-12);
        assert_relative_eq!(mean_interference(1e-4, 6.0).unwrap(), MEAN_XI1E4_A6, max_relative = 1e-14);
        assert_relative_eq!(mean_quadrature_oracle(1e-4, 6.0).unwrap(), MEAN_XI1E4_A6, max_relative = 1e-12);
        assert_eq!(
            mean_interference(2e-4, 4.0).unwrap(),
            2.0 * mean_interference(1e-4, 4.0).unwrap()
        );
    }

    #[test]
    fn alpha_at_or_below_three_is_rejected() {
        for alpha in [3.0, 2.5, f64::NAN] {
            assert!(laplace_interference(LaplaceArgs::new(1.0, 1e-4, alpha)).is_err());
            assert!(laplace_quadrature_oracle(LaplaceArgs::new(1.0, 1e-4, alpha)).is_err());
            assert!(mean_interference(1e-4, alpha).is_err());
            assert!(mean_quadrature_oracle(1e-4, alpha).is_err());
            assert!(truncation_tail_bound(200.0, 1e-4, alpha).is_err());
        }
        assert!(laplace_interference(LaplaceArgs::new(-1.0, 1e-4, 4.0)).is_err());
        assert!(mean_interference(-1e-4, 4.0).is_err());
    }

    #[test]
    fn tail_bound_reference() {
        let bound = truncation_tail_bound(200.0, 1e-4, 4.0).unwrap();
        assert_relative_eq!(bound, 4.0 * PI * 1e-4 / 200.0, max_relative = 1e-15);
        let ratio = bound / mean_interference(1e-4, 4.0).unwrap();
        assert_relative_eq!(ratio, 0.004_501_581_580_785_53, max_relative = 1e-12);
        assert_relative_eq!(tail_bound_ratio(200.0, 4.0).unwrap(), ratio, max_relative = 1e-14);

        let mut last = f64::INFINITY;
        for r in [1.0, 10.0, 1e2, 1e3, 1e6, 1e12] {
            let b = truncation_tail_bound(r, 1e-4, 4.0).unwrap();
            assert!(b < last);
            last = b;
        }
        assert!(last < 1e-14);
    }

    #[test]
    fn outer_integral_splits_full_integral() {
        for alpha in [3.5, 4.0, 6.0] {
            let inner = integrate(|r: f64| r * r / (1.0 + r.powf(alpha)), 0.0, 200.0, Tolerance::default())
                .unwrap()
                .value;
            let outer = radial_integral_from(200.0, 1.0, alpha).unwrap();
            assert_relative_eq!(inner + outer, radial_integral(1.0, alpha).unwrap(), max_relative = 1e-12);
            // Leading term of the tail.
            assert_relative_eq!(outer, 200f64.powf(3.0 - alpha) / (alpha - 3.0), max_relative = 1e-4);
        }
    }

    #[test]
    fn radius_for_ratio_inverts_ratio() {
        for alpha in [3.5, 4.0, 6.0] {
            let r = radius_for_tail_ratio(0.005, alpha).unwrap();
            assert_relative_eq!(tail_bound_ratio(r, alpha).unwrap(), 0.005, max_relative = 1e-10);
        }
    }

    proptest! {
        #[test]
        fn laplace_in_unit_interval_and_decreasing(
            s in 1e-3f64..1e4, xi in 1e-6f64..1e-2, alpha in 3.2f64..8.0, bump in 1.01f64..3.0,
        ) {
            let l = laplace_interference(LaplaceArgs::new(s, xi, alpha)).unwrap();
            let e = laplace_exponent(LaplaceArgs::new(s, xi, alpha)).unwrap();
            // Positivity holds in the log domain; exp may underflow.
            prop_assert!(e > 0.0 && e.is_finite());
            prop_assert!((0.0..=1.0).contains(&l));
            prop_assert!(e > 700.0 || l > 0.0);
            let ls = laplace_exponent(LaplaceArgs::new(s * bump, xi, alpha)).unwrap();
            let lx = laplace_exponent(LaplaceArgs::new(s, xi * bump, alpha)).unwrap();
            let base = laplace_exponent(LaplaceArgs::new(s, xi, alpha)).unwrap();
            prop_assert!(ls > base);
            prop_assert!(lx > base);
        }

        #[test]
        fn laplace_product_rule(s in 0.0f64..1e4, x1 in 0.0f64..1e-2, x2 in 0.0f64..1e-2, alpha in 3.2f64..8.0) {
            let joint = laplace_interference(LaplaceArgs::new(s, x1 + x2, alpha)).unwrap();
            let split = laplace_interference(LaplaceArgs::new(s, x1, alpha)).unwrap()
                * laplace_interference(LaplaceArgs::new(s, x2, alpha)).unwrap();
            prop_assert!((joint - split).abs() <= 1e-12 * joint);
        }
    }
}
