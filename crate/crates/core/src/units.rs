//! Conversions between logarithmic (dB, dBm) and linear (ratio, watt) quantities.
//!
//! Everything inside the crate works in linear SI units. These helpers are
//! used once, where configuration enters the program.

use crate::error::{Error, Result};

/// Power in decibel-milliwatts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerDbm(pub f64);

/// Dimensionless ratio in decibels.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RatioDb(pub f64);

/// ```
/// use swipt_stochgeom::units::{dbm_to_watts, PowerDbm};
/// assert!((dbm_to_watts(PowerDbm(30.0)) - 1.0).abs() < 1e-15);
/// ```
pub fn dbm_to_watts(p: PowerDbm) -> f64 {
    10f64.powf(p.0 / 10.0) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> Result<PowerDbm> {
    if !(watts > 0.0) || !watts.is_finite() {
        return Err(Error::Domain(format!(
            "power must be positive and finite to express in dBm (got {watts})"
        )));
    }
    Ok(PowerDbm(10.0 * (watts * 1e3).log10()))
}

pub fn db_to_linear(r: RatioDb) -> f64 {
    10f64.powf(r.0 / 10.0)
}

pub fn linear_to_db(ratio: f64) -> Result<RatioDb> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::Domain(format!(
            "ratio must be positive and finite to express in dB (got {ratio})"
        )));
    }
    Ok(RatioDb(10.0 * ratio.log10()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn dbm_reference_points() {
        assert_relative_eq!(dbm_to_watts(PowerDbm(-10.0)), 1.0e-4, max_relative = 1e-15);
        assert_relative_eq!(dbm_to_watts(PowerDbm(0.0)), 1.0e-3, max_relative = 1e-15);
        assert_relative_eq!(dbm_to_watts(PowerDbm(30.0)), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn watts_reference_points() {
        assert_relative_eq!(watts_to_dbm(1.0e-4).unwrap().0, -10.0, max_relative = 1e-14);
        assert_relative_eq!(watts_to_dbm(1.0).unwrap().0, 30.0, max_relative = 1e-14);
        assert_relative_eq!(watts_to_dbm(1.0e-16).unwrap().0, -130.0, max_relative = 1e-14);
    }

    #[test]
    fn non_positive_watts_rejected() {
        assert!(watts_to_dbm(0.0).is_err());
        assert!(watts_to_dbm(-1.0).is_err());
        assert!(watts_to_dbm(f64::NAN).is_err());
    }

    #[test]
    fn db_reference_points() {
        assert_relative_eq!(db_to_linear(RatioDb(20.0)), 100.0, max_relative = 1e-15);
        assert_eq!(db_to_linear(RatioDb(0.0)), 1.0);
        assert_relative_eq!(db_to_linear(RatioDb(-10.0)), 0.1, max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn dbm_round_trip(x in -200.0f64..100.0) {
            let back = watts_to_dbm(dbm_to_watts(PowerDbm(x))).unwrap().0;
            prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
        }

        #[test]
        fn conversions_increasing(x in -200.0f64..100.0, dx in 1e-6f64..10.0) {
            prop_assert!(dbm_to_watts(PowerDbm(x + dx)) > dbm_to_watts(PowerDbm(x)));
            prop_assert!(db_to_linear(RatioDb(x + dx)) > db_to_linear(RatioDb(x)));
        }
    }
}
