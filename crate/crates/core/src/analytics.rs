//! Closed-form success probability and average harvested energy.
//!
//! Both metrics are evaluated for the typical receiver of the bipolar
//! network. The receiver routes a fraction `nu` of the received power to the
//! decoder and the remaining `1 - nu` to the rectifier.
//!
//! With Rayleigh fading the success event `SINR >= beta` is an exponential
//! tail, so the probability factors into a noise term and one Laplace
//! transform per interference process:
//!
//! ```text
//! P_s = exp(-beta eta (nu sigma2 + sigma_c2) / (nu psi_1 P_t))
//!       * prod_i L_I(psi_i beta eta / psi_1, lambda_i)
//! ```
//!
//! The harvested energy is linear in the received power, so only the mean
//! interference of each process enters.

use crate::error::Result;
use crate::interference::{check_alpha, laplace_exponent, mean_interference, LaplaceArgs};
use crate::network::{sector_processes, Scheme, SectorLayout, SystemParams};

/// Success probability and average harvested energy at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub success: f64,
    /// Average harvested power, W.
    pub energy: f64,
}

/// Success probability with its factors kept apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessBreakdown {
    /// `-ln` of the noise factor.
    pub noise_exponent: f64,
    /// `-ln` of each process's Laplace factor; zero for empty processes.
    pub interference_exponents: [f64; 3],
    /// Natural log of the success probability. Always finite.
    pub ln_probability: f64,
    /// The success probability, flushed to zero below the smallest normal
    /// `f64`.
    pub probability: f64,
    /// Set when `probability` was flushed to zero.
    pub underflow: bool,
}

fn layout_for(params: &SystemParams, scheme: Scheme) -> Result<(SystemParams, SectorLayout)> {
    let p = scheme.configure(params);
    let layout = sector_processes(&p, scheme)?;
    Ok((p, layout))
}

pub fn success_breakdown(params: &SystemParams, scheme: Scheme) -> Result<SuccessBreakdown> {
    let (p, layout) = layout_for(params, scheme)?;
    check_alpha(p.alpha)?;
    let beta_eta = p.beta * p.eta();
    let psi1 = layout.direct_gain;

    let noise_exponent = beta_eta * (p.nu * p.sigma2 + p.sigma_c2) / (p.nu * psi1 * p.p_t);
    let mut interference_exponents = [0.0; 3];
    for (exp, proc) in interference_exponents.iter_mut().zip(&layout.processes) {
        if proc.density > 0.0 {
            let s = proc.gain * beta_eta / psi1;
            *exp = laplace_exponent(LaplaceArgs::new(s, proc.density, p.alpha))?;
        }
    }

    let ln_probability = -(noise_exponent + interference_exponents.iter().sum::<f64>());
    let raw = ln_probability.exp();
    let underflow = raw < f64::MIN_POSITIVE;
    Ok(SuccessBreakdown {
        noise_exponent,
        interference_exponents,
        ln_probability,
        probability: if underflow { 0.0 } else { raw },
        underflow,
    })
}

/// Probability that the typical receiver decodes, `P{SINR >= beta}`.
///
/// ```
/// use swipt_stochgeom::analytics::success_probability;
/// use swipt_stochgeom::network::{Scheme, SystemParams};
///
/// let params = SystemParams { p_t: 1.0, ..SystemParams::default() };
/// let p = success_probability(&params, Scheme::AzimuthVertical).unwrap();
/// assert!((p - 0.727_276).abs() < 1e-6);
/// ```
pub fn success_probability(params: &SystemParams, scheme: Scheme) -> Result<f64> {
    Ok(success_breakdown(params, scheme)?.probability)
}

/// Sidelobe power `gamma^k` that survives in the large-array limit.
fn sidelobe_order(scheme: Scheme) -> i32 {
    match scheme {
        Scheme::Omni => 0,
        Scheme::Azimuth => 1,
        Scheme::AzimuthVertical => 2,
    }
}

/// `ln` of the success probability as transmit power and array size grow
/// without bound: `ln L_I(beta gamma^k eta, lambda)`.
pub fn success_asymptotic_ln(params: &SystemParams, scheme: Scheme) -> Result<f64> {
    let s = params.beta * params.gamma.powi(sidelobe_order(scheme)) * params.eta();
    Ok(-laplace_exponent(LaplaceArgs::new(s, params.lambda, params.alpha))?)
}

pub fn success_asymptotic(params: &SystemParams, scheme: Scheme) -> Result<f64> {
    Ok(success_asymptotic_ln(params, scheme)?.exp())
}

/// Average harvested power, W. Noise is not harvested.
pub fn harvested_energy(params: &SystemParams, scheme: Scheme) -> Result<f64> {
    let (p, layout) = layout_for(params, scheme)?;
    check_alpha(p.alpha)?;
    let mut received = layout.direct_gain / p.eta();
    for proc in layout.active() {
        received += proc.gain * mean_interference(proc.density, p.alpha)?;
    }
    Ok(p.zeta * (1.0 - p.nu) * p.p_t * received)
}

/// Average harvested power in the large-array limit. The ambient
/// (interference) part does not depend on the scheme; for OM this is exact.
pub fn harvested_energy_asymptotic(params: &SystemParams, scheme: Scheme) -> Result<f64> {
    let direct = params.gamma.powi(-sidelobe_order(scheme)) / params.eta();
    let ambient = mean_interference(params.lambda, params.alpha)?;
    Ok(params.zeta * (1.0 - params.nu) * params.p_t * (direct + ambient))
}

pub fn metrics(params: &SystemParams, scheme: Scheme) -> Result<MetricPoint> {
    Ok(MetricPoint {
        success: success_probability(params, scheme)?,
        energy: harvested_energy(params, scheme)?,
    })
}
