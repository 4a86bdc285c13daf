//! Scenario parameters and the sectorization algebra.
//!
//! Every transmitter carries an `m1 × m2` planar array: `m1` azimuth sectors,
//! each with `m2` vertical sectors. Seen from the typical receiver, the
//! interferers split by sector alignment into three independent Poisson
//! processes, each with its own density and directivity gain:
//!
//! | process | share of `λ`      | azimuth size   | vertical size  | gain                 |
//! |---------|-------------------|----------------|----------------|----------------------|
//! | 1       | `1/M`             | `2π/m1`        | `π/m2`         | `M/D`                |
//! | 2       | `(m2-1)/M`        | `2π/m1`        | `π(m2-1)/m2`   | `γM/D`               |
//! | 3       | `(m1-1)/m1`       | `2π(m1-1)/m1`  | `π`            | `γ²M/D`              |
//!
//! with `M = m1·m2` and `D = (1 + γ(m1-1))(1 + γ(m2-1))`. A horizontally
//! misaligned interferer is always vertically misaligned too.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParamError, ParamErrors, Result};

/// Full scenario in linear SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Transmit power, W.
    pub p_t: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Transmitter density, m⁻³.
    pub lambda: f64,
    /// Transmitter to receiver distance, m.
    pub d0: f64,
    /// Azimuth sectors.
    pub m1: u32,
    /// Vertical sectors.
    pub m2: u32,
    /// Sidelobe to main-lobe ratio per antenna dimension.
    pub gamma: f64,
    /// SINR threshold (linear).
    pub beta: f64,
    /// Antenna noise power, W.
    pub sigma2: f64,
    /// RF-to-baseband conversion noise power, W.
    pub sigma_c2: f64,
    /// Power-splitting fraction routed to information decoding.
    pub nu: f64,
    /// RF-to-DC conversion efficiency.
    pub zeta: f64,
}

impl Default for SystemParams {
    /// Reference scenario: -10 dBm transmit power, α = 4, λ = 10⁻⁴ m⁻³,
    /// d₀ = 3 m, a 4×4 array with γ = 0.3, a 20 dB SINR threshold,
    /// -130 dBm antenna noise, -30 dBm conversion noise, ν = 0.5 and ζ = 1.
    fn default() -> Self {
        SystemParams {
            p_t: 1e-4,
            alpha: 4.0,
            lambda: 1e-4,
            d0: 3.0,
            m1: 4,
            m2: 4,
            gamma: 0.3,
            beta: 100.0,
            sigma2: 1e-16,
            sigma_c2: 1e-6,
            nu: 0.5,
            zeta: 1.0,
        }
    }
}

fn positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}

fn nonnegative(v: f64) -> bool {
    v >= 0.0 && v.is_finite()
}

impl SystemParams {
    /// Total number of array elements.
    pub fn elements(&self) -> u32 {
        self.m1 * self.m2
    }

    pub fn eta(&self) -> f64 {
        eta(self.d0, self.alpha)
    }

    /// Checks every constraint and reports all violations at once.
    pub fn validate(&self) -> Result<&Self, ParamErrors> {
        let mut errors = Vec::new();
        if !positive(self.p_t) {
            errors.push(ParamError::TransmitPower(self.p_t));
        }
        if !(self.alpha > 3.0 && self.alpha.is_finite()) {
            errors.push(ParamError::Alpha(self.alpha));
        }
        if !nonnegative(self.lambda) {
            errors.push(ParamError::Lambda(self.lambda));
        }
        if !positive(self.d0) {
            errors.push(ParamError::Distance(self.d0));
        }
        if self.m1 == 0 || self.m2 == 0 {
            errors.push(ParamError::Sectors { m1: self.m1, m2: self.m2 });
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            errors.push(ParamError::Gamma(self.gamma));
        }
        if !positive(self.beta) {
            errors.push(ParamError::Beta(self.beta));
        }
        if !nonnegative(self.sigma2) {
            errors.push(ParamError::Sigma2(self.sigma2));
        }
        if !nonnegative(self.sigma_c2) {
            errors.push(ParamError::SigmaC2(self.sigma_c2));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            errors.push(ParamError::Nu(self.nu));
        }
        if !(self.zeta > 0.0 && self.zeta <= 1.0) {
            errors.push(ParamError::Zeta(self.zeta));
        }
        if errors.is_empty() {
            Ok(self)
        } else {
            Err(ParamErrors(errors))
        }
    }
}

/// Inverse path gain of the direct link, `1 + d0^alpha`.
pub fn eta(d0: f64, alpha: f64) -> f64 {
    1.0 + d0.powf(alpha)
}

/// Antenna configuration at the transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Single omnidirectional antenna.
    Omni,
    /// Linear array sectorized in azimuth only.
    Azimuth,
    /// Planar array sectorized in azimuth and elevation.
    AzimuthVertical,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Omni, Scheme::Azimuth, Scheme::AzimuthVertical];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Omni => "OM",
            Scheme::Azimuth => "AS",
            Scheme::AzimuthVertical => "AVS",
        }
    }

    /// Projects `params` onto this scheme's array geometry, keeping the total
    /// element count: OM uses a single element, AS lays all `m1·m2` elements
    /// out in azimuth, AVS keeps `(m1, m2)`.
    pub fn configure(self, params: &SystemParams) -> SystemParams {
        let mut p = *params;
        match self {
            Scheme::Omni => {
                p.m1 = 1;
                p.m2 = 1;
            }
            Scheme::Azimuth => {
                p.m1 = params.elements();
                p.m2 = 1;
            }
            Scheme::AzimuthVertical => {}
        }
        p
    }

    /// Whether `params` already has this scheme's geometry.
    pub fn accepts(self, params: &SystemParams) -> bool {
        match self {
            Scheme::Omni => params.m1 == 1 && params.m2 == 1,
            Scheme::Azimuth => params.m2 == 1,
            Scheme::AzimuthVertical => true,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "om" => Ok(Scheme::Omni),
            "as" => Ok(Scheme::Azimuth),
            "avs" => Ok(Scheme::AzimuthVertical),
            _ => Err(Error::Config(format!("unknown scheme {s:?} (expected om, as or avs)"))),
        }
    }
}

/// One thinned interference process as seen from the typical receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorProcess {
    /// Fraction of all transmitters that fall in this process.
    pub fraction: f64,
    /// Density, m⁻³.
    pub density: f64,
    /// Directivity gain toward the typical receiver.
    pub gain: f64,
    /// Azimuth sector size, rad. Zero for an empty process.
    pub theta: f64,
    /// Vertical sector size, rad. Zero for an empty process.
    pub phi: f64,
}

/// The three interference processes plus the direct-link gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorLayout {
    pub processes: [SectorProcess; 3],
    pub direct_gain: f64,
}

impl SectorLayout {
    /// Processes with nonzero density.
    pub fn active(&self) -> impl Iterator<Item = &SectorProcess> {
        self.processes.iter().filter(|p| p.density > 0.0)
    }

    /// Mean directivity gain of a randomly chosen interferer.
    pub fn mean_gain(&self) -> f64 {
        self.processes.iter().map(|p| p.fraction * p.gain).sum()
    }
}

/// Splits the transmitter process by sector alignment for `scheme`.
///
/// `params` must already have the scheme's geometry (see
/// [`Scheme::configure`]); OM with more than one element, or AS with
/// vertical sectors, is a configuration error.
pub fn sector_processes(params: &SystemParams, scheme: Scheme) -> Result<SectorLayout> {
    if !scheme.accepts(params) {
        return Err(Error::Config(format!(
            "scheme {scheme} does not admit m1={}, m2={}",
            params.m1, params.m2
        )));
    }
    if params.m1 == 0 || params.m2 == 0 {
        return Err(Error::Config("m1 and m2 must be at least 1".into()));
    }
    let lambda = params.lambda;
    let gamma = params.gamma;
    let empty = |gain: f64| SectorProcess {
        fraction: 0.0,
        density: 0.0,
        gain,
        theta: 0.0,
        phi: 0.0,
    };

    let layout = match scheme {
        Scheme::Omni => SectorLayout {
            processes: [
                SectorProcess {
                    fraction: 1.0,
                    density: lambda,
                    gain: 1.0,
                    theta: 2.0 * PI,
                    phi: PI,
                },
                empty(1.0),
                empty(1.0),
            ],
            direct_gain: 1.0,
        },
        Scheme::Azimuth => {
            let m = params.m1 as f64;
            let main = m / (1.0 + gamma * (m - 1.0));
            let aligned = 1.0 / m;
            let misaligned = (m - 1.0) / m;
            SectorLayout {
                processes: [
                    SectorProcess {
                        fraction: aligned,
                        density: lambda * aligned,
                        gain: main,
                        theta: 2.0 * PI * aligned,
                        phi: PI,
                    },
                    SectorProcess {
                        fraction: misaligned,
                        density: lambda * misaligned,
                        gain: gamma * main,
                        theta: 2.0 * PI * misaligned,
                        phi: PI,
                    },
                    empty(gamma * main),
                ],
                direct_gain: main,
            }
        }
        Scheme::AzimuthVertical => {
            let m1 = params.m1 as f64;
            let m2 = params.m2 as f64;
            let m = m1 * m2;
            let main = m / ((1.0 + gamma * (m1 - 1.0)) * (1.0 + gamma * (m2 - 1.0)));
            let f1 = 1.0 / m;
            let f2 = (m2 - 1.0) / m;
            let f3 = (m1 - 1.0) / m1;
            SectorLayout {
                processes: [
                    SectorProcess {
                        fraction: f1,
                        density: lambda * f1,
                        gain: main,
                        theta: 2.0 * PI / m1,
                        phi: PI / m2,
                    },
                    SectorProcess {
                        fraction: f2,
                        density: lambda * f2,
                        gain: gamma * main,
                        theta: 2.0 * PI / m1,
                        phi: PI * (m2 - 1.0) / m2,
                    },
                    SectorProcess {
                        fraction: f3,
                        density: lambda * f3,
                        gain: gamma * gamma * main,
                        theta: 2.0 * PI * (m1 - 1.0) / m1,
                        phi: PI,
                    },
                ],
                direct_gain: main,
            }
        }
    };
    Ok(layout)
}
