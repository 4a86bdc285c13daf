use std::io::Write;

use clap::ValueEnum;

use super::{energy_bias_bound, ValidateArgs};
use crate::analytics::{
    harvested_energy, harvested_energy_asymptotic, success_asymptotic_ln, success_probability,
};
use crate::error::Result;
use crate::interference::{
    laplace_interference, laplace_quadrature_oracle, mean_interference, mean_quadrature_oracle,
    LaplaceArgs,
};
use crate::montecarlo::{simulate, SimConfig};
use crate::network::{sector_processes, Scheme, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Laplace transform closed form against quadrature.
    Laplace,
    /// Mean interference closed form against quadrature.
    Mean,
    /// AVS with one element, and unit sidelobe ratio, reduce to OM.
    Collapse,
    /// Thinned densities add up to the full density.
    Conservation,
    /// Asymptotic scheme orderings.
    Ordering,
    /// Monte Carlo against closed forms.
    Montecarlo,
}

const ALL: [Suite; 6] = [
    Suite::Laplace,
    Suite::Mean,
    Suite::Collapse,
    Suite::Conservation,
    Suite::Ordering,
    Suite::Montecarlo,
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub(super) fn run(args: &ValidateArgs, env_seed: Option<u64>, out: &mut dyn Write) -> Result<i32> {
    let suites: &[Suite] = if args.suite.is_empty() { &ALL } else { &args.suite };
    let seed = args.seed.or(env_seed).unwrap_or(1);
    let mut all_pass = true;
    for &suite in suites {
        let outcome = match suite {
            Suite::Laplace => laplace()?,
            Suite::Mean => mean()?,
            Suite::Collapse => collapse()?,
            Suite::Conservation => conservation()?,
            Suite::Ordering => ordering()?,
            Suite::Montecarlo => montecarlo(args.trials, seed)?,
        };
        all_pass &= outcome.pass;
        let name = suite.to_possible_value().expect("named").get_name().to_string();
        writeln!(
            out,
            "{} {name:<13} {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        )?;
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn laplace() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for s in [1e-3, 1.0, 1e2, 1e4] {
        for xi in [1e-6, 1e-4, 1e-2] {
            for alpha in [3.5, 4.0, 5.0, 6.0] {
                let args = LaplaceArgs::new(s, xi, alpha);
                worst = worst.max(rel(laplace_interference(args)?, laplace_quadrature_oracle(args)?));
                cells += 1;
            }
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-9,
        detail: format!("{cells} cells, max rel err {worst:.2e} (tol 1e-9)"),
    })
}

fn mean() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut cells = 0;
    for xi in [1e-6, 1e-4, 1e-2] {
        for alpha in [3.5, 4.0, 5.0, 6.0] {
            worst = worst.max(rel(mean_interference(xi, alpha)?, mean_quadrature_oracle(xi, alpha)?));
            cells += 1;
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-9,
        detail: format!("{cells} cells, max rel err {worst:.2e} (tol 1e-9)"),
    })
}

fn collapse() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p_t in [0.01, 1.0] {
        let base = SystemParams {
            p_t,
            ..SystemParams::default()
        };
        let single = SystemParams { m1: 1, m2: 1, ..base };
        let flat = SystemParams { gamma: 1.0, ..base };
        let om_s = success_probability(&base, Scheme::Omni)?;
        let om_e = harvested_energy(&base, Scheme::Omni)?;
        for (p, scheme) in [
            (single, Scheme::AzimuthVertical),
            (flat, Scheme::AzimuthVertical),
            (flat, Scheme::Azimuth),
        ] {
            worst = worst.max(rel(success_probability(&p, scheme)?, om_s));
            worst = worst.max(rel(harvested_energy(&p, scheme)?, om_e));
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-12,
        detail: format!("max rel err {worst:.2e} (tol 1e-12)"),
    })
}

fn conservation() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for m1 in 1..=16 {
        for m2 in 1..=16 {
            for lambda in [1e-6, 1e-4, 1e-2] {
                let p = SystemParams {
                    m1,
                    m2,
                    lambda,
                    ..SystemParams::default()
                };
                let layout = sector_processes(&p, Scheme::AzimuthVertical)?;
                let total: f64 = layout.processes.iter().map(|q| q.density).sum();
                worst = worst.max(rel(total, lambda));
            }
        }
    }
    Ok(Outcome {
        pass: worst <= 4.0 * f64::EPSILON,
        detail: format!("768 layouts, max rel err {worst:.2e} (tol 4 ulp)"),
    })
}

fn ordering() -> Result<Outcome> {
    let mut violations = 0;
    let mut cells = 0;
    for gamma in [0.1, 0.3, 0.7] {
        for lambda in [1e-5, 1e-4, 1e-3] {
            for beta in [1.0, 10.0, 100.0] {
                for d0 in [1.0, 3.0, 10.0] {
                    for alpha in [3.5, 4.0, 6.0] {
                        let p = SystemParams {
                            gamma,
                            lambda,
                            beta,
                            d0,
                            alpha,
                            ..SystemParams::default()
                        };
                        let s: Vec<f64> = Scheme::ALL
                            .iter()
                            .map(|&sc| success_asymptotic_ln(&p, sc))
                            .collect::<Result<_>>()?;
                        let e: Vec<f64> = Scheme::ALL
                            .iter()
                            .map(|&sc| harvested_energy_asymptotic(&p, sc))
                            .collect::<Result<_>>()?;
                        if !(s[0] < s[1] && s[1] < s[2] && e[0] < e[1] && e[1] < e[2]) {
                            violations += 1;
                        }
                        cells += 1;
                    }
                }
            }
        }
    }
    Ok(Outcome {
        pass: violations == 0,
        detail: format!("{cells} cells, {violations} violations of OM < AS < AVS"),
    })
}

fn montecarlo(trials: u64, seed: u64) -> Result<Outcome> {
    let sim = SimConfig::new(trials, seed);
    let mut failures = Vec::new();
    for p_t in [0.01, 0.1, 1.0] {
        let params = SystemParams {
            p_t,
            ..SystemParams::default()
        };
        for scheme in Scheme::ALL {
            let report = simulate(&params, scheme, &sim)?;
            let success = success_probability(&params, scheme)?;
            let energy = harvested_energy(&params, scheme)?;
            let bias = energy_bias_bound(&params, scheme, &sim)?;
            if !report.success.agrees_with(success, 3.0, 0.0)
                && (report.success.mean - success).abs() > 0.01
            {
                failures.push(format!("success {scheme} p_t={p_t}"));
            }
            if !report.energy.agrees_with(energy, 3.0, bias) {
                failures.push(format!("energy {scheme} p_t={p_t}"));
            }
        }
    }
    Ok(Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("9 cells x {trials} trials (seed {seed}), within max(3 stderr, 0.01) / 3 stderr + bias")
        } else {
            format!("outside tolerance: {}", failures.join(", "))
        },
    })
}
