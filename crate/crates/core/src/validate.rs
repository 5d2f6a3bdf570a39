//! Closed form vs oracle checks behind the `validate` subcommand.

use std::fmt;

use crate::barrier::{self, BarrierSpec};
use crate::error::Result;
use crate::oracle::{self, GridSpec};
use crate::probabilities::{self, Context};
use crate::states::{Form, Statistics};
use crate::sweep::SweepConfig;
use crate::units::Units;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max deviation {:.3e} (tolerance {:.1e}){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(" [{}]", self.detail)
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, measured: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name,
        measured,
        tolerance,
        passed: measured <= tolerance,
        detail,
    }
}

/// `n` momenta strictly inside `(lo, hi)`, in m.u.
pub fn interior_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (i as f64 + 0.5) * (hi - lo) / n as f64).collect()
}

/// Largest `|T|^2` deviation between the closed form and the integrator.
pub fn transmission_scan(b: &BarrierSpec, momenta_mu: &[f64]) -> Result<f64> {
    let u = Units::of(b);
    let mut worst = 0.0f64;
    for &p in momenta_mu {
        let p = u.momentum_to_base(p);
        let closed = barrier::transmission(p, b)?.norm_sqr();
        let ode = oracle::transmission_ode(p, b)?.magnitude2;
        worst = worst.max((closed - ode).abs());
    }
    Ok(worst)
}

/// Largest relative delay deviation over `n` energies evenly spread
/// between the energies of `lo` and `hi` (m.u.).
pub fn delay_scan(b: &BarrierSpec, g: &GridSpec, lo: f64, hi: f64, n: usize) -> Result<f64> {
    let u = Units::of(b);
    let e_lo = b.energy(u.momentum_to_base(lo));
    let e_hi = b.energy(u.momentum_to_base(hi));
    let mut worst = 0.0f64;
    for i in 0..n {
        let e = e_lo + (e_hi - e_lo) * i as f64 / (n - 1) as f64;
        let p = (2.0 * b.mass * e).sqrt();
        let analytic = barrier::delay_time(p, b)?;
        let fd = oracle::delay_fd(p, b, g)?;
        let diff = (analytic - fd).abs();
        if diff > 0.0 {
            worst = worst.max(diff / analytic.abs());
        }
    }
    Ok(worst)
}

/// Ratio of finite-difference errors at steps `h` and `h / 2`; about 4
/// for a second-order scheme. `None` when both errors vanish.
pub fn delay_convergence_ratio(p: f64, b: &BarrierSpec, h: f64) -> Result<Option<f64>> {
    let tau = barrier::delay_time(p, b)?;
    let err = |step: f64| -> Result<f64> {
        let g = GridSpec {
            energy_step: step,
            ..GridSpec::default()
        };
        Ok((oracle::delay_fd(p, b, &g)? - tau).abs())
    };
    let (e1, e2) = (err(h)?, err(h / 2.0)?);
    Ok(if e1 < 1e-14 && e2 < 1e-14 {
        None
    } else {
        Some(e1 / e2)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridComparison {
    pub worst: f64,
    pub at_q: f64,
    pub statistics: Statistics,
    pub form: Form,
}

/// Model vs momentum-grid probabilities over `q_values` (m.u.) for the
/// given forms and all statistics. Points where the model is undefined are skipped.
pub fn grid_scan(cfg: &SweepConfig, g: &GridSpec, q_values: &[f64], forms: &[Form]) -> Result<GridComparison> {
    let b = cfg.barrier()?;
    let mut out = GridComparison {
        worst: 0.0,
        at_q: f64::NAN,
        statistics: Statistics::Distinguishable,
        form: Form::ProductA,
    };
    for &q in q_values {
        for st in Statistics::ALL {
            for &form in forms {
                let scenario = cfg.scenario_at(q, st, form)?;
                let ctx = Context::new(scenario, b, cfg.tolerances)?;
                let Some(model) = probabilities::value(&ctx, st, form) else {
                    continue;
                };
                let grid = oracle::joint_transmission_grid(&scenario, &b, g)?;
                let rel = (model - grid).abs() / grid.abs();
                if rel > out.worst || out.at_q.is_nan() {
                    out = GridComparison {
                        worst: rel,
                        at_q: q,
                        statistics: st,
                        form,
                    };
                }
            }
        }
    }
    Ok(out)
}

/// q values 0.5, 0.55, ..., 1.3 m.u.
pub fn grid_q_values() -> Vec<f64> {
    (0..=16).map(|i| 0.5 + 0.05 * i as f64).collect()
}

pub fn validate(cfg: &SweepConfig) -> Result<ValidationReport> {
    cfg.validate()?;
    let b = cfg.barrier()?;
    let g = GridSpec::default();
    let tol = cfg.validation;
    let mut checks = Vec::new();

    let t = transmission_scan(&b, &interior_points(0.3, 1.4, 50))?;
    checks.push(check(
        "transmission: closed form vs integrator, 50 momenta in (0.3, 1.4) m.u.",
        t,
        tol.transmission,
        String::new(),
    ));

    let d = delay_scan(&b, &g, 0.3, 1.4, 100)?;
    let u = Units::of(&b);
    let ratio = delay_convergence_ratio(u.momentum_to_base(cfg.p), &b, 4e-2)?;
    let mut delay = check(
        "delay: analytic vs finite difference, 100 energies",
        d,
        tol.delay,
        match ratio {
            Some(r) => format!("step-halving error ratio {r:.3}"),
            None => "exact agreement".into(),
        },
    );
    if let Some(r) = ratio {
        delay.passed &= (3.5..=4.5).contains(&r);
    }
    checks.push(delay);

    let gc = grid_scan(cfg, &g, &grid_q_values(), &[Form::ProductA, Form::Superposition])?;
    checks.push(check(
        "probabilities: model vs momentum grid, q in [0.5, 1.3] m.u.",
        gc.worst,
        tol.grid,
        format!("worst at q = {:.2}, {} {}", gc.at_q, gc.statistics, gc.form),
    ));

    Ok(ValidationReport { checks })
}
