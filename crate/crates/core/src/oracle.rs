//! Independent numerical checks of the closed-form model.
//!
//! * [`transmission_ode`] integrates the stationary Schrodinger equation
//!   through the barrier with fixed-step RK4 and reads off `T` and `R`.
//! * [`delay_fd`] differentiates the unwrapped transmission phase by
//!   centred finite differences.
//! * [`joint_transmission_grid`] discretizes the two-particle state on a
//!   momentum grid, applies the exact per-mode amplitude to every mode of
//!   both particles and measures the transmitted norm.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::barrier::{self, BarrierSpec};
use crate::error::{Error, Result};
use crate::states::{Form, ScenarioSpec, Term};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Half-width of each packet's support, in units of the packet width.
    pub span: f64,
    /// Grid points across `2 * span` packet widths.
    pub points: usize,
    /// Energy step for finite differences, base units.
    pub energy_step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            span: 8.0,
            points: 512,
            energy_step: 1e-6,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < 64 || !(self.span >= 5.0) || !(self.energy_step > 0.0) {
            return Err(Error::Grid(format!(
                "need points >= 64, span >= 5, energy_step > 0 (got {}, {}, {})",
                self.points, self.span, self.energy_step
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTransmission {
    /// Wavenumber outside the barrier as used by the integrator.
    pub k0: f64,
    /// Barrier-region `k1^2` as used by the integrator.
    pub k1_squared: f64,
    pub transmission: Complex64,
    pub magnitude2: f64,
    pub reflection2: f64,
    pub steps: usize,
}

const FREE_MARGIN: f64 = 0.5;
const MAX_STEPS: usize = 1 << 20;

/// `u'' = coef * u` on a piece of constant potential, integrated from `x0`
/// over `len` (negative to go left) with `n` RK4 steps.
fn rk4_segment(state: (Complex64, Complex64), coef: f64, len: f64, n: usize) -> (Complex64, Complex64) {
    let h = len / n as f64;
    let f = |u: Complex64, du: Complex64| (du, u * coef);
    let (mut u, mut du) = state;
    for _ in 0..n {
        let (a1, b1) = f(u, du);
        let (a2, b2) = f(u + a1 * (h / 2.0), du + b1 * (h / 2.0));
        let (a3, b3) = f(u + a2 * (h / 2.0), du + b2 * (h / 2.0));
        let (a4, b4) = f(u + a3 * h, du + b3 * h);
        u += (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (h / 6.0);
        du += (b1 + b2 * 2.0 + b3 * 2.0 + b4) * (h / 6.0);
    }
    (u, du)
}

fn integrate_once(k0: f64, inside: f64, d: f64, steps_per_unit: usize) -> (Complex64, Complex64, usize) {
    let i = Complex64::i();
    let seg = |len: f64| ((len * steps_per_unit as f64).ceil() as usize).max(1);
    // Pure outgoing wave on the far side, x = d + margin.
    let x_end = d + FREE_MARGIN;
    let start = ((i * k0 * x_end).exp(), i * k0 * (i * k0 * x_end).exp());
    let free = -k0 * k0;
    let (n1, n2, n3) = (seg(FREE_MARGIN), if d > 0.0 { seg(d) } else { 0 }, seg(FREE_MARGIN));
    let mut s = rk4_segment(start, free, -FREE_MARGIN, n1);
    if d > 0.0 {
        s = rk4_segment(s, inside, -d, n2);
    }
    s = rk4_segment(s, free, -FREE_MARGIN, n3);
    // Decompose at x = -margin into incident and reflected waves.
    let x = -FREE_MARGIN;
    let (u, du) = s;
    let incident = (u + du / (i * k0)) / 2.0 * (-i * k0 * x).exp();
    let reflected = (u - du / (i * k0)) / 2.0 * (i * k0 * x).exp();
    (1.0 / incident, reflected / incident, n1 + n2 + n3)
}

/// Transmission through the barrier from direct integration of
/// `-(hbar^2 / 2m) u'' + V(x) u = E u`.
pub fn transmission_ode(p: f64, b: &BarrierSpec) -> Result<OdeTransmission> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositiveMomentum(p));
    }
    b.validate()?;
    let energy = p * p / (2.0 * b.mass);
    let scale = 2.0 * b.mass / (b.hbar * b.hbar);
    let k0 = (scale * energy).sqrt();
    let inside = scale * (b.height - energy);

    let wavenumber = k0.max(inside.abs().sqrt()).max(1.0);
    let mut per_unit = (64.0 * wavenumber).ceil() as usize;
    let (mut t, _, mut steps) = integrate_once(k0, inside, b.width, per_unit);
    let r = loop {
        if steps > MAX_STEPS {
            return Err(Error::Integration(format!(
                "step halving did not settle below 1e-8 at p = {p}"
            )));
        }
        per_unit *= 2;
        let (t2, r2, n2) = integrate_once(k0, inside, b.width, per_unit);
        let settled = (t2.norm_sqr() - t.norm_sqr()).abs() < 1e-8 && (t2 - t).norm() < 1e-8;
        t = t2;
        steps = n2;
        if settled {
            break r2;
        }
    };
    Ok(OdeTransmission {
        k0,
        k1_squared: inside,
        transmission: t,
        magnitude2: t.norm_sqr(),
        reflection2: r.norm_sqr(),
        steps,
    })
}

/// Centred finite-difference delay `hbar (Omega(E + dE) - Omega(E - dE)) / (2 dE)`.
pub fn delay_fd(p: f64, b: &BarrierSpec, g: &GridSpec) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::NonPositiveMomentum(p));
    }
    g.validate()?;
    let energy = b.energy(p);
    let momentum = |e: f64| (2.0 * b.mass * e).sqrt();
    let mut step = g.energy_step;
    for _ in 0..=20 {
        if energy - step > 0.0 {
            let lo = barrier::transmission(momentum(energy - step), b)?.arg();
            let mid = barrier::unwrap_towards(barrier::transmission(p, b)?.arg(), lo);
            let hi = barrier::unwrap_towards(barrier::transmission(momentum(energy + step), b)?.arg(), mid);
            let limit = std::f64::consts::FRAC_PI_2;
            if (mid - lo).abs() < limit && (hi - mid).abs() < limit {
                return Ok(b.hbar * (hi - lo) / (2.0 * step));
            }
        }
        step /= 2.0;
    }
    Err(Error::Integration(format!(
        "phase not resolved after 20 halvings of the energy step at p = {p}"
    )))
}

fn build_grid(s: &ScenarioSpec, g: &GridSpec, points: usize) -> Result<Vec<f64>> {
    let width = s.packets[0].width;
    let centers = s.packets.map(|p| p.center);
    let lo_c = centers.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi_c = centers.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let step = 2.0 * g.span * width / (points - 1) as f64;
    let mut lo = lo_c - g.span * width;
    if lo <= 0.0 {
        // only positive momenta reach the barrier from the left
        lo = step;
    }
    let hi = hi_c + g.span * width;
    let n = ((hi - lo) / step).ceil() as usize + 1;
    let modes: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
    for packet in &s.packets {
        let norm: f64 = modes.iter().map(|&k| packet.amplitude(k).powi(2)).sum::<f64>() * step;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::Grid(format!(
                "packet {} not resolved on the momentum grid (norm {norm})",
                packet.label
            )));
        }
    }
    Ok(modes)
}

/// Double-transmission probability of one (anti)symmetrized product term.
fn term_probability(
    f: &[Vec<f64>; 4],
    t: &[Complex64],
    s: &ScenarioSpec,
    coeffs: (Complex64, Complex64),
) -> Result<f64> {
    let sign = s.statistics.exchange().map(|e| e.sign());
    let n = t.len();
    let (ca, cb) = coeffs;
    let [fpsi, fphi, fvar, fchi] = f;
    let rows: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut norm = 0.0;
            let mut trans = 0.0;
            for j in 0..n {
                let mut ta = fpsi[i] * fphi[j];
                let mut tb = fvar[i] * fchi[j];
                if let Some(sg) = sign {
                    ta += sg * fphi[i] * fpsi[j];
                    tb += sg * fchi[i] * fvar[j];
                }
                let psi = ca * ta + cb * tb;
                let n2 = psi.norm_sqr();
                norm += n2;
                trans += n2 * (t[i] * t[j]).norm_sqr();
            }
            (norm, trans)
        })
        .collect();
    let (norm, trans) = rows
        .iter()
        .fold((0.0, 0.0), |acc, r| (acc.0 + r.0, acc.1 + r.1));
    if !(norm > 0.0) {
        return Err(Error::Undefined("initial two-particle state has zero norm"));
    }
    Ok(trans / norm)
}

/// Probability that both particles are transmitted, from mode-resolved
/// transmission of the discretized two-particle state.
pub fn joint_transmission_grid(s: &ScenarioSpec, b: &BarrierSpec, g: &GridSpec) -> Result<f64> {
    g.validate()?;
    b.validate()?;
    let mut points = g.points;
    let modes = loop {
        match build_grid(s, g, points) {
            Ok(grid) => break grid,
            Err(e) if points >= g.points * 16 => return Err(e),
            Err(_) => points *= 2,
        }
    };
    let f = s.packets.map(|p| modes.iter().map(|&k| p.amplitude(k)).collect::<Vec<_>>());
    let t: Vec<Complex64> = modes
        .iter()
        .map(|&k| barrier::transmission(k, b))
        .collect::<Result<_>>()?;

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match s.form {
        Form::ProductA => term_probability(&f, &t, s, (one, zero)),
        Form::ProductB => term_probability(&f, &t, s, (zero, one)),
        Form::Superposition => term_probability(&f, &t, s, (s.a, s.b)),
        Form::Mixture => {
            let mut total = 0.0;
            for (term, coeffs) in [(Term::A, (one, zero)), (Term::B, (zero, one))] {
                let w = s.coefficient(term).norm_sqr();
                if w > 0.0 {
                    total += w * term_probability(&f, &t, s, coeffs)?;
                }
            }
            Ok(total)
        }
    }
}
