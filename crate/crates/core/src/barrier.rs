//! Single-mode scattering off a rectangular barrier of height `V0` on `[0, d]`.
//!
//! The transmission amplitude is evaluated in the reduced form
//!
//! ```text
//! T = 2 k0 exp(-i k0 d) / (2 k0 C + i (k1^2 - k0^2) S),
//! C = cosh(k1 d),  S = sinh(k1 d) / k1,
//! ```
//!
//! obtained by dividing numerator and denominator of the textbook amplitude
//! by `k1`. `C` and `S` are even in `k1`, so the expression is analytic in the
//! energy across the barrier top and the same code path serves `E < V0`
//! (real `k1`) and `E > V0` (imaginary `k1`).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this value of `|k1 d|` the ratio `sinh(k1 d) / k1` is taken from its series.
const TOP_SERIES: f64 = 1e-6;
/// Below this value of `|k1^2 d^2|` the derivative of `S` is taken from its series.
const TOP_SERIES_DERIV: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    pub height: f64,
    pub width: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl Default for BarrierSpec {
    /// Unit height, mass and hbar with a barrier 0.7 length units wide.
    fn default() -> Self {
        BarrierSpec {
            height: 1.0,
            width: 0.7,
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

impl BarrierSpec {
    pub fn new(height: f64, width: f64, mass: f64, hbar: f64) -> Result<Self> {
        let spec = BarrierSpec {
            height,
            width,
            mass,
            hbar,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_width(self, width: f64) -> Result<Self> {
        BarrierSpec { width, ..self }.validate_into()
    }

    fn validate_into(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.height > 0.0
            && self.width >= 0.0
            && self.mass > 0.0
            && self.hbar > 0.0
            && [self.height, self.width, self.mass, self.hbar]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidBarrier(format!(
                "need V0 > 0, d >= 0, m > 0, hbar > 0 (got V0={}, d={}, m={}, hbar={})",
                self.height, self.width, self.mass, self.hbar
            )))
        }
    }

    pub fn energy(&self, p: f64) -> f64 {
        p * p / (2.0 * self.mass)
    }
}

/// Wavenumbers of one incident mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub k0: f64,
    /// Real and positive below the barrier top, positive imaginary above it.
    pub k1: Complex64,
    pub energy: f64,
}

impl ModeParams {
    /// `k1^2`, real on both sides of the barrier top.
    pub fn k1_squared(&self) -> f64 {
        (self.k1 * self.k1).re
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterResult {
    pub momentum: f64,
    pub amplitude: Complex64,
    pub magnitude2: f64,
    /// Principal value of the transmission phase.
    pub phase: f64,
    pub tau: f64,
    pub delta_t: f64,
    /// `None` when the barrier has zero width or the crossing time is not positive.
    pub p_eff: Option<f64>,
}

fn check_momentum(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveMomentum(p))
    }
}

pub fn mode_params(p: f64, b: &BarrierSpec) -> Result<ModeParams> {
    check_momentum(p)?;
    let energy = b.energy(p);
    let z = 2.0 * b.mass * (b.height - energy) / (b.hbar * b.hbar);
    Ok(ModeParams {
        k0: p / b.hbar,
        k1: Complex64::new(z, 0.0).sqrt(),
        energy,
    })
}

/// `cosh(k1 d)`, `sinh(k1 d)/k1` and their derivatives with respect to `z = k1^2`.
struct EvenParts {
    c: f64,
    s: f64,
    dc_dz: f64,
    ds_dz: f64,
}

fn even_parts(k1: Complex64, d: f64) -> EvenParts {
    let z = (k1 * k1).re;
    let x = k1 * d;
    let c = x.cosh().re;
    let s = if x.norm() < TOP_SERIES {
        d * (1.0 + z * d * d / 6.0)
    } else {
        (x.sinh() / k1).re
    };
    let w = z * d * d;
    let ds_dz = if w.abs() < TOP_SERIES_DERIV {
        // d^3 * sum_{n>=1} n w^(n-1) / (2n+1)!
        let mut fact = 6.0;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for n in 1..8 {
            sum += n as f64 * pow / fact;
            pow *= w;
            fact *= ((2 * n + 2) * (2 * n + 3)) as f64;
        }
        d * d * d * sum
    } else {
        (d * c - s) / (2.0 * z)
    };
    EvenParts {
        c,
        s,
        dc_dz: d * s / 2.0,
        ds_dz,
    }
}

fn reduced_denominator(mode: &ModeParams, parts: &EvenParts) -> Complex64 {
    let k0 = mode.k0;
    Complex64::new(2.0 * k0 * parts.c, (mode.k1_squared() - k0 * k0) * parts.s)
}

pub fn transmission(p: f64, b: &BarrierSpec) -> Result<Complex64> {
    let mode = mode_params(p, b)?;
    let parts = even_parts(mode.k1, b.width);
    let den = reduced_denominator(&mode, &parts);
    let num = Complex64::from_polar(2.0 * mode.k0, -mode.k0 * b.width);
    Ok(num / den)
}

/// Shift `phase` by a multiple of 2 pi so that it lies within pi of `reference`.
pub fn unwrap_towards(phase: f64, reference: f64) -> f64 {
    phase + 2.0 * PI * ((reference - phase) / (2.0 * PI)).round()
}

/// Transmission phase. With a reference `(p_prev, phase_prev)` the result is
/// the branch closest to `phase_prev`; otherwise the principal value.
pub fn phase_unwrapped(p: f64, b: &BarrierSpec, reference: Option<(f64, f64)>) -> Result<f64> {
    let principal = transmission(p, b)?.arg();
    Ok(match reference {
        Some((_, prev)) => unwrap_towards(principal, prev),
        None => principal,
    })
}

/// Unwrapped phase along a sequence of momenta, starting from the principal value.
pub fn unwrapped_phases(momenta: &[f64], b: &BarrierSpec) -> Result<Vec<f64>> {
    let mut out: Vec<f64> = Vec::with_capacity(momenta.len());
    let mut reference = None;
    for &p in momenta {
        let phase = phase_unwrapped(p, b, reference)?;
        reference = Some((p, phase));
        out.push(phase);
    }
    Ok(out)
}

/// Wigner-Smith delay `hbar * dOmega/dE = hbar * Im(T'(E) / T(E))`.
pub fn delay_time(p: f64, b: &BarrierSpec) -> Result<f64> {
    let mode = mode_params(p, b)?;
    let d = b.width;
    let h2 = b.hbar * b.hbar;
    let parts = even_parts(mode.k1, d);
    let den = reduced_denominator(&mode, &parts);
    if den.norm() == 0.0 {
        return Err(Error::Undefined("transmission amplitude has a pole"));
    }

    let k0 = mode.k0;
    let dk0 = b.mass / (h2 * k0);
    let dz = -2.0 * b.mass / h2;
    let z = mode.k1_squared();
    let dden = Complex64::new(
        2.0 * dk0 * parts.c + 2.0 * k0 * parts.dc_dz * dz,
        (dz - 2.0 * k0 * dk0) * parts.s + (z - k0 * k0) * parts.ds_dz * dz,
    );
    let tau = b.hbar * (-d * dk0 - (dden / den).im);
    if tau.is_finite() {
        Ok(tau)
    } else {
        Err(Error::Undefined("delay time"))
    }
}

fn effective_from_delay(p: f64, tau: f64, b: &BarrierSpec) -> (f64, Option<f64>) {
    let d = b.width;
    let delta_t = d * b.mass / p + tau;
    let p_eff = if d > 0.0 && delta_t > 0.0 {
        Some(b.mass * d / delta_t)
    } else {
        None
    };
    (delta_t, p_eff)
}

/// Momentum of a free packet that crosses the barrier width in the free
/// flight time plus the Wigner-Smith delay.
pub fn effective_momentum(p: f64, b: &BarrierSpec) -> Result<Option<f64>> {
    let tau = delay_time(p, b)?;
    Ok(effective_from_delay(p, tau, b).1)
}

pub fn scatter(p: f64, b: &BarrierSpec) -> Result<ScatterResult> {
    let amplitude = transmission(p, b)?;
    let tau = delay_time(p, b)?;
    let (delta_t, p_eff) = effective_from_delay(p, tau, b);
    Ok(ScatterResult {
        momentum: p,
        amplitude,
        magnitude2: amplitude.norm_sqr(),
        phase: amplitude.arg(),
        tau,
        delta_t,
        p_eff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MU: f64 = std::f64::consts::SQRT_2;

    fn closed_form_modulus(p: f64, b: &BarrierSpec) -> f64 {
        let m = mode_params(p, b).unwrap();
        let (k0, k1) = (m.k0, m.k1.re);
        let num = 4.0 * k0 * k0 * k1 * k1;
        let sh = (k1 * b.width).sinh();
        num / (num + (k0 * k0 + k1 * k1).powi(2) * sh * sh)
    }

    #[test]
    fn barrier_top_has_zero_k1() {
        let m = mode_params(MU, &BarrierSpec::default()).unwrap();
        assert!(m.k1.norm() < 1e-7);
        assert!((m.energy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_point() {
        let b = BarrierSpec::default();
        let m = mode_params(1.0, &b).unwrap();
        assert!((m.k0 - m.k1.re).abs() < 1e-15);
        let t = transmission(1.0, &b).unwrap();
        let expected = 1.0 / 0.7f64.cosh().powi(2);
        assert!((t.norm_sqr() - expected).abs() < 1e-12);
        assert!((t.norm_sqr() - 0.634740).abs() < 1e-6);
    }

    #[test]
    fn above_barrier_k1_is_imaginary() {
        let m = mode_params(1.2 * MU, &BarrierSpec::default()).unwrap();
        assert_eq!(m.k1.re, 0.0);
        assert!(m.k1.im > 0.0);
    }

    #[test]
    fn non_positive_momentum_rejected() {
        let b = BarrierSpec::default();
        assert_eq!(mode_params(0.0, &b), Err(Error::NonPositiveMomentum(0.0)));
        assert!(transmission(-1.0, &b).is_err());
        assert!(delay_time(0.0, &b).is_err());
        assert!(scatter(f64::NAN, &b).is_err());
    }

    #[test]
    fn invalid_barrier_rejected() {
        assert!(BarrierSpec::new(0.0, 0.7, 1.0, 1.0).is_err());
        assert!(BarrierSpec::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(BarrierSpec::new(1.0, 0.7, 0.0, 1.0).is_err());
        assert!(BarrierSpec::new(1.0, 0.7, 1.0, -1.0).is_err());
        assert!(BarrierSpec::new(1.0, 0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn zero_width_is_transparent() {
        let b = BarrierSpec::default().with_width(0.0).unwrap();
        for &p in &[0.1, 1.0, MU, 1.8] {
            let s = scatter(p, &b).unwrap();
            assert!((s.amplitude - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            assert_eq!(s.phase, 0.0);
            assert_eq!(s.tau, 0.0);
            assert_eq!(s.p_eff, None);
        }
    }

    #[test]
    fn modulus_matches_textbook_form_below_top() {
        let b = BarrierSpec::default();
        for i in 1..140 {
            let p = i as f64 * 0.01;
            let t = transmission(p, &b).unwrap();
            assert!((t.norm_sqr() - closed_form_modulus(p, &b)).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn phase_agrees_with_arctangent_form_mod_pi() {
        let b = BarrierSpec::default();
        let d = b.width;
        for i in 1..140 {
            let p = i as f64 * 0.01;
            let m = mode_params(p, &b).unwrap();
            let (k0, k1) = (m.k0, m.k1.re);
            let diff = k1 * k1 - k0 * k0;
            let (sh, ch) = ((k1 * d).sinh(), (k1 * d).cosh());
            let num = -diff * (k0 * d).cos() * sh - 2.0 * k0 * k1 * (k0 * d).sin() * ch;
            let den = 2.0 * k0 * k1 * (k0 * d).cos() * ch - diff * (k0 * d).sin() * sh;
            let omega = phase_unwrapped(p, &b, None).unwrap();
            let r = (omega - (num / den).atan()) / PI;
            assert!((r - r.round()).abs() < 1e-10, "p = {p}, r = {r}");
        }
    }

    #[test]
    fn continuous_through_barrier_top() {
        let b = BarrierSpec::default();
        let top = transmission(MU, &b).unwrap();
        for &eps in &[1e-7, 1e-9, 1e-12] {
            let lo = transmission(MU - eps, &b).unwrap();
            let hi = transmission(MU + eps, &b).unwrap();
            assert!((lo - top).norm() < 1e-6);
            assert!((hi - top).norm() < 1e-6);
        }
        let t_lo = delay_time(MU * (1.0 - 1e-9), &b).unwrap();
        let t_hi = delay_time(MU * (1.0 + 1e-9), &b).unwrap();
        assert!((t_lo - t_hi).abs() < 1e-6);
    }

    #[test]
    fn unwrapped_sweep_has_no_jumps() {
        let b = BarrierSpec::default();
        let ps: Vec<f64> = (0..=900).map(|i| (0.5 + i as f64 * 1e-3) * MU).collect();
        let phases = unwrapped_phases(&ps, &b).unwrap();
        let max_jump = phases
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max);
        assert!(max_jump < PI);
        // Long barriers wrap the principal value several times.
        let wide = b.with_width(20.0).unwrap();
        let phases = unwrapped_phases(&ps, &wide).unwrap();
        assert!(phases.windows(2).all(|w| (w[1] - w[0]).abs() < PI));
        let lo = phases.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = phases.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(hi - lo > 2.0 * PI);
    }

    #[test]
    fn reference_selects_branch() {
        let b = BarrierSpec::default();
        let principal = phase_unwrapped(1.0, &b, None).unwrap();
        let shifted = phase_unwrapped(1.0, &b, Some((0.99, principal + 4.0 * PI + 0.1))).unwrap();
        assert!((shifted - principal - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn free_flight_identity() {
        let b = BarrierSpec::default();
        let (dt, pe) = effective_from_delay(0.9, 0.0, &b);
        assert!((dt - 0.7 / 0.9).abs() < 1e-15);
        assert!((pe.unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(effective_from_delay(0.9, -1.0, &b).1, None);
    }

    #[test]
    fn delay_matches_numerical_derivative_across_top() {
        let b = BarrierSpec::default();
        for &p_mu in &[0.2, 0.95, 0.999, 1.0, 1.001, 1.05, 1.3] {
            let p = p_mu * MU;
            let e = b.energy(p);
            let h = 1e-5;
            let tp = transmission((2.0 * (e + h)).sqrt(), &b).unwrap();
            let tm = transmission((2.0 * (e - h)).sqrt(), &b).unwrap();
            let fd = (tp / tm).arg() / (2.0 * h);
            let tau = delay_time(p, &b).unwrap();
            assert!((fd - tau).abs() < 1e-6 * tau.abs().max(1.0), "p = {p_mu}: {fd} vs {tau}");
        }
    }

    #[test]
    fn scatter_bundle_is_consistent() {
        let b = BarrierSpec::default();
        let s = scatter(1.0, &b).unwrap();
        assert!((s.magnitude2 - 1.0 / 0.7f64.cosh().powi(2)).abs() < 1e-12);
        let s = scatter(0.95 * MU, &b).unwrap();
        let rebuilt = Complex64::from_polar(s.magnitude2.sqrt(), s.phase);
        assert!((rebuilt - s.amplitude).norm() < 1e-12);
        assert!((s.delta_t - (0.7 / s.momentum + s.tau)).abs() < 1e-15);
        assert!((s.p_eff.unwrap() - 0.7 / s.delta_t).abs() < 1e-15);
    }
}
