//! Natural units built from the particle mass, the reduced Planck constant
//! and the barrier height.
//!
//! Momenta are quoted in m.u. = sqrt(2 m V0) and lengths in l.u. = hbar / sqrt(m V0).
//! With m = hbar = V0 = 1 a momentum of 1 m.u. carries exactly the barrier
//! energy, so E / V0 = (p in m.u.)^2.

use crate::barrier::BarrierSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub momentum: f64,
    pub length: f64,
}

impl Units {
    pub fn of(barrier: &BarrierSpec) -> Self {
        Units {
            momentum: (2.0 * barrier.mass * barrier.height).sqrt(),
            length: barrier.hbar / (barrier.mass * barrier.height).sqrt(),
        }
    }

    pub fn momentum_to_base(&self, p_mu: f64) -> f64 {
        p_mu * self.momentum
    }

    pub fn momentum_from_base(&self, p: f64) -> f64 {
        p / self.momentum
    }

    pub fn length_to_base(&self, d_lu: f64) -> f64 {
        d_lu * self.length
    }

    pub fn length_from_base(&self, d: f64) -> f64 {
        d / self.length
    }
}
