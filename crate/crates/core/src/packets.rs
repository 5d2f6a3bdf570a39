//! Gaussian momentum packets and their pairwise overlaps.
//!
//! A packet of central momentum `p` and width `P` has mode amplitude
//! `f(k) = (2/pi)^(1/4) P^(-1/2) exp(-(k - p)^2 / P^2)`, normalized in `k`.
//! Two packets with a common width overlap as `exp(-(p_a - p_b)^2 / (2 P^2))`;
//! after the barrier the same formula is applied to effective momenta.

use std::f64::consts::PI;
use std::fmt;

use crate::barrier::{self, BarrierSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PacketLabel {
    Psi,
    Phi,
    Varphi,
    Chi,
}

impl PacketLabel {
    pub const ALL: [PacketLabel; 4] = [
        PacketLabel::Psi,
        PacketLabel::Phi,
        PacketLabel::Varphi,
        PacketLabel::Chi,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PacketLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PacketLabel::Psi => "psi",
            PacketLabel::Phi => "phi",
            PacketLabel::Varphi => "varphi",
            PacketLabel::Chi => "chi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub label: PacketLabel,
    pub center: f64,
    pub width: f64,
}

impl PacketSpec {
    pub fn new(label: PacketLabel, center: f64, width: f64) -> Result<Self> {
        if !(center > 0.0 && center.is_finite()) {
            return Err(Error::InvalidPacket(format!(
                "{label}: central momentum must be positive, got {center}"
            )));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidPacket(format!(
                "{label}: width must be positive, got {width}"
            )));
        }
        Ok(PacketSpec {
            label,
            center,
            width,
        })
    }

    /// Momentum-space amplitude `f(k)`.
    pub fn amplitude(&self, k: f64) -> f64 {
        let x = (k - self.center) / self.width;
        (2.0 / PI).powf(0.25) / self.width.sqrt() * (-x * x).exp()
    }
}

fn shared_width(a: &PacketSpec, b: &PacketSpec) -> Result<f64> {
    if a.width == b.width {
        Ok(a.width)
    } else {
        Err(Error::WidthMismatch(a.width, b.width))
    }
}

fn gaussian_overlap(pa: f64, pb: f64, width: f64) -> f64 {
    let dp = pa - pb;
    (-dp * dp / (2.0 * width * width)).exp()
}

pub fn initial_overlap(a: &PacketSpec, b: &PacketSpec) -> Result<f64> {
    let width = shared_width(a, b)?;
    Ok(gaussian_overlap(a.center, b.center, width))
}

/// Overlap of the transmitted packets, modelled as packets centred on the
/// effective momenta. A zero-width barrier leaves the overlap unchanged.
pub fn transmitted_overlap(a: &PacketSpec, b: &PacketSpec, bar: &BarrierSpec) -> Result<Option<f64>> {
    let width = shared_width(a, b)?;
    if bar.width == 0.0 {
        return Ok(Some(gaussian_overlap(a.center, b.center, width)));
    }
    let pa = barrier::effective_momentum(a.center, bar)?;
    let pb = barrier::effective_momentum(b.center, bar)?;
    Ok(match (pa, pb) {
        (Some(pa), Some(pb)) => Some(gaussian_overlap(pa, pb, width)),
        _ => None,
    })
}

/// All pairwise overlaps among the four packets, before and after the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSet {
    initial: [[f64; 4]; 4],
    transmitted: [[Option<f64>; 4]; 4],
}

impl OverlapSet {
    pub fn initial(&self, a: PacketLabel, b: PacketLabel) -> f64 {
        self.initial[a.index()][b.index()]
    }

    pub fn transmitted(&self, a: PacketLabel, b: PacketLabel) -> Option<f64> {
        self.transmitted[a.index()][b.index()]
    }

    /// Build from already evaluated effective momenta (`None` = undefined).
    pub fn from_momenta(
        packets: &[PacketSpec; 4],
        effective: &[Option<f64>; 4],
        zero_width: bool,
    ) -> Result<Self> {
        let width = packets[0].width;
        for p in &packets[1..] {
            shared_width(&packets[0], p)?;
        }
        let mut initial = [[1.0; 4]; 4];
        let mut transmitted = [[Some(1.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let o = gaussian_overlap(packets[i].center, packets[j].center, width);
                initial[i][j] = o;
                transmitted[i][j] = if zero_width {
                    Some(o)
                } else {
                    match (effective[i], effective[j]) {
                        (Some(a), Some(b)) => Some(gaussian_overlap(a, b, width)),
                        _ => None,
                    }
                };
            }
        }
        Ok(OverlapSet {
            initial,
            transmitted,
        })
    }
}

/// Packets are expected in the order psi, phi, varphi, chi.
pub fn overlap_matrix(packets: &[PacketSpec; 4], bar: &BarrierSpec) -> Result<OverlapSet> {
    let mut effective = [None; 4];
    for (slot, p) in effective.iter_mut().zip(packets) {
        *slot = barrier::effective_momentum(p.center, bar)?;
    }
    OverlapSet::from_momenta(packets, &effective, bar.width == 0.0)
}
