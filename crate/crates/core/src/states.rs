//! Two-particle input states and the normalization brackets of their
//! initial and doubly transmitted components.
//!
//! Term `a` pairs psi with phi, term `b` pairs varphi with chi. For
//! identical particles each term is (anti)symmetrized. Brackets are the
//! inverse squared normalization constants; probabilities are ratios of
//! brackets, so square roots are only taken for reporting.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::packets::{OverlapSet, PacketLabel, PacketSpec};
use crate::tolerance::Tolerances;

use PacketLabel::{Chi, Phi, Psi, Varphi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Distinguishable,
    Boson,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exchange {
    Boson,
    Fermion,
}

impl Exchange {
    /// `+1` for bosons, `-1` for fermions.
    pub fn sign(self) -> f64 {
        match self {
            Exchange::Boson => 1.0,
            Exchange::Fermion => -1.0,
        }
    }
}

impl Statistics {
    pub const ALL: [Statistics; 3] = [
        Statistics::Distinguishable,
        Statistics::Boson,
        Statistics::Fermion,
    ];

    pub fn exchange(self) -> Option<Exchange> {
        match self {
            Statistics::Distinguishable => None,
            Statistics::Boson => Some(Exchange::Boson),
            Statistics::Fermion => Some(Exchange::Fermion),
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Distinguishable => "dis",
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        })
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dis" | "distinguishable" => Ok(Statistics::Distinguishable),
            "boson" | "bosons" => Ok(Statistics::Boson),
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            other => Err(Error::Config(format!("unknown statistics '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    ProductA,
    ProductB,
    Mixture,
    Superposition,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::ProductA, Form::ProductB, Form::Mixture, Form::Superposition];
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::ProductA => "a",
            Form::ProductB => "b",
            Form::Mixture => "mix",
            Form::Superposition => "sup",
        })
    }
}

impl FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "product-a" | "producta" => Ok(Form::ProductA),
            "b" | "product-b" | "productb" => Ok(Form::ProductB),
            "mix" | "mixture" => Ok(Form::Mixture),
            "sup" | "superposition" => Ok(Form::Superposition),
            other => Err(Error::Config(format!("unknown form '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    A,
    B,
}

impl Term {
    pub fn labels(self) -> (PacketLabel, PacketLabel) {
        match self {
            Term::A => (Psi, Phi),
            Term::B => (Varphi, Chi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub a: Complex64,
    pub b: Complex64,
    /// psi, phi, varphi, chi in that order.
    pub packets: [PacketSpec; 4],
    pub statistics: Statistics,
    pub form: Form,
}

impl ScenarioSpec {
    pub fn new(
        a: Complex64,
        b: Complex64,
        packets: [PacketSpec; 4],
        statistics: Statistics,
        form: Form,
        tol: &Tolerances,
    ) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if !((norm - 1.0).abs() <= tol.coefficients) {
            return Err(Error::Coefficients(norm));
        }
        for (packet, label) in packets.iter().zip(PacketLabel::ALL) {
            if packet.label != label {
                return Err(Error::InvalidPacket(format!(
                    "expected packets in order psi, phi, varphi, chi; found {} at {}",
                    packet.label, label
                )));
            }
            if packet.width != packets[0].width {
                return Err(Error::WidthMismatch(packets[0].width, packet.width));
            }
        }
        Ok(ScenarioSpec {
            a,
            b,
            packets,
            statistics,
            form,
        })
    }

    /// Real coefficients and packets given by central momenta `[p, q, pbar, qbar]`
    /// sharing one width.
    pub fn from_momenta(
        a: f64,
        b: f64,
        centers: [f64; 4],
        width: f64,
        statistics: Statistics,
        form: Form,
    ) -> Result<Self> {
        let mut packets = Vec::with_capacity(4);
        for (label, c) in PacketLabel::ALL.into_iter().zip(centers) {
            packets.push(PacketSpec::new(label, c, width)?);
        }
        let packets: [PacketSpec; 4] = packets.try_into().expect("four packets");
        ScenarioSpec::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            packets,
            statistics,
            form,
            &Tolerances::default(),
        )
    }

    pub fn packet(&self, label: PacketLabel) -> &PacketSpec {
        &self.packets[label.index()]
    }

    pub fn coefficient(&self, term: Term) -> Complex64 {
        match term {
            Term::A => self.a,
            Term::B => self.b,
        }
    }

    pub fn with(&self, statistics: Statistics, form: Form) -> Self {
        ScenarioSpec {
            statistics,
            form,
            ..*self
        }
    }

    /// Exchange the particle roles: (psi, phi, varphi, chi) -> (phi, psi, chi, varphi).
    pub fn relabeled(&self) -> Self {
        let mut packets = self.packets;
        let [p0, p1, p2, p3] = self.packets;
        packets[0].center = p1.center;
        packets[1].center = p0.center;
        packets[2].center = p3.center;
        packets[3].center = p2.center;
        ScenarioSpec { packets, ..*self }
    }
}

/// Transmission amplitudes of the four packets, same order as the packets.
pub type Amplitudes = [Complex64; 4];

fn amp(amps: &Amplitudes, label: PacketLabel) -> Complex64 {
    amps[label.index()]
}

fn pair_amplitude(amps: &Amplitudes, term: Term) -> Complex64 {
    let (x, y) = term.labels();
    amp(amps, x) * amp(amps, y)
}

/// `1 + 2 Re(a* b <psi|varphi><phi|chi>)`.
pub fn norm_distinguishable_inv2(s: &ScenarioSpec, ov: &OverlapSet) -> f64 {
    let cross = ov.initial(Psi, Varphi) * ov.initial(Phi, Chi);
    1.0 + 2.0 * (s.a.conj() * s.b).re * cross
}

pub fn norm_distinguishable(s: &ScenarioSpec, ov: &OverlapSet) -> Option<f64> {
    inv_sqrt(norm_distinguishable_inv2(s, ov))
}

fn inv_sqrt(bracket: f64) -> Option<f64> {
    (bracket > 0.0 && bracket.is_finite()).then(|| bracket.powf(-0.5))
}

/// `2 +- 2 |<x|y>|^2` for the symmetrized pair of `term`.
pub fn term_bracket(term: Term, exchange: Exchange, ov: &OverlapSet) -> f64 {
    let (x, y) = term.labels();
    let o = ov.initial(x, y);
    2.0 + exchange.sign() * 2.0 * o * o
}

pub fn term_bracket_transmitted(term: Term, exchange: Exchange, ov: &OverlapSet) -> Option<f64> {
    let (x, y) = term.labels();
    ov.transmitted(x, y)
        .map(|o| 2.0 + exchange.sign() * 2.0 * o * o)
}

/// True when a fermion pair coincides and the term is Pauli-excluded.
pub fn excluded(term: Term, exchange: Exchange, ov: &OverlapSet, tol: &Tolerances) -> bool {
    let (x, y) = term.labels();
    let o = ov.initial(x, y);
    exchange == Exchange::Fermion && 1.0 - o * o < tol.exclusion
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdenticalNorms {
    pub n_a: Option<f64>,
    pub n_b: Option<f64>,
    pub cal_n: Option<f64>,
    pub cal_n_inv2: f64,
}

/// `{<psi|varphi><phi|chi> +- <psi|chi><phi|varphi>}` from either overlap table.
fn exchange_cross(exchange: Exchange, o: impl Fn(PacketLabel, PacketLabel) -> Option<f64>) -> Option<f64> {
    Some(o(Psi, Varphi)? * o(Phi, Chi)? + exchange.sign() * o(Psi, Chi)? * o(Phi, Varphi)?)
}

pub fn norms_identical(
    s: &ScenarioSpec,
    ov: &OverlapSet,
    exchange: Exchange,
    tol: &Tolerances,
) -> IdenticalNorms {
    let ba = term_bracket(Term::A, exchange, ov);
    let bb = term_bracket(Term::B, exchange, ov);
    let cross = exchange_cross(exchange, |x, y| Some(ov.initial(x, y))).expect("initial overlaps");
    let cal_n_inv2 =
        s.a.norm_sqr() * ba + s.b.norm_sqr() * bb + 4.0 * (s.a.conj() * s.b).re * cross;
    let term_norm = |term, bracket| {
        if excluded(term, exchange, ov, tol) {
            None
        } else {
            inv_sqrt(bracket)
        }
    };
    IdenticalNorms {
        n_a: term_norm(Term::A, ba),
        n_b: term_norm(Term::B, bb),
        cal_n: inv_sqrt(cal_n_inv2),
        cal_n_inv2,
    }
}

/// Interference factor `a* b conj(T(p) T(q)) T(pbar) T(qbar)`.
fn interference(s: &ScenarioSpec, amps: &Amplitudes) -> Complex64 {
    s.a.conj() * s.b * pair_amplitude(amps, Term::A).conj() * pair_amplitude(amps, Term::B)
}

/// Inverse squared norm of the doubly transmitted component for distinguishable particles.
pub fn norm_t_distinguishable(s: &ScenarioSpec, ov: &OverlapSet, amps: &Amplitudes) -> Option<f64> {
    let wa = (s.a * pair_amplitude(amps, Term::A)).norm_sqr();
    let wb = (s.b * pair_amplitude(amps, Term::B)).norm_sqr();
    let mix = interference(s, amps);
    if mix == Complex64::new(0.0, 0.0) {
        return Some(wa + wb);
    }
    let cross = ov.transmitted(Psi, Varphi)? * ov.transmitted(Phi, Chi)?;
    Some(wa + wb + 2.0 * (mix * cross).re)
}

/// Inverse squared norm of the doubly transmitted component for identical particles.
pub fn norm_t_identical(
    s: &ScenarioSpec,
    ov: &OverlapSet,
    amps: &Amplitudes,
    exchange: Exchange,
) -> Option<f64> {
    let weighted = |term: Term| -> Option<f64> {
        let w = (s.coefficient(term) * pair_amplitude(amps, term)).norm_sqr();
        if w == 0.0 {
            Some(0.0)
        } else {
            Some(w * term_bracket_transmitted(term, exchange, ov)?)
        }
    };
    let mut total = weighted(Term::A)? + weighted(Term::B)?;
    let mix = interference(s, amps);
    if mix != Complex64::new(0.0, 0.0) {
        let cross = exchange_cross(exchange, |x, y| ov.transmitted(x, y))?;
        total += 4.0 * (mix * cross).re;
    }
    Some(total)
}

/// Every normalization of one scenario; entries not applicable to the
/// statistics are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormSet {
    pub n: Option<f64>,
    pub n_a: Option<f64>,
    pub n_b: Option<f64>,
    pub cal_n: Option<f64>,
    pub n_t_inv2: Option<f64>,
    pub cal_n_t_inv2: Option<f64>,
}

impl NormSet {
    pub fn evaluate(
        s: &ScenarioSpec,
        ov: &OverlapSet,
        amps: &Amplitudes,
        statistics: Statistics,
        tol: &Tolerances,
    ) -> Self {
        match statistics.exchange() {
            None => NormSet {
                n: norm_distinguishable(s, ov),
                n_t_inv2: norm_t_distinguishable(s, ov, amps),
                ..NormSet::default()
            },
            Some(ex) => {
                let id = norms_identical(s, ov, ex, tol);
                NormSet {
                    n_a: id.n_a,
                    n_b: id.n_b,
                    cal_n: id.cal_n,
                    cal_n_t_inv2: norm_t_identical(s, ov, amps, ex),
                    ..NormSet::default()
                }
            }
        }
    }
}
