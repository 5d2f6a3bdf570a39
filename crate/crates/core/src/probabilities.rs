//! Probabilities of simultaneous transmission of both particles.
//!
//! Product states give `|T(p) T(q)|^2` (times the exchange ratio for
//! identical particles), mixtures are the `|a|^2`, `|b|^2` weighted sums
//! of the product values, and superpositions are the ratio of the
//! transmitted-component bracket to the initial normalization bracket.

use crate::barrier::{self, BarrierSpec, ScatterResult};
use crate::error::Result;
use crate::packets::OverlapSet;
use crate::states::{
    self, Amplitudes, Exchange, Form, NormSet, ScenarioSpec, Statistics, Term,
};
use crate::tolerance::Tolerances;

/// Everything needed to evaluate probabilities at one sweep point.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub scenario: ScenarioSpec,
    pub barrier: BarrierSpec,
    pub scatter: [ScatterResult; 4],
    pub overlaps: OverlapSet,
    pub tolerances: Tolerances,
}

impl Context {
    pub fn new(scenario: ScenarioSpec, barrier: BarrierSpec, tolerances: Tolerances) -> Result<Self> {
        barrier.validate()?;
        let mut scatter = Vec::with_capacity(4);
        for p in &scenario.packets {
            scatter.push(barrier::scatter(p.center, &barrier)?);
        }
        let scatter: [ScatterResult; 4] = scatter.try_into().expect("four packets");
        let overlaps = OverlapSet::from_momenta(
            &scenario.packets,
            &scatter.map(|s| s.p_eff),
            barrier.width == 0.0,
        )?;
        Ok(Context {
            scenario,
            barrier,
            scatter,
            overlaps,
            tolerances,
        })
    }

    pub fn amplitudes(&self) -> Amplitudes {
        self.scatter.map(|s| s.amplitude)
    }

    /// `|T(x) T(y)|^2` for the pair of `term`.
    pub fn pair_transmission(&self, term: Term) -> f64 {
        let (x, y) = term.labels();
        self.scatter[x.index()].magnitude2 * self.scatter[y.index()].magnitude2
    }

    fn weight(&self, term: Term) -> f64 {
        self.scenario.coefficient(term).norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `|T|^2` for psi, phi, varphi, chi.
    pub transmission2: [f64; 4],
    pub overlaps: OverlapSet,
    pub norms: NormSet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityReport {
    /// `None` where the model is undefined (Pauli-excluded term, bad normalization).
    pub value: Option<f64>,
    pub statistics: Statistics,
    pub form: Form,
    pub diagnostics: Diagnostics,
}

fn report(ctx: &Context, statistics: Statistics, form: Form, value: Option<f64>) -> ProbabilityReport {
    ProbabilityReport {
        value,
        statistics,
        form,
        diagnostics: Diagnostics {
            transmission2: ctx.scatter.map(|s| s.magnitude2),
            overlaps: ctx.overlaps,
            norms: NormSet::evaluate(
                &ctx.scenario,
                &ctx.overlaps,
                &ctx.amplitudes(),
                statistics,
                &ctx.tolerances,
            ),
        },
    }
}

fn form_of(term: Term) -> Form {
    match term {
        Term::A => Form::ProductA,
        Term::B => Form::ProductB,
    }
}

/// `|a|^2 x + |b|^2 y`, undefined only if an undefined term carries weight.
fn weighted_sum(ctx: &Context, a: Option<f64>, b: Option<f64>) -> Option<f64> {
    let part = |w: f64, v: Option<f64>| if w == 0.0 { Some(0.0) } else { v.map(|v| w * v) };
    Some(part(ctx.weight(Term::A), a)? + part(ctx.weight(Term::B), b)?)
}

fn ratio(numerator: Option<f64>, denominator: f64) -> Option<f64> {
    if denominator > 0.0 && denominator.is_finite() {
        numerator.map(|n| n / denominator)
    } else {
        None
    }
}

fn dis_product_value(ctx: &Context, term: Term) -> f64 {
    ctx.pair_transmission(term)
}

pub fn p_dis_product(term: Term, ctx: &Context) -> ProbabilityReport {
    let v = dis_product_value(ctx, term);
    report(ctx, Statistics::Distinguishable, form_of(term), Some(v))
}

pub fn p_dis_mixture(ctx: &Context) -> ProbabilityReport {
    let v = weighted_sum(
        ctx,
        Some(dis_product_value(ctx, Term::A)),
        Some(dis_product_value(ctx, Term::B)),
    );
    report(ctx, Statistics::Distinguishable, Form::Mixture, v)
}

pub fn p_dis_superposition(ctx: &Context) -> ProbabilityReport {
    let s = &ctx.scenario;
    let num = states::norm_t_distinguishable(s, &ctx.overlaps, &ctx.amplitudes());
    let den = states::norm_distinguishable_inv2(s, &ctx.overlaps);
    report(ctx, Statistics::Distinguishable, Form::Superposition, ratio(num, den))
}

fn ide_product_value(ctx: &Context, term: Term, exchange: Exchange) -> Option<f64> {
    let ov = &ctx.overlaps;
    if states::excluded(term, exchange, ov, &ctx.tolerances) {
        return None;
    }
    let before = states::term_bracket(term, exchange, ov);
    let after = states::term_bracket_transmitted(term, exchange, ov);
    ratio(after, before).map(|r| r * ctx.pair_transmission(term))
}

fn statistics_of(exchange: Exchange) -> Statistics {
    match exchange {
        Exchange::Boson => Statistics::Boson,
        Exchange::Fermion => Statistics::Fermion,
    }
}

pub fn p_ide_product(term: Term, exchange: Exchange, ctx: &Context) -> ProbabilityReport {
    let v = ide_product_value(ctx, term, exchange);
    report(ctx, statistics_of(exchange), form_of(term), v)
}

pub fn p_ide_mixture(exchange: Exchange, ctx: &Context) -> ProbabilityReport {
    let v = weighted_sum(
        ctx,
        ide_product_value(ctx, Term::A, exchange),
        ide_product_value(ctx, Term::B, exchange),
    );
    report(ctx, statistics_of(exchange), Form::Mixture, v)
}

pub fn p_ide_superposition(exchange: Exchange, ctx: &Context) -> ProbabilityReport {
    let s = &ctx.scenario;
    let num = states::norm_t_identical(s, &ctx.overlaps, &ctx.amplitudes(), exchange);
    let den = states::norms_identical(s, &ctx.overlaps, exchange, &ctx.tolerances).cal_n_inv2;
    report(ctx, statistics_of(exchange), Form::Superposition, ratio(num, den))
}

pub fn evaluate(ctx: &Context, statistics: Statistics, form: Form) -> ProbabilityReport {
    match (statistics.exchange(), form) {
        (None, Form::ProductA) => p_dis_product(Term::A, ctx),
        (None, Form::ProductB) => p_dis_product(Term::B, ctx),
        (None, Form::Mixture) => p_dis_mixture(ctx),
        (None, Form::Superposition) => p_dis_superposition(ctx),
        (Some(ex), Form::ProductA) => p_ide_product(Term::A, ex, ctx),
        (Some(ex), Form::ProductB) => p_ide_product(Term::B, ex, ctx),
        (Some(ex), Form::Mixture) => p_ide_mixture(ex, ctx),
        (Some(ex), Form::Superposition) => p_ide_superposition(ex, ctx),
    }
}

/// Value only, skipping the diagnostics bundle.
pub fn value(ctx: &Context, statistics: Statistics, form: Form) -> Option<f64> {
    let s = &ctx.scenario;
    let ov = &ctx.overlaps;
    match (statistics.exchange(), form) {
        (None, Form::ProductA) => Some(dis_product_value(ctx, Term::A)),
        (None, Form::ProductB) => Some(dis_product_value(ctx, Term::B)),
        (None, Form::Mixture) => weighted_sum(
            ctx,
            Some(dis_product_value(ctx, Term::A)),
            Some(dis_product_value(ctx, Term::B)),
        ),
        (None, Form::Superposition) => ratio(
            states::norm_t_distinguishable(s, ov, &ctx.amplitudes()),
            states::norm_distinguishable_inv2(s, ov),
        ),
        (Some(ex), Form::ProductA) => ide_product_value(ctx, Term::A, ex),
        (Some(ex), Form::ProductB) => ide_product_value(ctx, Term::B, ex),
        (Some(ex), Form::Mixture) => weighted_sum(
            ctx,
            ide_product_value(ctx, Term::A, ex),
            ide_product_value(ctx, Term::B, ex),
        ),
        (Some(ex), Form::Superposition) => ratio(
            states::norm_t_identical(s, ov, &ctx.amplitudes(), ex),
            states::norms_identical(s, ov, ex, &ctx.tolerances).cal_n_inv2,
        ),
    }
}
