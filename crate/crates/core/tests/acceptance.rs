//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use pairtunnel::barrier;
use pairtunnel::oracle::GridSpec;
use pairtunnel::packets::PacketLabel;
use pairtunnel::probabilities::{self, Context};
use pairtunnel::states::{Form, Statistics};
use pairtunnel::sweep::SweepConfig;
use pairtunnel::validate;
use pairtunnel::BarrierSpec;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn c1_transmission_vs_ode() -> Outcome {
    let start = Instant::now();
    let dev = validate::transmission_scan(&BarrierSpec::default(), &validate::interior_points(0.3, 1.4, 50)).unwrap();
    let elapsed = start.elapsed();
    outcome(
        dev < 1e-6 && elapsed < Duration::from_secs(5),
        format!("max ||T|^2 - ode| = {dev:.3e} (< 1e-6), {:.3} s (< 5 s)", elapsed.as_secs_f64()),
    )
}

fn c2_symmetric_point() -> Outcome {
    let b = BarrierSpec::default();
    // E = V0 / 2  <=>  p = sqrt(m V0)
    let t2 = barrier::transmission((b.mass * b.height).sqrt(), &b).unwrap().norm_sqr();
    let exact = 1.0 / 0.7f64.cosh().powi(2);
    outcome(
        (t2 - exact).abs() < 1e-9 && (t2 - 0.634740).abs() < 5e-7,
        format!("|T|^2 = {t2:.12}, cosh^-2(0.7) = {exact:.12}"),
    )
}

fn c3_delay_equivalence() -> Outcome {
    let b = BarrierSpec::default();
    let worst = validate::delay_scan(&b, &GridSpec::default(), 0.3, 1.4, 100).unwrap();
    let mut ratios = Vec::new();
    for p in [0.5, 0.95, 1.05, 1.3] {
        ratios.push(validate::delay_convergence_ratio(p * MU, &b, 4e-2).unwrap().unwrap());
    }
    let second_order = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    outcome(
        worst < 1e-5 && second_order,
        format!("max relative error {worst:.3e} (< 1e-5); step-halving error ratios {ratios:.3?} (~4)"),
    )
}

fn sweep_contexts(cfg: &SweepConfig) -> Vec<(f64, Context)> {
    cfg.q_grid().into_iter().map(|q| (q, cfg.context_at(q).unwrap())).collect()
}

fn c4_reduction_identities() -> Outcome {
    let mut worst_reduction = 0.0f64;
    let cfg_a1 = SweepConfig { a: 1.0, ..SweepConfig::default() };
    for (_, ctx) in sweep_contexts(&cfg_a1) {
        for st in Statistics::ALL {
            let a = probabilities::value(&ctx, st, Form::ProductA);
            let m = probabilities::value(&ctx, st, Form::Mixture);
            let s = probabilities::value(&ctx, st, Form::Superposition);
            match (a, m, s) {
                (Some(a), Some(m), Some(s)) => {
                    worst_reduction = worst_reduction.max((a - m).abs()).max((a - s).abs())
                }
                (None, None, None) => {}
                _ => worst_reduction = f64::INFINITY,
            }
        }
    }
    let mut worst_mix = 0.0f64;
    let cfg = SweepConfig::default();
    let (wa, wb) = (cfg.a * cfg.a, cfg.b() * cfg.b());
    for (_, ctx) in sweep_contexts(&cfg) {
        for st in Statistics::ALL {
            let v = |f| probabilities::value(&ctx, st, f);
            if let (Some(a), Some(b), Some(m)) = (v(Form::ProductA), v(Form::ProductB), v(Form::Mixture)) {
                worst_mix = worst_mix.max((m - (wa * a + wb * b)).abs());
            }
        }
    }
    outcome(
        worst_reduction < 1e-12 && worst_mix < 1e-12,
        format!("a = 1 ladder max deviation {worst_reduction:.3e}, mixture linearity {worst_mix:.3e} (< 1e-12)"),
    )
}

fn c5_decoupling() -> Outcome {
    let cfg = SweepConfig { big_p: 0.005, ..SweepConfig::default() };
    let mut points = 0;
    let mut worst = 0.0f64;
    for (_, ctx) in sweep_contexts(&cfg) {
        let ov = &ctx.overlaps;
        let all_small = PacketLabel::ALL.iter().enumerate().all(|(i, x)| {
            PacketLabel::ALL[i + 1..].iter().all(|y| {
                ov.initial(*x, *y) < 1e-12 && ov.transmitted(*x, *y).is_some_and(|t| t < 1e-12)
            })
        });
        if !all_small {
            continue;
        }
        points += 1;
        for form in Form::ALL {
            let dis = probabilities::value(&ctx, Statistics::Distinguishable, form).unwrap();
            for st in [Statistics::Boson, Statistics::Fermion] {
                let ide = probabilities::value(&ctx, st, form).unwrap();
                worst = worst.max((ide - dis).abs());
            }
        }
    }
    outcome(
        points > 500 && worst < 1e-10,
        format!("{points} decoupled sweep points at P = 0.005 m.u., max |P_ide - P_dis| = {worst:.3e} (< 1e-10)"),
    )
}

fn c6_range_and_symmetry() -> Outcome {
    let cfg = SweepConfig::default();
    let mut out_of_range = 0;
    let mut defined = 0;
    let mut worst_sym = 0.0f64;
    for (_, ctx) in sweep_contexts(&cfg) {
        let relabeled = Context::new(ctx.scenario.relabeled(), ctx.barrier, ctx.tolerances).unwrap();
        for st in Statistics::ALL {
            for form in Form::ALL {
                let v = probabilities::value(&ctx, st, form);
                if let Some(v) = v {
                    defined += 1;
                    if !(0.0..=1.0).contains(&v) {
                        out_of_range += 1;
                    }
                }
                if st != Statistics::Distinguishable {
                    match (v, probabilities::value(&relabeled, st, form)) {
                        (Some(x), Some(y)) => worst_sym = worst_sym.max((x - y).abs()),
                        (None, None) => {}
                        _ => worst_sym = f64::INFINITY,
                    }
                }
            }
        }
    }
    outcome(
        out_of_range == 0 && worst_sym < 1e-12,
        format!(
            "{defined} defined values over 1000 q, {out_of_range} outside [0,1]; relabel max deviation {worst_sym:.3e} (< 1e-12)"
        ),
    )
}

fn c7_fermion_exclusion() -> Outcome {
    let start = Instant::now();
    let cfg = SweepConfig::default();
    let at = |q: f64, form| probabilities::value(&cfg.context_at(q).unwrap(), Statistics::Fermion, form);
    let product = at(0.95, Form::ProductA);
    let mixture = at(0.95, Form::Mixture);
    let sup = at(0.95, Form::Superposition);
    let jumps = sup.map(|s| {
        [0.95 - 1e-3, 0.95 + 1e-3]
            .map(|q| (at(q, Form::Superposition).unwrap() - s).abs())
    });
    let elapsed = start.elapsed();
    let continuous = jumps.is_some_and(|j| j.iter().all(|&d| d < 1e-2));
    outcome(
        product.is_none() && mixture.is_none() && continuous && elapsed < Duration::from_secs(1),
        format!(
            "P_ide^a = {product:?}, P_ide^mix = {mixture:?}, P_ide^sup = {sup:?}, |dP_sup| at +-1e-3 = {jumps:?} (< 1e-2), {:.3} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c8_fig1_features(gap_relative: f64) -> Outcome {
    let cfg = SweepConfig::default();
    let ctx = cfg.context_at(0.01).unwrap();
    let prod = probabilities::value(&ctx, Statistics::Distinguishable, Form::ProductA).unwrap();
    let sup = probabilities::value(&ctx, Statistics::Distinguishable, Form::Superposition).unwrap();
    let b2 = cfg.b() * cfg.b();
    let floor = 0.1 * b2 * ctx.pair_transmission(pairtunnel::Term::B);
    let checks = [prod < 1e-6, sup > floor, gap_relative < 0.15];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "q = 0.01: P_dis^a = {prod:.3e} (< 1e-6: {}), P_dis^sup = {sup:.4} (> {floor:.4}: {}); \
             max|sup - mix| / max sup = {gap_relative:.3e} (< 0.15: {})",
            checks[0], checks[1], checks[2]
        ),
    )
}

fn c9_fig3_enhancement(ratio: (f64, f64, &str)) -> Outcome {
    let frozen = read_reference();
    let (r, q, st) = ratio;
    let regression = (r - frozen["fig3_max_ide_over_dis_sup"]).abs() < 1e-10;
    outcome(
        r >= 1.5 && regression,
        format!(
            "max P_ide^sup / P_dis^sup = {r:.6} ({st} at q = {q:.3}) (>= 1.5: {}); matches frozen value: {regression}",
            r >= 1.5
        ),
    )
}

fn c10_grid_oracle() -> Outcome {
    let start = Instant::now();
    let g = GridSpec::default();
    let forms = [Form::ProductA, Form::Superposition];
    let wide = validate::grid_scan(&SweepConfig::default(), &g, &validate::grid_q_values(), &forms).unwrap();
    let narrow_cfg = SweepConfig { big_p: 0.02, ..SweepConfig::default() };
    let narrow = validate::grid_scan(&narrow_cfg, &g, &validate::grid_q_values(), &forms).unwrap();
    let elapsed = start.elapsed();
    outcome(
        wide.worst < 0.05 && narrow.worst < 0.01 && elapsed < Duration::from_secs(60),
        format!(
            "P = 0.05: worst {:.3}% ({} {} at q = {:.2}) (< 5%); P = 0.02: worst {:.3}% (< 1%); {:.2} s (< 60 s)",
            100.0 * wide.worst,
            wide.statistics,
            wide.form,
            wide.at_q,
            100.0 * narrow.worst,
            elapsed.as_secs_f64()
        ),
    )
}

fn main() {
    let cfg = SweepConfig::default();
    let gap = fig1_relative_gap(&cfg);
    let ratio = fig3_max_ratio(&cfg);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("C1 closed-form transmission vs ODE oracle", Box::new(c1_transmission_vs_ode)),
        ("C2 symmetric-point identity", Box::new(c2_symmetric_point)),
        ("C3 delay-time equivalence", Box::new(c3_delay_equivalence)),
        ("C4 reduction identities", Box::new(c4_reduction_identities)),
        ("C5 decoupling at vanishing overlap", Box::new(c5_decoupling)),
        ("C6 range and exchange symmetry", Box::new(c6_range_and_symmetry)),
        ("C7 fermion exclusion structure", Box::new(c7_fermion_exclusion)),
        ("C8 distinguishable-particle features", Box::new(move || c8_fig1_features(gap))),
        ("C9 identical vs distinguishable superposition", Box::new(move || c9_fig3_enhancement(ratio))),
        ("C10 model vs momentum-grid oracle", Box::new(c10_grid_oracle)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("[{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
