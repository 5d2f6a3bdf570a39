#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use pairtunnel::barrier;
use pairtunnel::packets::PacketLabel;
use pairtunnel::probabilities;
use pairtunnel::states::{self, Form, Statistics};
use pairtunnel::sweep::{self, Preset, SweepConfig, SweepTable};
use pairtunnel::{BarrierSpec, Units};

pub const MU: f64 = std::f64::consts::SQRT_2;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn updating() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some()
}

/// Largest `P_ide^sup / P_dis^sup` over the default sweep, with its location.
pub fn fig3_max_ratio(cfg: &SweepConfig) -> (f64, f64, &'static str) {
    let t = sweep::run_sweep(&SweepConfig { preset: Some(Preset::Fig3), ..cfg.clone() }).unwrap();
    let dis = t.column("P_dis_sup").unwrap();
    let mut best = (0.0, f64::NAN, "");
    for (name, tag) in [("P_ide_sup_boson", "boson"), ("P_ide_sup_fermion", "fermion")] {
        for (i, v) in t.column(name).unwrap().iter().enumerate() {
            if let (Some(v), Some(d)) = (v, dis[i]) {
                if v / d > best.0 {
                    best = (v / d, t.q[i], tag);
                }
            }
        }
    }
    best
}

/// `max |P_dis^sup - P_dis^mix| / max P_dis^sup` over the default sweep.
pub fn fig1_relative_gap(cfg: &SweepConfig) -> f64 {
    let t = sweep::run_sweep(&SweepConfig { preset: Some(Preset::Fig1), ..cfg.clone() }).unwrap();
    let sup = t.column("P_dis_sup").unwrap();
    let mix = t.column("P_dis_mix").unwrap();
    let gap = sup
        .iter()
        .zip(&mix)
        .map(|(s, m)| (s.unwrap() - m.unwrap()).abs())
        .fold(0.0, f64::max);
    let peak = sup.iter().map(|s| s.unwrap()).fold(0.0, f64::max);
    gap / peak
}

/// Reference quantities at the default parameter point.
pub fn reference_values() -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let b = BarrierSpec::default();
    let u = Units::of(&b);
    let mode = barrier::mode_params(0.95 * MU, &b).unwrap();
    out.insert("mode_k0_p0.95".into(), mode.k0);
    out.insert("mode_k1_p0.95".into(), mode.k1.re);
    for (name, p) in [("0.95", 0.95), ("1.00", 1.0), ("1.05", 1.05)] {
        let s = barrier::scatter(p * MU, &b).unwrap();
        out.insert(format!("T2_p{name}"), s.magnitude2);
        out.insert(format!("phase_p{name}"), s.phase);
        out.insert(format!("tau_p{name}"), s.tau);
        out.insert(format!("p_eff_mu_p{name}"), u.momentum_from_base(s.p_eff.unwrap()));
    }

    let cfg = SweepConfig::default();
    let ctx = cfg.context_at(1.0).unwrap();
    for (i, x) in PacketLabel::ALL.iter().enumerate() {
        for y in &PacketLabel::ALL[i + 1..] {
            out.insert(format!("overlap_{x}_{y}_q1.00"), ctx.overlaps.initial(*x, *y));
            out.insert(
                format!("overlap_T_{x}_{y}_q1.00"),
                ctx.overlaps.transmitted(*x, *y).unwrap(),
            );
        }
    }
    let amps = ctx.amplitudes();
    out.insert(
        "N_T_inv2_q1.00".into(),
        states::norm_t_distinguishable(&ctx.scenario, &ctx.overlaps, &amps).unwrap(),
    );
    for ex in [states::Exchange::Boson, states::Exchange::Fermion] {
        let name = format!("calN_T_inv2_{:?}_q1.00", ex).to_lowercase();
        out.insert(name, states::norm_t_identical(&ctx.scenario, &ctx.overlaps, &amps, ex).unwrap());
    }
    for st in Statistics::ALL {
        for form in Form::ALL {
            let name = sweep::Series { statistics: st, form }.column_name();
            if let Some(v) = probabilities::value(&ctx, st, form) {
                out.insert(format!("{name}_q1.00"), v);
            }
        }
    }
    let (ratio, at, _) = fig3_max_ratio(&cfg);
    out.insert("fig3_max_ide_over_dis_sup".into(), ratio);
    out.insert("fig3_max_ide_over_dis_sup_at_q".into(), at);
    out.insert("fig1_max_sup_mix_gap_relative".into(), fig1_relative_gap(&cfg));
    out
}

pub fn write_reference(values: &BTreeMap<String, f64>) -> String {
    let mut s = String::from("# regression snapshot at the default parameter point (m.u. / l.u.)\n");
    for (k, v) in values {
        s.push_str(&format!("{k} = {v:.17e}\n"));
    }
    s
}

pub fn read_reference() -> BTreeMap<String, f64> {
    let text = std::fs::read_to_string(golden_dir().join("reference_point.txt"))
        .expect("golden reference file; regenerate with UPDATE_GOLDEN=1");
    pairtunnel::config::parse(&text)
        .unwrap()
        .into_iter()
        .map(|(k, v)| (k, v.parse().unwrap()))
        .collect()
}

pub fn preset_table(preset: Preset) -> SweepTable {
    let cfg = SweepConfig {
        steps: 140,
        ..SweepConfig::preset(preset)
    };
    sweep::run_sweep(&cfg).unwrap()
}
