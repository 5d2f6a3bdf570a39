use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pairtunnel::packets::PacketLabel;
use pairtunnel::plot;
use pairtunnel::probabilities;
use pairtunnel::states::{Form, Statistics};
use pairtunnel::sweep::{self, SweepConfig, SweepTable};
use pairtunnel::validate;
use pairtunnel::{Error, Result, Units};

#[derive(Parser)]
#[command(name = "pairtunnel", version, about = "Two-particle tunnelling through a rectangular barrier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep q and write a CSV table.
    Sweep(Params),
    /// Render a sweep CSV as an SVG line chart.
    Plot {
        /// Input CSV produced by `sweep`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        title: Option<String>,
    },
    /// Check the closed-form model against the numerical oracles.
    Validate(Params),
    /// Evaluate every probability at a single q.
    Point {
        /// q in m.u.
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        params: Params,
    },
}

/// Momenta in m.u., barrier width in l.u. Flags override `--config`.
#[derive(Args, Default)]
struct Params {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long = "q-min")]
    q_min: Option<String>,
    #[arg(long = "q-max")]
    q_max: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    pbar: Option<String>,
    #[arg(long)]
    qbar: Option<String>,
    #[arg(long = "bigP")]
    big_p: Option<String>,
    #[arg(long)]
    d: Option<String>,
    /// Comma-separated: dis, boson, fermion.
    #[arg(long)]
    statistics: Option<String>,
    /// Comma-separated: a, b, mix, sup.
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "tol-transmission")]
    tol_transmission: Option<String>,
    #[arg(long = "tol-delay")]
    tol_delay: Option<String>,
    #[arg(long = "tol-grid")]
    tol_grid: Option<String>,
}

impl Params {
    fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg = SweepConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let flags = [
            ("preset", &self.preset),
            ("q_min", &self.q_min),
            ("q_max", &self.q_max),
            ("steps", &self.steps),
            ("a", &self.a),
            ("p", &self.p),
            ("pbar", &self.pbar),
            ("qbar", &self.qbar),
            ("bigP", &self.big_p),
            ("d", &self.d),
            ("statistics", &self.statistics),
            ("form", &self.form),
            ("tol_transmission", &self.tol_transmission),
            ("tol_delay", &self.tol_delay),
            ("tol_grid", &self.tol_grid),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(sweep::format_value).unwrap_or_else(|| "undefined".into())
}

fn run_point(q: f64, cfg: &SweepConfig) -> Result<()> {
    if !(q > 0.0 && q < std::f64::consts::SQRT_2) {
        return Err(Error::Config(format!("q must lie in (0, sqrt(2)) m.u., got {q}")));
    }
    let ctx = cfg.context_at(q)?;
    let u = Units::of(&ctx.barrier);
    println!("q = {} m.u., a = {}, b = {}", sweep::format_value(q), cfg.a, cfg.b());
    println!("packet   p(m.u.)        |T|^2          phase          tau            p_eff(m.u.)");
    for (label, s) in PacketLabel::ALL.iter().zip(&ctx.scatter) {
        println!(
            "{:<8} {:<14} {:<14} {:<14} {:<14} {}",
            label.to_string(),
            sweep::format_value(u.momentum_from_base(s.momentum)),
            sweep::format_value(s.magnitude2),
            sweep::format_value(s.phase),
            sweep::format_value(s.tau),
            cell(s.p_eff.map(|p| u.momentum_from_base(p)))
        );
    }
    println!("overlaps (initial / transmitted)");
    for (i, x) in PacketLabel::ALL.iter().enumerate() {
        for y in &PacketLabel::ALL[i + 1..] {
            println!(
                "  <{x}|{y}> = {} / {}",
                sweep::format_value(ctx.overlaps.initial(*x, *y)),
                cell(ctx.overlaps.transmitted(*x, *y))
            );
        }
    }
    for st in Statistics::ALL {
        for form in Form::ALL {
            let r = probabilities::evaluate(&ctx, st, form);
            let name = sweep::Series { statistics: st, form }.column_name();
            println!("{name:<20} {}", cell(r.value));
        }
        let n = probabilities::evaluate(&ctx, st, Form::Superposition).diagnostics.norms;
        match st {
            Statistics::Distinguishable => {
                println!("  N = {}, N_T^-2 = {}", cell(n.n), cell(n.n_t_inv2))
            }
            _ => println!(
                "  N_a = {}, N_b = {}, calN = {}, calN_T^-2 = {}",
                cell(n.n_a),
                cell(n.n_b),
                cell(n.cal_n),
                cell(n.cal_n_t_inv2)
            ),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sweep(params) => {
            let cfg = params.resolve()?;
            let table = sweep::run_sweep(&cfg)?;
            match &cfg.out {
                Some(path) => table.write_csv(path)?,
                None => print!("{}", table.to_csv()?),
            }
            Ok(true)
        }
        Command::Plot { input, out, title } => {
            let text = std::fs::read_to_string(&input)?;
            let table = SweepTable::from_csv(&text)?;
            let title = title.unwrap_or_else(|| {
                input
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let svg = plot::render_svg(&table, &title)?;
            sweep::write_atomic(&out, &svg)?;
            Ok(true)
        }
        Command::Validate(params) => {
            let cfg = params.resolve()?;
            let report = validate::validate(&cfg)?;
            for c in &report.checks {
                println!("{c}");
            }
            Ok(report.passed())
        }
        Command::Point { q, params } => {
            let cfg = params.resolve()?;
            run_point(q, &cfg)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
