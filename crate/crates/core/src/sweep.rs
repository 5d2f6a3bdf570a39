//! Momentum sweeps over `q`, figure presets and CSV tables.
//!
//! User-facing momenta are in m.u. and the barrier width in l.u.; the
//! model runs in base units with `m = hbar = V0 = 1`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::barrier::BarrierSpec;
use crate::config;
use crate::error::{Error, Result};
use crate::probabilities::{self, Context};
use crate::states::{Form, ScenarioSpec, Statistics};
use crate::tolerance::Tolerances;
use crate::units::Units;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    pub fn series(self) -> Vec<Series> {
        use Form::*;
        use Statistics::*;
        let s = |statistics, form| Series { statistics, form };
        match self {
            Preset::Fig1 => vec![
                s(Distinguishable, ProductA),
                s(Distinguishable, Mixture),
                s(Distinguishable, Superposition),
            ],
            Preset::Fig2 => vec![
                s(Distinguishable, ProductA),
                s(Boson, ProductA),
                s(Fermion, ProductA),
            ],
            Preset::Fig3 => vec![
                s(Distinguishable, Superposition),
                s(Boson, Superposition),
                s(Fermion, Superposition),
            ],
            Preset::Fig4 => vec![
                s(Boson, Mixture),
                s(Boson, Superposition),
                s(Fermion, Mixture),
                s(Fermion, Superposition),
            ],
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Preset::Fig1 => "Double transmission, distinguishable particles",
            Preset::Fig2 => "Double transmission of product states",
            Preset::Fig3 => "Double transmission of superpositions",
            Preset::Fig4 => "Mixture vs superposition of identical particles",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Preset::Fig1 => 1,
            Preset::Fig2 => 2,
            Preset::Fig3 => 3,
            Preset::Fig4 => 4,
        };
        write!(f, "fig{n}")
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }
}

/// One probability column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Series {
    pub statistics: Statistics,
    pub form: Form,
}

impl Series {
    pub fn column_name(&self) -> String {
        match self.statistics {
            Statistics::Distinguishable => format!("P_dis_{}", self.form),
            st => format!("P_ide_{}_{}", self.form, st),
        }
    }

    pub fn from_column_name(name: &str) -> Option<Self> {
        let rest = name.strip_prefix("P_")?;
        if let Some(form) = rest.strip_prefix("dis_") {
            return Some(Series {
                statistics: Statistics::Distinguishable,
                form: form.parse().ok()?,
            });
        }
        let (form, st) = rest.strip_prefix("ide_")?.split_once('_')?;
        Some(Series {
            statistics: st.parse().ok()?,
            form: form.parse().ok()?,
        })
    }
}

/// Thresholds for the `validate` checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationTolerances {
    /// Absolute `|T|^2` deviation, closed form vs integrator.
    pub transmission: f64,
    /// Relative delay deviation, analytic vs finite difference.
    pub delay: f64,
    /// Relative probability deviation, model vs momentum grid.
    pub grid: f64,
}

impl Default for ValidationTolerances {
    fn default() -> Self {
        ValidationTolerances {
            transmission: 1e-6,
            delay: 1e-5,
            grid: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub q_min: f64,
    pub q_max: f64,
    /// Number of q values (rows).
    pub steps: usize,
    pub p: f64,
    pub pbar: f64,
    pub qbar: f64,
    /// Common packet width `P`.
    pub big_p: f64,
    /// Barrier width in l.u.
    pub d: f64,
    /// Coefficient of term a; `b = sqrt(1 - a^2)`.
    pub a: f64,
    pub preset: Option<Preset>,
    pub statistics: Vec<Statistics>,
    pub forms: Vec<Form>,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub validation: ValidationTolerances,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            q_min: 0.01,
            q_max: 1.40,
            steps: 1000,
            p: 0.95,
            pbar: 1.05,
            qbar: 1.00,
            big_p: 0.05,
            d: 0.7,
            a: std::f64::consts::FRAC_1_SQRT_2,
            preset: None,
            statistics: Statistics::ALL.to_vec(),
            forms: Form::ALL.to_vec(),
            out: None,
            tolerances: Tolerances::default(),
            validation: ValidationTolerances::default(),
        }
    }
}

fn parse_list<T: FromStr<Err = Error>>(value: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Config("empty selection list".into()));
    }
    Ok(items)
}

impl SweepConfig {
    pub fn preset(preset: Preset) -> Self {
        SweepConfig {
            preset: Some(preset),
            ..SweepConfig::default()
        }
    }

    /// Apply one configuration key. Keys mirror the command-line flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| config::parse_f64(key, v);
        match key {
            "q_min" => self.q_min = num(value)?,
            "q_max" => self.q_max = num(value)?,
            "steps" => self.steps = config::parse_usize(key, value)?,
            "p" => self.p = num(value)?,
            "pbar" => self.pbar = num(value)?,
            "qbar" => self.qbar = num(value)?,
            "bigP" => self.big_p = num(value)?,
            "d" => self.d = num(value)?,
            "a" => self.a = num(value)?,
            "preset" => self.preset = Some(value.parse()?),
            "statistics" => self.statistics = parse_list(value)?,
            "form" => self.forms = parse_list(value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "tol_exclusion" => self.tolerances.exclusion = num(value)?,
            "tol_coefficients" => self.tolerances.coefficients = num(value)?,
            "tol_transmission" => self.validation.transmission = num(value)?,
            "tol_delay" => self.validation.delay = num(value)?,
            "tol_grid" => self.validation.grid = num(value)?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        for (k, v) in config::load(path)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let top = std::f64::consts::SQRT_2;
        if !(0.0 < self.q_min && self.q_min < self.q_max && self.q_max < top) {
            return bad(format!(
                "need 0 < q_min < q_max < sqrt(2) m.u. (got {} .. {})",
                self.q_min, self.q_max
            ));
        }
        if self.steps < 2 {
            return bad(format!("steps must be at least 2 (got {})", self.steps));
        }
        for (name, v) in [("p", self.p), ("pbar", self.pbar), ("qbar", self.qbar), ("bigP", self.big_p)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive (got {v})"));
            }
        }
        if !(self.d >= 0.0 && self.d.is_finite()) {
            return bad(format!("d must be non-negative (got {})", self.d));
        }
        if !(0.0..=1.0).contains(&self.a) {
            return bad(format!("a must lie in [0, 1] (got {})", self.a));
        }
        if !(self.tolerances.exclusion >= 0.0 && self.tolerances.coefficients >= 0.0) {
            return bad("model tolerances must be non-negative".into());
        }
        Ok(())
    }

    pub fn series(&self) -> Vec<Series> {
        match self.preset {
            Some(p) => p.series(),
            None => self
                .statistics
                .iter()
                .flat_map(|&statistics| self.forms.iter().map(move |&form| Series { statistics, form }))
                .collect(),
        }
    }

    pub fn barrier(&self) -> Result<BarrierSpec> {
        let base = BarrierSpec::default();
        let d = Units::of(&base).length_to_base(self.d);
        base.with_width(d)
    }

    pub fn b(&self) -> f64 {
        (1.0 - self.a * self.a).max(0.0).sqrt()
    }

    /// Scenario at one q (m.u.) in base units.
    pub fn scenario_at(&self, q: f64, statistics: Statistics, form: Form) -> Result<ScenarioSpec> {
        let u = Units::of(&BarrierSpec::default());
        let m = |x: f64| u.momentum_to_base(x);
        let packets = [m(self.p), m(q), m(self.pbar), m(self.qbar)];
        ScenarioSpec::from_momenta(self.a, self.b(), packets, m(self.big_p), statistics, form)
    }

    pub fn context_at(&self, q: f64) -> Result<Context> {
        let s = self.scenario_at(q, Statistics::Distinguishable, Form::Superposition)?;
        Context::new(s, self.barrier()?, self.tolerances)
    }

    /// Uniform q grid from `q_min` to `q_max` inclusive. The node nearest
    /// `p` is moved onto `p` so the fermion exclusion point is always sampled.
    pub fn q_grid(&self) -> Vec<f64> {
        let n = self.steps;
        let h = (self.q_max - self.q_min) / (n - 1) as f64;
        let mut q: Vec<f64> = (0..n).map(|i| self.q_min + i as f64 * h).collect();
        q[n - 1] = self.q_max;
        if self.q_min <= self.p && self.p <= self.q_max {
            let i = ((self.p - self.q_min) / h).round() as usize;
            q[i.min(n - 1)] = self.p;
        }
        q
    }
}

/// Sweep output: one row per q value, one column per series.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub q: Vec<f64>,
    /// `rows[i][j]` is series `j` at `q[i]`.
    pub rows: Vec<Vec<Option<f64>>>,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let series = cfg.series();
    let q = cfg.q_grid();
    let rows = q
        .par_iter()
        .map(|&qv| {
            let ctx = cfg.context_at(qv)?;
            Ok(series
                .iter()
                .map(|s| probabilities::value(&ctx, s.statistics, s.form))
                .collect())
        })
        .collect::<Result<Vec<Vec<Option<f64>>>>>()?;
    Ok(SweepTable {
        columns: series.iter().map(Series::column_name).collect(),
        q,
        rows,
    })
}

/// Decimal rendering with 12 significant digits.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["q".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (q, row) in self.q.iter().zip(&self.rows) {
            let mut rec = vec![format_value(*q)];
            rec.extend(row.iter().map(|v| v.map(format_value).unwrap_or_default()));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Csv(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r.headers()?.clone();
        if header.get(0) != Some("q") {
            return Err(Error::Csv("first column must be 'q'".into()));
        }
        let columns: Vec<String> = header.iter().skip(1).map(String::from).collect();
        let mut q = Vec::new();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let cell = |s: &str| -> Result<Option<f64>> {
                let s = s.trim();
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse::<f64>()
                        .map(Some)
                        .map_err(|_| Error::Csv(format!("bad number '{s}'")))
                }
            };
            q.push(cell(&rec[0])?.ok_or_else(|| Error::Csv("missing q".into()))?);
            rows.push(rec.iter().skip(1).map(cell).collect::<Result<Vec<_>>>()?);
        }
        Ok(SweepTable { columns, q, rows })
    }

    /// Write through a temporary sibling so a failed run leaves no partial file.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_csv()?)
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
