//! Parameter grids over temperatures, inverse temperatures and coupling, and
//! their CSV / NDJSON serialization.
//!
//! A sweep is described by a JSON document:
//!
//! ```json
//! {
//!   "medium": {"model": "coupled-spin", "J": 0.7},
//!   "lambda_a": 2.0,
//!   "lambda_b": 1.0,
//!   "axes": [
//!     {"var": "T_a", "min": 0.05, "max": 50, "count": 200, "scale": "log"},
//!     {"var": "T_b", "min": 0.05, "max": 50, "count": 200, "scale": "log"}
//!   ],
//!   "fixed": {},
//!   "format": "csv"
//! }
//! ```
//!
//! The first axis is the outer one. Each of the two baths takes its
//! temperature from exactly one of an axis or `fixed`, given either as `T` or
//! as `beta`. A `J` axis overrides the coupling of a model medium.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regimes::{efficiency_report_with_tolerance, RegimeLabel, Rotation};
use crate::spectrum::{MediumSpec, WorkingMedium};
use crate::thermo::{cycle_energetics_unchecked, CycleParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepVar {
    #[serde(rename = "T_a")]
    TA,
    #[serde(rename = "T_b")]
    TB,
    #[serde(rename = "beta_a")]
    BetaA,
    #[serde(rename = "beta_b")]
    BetaB,
    J,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::TA => "T_a",
            SweepVar::TB => "T_b",
            SweepVar::BetaA => "beta_a",
            SweepVar::BetaB => "beta_b",
            SweepVar::J => "J",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl AxisSpec {
    /// Grid values, with both endpoints hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == last {
                    return self.max;
                }
                let t = i as f64 / last as f64;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * t,
                    Scale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }

    fn validate(&self, field: &str) -> Result<()> {
        if self.count < 2 {
            return Err(Error::config(format!("{field}.count"), "must be at least 2"));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::config(field, "min and max must be finite"));
        }
        if !(self.min < self.max) {
            return Err(Error::config(field, format!("min {} must be below max {}", self.min, self.max)));
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            return Err(Error::config(format!("{field}.min"), "log axes need min > 0"));
        }
        let lower_ok = match self.var {
            SweepVar::J => self.min >= 0.0,
            _ => self.min > 0.0,
        };
        if !lower_ok {
            return Err(Error::config(format!("{field}.min"), format!("{} out of range", self.var.name())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedValues {
    #[serde(rename = "T_a", default, skip_serializing_if = "Option::is_none")]
    pub t_a: Option<f64>,
    #[serde(rename = "T_b", default, skip_serializing_if = "Option::is_none")]
    pub t_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_b: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Ndjson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub medium: MediumSpec,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub axes: Vec<AxisSpec>,
    #[serde(default)]
    pub fixed: FixedValues,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_tol: Option<f64>,
}

/// Where a bath temperature comes from.
#[derive(Debug, Clone, Copy)]
enum Source {
    Axis { index: usize, inverse: bool },
    Fixed(f64),
}

impl Source {
    fn resolve(self, point: &[f64]) -> f64 {
        match self {
            Source::Axis { index, inverse: false } => point[index],
            Source::Axis { index, inverse: true } => 1.0 / point[index],
            Source::Fixed(t) => t,
        }
    }
}

/// A validated sweep, ready to run.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    config: SweepConfig,
    medium: WorkingMedium,
    t_a: Source,
    t_b: Source,
    j_axis: Option<usize>,
    grids: Vec<Vec<f64>>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<SweepPlan> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::config("axes", format!("need 1 or 2 axes, got {}", self.axes.len())));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            axis.validate(&format!("axes[{i}]"))?;
        }
        if self.axes.len() == 2 && self.axes[0].var == self.axes[1].var {
            return Err(Error::config("axes[1].var", "duplicates axes[0].var"));
        }
        if !(self.lambda_a.is_finite() && self.lambda_b.is_finite() && self.lambda_b > 0.0) {
            return Err(Error::config("lambda_b", "lambda_a and lambda_b must be finite with lambda_b > 0"));
        }
        if self.lambda_a < self.lambda_b {
            return Err(Error::config("lambda_a", "must be at least lambda_b"));
        }
        if let Some(tol) = self.zero_tol {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Error::config("zero_tol", "must be finite and non-negative"));
            }
        }
        let medium = self.medium.build().map_err(|e| Error::config("medium", e.to_string()))?;
        let j_axis = self.axis_index(SweepVar::J);
        if j_axis.is_some() && medium.coupling().is_none() {
            return Err(Error::config("axes", "a J axis needs a model medium"));
        }
        let t_a = self.source("a", SweepVar::TA, SweepVar::BetaA, self.fixed.t_a, self.fixed.beta_a)?;
        let t_b = self.source("b", SweepVar::TB, SweepVar::BetaB, self.fixed.t_b, self.fixed.beta_b)?;
        Ok(SweepPlan {
            config: self.clone(),
            medium,
            t_a,
            t_b,
            j_axis,
            grids: self.axes.iter().map(AxisSpec::values).collect(),
        })
    }

    fn axis_index(&self, var: SweepVar) -> Option<usize> {
        self.axes.iter().position(|a| a.var == var)
    }

    fn source(
        &self,
        bath: &str,
        t_var: SweepVar,
        beta_var: SweepVar,
        fixed_t: Option<f64>,
        fixed_beta: Option<f64>,
    ) -> Result<Source> {
        let mut sources = Vec::new();
        if let Some(index) = self.axis_index(t_var) {
            sources.push(Source::Axis { index, inverse: false });
        }
        if let Some(index) = self.axis_index(beta_var) {
            sources.push(Source::Axis { index, inverse: true });
        }
        if let Some(t) = fixed_t {
            sources.push(Source::Fixed(t));
        }
        if let Some(beta) = fixed_beta {
            sources.push(Source::Fixed(1.0 / beta));
        }
        match sources.as_slice() {
            [Source::Fixed(t)] if !(t.is_finite() && *t > 0.0) => Err(Error::config(
                format!("fixed.{}", t_var.name()),
                "temperature must be positive and finite",
            )),
            [one] => Ok(*one),
            [] => Err(Error::config(
                "fixed",
                format!("bath {bath} needs {} or {} as an axis or fixed value", t_var.name(), beta_var.name()),
            )),
            _ => Err(Error::config(
                "fixed",
                format!("bath {bath} temperature given more than once"),
            )),
        }
    }
}

impl SweepPlan {
    pub fn config(&self) -> &SweepConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.grids.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis values of grid point `index`, outer axis major.
    fn point(&self, index: usize) -> Vec<f64> {
        let mut rest = index;
        let mut point = vec![0.0; self.grids.len()];
        for (k, grid) in self.grids.iter().enumerate().rev() {
            point[k] = grid[rest % grid.len()];
            rest /= grid.len();
        }
        point
    }

    pub fn evaluate(&self, index: usize) -> SweepRecord {
        let point = self.point(index);
        let t_a = self.t_a.resolve(&point);
        let t_b = self.t_b.resolve(&point);
        let (lambda_a, lambda_b) = (self.config.lambda_a, self.config.lambda_b);
        let rebuilt;
        let medium = match self.j_axis {
            Some(k) => {
                rebuilt = match &self.config.medium {
                    MediumSpec::Model { model, .. } => model.build(point[k]).expect("validated J axis"),
                    MediumSpec::Levels { .. } => unreachable!("J axis requires a model medium"),
                };
                &rebuilt
            }
            None => &self.medium,
        };
        let params = CycleParams {
            lambda_a,
            lambda_b,
            t_a,
            t_b,
        };
        let mut record = SweepRecord {
            index,
            j: medium.coupling(),
            lambda_a,
            lambda_b,
            t_a,
            t_b,
            beta_a: 1.0 / t_a,
            beta_b: 1.0 / t_b,
            valid: false,
            heat_a: None,
            heat_b: None,
            work_expansion: None,
            work_compression: None,
            work: None,
            idle_flux_a: None,
            regime: None,
            rotation: Rotation::of(&params),
            eta: None,
            eta0: params.eta0(),
            eta_ratio: None,
            eta_carnot: 1.0 - t_a.min(t_b) / t_a.max(t_b),
        };
        if medium.check_no_crossing(lambda_b, lambda_a).is_err() {
            return record;
        }
        let e = cycle_energetics_unchecked(medium, &params);
        let tol = self
            .config
            .zero_tol
            .unwrap_or_else(|| crate::regimes::default_zero_tolerance(&e));
        let report = efficiency_report_with_tolerance(&e, &params, medium, tol);
        record.valid = true;
        record.heat_a = Some(e.heat_a);
        record.heat_b = Some(e.heat_b);
        record.work_expansion = Some(e.work_expansion);
        record.work_compression = Some(e.work_compression);
        record.work = Some(e.work);
        record.idle_flux_a = medium.has_idle_levels().then(|| e.idle_flux_a(medium));
        record.regime = Some(report.regime.label);
        record.eta = report.eta;
        record.eta_ratio = report.eta_ratio;
        record
    }
}

/// One grid point. Energetics are absent when the medium's levels cross
/// between `lambda_b` and `lambda_a` (`valid == false`).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub index: usize,
    /// Coupling of a model medium; absent for explicit level lists.
    pub j: Option<f64>,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub beta_a: f64,
    pub beta_b: f64,
    pub valid: bool,
    pub heat_a: Option<f64>,
    pub heat_b: Option<f64>,
    pub work_expansion: Option<f64>,
    pub work_compression: Option<f64>,
    pub work: Option<f64>,
    /// Idle-level heat from bath `a`; absent without idle levels.
    pub idle_flux_a: Option<f64>,
    pub regime: Option<RegimeLabel>,
    pub rotation: Rotation,
    /// Present only for engines.
    pub eta: Option<f64>,
    pub eta0: f64,
    pub eta_ratio: Option<f64>,
    pub eta_carnot: f64,
}

impl SweepRecord {
    pub fn is_engine(&self) -> bool {
        self.regime == Some(RegimeLabel::Engine)
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    Ok(run_plan(&config.validate()?))
}

pub fn run_plan(plan: &SweepPlan) -> Vec<SweepRecord> {
    (0..plan.len()).into_par_iter().map(|i| plan.evaluate(i)).collect()
}

/// Column order of emitted records.
pub const COLUMNS: [&str; 22] = [
    "index",
    "J",
    "lambda_a",
    "lambda_b",
    "T_a",
    "T_b",
    "beta_a",
    "beta_b",
    "valid",
    "Q_a",
    "Q_b",
    "W_ba",
    "W_ab",
    "W_cycle",
    "q_idle_a",
    "regime",
    "rotation",
    "eta",
    "eta_defined",
    "eta0",
    "eta_ratio",
    "eta_carnot",
];

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Null,
    Int(usize),
    Num(f64),
    Bool(bool),
    Text(&'static str),
}

impl Cell {
    fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => (*s).to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format_float(*x),
            Cell::Null | Cell::Num(_) => "null".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => format!("\"{s}\""),
        }
    }
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn cells(r: &SweepRecord) -> [Cell; 22] {
    // non-engines report eta = 0 with eta_defined = false
    let eta = match (r.valid, r.eta) {
        (false, _) => Cell::Null,
        (true, e) => Cell::Num(e.unwrap_or(0.0)),
    };
    [
        Cell::Int(r.index),
        Cell::opt(r.j),
        Cell::Num(r.lambda_a),
        Cell::Num(r.lambda_b),
        Cell::Num(r.t_a),
        Cell::Num(r.t_b),
        Cell::Num(r.beta_a),
        Cell::Num(r.beta_b),
        Cell::Bool(r.valid),
        Cell::opt(r.heat_a),
        Cell::opt(r.heat_b),
        Cell::opt(r.work_expansion),
        Cell::opt(r.work_compression),
        Cell::opt(r.work),
        Cell::opt(r.idle_flux_a),
        r.regime.map_or(Cell::Null, |l| Cell::Text(l.as_str())),
        Cell::Text(r.rotation.as_str()),
        eta,
        Cell::Bool(r.eta.is_some()),
        Cell::Num(r.eta0),
        Cell::opt(r.eta_ratio),
        Cell::Num(r.eta_carnot),
    ]
}

/// Writes records in `format`; CSV gets a header row.
pub fn emit<W: Write>(records: &[SweepRecord], format: OutputFormat, writer: W) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            w.write_record(COLUMNS)?;
            for r in records {
                w.write_record(cells(r).iter().map(Cell::csv))?;
            }
            w.flush()
        }
        OutputFormat::Ndjson => {
            let mut w = BufWriter::new(writer);
            for r in records {
                let fields: Vec<String> = COLUMNS
                    .iter()
                    .zip(cells(r).iter())
                    .map(|(name, cell)| format!("\"{name}\":{}", cell.json()))
                    .collect();
                writeln!(w, "{{{}}}", fields.join(","))?;
            }
            w.flush()
        }
    }
}

pub fn emit_to_path(records: &[SweepRecord], format: OutputFormat, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    emit(records, format, file).map_err(io_err)
}

/// Parses emitted records back.
pub fn read_records<R: BufRead>(reader: R, format: OutputFormat) -> Result<Vec<SweepRecord>> {
    match format {
        OutputFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(reader);
            let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
            let mut out = Vec::new();
            for row in rdr.records() {
                let row = row.map_err(|e| Error::Parse(e.to_string()))?;
                out.push(parse_record(|name| {
                    let i = headers.iter().position(|h| h == name)?;
                    row.get(i).filter(|s| !s.is_empty()).map(str::to_owned)
                })?);
            }
            Ok(out)
        }
        OutputFormat::Ndjson => {
            let mut out = Vec::new();
            for line in reader.lines() {
                let line = line.map_err(|e| Error::Parse(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let value: serde_json::Map<String, serde_json::Value> =
                    serde_json::from_str(&line).map_err(|e| Error::Parse(e.to_string()))?;
                out.push(parse_record(|name| match value.get(name)? {
                    serde_json::Value::Null => None,
                    serde_json::Value::String(s) => Some(s.clone()),
                    other => Some(other.to_string()),
                })?);
            }
            Ok(out)
        }
    }
}

fn parse_record<F: Fn(&str) -> Option<String>>(get: F) -> Result<SweepRecord> {
    let opt_f64 = |name: &str| -> Result<Option<f64>> {
        get(name)
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("{name}: {e}"))))
            .transpose()
    };
    let f64_req = |name: &str| -> Result<f64> {
        opt_f64(name)?.ok_or_else(|| Error::Parse(format!("missing {name}")))
    };
    let bool_req = |name: &str| -> Result<bool> {
        get(name)
            .ok_or_else(|| Error::Parse(format!("missing {name}")))?
            .parse::<bool>()
            .map_err(|e| Error::Parse(format!("{name}: {e}")))
    };
    let index = get("index")
        .ok_or_else(|| Error::Parse("missing index".into()))?
        .parse::<usize>()
        .map_err(|e| Error::Parse(format!("index: {e}")))?;
    let eta_defined = bool_req("eta_defined")?;
    Ok(SweepRecord {
        index,
        j: opt_f64("J")?,
        lambda_a: f64_req("lambda_a")?,
        lambda_b: f64_req("lambda_b")?,
        t_a: f64_req("T_a")?,
        t_b: f64_req("T_b")?,
        beta_a: f64_req("beta_a")?,
        beta_b: f64_req("beta_b")?,
        valid: bool_req("valid")?,
        heat_a: opt_f64("Q_a")?,
        heat_b: opt_f64("Q_b")?,
        work_expansion: opt_f64("W_ba")?,
        work_compression: opt_f64("W_ab")?,
        work: opt_f64("W_cycle")?,
        idle_flux_a: opt_f64("q_idle_a")?,
        regime: get("regime").map(|s| s.parse()).transpose()?,
        rotation: get("rotation")
            .ok_or_else(|| Error::Parse("missing rotation".into()))?
            .parse()?,
        eta: if eta_defined { opt_f64("eta")? } else { None },
        eta0: f64_req("eta0")?,
        eta_ratio: opt_f64("eta_ratio")?,
        eta_carnot: f64_req("eta_carnot")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> SweepConfig {
        SweepConfig::from_json(json).unwrap()
    }

    fn grid(j: f64, count: usize) -> SweepConfig {
        config(&format!(
            r#"{{"medium": {{"model": "coupled-spin", "J": {j}}}, "lambda_a": 2, "lambda_b": 1,
               "axes": [{{"var": "T_a", "min": 0.1, "max": 10, "count": {count}, "scale": "log"}},
                        {{"var": "T_b", "min": 0.1, "max": 10, "count": {count}, "scale": "log"}}]}}"#
        ))
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let a = AxisSpec {
            var: SweepVar::TA,
            min: 0.05,
            max: 50.0,
            count: 7,
            scale: Scale::Log,
        };
        let v = a.values();
        assert_eq!(v[0], 0.05);
        assert_eq!(v[6], 50.0);
        assert!((v[3] - (0.05f64 * 50.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn uncoupled_map_has_three_zones_split_by_known_lines() {
        let records = run_sweep(&grid(0.0, 41)).unwrap();
        assert_eq!(records.len(), 41 * 41);
        for r in &records {
            let label = r.regime.unwrap();
            let expected = if r.t_a == r.t_b || r.t_a == 2.0 * r.t_b {
                continue;
            } else if r.t_a > 2.0 * r.t_b {
                RegimeLabel::Engine
            } else if r.t_a > r.t_b {
                RegimeLabel::Refrigerator
            } else {
                RegimeLabel::Accelerator
            };
            assert_eq!(label, expected, "T_a={} T_b={}", r.t_a, r.t_b);
        }
    }

    #[test]
    fn j_sweep_flags_forbidden_band() {
        let c = config(
            r#"{"medium": {"model": "coupled-spin", "J": 0}, "lambda_a": 2, "lambda_b": 1,
                "axes": [{"var": "J", "min": 0, "max": 0.6, "count": 61}],
                "fixed": {"T_a": 5, "T_b": 1}}"#,
        );
        let records = run_sweep(&c).unwrap();
        assert_eq!(records.len(), 61);
        for r in &records {
            let j = r.j.unwrap();
            if (j - 0.25).abs() < 1e-9 || (j - 0.5).abs() < 1e-9 {
                continue;
            }
            let inside = j > 0.25 && j < 0.5;
            assert_eq!(r.valid, !inside, "J={j}");
            if !r.valid {
                assert!(r.work.is_none() && r.regime.is_none());
            }
        }
        assert_eq!(records[0].regime, Some(RegimeLabel::Engine));
        let last = records.last().unwrap();
        assert_eq!(last.regime, Some(RegimeLabel::Accelerator));
    }

    #[test]
    fn single_equal_temperature_point_is_boundary() {
        let c = config(
            r#"{"medium": {"model": "coupled-spin", "J": 0}, "lambda_a": 1, "lambda_b": 1,
                "axes": [{"var": "T_a", "min": 1, "max": 2, "count": 2}],
                "fixed": {"T_b": 1}}"#,
        );
        let r = &run_sweep(&c).unwrap()[0];
        assert_eq!(r.t_a, 1.0);
        assert_eq!(r.work, Some(0.0));
        assert_eq!(r.heat_a, Some(0.0));
        assert_eq!(r.regime, Some(RegimeLabel::Boundary));

        // with a real work stroke the cycle dissipates work, and sits on the
        // accelerator/refrigerator border
        let mut c = c;
        c.lambda_a = 2.0;
        let r = &run_sweep(&c).unwrap()[0];
        assert!(r.work.unwrap() < 0.0);
        assert_eq!(r.regime, Some(RegimeLabel::Boundary));
    }

    #[test]
    fn beta_axes_invert() {
        let c = config(
            r#"{"medium": {"model": "qutrit", "J": 0.7}, "lambda_a": 2, "lambda_b": 1,
                "axes": [{"var": "beta_a", "min": 0.5, "max": 2, "count": 4}],
                "fixed": {"beta_b": 4}}"#,
        );
        let records = run_sweep(&c).unwrap();
        assert_eq!(records[0].t_a, 2.0);
        assert_eq!(records[0].t_b, 0.25);
        assert_eq!(records[3].beta_a, 2.0);
    }

    #[test]
    fn validation_errors_name_fields() {
        let cases = [
            (r#""axes": []"#, "axes"),
            (r#""axes": [{"var": "T_a", "min": 1, "max": 2, "count": 1}]"#, "axes[0].count"),
            (r#""axes": [{"var": "T_a", "min": 2, "max": 1, "count": 3}]"#, "axes[0]"),
            (r#""axes": [{"var": "T_a", "min": 0, "max": 1, "count": 3, "scale": "log"}]"#, "axes[0].min"),
        ];
        for (axes, field) in cases {
            let c = config(&format!(
                r#"{{"medium": {{"model": "spin", "J": 0}}, "lambda_a": 2, "lambda_b": 1, {axes}, "fixed": {{"T_b": 1}}}}"#
            ));
            match c.validate() {
                Err(Error::Config { field: f, .. }) => assert_eq!(f, field),
                other => panic!("{axes}: {other:?}"),
            }
        }
        let twice = config(
            r#"{"medium": {"model": "spin", "J": 0}, "lambda_a": 2, "lambda_b": 1,
                "axes": [{"var": "T_a", "min": 1, "max": 2, "count": 2}],
                "fixed": {"T_b": 1, "beta_b": 1, "T_a": 3}}"#,
        );
        assert!(matches!(twice.validate(), Err(Error::Config { .. })));
        assert!(SweepConfig::from_json(r#"{"medium": {"model": "spin", "J": 0}, "bogus": 1}"#).is_err());
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let records = run_sweep(&grid(0.7, 2)).unwrap();
        let mut buf = Vec::new();
        emit(&records, OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
        assert_eq!(read_records(buf.as_slice(), OutputFormat::Csv).unwrap(), records);
    }

    #[test]
    fn ndjson_round_trip() {
        let records = run_sweep(&grid(0.4, 3)).unwrap();
        assert!(records.iter().all(|r| !r.valid));
        let records = [records, run_sweep(&grid(0.7, 3)).unwrap()].concat();
        let mut buf = Vec::new();
        emit(&records, OutputFormat::Ndjson, &mut buf).unwrap();
        assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), records.len());
        assert_eq!(read_records(buf.as_slice(), OutputFormat::Ndjson).unwrap(), records);
    }

    #[test]
    fn output_is_deterministic() {
        let c = grid(0.7, 30);
        let emit_once = || {
            let mut buf = Vec::new();
            emit(&run_sweep(&c).unwrap(), OutputFormat::Csv, &mut buf).unwrap();
            buf
        };
        assert_eq!(emit_once(), emit_once());
        let plan = c.validate().unwrap();
        let mut reversed: Vec<_> = (0..plan.len()).rev().map(|i| plan.evaluate(i)).collect();
        reversed.sort_by_key(|r| r.index);
        assert_eq!(reversed, run_plan(&plan));
    }

    #[test]
    fn emit_reports_path_on_failure() {
        let err = emit_to_path(&[], OutputFormat::Csv, Path::new("/nonexistent/dir/out.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }
}
