use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use otto_core::boundaries::{asymptotes, efficiency_thresholds, engine_boundary_ta, find_gap, Branch};
use otto_core::regimes::default_zero_tolerance;
use otto_core::sweep::{emit, emit_to_path, run_plan, AxisSpec, OutputFormat, Scale, SweepConfig, SweepVar};
use otto_core::{
    cycle_energetics, efficiency_report_with_tolerance, CycleParams, Error, MediumSpec, RegimeLabel,
    Result, SpinModelParams, WorkingMedium,
};
use serde_json::{json, Value};

use crate::args::{AsymptoteArgs, CycleArgs, Emit, Format, GapArgs, Model, SpinArgs, SweepArgs};

fn spin(args: &SpinArgs) -> Result<SpinModelParams> {
    SpinModelParams::new(args.j, args.ha, args.hb)
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize") + "\n"
}

/// `key  value` lines with the values aligned.
fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().fold(String::new(), |mut out, (k, v)| {
        let _ = writeln!(out, "{k:<width$}  {v}");
        out
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn list(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn load_medium(path: &Path) -> Result<WorkingMedium> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let spec: MediumSpec =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    spec.build()
}

pub fn cycle(args: &CycleArgs, format: Format) -> Result<String> {
    let medium = match (&args.levels, args.j) {
        (Some(path), _) => load_medium(path)?,
        (None, Some(j)) => match args.model {
            Model::Spin => WorkingMedium::coupled_spin(j)?,
            Model::Qutrit => WorkingMedium::qutrit(j)?,
        },
        (None, None) => return Err(Error::config("J", "required without --levels")),
    };
    let params = CycleParams::new(args.ha, args.hb, args.t_a, args.t_b)?;
    let e = cycle_energetics(&medium, &params)?;
    let tol = match args.zero_tol {
        Some(t) if t.is_finite() && t >= 0.0 => t,
        Some(t) => {
            return Err(Error::InvalidParameter {
                name: "zero-tol",
                value: t,
                reason: "must be finite and non-negative",
            })
        }
        None => default_zero_tolerance(&e),
    };
    let report = efficiency_report_with_tolerance(&e, &params, &medium, tol);
    let idle = medium.has_idle_levels();
    let q_idle_a = idle.then(|| e.idle_flux_a(&medium));
    let q_idle_b = idle.then(|| e.idle_flux_b(&medium));

    Ok(match format {
        Format::Json => pretty(&json!({
            "medium": medium.label(),
            "J": medium.coupling(),
            "lambda_a": params.lambda_a,
            "lambda_b": params.lambda_b,
            "T_a": params.t_a,
            "T_b": params.t_b,
            "E_a": medium.energies(params.lambda_a),
            "E_b": medium.energies(params.lambda_b),
            "p_a": e.populations_a.probs,
            "p_b": e.populations_b.probs,
            "delta_p": e.delta_p,
            "q_a": e.flux_a,
            "q_b": e.flux_b,
            "Q_a": e.heat_a,
            "Q_b": e.heat_b,
            "W_ba": e.work_expansion,
            "W_ab": e.work_compression,
            "W_cycle": e.work,
            "q_idle_a": q_idle_a,
            "q_idle_b": q_idle_b,
            "regime": report.regime.label,
            "rotation": report.regime.rotation,
            "eta": report.eta,
            "eta0": report.eta0,
            "eta_carnot": report.eta_carnot,
            "eta_ratio": report.eta_ratio,
            "eta_bound": report.eta_bound,
            "zero_tol": tol,
        })),
        Format::Text => table(&[
            ("medium", medium.label().to_string()),
            ("E_a", list(&medium.energies(params.lambda_a))),
            ("E_b", list(&medium.energies(params.lambda_b))),
            ("p_a", list(&e.populations_a.probs)),
            ("p_b", list(&e.populations_b.probs)),
            ("delta_p", list(&e.delta_p)),
            ("Q_a", e.heat_a.to_string()),
            ("Q_b", e.heat_b.to_string()),
            ("W_ba", e.work_expansion.to_string()),
            ("W_ab", e.work_compression.to_string()),
            ("W_cycle", e.work.to_string()),
            ("q_idle_a", opt(q_idle_a)),
            ("q_idle_b", opt(q_idle_b)),
            ("regime", report.regime.label.to_string()),
            ("rotation", report.regime.rotation.to_string()),
            ("eta", opt(report.eta)),
            ("eta0", report.eta0.to_string()),
            ("eta_carnot", report.eta_carnot.to_string()),
            ("eta_ratio", opt(report.eta_ratio)),
            ("eta_bound", opt(report.eta_bound)),
        ]),
    })
}

pub fn sweep(args: &SweepArgs) -> Result<String> {
    let mut config = SweepConfig::from_path(&args.config)?;
    if let Some(e) = args.emit {
        config.format = match e {
            Emit::Csv => OutputFormat::Csv,
            Emit::Ndjson => OutputFormat::Ndjson,
        };
    }
    let plan = config.validate()?;
    let records = run_plan(&plan);
    match &args.out {
        Some(path) => emit_to_path(&records, config.format, path)?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&records, config.format, &mut lock)
                .and_then(|()| lock.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    let engines = records.iter().filter(|r| r.regime == Some(RegimeLabel::Engine)).count();
    let invalid = records.iter().filter(|r| !r.valid).count();
    eprintln!("{} records, {engines} engines, {invalid} invalid", records.len());
    Ok(String::new())
}

pub fn gap(args: &GapArgs, format: Format) -> Result<String> {
    let gap = find_gap(&spin(&args.spin)?, args.tol)?;
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(gap).expect("plain struct")),
        Format::Text => format!(
            "T_a1={:.6} T_b0={:.6} T_a2={:.6} Gbar_max={:.6}\n",
            gap.t_a1, gap.t_b0, gap.t_a2, gap.gbar_max
        ),
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::config("tb-min/tb-max", "need 0 < tb-min < tb-max"));
    }
    if n < 2 {
        return Err(Error::config("points", "need at least 2"));
    }
    let axis = AxisSpec {
        var: SweepVar::TB,
        min: lo,
        max: hi,
        count: n,
        scale: Scale::Log,
    };
    Ok(axis.values())
}

pub fn asymptote_report(args: &AsymptoteArgs, format: Format) -> Result<String> {
    let sp = spin(&args.spin)?;
    let a = asymptotes(&sp);
    let coefficients = [
        ("r", Some(a.r)),
        ("r_E", a.r_e),
        ("r_AH", Some(a.r_ah)),
        ("r_HR", Some(a.r_hr)),
        ("s_AH", Some(a.s_ah)),
        ("s_HR", Some(a.s_hr)),
        ("upper_E_shift", Some(a.upper_e_shift)),
    ];
    let curves = match (args.tb_min, args.tb_max) {
        (Some(lo), Some(hi)) => {
            let t_b = log_grid(lo, hi, args.points)?;
            let crossing_free = sp.is_crossing_free();
            let numeric = |branch| -> Result<Vec<Option<f64>>> {
                if !crossing_free {
                    return Ok(vec![None; t_b.len()]);
                }
                t_b.iter()
                    .map(|&t| engine_boundary_ta(&sp, t, branch, 1e-9))
                    .collect()
            };
            Some(vec![
                ("upper_numeric", numeric(Branch::Upper)?),
                ("lower_numeric", numeric(Branch::Lower)?),
                ("upper_e_high", t_b.iter().map(|&t| Some(a.upper_e_high(t))).collect()),
                ("upper_e_low", t_b.iter().map(|&t| a.upper_e_low(t).ok()).collect()),
                ("lower_e_high", t_b.iter().map(|&t| a.lower_e_high(t).ok()).collect()),
                ("lower_e_low", t_b.iter().map(|&t| a.lower_e_low(t).ok()).collect()),
                ("accelerator_heater", t_b.iter().map(|&t| Some(a.accelerator_heater(t))).collect()),
                ("heater_refrigerator", t_b.iter().map(|&t| Some(a.heater_refrigerator(t))).collect()),
                ("accelerator_refrigerator", t_b.iter().map(|&t| Some(a.accelerator_refrigerator(t))).collect()),
                ("T_b", t_b.iter().copied().map(Some).collect()),
            ])
        }
        _ => None,
    };
    Ok(match format {
        Format::Json => {
            let mut value = json!({
                "J": a.j,
                "h_a": a.h_a,
                "h_b": a.h_b,
                "coefficients": coefficients.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            });
            if let Some(curves) = &curves {
                value["curves"] = curves.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into();
            }
            pretty(&value)
        }
        Format::Text => {
            let rows: Vec<(&str, String)> = coefficients.iter().map(|(k, v)| (*k, opt(*v))).collect();
            let mut out = table(&rows);
            if let Some(curves) = &curves {
                let (last, rest) = curves.split_last().expect("non-empty");
                let columns: Vec<_> = std::iter::once(last).chain(rest).collect();
                out.push('\n');
                out += &columns.iter().map(|(k, _)| *k).collect::<Vec<_>>().join("\t");
                out.push('\n');
                for i in 0..columns[0].1.len() {
                    let row: Vec<String> = columns.iter().map(|(_, v)| opt(v[i])).collect();
                    out += &row.join("\t");
                    out.push('\n');
                }
            }
            out
        }
    })
}

pub fn thresholds(args: &SpinArgs, format: Format) -> Result<String> {
    let t = efficiency_thresholds(args.ha, args.hb, args.j)?;
    if !t.delta_small {
        eprintln!(
            "warning: delta = {} is not small; the threshold formulas are leading-order in delta",
            t.delta
        );
    }
    Ok(match format {
        Format::Json => {
            let mut value = serde_json::to_value(t).expect("plain struct");
            value["eta0"] = json!(t.eta0());
            pretty(&value)
        }
        Format::Text => format!(
            "T_b_eta={:.6} T_b_slope={:.6} w_inf={} delta={}\n",
            t.t_b_eta, t.t_b_slope, t.w_inf, t.delta
        ),
    })
}
