//! Operating regime of a cycle and its efficiency.
//!
//! The regime follows from the signs of `(W, Q_hot, Q_cold)`:
//!
//! | regime       | W   | Q_hot | Q_cold |
//! |--------------|-----|-------|--------|
//! | engine       | > 0 | > 0   | < 0    |
//! | accelerator  | < 0 | > 0   | < 0    |
//! | refrigerator | < 0 | < 0   | > 0    |
//! | heater       | < 0 | < 0   | < 0    |
//!
//! The hot bath is whichever is hotter, so a cycle run with `T_b > T_a`
//! (counter-rotating) still reports an engine when it produces work.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::spectrum::{MediumModel, WorkingMedium};
use crate::thermo::{CycleEnergetics, CycleParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeLabel {
    Engine,
    Refrigerator,
    Accelerator,
    Heater,
    Boundary,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Engine => "Engine",
            RegimeLabel::Refrigerator => "Refrigerator",
            RegimeLabel::Accelerator => "Accelerator",
            RegimeLabel::Heater => "Heater",
            RegimeLabel::Boundary => "Boundary",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegimeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [
            RegimeLabel::Engine,
            RegimeLabel::Refrigerator,
            RegimeLabel::Accelerator,
            RegimeLabel::Heater,
            RegimeLabel::Boundary,
        ]
        .into_iter()
        .find(|l| l.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::Parse(format!("unknown regime {s:?}")))
    }
}

/// Which bath is hot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    /// `T_a > T_b`.
    Ordinary,
    /// `T_b > T_a`.
    Counter,
    /// `T_a == T_b`.
    Degenerate,
}

impl Rotation {
    pub fn of(params: &CycleParams) -> Self {
        if params.t_a > params.t_b {
            Rotation::Ordinary
        } else if params.t_b > params.t_a {
            Rotation::Counter
        } else {
            Rotation::Degenerate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rotation::Ordinary => "ordinary",
            Rotation::Counter => "counter",
            Rotation::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [Rotation::Ordinary, Rotation::Counter, Rotation::Degenerate]
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown rotation {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Regime {
    pub label: RegimeLabel,
    pub rotation: Rotation,
}

/// `(Q_hot, Q_cold, T_hot, T_cold)`; bath `a` counts as hot when the
/// temperatures are equal.
pub fn hot_cold(energetics: &CycleEnergetics, params: &CycleParams) -> (f64, f64, f64, f64) {
    if params.t_b > params.t_a {
        (energetics.heat_b, energetics.heat_a, params.t_b, params.t_a)
    } else {
        (energetics.heat_a, energetics.heat_b, params.t_a, params.t_b)
    }
}

/// `1e-12 * max(|Q_a|, |Q_b|, |W|)`, floored at the smallest normal float so
/// that exact zeros still register as boundaries.
pub fn default_zero_tolerance(energetics: &CycleEnergetics) -> f64 {
    let scale = energetics
        .heat_a
        .abs()
        .max(energetics.heat_b.abs())
        .max(energetics.work.abs());
    (1e-12 * scale).max(f64::MIN_POSITIVE)
}

pub fn classify(energetics: &CycleEnergetics, params: &CycleParams, zero_tol: f64) -> Regime {
    use std::cmp::Ordering::*;

    let rotation = Rotation::of(params);
    let (q_hot, q_cold, _, _) = hot_cold(energetics, params);
    let sign = |v: f64| {
        if v.abs() < zero_tol || v.is_nan() {
            Equal
        } else if v > 0.0 {
            Greater
        } else {
            Less
        }
    };
    let label = match (sign(energetics.work), sign(q_hot), sign(q_cold)) {
        (Equal, _, _) | (_, Equal, _) | (_, _, Equal) => RegimeLabel::Boundary,
        (_, Less, Less) => RegimeLabel::Heater,
        // equal temperatures: accelerator and refrigerator meet here
        _ if rotation == Rotation::Degenerate => RegimeLabel::Boundary,
        (Greater, Greater, Less) => RegimeLabel::Engine,
        (Less, Greater, Less) => RegimeLabel::Accelerator,
        (Less, Less, Greater) => RegimeLabel::Refrigerator,
        // sign patterns excluded by the two laws only arise from rounding
        _ => RegimeLabel::Boundary,
    };
    Regime { label, rotation }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// `W / Q_hot`; absent unless the cycle is an engine.
    pub eta: Option<f64>,
    pub eta0: f64,
    /// `1 - T_cold / T_hot`.
    pub eta_carnot: f64,
    /// Idle-level heat taken from the hot bath.
    pub idle_flux_hot: f64,
    /// `η / η0` from the idle-flux decomposition; absent unless an engine.
    pub eta_ratio: Option<f64>,
    /// `η0 / (1 - 4J/h_a)` for ordinary coupled-spin engines with `J < h_a/4`.
    pub eta_bound: Option<f64>,
}

impl RegimeReport {
    pub fn is_engine(&self) -> bool {
        self.regime.label == RegimeLabel::Engine
    }

    /// `η0 * eta_ratio`: the efficiency obtained from the flux decomposition.
    pub fn eta_from_decomposition(&self) -> Option<f64> {
        self.eta_ratio.map(|r| r * self.eta0)
    }
}

/// Efficiency ratio `η/η0` from idle-level fluxes alone.
///
/// Ordinary rotation: `1 - Σ_idle q_n^a / Q_a`. Counter rotation:
/// `r (Σ_idle q_n^b / Q_b - 1)`. Both hold in the gauge where working levels
/// are exactly `c_n λ`, which is how media are stored.
pub fn decomposition_ratio(
    energetics: &CycleEnergetics,
    params: &CycleParams,
    medium: &WorkingMedium,
) -> f64 {
    // `1 - Σ_idle q / Q` is evaluated as `Σ_working q / Q`: near the engine
    // border the idle share tends to 1 and the subtraction would cancel.
    let working = |flux: &[f64]| -> f64 {
        medium
            .levels()
            .iter()
            .zip(flux)
            .filter(|(l, _)| l.is_working())
            .map(|(_, q)| q)
            .sum()
    };
    if params.t_b > params.t_a {
        -params.ratio() * working(&energetics.flux_b) / energetics.heat_b
    } else {
        working(&energetics.flux_a) / energetics.heat_a
    }
}

pub fn efficiency_report(
    energetics: &CycleEnergetics,
    params: &CycleParams,
    medium: &WorkingMedium,
) -> RegimeReport {
    efficiency_report_with_tolerance(energetics, params, medium, default_zero_tolerance(energetics))
}

pub fn efficiency_report_with_tolerance(
    energetics: &CycleEnergetics,
    params: &CycleParams,
    medium: &WorkingMedium,
    zero_tol: f64,
) -> RegimeReport {
    let regime = classify(energetics, params, zero_tol);
    let (q_hot, _, t_hot, t_cold) = hot_cold(energetics, params);
    let engine = regime.label == RegimeLabel::Engine;
    let idle_flux_hot = match regime.rotation {
        Rotation::Counter => energetics.idle_flux_b(medium),
        _ => energetics.idle_flux_a(medium),
    };
    let eta_bound = match (medium.model(), regime.rotation) {
        (MediumModel::CoupledSpin { j }, Rotation::Ordinary) if 4.0 * j < params.lambda_a => {
            Some(params.eta0() / (1.0 - 4.0 * j / params.lambda_a))
        }
        _ => None,
    };
    RegimeReport {
        regime,
        eta: engine.then(|| energetics.work / q_hot),
        eta0: params.eta0(),
        eta_carnot: 1.0 - t_cold / t_hot,
        idle_flux_hot,
        eta_ratio: engine.then(|| decomposition_ratio(energetics, params, medium)),
        eta_bound,
    }
}
