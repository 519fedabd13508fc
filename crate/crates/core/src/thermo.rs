//! Equilibrium populations and the energetics of the idealized Otto cycle.
//!
//! Sign conventions: heat `Q > 0` is absorbed by the medium, work `W > 0` is
//! extracted from it. Stroke `a` thermalizes at `(lambda_a, T_a)`, stroke `b`
//! at `(lambda_b, T_b)`, and the adiabatic strokes carry populations over
//! unchanged.
//!
//! All Boltzmann sums are taken relative to the lowest energy, so nothing
//! overflows for `|E| / T` in the thousands. Population *differences* are
//! formed from whichever of `p` or `1 - p` is small, which keeps `Δp` accurate
//! when one level holds nearly all of the population at both baths.

use crate::error::{non_negative, positive, Error, Result};
use crate::spectrum::WorkingMedium;

/// One idealized Otto cycle: two control values and two bath temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleParams {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub t_a: f64,
    pub t_b: f64,
}

impl CycleParams {
    /// `lambda_a == lambda_b` is accepted as the degenerate cycle with no
    /// work strokes.
    pub fn new(lambda_a: f64, lambda_b: f64, t_a: f64, t_b: f64) -> Result<Self> {
        let lambda_a = positive("lambda_a", lambda_a)?;
        let lambda_b = positive("lambda_b", lambda_b)?;
        if lambda_a < lambda_b {
            return Err(Error::InvalidParameter {
                name: "lambda_a",
                value: lambda_a,
                reason: "must not be below lambda_b",
            });
        }
        Ok(CycleParams {
            lambda_a,
            lambda_b,
            t_a: positive("T_a", t_a)?,
            t_b: positive("T_b", t_b)?,
        })
    }

    pub fn ratio(&self) -> f64 {
        self.lambda_a / self.lambda_b
    }

    pub fn beta_a(&self) -> f64 {
        1.0 / self.t_a
    }

    pub fn beta_b(&self) -> f64 {
        1.0 / self.t_b
    }

    /// Efficiency of a medium made only of working levels, `1 - lambda_b / lambda_a`.
    pub fn eta0(&self) -> f64 {
        1.0 - self.lambda_b / self.lambda_a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationVector {
    pub probs: Vec<f64>,
    /// `1 - p_n`, summed from the other levels rather than subtracted.
    pub complements: Vec<f64>,
    pub log_probs: Vec<f64>,
    pub log_z: f64,
    pub temperature: f64,
    pub lambda: f64,
}

pub fn thermal_populations(
    medium: &WorkingMedium,
    lambda: f64,
    temperature: f64,
) -> Result<PopulationVector> {
    let temperature = positive("T", temperature)?;
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "must be finite",
        });
    }
    let energies = medium.energies(lambda);
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let log_weights: Vec<f64> = medium
        .levels()
        .iter()
        .zip(&energies)
        .map(|(level, &e)| f64::from(level.degeneracy()).ln() - (e - e_min) / temperature)
        .collect();
    let weights: Vec<f64> = log_weights.iter().map(|lw| lw.exp()).collect();
    let sum: f64 = weights.iter().sum();
    let log_sum = sum.ln();

    let probs = weights.iter().map(|w| w / sum).collect();
    let complements = (0..weights.len())
        .map(|n| {
            weights
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != n)
                .map(|(_, w)| w)
                .sum::<f64>()
                / sum
        })
        .collect();
    let log_probs = log_weights.iter().map(|lw| lw - log_sum).collect();

    Ok(PopulationVector {
        probs,
        complements,
        log_probs,
        log_z: -e_min / temperature + log_sum,
        temperature,
        lambda,
    })
}

/// `p_n(a) - p_n(b)` for every level.
pub fn population_shift(a: &PopulationVector, b: &PopulationVector) -> Vec<f64> {
    a.probs
        .iter()
        .zip(&b.probs)
        .zip(a.complements.iter().zip(&b.complements))
        .map(|((&pa, &pb), (&ca, &cb))| {
            if pa.max(pb) <= ca.max(cb) {
                pa - pb
            } else {
                cb - ca
            }
        })
        .collect()
}

/// Coupled-spin work function `p_2 - p_4`:
/// `2 sinh(2h/T) / (1 + 2 cosh(2h/T) + exp(8J/T))`.
pub fn work_function_f(h: f64, j: f64, temperature: f64) -> Result<f64> {
    let temperature = positive("T", temperature)?;
    let x = h / temperature * 2.0;
    let z = j / temperature * 8.0;
    if !x.is_finite() || !z.is_finite() {
        return Err(Error::InvalidParameter {
            name: "h",
            value: h,
            reason: "h/T and J/T must be finite",
        });
    }
    let m = x.abs().max(z).max(0.0);
    let num = sinh_scaled(x, m);
    let den = (-m).exp() + (x - m).exp() + (-x - m).exp() + (z - m).exp();
    Ok(num / den)
}

/// Population of the idle level `-8J` in the coupled-spin medium.
pub fn spin_idle_population(h: f64, j: f64, temperature: f64) -> Result<f64> {
    let temperature = positive("T", temperature)?;
    let x = h / temperature * 2.0;
    let z = j / temperature * 8.0;
    let m = x.abs().max(z).max(0.0);
    let den = (-m).exp() + (x - m).exp() + (-x - m).exp() + (z - m).exp();
    Ok((z - m).exp() / den)
}

/// Dimensionless work function `(e^x - e^-x) / (1 + e^x + e^-x + e^{xy})`,
/// so that `f(h, J, T) = g(2h/T, 4J/h)`.
pub fn g(x: f64, y: f64) -> Result<f64> {
    let x = non_negative("x", x)?;
    let y = non_negative("y", y)?;
    Ok(g_unchecked(x, y))
}

/// `(e^x - e^-x) e^-m` without cancellation at small `|x|`.
#[inline]
fn sinh_scaled(x: f64, m: f64) -> f64 {
    if x.abs() < 1.0 {
        2.0 * x.sinh() * (-m).exp()
    } else {
        (x - m).exp() - (-x - m).exp()
    }
}

#[inline]
pub(crate) fn g_unchecked(x: f64, y: f64) -> f64 {
    let xy = x * y;
    let m = x.max(xy);
    let num = sinh_scaled(x, m);
    let den = (-m).exp() + (x - m).exp() + (-x - m).exp() + (xy - m).exp();
    num / den
}

/// Leading high-temperature form `h/T - 2hJ/T^2` of the work function.
pub fn work_function_high_t(h: f64, j: f64, temperature: f64) -> f64 {
    h / temperature - 2.0 * h * j / (temperature * temperature)
}

/// Leading high-temperature form of the idle population,
/// `(1 + 6J/T + (12J^2 - h^2)/T^2) / 4`.
pub fn idle_population_high_t(h: f64, j: f64, temperature: f64) -> f64 {
    let t2 = temperature * temperature;
    0.25 * (1.0 + 6.0 * j / temperature + (12.0 * j * j - h * h) / t2)
}

/// Low-temperature step form `1 / (1 + exp((8J - 2h)/T))`.
pub fn work_function_low_t(h: f64, j: f64, temperature: f64) -> f64 {
    1.0 / (1.0 + ((8.0 * j - 2.0 * h) / temperature).exp())
}

/// Low-temperature step form `1 / (1 + exp((2h - 8J)/T))`.
pub fn idle_population_low_t(h: f64, j: f64, temperature: f64) -> f64 {
    1.0 / (1.0 + ((2.0 * h - 8.0 * j) / temperature).exp())
}

/// Heat, work and per-level fluxes for one cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleEnergetics {
    /// Heat absorbed from bath `a`.
    pub heat_a: f64,
    /// Heat absorbed from bath `b`.
    pub heat_b: f64,
    /// Work extracted on the expansion stroke `b -> a`.
    pub work_expansion: f64,
    /// Work extracted on the compression stroke `a -> b` (usually negative).
    pub work_compression: f64,
    /// Net work extracted per cycle.
    pub work: f64,
    /// `E_n(lambda_a) Δp_n`: heat exchanged with bath `a` through level `n`.
    pub flux_a: Vec<f64>,
    /// `-E_n(lambda_b) Δp_n`: heat exchanged with bath `b` through level `n`.
    pub flux_b: Vec<f64>,
    /// `Δp_n = p_n(a) - p_n(b)`.
    pub delta_p: Vec<f64>,
    pub populations_a: PopulationVector,
    pub populations_b: PopulationVector,
}

impl CycleEnergetics {
    /// Sum of bath-`a` fluxes through idle levels.
    pub fn idle_flux_a(&self, medium: &WorkingMedium) -> f64 {
        idle_sum(medium, &self.flux_a)
    }

    /// Sum of bath-`b` fluxes through idle levels.
    pub fn idle_flux_b(&self, medium: &WorkingMedium) -> f64 {
        idle_sum(medium, &self.flux_b)
    }
}

fn idle_sum(medium: &WorkingMedium, flux: &[f64]) -> f64 {
    medium
        .levels()
        .iter()
        .zip(flux)
        .filter(|(l, _)| l.is_idle())
        .map(|(_, q)| q)
        .sum()
}

/// Full cycle energetics. Fails if any two levels cross between `lambda_b`
/// and `lambda_a`, since the adiabatic strokes are then undefined.
pub fn cycle_energetics(medium: &WorkingMedium, params: &CycleParams) -> Result<CycleEnergetics> {
    medium.check_no_crossing(params.lambda_b, params.lambda_a)?;
    Ok(cycle_energetics_unchecked(medium, params))
}

/// [`cycle_energetics`] without the crossing guard, for probing parameters
/// that sit exactly on a crossing (e.g. `J = h_b/4`).
pub fn cycle_energetics_unchecked(medium: &WorkingMedium, params: &CycleParams) -> CycleEnergetics {
    let pa = thermal_populations(medium, params.lambda_a, params.t_a)
        .expect("CycleParams holds a positive T_a");
    let pb = thermal_populations(medium, params.lambda_b, params.t_b)
        .expect("CycleParams holds a positive T_b");
    let ea = medium.energies(params.lambda_a);
    let eb = medium.energies(params.lambda_b);
    let delta_p = population_shift(&pa, &pb);

    let flux_a: Vec<f64> = ea.iter().zip(&delta_p).map(|(e, d)| e * d).collect();
    let flux_b: Vec<f64> = eb.iter().zip(&delta_p).map(|(e, d)| -(e * d)).collect();
    let heat_a = flux_a.iter().sum();
    let heat_b = flux_b.iter().sum();

    let work_expansion = pb.probs.iter().zip(eb.iter().zip(&ea)).map(|(p, (b, a))| p * (b - a)).sum();
    let work_compression = pa.probs.iter().zip(ea.iter().zip(&eb)).map(|(p, (a, b))| p * (a - b)).sum();
    let work = delta_p.iter().zip(ea.iter().zip(&eb)).map(|(d, (a, b))| d * (a - b)).sum();

    CycleEnergetics {
        heat_a,
        heat_b,
        work_expansion,
        work_compression,
        work,
        flux_a,
        flux_b,
        delta_p,
        populations_a: pa,
        populations_b: pb,
    }
}

/// Populations carried unchanged to a new control value.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticImage {
    pub probs: Vec<f64>,
    pub energies: Vec<f64>,
    pub lambda: f64,
    /// Temperature of the Gibbs state matching the image, if there is one.
    pub temperature: Option<f64>,
}

impl AdiabaticImage {
    pub fn is_thermal(&self) -> bool {
        self.temperature.is_some()
    }
}

const THERMAL_LOG_TOL: f64 = 1e-9;

/// Applies a quantum-adiabatic stroke to `populations` and tests whether the
/// result is again a Gibbs state.
pub fn adiabatic_image(
    populations: &PopulationVector,
    medium: &WorkingMedium,
    lambda_target: f64,
) -> Result<AdiabaticImage> {
    let lambda_target = positive("lambda_target", lambda_target)?;
    let source = populations.lambda;
    if source != lambda_target {
        medium.check_no_crossing(source.min(lambda_target), source.max(lambda_target))?;
    }
    let energies = medium.energies(lambda_target);
    let temperature = if source == lambda_target {
        Some(populations.temperature)
    } else {
        fit_temperature(medium, &populations.log_probs, &energies)
    };
    Ok(AdiabaticImage {
        probs: populations.probs.clone(),
        energies,
        lambda: lambda_target,
        temperature,
    })
}

/// Finds `T` with `ln(p_n/g_n) - ln(p_m/g_m) = -(E_n - E_m)/T` for all pairs,
/// referenced to the most populated level.
fn fit_temperature(medium: &WorkingMedium, log_probs: &[f64], energies: &[f64]) -> Option<f64> {
    let reduced: Vec<f64> = log_probs
        .iter()
        .zip(medium.levels())
        .map(|(lp, l)| lp - f64::from(l.degeneracy()).ln())
        .collect();
    let reference = (0..reduced.len()).max_by(|&a, &b| reduced[a].total_cmp(&reduced[b]))?;
    let pivot = (0..energies.len()).max_by(|&a, &b| {
        (energies[a] - energies[reference])
            .abs()
            .total_cmp(&(energies[b] - energies[reference]).abs())
    })?;
    let de = energies[pivot] - energies[reference];
    if de == 0.0 {
        // flat spectrum: only the uniform state is thermal, at infinite T
        return None;
    }
    let beta = -(reduced[pivot] - reduced[reference]) / de;
    if !(beta.is_finite() && beta > 0.0) {
        return None;
    }
    let consistent = reduced.iter().zip(energies).all(|(lp, e)| {
        let dl = lp - reduced[reference];
        let residual = dl + beta * (e - energies[reference]);
        residual.abs() <= THERMAL_LOG_TOL * dl.abs().max(1.0)
    });
    consistent.then(|| 1.0 / beta)
}
