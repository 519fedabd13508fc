//! Zone boundaries of the coupled-spin cycle: numerical solvers for the
//! engine borders and the forbidden `T_a` gap, plus the closed-form
//! asymptotes and efficiency thresholds.
//!
//! The engine border is `W = 0`, i.e. `f_a = f_b`. Writing `s = 4J/h_a`,
//! both sides become one function of temperature each:
//!
//! ```text
//! G(T)    = g(2 h_a / T, s)
//! Gbar(T) = g(2 h_b / T, r s)
//! ```
//!
//! For `J > h_a/4` both are single-peaked in `T`. `Gbar` peaks at `T_b0` with
//! value `Gbar_max`; `G` exceeds `Gbar_max` exactly on `(T_a1, T_a2)`, and no
//! `T_b` makes an engine there.

use serde::Serialize;

use crate::error::{non_negative, positive, Error, Result};
use crate::numerics::{bisect, golden_section_max, Extremum, DEFAULT_MAX_ITER};
use crate::spectrum::SpinModelParams;
use crate::thermo::g_unchecked;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Peak bracketing gives up beyond this many multiples of `h_a`.
const BRACKET_LIMIT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapIterations {
    pub peak_hot: usize,
    pub peak_cold: usize,
    pub lower: usize,
    pub upper: usize,
}

/// The forbidden interval `(T_a1, T_a2)` and the cold-bath temperature
/// `T_b0` at which both of its ends are reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapResult {
    pub t_a1: f64,
    pub t_b0: f64,
    pub t_a2: f64,
    pub gbar_max: f64,
    /// Temperature at which `G` peaks; separates the two engine branches.
    pub t_g_peak: f64,
    pub iterations: GapIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `T_a+(T_b)`: the border of the `T_a > T_b` engine zone.
    Upper,
    /// `T_a-(T_b)`: the border of the counter-rotating engine zone.
    Lower,
}

struct WorkCurves {
    h_a: f64,
    h_b: f64,
    s: f64,
    rs: f64,
}

impl WorkCurves {
    fn new(spin: &SpinModelParams) -> Self {
        WorkCurves {
            h_a: spin.h_a,
            h_b: spin.h_b,
            s: 4.0 * spin.j / spin.h_a,
            rs: 4.0 * spin.j / spin.h_b,
        }
    }

    fn hot(&self, t: f64) -> f64 {
        g_unchecked(2.0 * self.h_a / t, self.s)
    }

    fn cold(&self, t: f64) -> f64 {
        g_unchecked(2.0 * self.h_b / t, self.rs)
    }
}

/// Brackets the peak of a single-peaked `f` by doubling outward from
/// `[scale/10, 10 scale]`, then refines it by golden-section search.
fn locate_peak<F>(f: F, scale: f64, limit: f64, tol: f64, what: &'static str) -> Result<Extremum>
where
    F: Fn(f64) -> f64,
{
    let floor = scale * 1e-6;
    let mut lo = scale / 10.0;
    while f(lo / 2.0) >= f(lo) {
        lo /= 2.0;
        if lo < floor {
            return Err(Error::BracketFailure { what, limit: floor });
        }
    }
    let mut hi = 10.0 * scale;
    while f(2.0 * hi) >= f(hi) {
        hi *= 2.0;
        if hi > limit {
            return Err(Error::BracketFailure { what, limit });
        }
    }
    golden_section_max(&f, lo / 2.0, 2.0 * hi, tol, DEFAULT_MAX_ITER)
}

/// Solves `curve(T) = level` on the side of the peak at `peak` selected by
/// `branch`, where `curve` is monotone and falls below `level` far away.
fn solve_branch<F>(curve: F, level: f64, peak: f64, branch: Branch, tol: f64) -> Result<(f64, usize)>
where
    F: Fn(f64) -> f64,
{
    let mut far = peak;
    for _ in 0..2100 {
        far = match branch {
            Branch::Upper => far * 2.0,
            Branch::Lower => far / 2.0,
        };
        if curve(far) < level {
            let root = bisect(|t| curve(t) - level, peak, far, tol, DEFAULT_MAX_ITER)?;
            return Ok((root.x, root.iterations));
        }
        if !(far.is_finite() && far > 0.0) {
            break;
        }
    }
    Err(Error::BracketFailure {
        what: "engine boundary",
        limit: far,
    })
}

/// Locates the `T_a` gap for `J > h_a/4`.
pub fn find_gap(spin: &SpinModelParams, tol: f64) -> Result<GapResult> {
    let tol = positive("tol", tol)?;
    if spin.j <= spin.h_a / 4.0 {
        return Err(Error::NoGap {
            j: spin.j,
            h_a: spin.h_a,
        });
    }
    let curves = WorkCurves::new(spin);
    let limit = BRACKET_LIMIT * spin.h_a;
    let cold_peak = locate_peak(|t| curves.cold(t), spin.h_b, limit, tol, "peak of Gbar")?;
    let hot_peak = locate_peak(|t| curves.hot(t), spin.h_a, limit, tol, "peak of G")?;
    let level = cold_peak.value;
    let (t_a1, lower) = solve_branch(|t| curves.hot(t), level, hot_peak.x, Branch::Lower, tol)?;
    let (t_a2, upper) = solve_branch(|t| curves.hot(t), level, hot_peak.x, Branch::Upper, tol)?;
    Ok(GapResult {
        t_a1,
        t_b0: cold_peak.x,
        t_a2,
        gbar_max: level,
        t_g_peak: hot_peak.x,
        iterations: GapIterations {
            peak_hot: hot_peak.iterations,
            peak_cold: cold_peak.iterations,
            lower,
            upper,
        },
    })
}

/// Hot-bath temperature on the engine border `W = 0` for a given `T_b`.
///
/// Returns `None` when the requested branch has no solution: the lower branch
/// for `J < h_b/4`, or a `T_b` whose work function is out of the branch's
/// range.
pub fn engine_boundary_ta(spin: &SpinModelParams, t_b: f64, branch: Branch, tol: f64) -> Result<Option<f64>> {
    let t_b = positive("T_b", t_b)?;
    let tol = positive("tol", tol)?;
    spin.check_no_crossing()?;
    let curves = WorkCurves::new(spin);
    let level = curves.cold(t_b);
    if !(level > 0.0) {
        return Ok(None);
    }
    if curves.s > 1.0 {
        let limit = BRACKET_LIMIT * spin.h_a;
        let peak = locate_peak(|t| curves.hot(t), spin.h_a, limit, tol, "peak of G")?;
        if level >= peak.value {
            return Ok(None);
        }
        let (t, _) = solve_branch(|t| curves.hot(t), level, peak.x, branch, tol)?;
        Ok(Some(t))
    } else {
        // G falls monotonically from its T -> 0 limit (1 for s < 1) to 0
        if branch == Branch::Lower || level >= 1.0 {
            return Ok(None);
        }
        let mut start = spin.h_a;
        while curves.hot(start) <= level {
            start /= 2.0;
            if start < f64::MIN_POSITIVE {
                return Ok(None);
            }
        }
        let (t, _) = solve_branch(|t| curves.hot(t), level, start, Branch::Upper, tol)?;
        Ok(Some(t))
    }
}

/// Slopes and intercepts of the large- and small-temperature zone borders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoteSet {
    pub j: f64,
    pub h_a: f64,
    pub h_b: f64,
    pub r: f64,
    /// Slope of the lower engine border at small temperatures; only for `J > h_a/4`.
    pub r_e: Option<f64>,
    pub r_ah: f64,
    pub r_hr: f64,
    pub s_ah: f64,
    pub s_hr: f64,
    /// Upward shift `2J(r - 1)` of the upper engine border at large `T_b`.
    pub upper_e_shift: f64,
}

pub fn asymptotes(spin: &SpinModelParams) -> AsymptoteSet {
    let SpinModelParams { j, h_a, h_b } = *spin;
    let r = h_a / h_b;
    let j2 = j * j;
    let r_ah = (6.0 * j2 + h_a * h_a) / (6.0 * j2 + h_a * h_b);
    let r_hr = (6.0 * j2 + h_a * h_b) / (6.0 * j2 + h_b * h_b);
    let s_ah = -j * (12.0 * j2 * (r_ah * r_ah - 1.0) - r_ah * r_ah * h_b * (2.0 * h_a + h_b) + 3.0 * h_a * h_a)
        / (6.0 * j2 + h_a * h_a);
    let s_hr = -j * (12.0 * j2 * (r_hr * r_hr - 1.0) + h_a * (2.0 * h_b + h_a) - 3.0 * h_b * h_b * r_hr * r_hr)
        / (6.0 * j2 + h_a * h_b);
    let r_e = (4.0 * j > h_a).then(|| (4.0 * j - h_a) / (4.0 * j - h_b));
    AsymptoteSet {
        j,
        h_a,
        h_b,
        r,
        r_e,
        r_ah,
        r_hr,
        s_ah,
        s_hr,
        upper_e_shift: 2.0 * j * (r - 1.0),
    }
}

impl AsymptoteSet {
    /// Upper engine border for `T_a >~ T_b` both large: `r T_b + 2J(r - 1)`.
    pub fn upper_e_high(&self, t_b: f64) -> f64 {
        self.r * t_b + self.upper_e_shift
    }

    /// Upper engine border for `T_b` small and `T_a` large:
    /// `-2J + h_a (1 + exp((8J - 2h_b)/T_b))`. Needs `J > h_b/4`.
    pub fn upper_e_low(&self, t_b: f64) -> Result<f64> {
        if 4.0 * self.j <= self.h_b {
            return Err(Error::Domain(
                "upper engine border at small T_b exists only for J > h_b/4".into(),
            ));
        }
        Ok(-2.0 * self.j + self.h_a * (1.0 + ((8.0 * self.j - 2.0 * self.h_b) / t_b).exp()))
    }

    /// Lower engine border for `T_a` small and `T_b` large:
    /// `(8J - 2h_a) / (ln(T_b + 2J - h_b) - ln h_b)`. Needs `J > h_a/4` and
    /// `T_b + 2J > 2h_b`.
    pub fn lower_e_high(&self, t_b: f64) -> Result<f64> {
        self.require_strong("lower engine border")?;
        let denom = (t_b + 2.0 * self.j - self.h_b).ln() - self.h_b.ln();
        if !(denom > 0.0) {
            return Err(Error::Domain(format!(
                "lower engine border needs T_b + 2J > 2h_b (T_b = {t_b})"
            )));
        }
        Ok((8.0 * self.j - 2.0 * self.h_a) / denom)
    }

    /// Lower engine border with both temperatures small: `r_E T_b`.
    pub fn lower_e_low(&self, t_b: f64) -> Result<f64> {
        let r_e = self.require_strong("r_E")?;
        Ok(r_e * t_b)
    }

    /// Accelerator/heater border, `Q_hot = 0`.
    pub fn accelerator_heater(&self, t_b: f64) -> f64 {
        self.r_ah * t_b + self.s_ah
    }

    /// Heater/refrigerator border, `Q_cold = 0`.
    pub fn heater_refrigerator(&self, t_b: f64) -> f64 {
        self.r_hr * t_b + self.s_hr
    }

    /// Accelerator/refrigerator border: the diagonal.
    pub fn accelerator_refrigerator(&self, t_b: f64) -> f64 {
        t_b
    }

    fn require_strong(&self, what: &str) -> Result<f64> {
        self.r_e
            .ok_or_else(|| Error::Domain(format!("{what} requires J > h_a/4 (J = {})", self.j)))
    }
}

/// Hot-limit efficiency results for `J = (h_b/4)(1 - δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyThresholds {
    pub h_a: f64,
    pub h_b: f64,
    pub j: f64,
    pub delta: f64,
    /// `T_b` below which `η(β_a -> 0) > η0`: `2 h_b δ / ln 3`.
    pub t_b_eta: f64,
    /// `T_b` below which `∂η/∂β_a > 0` at `β_a -> 0`.
    pub t_b_slope: f64,
    /// Work per cycle for `T_b << 2 h_b δ`: `2(h_a - h_b)`.
    pub w_inf: f64,
    /// The expansions behind these formulas assume `δ << 1`; false once `δ >= 0.2`.
    pub delta_small: bool,
}

pub fn efficiency_thresholds(h_a: f64, h_b: f64, j: f64) -> Result<EfficiencyThresholds> {
    let spin = SpinModelParams::new(non_negative("J", j)?, h_a, h_b)?;
    let delta = 1.0 - 4.0 * j / h_b;
    if !(delta > 0.0) {
        return Err(Error::Domain(format!(
            "efficiency thresholds need J < h_b/4 = {} (J = {j})",
            h_b / 4.0
        )));
    }
    let r = spin.ratio();
    let ln3 = 3f64.ln();
    let t_b_eta = 2.0 * h_b * delta / ln3;
    let t_b_slope = 2.0 * h_b * delta / (ln3 - (1.0 + 1.5 / r * (1.0 - delta)).ln());
    Ok(EfficiencyThresholds {
        h_a,
        h_b,
        j,
        delta,
        t_b_eta,
        t_b_slope,
        w_inf: 2.0 * (h_a - h_b),
        delta_small: delta < 0.2,
    })
}

impl EfficiencyThresholds {
    fn ratio(&self) -> f64 {
        self.h_a / self.h_b
    }

    pub fn eta0(&self) -> f64 {
        1.0 - self.h_b / self.h_a
    }

    /// `η` in the limit `T_a -> ∞`, as a function of `T_b`.
    pub fn eta_inf(&self, t_b: f64) -> f64 {
        let q = (1.0 - self.delta) / (4.0 * self.ratio());
        let damp = (-2.0 * self.h_b * self.delta / t_b).exp();
        self.eta0() / (3.0 * q * damp + 1.0 - q)
    }

    /// `W` in the limit `T_a -> ∞`, as a function of `T_b`.
    pub fn work_inf(&self, t_b: f64) -> f64 {
        let damp = (-2.0 * self.h_b * self.delta / t_b).exp();
        self.w_inf / (1.0 + damp)
    }

    /// Limit of `∂η/∂β_a` as `β_a -> 0`.
    pub fn slope_inf(&self, t_b: f64) -> f64 {
        let eta = self.eta_inf(t_b);
        let w = self.work_inf(t_b);
        let one_minus_delta = 1.0 - self.delta;
        let bracket = eta * (2.0 * self.h_a * self.h_a + 0.75 * self.h_b * self.h_b * one_minus_delta * one_minus_delta)
            - 2.0 * self.h_a * (self.h_a - self.h_b);
        eta / w * bracket
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::work_function_f;

    fn spin(j: f64) -> SpinModelParams {
        SpinModelParams::new(j, 2.0, 1.0).unwrap()
    }

    #[test]
    fn gap_reference_values() {
        let gap = find_gap(&spin(0.7), DEFAULT_TOL).unwrap();
        assert!((gap.t_a1 - 0.91).abs() <= 0.01, "{gap:?}");
        assert!((gap.t_b0 - 3.34).abs() <= 0.01, "{gap:?}");
        assert!((gap.t_a2 - 11.85).abs() <= 0.01, "{gap:?}");
        // 50-digit root finding on the same equations
        assert!((gap.t_a1 - 0.905_950_611_100_879_993).abs() < 1e-8);
        assert!((gap.t_a2 - 11.854_205_562_169_924_04).abs() < 1e-8);
        assert!((gap.t_b0 - 3.337_908_552_655_800_104).abs() < 1e-6);
        assert!((gap.gbar_max - 0.145_746_111_391_877_649_14).abs() < 1e-14);
    }

    #[test]
    fn gap_invariants() {
        for j in [0.51, 0.7, 1.0, 2.0, 5.0] {
            let sp = spin(j);
            let gap = find_gap(&sp, DEFAULT_TOL).unwrap();
            assert!(gap.t_a1 < gap.t_b0 && gap.t_b0 < gap.t_a2, "J={j}: {gap:?}");
            assert!(gap.t_a2 > sp.ratio() * gap.t_b0);
            let curves = WorkCurves::new(&sp);
            assert!((curves.hot(gap.t_a1) - gap.gbar_max).abs() < 1e-9);
            assert!((curves.hot(gap.t_a2) - gap.gbar_max).abs() < 1e-9);
            assert_eq!(curves.cold(gap.t_b0), gap.gbar_max);
        }
    }

    #[test]
    fn no_gap_below_threshold() {
        for j in [0.0, 0.2, 0.5] {
            assert!(matches!(find_gap(&spin(j), DEFAULT_TOL), Err(Error::NoGap { .. })));
        }
    }

    #[test]
    fn uncoupled_boundary_is_ratio_line() {
        let sp = spin(0.0);
        for tb in [0.1, 0.5, 1.0, 3.0, 40.0] {
            let ta = engine_boundary_ta(&sp, tb, Branch::Upper, DEFAULT_TOL).unwrap().unwrap();
            assert!((ta - 2.0 * tb).abs() < 1e-8, "{ta} vs {}", 2.0 * tb);
            assert_eq!(engine_boundary_ta(&sp, tb, Branch::Lower, DEFAULT_TOL).unwrap(), None);
        }
    }

    #[test]
    fn boundary_at_gap_temperature_returns_gap_ends() {
        let sp = spin(0.7);
        let gap = find_gap(&sp, DEFAULT_TOL).unwrap();
        let up = engine_boundary_ta(&sp, gap.t_b0, Branch::Upper, DEFAULT_TOL).unwrap().unwrap();
        let lo = engine_boundary_ta(&sp, gap.t_b0, Branch::Lower, DEFAULT_TOL).unwrap().unwrap();
        assert!((up - gap.t_a2).abs() < 1e-7);
        assert!((lo - gap.t_a1).abs() < 1e-7);
    }

    #[test]
    fn direct_gap_certificate() {
        let sp = spin(0.7);
        let gap = find_gap(&sp, DEFAULT_TOL).unwrap();
        for tb in [gap.t_b0 - 1e-3, gap.t_b0 + 1e-3] {
            let up = engine_boundary_ta(&sp, tb, Branch::Upper, DEFAULT_TOL).unwrap().unwrap();
            let lo = engine_boundary_ta(&sp, tb, Branch::Lower, DEFAULT_TOL).unwrap().unwrap();
            assert!(lo < gap.t_a1 && up > gap.t_a2, "Tb={tb}: {lo} {up}");
            assert!(up - lo > gap.t_a2 - gap.t_a1);
        }
    }

    #[test]
    fn boundary_solves_work_balance() {
        let sp = spin(0.7);
        for tb in [0.2, 1.0, 10.0, 100.0] {
            for branch in [Branch::Upper, Branch::Lower] {
                let ta = engine_boundary_ta(&sp, tb, branch, DEFAULT_TOL).unwrap().unwrap();
                let fa = work_function_f(2.0, 0.7, ta).unwrap();
                let fb = work_function_f(1.0, 0.7, tb).unwrap();
                assert!((fa - fb).abs() < 1e-9, "{branch:?} Tb={tb}");
            }
        }
    }

    #[test]
    fn boundary_inside_crossing_band_is_error() {
        assert!(matches!(
            engine_boundary_ta(&spin(0.3), 1.0, Branch::Upper, DEFAULT_TOL),
            Err(Error::CrossingDetected { .. })
        ));
    }

    #[test]
    fn upper_boundary_approaches_linear_asymptote() {
        let sp = spin(0.7);
        let asy = asymptotes(&sp);
        let ta = engine_boundary_ta(&sp, 100.0, Branch::Upper, DEFAULT_TOL).unwrap().unwrap();
        assert!((ta - 201.4).abs() / 201.4 < 0.01);
        assert!((asy.upper_e_high(100.0) - 201.4).abs() < 1e-12);
        let mut last = f64::INFINITY;
        for tb in [10.0, 30.0, 100.0, 300.0] {
            let ta = engine_boundary_ta(&sp, tb, Branch::Upper, DEFAULT_TOL).unwrap().unwrap();
            let err = (ta - asy.upper_e_high(tb)).abs() / asy.upper_e_high(tb);
            assert!(err < last);
            last = err;
        }
    }

    #[test]
    fn asymptote_coefficients() {
        let a = asymptotes(&spin(0.7));
        assert!((a.r_e.unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!(a.r > a.r_ah && a.r_ah > a.r_hr && a.r_hr > 1.0);

        let a0 = asymptotes(&spin(0.0));
        assert_eq!(a0.r_ah, 2.0);
        assert_eq!(a0.r_e, None);
        assert_eq!(a0.upper_e_high(3.0), 6.0);
        assert!(a0.lower_e_low(1.0).is_err());
        assert!(a0.upper_e_low(0.1).is_err());

        let big = asymptotes(&spin(100.0));
        assert!((big.r_ah - 1.0).abs() < 1e-3);
        assert!((big.r_hr - 1.0).abs() < 1e-3);
        // r_E - 1 = (h_b - h_a)/(4J - h_b) decays more slowly
        assert!((big.r_e.unwrap() - 1.0).abs() < 3e-3);
        let huge = asymptotes(&spin(1000.0));
        assert!((huge.r_e.unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn intercepts_match_large_temperature_borders() {
        // Q_a = 0 and Q_b = 0 solved at T_b = 1e5 with 60-digit arithmetic
        let a = asymptotes(&spin(0.7));
        assert!((a.s_ah - (-0.792_473_713_984)).abs() < 1e-4);
        assert!((a.s_hr - (-0.941_950_951_482)).abs() < 1e-4);
        let b = asymptotes(&SpinModelParams::new(1.5, 3.0, 1.0).unwrap());
        assert!((b.s_ah - (-2.479_304_514_43)).abs() < 1e-3);
        assert!((b.s_hr - (-1.734_277_023_46)).abs() < 1e-3);
    }

    #[test]
    fn lower_border_formulas() {
        let a = asymptotes(&spin(0.7));
        let left = a.lower_e_high(50.0).unwrap();
        assert!((left - 1.6 / ((50.0f64 + 0.4).ln())).abs() < 1e-12);
        assert!(a.lower_e_high(0.1).is_err());
        assert!((a.lower_e_low(0.9).unwrap() - 0.4).abs() < 1e-15);
        let up = a.upper_e_low(0.2).unwrap();
        assert!((up - (-1.4 + 2.0 * (1.0 + (3.6f64 / 0.2).exp()))).abs() < 1e-6 * up);
    }

    #[test]
    fn thresholds_reference_values() {
        let t = efficiency_thresholds(2.0, 1.0, 0.24).unwrap();
        assert!((t.delta - 0.04).abs() < 1e-15);
        assert!((t.t_b_eta - 0.073).abs() < 5e-4);
        assert!((t.t_b_slope - 0.144).abs() < 1e-3);
        assert_eq!(t.w_inf, 2.0);
        assert!(t.delta_small);
        assert!(t.t_b_slope > t.t_b_eta);
    }

    #[test]
    fn thresholds_vanish_with_delta() {
        let t = efficiency_thresholds(2.0, 1.0, 0.25 * (1.0 - 1e-9)).unwrap();
        assert!(t.t_b_eta < 1e-8 && t.t_b_slope < 1e-8);
        assert!(efficiency_thresholds(2.0, 1.0, 0.25).is_err());
        assert!(efficiency_thresholds(2.0, 1.0, 0.6).is_err());
        assert!(!efficiency_thresholds(2.0, 1.0, 0.1).unwrap().delta_small);
    }

    #[test]
    fn hot_limit_curves_cross_thresholds() {
        let t = efficiency_thresholds(2.0, 1.0, 0.24).unwrap();
        let eta0 = t.eta0();
        assert!(t.eta_inf(t.t_b_eta * 0.99) > eta0);
        assert!(t.eta_inf(t.t_b_eta * 1.01) < eta0);
        assert!(t.slope_inf(t.t_b_slope * 0.99) > 0.0);
        assert!(t.slope_inf(t.t_b_slope * 1.01) < 0.0);
        assert!((t.work_inf(1e-4) - 2.0).abs() < 1e-12);
        assert!(t.eta_inf(1e-6).is_finite());
    }
}
