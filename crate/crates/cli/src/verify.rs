//! Invariant checks shipped with the binary.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use otto_core::boundaries::{
    asymptotes, efficiency_thresholds, engine_boundary_ta, find_gap, Branch, DEFAULT_TOL,
};
use otto_core::regimes::{default_zero_tolerance, hot_cold};
use otto_core::sweep::{emit, read_records, run_plan, run_sweep, OutputFormat, SweepConfig};
use otto_core::thermo::{
    adiabatic_image, idle_population_high_t, idle_population_low_t, spin_idle_population,
    work_function_high_t, work_function_low_t,
};
use otto_core::{
    cycle_energetics, cycle_energetics_unchecked, efficiency_report, g, thermal_populations,
    work_function_f, CycleParams, Level, RegimeLabel, SpinModelParams, WorkingMedium,
};

type Outcome = Result<String, String>;

pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub outcome: Outcome,
}

#[derive(Clone, Copy)]
pub struct Ctx {
    pub seed: u64,
    pub points: usize,
}

impl Ctx {
    fn rng(&self, salt: u64) -> StdRng {
        StdRng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

type CheckFn = fn(&Ctx) -> Outcome;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("spectrum", "spin and qutrit levels", levels),
    ("spectrum", "crossing band detection", crossing_band),
    ("thermo", "first law", first_law),
    ("thermo", "clausius inequality", clausius),
    ("thermo", "equal temperatures give no work", equal_temperatures),
    ("thermo", "f(h,J,T) = g(2h/T, 4J/h)", f_is_g),
    ("thermo", "g zero set and positivity", g_positive),
    ("thermo", "g limits at x = 1e4", g_limits),
    ("thermo", "g increasing in x for y <= 1", g_monotone),
    ("thermo", "g single-peaked in x for y > 1", g_single_peak),
    ("thermo", "g decreasing in y", g_decreasing_y),
    ("thermo", "g(rx,y) > g(x,ry)", g_scaling),
    ("thermo", "high-T residual scales as T^-3", high_t),
    ("thermo", "low-T step forms", low_t),
    ("thermo", "adiabatic images", adiabatic),
    ("regimes", "sign table exhaustive", sign_table),
    ("regimes", "engines below Carnot", carnot),
    ("regimes", "flux decomposition of efficiency", decomposition),
    ("regimes", "spin idle flux is 8J dp_1", idle_flux),
    ("regimes", "no counter engine for J <= h_b/4", no_counter_engine),
    ("regimes", "counter engine for J > h_a/4", counter_engine),
    ("regimes", "efficiency bound for J < h_b/4", eta_bound),
    ("boundaries", "gap location and invariants", gap),
    ("boundaries", "no engine inside the gap", gap_interior),
    ("boundaries", "direct gap at T_b0", direct_gap),
    ("boundaries", "border asymptotes", border_asymptotes),
    ("boundaries", "slope ordering", slope_ordering),
    ("boundaries", "efficiency thresholds", thresholds),
    ("boundaries", "efficiency rises with beta_a", rising_efficiency),
    ("sweep", "uncoupled zone map", zone_map),
    ("sweep", "deterministic output", deterministic),
    ("sweep", "record round trip", round_trip),
];

pub fn run(ctx: Ctx) -> Vec<Check> {
    CHECKS
        .par_iter()
        .map(|&(module, name, check)| Check {
            module,
            name,
            outcome: check(&ctx),
        })
        .collect()
}

pub fn render(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let (status, detail) = match &c.outcome {
            Ok(d) => ("pass", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        out += &format!("{status}  {:<10}  {:<width$}  {detail}\n", c.module, c.name);
    }
    let failed = checks.iter().filter(|c| c.outcome.is_err()).count();
    out += &format!("{} checks, {failed} failed\n", checks.len());
    out
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

struct Case {
    medium: WorkingMedium,
    params: CycleParams,
}

/// Coupling outside the crossing band `(λ_b/4, λ_a/4)`.
fn coupling(rng: &mut StdRng, lambda_a: f64, lambda_b: f64) -> f64 {
    let u: f64 = rng.gen();
    if rng.gen() {
        u * 0.999 * lambda_b / 4.0
    } else {
        lambda_a / 4.0 * (1.001 + 3.0 * u)
    }
}

fn custom_medium(rng: &mut StdRng, lambda_a: f64, lambda_b: f64) -> WorkingMedium {
    let mut coeffs: Vec<f64> = Vec::new();
    while coeffs.len() < 3 {
        let c = f64::from(rng.gen_range(-12i32..=12)) / 4.0;
        if !coeffs.contains(&c) {
            coeffs.push(c);
        }
    }
    coeffs.sort_by(f64::total_cmp);
    let span = |c: f64| [c * lambda_a, c * lambda_b];
    let lo = span(coeffs[0]).into_iter().fold(f64::INFINITY, f64::min);
    let hi = span(coeffs[2]).into_iter().fold(f64::NEG_INFINITY, f64::max);
    let margin = rng.gen_range(0.05..3.0);
    let offset = if rng.gen() { hi + margin } else { lo - margin };
    let mut levels = vec![Level::idle(offset).with_degeneracy(rng.gen_range(1..=2)).unwrap()];
    levels.extend(coeffs.into_iter().map(Level::working));
    WorkingMedium::new("random", levels).unwrap()
}

fn random_case(rng: &mut StdRng) -> Case {
    let lambda_b = rng.gen_range(0.2..3.0);
    let lambda_a = lambda_b * rng.gen_range(1.01..4.0);
    let t_a = log_uniform(rng, 0.05, 50.0);
    let t_b = log_uniform(rng, 0.05, 50.0);
    let medium = match rng.gen_range(0..3) {
        0 => WorkingMedium::coupled_spin(coupling(rng, lambda_a, lambda_b)).unwrap(),
        1 => WorkingMedium::qutrit(coupling(rng, lambda_a, lambda_b)).unwrap(),
        _ => custom_medium(rng, lambda_a, lambda_b),
    };
    Case {
        medium,
        params: CycleParams::new(lambda_a, lambda_b, t_a, t_b).unwrap(),
    }
}

fn for_random_cases<F>(ctx: &Ctx, salt: u64, mut check: F) -> Outcome
where
    F: FnMut(&Case) -> Result<bool, String>,
{
    let mut rng = ctx.rng(salt);
    let mut hits = 0;
    for _ in 0..ctx.points {
        if check(&random_case(&mut rng))? {
            hits += 1;
        }
    }
    Ok(format!("{} points, {hits} relevant", ctx.points))
}

fn spin_cycle(j: f64, t_a: f64, t_b: f64) -> (otto_core::CycleEnergetics, otto_core::RegimeReport) {
    let m = WorkingMedium::coupled_spin(j).unwrap();
    let p = CycleParams::new(2.0, 1.0, t_a, t_b).unwrap();
    let e = cycle_energetics_unchecked(&m, &p);
    let r = efficiency_report(&e, &p, &m);
    (e, r)
}

fn levels(_: &Ctx) -> Outcome {
    let spin = WorkingMedium::coupled_spin(0.0).map_err(|e| e.to_string())?;
    ensure!(spin.energies(1.0) == [0.0, -2.0, 0.0, 2.0], "J=0 spin energies {:?}", spin.energies(1.0));
    for (j, h, t) in [(0.3, 1.0, 0.7), (0.7, 2.0, 5.0), (1.5, 0.4, 0.05)] {
        let zs = thermal_populations(&WorkingMedium::coupled_spin(j).unwrap(), h, t).unwrap().log_z.exp();
        let zq = thermal_populations(&WorkingMedium::qutrit(j).unwrap(), h, t).unwrap().log_z.exp();
        ensure!(((zs - 1.0) - zq).abs() <= 1e-12 * zs, "Z_spin - 1 != Z_qutrit at J={j}");
    }
    Ok("Z_qutrit = Z_spin - 1".into())
}

fn crossing_band(_: &Ctx) -> Outcome {
    for i in 0..=200 {
        let j = i as f64 * 0.005;
        let crosses = SpinModelParams::new(j, 2.0, 1.0).unwrap().check_no_crossing().is_err();
        let inside = (0.25..=0.5).contains(&j);
        ensure!(crosses == inside, "J={j}: crossing={crosses}");
    }
    Ok("crossing iff h_b/4 <= J <= h_a/4".into())
}

fn first_law(ctx: &Ctx) -> Outcome {
    for_random_cases(ctx, 1, |c| {
        let e = cycle_energetics(&c.medium, &c.params).map_err(|e| e.to_string())?;
        let scale = e.heat_a.abs().max(e.heat_b.abs()).max(e.work.abs()).max(f64::MIN_POSITIVE);
        ensure!((e.work - e.heat_a - e.heat_b).abs() <= 1e-12 * scale, "W != Q_a + Q_b at {:?}", c.params);
        ensure!(e.flux_a.iter().sum::<f64>() == e.heat_a, "per-level heat does not add up");
        Ok(true)
    })
}

fn clausius(ctx: &Ctx) -> Outcome {
    for_random_cases(ctx, 2, |c| {
        let e = cycle_energetics(&c.medium, &c.params).map_err(|e| e.to_string())?;
        let s = e.heat_a / c.params.t_a + e.heat_b / c.params.t_b;
        ensure!(s <= 1e-12, "Q_a/T_a + Q_b/T_b = {s} at {:?}", c.params);
        Ok(true)
    })
}

fn equal_temperatures(ctx: &Ctx) -> Outcome {
    for_random_cases(ctx, 3, |c| {
        let p = CycleParams { t_b: c.params.t_a, ..c.params };
        let e = cycle_energetics(&c.medium, &p).map_err(|e| e.to_string())?;
        ensure!(e.work <= 1e-12 * e.heat_a.abs().max(e.heat_b.abs()), "W = {} at T_a = T_b", e.work);
        ensure!(!efficiency_report(&e, &p, &c.medium).is_engine(), "engine at T_a = T_b");
        Ok(true)
    })
}

fn f_is_g(_: &Ctx) -> Outcome {
    let mut n = 0;
    for h in [0.1, 0.5, 1.0, 2.0, 7.5] {
        for j in [0.0, 0.05, 0.3, 1.0, 4.0] {
            for k in 0..60 {
                let t = 0.01 * 1.2f64.powi(k);
                let f = work_function_f(h, j, t).unwrap();
                let via_g = g(2.0 * h / t, 4.0 * j / h).unwrap();
                ensure!((f - via_g).abs() <= 1e-12 * f.abs().max(1e-300), "h={h} J={j} T={t}");
                n += 1;
            }
        }
    }
    Ok(format!("{n} grid points"))
}

fn g_positive(_: &Ctx) -> Outcome {
    for i in 0..=50 {
        let y = i as f64 * 0.1;
        ensure!(g(0.0, y).unwrap() == 0.0, "g(0, {y}) != 0");
        for k in 1..=300 {
            let x = k as f64 * 0.1;
            ensure!(g(x, y).unwrap() > 0.0, "g({x}, {y}) <= 0");
        }
    }
    Ok("g = 0 iff x = 0".into())
}

fn g_limits(_: &Ctx) -> Outcome {
    let x = 1e4;
    for (y, limit) in [(0.0, 1.0), (0.5, 1.0), (0.99, 1.0), (1.0, 0.5), (1.01, 0.0), (3.0, 0.0)] {
        let v = g(x, y).unwrap();
        ensure!((v - limit).abs() < 1e-6, "g(1e4, {y}) = {v}, expected {limit}");
    }
    Ok("1, 1/2, 0 for y <, =, > 1".into())
}

fn dgdx(x: f64, y: f64) -> f64 {
    let h = 1e-4 * x.max(1.0);
    g(x + h, y).unwrap() - g((x - h).max(0.0), y).unwrap()
}

fn g_monotone(_: &Ctx) -> Outcome {
    for i in 0..=20 {
        let y = i as f64 / 20.0;
        for k in 1..=400 {
            let x = k as f64 * 15.0 / 400.0;
            ensure!(dgdx(x, y) > 0.0, "dg/dx <= 0 at ({x}, {y})");
        }
    }
    Ok("finite differences on 21 x 400 grid".into())
}

fn g_single_peak(_: &Ctx) -> Outcome {
    for y in [1.05, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let signs: Vec<bool> = (1..=4000)
            .map(|k| dgdx(k as f64 * 0.01, y))
            .filter(|d| *d != 0.0)
            .map(|d| d > 0.0)
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        ensure!(changes == 1 && signs[0], "y={y}: {changes} sign changes of dg/dx");
    }
    Ok("one sign change of dg/dx".into())
}

fn g_decreasing_y(_: &Ctx) -> Outcome {
    for i in 1..=50 {
        let x = i as f64 * 0.2;
        for k in 0..100 {
            let y = k as f64 * 0.05;
            ensure!(g(x, y + 1e-5).unwrap() < g(x, y).unwrap(), "dg/dy >= 0 at ({x}, {y})");
        }
    }
    Ok("finite differences on 50 x 100 grid".into())
}

fn g_scaling(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(4);
    for _ in 0..ctx.points {
        let x = rng.gen_range(0.01..8.0);
        let y = rng.gen_range(0.0..4.0);
        let r = rng.gen_range(1.05..4.0);
        ensure!(g(r * x, y).unwrap() > g(x, r * y).unwrap(), "fails at x={x} y={y} r={r}");
    }
    Ok(format!("{} random (x, y, r)", ctx.points))
}

fn high_t(_: &Ctx) -> Outcome {
    for (h, j) in [(1.0, 0.24), (2.0, 0.7), (0.5, 0.1)] {
        for t in [100.0, 200.0, 400.0] {
            let rf = |t: f64| work_function_f(h, j, t).unwrap() - work_function_high_t(h, j, t);
            let rp = |t: f64| spin_idle_population(h, j, t).unwrap() - idle_population_high_t(h, j, t);
            let (a, b) = (rf(t) / rf(2.0 * t), rp(t) / rp(2.0 * t));
            ensure!((a - 8.0).abs() < 0.4 && (b - 8.0).abs() < 0.4, "residual ratios {a}, {b} at T={t}");
        }
    }
    Ok("residual ratio 8 on doubling T".into())
}

fn low_t(_: &Ctx) -> Outcome {
    for (h, j) in [(1.0f64, 0.24f64), (1.0, 0.1), (2.0, 0.7), (1.0, 0.7)] {
        let t_max = (8.0 * j).min(2.0 * h) / 20.0;
        for k in 0..10 {
            let t = t_max * 0.5f64.powi(k);
            let df = (work_function_f(h, j, t).unwrap() - work_function_low_t(h, j, t)).abs();
            let dp = (spin_idle_population(h, j, t).unwrap() - idle_population_low_t(h, j, t)).abs();
            ensure!(df < 1e-8 && dp < 1e-8, "h={h} J={j} T={t}: {df:e} {dp:e}");
        }
    }
    Ok("within 1e-8".into())
}

fn adiabatic(_: &Ctx) -> Outcome {
    let free = WorkingMedium::coupled_spin(0.0).unwrap();
    let pops = thermal_populations(&free, 1.0, 1.0).unwrap();
    let image = adiabatic_image(&pops, &free, 2.0).map_err(|e| e.to_string())?;
    let t = image.temperature.ok_or("J=0 image not thermal")?;
    ensure!((t - 2.0).abs() < 1e-12, "J=0 image at T'={t}");
    let coupled = WorkingMedium::coupled_spin(0.7).unwrap();
    let pops = thermal_populations(&coupled, 1.0, 1.0).unwrap();
    let image = adiabatic_image(&pops, &coupled, 2.0).map_err(|e| e.to_string())?;
    ensure!(image.temperature.is_none(), "J=0.7 image reported thermal");
    Ok("J=0 thermal at T'=2, J=0.7 not thermal".into())
}

fn sign_of(v: f64, tol: f64) -> i8 {
    if v.abs() < tol {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

fn sign_table(ctx: &Ctx) -> Outcome {
    let allowed = [(1, 1, -1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1)];
    for_random_cases(ctx, 5, |c| {
        let e = cycle_energetics(&c.medium, &c.params).map_err(|e| e.to_string())?;
        let tol = default_zero_tolerance(&e);
        let (q_hot, q_cold, _, _) = hot_cold(&e, &c.params);
        let t = (sign_of(e.work, tol), sign_of(q_hot, tol), sign_of(q_cold, tol));
        let boundary = t.0 == 0 || t.1 == 0 || t.2 == 0;
        ensure!(boundary || allowed.contains(&t), "forbidden signs {t:?} at {:?}", c.params);
        Ok(!boundary)
    })
}

fn carnot(ctx: &Ctx) -> Outcome {
    for_random_cases(ctx, 6, |c| {
        let e = cycle_energetics(&c.medium, &c.params).map_err(|e| e.to_string())?;
        let r = efficiency_report(&e, &c.params, &c.medium);
        if let Some(eta) = r.eta {
            ensure!(eta <= r.eta_carnot + 1e-12, "eta {eta} > Carnot {}", r.eta_carnot);
        }
        Ok(r.eta.is_some())
    })
}

fn decomposition(ctx: &Ctx) -> Outcome {
    for_random_cases(ctx, 7, |c| {
        let e = cycle_energetics(&c.medium, &c.params).map_err(|e| e.to_string())?;
        let r = efficiency_report(&e, &c.params, &c.medium);
        if let (Some(eta), Some(via)) = (r.eta, r.eta_from_decomposition()) {
            ensure!((eta - via).abs() <= 1e-10 * eta.abs(), "W/Q_hot = {eta}, decomposition {via}");
        }
        Ok(r.eta.is_some())
    })
}

fn idle_flux(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(8);
    for _ in 0..ctx.points {
        let lambda_b = rng.gen_range(0.2..3.0);
        let lambda_a = lambda_b * rng.gen_range(1.01..4.0);
        let j = coupling(&mut rng, lambda_a, lambda_b);
        let m = WorkingMedium::coupled_spin(j).unwrap();
        let p = CycleParams::new(lambda_a, lambda_b, log_uniform(&mut rng, 0.05, 50.0), log_uniform(&mut rng, 0.05, 50.0))
            .unwrap();
        let e = cycle_energetics(&m, &p).map_err(|e| e.to_string())?;
        ensure!(e.idle_flux_a(&m) == -8.0 * j * e.delta_p[0], "idle flux mismatch at J={j}");
    }
    Ok(format!("{} random spin cycles", ctx.points))
}

fn log_axis(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
}

fn no_counter_engine(_: &Ctx) -> Outcome {
    let mut n = 0;
    for j in [0.0, 0.1, 0.2, 0.25] {
        for t_b in log_axis(0.05, 50.0, 120) {
            for t_a in log_axis(0.05, 50.0, 120).filter(|&t| t < t_b) {
                let (_, r) = spin_cycle(j, t_a, t_b);
                ensure!(!r.is_engine(), "engine at J={j} T_a={t_a} T_b={t_b}");
                n += 1;
            }
        }
    }
    Ok(format!("{n} counter-rotating points"))
}

fn counter_engine(_: &Ctx) -> Outcome {
    for j in [0.51, 0.7, 2.0] {
        for t_b in log_axis(0.05, 50.0, 60) {
            let mut t_a = t_b * 0.999;
            let found = loop {
                if spin_cycle(j, t_a, t_b).1.is_engine() {
                    break true;
                }
                t_a *= 0.9;
                if t_a < 1e-3 {
                    break false;
                }
            };
            ensure!(found, "no engine below T_b={t_b} at J={j}");
        }
    }
    Ok("engine found in every T_b column".into())
}

fn eta_bound(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(9);
    let mut engines = 0;
    for _ in 0..ctx.points {
        let h_b = rng.gen_range(0.2..3.0);
        let h_a = h_b * rng.gen_range(1.01..4.0);
        let j = rng.gen_range(0.0..h_b / 4.0 * 0.999);
        let t_b = log_uniform(&mut rng, 0.02, 20.0);
        let t_a = t_b * log_uniform(&mut rng, 1.0, 200.0);
        let m = WorkingMedium::coupled_spin(j).unwrap();
        let p = CycleParams::new(h_a, h_b, t_a, t_b).unwrap();
        let e = cycle_energetics(&m, &p).map_err(|e| e.to_string())?;
        let r = efficiency_report(&e, &p, &m);
        if let Some(eta) = r.eta {
            let bound = r.eta_bound.ok_or("bound missing for ordinary spin engine")?;
            ensure!(eta <= bound + 1e-12, "eta {eta} above bound {bound}");
            ensure!(eta <= 1.0 - t_b / t_a + 1e-12, "eta {eta} above Carnot");
            engines += 1;
        }
    }
    Ok(format!("{engines} engines"))
}

fn gap(_: &Ctx) -> Outcome {
    let sp = SpinModelParams::new(0.7, 2.0, 1.0).unwrap();
    let gap = find_gap(&sp, DEFAULT_TOL).map_err(|e| e.to_string())?;
    for (got, want, name) in [(gap.t_a1, 0.91, "T_a1"), (gap.t_b0, 3.34, "T_b0"), (gap.t_a2, 11.85, "T_a2")] {
        ensure!((got - want).abs() <= 0.01, "{name} = {got}, expected {want}");
    }
    ensure!(gap.t_a1 < gap.t_b0 && gap.t_b0 < gap.t_a2, "ordering");
    ensure!(gap.t_a2 > sp.ratio() * gap.t_b0, "T_a2 <= r T_b0");
    for t in [gap.t_a1, gap.t_a2] {
        let v = g(4.0 / t, 1.4).unwrap();
        ensure!((v - gap.gbar_max).abs() < 1e-9, "G(T) - Gbar_max = {}", v - gap.gbar_max);
    }
    Ok(format!("T_a1={:.4} T_b0={:.4} T_a2={:.4}", gap.t_a1, gap.t_b0, gap.t_a2))
}

fn gap_interior(_: &Ctx) -> Outcome {
    let sp = SpinModelParams::new(0.7, 2.0, 1.0).unwrap();
    let gap = find_gap(&sp, DEFAULT_TOL).map_err(|e| e.to_string())?;
    for i in 1..=100 {
        let t_a = gap.t_a1 + (gap.t_a2 - gap.t_a1) * i as f64 / 101.0;
        for t_b in log_axis(1e-2, 1e3, 100) {
            let (e, _) = spin_cycle(0.7, t_a, t_b);
            ensure!(e.work < 0.0, "W = {} at T_a={t_a} T_b={t_b}", e.work);
        }
    }
    Ok("W < 0 on 100 x 100 points".into())
}

fn direct_gap(_: &Ctx) -> Outcome {
    let sp = SpinModelParams::new(0.7, 2.0, 1.0).unwrap();
    let gap = find_gap(&sp, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let solve = |t_b, branch| {
        engine_boundary_ta(&sp, t_b, branch, DEFAULT_TOL)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no {branch:?} border at T_b={t_b}"))
    };
    let up = solve(gap.t_b0, Branch::Upper)?;
    let lo = solve(gap.t_b0, Branch::Lower)?;
    ensure!((up - gap.t_a2).abs() < 1e-6 && (lo - gap.t_a1).abs() < 1e-6, "borders at T_b0: {lo}, {up}");
    for t_b in [gap.t_b0 - 1e-3, gap.t_b0 + 1e-3] {
        let (lo, up) = (solve(t_b, Branch::Lower)?, solve(t_b, Branch::Upper)?);
        ensure!(lo < gap.t_a1 && up > gap.t_a2, "T_b={t_b}: borders {lo}, {up} inside the gap");
    }
    Ok("borders touch the gap only at T_b0".into())
}

fn border_asymptotes(_: &Ctx) -> Outcome {
    let sp = SpinModelParams::new(0.7, 2.0, 1.0).unwrap();
    let a = asymptotes(&sp);
    let mut last = f64::INFINITY;
    let mut at_100 = f64::NAN;
    for t_b in [10.0, 30.0, 100.0, 300.0] {
        let numeric = engine_boundary_ta(&sp, t_b, Branch::Upper, DEFAULT_TOL)
            .map_err(|e| e.to_string())?
            .ok_or("no upper border")?;
        let err = (numeric - a.upper_e_high(t_b)).abs() / a.upper_e_high(t_b);
        ensure!(err < last, "error {err} at T_b={t_b} not below {last}");
        if t_b == 100.0 {
            at_100 = err;
        }
        last = err;
    }
    ensure!(at_100 < 0.01, "relative error {at_100} at T_b=100");
    let mut last = f64::INFINITY;
    for t_b in [0.5, 0.3, 0.2, 0.1] {
        let numeric = engine_boundary_ta(&sp, t_b, Branch::Upper, DEFAULT_TOL)
            .map_err(|e| e.to_string())?
            .ok_or("no upper border")?;
        let formula = a.upper_e_low(t_b).map_err(|e| e.to_string())?;
        let err = (numeric - formula).abs() / formula;
        ensure!(err < last, "small-T_b error {err} at T_b={t_b} not below {last}");
        last = err;
    }
    Ok(format!("{:.2e} at T_b=100", at_100))
}

fn slope_ordering(ctx: &Ctx) -> Outcome {
    let mut rng = ctx.rng(10);
    for _ in 0..1000 {
        let h_b = rng.gen_range(0.1..5.0);
        let h_a = h_b * rng.gen_range(1.01..5.0);
        let j = rng.gen_range(1e-3..10.0);
        let a = asymptotes(&SpinModelParams::new(j, h_a, h_b).unwrap());
        ensure!(a.r > a.r_ah && a.r_ah > a.r_hr && a.r_hr > 1.0, "ordering fails at {a:?}");
        if let Some(r_e) = a.r_e {
            ensure!(r_e > 0.0 && r_e < 1.0, "r_E = {r_e}");
        }
    }
    let a = asymptotes(&SpinModelParams::new(0.7, 2.0, 1.0).unwrap());
    ensure!((a.r_e.unwrap_or(0.0) - 4.0 / 9.0).abs() < 1e-15, "r_E at J=0.7");
    Ok("r > r_AH > r_HR > 1 on 1000 triples".into())
}

fn thresholds(_: &Ctx) -> Outcome {
    let t = efficiency_thresholds(2.0, 1.0, 0.24).map_err(|e| e.to_string())?;
    ensure!((t.t_b_eta - 0.0728).abs() <= 5e-4, "T_b_eta = {}", t.t_b_eta);
    ensure!((t.t_b_slope - 0.1438).abs() <= 1e-3, "T_b_slope = {}", t.t_b_slope);
    ensure!(efficiency_thresholds(2.0, 1.0, 0.25).is_err(), "J = h_b/4 accepted");
    let (_, r) = spin_cycle(0.24, 1e4, 0.05);
    let eta = r.eta.ok_or("T_a=1e4, T_b=0.05 not an engine")?;
    ensure!(eta > 0.5 && (eta - t.eta_inf(0.05)).abs() < 1e-3, "eta = {eta}, hot limit {}", t.eta_inf(0.05));
    Ok(format!("T_b_eta={:.4} T_b_slope={:.4}", t.t_b_eta, t.t_b_slope))
}

fn rising_efficiency(_: &Ctx) -> Outcome {
    let eta = |beta_a: f64| spin_cycle(0.24, 1.0 / beta_a, 0.05).1.eta;
    let (lo, hi) = (eta(1e-4 - 1e-5), eta(1e-4 + 1e-5));
    let (lo, hi) = (lo.ok_or("not an engine")?, hi.ok_or("not an engine")?);
    ensure!(hi > lo, "d eta / d beta_a <= 0 at beta_a = 1e-4");
    let best = (1..2000)
        .filter_map(|i| eta(i as f64 * 1e-2))
        .fold(f64::NEG_INFINITY, f64::max);
    ensure!(best > 0.5, "max eta = {best}");
    Ok(format!("max eta = {best:.5}"))
}

fn grid_config(j: f64, n: usize) -> SweepConfig {
    SweepConfig::from_json(&format!(
        r#"{{"medium": {{"model": "coupled-spin", "J": {j}}}, "lambda_a": 2, "lambda_b": 1,
           "axes": [{{"var": "T_a", "min": 0.05, "max": 50, "count": {n}, "scale": "log"}},
                    {{"var": "T_b", "min": 0.05, "max": 50, "count": {n}, "scale": "log"}}]}}"#
    ))
    .expect("built-in config parses")
}

fn zone_map(_: &Ctx) -> Outcome {
    let records = run_sweep(&grid_config(0.0, 60)).map_err(|e| e.to_string())?;
    for r in &records {
        if r.t_a == r.t_b || r.t_a == 2.0 * r.t_b {
            continue;
        }
        let want = if r.t_a > 2.0 * r.t_b {
            RegimeLabel::Engine
        } else if r.t_a > r.t_b {
            RegimeLabel::Refrigerator
        } else {
            RegimeLabel::Accelerator
        };
        ensure!(r.regime == Some(want), "T_a={} T_b={}: {:?}", r.t_a, r.t_b, r.regime);
    }
    Ok("engine / refrigerator / accelerator split at T_a = 2T_b, T_b".into())
}

fn deterministic(_: &Ctx) -> Outcome {
    let plan = grid_config(0.7, 40).validate().map_err(|e| e.to_string())?;
    let bytes = || {
        let mut buf = Vec::new();
        emit(&run_plan(&plan), OutputFormat::Csv, &mut buf).map(|()| buf).map_err(|e| e.to_string())
    };
    ensure!(bytes()? == bytes()?, "two runs differ");
    let mut reversed: Vec<_> = (0..plan.len()).rev().map(|i| plan.evaluate(i)).collect();
    reversed.sort_by_key(|r| r.index);
    ensure!(reversed == run_plan(&plan), "evaluation order changes records");
    Ok(format!("{} records", plan.len()))
}

fn round_trip(_: &Ctx) -> Outcome {
    let records = [
        run_sweep(&grid_config(0.7, 20)).map_err(|e| e.to_string())?,
        run_sweep(&grid_config(0.4, 5)).map_err(|e| e.to_string())?,
    ]
    .concat();
    for format in [OutputFormat::Csv, OutputFormat::Ndjson] {
        let mut buf = Vec::new();
        emit(&records, format, &mut buf).map_err(|e| e.to_string())?;
        let back = read_records(buf.as_slice(), format).map_err(|e| e.to_string())?;
        ensure!(back == records, "{format:?} round trip differs");
    }
    Ok(format!("{} records, csv and ndjson", records.len()))
}
