//! Idealized quantum Otto cycles on media with working and idle levels.
//!
//! Working levels scale with the control parameter, `E_n = c_n λ`; idle levels
//! stay fixed. A cycle alternates thermalization with bath `a` at `λ_a` and
//! bath `b` at `λ_b`, joined by adiabatic strokes that preserve populations.
//!
//! ```
//! use otto_core::{cycle_energetics, efficiency_report, CycleParams, RegimeLabel, WorkingMedium};
//!
//! let medium = WorkingMedium::coupled_spin(0.0)?;
//! let params = CycleParams::new(2.0, 1.0, 5.0, 1.0)?;
//! let e = cycle_energetics(&medium, &params)?;
//! let report = efficiency_report(&e, &params, &medium);
//! assert_eq!(report.regime.label, RegimeLabel::Engine);
//! assert!((report.eta.unwrap() - 0.5).abs() < 1e-12);
//! # Ok::<(), otto_core::Error>(())
//! ```

pub mod boundaries;
pub mod error;
pub mod numerics;
pub mod regimes;
pub mod spectrum;
pub mod sweep;
pub mod thermo;

pub use boundaries::{
    asymptotes, efficiency_thresholds, engine_boundary_ta, find_gap, AsymptoteSet, Branch,
    EfficiencyThresholds, GapResult,
};
pub use error::{Error, Result};
pub use regimes::{
    classify, decomposition_ratio, efficiency_report, efficiency_report_with_tolerance, Regime,
    RegimeLabel, RegimeReport, Rotation,
};
pub use spectrum::{
    Level, LevelKind, MediumModel, MediumSpec, OrderingCertificate, SpinModelParams, WorkingMedium,
};
pub use sweep::{emit, read_records, run_sweep, OutputFormat, SweepConfig, SweepRecord};
pub use thermo::{
    cycle_energetics, cycle_energetics_unchecked, g, thermal_populations, work_function_f,
    CycleEnergetics, CycleParams, PopulationVector,
};
