//! Working media declared by their spectra.
//!
//! A level is either *working*, with energy `c * lambda`, or *idle*, with a
//! fixed energy that does not depend on the control parameter. There is no
//! `lambda`-dependent common offset: every medium is stored in the gauge where
//! that offset vanishes, and analysis code shifts origins where it needs to.
//!
//! Levels are addressed by their position in the medium, never by energy rank,
//! so the same index names the same eigenstate at both ends of an adiabatic
//! stroke.

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LevelKind {
    Working {
        #[serde(rename = "c")]
        coefficient: f64,
    },
    Idle {
        offset: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    kind: LevelKind,
    degeneracy: u32,
}

impl Level {
    pub fn working(coefficient: f64) -> Self {
        Level {
            kind: LevelKind::Working { coefficient },
            degeneracy: 1,
        }
    }

    pub fn idle(offset: f64) -> Self {
        Level {
            kind: LevelKind::Idle { offset },
            degeneracy: 1,
        }
    }

    pub fn with_degeneracy(mut self, degeneracy: u32) -> Result<Self> {
        if degeneracy == 0 {
            return Err(Error::InvalidMedium("degeneracy must be at least 1".into()));
        }
        self.degeneracy = degeneracy;
        Ok(self)
    }

    pub fn kind(&self) -> LevelKind {
        self.kind
    }

    pub fn degeneracy(&self) -> u32 {
        self.degeneracy
    }

    pub fn is_working(&self) -> bool {
        matches!(self.kind, LevelKind::Working { .. })
    }

    pub fn is_idle(&self) -> bool {
        !self.is_working()
    }

    #[inline]
    pub fn energy(&self, lambda: f64) -> f64 {
        match self.kind {
            LevelKind::Working { coefficient } => coefficient * lambda,
            LevelKind::Idle { offset } => offset,
        }
    }

    /// Energy written as `slope * lambda + intercept`.
    fn line(&self) -> (f64, f64) {
        match self.kind {
            LevelKind::Working { coefficient } => (coefficient, 0.0),
            LevelKind::Idle { offset } => (0.0, offset),
        }
    }

    fn is_finite(&self) -> bool {
        let (slope, intercept) = self.line();
        slope.is_finite() && intercept.is_finite()
    }
}

/// Which family a medium was built from. Only used to unlock model-specific
/// results such as the coupled-spin efficiency bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MediumModel {
    Generic,
    CoupledSpin { j: f64 },
    Qutrit { j: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkingMedium {
    levels: Vec<Level>,
    label: String,
    model: MediumModel,
}

impl WorkingMedium {
    pub fn new(label: impl Into<String>, levels: Vec<Level>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidMedium(format!(
                "need at least 2 levels, got {}",
                levels.len()
            )));
        }
        if !levels.iter().any(Level::is_working) {
            return Err(Error::InvalidMedium(
                "need at least one working level".into(),
            ));
        }
        if let Some(i) = levels.iter().position(|l| !l.is_finite()) {
            return Err(Error::InvalidMedium(format!(
                "level {} has a non-finite energy",
                i + 1
            )));
        }
        if let Some(i) = levels.iter().position(|l| l.degeneracy == 0) {
            return Err(Error::InvalidMedium(format!(
                "level {} has zero degeneracy",
                i + 1
            )));
        }
        Ok(WorkingMedium {
            levels,
            label: label.into(),
            model: MediumModel::Generic,
        })
    }

    /// Two Heisenberg-coupled spins in a field `h = lambda`: energies
    /// `-8J` (idle), `-2h`, `0`, `+2h`, in that index order.
    pub fn coupled_spin(j: f64) -> Result<Self> {
        let j = non_negative("J", j)?;
        let mut medium = WorkingMedium::new(
            "coupled-spin",
            vec![
                Level::idle(-8.0 * j),
                Level::working(-2.0),
                Level::working(0.0),
                Level::working(2.0),
            ],
        )?;
        medium.model = MediumModel::CoupledSpin { j };
        Ok(medium)
    }

    /// Three-level analogue of [`WorkingMedium::coupled_spin`] without the
    /// zero-energy level: `-8J` (idle), `-2h`, `+2h`.
    pub fn qutrit(j: f64) -> Result<Self> {
        let j = non_negative("J", j)?;
        let mut medium = WorkingMedium::new(
            "qutrit",
            vec![Level::idle(-8.0 * j), Level::working(-2.0), Level::working(2.0)],
        )?;
        medium.model = MediumModel::Qutrit { j };
        Ok(medium)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn model(&self) -> MediumModel {
        self.model
    }

    /// Coupling constant, when the medium came from one of the built-in models.
    pub fn coupling(&self) -> Option<f64> {
        match self.model {
            MediumModel::CoupledSpin { j } | MediumModel::Qutrit { j } => Some(j),
            MediumModel::Generic => None,
        }
    }

    pub fn energies(&self, lambda: f64) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy(lambda)).collect()
    }

    pub fn has_idle_levels(&self) -> bool {
        self.levels.iter().any(Level::is_idle)
    }

    /// Verifies that no two levels become degenerate anywhere in
    /// `[lambda_b, lambda_a]`.
    ///
    /// Energies are linear in `lambda`, so a crossing exists iff some pairwise
    /// gap vanishes or changes sign between the endpoints. Pairs that are
    /// degenerate for every `lambda` (identical lines) are not crossings: their
    /// populations stay separate under the adiabatic map.
    pub fn check_no_crossing(&self, lambda_b: f64, lambda_a: f64) -> Result<OrderingCertificate> {
        let lambda_b = positive("lambda_b", lambda_b)?;
        let lambda_a = positive("lambda_a", lambda_a)?;
        if lambda_a < lambda_b {
            return Err(Error::InvalidParameter {
                name: "lambda_a",
                value: lambda_a,
                reason: "must not be below lambda_b",
            });
        }
        for (m, lm) in self.levels.iter().enumerate() {
            let (sm, im) = lm.line();
            for (n, ln) in self.levels.iter().enumerate().skip(m + 1) {
                let (sn, in_) = ln.line();
                let slope = sm - sn;
                let intercept = im - in_;
                if slope == 0.0 {
                    // parallel: either always equal or never equal
                    continue;
                }
                let gap_b = slope * lambda_b + intercept;
                let gap_a = slope * lambda_a + intercept;
                if gap_b == 0.0 || gap_a == 0.0 || (gap_b < 0.0) != (gap_a < 0.0) {
                    return Err(Error::CrossingDetected {
                        first: m + 1,
                        second: n + 1,
                        lambda: -intercept / slope,
                    });
                }
            }
        }
        let energies = self.energies(lambda_b);
        let mut order: Vec<usize> = (0..self.levels.len()).collect();
        order.sort_by(|&x, &y| energies[x].total_cmp(&energies[y]).then(x.cmp(&y)));
        Ok(OrderingCertificate {
            lambda_b,
            lambda_a,
            order,
        })
    }
}

/// Proof that the energy ordering is constant over `[lambda_b, lambda_a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingCertificate {
    pub lambda_b: f64,
    pub lambda_a: f64,
    /// Level indices sorted by energy, lowest first (ties by index).
    pub order: Vec<usize>,
}

/// Coupled-spin parameters: coupling `J` and the two field strengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinModelParams {
    pub j: f64,
    pub h_a: f64,
    pub h_b: f64,
}

impl SpinModelParams {
    pub fn new(j: f64, h_a: f64, h_b: f64) -> Result<Self> {
        let j = non_negative("J", j)?;
        let h_a = positive("h_a", h_a)?;
        let h_b = positive("h_b", h_b)?;
        if h_b >= h_a {
            return Err(Error::InvalidParameter {
                name: "h_b",
                value: h_b,
                reason: "must be strictly below h_a",
            });
        }
        Ok(SpinModelParams { j, h_a, h_b })
    }

    /// Compression ratio `h_a / h_b`.
    pub fn ratio(&self) -> f64 {
        self.h_a / self.h_b
    }

    pub fn is_crossing_free(&self) -> bool {
        self.j < self.h_b / 4.0 || self.j > self.h_a / 4.0
    }

    pub fn medium(&self) -> WorkingMedium {
        WorkingMedium::coupled_spin(self.j).expect("J validated on construction")
    }

    pub fn check_no_crossing(&self) -> Result<OrderingCertificate> {
        self.medium().check_no_crossing(self.h_b, self.h_a)
    }
}

/// Serialized medium description: either a named model or an explicit level list.
///
/// ```json
/// {"model": "coupled-spin", "J": 0.7}
/// {"levels": [{"kind": "idle", "offset": -5.6}, {"kind": "working", "c": -2}]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MediumSpec {
    Model {
        model: ModelKind,
        #[serde(rename = "J")]
        j: f64,
    },
    Levels {
        levels: Vec<LevelSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "coupled-spin", alias = "spin")]
    CoupledSpin,
    #[serde(rename = "qutrit")]
    Qutrit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    #[serde(flatten)]
    pub kind: LevelKind,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub degeneracy: u32,
}

fn one() -> u32 {
    1
}

fn is_one(d: &u32) -> bool {
    *d == 1
}

impl MediumSpec {
    pub fn build(&self) -> Result<WorkingMedium> {
        match self {
            MediumSpec::Model { model, j } => model.build(*j),
            MediumSpec::Levels { levels, label } => {
                let levels = levels
                    .iter()
                    .map(|spec| {
                        Level {
                            kind: spec.kind,
                            degeneracy: 1,
                        }
                        .with_degeneracy(spec.degeneracy)
                    })
                    .collect::<Result<Vec<_>>>()?;
                WorkingMedium::new(label.clone().unwrap_or_else(|| "custom".into()), levels)
            }
        }
    }
}

impl ModelKind {
    pub fn build(self, j: f64) -> Result<WorkingMedium> {
        match self {
            ModelKind::CoupledSpin => WorkingMedium::coupled_spin(j),
            ModelKind::Qutrit => WorkingMedium::qutrit(j),
        }
    }
}
