//! Experiment configuration files.
//!
//! The on-disk format is TOML; see `docs/config.md` for the reference.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use mdmg_core::boundary::{BoundaryCondition, BoundarySpec};
use mdmg_core::mesh::refinements_for_grid;
use mdmg_core::multigrid::{CycleConfig, CycleType};
use mdmg_core::network::{Axis, FractureNetwork, FractureSegment, Profile, Rect, TipCondition};
use mdmg_core::transfer::TruncatedRows;
use mdmg_core::vanka::IntersectionBlock;
use mdmg_core::ModelConfig;

use crate::error::{ConfigError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub domain: Domain,
    #[serde(default)]
    pub bulk: Bulk,
    pub boundary: Boundary,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub solver: Solver,
    #[serde(default)]
    pub output: Output,
    #[serde(default, rename = "fracture")]
    pub fractures: Vec<Fracture>,
}

fn default_xi() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl Domain {
    pub fn rect(&self) -> Rect {
        Rect::new(self.x[0], self.x[1], self.y[0], self.y[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bulk {
    pub kxx: f64,
    pub kyy: f64,
    #[serde(default)]
    pub source: f64,
}

impl Default for Bulk {
    fn default() -> Self {
        Self {
            kxx: 1.0,
            kyy: 1.0,
            source: 0.0,
        }
    }
}

/// Condition on one side of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Pressure(f64),
    /// Prescribed `u . n` (negative for inflow).
    Flux(f64),
}

impl From<Side> for BoundaryCondition {
    fn from(s: Side) -> Self {
        match s {
            Side::Pressure(p) => BoundaryCondition::Pressure(p),
            Side::Flux(g) => BoundaryCondition::Flux(g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    pub left: Side,
    pub right: Side,
    pub bottom: Side,
    pub top: Side,
}

impl Boundary {
    pub fn spec(&self) -> BoundarySpec {
        BoundarySpec {
            left: self.left.into(),
            right: self.right.into(),
            bottom: self.bottom.into(),
            top: self.top.into(),
        }
    }
}

/// Target resolution: either the finest cell counts or the number of
/// refinements of the coarsest grid. With neither, the coarsest grid is used.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Cycle {
    #[default]
    W,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Intersections {
    #[default]
    WithPressure,
    VelocitiesOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    #[default]
    Renormalize,
    Keep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Solver {
    pub cycle: Cycle,
    pub pre_smoothing: usize,
    pub post_smoothing: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub fracture_sweeps: usize,
    pub intersections: Intersections,
    pub truncated_rows: Truncation,
}

impl Default for Solver {
    fn default() -> Self {
        Self::from(CycleConfig::default())
    }
}

impl From<CycleConfig> for Solver {
    fn from(c: CycleConfig) -> Self {
        Self {
            cycle: match c.cycle {
                CycleType::W => Cycle::W,
                CycleType::V => Cycle::V,
            },
            pre_smoothing: c.pre_smoothing,
            post_smoothing: c.post_smoothing,
            tolerance: c.tolerance,
            max_iterations: c.max_iterations,
            fracture_sweeps: c.fracture_sweeps,
            intersections: match c.intersection_block {
                IntersectionBlock::WithPressure => Intersections::WithPressure,
                IntersectionBlock::VelocitiesOnly => Intersections::VelocitiesOnly,
            },
            truncated_rows: match c.truncated_rows {
                TruncatedRows::Keep => Truncation::Keep,
                TruncatedRows::Renormalize => Truncation::Renormalize,
            },
        }
    }
}

impl Solver {
    pub fn cycle_config(&self) -> CycleConfig {
        CycleConfig {
            pre_smoothing: self.pre_smoothing,
            post_smoothing: self.post_smoothing,
            cycle: match self.cycle {
                Cycle::W => CycleType::W,
                Cycle::V => CycleType::V,
            },
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            intersection_block: match self.intersections {
                Intersections::WithPressure => IntersectionBlock::WithPressure,
                Intersections::VelocitiesOnly => IntersectionBlock::VelocitiesOnly,
            },
            truncated_rows: match self.truncated_rows {
                Truncation::Keep => TruncatedRows::Keep,
                Truncation::Renormalize => TruncatedRows::Renormalize,
            },
            fracture_sweeps: self.fracture_sweeps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Summary,
    Vtk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl Default for Output {
    fn default() -> Self {
        Self {
            dir: None,
            formats: vec![Format::Csv, Format::Summary, Format::Vtk],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// A scalar that is either constant or piecewise constant in arclength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Constant(f64),
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
}

impl Coefficient {
    fn profile(&self) -> Result<Profile> {
        Ok(match self {
            Coefficient::Constant(v) => Profile::constant(*v),
            Coefficient::Piecewise { breaks, values } => Profile::piecewise(breaks.clone(), values.clone())?,
        })
    }

    fn is_positive(&self) -> bool {
        match self {
            Coefficient::Constant(v) => *v > 0.0,
            Coefficient::Piecewise { values, .. } => values.iter().all(|v| *v > 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tip {
    Pressure(f64),
    ZeroFlux,
    Interior,
}

impl From<Tip> for TipCondition {
    fn from(t: Tip) -> Self {
        match t {
            Tip::Pressure(p) => TipCondition::DirichletPressure(p),
            Tip::ZeroFlux => TipCondition::ZeroFlux,
            Tip::Interior => TipCondition::Interior,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fracture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub axis: Orientation,
    /// Fixed coordinate.
    pub position: f64,
    /// Interval of the running coordinate.
    pub span: [f64; 2],
    pub aperture: f64,
    pub permeability: Coefficient,
    /// Defaults to `permeability`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_permeability: Option<Coefficient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tip_start: Option<Tip>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tip_end: Option<Tip>,
}

impl Fracture {
    pub fn segment(&self) -> Result<FractureSegment> {
        let axis = match self.axis {
            Orientation::Horizontal => Axis::Horizontal,
            Orientation::Vertical => Axis::Vertical,
        };
        let mut seg = FractureSegment::new(axis, self.position, self.span[0], self.span[1], self.aperture, 1.0)
            .with_permeability(self.permeability.profile()?)
            .with_tips(self.tip_start.map(Into::into), self.tip_end.map(Into::into));
        if let Some(kn) = &self.normal_permeability {
            seg.k_normal = kn.profile()?;
        }
        Ok(seg)
    }
}

/// Everything needed to set up a solve.
#[derive(Debug, Clone)]
pub struct Problem {
    pub network: FractureNetwork,
    pub model: ModelConfig,
    pub cycle: CycleConfig,
    pub refinements: usize,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable")
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e.to_string()))?;
        Self::from_toml(&text)
    }

    /// Sets every fracture permeability (normal and tangential) to `kf`.
    pub fn set_fracture_permeability(&mut self, kf: f64) {
        for f in &mut self.fractures {
            f.permeability = Coefficient::Constant(kf);
            f.normal_permeability = None;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        if !(self.domain.x[0] < self.domain.x[1] && self.domain.y[0] < self.domain.y[1]) {
            return bad("domain intervals must be increasing");
        }
        if !(self.bulk.kxx > 0.0 && self.bulk.kyy > 0.0) {
            return bad("bulk permeability must be positive");
        }
        if !(self.xi > 0.5 && self.xi <= 1.0) {
            return bad("xi must lie in (1/2, 1]");
        }
        if !self.boundary.spec().any_pressure() {
            return bad("at least one side needs a pressure condition");
        }
        if self.grid.cells.is_some() && self.grid.levels.is_some() {
            return bad("give either grid.cells or grid.levels, not both");
        }
        for (k, f) in self.fractures.iter().enumerate() {
            if !(f.aperture > 0.0) {
                return Err(ConfigError::Invalid(format!("fracture {k}: aperture must be positive")));
            }
            let kn_ok = f.normal_permeability.as_ref().is_none_or(Coefficient::is_positive);
            if !f.permeability.is_positive() || !kn_ok {
                return Err(ConfigError::Invalid(format!("fracture {k}: permeability must be positive")));
            }
        }
        self.solver.cycle_config().validate()?;
        Ok(())
    }

    pub fn problem(&self) -> Result<Problem> {
        self.validate()?;
        let segments = self.fractures.iter().map(Fracture::segment).collect::<Result<Vec<_>>>()?;
        let network = FractureNetwork::build(self.domain.rect(), segments)?;
        let mut model = ModelConfig::new(1.0, self.boundary.spec()).with_xi(self.xi);
        model.kxx = mdmg_core::assembly::Field::constant(self.bulk.kxx);
        model.kyy = mdmg_core::assembly::Field::constant(self.bulk.kyy);
        model.source = mdmg_core::assembly::Field::constant(self.bulk.source);
        model.validate()?;
        let refinements = match (self.grid.cells, self.grid.levels) {
            (Some([nx, ny]), _) => refinements_for_grid(&network, nx, ny)?,
            (None, Some(m)) => m,
            (None, None) => 0,
        };
        Ok(Problem {
            network,
            model,
            cycle: self.solver.cycle_config(),
            refinements,
        })
    }
}
