//! Monolithic multigrid cycles over a grid hierarchy.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{assemble, MixedDimSystem, ModelConfig};
use crate::dense::DenseLu;
use crate::error::{Error, Result};
use crate::mesh::{GridHierarchy, Group};
use crate::network::FractureNetwork;
use crate::sparse::norm2;
use crate::transfer::{TransferOps, TruncatedRows};
use crate::vanka::{smooth_with, IntersectionBlock, SmootherPlan};

/// Group factors applied to restricted residuals. Unknowns are total
/// fluxes, so residual rows carry one power of the mesh size per dimension
/// of the equation they come from.
pub const RESIDUAL_SCALE: [f64; 5] = [2.0, 2.0, 4.0, 2.0, 1.0];

/// Group factors applied to prolongated corrections: a bulk edge flux splits
/// between two half-length child edges.
pub const CORRECTION_SCALE: [f64; 5] = [0.5, 1.0, 1.0, 1.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CycleType {
    #[default]
    W,
    V,
}

impl CycleType {
    fn recursions(self) -> usize {
        match self {
            CycleType::W => 2,
            CycleType::V => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleConfig {
    pub pre_smoothing: usize,
    pub post_smoothing: usize,
    pub cycle: CycleType,
    /// Relative residual reduction that stops the iteration.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub intersection_block: IntersectionBlock,
    pub truncated_rows: TruncatedRows,
    /// Fracture sweeps per smoothing step.
    pub fracture_sweeps: usize,
}

impl Default for CycleConfig {
    fn default() -> Self {
        Self {
            pre_smoothing: 2,
            post_smoothing: 2,
            cycle: CycleType::W,
            tolerance: 1e-10,
            max_iterations: 100,
            intersection_block: IntersectionBlock::WithPressure,
            truncated_rows: TruncatedRows::Renormalize,
            fracture_sweeps: 1,
        }
    }
}

impl CycleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pre_smoothing + self.post_smoothing == 0 {
            return Err(Error::InvalidParameter("at least one smoothing step is required"));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::InvalidParameter("tolerance must lie in (0, 1)"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be positive"));
        }
        if self.fracture_sweeps == 0 {
            return Err(Error::InvalidParameter("fracture_sweeps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Residual norms, starting with the initial one.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Geometric mean of the last (up to) five residual ratios.
    pub asymptotic_factor: f64,
}

impl ConvergenceReport {
    fn new(residuals: Vec<f64>, converged: bool) -> Self {
        let ratios = ratios(&residuals);
        let tail = &ratios[ratios.len().saturating_sub(5)..];
        let asymptotic_factor = if tail.is_empty() {
            0.0
        } else {
            libm::exp(tail.iter().map(|r| libm::log(*r)).sum::<f64>() / tail.len() as f64)
        };
        Self {
            iterations: residuals.len() - 1,
            residuals,
            converged,
            asymptotic_factor,
        }
    }

    pub fn ratios(&self) -> Vec<f64> {
        ratios(&self.residuals)
    }

    pub fn relative_residual(&self) -> f64 {
        match (self.residuals.first(), self.residuals.last()) {
            (Some(&r0), Some(&r)) if r0 > 0.0 => r / r0,
            _ => 0.0,
        }
    }
}

fn ratios(residuals: &[f64]) -> Vec<f64> {
    residuals.windows(2).map(|w| w[1] / w[0]).collect()
}

struct Level {
    system: MixedDimSystem,
    plan: Option<SmootherPlan>,
    scratch: Vec<f64>,
}

/// Systems, smoothers and transfers of every level.
pub struct Multigrid {
    levels: Vec<Level>,
    transfers: Vec<TransferOps>,
    coarse: DenseLu,
    config: CycleConfig,
}

impl core::fmt::Debug for Multigrid {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Multigrid")
            .field("levels", &self.levels.len())
            .field("config", &self.config)
            .finish()
    }
}

impl Multigrid {
    /// Re-discretizes the problem on every level of `hierarchy`.
    pub fn new(
        network: &FractureNetwork,
        hierarchy: &GridHierarchy,
        model: &ModelConfig,
        config: CycleConfig,
    ) -> Result<Self> {
        config.validate()?;
        let mut levels = Vec::with_capacity(hierarchy.levels.len());
        for (k, grid) in hierarchy.levels.iter().enumerate() {
            let system = assemble(network, grid, model)?;
            let plan = if k > 0 {
                Some(SmootherPlan::new(grid, &system, config.intersection_block)?)
            } else {
                None
            };
            let scratch = vec![0.0; system.len()];
            levels.push(Level { system, plan, scratch });
        }
        let transfers = hierarchy
            .levels
            .windows(2)
            .map(|w| TransferOps::new(&w[0], &w[1], config.truncated_rows))
            .collect();
        let s0 = &levels[0].system;
        let coarse = DenseLu::factor(s0.len(), s0.matrix.to_dense(), 0.0)?;
        Ok(Self {
            levels,
            transfers,
            coarse,
            config,
        })
    }

    pub fn config(&self) -> &CycleConfig {
        &self.config
    }

    pub fn finest_system(&self) -> &MixedDimSystem {
        &self.levels.last().unwrap().system
    }

    pub fn system(&self, level: usize) -> &MixedDimSystem {
        &self.levels[level].system
    }

    pub fn plan(&self, level: usize) -> Option<&SmootherPlan> {
        self.levels[level].plan.as_ref()
    }

    pub fn transfer(&self, coarse_level: usize) -> &TransferOps {
        &self.transfers[coarse_level]
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Solves the coarsest system directly.
    pub fn coarse_solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.coarse.solve_in_place(&mut x);
        x
    }

    /// One cycle on level `k` for `A_k x = b`.
    pub fn cycle(&mut self, k: usize, x: &mut [f64], b: &[f64]) -> Result<()> {
        if k == 0 {
            x.copy_from_slice(b);
            self.coarse.solve_in_place(x);
            return Ok(());
        }
        let cfg = self.config;
        for _ in 0..cfg.pre_smoothing {
            let lv = &self.levels[k];
            smooth_with(&lv.system, x, b, lv.plan.as_ref().unwrap(), cfg.fracture_sweeps)?;
        }

        let mut r = core::mem::take(&mut self.levels[k].scratch);
        self.levels[k].system.matrix.mul_vec_into(x, &mut r)?;
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let nc = self.levels[k - 1].system.len();
        let mut rc = vec![0.0; nc];
        self.transfers[k - 1].restrict_scaled(&r, RESIDUAL_SCALE, &mut rc)?;
        self.levels[k].scratch = r;

        let mut ec = vec![0.0; nc];
        let visits = if k == 1 { 1 } else { cfg.cycle.recursions() };
        for _ in 0..visits {
            self.cycle(k - 1, &mut ec, &rc)?;
        }
        self.transfers[k - 1].prolong_add_scaled(&ec, CORRECTION_SCALE, x)?;

        for _ in 0..cfg.post_smoothing {
            let lv = &self.levels[k];
            smooth_with(&lv.system, x, b, lv.plan.as_ref().unwrap(), cfg.fracture_sweeps)?;
        }
        Ok(())
    }

    /// Iterates cycles from the zero initial guess on the finest level.
    #[allow(clippy::type_complexity)]
    pub fn solve(&mut self) -> Result<(Vec<f64>, ConvergenceReport), (Error, Vec<f64>, ConvergenceReport)> {
        self.solve_with(|_, _| {})
    }

    /// Like [`Multigrid::solve`], calling `observer(iteration, residual)`
    /// after every cycle.
    #[allow(clippy::type_complexity)]
    pub fn solve_with(
        &mut self,
        mut observer: impl FnMut(usize, f64),
    ) -> Result<(Vec<f64>, ConvergenceReport), (Error, Vec<f64>, ConvergenceReport)> {
        let top = self.depth();
        let b = self.levels[top].system.rhs.clone();
        let n = b.len();
        let mut x = vec![0.0; n];
        let r0 = norm2(&b);
        let mut residuals = vec![r0];
        observer(0, r0);
        if r0 == 0.0 {
            return Ok((x, ConvergenceReport::new(residuals, true)));
        }
        let tol = self.config.tolerance;
        let mut r = vec![0.0; n];
        for it in 1..=self.config.max_iterations {
            if let Err(e) = self.cycle(top, &mut x, &b) {
                let report = ConvergenceReport::new(residuals, false);
                return Err((e, x, report));
            }
            let sys = &self.levels[top].system;
            sys.matrix.mul_vec_into(&x, &mut r).expect("sizes match");
            let rn = libm::sqrt(r.iter().zip(&b).map(|(a, b)| (b - a) * (b - a)).sum());
            residuals.push(rn);
            observer(it, rn);
            if !rn.is_finite() {
                break;
            }
            if rn <= tol * r0 {
                return Ok((x, ConvergenceReport::new(residuals, true)));
            }
        }
        let report = ConvergenceReport::new(residuals, false);
        let e = Error::NoConvergence {
            iterations: report.iterations,
            relative_residual: report.relative_residual(),
        };
        Err((e, x, report))
    }
}

/// Number of unknowns per group on the finest level, for summaries.
pub fn group_counts(system: &MixedDimSystem) -> [usize; 5] {
    Group::ALL.map(|g| system.range(g).len())
}
