//! Network, hierarchy and multigrid solve for one configuration.

use std::time::{Duration, Instant};

use mdmg_core::mesh::{build_hierarchy, GridHierarchy};
use mdmg_core::multigrid::{ConvergenceReport, Multigrid};
use mdmg_core::Error;

use crate::config::{ExperimentConfig, Problem};
use crate::error::Result;

#[derive(Debug)]
pub struct Outcome {
    pub problem: Problem,
    pub hierarchy: GridHierarchy,
    pub solution: Vec<f64>,
    pub report: ConvergenceReport,
    /// Wall-clock time of every cycle.
    pub cycle_times: Vec<Duration>,
    pub setup_time: Duration,
    /// Set when the iteration stopped without reaching the tolerance.
    pub failure: Option<Error>,
}

impl Outcome {
    pub fn converged(&self) -> bool {
        self.failure.is_none()
    }

    pub fn grid(&self) -> [usize; 2] {
        let f = self.hierarchy.finest();
        [f.nx, f.ny]
    }
}

/// Builds and solves `config`. Configuration errors are returned; a solver
/// that does not converge still yields an [`Outcome`].
pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    let start = Instant::now();
    let problem = config.problem()?;
    let hierarchy = build_hierarchy(&problem.network, &problem.model.boundary, problem.refinements);
    let mut mg = Multigrid::new(&problem.network, &hierarchy, &problem.model, problem.cycle)?;
    let setup_time = start.elapsed();

    let mut cycle_times = Vec::new();
    let mut last = Instant::now();
    let result = mg.solve_with(|it, _| {
        if it > 0 {
            cycle_times.push(last.elapsed());
        }
        last = Instant::now();
    });
    let (solution, report, failure) = match result {
        Ok((x, r)) => (x, r, None),
        Err((e, x, r)) => (x, r, Some(e)),
    };
    Ok(Outcome {
        problem,
        hierarchy,
        solution,
        report,
        cycle_times,
        setup_time,
        failure,
    })
}
