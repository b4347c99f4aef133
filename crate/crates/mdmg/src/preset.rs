//! Built-in experiments.

use serde::Deserialize;

use crate::config::{
    Boundary, Bulk, Coefficient, Domain, ExperimentConfig, Fracture, Grid, Orientation, Output, Side, Solver, Tip,
};
use crate::error::{ConfigError, Result};

pub const PRESETS: [&str; 5] = [
    "one_fracture_case1",
    "one_fracture_case2",
    "four_fractures_case1",
    "four_fractures_case2",
    "benchmark",
];

/// Fracture permeability of the benchmark modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Conducting,
    Blocking,
}

impl Mode {
    pub fn permeability(self) -> f64 {
        match self {
            Mode::Conducting => 1e4,
            Mode::Blocking => 1e-4,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conducting" => Ok(Mode::Conducting),
            "blocking" => Ok(Mode::Blocking),
            _ => Err(ConfigError::Invalid(format!("unknown mode `{s}`"))),
        }
    }
}

const REGULAR_NETWORK: &str = include_str!("../data/regular_network.toml");

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    match name {
        "one_fracture_case1" => Ok(one_fracture(name, true)),
        "one_fracture_case2" => Ok(one_fracture(name, false)),
        "four_fractures_case1" => Ok(four_fractures_case1()),
        "four_fractures_case2" => Ok(four_fractures_case2()),
        "benchmark" => Ok(benchmark(Mode::Conducting)),
        _ => Err(ConfigError::UnknownPreset(name.to_string())),
    }
}

/// Target grids of the iteration tables, coarsest first.
pub fn table_grids(name: &str) -> Result<Vec<[usize; 2]>> {
    Ok(match name {
        "one_fracture_case1" | "one_fracture_case2" => vec![[32, 16], [64, 32], [128, 64], [256, 128]],
        "four_fractures_case1" | "four_fractures_case2" => vec![[40, 40], [80, 80], [160, 160], [320, 320]],
        "benchmark" => vec![[32, 32], [64, 64], [128, 128], [256, 256]],
        _ => return Err(ConfigError::UnknownPreset(name.to_string())),
    })
}

fn fracture(axis: Orientation, position: f64, span: [f64; 2], k: Coefficient) -> Fracture {
    Fracture {
        label: None,
        axis,
        position,
        span,
        aperture: 1e-2,
        permeability: k,
        normal_permeability: None,
        tip_start: None,
        tip_end: None,
    }
}

fn solver(tolerance: f64) -> Solver {
    Solver {
        tolerance,
        ..Solver::default()
    }
}

fn one_fracture(name: &str, constant: bool) -> ExperimentConfig {
    let mut f = fracture(Orientation::Vertical, 1.0, [0.0, 1.0], Coefficient::Constant(1e-2));
    if constant {
        f.tip_start = Some(Tip::Pressure(0.0));
        f.tip_end = Some(Tip::Pressure(1.0));
    } else {
        f.permeability = Coefficient::Piecewise {
            breaks: vec![0.25, 0.75],
            values: vec![1e2, 2e-3, 1e2],
        };
        f.tip_start = Some(Tip::ZeroFlux);
        f.tip_end = Some(Tip::ZeroFlux);
    }
    ExperimentConfig {
        name: name.to_string(),
        domain: Domain { x: [0.0, 2.0], y: [0.0, 1.0] },
        bulk: Bulk::default(),
        boundary: Boundary {
            left: Side::Pressure(0.0),
            right: Side::Pressure(1.0),
            bottom: Side::Flux(0.0),
            top: Side::Flux(0.0),
        },
        xi: 1.0,
        grid: Grid {
            cells: Some([32, 16]),
            levels: None,
        },
        solver: solver(1e-10),
        output: Output::default(),
        fractures: vec![f],
    }
}

fn four_fractures(name: &str, fractures: Vec<Fracture>) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        domain: Domain { x: [0.0, 1.0], y: [0.0, 1.0] },
        bulk: Bulk::default(),
        boundary: Boundary {
            left: Side::Flux(0.0),
            right: Side::Flux(0.0),
            bottom: Side::Pressure(0.0),
            top: Side::Pressure(1.0),
        },
        xi: 1.0,
        grid: Grid {
            cells: Some([40, 40]),
            levels: None,
        },
        solver: solver(1e-10),
        output: Output::default(),
        fractures,
    }
}

fn labelled(mut f: Fracture, label: &str) -> Fracture {
    f.label = Some(label.to_string());
    f
}

fn four_fractures_case1() -> ExperimentConfig {
    let h = |y, span, k| fracture(Orientation::Horizontal, y, span, Coefficient::Constant(k));
    four_fractures(
        "four_fractures_case1",
        vec![
            labelled(h(0.8, [0.0, 0.8], 1e-2), "gamma1"),
            labelled(h(0.6, [0.2, 1.0], 1e-2), "gamma2"),
            labelled(h(0.4, [0.0, 0.8], 1e2), "gamma3"),
            labelled(h(0.2, [0.2, 1.0], 1e-2), "gamma4"),
        ],
    )
}

fn four_fractures_case2() -> ExperimentConfig {
    let c = Coefficient::Constant;
    four_fractures(
        "four_fractures_case2",
        vec![
            labelled(fracture(Orientation::Horizontal, 0.8, [0.0, 0.6], c(1e2)), "gamma1"),
            labelled(
                fracture(
                    Orientation::Horizontal,
                    0.6,
                    [0.2, 1.0],
                    Coefficient::Piecewise {
                        breaks: vec![0.6],
                        values: vec![1e2, 1e-2],
                    },
                ),
                "gamma2",
            ),
            labelled(fracture(Orientation::Vertical, 0.2, [0.0, 0.8], c(1e2)), "gamma3"),
            labelled(fracture(Orientation::Vertical, 0.6, [0.0, 0.6], c(1e-2)), "gamma4"),
        ],
    )
}

#[derive(Deserialize)]
struct GeometryFile {
    fracture: Vec<GeometryEntry>,
}

#[derive(Deserialize)]
struct GeometryEntry {
    axis: Orientation,
    position: f64,
    span: [f64; 2],
}

/// Benchmark on the regular network with the permeability of `mode`.
pub fn benchmark(mode: Mode) -> ExperimentConfig {
    let geometry: GeometryFile = toml::from_str(REGULAR_NETWORK).expect("bundled geometry parses");
    let fractures = geometry
        .fracture
        .into_iter()
        .map(|g| Fracture {
            aperture: 1e-4,
            ..fracture(g.axis, g.position, g.span, Coefficient::Constant(mode.permeability()))
        })
        .collect();
    ExperimentConfig {
        name: "benchmark".to_string(),
        domain: Domain { x: [0.0, 1.0], y: [0.0, 1.0] },
        bulk: Bulk::default(),
        boundary: Boundary {
            left: Side::Flux(-1.0),
            right: Side::Pressure(1.0),
            bottom: Side::Flux(0.0),
            top: Side::Flux(0.0),
        },
        xi: 1.0,
        grid: Grid {
            cells: Some([64, 64]),
            levels: None,
        },
        solver: solver(1e-8),
        output: Output::default(),
        fractures,
    }
}
