use mdmg::config::{Coefficient, ExperimentConfig, Side};
use mdmg::preset::{self, Mode, PRESETS};
use mdmg::ConfigError;
use mdmg_core::network::Axis;

#[test]
fn presets_round_trip_through_toml() {
    for name in PRESETS {
        let cfg = preset::preset(name).unwrap();
        let text = cfg.to_toml();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, back, "{name}");
        cfg.problem().unwrap();
    }
}

#[test]
fn unknown_preset_is_an_error() {
    assert!(matches!(preset::preset("nope"), Err(ConfigError::UnknownPreset(_))));
    assert!(preset::table_grids("nope").is_err());
}

#[test]
fn piecewise_permeability_follows_the_running_coordinate() {
    let p = preset::preset("one_fracture_case2").unwrap().problem().unwrap();
    let seg = &p.network.segments[0];
    assert_eq!(seg.axis, Axis::Vertical);
    assert_eq!(seg.k_tangential.at(0.5), 2e-3);
    assert_eq!(seg.k_tangential.at(0.1), 1e2);
    assert_eq!(seg.k_tangential.at(0.9), 1e2);

    let p = preset::preset("four_fractures_case2").unwrap().problem().unwrap();
    let g2 = &p.network.segments[1];
    assert_eq!(g2.k_tangential.at(0.8), 1e-2);
    assert_eq!(g2.k_tangential.at(0.4), 1e2);
}

#[test]
fn benchmark_modes_set_permeability() {
    for (mode, k) in [(Mode::Blocking, 1e-4), (Mode::Conducting, 1e4)] {
        let cfg = preset::benchmark(mode);
        assert_eq!(cfg.fractures.len(), 6);
        for f in &cfg.fractures {
            assert_eq!(f.permeability, Coefficient::Constant(k));
            assert_eq!(f.aperture, 1e-4);
        }
    }
    assert_eq!("blocking".parse::<Mode>().unwrap(), Mode::Blocking);
    assert!("open".parse::<Mode>().is_err());
}

#[test]
fn preset_grids_are_reachable() {
    for name in PRESETS {
        let mut cfg = preset::preset(name).unwrap();
        for g in preset::table_grids(name).unwrap() {
            cfg.grid.cells = Some(g);
            let p = cfg.problem().unwrap();
            let h = mdmg_core::mesh::build_hierarchy(&p.network, &p.model.boundary, p.refinements);
            assert_eq!([h.finest().nx, h.finest().ny], g, "{name}");
        }
    }
}

#[test]
fn minimal_file_uses_defaults() {
    let text = r#"
name = "tiny"

[domain]
x = [0.0, 1.0]
y = [0.0, 1.0]

[boundary]
left = { pressure = 1.0 }
right = { pressure = 0.0 }
bottom = { flux = 0.0 }
top = { flux = 0.0 }

[grid]
levels = 2

[[fracture]]
axis = "vertical"
position = 0.5
span = [0.0, 1.0]
aperture = 1e-3
permeability = 10.0
"#;
    let cfg = ExperimentConfig::from_toml(text).unwrap();
    assert_eq!(cfg.xi, 1.0);
    assert_eq!(cfg.boundary.left, Side::Pressure(1.0));
    let p = cfg.problem().unwrap();
    assert_eq!(p.refinements, 2);
    assert_eq!(p.cycle, mdmg_core::multigrid::CycleConfig::default());
}

fn expect_invalid(edit: impl FnOnce(&mut ExperimentConfig)) {
    let mut cfg = preset::preset("four_fractures_case1").unwrap();
    edit(&mut cfg);
    assert!(cfg.validate().is_err());
    assert!(cfg.problem().is_err());
}

#[test]
fn invalid_configurations_are_rejected() {
    expect_invalid(|c| c.xi = 0.5);
    expect_invalid(|c| c.xi = 1.2);
    expect_invalid(|c| c.bulk.kxx = 0.0);
    expect_invalid(|c| c.domain.x = [1.0, 0.0]);
    expect_invalid(|c| {
        c.boundary.bottom = Side::Flux(0.0);
        c.boundary.top = Side::Flux(0.0);
    });
    expect_invalid(|c| c.grid.levels = Some(2));
    expect_invalid(|c| c.fractures[0].aperture = -1.0);
    expect_invalid(|c| c.fractures[1].permeability = Coefficient::Constant(0.0));
    expect_invalid(|c| c.solver.tolerance = 2.0);
    expect_invalid(|c| c.solver.fracture_sweeps = 0);
    expect_invalid(|c| {
        c.solver.pre_smoothing = 0;
        c.solver.post_smoothing = 0;
    });
}

#[test]
fn geometry_errors_surface_from_the_model() {
    let mut cfg = preset::preset("four_fractures_case1").unwrap();
    cfg.fractures[0].span = [0.0, 1.5];
    assert!(matches!(cfg.problem(), Err(ConfigError::Model(_))));
    let mut cfg = preset::preset("one_fracture_case1").unwrap();
    cfg.grid.cells = Some([30, 16]);
    assert!(matches!(cfg.problem(), Err(ConfigError::Model(_))));
}

#[test]
fn malformed_files_are_parse_errors() {
    assert!(matches!(ExperimentConfig::from_toml("name = 3"), Err(ConfigError::Parse(_))));
    let mut text = preset::preset("benchmark").unwrap().to_toml();
    text.push_str("\nunexpected = true\n");
    assert!(matches!(ExperimentConfig::from_toml(&text), Err(ConfigError::Parse(_))));
    let missing = std::path::Path::new("/nonexistent/config.toml");
    assert!(matches!(ExperimentConfig::load(missing), Err(ConfigError::Io(..))));
}

#[test]
fn documented_example_is_valid() {
    let doc = include_str!("../../../docs/config.md");
    let start = doc.find("```toml\n").unwrap() + "```toml\n".len();
    let end = start + doc[start..].find("```").unwrap();
    let cfg = ExperimentConfig::from_toml(&doc[start..end]).unwrap();
    let p = cfg.problem().unwrap();
    assert_eq!(p.network.segments.len(), 2);
    assert_eq!(p.network.segments[1].k_tangential.at(0.75), 1e-4);
}
