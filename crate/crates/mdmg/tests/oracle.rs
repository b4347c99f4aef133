use mdmg::oracle::{bulk_mass, direct_solve, fracture_mass, interface_mass, Cell, FactorStatus, Rule};
use mdmg::preset;
use mdmg_core::assembly::{assemble, bulk_half_weight, fracture_half_weight, interface_weight};
use mdmg_core::boundary::{BoundaryCondition, BoundarySpec};
use mdmg_core::mesh::{build_hierarchy, Dof, EdgeSide, GridLevel, Group};
use mdmg_core::multigrid::Multigrid;
use mdmg_core::network::{FractureNetwork, FractureSegment, Rect};
use mdmg_core::sparse::norm2;
use mdmg_core::{Error, ModelConfig};
use proptest::prelude::*;

fn coarsest(name: &str) -> (mdmg::config::Problem, GridLevel) {
    let mut cfg = preset::preset(name).unwrap();
    cfg.grid.cells = None;
    cfg.grid.levels = Some(0);
    let p = cfg.problem().unwrap();
    let level = GridLevel::new(&p.network, &p.model.boundary, 0);
    (p, level)
}

#[test]
fn small_system_is_solved_to_tolerance() {
    let (p, level) = coarsest("one_fracture_case1");
    let sys = assemble(&p.network, &level, &p.model).unwrap();
    assert!(sys.len() < 20);
    let rep = direct_solve(&sys).unwrap();
    assert_eq!(rep.status, FactorStatus::Ok);
    assert!(rep.relative_residual <= 1e-12);
    let ax = sys.matrix.mul_vec(&rep.solution).unwrap();
    let r: Vec<f64> = ax.iter().zip(&sys.rhs).map(|(a, b)| a - b).collect();
    assert!(norm2(&r) <= 1e-12 * norm2(&sys.rhs));
}

#[test]
fn oracle_agrees_with_multigrid() {
    for name in preset::PRESETS {
        let mut cfg = preset::preset(name).unwrap();
        cfg.grid.cells = None;
        cfg.grid.levels = Some(2);
        cfg.solver.tolerance = 1e-12;
        let p = cfg.problem().unwrap();
        let h = build_hierarchy(&p.network, &p.model.boundary, 2);
        let mut mg = Multigrid::new(&p.network, &h, &p.model, p.cycle).unwrap();
        let (x, _) = mg.solve().unwrap();
        let rep = direct_solve(mg.finest_system()).unwrap();
        let c = rep.compare(&x);
        assert!(c.relative < 1e-9, "{name}: {c:?}");
    }
}

#[test]
fn linear_pressure_without_fractures() {
    let net = FractureNetwork::build(Rect::new(0.0, 2.0, 0.0, 1.0), vec![]).unwrap();
    let bc = BoundarySpec {
        left: BoundaryCondition::Pressure(3.0),
        right: BoundaryCondition::Pressure(1.0),
        bottom: BoundaryCondition::Flux(0.0),
        top: BoundaryCondition::Flux(0.0),
    };
    let h = build_hierarchy(&net, &bc, 3);
    let level = h.finest();
    let sys = assemble(&net, level, &ModelConfig::new(2.0, bc)).unwrap();
    let rep = direct_solve(&sys).unwrap();
    for j in 0..level.ny {
        for i in 0..level.nx {
            let (x, _) = level.cell_center(i, j);
            assert!((rep.solution[level.layout.cell_at(i, j)] - (3.0 - x)).abs() < 1e-12);
        }
    }
    // Darcy flux K * dp/dx = 2 over a unit height, split over ny edges.
    let uy = level.hy();
    for k in sys.range(Group::U2) {
        if let Dof::Ux { .. } = level.layout.dof(k) {
            assert!((rep.solution[k] - 2.0 * uy).abs() < 1e-12);
        }
    }
}

#[test]
fn conducting_fracture_pressure_is_monotone() {
    let mut cfg = preset::preset("one_fracture_case1").unwrap();
    cfg.grid.levels = Some(3);
    cfg.grid.cells = None;
    cfg.set_fracture_permeability(1e4);
    let p = cfg.problem().unwrap();
    let h = build_hierarchy(&p.network, &p.model.boundary, 3);
    let level = h.finest();
    let sys = assemble(&p.network, level, &p.model).unwrap();
    let x = direct_solve(&sys).unwrap().solution;
    let fp: Vec<f64> = level.layout.pieces[0].pressure.iter().map(|&k| x[k]).collect();
    assert!(fp.windows(2).all(|w| w[1] > w[0]));
    assert!(fp.iter().all(|v| (0.0..=1.0).contains(v)));
}

#[test]
fn singular_system_is_reported() {
    let net = FractureNetwork::build(Rect::unit_square(), vec![]).unwrap();
    let bc = BoundarySpec {
        left: BoundaryCondition::Pressure(0.0),
        right: BoundaryCondition::Flux(1.0),
        bottom: BoundaryCondition::Flux(0.0),
        top: BoundaryCondition::Flux(0.0),
    };
    let level = GridLevel::new(&net, &bc, 1);
    let mut sys = assemble(&net, &level, &ModelConfig::new(1.0, bc)).unwrap();
    // Drop every coupling of the first cell pressure.
    let k = sys.range(Group::P2).start;
    let t: Vec<_> = sys.matrix.triplets().filter(|&(r, c, _)| r != k && c != k).collect();
    sys.matrix = mdmg_core::sparse::CsrMatrix::from_triplets(sys.len(), sys.len(), &t);
    assert!(matches!(direct_solve(&sys), Err(Error::SingularSystem { .. })));
}

#[test]
fn quadrature_reproduces_reference_values() {
    let unit = Cell { hx: 1.0, hy: 1.0, kxx: 1.0, kyy: 1.0 };
    let tm = bulk_mass(&unit, Rule::Quadrature);
    let exact = bulk_mass(&unit, Rule::Exact);
    for i in 0..4 {
        assert!((tm[i][i] - 0.5).abs() < 1e-15);
        assert!((exact[i][i] - 1.0 / 3.0).abs() < 1e-15);
        for j in 0..4 {
            if i != j {
                assert_eq!(tm[i][j], 0.0);
            }
        }
    }
    assert!((exact[0][1] - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(exact[0][2], 0.0);
    let f = fracture_mass(0.25, 1.0, 1.0, Rule::Quadrature);
    assert_eq!(f, [[0.125, 0.0], [0.0, 0.125]]);
}

#[test]
fn interface_terms_match_the_assembled_twins() {
    let net = FractureNetwork::build(
        Rect::new(0.0, 2.0, 0.0, 1.0),
        vec![FractureSegment::vertical(1.0, 0.0, 1.0, 1e-2, 3.0)],
    )
    .unwrap();
    let bc = BoundarySpec {
        left: BoundaryCondition::Pressure(0.0),
        right: BoundaryCondition::Pressure(1.0),
        bottom: BoundaryCondition::Flux(0.0),
        top: BoundaryCondition::Flux(0.0),
    };
    let level = GridLevel::new(&net, &bc, 2);
    for xi in [1.0, 0.8, 0.6] {
        let sys = assemble(&net, &level, &ModelConfig::new(1.0, bc).with_xi(xi)).unwrap();
        let m = interface_mass(level.hy(), 1e-2, 3.0, xi);
        let bulk = bulk_mass(&Cell { hx: level.hx(), hy: level.hy(), kxx: 1.0, kyy: 1.0 }, Rule::Quadrature);
        for (k, d) in level.layout.dofs().iter().enumerate() {
            if let Dof::Ux { side: EdgeSide::Minus, i, j } = *d {
                let plus = level.layout.ux_at(i, j).from_side(true).unwrap();
                assert!((sys.matrix.get(k, k) - (bulk[1][1] + m[0][0])).abs() < 1e-12);
                assert!((sys.matrix.get(plus, plus) - (bulk[0][0] + m[1][1])).abs() < 1e-12);
                assert!((sys.matrix.get(k, plus) - m[0][1]).abs() < 1e-12);
                assert!(m[0][1] >= 0.0);
            }
        }
        assert!((m[0][0] - xi * interface_weight(level.hy(), 1e-2, 3.0)).abs() < 1e-15);
    }
}

proptest! {
    #[test]
    fn assembled_cells_match_quadrature(
        hx in 0.6..1.1f64,
        hy in 0.6..1.1f64,
        kxx in 1e-3..1e3f64,
        kyy in 1e-3..1e3f64,
    ) {
        let net = FractureNetwork::build(Rect::new(0.0, hx, 0.0, hy), vec![]).unwrap();
        let bc = BoundarySpec::zero_pressure();
        let level = GridLevel::new(&net, &bc, 0);
        prop_assert_eq!((level.nx, level.ny), (1, 1));
        let mut model = ModelConfig::new(1.0, bc);
        model.kxx = mdmg_core::assembly::Field::constant(kxx);
        model.kyy = mdmg_core::assembly::Field::constant(kyy);
        let sys = assemble(&net, &level, &model).unwrap();
        let m = bulk_mass(&Cell { hx, hy, kxx, kyy }, Rule::Quadrature);
        let v = level.layout.cell_velocities(0, 0).map(Option::unwrap);
        for a in 0..4 {
            for b in 0..4 {
                prop_assert!((sys.matrix.get(v[a], v[b]) - m[a][b]).abs() <= 1e-12 * m[a][a]);
            }
        }
        prop_assert!((m[0][0] - bulk_half_weight(hx, hy, kxx)).abs() <= 1e-12 * m[0][0]);
        prop_assert!((m[2][2] - bulk_half_weight(hy, hx, kyy)).abs() <= 1e-12 * m[2][2]);
    }

    #[test]
    fn fracture_quadrature_matches_half_weight(hs in 1e-3..1.0f64, d in 1e-5..1e-1f64, k in 1e-4..1e4f64) {
        let m = fracture_mass(hs, d, k, Rule::Quadrature);
        let w = fracture_half_weight(hs, d, k);
        prop_assert!((m[0][0] - w).abs() <= 1e-12 * w);
        prop_assert_eq!(m[0][1], 0.0);
        let e = fracture_mass(hs, d, k, Rule::Exact);
        prop_assert!((e[0][0] - 2.0 * w / 3.0).abs() <= 1e-12 * w);
    }
}
