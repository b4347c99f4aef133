use mdmg_core::assembly::assemble;
use mdmg_core::boundary::{BoundaryCondition, BoundarySpec};
use mdmg_core::dense::DenseLu;
use mdmg_core::mesh::{EdgeDofs, GridLevel, Group};
use mdmg_core::network::{Axis, FractureNetwork, FractureSegment, Rect};
use mdmg_core::sparse::norm2;
use mdmg_core::vanka::{smooth, IntersectionBlock, SmootherPlan};
use mdmg_core::{MixedDimSystem, ModelConfig};

fn flow_x() -> BoundarySpec {
    BoundarySpec {
        left: BoundaryCondition::Pressure(1.0),
        right: BoundaryCondition::Pressure(0.0),
        bottom: BoundaryCondition::Flux(0.0),
        top: BoundaryCondition::Pressure(0.5),
    }
}

fn network() -> FractureNetwork {
    let f = |axis, pos, a, b, k| FractureSegment::new(axis, pos, a, b, 1e-2, k);
    FractureNetwork::build(
        Rect::unit_square(),
        vec![
            f(Axis::Vertical, 0.5, 0.0, 1.0, 1e2),
            f(Axis::Horizontal, 0.5, 0.0, 1.0, 1e-2),
            f(Axis::Horizontal, 0.75, 0.5, 1.0, 1e2),
        ],
    )
    .unwrap()
}

fn setup(level: usize) -> (GridLevel, MixedDimSystem, SmootherPlan) {
    let net = network();
    let bc = flow_x();
    let grid = GridLevel::new(&net, &bc, level);
    let sys = assemble(&net, &grid, &ModelConfig::new(1.0, bc)).unwrap();
    let plan = SmootherPlan::new(&grid, &sys, IntersectionBlock::WithPressure).unwrap();
    (grid, sys, plan)
}

fn direct(sys: &MixedDimSystem) -> Vec<f64> {
    let lu = DenseLu::factor(sys.len(), sys.matrix.to_dense(), 1e-14).unwrap();
    let mut x = sys.rhs.clone();
    lu.solve_in_place(&mut x);
    x
}

#[test]
fn block_sizes_follow_the_layout() {
    let (grid, _, plan) = setup(2);
    assert_eq!(plan.bulk.len(), grid.cell_count());
    assert!(plan.bulk.iter().all(|b| b.dofs().len() <= 5));
    for (p, piece) in grid.pieces.iter().enumerate() {
        for e in 0..piece.element_count() {
            if let EdgeDofs::Twin { .. } = grid.element_edge(p, e) {
                let interior = grid.layout.pieces[p].velocity[e].is_some() && grid.layout.pieces[p].velocity[e + 1].is_some();
                if interior {
                    assert!(plan.fracture.iter().any(|b| b.dofs().len() == 5));
                }
            }
        }
    }
    // Two junctions: an X with four ends and a T with three.
    let mut sizes: Vec<usize> = plan.intersection.iter().map(|b| b.dofs().len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![4, 5]);
    let velocities_only = SmootherPlan::new(&grid, &setup(2).1, IntersectionBlock::VelocitiesOnly).unwrap();
    let mut sizes: Vec<usize> = velocities_only.intersection.iter().map(|b| b.dofs().len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![3, 4]);
}

#[test]
fn every_block_solve_zeroes_its_rows() {
    let (_, sys, plan) = setup(3);
    let b = &sys.rhs;
    let bn = norm2(b);
    let mut x: Vec<f64> = (0..sys.len()).map(|i| ((i * 7919 % 113) as f64 / 113.0) - 0.5).collect();
    for block in plan.blocks() {
        block.relax(&sys, &mut x, b);
        for &k in block.dofs() {
            let r = b[k] - sys.matrix.row_dot(k, &x);
            assert!(r.abs() <= 1e-13 * bn, "row {k}: {r:e}");
        }
    }
}

#[test]
fn exact_solution_is_a_fixed_point() {
    let (_, sys, plan) = setup(3);
    let x = direct(&sys);
    let mut y = x.clone();
    smooth(&sys, &mut y, &sys.rhs, &plan).unwrap();
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in x.iter().zip(&y) {
        assert!((a - b).abs() <= 1e-12 * scale);
    }
}

#[test]
fn bulk_sweep_reduces_errors_without_fractures() {
    let net = FractureNetwork::build(Rect::unit_square(), vec![]).unwrap();
    let bc = flow_x();
    let grid = GridLevel::new(&net, &bc, 4);
    assert_eq!((grid.nx, grid.ny), (16, 16));
    let sys = assemble(&net, &grid, &ModelConfig::new(1.0, bc)).unwrap();
    let plan = SmootherPlan::new(&grid, &sys, IntersectionBlock::WithPressure).unwrap();
    let zero = vec![0.0; sys.len()];
    let mut state = 0x2545F4914F6CDD1Du64;
    let mut rand = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for _ in 0..20 {
        let mut e: Vec<f64> = (0..sys.len()).map(|_| rand()).collect();
        let before = norm2(&e);
        smooth(&sys, &mut e, &zero, &plan).unwrap();
        assert!(norm2(&e) < before);
    }
}

#[test]
fn smoother_checks_dimensions() {
    let (_, sys, plan) = setup(1);
    let mut x = vec![0.0; 3];
    assert!(smooth(&sys, &mut x, &sys.rhs, &plan).is_err());
}

#[test]
fn velocity_blocks_come_before_pressures_of_their_group() {
    let (grid, sys, plan) = setup(2);
    let cells = sys.range(Group::P2);
    for (block, (i, j)) in plan.bulk.iter().zip((0..grid.ny).flat_map(|j| (0..grid.nx).map(move |i| (i, j)))) {
        let _ = (i, j);
        let last = *block.dofs().last().unwrap();
        assert!(cells.contains(&last));
    }
}
