use mdmg_core::boundary::{BoundaryCondition, BoundarySpec};
use mdmg_core::mesh::{build_hierarchy, Dof, EdgeSide, GridHierarchy, Group};
use mdmg_core::network::{Axis, FractureNetwork, FractureSegment, Rect};
use mdmg_core::sparse::dot;
use mdmg_core::transfer::{sigma, TransferOps, TruncatedRows};

fn crossing() -> (FractureNetwork, GridHierarchy) {
    let f = |axis, pos, a, b| FractureSegment::new(axis, pos, a, b, 1e-2, 1e2);
    let net = FractureNetwork::build(
        Rect::unit_square(),
        vec![f(Axis::Vertical, 0.5, 0.0, 1.0), f(Axis::Horizontal, 0.5, 0.0, 1.0), f(Axis::Horizontal, 0.75, 0.5, 1.0)],
    )
    .unwrap();
    let bc = BoundarySpec {
        left: BoundaryCondition::Pressure(1.0),
        right: BoundaryCondition::Pressure(0.0),
        bottom: BoundaryCondition::Flux(0.0),
        top: BoundaryCondition::Flux(0.0),
    };
    let h = build_hierarchy(&net, &bc, 3);
    (net, h)
}

fn ops(h: &GridHierarchy, k: usize, rows: TruncatedRows) -> TransferOps {
    TransferOps::new(&h.levels[k], &h.levels[k + 1], rows)
}

fn group_of(layout: &mdmg_core::mesh::DofLayout, k: usize) -> Group {
    layout.dof(k).group()
}

#[test]
fn restriction_is_block_diagonal_and_keeps_twins_apart() {
    let (_, h) = crossing();
    for k in 0..h.depth() {
        let t = ops(&h, k, TruncatedRows::Renormalize);
        let (cl, fl) = (&h.levels[k].layout, &h.levels[k + 1].layout);
        let r = t.restriction();
        for row in 0..r.rows() {
            let (cols, _) = r.row(row);
            assert!(!cols.is_empty());
            for &c in cols {
                assert_eq!(group_of(cl, row), group_of(fl, c));
                let side = |d: Dof| match d {
                    Dof::Ux { side, .. } | Dof::Uy { side, .. } => Some(side),
                    _ => None,
                };
                if let (Some(a), Some(b)) = (side(cl.dof(row)), side(fl.dof(c))) {
                    let opposite = matches!((a, b), (EdgeSide::Minus, EdgeSide::Plus) | (EdgeSide::Plus, EdgeSide::Minus));
                    assert!(!opposite, "coarse {:?} mixes with fine {:?}", cl.dof(row), fl.dof(c));
                }
            }
        }
    }
}

#[test]
fn renormalized_rows_sum_to_one() {
    let (_, h) = crossing();
    for k in 0..h.depth() {
        let r = ops(&h, k, TruncatedRows::Renormalize);
        let r = r.restriction();
        for row in 0..r.rows() {
            let s: f64 = r.row(row).1.iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "row {row} sums to {s}");
        }
    }
}

#[test]
fn kept_rows_reproduce_constants_under_prolongation() {
    let (_, h) = crossing();
    for k in 0..h.depth() {
        let t = ops(&h, k, TruncatedRows::Keep);
        let (cl, fl) = (&h.levels[k].layout, &h.levels[k + 1].layout);
        for g in [Group::P2, Group::P1, Group::P0] {
            let mut c = vec![0.0; cl.len()];
            c[cl.range(g)].iter_mut().for_each(|v| *v = 1.0);
            let f = t.prolong(&c).unwrap();
            for i in fl.range(g) {
                assert!((f[i] - 1.0).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn single_coarse_pressure_fills_its_children() {
    let (_, h) = crossing();
    let t = ops(&h, 1, TruncatedRows::Renormalize);
    let (c, f) = (&h.levels[1], &h.levels[2]);
    let mut v = vec![0.0; c.layout.len()];
    v[c.layout.cell_at(1, 2)] = 1.0;
    let p = t.prolong(&v).unwrap();
    for j in 0..f.ny {
        for i in 0..f.nx {
            let expected = if i / 2 == 1 && j / 2 == 2 { 1.0 } else { 0.0 };
            assert_eq!(p[f.layout.cell_at(i, j)], expected);
        }
    }
}

#[test]
fn intersection_pressures_pass_through() {
    let (_, h) = crossing();
    let t = ops(&h, 2, TruncatedRows::Renormalize);
    let fl = &h.levels[3].layout;
    let mut v = vec![0.0; fl.len()];
    for (k, &d) in fl.junctions.iter().enumerate() {
        v[d] = k as f64 + 3.0;
    }
    let c = t.restrict(&v).unwrap();
    for (k, &d) in h.levels[2].layout.junctions.iter().enumerate() {
        assert_eq!(c[d], k as f64 + 3.0);
    }
}

#[test]
fn interior_velocity_restriction_is_exact_for_linear_data() {
    let net = FractureNetwork::build(Rect::unit_square(), vec![]).unwrap();
    let h = build_hierarchy(&net, &BoundarySpec::zero_pressure(), 3);
    let t = ops(&h, 1, TruncatedRows::Renormalize);
    let (c, f) = (&h.levels[1], &h.levels[2]);
    let mut v = vec![0.0; f.layout.len()];
    for (k, d) in f.layout.dofs().iter().enumerate() {
        if let Dof::Ux { i, .. } = *d {
            v[k] = f.vertex(i, 0).0;
        }
    }
    let r = t.restrict(&v).unwrap();
    for (k, d) in c.layout.dofs().iter().enumerate() {
        if let Dof::Ux { i, .. } = *d {
            if i > 0 && i < c.nx {
                assert!((r[k] - c.vertex(i, 0).0).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn prolongation_is_scaled_adjoint() {
    let (_, h) = crossing();
    let t = ops(&h, 2, TruncatedRows::Renormalize);
    let (cl, fl) = (&h.levels[2].layout, &h.levels[3].layout);
    let a: Vec<f64> = (0..fl.len()).map(|i| ((i * 37 % 101) as f64).sin()).collect();
    for g in Group::ALL {
        let mut b = vec![0.0; cl.len()];
        for i in cl.range(g) {
            b[i] = ((i * 13 % 29) as f64).cos();
        }
        let lhs = sigma(g) * dot(&t.restrict(&a).unwrap(), &b);
        let rhs = dot(&a, &t.prolong(&b).unwrap());
        assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));
    }
}

#[test]
fn dimension_mismatch_is_reported() {
    let (_, h) = crossing();
    let t = ops(&h, 0, TruncatedRows::Renormalize);
    assert!(matches!(t.restrict(&[1.0]), Err(mdmg_core::Error::DimensionMismatch { .. })));
    assert!(t.prolong(&[1.0]).is_err());
}
