use mdmg_core::boundary::{BoundaryCondition, BoundarySpec};
use mdmg_core::dense::DenseLu;
use mdmg_core::mesh::{build_hierarchy, Group};
use mdmg_core::network::{FractureNetwork, FractureSegment, Rect};
use mdmg_core::sparse::{dot, CsrMatrix};
use mdmg_core::transfer::{sigma, TransferOps, TruncatedRows};
use proptest::prelude::*;

fn triplets(n: usize) -> impl Strategy<Value = Vec<(usize, usize, f64)>> {
    prop::collection::vec((0..n, 0..n, -10.0..10.0f64), 0..4 * n)
}

/// Distinct full-length lines on a lattice of eighths.
fn grid_lines() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (prop::collection::btree_set(1..8usize, 0..3), prop::collection::btree_set(1..8usize, 0..3))
        .prop_map(|(v, h)| (v.into_iter().collect(), h.into_iter().collect()))
}

fn lines_network(v: &[usize], h: &[usize]) -> FractureNetwork {
    let mut segs = Vec::new();
    for &i in v {
        segs.push(FractureSegment::vertical(i as f64 / 8.0, 0.0, 1.0, 1e-3, 10.0));
    }
    for &j in h {
        segs.push(FractureSegment::horizontal(j as f64 / 8.0, 0.0, 1.0, 1e-3, 0.1));
    }
    FractureNetwork::build(Rect::unit_square(), segs).unwrap()
}

proptest! {
    #[test]
    fn csr_product_matches_dense(t in triplets(9), x in prop::collection::vec(-1.0..1.0f64, 9)) {
        let a = CsrMatrix::from_triplets(9, 9, &t);
        let d = a.to_dense();
        let y = a.mul_vec(&x).unwrap();
        for r in 0..9 {
            let expected: f64 = (0..9).map(|c| d[r * 9 + c] * x[c]).sum();
            prop_assert!((y[r] - expected).abs() < 1e-12);
        }
        let mut summed = vec![0.0; 81];
        for &(r, c, v) in &t {
            summed[r * 9 + c] += v;
        }
        for (a, b) in d.iter().zip(&summed) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let att = a.transpose();
        for (r, c, v) in a.triplets() {
            prop_assert_eq!(att.get(c, r), v);
        }
    }

    #[test]
    fn dense_lu_solves_dominant_systems(
        n in 1usize..8,
        seed in prop::collection::vec(-1.0..1.0f64, 64),
        b in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let mut a: Vec<f64> = seed[..n * n].to_vec();
        for i in 0..n {
            a[i * n + i] += if i % 2 == 0 { n as f64 + 1.0 } else { -(n as f64) - 1.0 };
        }
        let lu = DenseLu::factor(n, a.clone(), 1e-14).unwrap();
        let mut x = b[..n].to_vec();
        lu.solve_in_place(&mut x);
        for r in 0..n {
            let ax: f64 = (0..n).map(|c| a[r * n + c] * x[c]).sum();
            prop_assert!((ax - b[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn partition_is_deterministic((v, h) in grid_lines()) {
        let a = lines_network(&v, &h);
        let b = lines_network(&v, &h);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.subdomain_count(), (v.len() + 1) * (h.len() + 1));
        let cells: usize = a.partition.subdomain_sizes().iter().sum();
        prop_assert_eq!(cells, a.lattice().nx * a.lattice().ny);
        prop_assert_eq!(a.intersections.len(), v.len() * h.len());
    }

    #[test]
    fn transfers_are_scaled_adjoints(
        (v, h) in grid_lines(),
        rows in prop_oneof![Just(TruncatedRows::Renormalize), Just(TruncatedRows::Keep)],
        seed in 0u64..1000,
    ) {
        let net = lines_network(&v, &h);
        let bc = BoundarySpec {
            left: BoundaryCondition::Pressure(1.0),
            right: BoundaryCondition::Flux(0.0),
            bottom: BoundaryCondition::Flux(0.0),
            top: BoundaryCondition::Pressure(0.0),
        };
        let hier = build_hierarchy(&net, &bc, 1);
        let t = TransferOps::new(&hier.levels[0], &hier.levels[1], rows);
        let (cl, fl) = (&hier.levels[0].layout, &hier.levels[1].layout);
        let wave = |i: usize, s: u64| (((i as u64 + 1) * (s + 7)) as f64 * 0.377).sin();
        let fine: Vec<f64> = (0..fl.len()).map(|i| wave(i, seed)).collect();
        for g in Group::ALL {
            let mut coarse = vec![0.0; cl.len()];
            for i in cl.range(g) {
                coarse[i] = wave(i, seed + 3);
            }
            let lhs = sigma(g) * dot(&t.restrict(&fine).unwrap(), &coarse);
            let rhs = dot(&fine, &t.prolong(&coarse).unwrap());
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}
