//! Reference computations that do not share code with the solver: a sparse
//! LU direct solve and pointwise quadrature of the lowest-order
//! Raviart-Thomas mass terms.

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

use mdmg_core::sparse::norm2;
use mdmg_core::{Error, MixedDimSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorStatus {
    Ok,
    /// One step of iterative refinement was needed to reach the tolerance.
    Refined,
}

/// Distances between two vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub absolute: f64,
    pub relative: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub solution: Vec<f64>,
    pub status: FactorStatus,
    /// `|b - A x| / |b|`.
    pub relative_residual: f64,
}

impl OracleReport {
    /// Distance of `candidate` from the reference solution.
    pub fn compare(&self, candidate: &[f64]) -> Comparison {
        assert_eq!(candidate.len(), self.solution.len());
        let mut sq = 0.0;
        let mut max = 0.0f64;
        for (a, b) in candidate.iter().zip(&self.solution) {
            let d = a - b;
            sq += d * d;
            max = max.max(d.abs());
        }
        let absolute = sq.sqrt();
        let norm = norm2(&self.solution);
        Comparison {
            absolute,
            relative: if norm > 0.0 { absolute / norm } else { absolute },
            max,
        }
    }
}

const TOLERANCE: f64 = 1e-10;

/// Solves the system with a pivoted sparse LU factorization.
pub fn direct_solve(system: &MixedDimSystem) -> Result<OracleReport, Error> {
    let n = system.len();
    let b = &system.rhs;
    let bn = norm2(b);
    if bn == 0.0 {
        return Ok(OracleReport {
            solution: vec![0.0; n],
            status: FactorStatus::Ok,
            relative_residual: 0.0,
        });
    }
    let triplets: Vec<_> = system
        .matrix
        .triplets()
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|_| Error::DimensionMismatch { expected: n, actual: n })?;
    let lu = a.sp_lu().map_err(|e| match e {
        faer::sparse::linalg::LuError::SymbolicSingular { index } => Error::SingularSystem { column: index },
        faer::sparse::linalg::LuError::Generic(_) => Error::SingularSystem { column: 0 },
    })?;

    let solve = |rhs: &[f64]| {
        let mut x = Col::<f64>::from_fn(n, |i| rhs[i]);
        lu.solve_in_place(x.as_mut());
        (0..n).map(|i| x[i]).collect::<Vec<f64>>()
    };
    let residual = |x: &[f64]| {
        let ax = system.matrix.mul_vec(x).expect("square system");
        b.iter().zip(ax).map(|(bi, ai)| bi - ai).collect::<Vec<f64>>()
    };

    let mut x = solve(b);
    if let Some(k) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::SingularSystem { column: k });
    }
    let mut r = residual(&x);
    let mut status = FactorStatus::Ok;
    if norm2(&r) > TOLERANCE * bn {
        let dx = solve(&r);
        x.iter_mut().zip(dx).for_each(|(xi, d)| *xi += d);
        r = residual(&x);
        status = FactorStatus::Refined;
    }
    let relative_residual = norm2(&r) / bn;
    if !(relative_residual <= TOLERANCE) {
        return Err(Error::SingularSystem { column: 0 });
    }
    Ok(OracleReport {
        solution: x,
        status,
        relative_residual,
    })
}

/// Integration rule for the velocity mass terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Trapezoidal rule along each velocity component, midpoint across.
    Quadrature,
    /// Two-point Gauss in each direction, exact for these integrands.
    Exact,
}

/// Axis-parallel rectangle `[0, hx] x [0, hy]` with diagonal permeability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub hx: f64,
    pub hy: f64,
    pub kxx: f64,
    pub kyy: f64,
}

/// Edges in the order left, right, bottom, top.
pub const EDGES: usize = 4;

/// Basis function of edge `e` at `(x, y)`: unit flux through the edge in the
/// positive coordinate direction.
pub fn bulk_basis(cell: &Cell, e: usize, x: f64, y: f64) -> [f64; 2] {
    let area = cell.hx * cell.hy;
    match e {
        0 => [(cell.hx - x) / area, 0.0],
        1 => [x / area, 0.0],
        2 => [0.0, (cell.hy - y) / area],
        3 => [0.0, y / area],
        _ => panic!("edge index out of range"),
    }
}

fn points(rule: Rule, trapezoid: bool, h: f64) -> Vec<(f64, f64)> {
    match (rule, trapezoid) {
        (Rule::Quadrature, true) => vec![(0.0, h / 2.0), (h, h / 2.0)],
        (Rule::Quadrature, false) => vec![(h / 2.0, h)],
        (Rule::Exact, _) => {
            let g = 0.5 / 3f64.sqrt();
            vec![((0.5 - g) * h, h / 2.0), ((0.5 + g) * h, h / 2.0)]
        }
    }
}

/// Local matrix `(K^-1 v_j, v_i)` over one cell.
pub fn bulk_mass(cell: &Cell, rule: Rule) -> [[f64; EDGES]; EDGES] {
    let mut m = [[0.0; EDGES]; EDGES];
    // x component: trapezoid in x, midpoint in y; y component the other way.
    for (comp, kinv) in [(0, 1.0 / cell.kxx), (1, 1.0 / cell.kyy)] {
        for (x, wx) in points(rule, comp == 0, cell.hx) {
            for (y, wy) in points(rule, comp == 1, cell.hy) {
                let v: Vec<[f64; 2]> = (0..EDGES).map(|e| bulk_basis(cell, e, x, y)).collect();
                for i in 0..EDGES {
                    for j in 0..EDGES {
                        m[i][j] += wx * wy * kinv * v[i][comp] * v[j][comp];
                    }
                }
            }
        }
    }
    m
}

/// Local matrix `((d K_tau)^-1 phi_j, phi_i)` of a fracture element of
/// length `hs`, nodes ordered by arclength.
pub fn fracture_mass(hs: f64, aperture: f64, k_tangential: f64, rule: Rule) -> [[f64; 2]; 2] {
    let phi = |s: f64| [(hs - s) / hs, s / hs];
    let mut m = [[0.0; 2]; 2];
    for (s, w) in points(rule, true, hs) {
        let v = phi(s);
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += w * v[i] * v[j] / (aperture * k_tangential);
            }
        }
    }
    m
}

/// Interface terms coupling the two bulk fluxes collocated on a fracture
/// edge of length `h`, both oriented along the positive axis. Index 0 is the
/// side with the smaller coordinate.
pub fn interface_mass(h: f64, aperture: f64, k_normal: f64, xi: f64) -> [[f64; 2]; 2] {
    // Outward normals of the two sides, measured along the axis.
    let normal = [1.0, -1.0];
    let weight = aperture / (2.0 * k_normal);
    let coeff = [[xi, xi - 1.0], [xi - 1.0, xi]];
    let mut m = [[0.0; 2]; 2];
    // Midpoint on the edge of (v_i . n_i)(v_j . n_j), with v . e = 1/h.
    for i in 0..2 {
        for j in 0..2 {
            let trace = (normal[i] / h) * (normal[j] / h);
            m[i][j] = weight * coeff[i][j] * h * trace;
        }
    }
    m
}
