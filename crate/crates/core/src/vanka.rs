//! Vanka-type block smoother composed of three sweeps: bulk cells, fracture
//! elements and intersection points, in that order.

use alloc::vec::Vec;

use crate::assembly::MixedDimSystem;
use crate::dense::DenseLu;
use crate::error::{Error, Result};
use crate::mesh::{EdgeDofs, GridLevel};

/// Largest local block.
pub const MAX_BLOCK: usize = 6;

/// Unknowns updated together in an intersection block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntersectionBlock {
    /// Incident fracture velocities and the intersection pressure.
    #[default]
    WithPressure,
    /// Incident fracture velocities only; the intersection pressure is never
    /// relaxed.
    VelocitiesOnly,
}

/// One local block with its factorized submatrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VankaBlock {
    dofs: [usize; MAX_BLOCK],
    len: usize,
    lu: DenseLu,
}

impl VankaBlock {
    fn new(dofs: &[usize], system: &MixedDimSystem) -> Result<Self> {
        let n = dofs.len();
        assert!(n <= MAX_BLOCK);
        let mut a = Vec::with_capacity(n * n);
        for &r in dofs {
            for &c in dofs {
                a.push(system.matrix.get(r, c));
            }
        }
        let lu = DenseLu::factor(n, a, 0.0).map_err(|_| Error::SingularBlock { size: n })?;
        let mut arr = [0; MAX_BLOCK];
        arr[..n].copy_from_slice(dofs);
        Ok(Self { dofs: arr, len: n, lu })
    }

    pub fn dofs(&self) -> &[usize] {
        &self.dofs[..self.len]
    }

    /// Solves the local problem for the current residual and updates `x`.
    pub fn relax(&self, system: &MixedDimSystem, x: &mut [f64], b: &[f64]) {
        let mut r = [0.0; MAX_BLOCK];
        let r = &mut r[..self.len];
        for (ri, &k) in r.iter_mut().zip(self.dofs()) {
            *ri = b[k] - system.matrix.row_dot(k, x);
        }
        self.lu.solve_in_place(r);
        for (ri, &k) in r.iter().zip(self.dofs()) {
            x[k] += ri;
        }
    }
}

/// Ordered blocks of the three sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherPlan {
    pub bulk: Vec<VankaBlock>,
    pub fracture: Vec<VankaBlock>,
    pub intersection: Vec<VankaBlock>,
}

impl SmootherPlan {
    /// Blocks for `level`: cells by subdomain then row-major, fracture
    /// elements by piece then arclength, intersections in network order.
    pub fn new(level: &GridLevel, system: &MixedDimSystem, intersections: IntersectionBlock) -> Result<Self> {
        let layout = &level.layout;
        let subdomains = level.cell_subdomain.iter().copied().max().map_or(0, |m| m + 1);
        let mut by_subdomain: Vec<Vec<(usize, usize)>> = (0..subdomains).map(|_| Vec::new()).collect();
        for j in 0..level.ny {
            for i in 0..level.nx {
                by_subdomain[level.cell_subdomain[j * level.nx + i]].push((i, j));
            }
        }
        let mut bulk = Vec::with_capacity(level.cell_count());
        let mut dofs = Vec::with_capacity(MAX_BLOCK);
        for cells in &by_subdomain {
            for &(i, j) in cells {
                dofs.clear();
                dofs.extend(layout.cell_velocities(i, j).into_iter().flatten());
                dofs.push(layout.cell_at(i, j));
                bulk.push(VankaBlock::new(&dofs, system)?);
            }
        }

        let mut fracture = Vec::new();
        for (p, piece) in level.pieces.iter().enumerate() {
            let pd = &layout.pieces[p];
            for e in 0..piece.element_count() {
                dofs.clear();
                dofs.extend(pd.velocity[e]);
                dofs.extend(pd.velocity[e + 1]);
                if let EdgeDofs::Twin { minus, plus } = level.element_edge(p, e) {
                    dofs.push(minus);
                    dofs.push(plus);
                }
                dofs.push(pd.pressure[e]);
                fracture.push(VankaBlock::new(&dofs, system)?);
            }
        }

        let mut incident: Vec<Vec<usize>> = layout.junctions.iter().map(|_| Vec::new()).collect();
        for (p, piece) in level.pieces.iter().enumerate() {
            for end in 0..2 {
                if let crate::network::PieceEnd::Junction(k) = piece.ends[end] {
                    let node = if end == 0 { 0 } else { piece.element_count() };
                    incident[k].push(layout.pieces[p].velocity[node].expect("junction velocity"));
                }
            }
        }
        let mut intersection = Vec::with_capacity(incident.len());
        for (k, vel) in incident.iter().enumerate() {
            dofs.clear();
            dofs.extend(vel);
            if intersections == IntersectionBlock::WithPressure {
                dofs.push(layout.junctions[k]);
            }
            intersection.push(VankaBlock::new(&dofs, system)?);
        }
        Ok(Self {
            bulk,
            fracture,
            intersection,
        })
    }

    /// All blocks in sweep order.
    pub fn blocks(&self) -> impl Iterator<Item = &VankaBlock> {
        self.bulk.iter().chain(&self.fracture).chain(&self.intersection)
    }
}

/// One application of the composed smoother.
pub fn smooth(system: &MixedDimSystem, x: &mut [f64], b: &[f64], plan: &SmootherPlan) -> Result<()> {
    smooth_with(system, x, b, plan, 1)
}

/// Like [`smooth`], with the fracture sweep repeated `fracture_sweeps` times.
pub fn smooth_with(
    system: &MixedDimSystem,
    x: &mut [f64],
    b: &[f64],
    plan: &SmootherPlan,
    fracture_sweeps: usize,
) -> Result<()> {
    if x.len() != system.len() || b.len() != system.len() {
        return Err(Error::DimensionMismatch {
            expected: system.len(),
            actual: if x.len() != system.len() { x.len() } else { b.len() },
        });
    }
    for block in &plan.bulk {
        block.relax(system, x, b);
    }
    for _ in 0..fracture_sweeps {
        for block in &plan.fracture {
            block.relax(system, x, b);
        }
    }
    for block in &plan.intersection {
        block.relax(system, x, b);
    }
    Ok(())
}
