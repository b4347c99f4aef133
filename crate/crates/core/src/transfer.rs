//! Grid transfer operators between two consecutive levels.
//!
//! Restriction is block diagonal over the five unknown groups: four-point
//! averaging for bulk pressures, the six-point stencil for bulk velocities,
//! `(1/4, 1/2, 1/4)` for fracture velocities, `(1/2, 1/2)` for fracture
//! pressures and the identity for intersection pressures. Prolongation is
//! `sigma * R^T` with `sigma` = 4, 2, 1 for 2D, 1D and 0D groups.
//!
//! Stencil neighbours that do not exist (outside the domain, eliminated, or
//! on the other side of a fracture) are dropped; see [`TruncatedRows`].

use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::mesh::{EdgeDofs, GridLevel, Group};
use crate::sparse::CsrMatrix;

/// Treatment of velocity stencil rows that lose neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TruncatedRows {
    /// Rescale the remaining weights to sum to one.
    #[default]
    Renormalize,
    /// Keep the remaining standard weights. Prolongation then reproduces
    /// constants, but truncated rows sum to less than one.
    Keep,
}

/// Prolongation scale of a group.
pub fn sigma(group: Group) -> f64 {
    match group {
        Group::U2 | Group::P2 => 4.0,
        Group::U1 | Group::P1 => 2.0,
        Group::P0 => 1.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferOps {
    restriction: CsrMatrix,
    prolongation: CsrMatrix,
    coarse_ranges: [Range<usize>; 5],
    fine_ranges: [Range<usize>; 5],
}

impl TransferOps {
    pub fn new(coarse: &GridLevel, fine: &GridLevel, rows: TruncatedRows) -> Self {
        assert_eq!(coarse.level + 1, fine.level, "levels must be consecutive");
        let cl = &coarse.layout;
        let fl = &fine.layout;
        let mut t: Vec<(usize, usize, f64)> = Vec::new();
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(6);
        let flush = |t: &mut Vec<(usize, usize, f64)>, r: usize, row: &mut Vec<(usize, f64)>| {
            let scale = match rows {
                TruncatedRows::Keep => 1.0,
                TruncatedRows::Renormalize => 1.0 / row.iter().map(|e| e.1).sum::<f64>(),
            };
            t.extend(row.drain(..).map(|(c, w)| (r, c, w * scale)));
        };

        // Vertical edges.
        for cj in 0..coarse.ny {
            for ci in 0..=coarse.nx {
                let (fi, fj) = (2 * ci, 2 * cj);
                let edge = |r: usize, plus: Option<bool>, t: &mut Vec<_>, row: &mut Vec<(usize, f64)>| {
                    for dj in 0..2 {
                        if let Some(c) = side_of(fl.ux_at(fi, fj + dj), plus) {
                            row.push((c, 0.25));
                        }
                        if fi > 0 && plus != Some(true) {
                            if let Some(c) = fl.ux_at(fi - 1, fj + dj).from_side(false) {
                                row.push((c, 0.125));
                            }
                        }
                        if fi < fine.nx && plus != Some(false) {
                            if let Some(c) = fl.ux_at(fi + 1, fj + dj).from_side(false) {
                                row.push((c, 0.125));
                            }
                        }
                    }
                    flush(t, r, row);
                };
                match cl.ux_at(ci, cj) {
                    EdgeDofs::Eliminated => {}
                    EdgeDofs::Single(r) => edge(r, None, &mut t, &mut row),
                    EdgeDofs::Twin { minus, plus } => {
                        edge(minus, Some(false), &mut t, &mut row);
                        edge(plus, Some(true), &mut t, &mut row);
                    }
                }
            }
        }
        // Horizontal edges.
        for cj in 0..=coarse.ny {
            for ci in 0..coarse.nx {
                let (fi, fj) = (2 * ci, 2 * cj);
                let edge = |r: usize, plus: Option<bool>, t: &mut Vec<_>, row: &mut Vec<(usize, f64)>| {
                    for di in 0..2 {
                        if let Some(c) = side_of(fl.uy_at(fi + di, fj), plus) {
                            row.push((c, 0.25));
                        }
                        if fj > 0 && plus != Some(true) {
                            if let Some(c) = fl.uy_at(fi + di, fj - 1).from_side(false) {
                                row.push((c, 0.125));
                            }
                        }
                        if fj < fine.ny && plus != Some(false) {
                            if let Some(c) = fl.uy_at(fi + di, fj + 1).from_side(false) {
                                row.push((c, 0.125));
                            }
                        }
                    }
                    flush(t, r, row);
                };
                match cl.uy_at(ci, cj) {
                    EdgeDofs::Eliminated => {}
                    EdgeDofs::Single(r) => edge(r, None, &mut t, &mut row),
                    EdgeDofs::Twin { minus, plus } => {
                        edge(minus, Some(false), &mut t, &mut row);
                        edge(plus, Some(true), &mut t, &mut row);
                    }
                }
            }
        }

        // Fracture velocities.
        for (p, cd) in cl.pieces.iter().enumerate() {
            let fd = &fl.pieces[p];
            for (n, r) in cd.velocity.iter().enumerate() {
                let Some(r) = *r else { continue };
                let f = 2 * n;
                for (node, w) in [(f.wrapping_sub(1), 0.25), (f, 0.5), (f + 1, 0.25)] {
                    if let Some(Some(c)) = fd.velocity.get(node) {
                        row.push((*c, w));
                    }
                }
                flush(&mut t, r, &mut row);
            }
        }

        // Bulk pressures.
        for cj in 0..coarse.ny {
            for ci in 0..coarse.nx {
                let r = cl.cell_at(ci, cj);
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    t.push((r, fl.cell_at(2 * ci + di, 2 * cj + dj), 0.25));
                }
            }
        }

        // Fracture pressures.
        for (p, cd) in cl.pieces.iter().enumerate() {
            let fd = &fl.pieces[p];
            for (e, &r) in cd.pressure.iter().enumerate() {
                t.push((r, fd.pressure[2 * e], 0.5));
                t.push((r, fd.pressure[2 * e + 1], 0.5));
            }
        }

        // Intersection pressures.
        for (k, &r) in cl.junctions.iter().enumerate() {
            t.push((r, fl.junctions[k], 1.0));
        }

        let restriction = CsrMatrix::from_triplets(cl.len(), fl.len(), &t);
        let coarse_ranges = Group::ALL.map(|g| cl.range(g));
        let group_of = |k: usize| {
            Group::ALL
                .into_iter()
                .find(|&g| coarse_ranges[g.index()].contains(&k))
                .unwrap()
        };
        let pt: Vec<_> = t.iter().map(|&(r, c, w)| (c, r, sigma(group_of(r)) * w)).collect();
        let prolongation = CsrMatrix::from_triplets(fl.len(), cl.len(), &pt);
        Self {
            restriction,
            prolongation,
            coarse_ranges,
            fine_ranges: Group::ALL.map(|g| fl.range(g)),
        }
    }

    pub fn restriction(&self) -> &CsrMatrix {
        &self.restriction
    }

    pub fn prolongation(&self) -> &CsrMatrix {
        &self.prolongation
    }

    pub fn coarse_range(&self, group: Group) -> Range<usize> {
        self.coarse_ranges[group.index()].clone()
    }

    pub fn fine_range(&self, group: Group) -> Range<usize> {
        self.fine_ranges[group.index()].clone()
    }

    pub fn restrict(&self, fine: &[f64]) -> Result<Vec<f64>> {
        self.restriction.mul_vec(fine)
    }

    pub fn prolong(&self, coarse: &[f64]) -> Result<Vec<f64>> {
        self.prolongation.mul_vec(coarse)
    }

    /// `coarse = diag(scale[group]) R fine`.
    pub fn restrict_scaled(&self, fine: &[f64], scale: [f64; 5], coarse: &mut [f64]) -> Result<()> {
        self.restriction.mul_vec_into(fine, coarse)?;
        for g in Group::ALL {
            if scale[g.index()] != 1.0 {
                coarse[self.coarse_range(g)].iter_mut().for_each(|v| *v *= scale[g.index()]);
            }
        }
        Ok(())
    }

    /// `fine += diag(scale[group]) P coarse`.
    pub fn prolong_add_scaled(&self, coarse: &[f64], scale: [f64; 5], fine: &mut [f64]) -> Result<()> {
        if coarse.len() != self.prolongation.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.prolongation.cols(),
                actual: coarse.len(),
            });
        }
        if fine.len() != self.prolongation.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.prolongation.rows(),
                actual: fine.len(),
            });
        }
        for g in Group::ALL {
            let s = scale[g.index()];
            for k in self.fine_range(g) {
                fine[k] += s * self.prolongation.row_dot(k, coarse);
            }
        }
        Ok(())
    }
}

/// Fine edge unknown collinear with a coarse edge. Twins pick the same side;
/// a shared coarse edge has shared children.
fn side_of(edge: EdgeDofs, plus: Option<bool>) -> Option<usize> {
    match (edge, plus) {
        (EdgeDofs::Twin { minus, plus: p }, Some(side)) => Some(if side { p } else { minus }),
        (EdgeDofs::Single(c), None) => Some(c),
        (EdgeDofs::Eliminated, _) => None,
        _ => unreachable!("fracture edges are nested across levels"),
    }
}
