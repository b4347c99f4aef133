//! Fracture-conforming grid hierarchy and the staggered mixed-dimensional
//! degree-of-freedom layout of each level.
//!
//! Every level is a uniform `nx x ny` grid over the whole domain; subdomains
//! are sets of cells. Level `k` refines the coarsest lattice `k` times, so
//! cell `(i, j)` of level `k + 1` is a child of cell `(i / 2, j / 2)` of level
//! `k`, and fracture element `e` of a piece is a child of coarse element
//! `e / 2`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::boundary::{resolve_tip, BoundarySpec, TipBc};
use crate::error::{Error, Result};
use crate::network::{Axis, FractureNetwork, PieceEnd, Rect, Side};

/// The five unknown groups, in global block order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    /// Bulk velocities.
    U2,
    /// Fracture velocities.
    U1,
    /// Bulk pressures.
    P2,
    /// Fracture pressures.
    P1,
    /// Intersection pressures.
    P0,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::U2, Group::U1, Group::P2, Group::P1, Group::P0];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_velocity(self) -> bool {
        matches!(self, Group::U2 | Group::U1)
    }
}

/// Which cell a bulk velocity belongs to along its edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSide {
    /// Ordinary edge shared by both neighbouring cells (or a boundary edge).
    Shared,
    /// Fracture edge, copy seen from the cell with the lower coordinate.
    Minus,
    /// Fracture edge, copy seen from the cell with the higher coordinate.
    Plus,
}

/// What a global unknown is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dof {
    /// Flux through the vertical edge on grid line `i`, cell row `j`, positive in `+x`.
    Ux { i: usize, j: usize, side: EdgeSide },
    /// Flux through the horizontal edge on grid line `j`, cell column `i`, positive in `+y`.
    Uy { i: usize, j: usize, side: EdgeSide },
    /// Fracture flux at node `node` of a piece, positive along the running direction.
    FractureVelocity { piece: usize, node: usize },
    Cell { i: usize, j: usize },
    FracturePressure { piece: usize, element: usize },
    Junction(usize),
}

impl Dof {
    pub fn group(&self) -> Group {
        match self {
            Dof::Ux { .. } | Dof::Uy { .. } => Group::U2,
            Dof::FractureVelocity { .. } => Group::U1,
            Dof::Cell { .. } => Group::P2,
            Dof::FracturePressure { .. } => Group::P1,
            Dof::Junction(_) => Group::P0,
        }
    }
}

/// Unknowns carried by one bulk edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeDofs {
    /// Prescribed-flux boundary edge.
    Eliminated,
    Single(usize),
    /// Fracture edge: one velocity per side.
    Twin { minus: usize, plus: usize },
}

impl EdgeDofs {
    /// Velocity seen from the cell on the given side (`false` = minus side).
    pub fn from_side(&self, plus: bool) -> Option<usize> {
        match *self {
            EdgeDofs::Eliminated => None,
            EdgeDofs::Single(k) => Some(k),
            EdgeDofs::Twin { minus, plus: p } => Some(if plus { p } else { minus }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceDofs {
    /// Velocity at each node; `None` where a prescribed-flux tip is eliminated.
    pub velocity: Vec<Option<usize>>,
    pub pressure: Vec<usize>,
}

/// Global numbering of a level's unknowns, ordered `[U2, U1, P2, P1, P0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DofLayout {
    nx: usize,
    ny: usize,
    pub ux: Vec<EdgeDofs>,
    pub uy: Vec<EdgeDofs>,
    pub cells: Vec<usize>,
    pub pieces: Vec<PieceDofs>,
    pub junctions: Vec<usize>,
    ranges: [Range<usize>; 5],
    dofs: Vec<Dof>,
}

impl DofLayout {
    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    pub fn range(&self, group: Group) -> Range<usize> {
        self.ranges[group.index()].clone()
    }

    pub fn count(&self, group: Group) -> usize {
        self.ranges[group.index()].len()
    }

    pub fn dof(&self, index: usize) -> Dof {
        self.dofs[index]
    }

    pub fn dofs(&self) -> &[Dof] {
        &self.dofs
    }

    /// Vertical edge on grid line `i` (`0..=nx`), cell row `j`.
    pub fn ux_at(&self, i: usize, j: usize) -> EdgeDofs {
        self.ux[j * (self.nx + 1) + i]
    }

    /// Horizontal edge on grid line `j` (`0..=ny`), cell column `i`.
    pub fn uy_at(&self, i: usize, j: usize) -> EdgeDofs {
        self.uy[j * self.nx + i]
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn cell_at(&self, i: usize, j: usize) -> usize {
        self.cells[j * self.nx + i]
    }

    /// Velocities of cell `(i, j)`: left, right, bottom, top (missing where eliminated).
    pub fn cell_velocities(&self, i: usize, j: usize) -> [Option<usize>; 4] {
        [
            self.ux_at(i, j).from_side(true),
            self.ux_at(i + 1, j).from_side(false),
            self.uy_at(i, j).from_side(true),
            self.uy_at(i, j + 1).from_side(false),
        ]
    }
}

/// A fracture piece on one grid level. Coordinates are vertex indices of
/// this level's grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPiece {
    /// Index of the parent segment in [`FractureNetwork::segments`].
    pub segment: usize,
    pub axis: Axis,
    pub line: usize,
    pub start: usize,
    pub end: usize,
    pub ends: [PieceEnd; 2],
    /// Resolved tip conditions; `None` at junctions.
    pub tips: [Option<TipBc>; 2],
}

impl LevelPiece {
    pub fn element_count(&self) -> usize {
        self.end - self.start
    }
}

/// One grid of the hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLevel {
    pub level: usize,
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Boundary data the layout was built for.
    pub boundary: BoundarySpec,
    /// Subdomain of each cell, row-major.
    pub cell_subdomain: Vec<usize>,
    pub pieces: Vec<LevelPiece>,
    /// Grid vertex of each intersection point.
    pub junctions: Vec<(usize, usize)>,
    vedge_piece: Vec<Option<usize>>,
    hedge_piece: Vec<Option<usize>>,
    pub layout: DofLayout,
}

impl GridLevel {
    /// Level `level` of the hierarchy over `network`, i.e. its coarsest
    /// lattice refined `level` times.
    pub fn new(network: &FractureNetwork, boundary: &BoundarySpec, level: usize) -> Self {
        let lat = network.lattice();
        let f = 1usize << level;
        let (nx, ny) = (lat.nx * f, lat.ny * f);
        let mut cell_subdomain = vec![0; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                cell_subdomain[j * nx + i] = network.partition.cell_subdomain[(j / f) * lat.nx + i / f];
            }
        }
        let mut pieces = Vec::with_capacity(network.pieces().len());
        let mut vedge_piece = vec![None; (nx + 1) * ny];
        let mut hedge_piece = vec![None; nx * (ny + 1)];
        for (p, piece) in network.pieces().iter().enumerate() {
            let seg = &network.segments[piece.segment];
            let (run_lo, run_len) = match piece.axis {
                Axis::Vertical => (lat.domain.y0, lat.domain.height() / lat.ny as f64),
                Axis::Horizontal => (lat.domain.x0, lat.domain.width() / lat.nx as f64),
            };
            let tip = |end: usize| {
                let r = if end == 0 { piece.start } else { piece.end };
                let s = run_lo + r as f64 * run_len;
                resolve_tip(piece.ends[end], piece.tips[end], boundary, seg.aperture.at(s))
            };
            let lp = LevelPiece {
                segment: piece.segment,
                axis: piece.axis,
                line: piece.line * f,
                start: piece.start * f,
                end: piece.end * f,
                ends: piece.ends,
                tips: [tip(0), tip(1)],
            };
            for r in lp.start..lp.end {
                match lp.axis {
                    Axis::Vertical => vedge_piece[r * (nx + 1) + lp.line] = Some(p),
                    Axis::Horizontal => hedge_piece[lp.line * nx + r] = Some(p),
                }
            }
            pieces.push(lp);
        }
        let junctions = network
            .intersections
            .iter()
            .map(|x| (x.vertex.0 * f, x.vertex.1 * f))
            .collect();
        let mut level = Self {
            level,
            domain: lat.domain,
            nx,
            ny,
            boundary: *boundary,
            cell_subdomain,
            pieces,
            junctions,
            vedge_piece,
            hedge_piece,
            layout: DofLayout {
                nx,
                ny,
                ux: Vec::new(),
                uy: Vec::new(),
                cells: Vec::new(),
                pieces: Vec::new(),
                junctions: Vec::new(),
                ranges: Default::default(),
                dofs: Vec::new(),
            },
        };
        level.layout = build_layout(&level, boundary);
        level
    }

    pub fn hx(&self) -> f64 {
        self.domain.width() / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.domain.height() / self.ny as f64
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.domain.x0 + (i as f64 + 0.5) * self.hx(),
            self.domain.y0 + (j as f64 + 0.5) * self.hy(),
        )
    }

    pub fn vertex(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.domain.x0 + i as f64 * self.hx(),
            self.domain.y0 + j as f64 * self.hy(),
        )
    }

    /// Piece owning the vertical edge on line `i`, row `j`.
    pub fn vertical_edge_piece(&self, i: usize, j: usize) -> Option<usize> {
        self.vedge_piece[j * (self.nx + 1) + i]
    }

    /// Piece owning the horizontal edge on line `j`, column `i`.
    pub fn horizontal_edge_piece(&self, i: usize, j: usize) -> Option<usize> {
        self.hedge_piece[j * self.nx + i]
    }

    /// Element length of a piece on this level.
    pub fn element_length(&self, piece: usize) -> f64 {
        match self.pieces[piece].axis {
            Axis::Vertical => self.hy(),
            Axis::Horizontal => self.hx(),
        }
    }

    /// Running coordinate of node `node` of a piece.
    pub fn node_coordinate(&self, piece: usize, node: usize) -> f64 {
        let p = &self.pieces[piece];
        match p.axis {
            Axis::Vertical => self.domain.y0 + (p.start + node) as f64 * self.hy(),
            Axis::Horizontal => self.domain.x0 + (p.start + node) as f64 * self.hx(),
        }
    }

    /// Physical position of node `node` of a piece.
    pub fn node_point(&self, piece: usize, node: usize) -> (f64, f64) {
        let p = &self.pieces[piece];
        match p.axis {
            Axis::Vertical => self.vertex(p.line, p.start + node),
            Axis::Horizontal => self.vertex(p.start + node, p.line),
        }
    }

    /// Bulk cells on the minus and plus side of element `element` of a piece.
    pub fn element_cells(&self, piece: usize, element: usize) -> ((usize, usize), (usize, usize)) {
        let p = &self.pieces[piece];
        let r = p.start + element;
        match p.axis {
            Axis::Vertical => ((p.line - 1, r), (p.line, r)),
            Axis::Horizontal => ((r, p.line - 1), (r, p.line)),
        }
    }

    /// Bulk edge unknowns collocated with element `element` of a piece.
    pub fn element_edge(&self, piece: usize, element: usize) -> EdgeDofs {
        let p = &self.pieces[piece];
        let r = p.start + element;
        match p.axis {
            Axis::Vertical => self.layout.ux_at(p.line, r),
            Axis::Horizontal => self.layout.uy_at(r, p.line),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    /// Cells per subdomain.
    pub fn subdomain_cell_counts(&self, subdomains: usize) -> Vec<usize> {
        let mut counts = vec![0; subdomains];
        for &s in &self.cell_subdomain {
            counts[s] += 1;
        }
        counts
    }

    /// The next finer level.
    pub fn refine(&self, network: &FractureNetwork, boundary: &BoundarySpec) -> Self {
        Self::new(network, boundary, self.level + 1)
    }
}

fn push(dofs: &mut Vec<Dof>, d: Dof) -> usize {
    dofs.push(d);
    dofs.len() - 1
}

fn build_layout(level: &GridLevel, boundary: &BoundarySpec) -> DofLayout {
    let (nx, ny) = (level.nx, level.ny);
    let mut dofs = Vec::new();
    let eliminated = |side: Side| boundary.side(side).is_flux();

    let mut ux = Vec::with_capacity((nx + 1) * ny);
    for j in 0..ny {
        for i in 0..=nx {
            let side = if i == 0 {
                Some(Side::Left)
            } else if i == nx {
                Some(Side::Right)
            } else {
                None
            };
            let e = match side {
                Some(s) if eliminated(s) => EdgeDofs::Eliminated,
                Some(_) => EdgeDofs::Single(push(&mut dofs, Dof::Ux { i, j, side: EdgeSide::Shared })),
                None if level.vertical_edge_piece(i, j).is_some() => EdgeDofs::Twin {
                    minus: push(&mut dofs, Dof::Ux { i, j, side: EdgeSide::Minus }),
                    plus: push(&mut dofs, Dof::Ux { i, j, side: EdgeSide::Plus }),
                },
                None => EdgeDofs::Single(push(&mut dofs, Dof::Ux { i, j, side: EdgeSide::Shared })),
            };
            ux.push(e);
        }
    }
    let mut uy = Vec::with_capacity(nx * (ny + 1));
    for j in 0..=ny {
        for i in 0..nx {
            let side = if j == 0 {
                Some(Side::Bottom)
            } else if j == ny {
                Some(Side::Top)
            } else {
                None
            };
            let e = match side {
                Some(s) if eliminated(s) => EdgeDofs::Eliminated,
                Some(_) => EdgeDofs::Single(push(&mut dofs, Dof::Uy { i, j, side: EdgeSide::Shared })),
                None if level.horizontal_edge_piece(i, j).is_some() => EdgeDofs::Twin {
                    minus: push(&mut dofs, Dof::Uy { i, j, side: EdgeSide::Minus }),
                    plus: push(&mut dofs, Dof::Uy { i, j, side: EdgeSide::Plus }),
                },
                None => EdgeDofs::Single(push(&mut dofs, Dof::Uy { i, j, side: EdgeSide::Shared })),
            };
            uy.push(e);
        }
    }
    let u2 = 0..dofs.len();

    let mut piece_vel = Vec::with_capacity(level.pieces.len());
    for (p, piece) in level.pieces.iter().enumerate() {
        let n = piece.element_count();
        let vel = (0..=n)
            .map(|node| {
                let tip = if node == 0 {
                    piece.tips[0]
                } else if node == n {
                    piece.tips[1]
                } else {
                    None
                };
                match tip {
                    Some(TipBc::Flux(_)) => None,
                    _ => Some(push(&mut dofs, Dof::FractureVelocity { piece: p, node })),
                }
            })
            .collect::<Vec<_>>();
        piece_vel.push(vel);
    }
    let u1 = u2.end..dofs.len();

    let mut cells = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            cells.push(push(&mut dofs, Dof::Cell { i, j }));
        }
    }
    let p2 = u1.end..dofs.len();

    let mut pieces = Vec::with_capacity(level.pieces.len());
    for (p, (piece, velocity)) in level.pieces.iter().zip(piece_vel).enumerate() {
        let pressure = (0..piece.element_count())
            .map(|element| push(&mut dofs, Dof::FracturePressure { piece: p, element }))
            .collect();
        pieces.push(PieceDofs { velocity, pressure });
    }
    let p1 = p2.end..dofs.len();

    let junctions = (0..level.junctions.len())
        .map(|k| push(&mut dofs, Dof::Junction(k)))
        .collect();
    let p0 = p1.end..dofs.len();

    DofLayout {
        nx,
        ny,
        ux,
        uy,
        cells,
        pieces,
        junctions,
        ranges: [u2, u1, p2, p1, p0],
        dofs,
    }
}

/// Nested grids `G^0 .. G^M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridHierarchy {
    pub levels: Vec<GridLevel>,
}

impl GridHierarchy {
    pub fn finest(&self) -> &GridLevel {
        self.levels.last().expect("hierarchy has at least one level")
    }

    pub fn coarsest(&self) -> &GridLevel {
        &self.levels[0]
    }

    /// Number of refinements `M`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }
}

/// The fracture-conforming coarsest grid.
pub fn build_coarsest_grid(network: &FractureNetwork, boundary: &BoundarySpec) -> GridLevel {
    GridLevel::new(network, boundary, 0)
}

/// Builds `G^0 .. G^M` by regular refinement of the coarsest grid.
pub fn build_hierarchy(network: &FractureNetwork, boundary: &BoundarySpec, refinements: usize) -> GridHierarchy {
    let mut levels = Vec::with_capacity(refinements + 1);
    levels.push(build_coarsest_grid(network, boundary));
    for _ in 0..refinements {
        let next = levels.last().unwrap().refine(network, boundary);
        levels.push(next);
    }
    GridHierarchy { levels }
}

/// Number of refinements needed to reach an `nx x ny` grid.
pub fn refinements_for_grid(network: &FractureNetwork, nx: usize, ny: usize) -> Result<usize> {
    let lat = network.lattice();
    let unreachable = Error::UnreachableGrid {
        nx,
        ny,
        coarse_nx: lat.nx,
        coarse_ny: lat.ny,
    };
    if !nx.is_multiple_of(lat.nx) || !ny.is_multiple_of(lat.ny) {
        return Err(unreachable);
    }
    let (fx, fy) = (nx / lat.nx, ny / lat.ny);
    if fx != fy || !fx.is_power_of_two() {
        return Err(unreachable);
    }
    Ok(fx.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryCondition;
    use crate::network::{FractureSegment, TipCondition};

    fn one_fracture() -> (FractureNetwork, BoundarySpec) {
        let seg = FractureSegment::vertical(1.0, 0.0, 1.0, 1e-2, 1.0).with_tips(
            Some(TipCondition::DirichletPressure(0.0)),
            Some(TipCondition::DirichletPressure(1.0)),
        );
        let net = FractureNetwork::build(Rect::new(0.0, 2.0, 0.0, 1.0), vec![seg]).unwrap();
        let bc = BoundarySpec {
            left: BoundaryCondition::Pressure(0.0),
            right: BoundaryCondition::Pressure(1.0),
            bottom: BoundaryCondition::Flux(0.0),
            top: BoundaryCondition::Flux(0.0),
        };
        (net, bc)
    }

    #[test]
    fn one_fracture_coarsest_counts() {
        let (net, _) = one_fracture();
        // All-pressure boundary keeps every boundary velocity.
        let g = build_coarsest_grid(&net, &BoundarySpec::zero_pressure());
        assert_eq!((g.nx, g.ny), (2, 1));
        let l = &g.layout;
        assert_eq!(l.count(Group::U2), 8);
        assert_eq!(l.count(Group::U1), 2);
        assert_eq!(l.count(Group::P2), 2);
        assert_eq!(l.count(Group::P1), 1);
        assert_eq!(l.count(Group::P0), 0);
        assert_eq!(l.len(), 13);
    }

    #[test]
    fn flux_boundaries_are_eliminated() {
        let (net, bc) = one_fracture();
        let g = build_coarsest_grid(&net, &bc);
        // 8 edge unknowns minus the 4 top/bottom ones.
        assert_eq!(g.layout.count(Group::U2), 4);
        assert!(matches!(g.layout.uy_at(0, 0), EdgeDofs::Eliminated));
        assert!(matches!(g.layout.ux_at(1, 0), EdgeDofs::Twin { .. }));
    }

    #[test]
    fn refinement_doubles_counts() {
        let (net, bc) = one_fracture();
        let h = build_hierarchy(&net, &bc, 3);
        assert_eq!(h.depth(), 3);
        for (k, g) in h.levels.iter().enumerate() {
            assert_eq!((g.nx, g.ny), (2 << k, 1 << k));
            assert_eq!(g.pieces[0].element_count(), 1 << k);
            let (nx, ny) = (g.nx, g.ny);
            // All x-edges plus one twin column, interior y-edges only.
            assert_eq!(g.layout.count(Group::U2), (nx + 2) * ny + nx * (ny - 1));
            assert_eq!(g.layout.count(Group::P2), nx * ny);
            assert_eq!(g.layout.count(Group::P1), ny);
        }
    }

    #[test]
    fn layout_is_a_bijection() {
        let (net, bc) = one_fracture();
        let g = GridLevel::new(&net, &bc, 2);
        let l = &g.layout;
        let mut seen = vec![false; l.len()];
        let mark = |seen: &mut Vec<bool>, k: usize| {
            assert!(!seen[k]);
            seen[k] = true;
        };
        for e in l.ux.iter().chain(&l.uy) {
            match *e {
                EdgeDofs::Single(k) => mark(&mut seen, k),
                EdgeDofs::Twin { minus, plus } => {
                    mark(&mut seen, minus);
                    mark(&mut seen, plus);
                }
                EdgeDofs::Eliminated => {}
            }
        }
        for p in &l.pieces {
            p.velocity.iter().flatten().for_each(|&k| mark(&mut seen, k));
            p.pressure.iter().for_each(|&k| mark(&mut seen, k));
        }
        l.cells.iter().for_each(|&k| mark(&mut seen, k));
        l.junctions.iter().for_each(|&k| mark(&mut seen, k));
        assert!(seen.iter().all(|&s| s));
        for (k, d) in l.dofs().iter().enumerate() {
            assert!(l.range(d.group()).contains(&k));
        }
    }

    #[test]
    fn grid_targets() {
        let (net, _) = one_fracture();
        assert_eq!(refinements_for_grid(&net, 512, 256).unwrap(), 8);
        assert_eq!(refinements_for_grid(&net, 2, 1).unwrap(), 0);
        assert!(refinements_for_grid(&net, 48, 24).is_err());
        assert!(refinements_for_grid(&net, 32, 32).is_err());
    }
}
