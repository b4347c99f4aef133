//! Assembly of the mixed-dimensional saddle-point system on one grid level.
//!
//! Velocity unknowns are total fluxes through edges (bulk) or through nodes
//! (fractures), oriented along the positive coordinate axes. The
//! divergence-type blocks are then signed incidence matrices and all metric
//! information sits in the velocity mass blocks.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::boundary::{BoundaryCondition, BoundarySpec, TipBc};
use crate::error::{Error, Result};
use crate::mesh::{EdgeDofs, GridLevel, Group};
use crate::network::{FractureNetwork, FractureSegment, PieceEnd, Side};
use crate::sparse::{norm2, CsrMatrix};

/// A scalar field `(x, y) -> value`; `None` marks points where it is undefined.
#[derive(Clone)]
pub struct Field(Arc<dyn Fn(f64, f64) -> Option<f64> + Send + Sync>);

impl Field {
    pub fn constant(value: f64) -> Self {
        Self(Arc::new(move |_, _| Some(value)))
    }

    pub fn from_fn(f: impl Fn(f64, f64) -> Option<f64> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, x: f64, y: f64) -> Option<f64> {
        (self.0)(x, y)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Field(..)")
    }
}

/// Physical data of the problem. Fracture apertures and permeabilities are
/// taken from the network's segments.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub kxx: Field,
    pub kyy: Field,
    /// Bulk source density `q`.
    pub source: Field,
    /// Fracture source density `q_gamma`, evaluated at element midpoints.
    pub fracture_source: Field,
    /// Closure parameter of the interface law, in `(1/2, 1]`.
    pub xi: f64,
    pub boundary: BoundarySpec,
}

impl ModelConfig {
    /// Isotropic constant permeability `k`, no sources, `xi = 1`.
    pub fn new(k: f64, boundary: BoundarySpec) -> Self {
        Self {
            kxx: Field::constant(k),
            kyy: Field::constant(k),
            source: Field::constant(0.0),
            fracture_source: Field::constant(0.0),
            xi: 1.0,
            boundary,
        }
    }

    pub fn with_xi(mut self, xi: f64) -> Self {
        self.xi = xi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.5 && self.xi <= 1.0) {
            return Err(Error::InvalidParameter("xi must lie in (1/2, 1]"));
        }
        for side in Side::ALL {
            let v = match self.boundary.side(side) {
                BoundaryCondition::Pressure(v) | BoundaryCondition::Flux(v) => v,
            };
            if !v.is_finite() {
                return Err(Error::InvalidParameter("boundary value is not finite"));
            }
        }
        Ok(())
    }
}

/// Checks that a segment's coefficients are strictly positive.
pub fn validate_segment(seg: &FractureSegment) -> Result<()> {
    let positive = |p: &crate::network::Profile| p.values().iter().all(|&v| v > 0.0 && v.is_finite());
    if !positive(&seg.aperture) {
        return Err(Error::InvalidParameter("fracture aperture must be positive"));
    }
    if !positive(&seg.k_tangential) || !positive(&seg.k_normal) {
        return Err(Error::InvalidParameter("fracture permeability must be positive"));
    }
    Ok(())
}

/// The assembled block system `A x = b` of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDimSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    ranges: [Range<usize>; 5],
}

impl MixedDimSystem {
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn range(&self, group: Group) -> Range<usize> {
        self.ranges[group.index()].clone()
    }

    /// Sub-block `(rows, cols)` as a separate matrix.
    pub fn block(&self, rows: Group, cols: Group) -> CsrMatrix {
        let (r, c) = (self.range(rows), self.range(cols));
        let t: Vec<_> = self
            .matrix
            .triplets()
            .filter(|&(i, j, _)| r.contains(&i) && c.contains(&j))
            .map(|(i, j, v)| (i - r.start, j - c.start, v))
            .collect();
        CsrMatrix::from_triplets(r.len(), c.len(), &t)
    }
}

struct Builder {
    t: Vec<(usize, usize, f64)>,
}

impl Builder {
    fn add(&mut self, r: usize, c: usize, v: f64) {
        self.t.push((r, c, v));
    }

    fn add_sym(&mut self, r: usize, c: usize, v: f64) {
        self.t.push((r, c, v));
        self.t.push((c, r, v));
    }
}

fn field(f: &Field, name: &'static str, x: f64, y: f64) -> Result<f64> {
    match f.eval(x, y) {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(Error::ConfigMismatch { field: name, x, y }),
    }
}

fn positive(f: &Field, name: &'static str, x: f64, y: f64) -> Result<f64> {
    let v = field(f, name, x, y)?;
    if v <= 0.0 {
        return Err(Error::InvalidParameter("bulk permeability must be positive"));
    }
    Ok(v)
}

/// Half-cell contribution `h_normal / (2 K h_tangential)` to a bulk velocity
/// diagonal.
pub fn bulk_half_weight(h_normal: f64, h_tangential: f64, k: f64) -> f64 {
    h_normal / (2.0 * k * h_tangential)
}

/// Element contribution `hs / (2 d K_tau)` to each of its two node velocities.
pub fn fracture_half_weight(hs: f64, aperture: f64, k_tangential: f64) -> f64 {
    hs / (2.0 * aperture * k_tangential)
}

/// Interface coefficient `d / (2 K_n h_e)` of the normal flux law.
pub fn interface_weight(edge_length: f64, aperture: f64, k_normal: f64) -> f64 {
    aperture / (2.0 * k_normal * edge_length)
}

/// Assembles the system of `level`.
pub fn assemble(network: &FractureNetwork, level: &GridLevel, config: &ModelConfig) -> Result<MixedDimSystem> {
    config.validate()?;
    if config.boundary != level.boundary {
        return Err(Error::InvalidParameter("boundary data differ from the grid hierarchy's"));
    }
    for seg in &network.segments {
        validate_segment(seg)?;
    }
    let layout = &level.layout;
    let n = layout.len();
    let (nx, ny) = (level.nx, level.ny);
    let (hx, hy) = (level.hx(), level.hy());
    let mut b = Builder {
        t: Vec::with_capacity(8 * n),
    };
    let mut rhs = vec![0.0; n];

    let mut kx = vec![0.0; nx * ny];
    let mut ky = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let (x, y) = level.cell_center(i, j);
            kx[j * nx + i] = positive(&config.kxx, "kxx", x, y)?;
            ky[j * nx + i] = positive(&config.kyy, "kyy", x, y)?;
            let c = layout.cell_at(i, j);
            rhs[c] = -field(&config.source, "source", x, y)? * hx * hy;
        }
    }

    // Bulk velocities and their divergence rows.
    for j in 0..ny {
        for i in 0..=nx {
            let left = (i > 0).then(|| bulk_half_weight(hx, hy, kx[j * nx + i - 1]));
            let right = (i < nx).then(|| bulk_half_weight(hx, hy, kx[j * nx + i]));
            let cells = [(i > 0).then(|| layout.cell_at(i - 1, j)), (i < nx).then(|| layout.cell_at(i, j))];
            let side = if i == 0 { Side::Left } else { Side::Right };
            bulk_edge(&mut b, &mut rhs, layout.ux_at(i, j), [left, right], cells, hy, config.boundary.side(side), side);
        }
    }
    for j in 0..=ny {
        for i in 0..nx {
            let below = (j > 0).then(|| bulk_half_weight(hy, hx, ky[(j - 1) * nx + i]));
            let above = (j < ny).then(|| bulk_half_weight(hy, hx, ky[j * nx + i]));
            let cells = [(j > 0).then(|| layout.cell_at(i, j - 1)), (j < ny).then(|| layout.cell_at(i, j))];
            let side = if j == 0 { Side::Bottom } else { Side::Top };
            bulk_edge(&mut b, &mut rhs, layout.uy_at(i, j), [below, above], cells, hx, config.boundary.side(side), side);
        }
    }

    // Fractures.
    let xi = config.xi;
    for (p, piece) in level.pieces.iter().enumerate() {
        let seg = &network.segments[piece.segment];
        let dofs = &layout.pieces[p];
        let hs = level.element_length(p);
        let ne = piece.element_count();
        for e in 0..ne {
            let s_mid = 0.5 * (level.node_coordinate(p, e) + level.node_coordinate(p, e + 1));
            let d = seg.aperture.at(s_mid);
            let kt = seg.k_tangential.at(s_mid);
            let kn = seg.k_normal.at(s_mid);
            let pe = dofs.pressure[e];

            let w = fracture_half_weight(hs, d, kt);
            let (x0, y0) = level.node_point(p, e);
            let (x1, y1) = level.node_point(p, e + 1);
            let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            rhs[pe] = -field(&config.fracture_source, "fracture_source", xm, ym)? * hs;
            for (node, sign) in [(e, 1.0), (e + 1, -1.0)] {
                match dofs.velocity[node] {
                    Some(u) => {
                        b.add(u, u, w);
                        b.add_sym(pe, u, sign);
                    }
                    None => {
                        let known = eliminated_tip_flux(piece.tips[usize::from(node != 0)], node == 0);
                        rhs[pe] -= sign * known;
                    }
                }
            }

            // Interface coupling with the twin bulk velocities.
            if let EdgeDofs::Twin { minus, plus } = level.element_edge(p, e) {
                let r = interface_weight(hs, d, kn);
                b.add(minus, minus, xi * r);
                b.add(plus, plus, xi * r);
                if xi < 1.0 {
                    b.add_sym(minus, plus, (1.0 - xi) * r);
                }
                b.add_sym(pe, minus, 1.0);
                b.add_sym(pe, plus, -1.0);
            } else {
                unreachable!("fracture element without twin bulk velocities");
            }
        }
        // Tip pressures and junction couplings.
        for end in 0..2 {
            let node = if end == 0 { 0 } else { ne };
            let sign = if end == 0 { -1.0 } else { 1.0 };
            match (piece.ends[end], piece.tips[end]) {
                (PieceEnd::Junction(k), _) => {
                    let u = dofs.velocity[node].expect("junction end keeps its velocity");
                    b.add_sym(layout.junctions[k], u, sign);
                }
                (_, Some(TipBc::Pressure(pt))) => {
                    let u = dofs.velocity[node].expect("pressure tip keeps its velocity");
                    rhs[u] -= sign * pt;
                }
                _ => {}
            }
        }
    }

    let matrix = CsrMatrix::from_triplets(n, n, &b.t);
    Ok(MixedDimSystem {
        matrix,
        rhs,
        ranges: Group::ALL.map(|g| layout.range(g)),
    })
}

/// Known fracture flux (positive along the running direction) at an
/// eliminated tip. `at_start` tells which end of the piece it is.
fn eliminated_tip_flux(tip: Option<TipBc>, at_start: bool) -> f64 {
    match tip {
        Some(TipBc::Flux(out)) => {
            if at_start {
                -out
            } else {
                out
            }
        }
        _ => unreachable!("only prescribed-flux tips are eliminated"),
    }
}

/// One bulk edge: mass entries, divergence entries and boundary data.
/// `halves`/`cells` are indexed `[lower, upper]` along the edge normal.
#[allow(clippy::too_many_arguments)]
fn bulk_edge(
    b: &mut Builder,
    rhs: &mut [f64],
    edge: EdgeDofs,
    halves: [Option<f64>; 2],
    cells: [Option<usize>; 2],
    length: f64,
    bc: BoundaryCondition,
    side: Side,
) {
    let boundary = cells[0].is_none() || cells[1].is_none();
    // Lower cell sees the edge as its upper face (-1), upper cell as its lower face (+1).
    match edge {
        EdgeDofs::Single(u) => {
            let diag = halves[0].unwrap_or(0.0) + halves[1].unwrap_or(0.0);
            b.add(u, u, diag);
            if let Some(c) = cells[0] {
                b.add_sym(c, u, -1.0);
            }
            if let Some(c) = cells[1] {
                b.add_sym(c, u, 1.0);
            }
            if boundary {
                if let BoundaryCondition::Pressure(p) = bc {
                    rhs[u] += if cells[0].is_none() { p } else { -p };
                }
            }
        }
        EdgeDofs::Twin { minus, plus } => {
            b.add(minus, minus, halves[0].expect("twin edges are interior"));
            b.add(plus, plus, halves[1].expect("twin edges are interior"));
            b.add_sym(cells[0].unwrap(), minus, -1.0);
            b.add_sym(cells[1].unwrap(), plus, 1.0);
        }
        EdgeDofs::Eliminated => {
            let g = match bc {
                BoundaryCondition::Flux(g) => g,
                BoundaryCondition::Pressure(_) => unreachable!(),
            };
            let outward_positive = matches!(side, Side::Right | Side::Top);
            let u = if outward_positive { g * length } else { -g * length };
            if let Some(c) = cells[0] {
                rhs[c] -= -u;
            }
            if let Some(c) = cells[1] {
                rhs[c] -= u;
            }
        }
    }
}

/// `r = b - A x` and its Euclidean norm.
pub fn residual(system: &MixedDimSystem, x: &[f64]) -> Result<(Vec<f64>, f64)> {
    let mut r = system.matrix.mul_vec(x)?;
    for (ri, bi) in r.iter_mut().zip(&system.rhs) {
        *ri = bi - *ri;
    }
    let norm = norm2(&r);
    Ok((r, norm))
}

/// Number of nonzero off-diagonal entries inside the velocity block.
pub fn velocity_off_diagonal_count(system: &MixedDimSystem) -> usize {
    let u2 = system.range(Group::U2);
    let u1 = system.range(Group::U1);
    let is_vel = |k: usize| u2.contains(&k) || u1.contains(&k);
    system
        .matrix
        .triplets()
        .filter(|&(r, c, v)| r != c && is_vel(r) && is_vel(c) && v != 0.0)
        .count()
}
