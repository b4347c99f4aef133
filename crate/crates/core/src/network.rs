//! Fracture geometry and its graph model.
//!
//! The domain is cut by axis-aligned fracture segments. Segments are snapped
//! to the coarsest uniform lattice that resolves every fracture coordinate;
//! subdomains are the connected components of the lattice cells once the
//! fracture edges are removed. Every maximal run of fracture edges between
//! two junctions (or tips) is a *piece*, i.e. one edge of the subdomain graph,
//! and every lattice vertex where three or four piece ends meet is a T- or
//! X-intersection.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest number of coarse cells per direction tried when resolving the
/// fracture coordinates.
pub const MAX_COARSE_CELLS: usize = 4096;

const SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn unit_square() -> Self {
        Self::new(0.0, 1.0, 0.0, 1.0)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// One side of the outer boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];
}

/// Condition attached to a fracture endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TipCondition {
    DirichletPressure(f64),
    ZeroFlux,
    /// The endpoint lies on another fracture.
    Interior,
}

/// Piecewise-constant function of the running coordinate along a segment.
///
/// `breaks` are the interior breakpoints (strictly increasing), so
/// `values.len() == breaks.len() + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Self {
            breaks: Vec::new(),
            values: vec![value],
        }
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidParameter(
                "piecewise profile needs one more value than breakpoints",
            ));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "piecewise profile breakpoints must be strictly increasing",
            ));
        }
        Ok(Self { breaks, values })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at running coordinate `s`; a point exactly on a breakpoint takes
    /// the value of the interval to its right.
    pub fn at(&self, s: f64) -> f64 {
        let idx = self.breaks.partition_point(|&b| b <= s);
        self.values[idx]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scaled_to(&self, value: f64) -> Self {
        Self {
            breaks: self.breaks.clone(),
            values: vec![value; self.values.len()],
        }
    }
}

/// A straight axis-aligned fracture.
#[derive(Debug, Clone, PartialEq)]
pub struct FractureSegment {
    pub axis: Axis,
    /// Fixed coordinate: `y` for horizontal segments, `x` for vertical ones.
    pub position: f64,
    /// Span in the running coordinate, `start < end`.
    pub start: f64,
    pub end: f64,
    pub aperture: Profile,
    pub k_tangential: Profile,
    pub k_normal: Profile,
    /// Conditions at `start` and `end`; `None` lets the network decide
    /// (interior at junctions, zero flux when immersed, inherited from the
    /// boundary side otherwise).
    pub tips: [Option<TipCondition>; 2],
}

impl FractureSegment {
    /// Segment with constant aperture and isotropic permeability `k`.
    pub fn new(axis: Axis, position: f64, start: f64, end: f64, aperture: f64, k: f64) -> Self {
        Self {
            axis,
            position,
            start,
            end,
            aperture: Profile::constant(aperture),
            k_tangential: Profile::constant(k),
            k_normal: Profile::constant(k),
            tips: [None, None],
        }
    }

    pub fn horizontal(y: f64, x_start: f64, x_end: f64, aperture: f64, k: f64) -> Self {
        Self::new(Axis::Horizontal, y, x_start, x_end, aperture, k)
    }

    pub fn vertical(x: f64, y_start: f64, y_end: f64, aperture: f64, k: f64) -> Self {
        Self::new(Axis::Vertical, x, y_start, y_end, aperture, k)
    }

    pub fn with_tips(mut self, start: Option<TipCondition>, end: Option<TipCondition>) -> Self {
        self.tips = [start, end];
        self
    }

    /// Same permeability profile for both the normal and tangential parts.
    pub fn with_permeability(mut self, k: Profile) -> Self {
        self.k_normal = k.clone();
        self.k_tangential = k;
        self
    }
}

/// How a piece ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceEnd {
    /// Index into [`FractureNetwork::intersections`].
    Junction(usize),
    /// Tip on the outer boundary.
    Boundary(Side),
    /// Tip strictly inside the domain (always zero flux).
    Immersed,
}

/// A maximal run of fracture edges between junctions or tips. Coordinates are
/// lattice vertex indices on the coarsest grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FracturePiece {
    pub segment: usize,
    pub axis: Axis,
    /// Lattice line carrying the piece (`i` for vertical, `j` for horizontal).
    pub line: usize,
    /// First and last lattice vertex along the running direction.
    pub start: usize,
    pub end: usize,
    /// Subdomains on the negative and positive side of the piece.
    pub sides: (usize, usize),
    pub ends: [PieceEnd; 2],
    /// Explicit tip conditions of the parent segment at ends that coincide
    /// with the segment endpoints.
    pub tips: [Option<TipCondition>; 2],
}

impl FracturePiece {
    /// Graph edge `(i, j)` with `i < j`, or `None` when both sides belong to
    /// the same subdomain (immersed fractures).
    pub fn pair(&self) -> Option<(usize, usize)> {
        let (a, b) = self.sides;
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Some((a, b)),
            core::cmp::Ordering::Greater => Some((b, a)),
            core::cmp::Ordering::Equal => None,
        }
    }

    pub fn element_count(&self) -> usize {
        self.end - self.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IntersectionKind {
    T,
    X,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub kind: IntersectionKind,
    /// Lattice vertex on the coarsest grid.
    pub vertex: (usize, usize),
    pub point: (f64, f64),
    /// Sorted, deduplicated subdomains around the point.
    pub subdomains: Vec<usize>,
    /// Incident piece ends as `(piece, end)` with `end` 0 (start) or 1 (end).
    pub ends: Vec<(usize, usize)>,
}

/// Subdomain graph: nodes are subdomains, edges are fracture pieces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FractureGraph {
    pub subdomain_count: usize,
    /// `neighbors[i]` holds the subdomains `j > i` adjacent to `i` across a fracture.
    pub neighbors: Vec<BTreeSet<usize>>,
    /// Graph edges `(i, j)`, `i < j`, sorted.
    pub fractures: Vec<(usize, usize)>,
    /// Subdomain tuples of T- and X-intersections.
    pub t_intersections: Vec<[usize; 3]>,
    pub x_intersections: Vec<[usize; 4]>,
    /// Pieces adjacent to each subdomain.
    pub adjacent_pieces: Vec<Vec<usize>>,
    /// Intersections each piece takes part in.
    pub piece_intersections: Vec<Vec<usize>>,
}

impl FractureGraph {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.neighbors.get(lo).is_some_and(|n| n.contains(&hi))
    }
}

/// Lattice snapping of the coarsest grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl Lattice {
    pub fn hx(&self) -> f64 {
        self.domain.width() / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.domain.height() / self.ny as f64
    }

    pub fn vertex_point(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.domain.x0 + i as f64 * self.hx(),
            self.domain.y0 + j as f64 * self.hy(),
        )
    }
}

/// Result of [`partition_domain`]: subdomain labels and fracture pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub lattice: Lattice,
    /// Subdomain of each coarse cell, row-major (`j * nx + i`).
    pub cell_subdomain: Vec<usize>,
    pub subdomain_count: usize,
    /// Pieces in segment order, then by increasing running coordinate. Junction
    /// ends are unresolved here and carry the lattice vertex index instead.
    pub pieces: Vec<FracturePiece>,
    vedges: Vec<Option<usize>>,
    hedges: Vec<Option<usize>>,
}

impl Partition {
    /// Segment owning the vertical lattice edge on line `i`, cell row `j`.
    pub fn vertical_edge(&self, i: usize, j: usize) -> Option<usize> {
        self.vedges[j * (self.lattice.nx + 1) + i]
    }

    /// Segment owning the horizontal lattice edge on line `j`, cell column `i`.
    pub fn horizontal_edge(&self, i: usize, j: usize) -> Option<usize> {
        self.hedges[j * self.lattice.nx + i]
    }

    /// Number of coarse cells in each subdomain.
    pub fn subdomain_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.subdomain_count];
        for &s in &self.cell_subdomain {
            sizes[s] += 1;
        }
        sizes
    }

    /// Fracture edges incident to lattice vertex `(i, j)`: left, right, down, up.
    fn incident(&self, i: usize, j: usize) -> [Option<usize>; 4] {
        let nx = self.lattice.nx;
        let ny = self.lattice.ny;
        [
            if i > 0 { self.horizontal_edge(i - 1, j) } else { None },
            if i < nx { self.horizontal_edge(i, j) } else { None },
            if j > 0 { self.vertical_edge(i, j - 1) } else { None },
            if j < ny { self.vertical_edge(i, j) } else { None },
        ]
    }
}

/// Complete geometric and graph description of a fractured domain.
#[derive(Debug, Clone, PartialEq)]
pub struct FractureNetwork {
    pub segments: Vec<FractureSegment>,
    pub partition: Partition,
    pub intersections: Vec<Intersection>,
    pub graph: FractureGraph,
}

impl FractureNetwork {
    pub fn build(domain: Rect, segments: Vec<FractureSegment>) -> Result<Self> {
        let partition = partition_domain(domain, &segments)?;
        let (partition, intersections) = classify_intersections(partition)?;
        let graph = build_graph(&partition, &intersections);
        Ok(Self {
            segments,
            partition,
            intersections,
            graph,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.partition.lattice
    }

    pub fn pieces(&self) -> &[FracturePiece] {
        &self.partition.pieces
    }

    pub fn subdomain_count(&self) -> usize {
        self.partition.subdomain_count
    }
}

/// Smallest `n` such that every relative coordinate `t` lies on the uniform
/// lattice `k / n`.
fn divisions(coords: &[f64]) -> Option<usize> {
    (1..=MAX_COARSE_CELLS).find(|&n| {
        coords.iter().all(|&t| {
            let scaled = t * n as f64;
            libm::fabs(scaled - libm::round(scaled)) <= SNAP_TOL * n as f64
        })
    })
}

fn snap(t: f64, n: usize) -> usize {
    libm::round(t * n as f64) as usize
}

/// Coarsest uniform lattice containing every fracture line and endpoint. Cell
/// counts are balanced so that the cell aspect ratio stays below two.
pub fn coarsest_lattice(domain: Rect, segments: &[FractureSegment]) -> Result<Lattice> {
    if !(domain.width() > 0.0 && domain.height() > 0.0) {
        return Err(Error::InvalidParameter("domain must have positive extent"));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for seg in segments {
        let (fixed, running) = match seg.axis {
            Axis::Vertical => (&mut xs, &mut ys),
            Axis::Horizontal => (&mut ys, &mut xs),
        };
        fixed.push(seg.position);
        running.push(seg.start);
        running.push(seg.end);
    }
    let rel = |v: &[f64], lo: f64, len: f64| v.iter().map(|c| (c - lo) / len).collect::<Vec<_>>();
    let max_cells = MAX_COARSE_CELLS;
    let mut nx = divisions(&rel(&xs, domain.x0, domain.width()))
        .ok_or(Error::NotGridAligned { max_cells })?;
    let mut ny = divisions(&rel(&ys, domain.y0, domain.height()))
        .ok_or(Error::NotGridAligned { max_cells })?;
    let hx = domain.width() / nx as f64;
    let hy = domain.height() / ny as f64;
    if hy >= 2.0 * hx {
        ny *= libm::round(hy / hx) as usize;
    } else if hx >= 2.0 * hy {
        nx *= libm::round(hx / hy) as usize;
    }
    Ok(Lattice { domain, nx, ny })
}

struct SnappedSegment {
    axis: Axis,
    line: usize,
    start: usize,
    end: usize,
}

fn snap_segment(index: usize, seg: &FractureSegment, lat: &Lattice) -> Result<SnappedSegment> {
    let d = lat.domain;
    if !(seg.start < seg.end) {
        return Err(Error::DegenerateSegment { index });
    }
    let tol = SNAP_TOL * d.width().max(d.height());
    let (fixed_lo, fixed_hi, run_lo, run_hi, n_fixed, n_run) = match seg.axis {
        Axis::Vertical => (d.x0, d.x1, d.y0, d.y1, lat.nx, lat.ny),
        Axis::Horizontal => (d.y0, d.y1, d.x0, d.x1, lat.ny, lat.nx),
    };
    let outside = seg.position <= fixed_lo + tol
        || seg.position >= fixed_hi - tol
        || seg.start < run_lo - tol
        || seg.end > run_hi + tol;
    if outside {
        return Err(Error::SegmentOutsideDomain { index });
    }
    let line = snap((seg.position - fixed_lo) / (fixed_hi - fixed_lo), n_fixed);
    let start = snap((seg.start - run_lo) / (run_hi - run_lo), n_run);
    let end = snap((seg.end - run_lo) / (run_hi - run_lo), n_run);
    if start >= end {
        return Err(Error::DegenerateSegment { index });
    }
    Ok(SnappedSegment {
        axis: seg.axis,
        line,
        start,
        end,
    })
}

/// Splits the domain into subdomains and the fractures into graph edges.
///
/// Subdomains are numbered by the smallest coarse cell (row-major from the
/// bottom-left corner) they contain.
pub fn partition_domain(domain: Rect, segments: &[FractureSegment]) -> Result<Partition> {
    let lattice = coarsest_lattice(domain, segments)?;
    let (nx, ny) = (lattice.nx, lattice.ny);
    let snapped = segments
        .iter()
        .enumerate()
        .map(|(k, s)| snap_segment(k, s, &lattice))
        .collect::<Result<Vec<_>>>()?;

    let mut vedges = vec![None; (nx + 1) * ny];
    let mut hedges = vec![None; nx * (ny + 1)];
    for (k, s) in snapped.iter().enumerate() {
        for r in s.start..s.end {
            let slot = match s.axis {
                Axis::Vertical => &mut vedges[r * (nx + 1) + s.line],
                Axis::Horizontal => &mut hedges[s.line * nx + r],
            };
            if let Some(other) = *slot {
                return Err(Error::OverlappingFractures {
                    first: other,
                    second: k,
                });
            }
            *slot = Some(k);
        }
    }

    // Flood fill in row-major scan order; the first unlabeled cell found
    // opens the next subdomain.
    const UNSET: usize = usize::MAX;
    let mut label = vec![UNSET; nx * ny];
    let mut count = 0;
    let mut stack = Vec::new();
    for seed in 0..nx * ny {
        if label[seed] != UNSET {
            continue;
        }
        label[seed] = count;
        stack.push(seed);
        while let Some(c) = stack.pop() {
            let (i, j) = (c % nx, c / nx);
            let mut visit = |n: usize| {
                if label[n] == UNSET {
                    label[n] = count;
                    stack.push(n);
                }
            };
            if i + 1 < nx && vedges[j * (nx + 1) + i + 1].is_none() {
                visit(c + 1);
            }
            if i > 0 && vedges[j * (nx + 1) + i].is_none() {
                visit(c - 1);
            }
            if j + 1 < ny && hedges[(j + 1) * nx + i].is_none() {
                visit(c + nx);
            }
            if j > 0 && hedges[j * nx + i].is_none() {
                visit(c - nx);
            }
        }
        count += 1;
    }

    let mut partition = Partition {
        lattice,
        cell_subdomain: label,
        subdomain_count: count,
        pieces: Vec::new(),
        vedges,
        hedges,
    };

    let mut pieces = Vec::new();
    for (k, s) in snapped.iter().enumerate() {
        let vertex = |r: usize| match s.axis {
            Axis::Vertical => (s.line, r),
            Axis::Horizontal => (r, s.line),
        };
        let mut cuts = vec![s.start];
        for r in s.start + 1..s.end {
            let (i, j) = vertex(r);
            let inc = partition.incident(i, j);
            if inc.iter().filter(|e| e.is_some()).count() > 2 {
                cuts.push(r);
            }
        }
        cuts.push(s.end);
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let sides = match s.axis {
                Axis::Vertical => (
                    partition.cell_subdomain[a * nx + s.line - 1],
                    partition.cell_subdomain[a * nx + s.line],
                ),
                Axis::Horizontal => (
                    partition.cell_subdomain[(s.line - 1) * nx + a],
                    partition.cell_subdomain[s.line * nx + a],
                ),
            };
            let end_of = |r: usize| -> PieceEnd {
                let (i, j) = vertex(r);
                let on_boundary = match s.axis {
                    Axis::Vertical => {
                        if j == 0 {
                            Some(Side::Bottom)
                        } else if j == ny {
                            Some(Side::Top)
                        } else {
                            None
                        }
                    }
                    Axis::Horizontal => {
                        if i == 0 {
                            Some(Side::Left)
                        } else if i == nx {
                            Some(Side::Right)
                        } else {
                            None
                        }
                    }
                };
                match on_boundary {
                    Some(side) => PieceEnd::Boundary(side),
                    // Placeholder; resolved to a junction or an immersed tip
                    // by `classify_intersections`.
                    None => PieceEnd::Junction(j * (nx + 1) + i),
                }
            };
            pieces.push(FracturePiece {
                segment: k,
                axis: s.axis,
                line: s.line,
                start: a,
                end: b,
                sides,
                ends: [end_of(a), end_of(b)],
                tips: [
                    if a == s.start { segments[k].tips[0] } else { None },
                    if b == s.end { segments[k].tips[1] } else { None },
                ],
            });
        }
    }
    partition.pieces = pieces;
    Ok(partition)
}

fn piece_end_vertex(p: &FracturePiece, end: usize) -> (usize, usize) {
    let r = if end == 0 { p.start } else { p.end };
    match p.axis {
        Axis::Vertical => (p.line, r),
        Axis::Horizontal => (r, p.line),
    }
}

/// Classifies every interior piece end as a T-junction (three incident ends),
/// an X-junction (four ends) or an immersed tip (one end). Ends meeting in
/// pairs are rejected.
pub fn classify_intersections(
    mut partition: Partition,
) -> Result<(Partition, Vec<Intersection>)> {
    let nx = partition.lattice.nx;
    let mut at_vertex: alloc::collections::BTreeMap<(usize, usize), Vec<(usize, usize)>> =
        alloc::collections::BTreeMap::new();
    for (p, piece) in partition.pieces.iter().enumerate() {
        for end in 0..2 {
            let (i, j) = piece_end_vertex(piece, end);
            at_vertex.entry((j, i)).or_default().push((p, end));
        }
    }

    let mut intersections = Vec::new();
    for (&(j, i), ends) in &at_vertex {
        let interior = !matches!(
            partition.pieces[ends[0].0].ends[ends[0].1],
            PieceEnd::Boundary(_)
        );
        if !interior {
            if ends.len() > 1 {
                let (x, y) = partition.lattice.vertex_point(i, j);
                return Err(Error::UnsupportedValence {
                    valence: ends.len(),
                    x,
                    y,
                });
            }
            continue;
        }
        match ends.len() {
            1 => {}
            3 | 4 => {
                let cells = [
                    (j - 1) * nx + i - 1,
                    (j - 1) * nx + i,
                    j * nx + i - 1,
                    j * nx + i,
                ];
                let mut subs: Vec<usize> = cells
                    .iter()
                    .map(|&c| partition.cell_subdomain[c])
                    .collect();
                subs.sort_unstable();
                subs.dedup();
                intersections.push(Intersection {
                    kind: if ends.len() == 3 {
                        IntersectionKind::T
                    } else {
                        IntersectionKind::X
                    },
                    vertex: (i, j),
                    point: partition.lattice.vertex_point(i, j),
                    subdomains: subs,
                    ends: ends.clone(),
                });
            }
            valence => {
                let (x, y) = partition.lattice.vertex_point(i, j);
                return Err(Error::UnsupportedValence { valence, x, y });
            }
        }
    }
    // Sweep order: by subdomain tuple, then by position.
    intersections.sort_by(|a, b| {
        a.subdomains
            .cmp(&b.subdomains)
            .then((a.vertex.1, a.vertex.0).cmp(&(b.vertex.1, b.vertex.0)))
    });

    for piece in partition.pieces.iter_mut() {
        for end in 0..2 {
            if let PieceEnd::Junction(_) = piece.ends[end] {
                let v = piece_end_vertex(piece, end);
                piece.ends[end] = match intersections.iter().position(|x| x.vertex == v) {
                    Some(k) => PieceEnd::Junction(k),
                    None => PieceEnd::Immersed,
                };
            }
        }
    }

    // Explicit tip conditions must agree with the classified geometry.
    for piece in &partition.pieces {
        let index = piece.segment;
        for end in 0..2 {
            let Some(cond) = piece.tips[end] else { continue };
            match (piece.ends[end], cond) {
                (PieceEnd::Junction(_), TipCondition::Interior) => {}
                (PieceEnd::Junction(_), _) => {
                    return Err(Error::InvalidTip {
                        index,
                        reason: "endpoint lies on another fracture",
                    })
                }
                (_, TipCondition::Interior) => {
                    return Err(Error::InvalidTip {
                        index,
                        reason: "endpoint marked interior does not touch another fracture",
                    })
                }
                (PieceEnd::Immersed, TipCondition::DirichletPressure(_)) => {
                    return Err(Error::InvalidTip {
                        index,
                        reason: "immersed tips carry zero flux",
                    })
                }
                _ => {}
            }
        }
    }

    Ok((partition, intersections))
}

fn build_graph(partition: &Partition, intersections: &[Intersection]) -> FractureGraph {
    let m = partition.subdomain_count;
    let mut neighbors = vec![BTreeSet::new(); m];
    let mut adjacent_pieces = vec![Vec::new(); m];
    for (p, piece) in partition.pieces.iter().enumerate() {
        if let Some((a, b)) = piece.pair() {
            neighbors[a].insert(b);
        }
        adjacent_pieces[piece.sides.0].push(p);
        if piece.sides.1 != piece.sides.0 {
            adjacent_pieces[piece.sides.1].push(p);
        }
    }
    let fractures = neighbors
        .iter()
        .enumerate()
        .flat_map(|(i, n)| n.iter().map(move |&j| (i, j)))
        .collect();
    let mut piece_intersections = vec![Vec::new(); partition.pieces.len()];
    let mut t_intersections = Vec::new();
    let mut x_intersections = Vec::new();
    for (k, x) in intersections.iter().enumerate() {
        for &(p, _) in &x.ends {
            piece_intersections[p].push(k);
        }
        match (x.kind, x.subdomains.as_slice()) {
            (IntersectionKind::T, &[a, b, c]) => t_intersections.push([a, b, c]),
            (IntersectionKind::X, &[a, b, c, d]) => x_intersections.push([a, b, c, d]),
            // Junctions touching an immersed fracture repeat a subdomain and
            // have no counterpart in the graph index sets.
            _ => {}
        }
    }
    t_intersections.sort_unstable();
    x_intersections.sort_unstable();
    FractureGraph {
        subdomain_count: m,
        neighbors,
        fractures,
        t_intersections,
        x_intersections,
        adjacent_pieces,
        piece_intersections,
    }
}

/// Intersection index sets derived purely from closed paths in the subdomain
/// graph: triangles give T-intersections, 4-cycles that contain no triangle
/// give X-intersections. Used to cross-check the geometric classification.
pub fn closed_path_intersections(graph: &FractureGraph) -> (Vec<[usize; 3]>, Vec<[usize; 4]>) {
    let m = graph.subdomain_count;
    let e = |a: usize, b: usize| graph.has_edge(a, b);
    let mut tris = Vec::new();
    for i in 0..m {
        for &j in &graph.neighbors[i] {
            for &k in &graph.neighbors[j] {
                if e(i, k) {
                    tris.push([i, j, k]);
                }
            }
        }
    }
    tris.sort_unstable();
    let is_tri = |t: [usize; 3]| tris.binary_search(&t).is_ok();
    let mut quads = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let cycle = (e(a, b) && e(b, c) && e(c, d) && e(d, a))
                        || (e(a, b) && e(b, d) && e(d, c) && e(c, a))
                        || (e(a, c) && e(c, b) && e(b, d) && e(d, a));
                    if !cycle {
                        continue;
                    }
                    let contains_tri = is_tri([a, b, c])
                        || is_tri([a, b, d])
                        || is_tri([a, c, d])
                        || is_tri([b, c, d]);
                    if !contains_tri {
                        quads.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    (tris, quads)
}
