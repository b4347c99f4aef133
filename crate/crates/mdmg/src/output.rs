//! Result files: convergence history, summary and VTK fields.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use mdmg_core::boundary::BoundaryCondition;
use mdmg_core::mesh::{GridLevel, Group};
use mdmg_core::multigrid::ConvergenceReport;

use crate::experiment::Outcome;

/// `iter,residual,ratio`; the ratio of iteration 0 is empty.
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut s = String::from("iter,residual,ratio\n");
    for (k, r) in report.residuals.iter().enumerate() {
        if k == 0 {
            writeln!(s, "0,{r:e},").unwrap();
        } else {
            writeln!(s, "{k},{r:e},{:e}", r / report.residuals[k - 1]).unwrap();
        }
    }
    s
}

/// Parses a file written by [`convergence_csv`] back into residuals and ratios.
pub fn parse_convergence_csv(text: &str) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut residuals = Vec::new();
    let mut ratios = Vec::new();
    for line in text.lines().skip(1) {
        let mut f = line.split(',');
        let _iter = f.next()?;
        residuals.push(f.next()?.parse().ok()?);
        match f.next()? {
            "" => {}
            r => ratios.push(r.parse().ok()?),
        }
    }
    Some((residuals, ratios))
}

pub fn summary(name: &str, outcome: &Outcome) -> String {
    let rep = &outcome.report;
    let [nx, ny] = outcome.grid();
    let sys_counts = outcome.hierarchy.finest().layout.clone();
    let counts: Vec<String> = Group::ALL
        .iter()
        .map(|&g| format!("{g:?}={}", sys_counts.count(g)))
        .collect();
    let per_cycle = if outcome.cycle_times.is_empty() {
        0.0
    } else {
        outcome.cycle_times.iter().map(|d| d.as_secs_f64()).sum::<f64>() / outcome.cycle_times.len() as f64
    };
    let mut s = String::new();
    writeln!(s, "experiment          {name}").unwrap();
    writeln!(s, "grid                {nx}x{ny}").unwrap();
    writeln!(s, "levels              {}", outcome.hierarchy.depth()).unwrap();
    writeln!(s, "unknowns            {} ({})", sys_counts.len(), counts.join(" ")).unwrap();
    writeln!(s, "converged           {}", outcome.converged()).unwrap();
    writeln!(s, "iterations          {}", rep.iterations).unwrap();
    writeln!(s, "relative residual   {:.3e}", rep.relative_residual()).unwrap();
    writeln!(s, "convergence factor  {:.3}", rep.asymptotic_factor).unwrap();
    writeln!(s, "setup seconds       {:.3}", outcome.setup_time.as_secs_f64()).unwrap();
    writeln!(s, "seconds per cycle   {per_cycle:.4}").unwrap();
    writeln!(s).unwrap();
    writeln!(s, "| grid | iterations | rho |").unwrap();
    writeln!(s, "| {nx}x{ny} | {} | {:.3} |", rep.iterations, rep.asymptotic_factor).unwrap();
    s
}

/// Total flux in the positive axis direction through the edges of cell
/// `(i, j)`, ordered left, right, bottom, top.
fn cell_fluxes(level: &GridLevel, x: &[f64], i: usize, j: usize) -> [f64; 4] {
    let dofs = level.layout.cell_velocities(i, j);
    let known = |bc: BoundaryCondition, len: f64, outward_positive: bool| match bc {
        BoundaryCondition::Flux(g) => {
            if outward_positive {
                g * len
            } else {
                -g * len
            }
        }
        BoundaryCondition::Pressure(_) => f64::NAN,
    };
    let b = &level.boundary;
    let fallback = [
        known(b.left, level.hy(), false),
        known(b.right, level.hy(), true),
        known(b.bottom, level.hx(), false),
        known(b.top, level.hx(), true),
    ];
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = dofs[k].map_or(fallback[k], |d| x[d]);
    }
    out
}

const HIDDEN_CELL: u8 = 32;

fn ascii(values: impl Iterator<Item = f64>) -> String {
    values.map(|v| format!("{v:e}")).collect::<Vec<_>>().join(" ")
}

/// Cell-centred bulk pressure and velocity as a rectilinear grid with one
/// piece per subdomain. A piece spans the bounding box of its subdomain;
/// cells of other subdomains are blanked with `vtkGhostType`.
pub fn bulk_vtr(level: &GridLevel, x: &[f64]) -> String {
    let subdomains = level.cell_subdomain.iter().copied().max().map_or(0, |m| m + 1);
    let mut bbox = vec![(usize::MAX, 0usize, usize::MAX, 0usize); subdomains];
    for j in 0..level.ny {
        for i in 0..level.nx {
            let b = &mut bbox[level.cell_subdomain[j * level.nx + i]];
            *b = (b.0.min(i), b.1.max(i + 1), b.2.min(j), b.3.max(j + 1));
        }
    }
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0"?>"#).unwrap();
    writeln!(s, r#"<VTKFile type="RectilinearGrid" version="1.0" byte_order="LittleEndian">"#).unwrap();
    writeln!(s, r#"<RectilinearGrid WholeExtent="0 {} 0 {} 0 0">"#, level.nx, level.ny).unwrap();
    for (sub, &(i0, i1, j0, j1)) in bbox.iter().enumerate() {
        writeln!(s, r#"<Piece Extent="{i0} {i1} {j0} {j1} 0 0">"#).unwrap();
        writeln!(s, "<CellData Scalars=\"pressure\" Vectors=\"velocity\">").unwrap();
        let cells: Vec<(usize, usize)> = (j0..j1).flat_map(|j| (i0..i1).map(move |i| (i, j))).collect();
        let inside = |&(i, j): &(usize, usize)| level.cell_subdomain[j * level.nx + i] == sub;
        let p = cells
            .iter()
            .map(|c| if inside(c) { x[level.layout.cell_at(c.0, c.1)] } else { f64::NAN });
        writeln!(s, r#"<DataArray type="Float64" Name="pressure" format="ascii">{}</DataArray>"#, ascii(p)).unwrap();
        let v = cells.iter().flat_map(|c| {
            if inside(c) {
                let f = cell_fluxes(level, x, c.0, c.1);
                [0.5 * (f[0] + f[1]) / level.hy(), 0.5 * (f[2] + f[3]) / level.hx(), 0.0]
            } else {
                [f64::NAN; 3]
            }
        });
        writeln!(
            s,
            r#"<DataArray type="Float64" Name="velocity" NumberOfComponents="3" format="ascii">{}</DataArray>"#,
            ascii(v)
        )
        .unwrap();
        let ghost: Vec<String> = cells
            .iter()
            .map(|c| if inside(c) { "0".to_string() } else { HIDDEN_CELL.to_string() })
            .collect();
        writeln!(s, r#"<DataArray type="UInt8" Name="vtkGhostType" format="ascii">{}</DataArray>"#, ghost.join(" ")).unwrap();
        writeln!(s, "</CellData>").unwrap();
        writeln!(s, "<Coordinates>").unwrap();
        let xs = (i0..=i1).map(|i| level.vertex(i, 0).0);
        let ys = (j0..=j1).map(|j| level.vertex(0, j).1);
        writeln!(s, r#"<DataArray type="Float64" Name="x" format="ascii">{}</DataArray>"#, ascii(xs)).unwrap();
        writeln!(s, r#"<DataArray type="Float64" Name="y" format="ascii">{}</DataArray>"#, ascii(ys)).unwrap();
        writeln!(s, r#"<DataArray type="Float64" Name="z" format="ascii">0</DataArray>"#).unwrap();
        writeln!(s, "</Coordinates>").unwrap();
        writeln!(s, "</Piece>").unwrap();
    }
    writeln!(s, "</RectilinearGrid>\n</VTKFile>").unwrap();
    s
}

/// Fracture pressure as poly data, one piece per fracture made of one line
/// cell per element.
pub fn fracture_vtp(level: &GridLevel, segments: usize, x: &[f64]) -> String {
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0"?>"#).unwrap();
    writeln!(s, r#"<VTKFile type="PolyData" version="1.0" byte_order="LittleEndian">"#).unwrap();
    writeln!(s, "<PolyData>").unwrap();
    for seg in 0..segments {
        let mut pieces: Vec<usize> = (0..level.pieces.len()).filter(|&p| level.pieces[p].segment == seg).collect();
        pieces.sort_by_key(|&p| level.pieces[p].start);
        let mut points = Vec::new();
        let mut pressure = Vec::new();
        for (k, &p) in pieces.iter().enumerate() {
            let n = level.pieces[p].element_count();
            let first = if k == 0 { 0 } else { 1 };
            points.extend((first..=n).map(|node| level.node_point(p, node)));
            pressure.extend(level.layout.pieces[p].pressure.iter().map(|&d| x[d]));
        }
        let np = points.len();
        let ne = np - 1;
        writeln!(
            s,
            r#"<Piece NumberOfPoints="{np}" NumberOfVerts="0" NumberOfLines="{ne}" NumberOfStrips="0" NumberOfPolys="0">"#
        )
        .unwrap();
        writeln!(s, "<CellData Scalars=\"pressure\">").unwrap();
        writeln!(
            s,
            r#"<DataArray type="Float64" Name="pressure" format="ascii">{}</DataArray>"#,
            ascii(pressure.iter().copied())
        )
        .unwrap();
        writeln!(s, "</CellData>").unwrap();
        writeln!(s, "<Points>").unwrap();
        let coords = points.iter().flat_map(|&(px, py)| [px, py, 0.0]);
        writeln!(
            s,
            r#"<DataArray type="Float64" NumberOfComponents="3" format="ascii">{}</DataArray>"#,
            ascii(coords)
        )
        .unwrap();
        writeln!(s, "</Points>").unwrap();
        writeln!(s, "<Lines>").unwrap();
        let conn: Vec<String> = (0..ne).map(|k| format!("{k} {}", k + 1)).collect();
        let offsets: Vec<String> = (1..=ne).map(|k| (2 * k).to_string()).collect();
        writeln!(s, r#"<DataArray type="Int64" Name="connectivity" format="ascii">{}</DataArray>"#, conn.join(" ")).unwrap();
        writeln!(s, r#"<DataArray type="Int64" Name="offsets" format="ascii">{}</DataArray>"#, offsets.join(" ")).unwrap();
        writeln!(s, "</Lines>").unwrap();
        writeln!(s, "</Piece>").unwrap();
    }
    writeln!(s, "</PolyData>\n</VTKFile>").unwrap();
    s
}

pub fn write_all(dir: &Path, name: &str, outcome: &Outcome, formats: &[crate::config::Format]) -> io::Result<()> {
    use crate::config::Format;
    fs::create_dir_all(dir)?;
    let level = outcome.hierarchy.finest();
    for f in formats {
        match f {
            Format::Csv => fs::write(dir.join("convergence.csv"), convergence_csv(&outcome.report))?,
            Format::Summary => fs::write(dir.join("summary.txt"), summary(name, outcome))?,
            Format::Vtk => {
                fs::write(dir.join("pressure_bulk.vtr"), bulk_vtr(level, &outcome.solution))?;
                let segments = outcome.problem.network.segments.len();
                fs::write(dir.join("pressure_fracture.vtp"), fracture_vtp(level, segments, &outcome.solution))?;
            }
        }
    }
    Ok(())
}
