//! Result tables, mesh snapshots and SVG drawings.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentRun, StepSolution};
use crate::error::{Error, Result};
use crate::mesh::save_mesh;
use crate::mesh::PolygonalMesh;

pub const RESULTS_HEADER: [&str; 8] = ["step", "N", "lambda_h", "error", "theta2", "jump2", "eta2", "effectivity"];

/// One line of `results.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub step: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda_h: f64,
    pub error: f64,
    pub theta2: f64,
    pub jump2: f64,
    pub eta2: f64,
    pub effectivity: Option<f64>,
}

#[derive(Serialize)]
struct CurveRow<'a> {
    method: &'a str,
    #[serde(rename = "N")]
    n: usize,
    error: f64,
    eta2: f64,
    log10_n: f64,
    log10_error: f64,
}

#[derive(Serialize)]
struct IndicatorRow {
    cell: usize,
    theta2: f64,
    jump2: f64,
    eta2: f64,
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv { path: path.to_path_buf(), source }
}

/// The header is written even when there are no rows.
fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(csv_error(path))?;
    writer.write_record(header).map_err(csv_error(path))?;
    for row in rows {
        writer.serialize(row).map_err(csv_error(path))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Write `results.csv`, `curves.csv` and `mesh_step_k.{json,svg}` for every
/// mesh in the run. Wall times are left out so reruns are byte-identical.
pub fn emit_outputs(run: &ExperimentRun, config: &ExperimentConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rows = run.records.iter().map(|r| ResultRow {
        step: r.step,
        n: r.n,
        lambda_h: r.lambda_h,
        error: r.error,
        theta2: r.theta2,
        jump2: r.jump2,
        eta2: r.eta2,
        effectivity: r.effectivity,
    });
    write_csv(&dir.join("results.csv"), &RESULTS_HEADER, rows)?;

    let method = config.method.to_string();
    let curves = run.records.iter().map(|r| CurveRow {
        method: &method,
        n: r.n,
        error: r.error,
        eta2: r.eta2,
        log10_n: (r.n as f64).log10(),
        log10_error: r.error.log10(),
    });
    write_csv(&dir.join("curves.csv"), &["method", "N", "error", "eta2", "log10_n", "log10_error"], curves)?;

    for (k, mesh) in run.meshes.iter().enumerate() {
        save_mesh(mesh, dir.join(format!("mesh_step_{k}.json")))?;
        let marked = run.marks.get(k).map(Vec::as_slice).unwrap_or(&[]);
        let path = dir.join(format!("mesh_step_{k}.svg"));
        fs::write(&path, render_svg(mesh, marked)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

pub(super) fn dump_step(dir: &Path, step: usize, sol: &StepSolution) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rows = sol.indicators.iter().enumerate().map(|(cell, i)| IndicatorRow {
        cell,
        theta2: i.theta2,
        jump2: i.jump2,
        eta2: i.eta2,
    });
    write_csv(&dir.join(format!("indicators_step_{step}.csv")), &["cell", "theta2", "jump2", "eta2"], rows)?;
    let system = &sol.discretization.system;
    for (name, matrix) in [("stiffness", &system.stiffness), ("mass", &system.mass)] {
        let path = dir.join(format!("{name}_step_{step}.mtx"));
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        matrix.write_coordinate(BufWriter::new(file)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(csv_error(path))?;
    reader.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_error(path))
}

/// Cells outlined, `marked` cells shaded, y axis pointing up.
pub fn render_svg(mesh: &PolygonalMesh, marked: &[usize]) -> String {
    const SIZE: f64 = 600.0;
    const PAD: f64 = 10.0;
    let (mut lo, mut hi) = (mesh.vertex(0), mesh.vertex(0));
    for p in mesh.vertices() {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    let scale = (SIZE - 2.0 * PAD) / (hi.x - lo.x).max(hi.y - lo.y);
    let mut is_marked = vec![false; mesh.num_cells()];
    for &c in marked {
        is_marked[c] = true;
    }
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for c in 0..mesh.num_cells() {
        let points: Vec<String> = mesh
            .cell_points(c)
            .iter()
            .map(|p| format!("{:.3},{:.3}", PAD + scale * (p.x - lo.x), SIZE - PAD - scale * (p.y - lo.y)))
            .collect();
        let fill = if is_marked[c] { "#f4a261" } else { "none" };
        let _ = writeln!(svg, r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="0.6"/>"#, points.join(" "));
    }
    svg.push_str("</svg>\n");
    svg
}
