//! Command-line front end: tuple validation reports, spline construction
//! from mesh files, grid evaluation, C1 scans, and OBJ surface export.
//!
//! Exit codes: 0 success, 1 validation/domain failure, 2 usage/parse error.
//! The sampling seed of the validators defaults to 0x5EED and can be
//! overridden with the `TRISPLINE_SEED` environment variable.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use trispline::mesh::{mesh_from_json_str, MeshError, Spline};
use trispline::shape::{builtin_tuple, tuple_from_json_str, RsdTuple};
use trispline::validate::{
    check_admissible_pair, check_affinity_invariance, check_range_shift, check_rsd_conditions,
    DEFAULT_SEED,
};
use trispline::Point2;

/// C1 jump thresholds for the `check-c1` exit status.
const C1_VALUE_TOL: f64 = 1e-10;
const C1_GRADIENT_TOL: f64 = 1e-7;

#[derive(Parser)]
#[command(
    name = "trispline",
    about = "C1 spline surfaces over triangular meshes from Hermite data",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all property checks on a tuple and print the JSON reports.
    ///
    /// Exit status is 0 iff the admissibility and RSD-condition checks pass;
    /// the range-shift and affinity reports are informative.
    Validate {
        /// Built-in tuple name (quintic-rsd, phi-phi, affine-sextic) or a
        /// tuple JSON file path. Built-in names resolve first.
        #[arg(long)]
        tuple: String,
    },
    /// Evaluate a spline on a grid or point list and emit CSV.
    Eval {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        tuple: String,
        /// NX NY [XMIN YMIN XMAX YMAX]; the box defaults to the mesh
        /// bounding box.
        #[arg(long, num_args = 2..=6, value_name = "N", allow_negative_numbers = true)]
        grid: Option<Vec<f64>>,
        /// CSV file with x,y rows (a non-numeric header line is skipped).
        #[arg(long)]
        points: Option<PathBuf>,
        /// Add Fx, Fy columns.
        #[arg(long)]
        gradient: bool,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan all interior edges for value and gradient jumps.
    CheckC1 {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        tuple: String,
        /// Samples per interior edge.
        #[arg(long, default_value_t = 33)]
        samples: usize,
    },
    /// Export the graph surface as a Wavefront OBJ.
    ExportObj {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        tuple: String,
        /// Barycentric refinement density per triangle.
        #[arg(long, default_value_t = 8)]
        density: usize,
        /// Output OBJ path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure carrying the process exit code.
enum Failure {
    /// Usage or parse problems → exit 2.
    Usage(String),
    /// Validation or domain failures → exit 1.
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match sampling_seed() {
        Ok(seed) => seed,
        Err(f) => return fail(f),
    };
    let result = match cli.command {
        Command::Validate { tuple } => cmd_validate(&tuple, seed),
        Command::Eval {
            mesh,
            tuple,
            grid,
            points,
            gradient,
            out,
        } => cmd_eval(&mesh, &tuple, grid.as_deref(), points.as_deref(), gradient, out.as_deref()),
        Command::CheckC1 {
            mesh,
            tuple,
            samples,
        } => cmd_check_c1(&mesh, &tuple, samples),
        Command::ExportObj {
            mesh,
            tuple,
            density,
            out,
        } => cmd_export_obj(&mesh, &tuple, density, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("error: {}", f.message());
    ExitCode::from(f.code())
}

fn sampling_seed() -> Result<u64, Failure> {
    match std::env::var("TRISPLINE_SEED") {
        Ok(raw) => {
            let parsed = if let Some(hex) = raw.strip_prefix("0x") {
                u64::from_str_radix(hex, 16)
            } else {
                raw.parse()
            };
            parsed.map_err(|_| Failure::Usage(format!("TRISPLINE_SEED {raw:?} is not a u64")))
        }
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Built-in tuple names resolve before file paths.
fn resolve_tuple(spec: &str) -> Result<RsdTuple, Failure> {
    if let Some(t) = builtin_tuple(spec) {
        return Ok(t);
    }
    let text = read_file(Path::new(spec))?;
    tuple_from_json_str(spec, &text).map_err(|e| Failure::Usage(e.to_string()))
}

fn load_mesh(path: &Path) -> Result<trispline::mesh::Mesh, Failure> {
    let text = read_file(path)?;
    mesh_from_json_str(&text).map_err(|e| match e {
        MeshError::Json(_) => Failure::Usage(e.to_string()),
        other => Failure::Domain(other.to_string()),
    })
}

fn build_spline(mesh: trispline::mesh::Mesh, tuple: RsdTuple) -> Result<Spline, Failure> {
    Spline::build(mesh, tuple).map_err(|e| match e {
        MeshError::TupleRejected { ref report, .. } => Failure::Domain(format!(
            "{e}\n{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        )),
        other => Failure::Domain(other.to_string()),
    })
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_validate(tuple_spec: &str, seed: u64) -> Result<(), Failure> {
    let tuple = resolve_tuple(tuple_spec)?;
    let reports = vec![
        check_admissible_pair(&tuple.psi0, &tuple.psi1),
        check_rsd_conditions(&tuple),
        check_range_shift(&tuple, seed),
        check_affinity_invariance(&tuple, seed),
    ];
    println!(
        "{}",
        serde_json::to_string_pretty(&reports).expect("reports serialize")
    );
    // admissibility + RSD conditions gate the exit status
    if reports[0].pass && reports[1].pass {
        Ok(())
    } else {
        Err(Failure::Domain(format!(
            "tuple {:?} failed {}",
            tuple.name,
            if reports[0].pass {
                "the RSD conditions"
            } else {
                "admissibility"
            }
        )))
    }
}

/// 17 significant digits: round-trip exact for f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_points_csv(text: &str) -> Result<Vec<Point2>, Failure> {
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let parsed = (|| {
            let x = fields.next()?.parse::<f64>().ok()?;
            let y = fields.next()?.parse::<f64>().ok()?;
            Some(Point2::new(x, y))
        })();
        match parsed {
            Some(p) => pts.push(p),
            // allow a single header line
            None if lineno == 0 => continue,
            None => {
                return Err(Failure::Usage(format!(
                    "points file line {}: expected x,y",
                    lineno + 1
                )))
            }
        }
    }
    Ok(pts)
}

fn grid_points(spec: &[f64], mesh: &trispline::mesh::Mesh) -> Result<Vec<Point2>, Failure> {
    if spec.len() != 2 && spec.len() != 6 {
        return Err(Failure::Usage(
            "--grid takes NX NY or NX NY XMIN YMIN XMAX YMAX".to_string(),
        ));
    }
    let nx = spec[0];
    let ny = spec[1];
    if nx.fract() != 0.0 || ny.fract() != 0.0 || nx < 2.0 || ny < 2.0 {
        return Err(Failure::Usage("grid counts must be integers >= 2".to_string()));
    }
    let (nx, ny) = (nx as usize, ny as usize);
    let (xmin, ymin, xmax, ymax) = if spec.len() == 6 {
        (spec[2], spec[3], spec[4], spec[5])
    } else {
        mesh.bounding_box()
    };
    if !(xmax > xmin && ymax > ymin) {
        return Err(Failure::Usage("grid box is empty".to_string()));
    }
    let mut pts = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let y = ymin + (ymax - ymin) * iy as f64 / (ny - 1) as f64;
        for ix in 0..nx {
            let x = xmin + (xmax - xmin) * ix as f64 / (nx - 1) as f64;
            pts.push(Point2::new(x, y));
        }
    }
    Ok(pts)
}

fn cmd_eval(
    mesh_path: &Path,
    tuple_spec: &str,
    grid: Option<&[f64]>,
    points: Option<&Path>,
    gradient: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let mesh = load_mesh(mesh_path)?;
    let tuple = resolve_tuple(tuple_spec)?;
    let pts = match (grid, points) {
        (Some(spec), None) => grid_points(spec, &mesh)?,
        (None, Some(path)) => parse_points_csv(&read_file(path)?)?,
        (None, None) => return Err(Failure::Usage("need --grid or --points".to_string())),
        (Some(_), Some(_)) => {
            return Err(Failure::Usage("--grid and --points are exclusive".to_string()))
        }
    };
    let spline = build_spline(mesh, tuple)?;

    let mut csv = String::new();
    csv.push_str(if gradient { "x,y,F,Fx,Fy\n" } else { "x,y,F\n" });
    for p in pts {
        let _ = write!(csv, "{},{}", fmt_f64(p.x), fmt_f64(p.y));
        match spline.eval(p) {
            Ok(v) => {
                let _ = write!(csv, ",{}", fmt_f64(v));
                if gradient {
                    let g = spline.grad(p).expect("gradient where value exists");
                    let _ = write!(csv, ",{},{}", fmt_f64(g.a), fmt_f64(g.b));
                }
            }
            Err(MeshError::OutOfDomain { .. }) => {
                csv.push_str(if gradient { ",,," } else { "," });
            }
            Err(other) => return Err(Failure::Domain(other.to_string())),
        }
        csv.push('\n');
    }
    write_output(out, &csv)
}

fn cmd_check_c1(mesh_path: &Path, tuple_spec: &str, samples: usize) -> Result<(), Failure> {
    let mesh = load_mesh(mesh_path)?;
    let tuple = resolve_tuple(tuple_spec)?;
    let spline = build_spline(mesh, tuple)?;
    let report = spline
        .check_c1(samples)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if report.max_value_jump <= C1_VALUE_TOL && report.max_gradient_jump <= C1_GRADIENT_TOL {
        Ok(())
    } else {
        Err(Failure::Domain(format!(
            "C1 scan failed: max value jump {:e}, max gradient jump {:e}",
            report.max_value_jump, report.max_gradient_jump
        )))
    }
}

fn cmd_export_obj(
    mesh_path: &Path,
    tuple_spec: &str,
    density: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if density < 1 {
        return Err(Failure::Usage("--density must be >= 1".to_string()));
    }
    let mesh = load_mesh(mesh_path)?;
    let tuple = resolve_tuple(tuple_spec)?;
    let spline = build_spline(mesh, tuple)?;

    let d = density;
    let mut obj = String::from("# trispline graph surface\n");
    let mut faces = String::new();
    let mut base = 1usize; // OBJ indices are 1-based
    let row_offset = |a: usize| a * (d + 1) - a * (a + 1) / 2 + a; // Σ_{q<a} (d+1-q)
    for patch in spline.patches() {
        for a in 0..=d {
            for b in 0..=(d - a) {
                let lam = [
                    a as f64 / d as f64,
                    b as f64 / d as f64,
                    (d - a - b) as f64 / d as f64,
                ];
                let p = patch.point_at(lam);
                let z = patch.eval_at_barycentric(lam);
                let _ = writeln!(obj, "v {:.9} {:.9} {:.9}", p.x, p.y, z);
            }
        }
        for a in 0..d {
            for b in 0..(d - a) {
                let i0 = base + row_offset(a) + b;
                let i1 = base + row_offset(a + 1) + b;
                let _ = writeln!(faces, "f {} {} {}", i0, i1, i0 + 1);
                if b + 1 < d - a {
                    let _ = writeln!(faces, "f {} {} {}", i1, i1 + 1, i0 + 1);
                }
            }
        }
        base += (d + 1) * (d + 2) / 2;
    }
    obj.push_str(&faces);
    write_output(out, &obj)
}
