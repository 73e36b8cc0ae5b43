use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use mcflow::mesh::generate::{generate, perturbed_sphere, ShapeSpec};
use mcflow::metrics::{rigidity_defect, RigidityOptions, RigidityReport};
use mcflow::TriangleMesh;
use serde_json::json;

use crate::config::Config;
use crate::report::{mesh_sha256, meta_block, write_atomic, write_json};
use crate::CliError;

#[derive(Args)]
pub struct RigidityArgs {
    /// Single input mesh (.off/.obj); alternative to --family.
    #[arg(long, conflicts_with = "family")]
    pub mesh: Option<PathBuf>,
    /// Family sweep: "ellipsoid" (semi-axes 1+eps,1,1) or "perturbed-sphere"
    /// (radial degree-2 bump of amplitude eps on the radius-2 sphere).
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated epsilon values for the family sweep.
    #[arg(long)]
    pub eps: Option<String>,
    /// Refinement level for generated family members.
    #[arg(long)]
    pub level: Option<u32>,
    /// Output directory (CSV rows + JSON summary) or JSON path for --mesh.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value configuration file supplying defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn family_member(family: &str, eps: f64, level: u32) -> Result<TriangleMesh<f64>, CliError> {
    match family {
        "ellipsoid" => Ok(generate(&ShapeSpec::Ellipsoid {
            a: 1.0 + eps,
            b: 1.0,
            c: 1.0,
            level,
        })?),
        "perturbed-sphere" => Ok(perturbed_sphere(eps, level)?),
        other => Err(CliError::config(format!(
            "unknown family '{other}' (ellipsoid | perturbed-sphere)"
        ))),
    }
}

pub fn run(mut args: RigidityArgs) -> Result<(), CliError> {
    let config = Config::load(args.config.as_deref())?;
    if args.family.is_none() {
        config.fill(&mut args.family, "family")?;
    }
    config.fill(&mut args.eps, "eps")?;
    config.fill(&mut args.level, "level")?;

    if let Some(path) = &args.mesh {
        let mesh = crate::read_mesh(path)?;
        let report = rigidity_defect(&mesh, &RigidityOptions::default())?;
        let value = json!({
            "rigidity": report,
            "meta": meta_block(
                json!({"mesh": path.display().to_string()}),
                Some(mesh_sha256(&mesh)),
            ),
        });
        match &args.out {
            Some(out) => write_json(out, &value)?,
            None => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        }
        println!(
            "delta = {:.4e}, distance = {:.4e}, ratio = {:.4}",
            report.delta, report.distance, report.ratio
        );
        return Ok(());
    }

    let family = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::config("need --mesh or --family"))?;
    let eps_list: Vec<f64> = args
        .eps
        .as_deref()
        .ok_or_else(|| CliError::config("--family needs --eps"))?
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::config(format!("bad eps '{s}': {e}")))
        })
        .collect::<Result<_, _>>()?;
    let level = args.level.unwrap_or(4);
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| CliError::config("--family needs --out DIR"))?;
    std::fs::create_dir_all(out)?;

    let mut rows: Vec<(f64, RigidityReport<f64>)> = Vec::new();
    for &eps in &eps_list {
        let mesh = family_member(family, eps, level)?;
        let report = rigidity_defect(&mesh, &RigidityOptions::default())?;
        println!(
            "eps = {eps}: delta = {:.4e}, d = {:.4e}, ratio = {:.4}",
            report.delta, report.distance, report.ratio
        );
        rows.push((eps, report));
    }

    let mut csv = String::from("shape,eps,delta,distance,ratio\n");
    for (eps, r) in &rows {
        writeln!(
            csv,
            "{family}:{eps},{eps},{:.12e},{:.12e},{:.12e}",
            r.delta, r.distance, r.ratio
        )
        .unwrap();
    }
    write_atomic(&out.join("rigidity.csv"), csv.as_bytes())?;

    // Informational log-log slope of d against delta over rows clear of the
    // tolerance floor.
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(_, r)| r.delta > 10.0 * r.delta_floor)
        .map(|(_, r)| (r.delta.ln(), r.distance.ln()))
        .collect();
    let slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        None
    };
    let max_ratio = rows
        .iter()
        .filter(|(_, r)| r.delta > 10.0 * r.delta_floor)
        .map(|(_, r)| r.ratio)
        .fold(f64::NAN, f64::max);

    let summary = json!({
        "family": family,
        "level": level,
        "rows": rows.iter().map(|(eps, r)| json!({
            "eps": eps,
            "delta": r.delta,
            "distance": r.distance,
            "ratio": r.ratio,
            "floored": r.floored,
            "at_tolerance": r.at_tolerance,
        })).collect::<Vec<_>>(),
        "max_ratio": max_ratio,
        "log_log_slope": slope,
        "meta": meta_block(json!({
            "family": family,
            "eps": args.eps,
            "level": level,
            "config_file": config.echo(),
        }), None),
    });
    write_json(&out.join("rigidity_summary.json"), &summary)?;
    if let Some(s) = slope {
        println!("log-log slope of d vs delta: {s:.3} (informational)");
    }
    println!("max ratio: {max_ratio:.4}");
    Ok(())
}
