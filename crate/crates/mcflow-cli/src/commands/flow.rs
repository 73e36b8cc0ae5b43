use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use mcflow::entropy::{entropy, EntropyOptions};
use mcflow::flow::{
    curvature_monitor, detect_round_point, mcf_evolve, mcf_evolve_axisym, smoczyk_check,
    speed_monitor, FlowOptions,
};
use mcflow::mesh::generate::{generate, profile, ShapeSpec};
use mcflow::mesh::io::write_mesh_file;
use serde_json::json;

use crate::config::Config;
use crate::report::{mesh_sha256, meta_block, write_atomic, write_json};
use crate::CliError;

#[derive(Args)]
pub struct FlowArgs {
    /// Input mesh file; alternative to --spec.
    #[arg(long, conflicts_with = "spec")]
    pub mesh: Option<PathBuf>,
    /// Shape spec to generate and flow.
    #[arg(long)]
    pub spec: Option<String>,
    /// Evolve the generating curve instead of the mesh (axisymmetric shapes,
    /// requires --spec).
    #[arg(long)]
    pub axisym: bool,
    /// Stop at this time instead of running to the singular stop.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Output directory for checkpoints, the manifest, and monitor CSVs.
    #[arg(long)]
    pub out: PathBuf,
    /// Compute the curvature monitor (needs the initial entropy).
    #[arg(long)]
    pub curvature_monitor: bool,
    /// Compute the displacement speed monitor (needs the initial entropy).
    #[arg(long)]
    pub speed_monitor: bool,
    /// Evolution-identity residual for 2tH + x.n (axisym runs only).
    #[arg(long)]
    pub smoczyk: bool,
    /// Entropy of the initial surface, if already known (skips recomputing).
    #[arg(long)]
    pub entropy_value: Option<f64>,
    /// key=value configuration file supplying defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(mut args: FlowArgs) -> Result<(), CliError> {
    let config = Config::load(args.config.as_deref())?;
    config.fill(&mut args.horizon, "horizon")?;
    config.fill(&mut args.entropy_value, "entropy_value")?;
    if args.spec.is_none() {
        config.fill(&mut args.spec, "spec")?;
    }

    std::fs::create_dir_all(&args.out)?;
    let opts = FlowOptions {
        horizon: args.horizon,
        material_windows: args.smoczyk,
        ..Default::default()
    };

    if args.axisym {
        let spec_str = args
            .spec
            .as_ref()
            .ok_or_else(|| CliError::config("--axisym requires --spec"))?;
        let spec: ShapeSpec<f64> = spec_str
            .parse()
            .map_err(|e: mcflow::Error| CliError::config(e.to_string()))?;
        let prof = profile(&spec)?;
        let traj = mcf_evolve_axisym(&prof, &opts)?;
        // Checkpoints as revolved meshes.
        let mut checkpoints = Vec::new();
        for (i, (_, p)) in traj.states.iter().enumerate() {
            let name = format!("state_{i:04}.off");
            let mesh = p.revolve(48)?;
            write_mesh_file(&mesh, &args.out.join(&name))?;
            checkpoints.push(name);
        }
        let smoczyk_residual = if args.smoczyk {
            Some(smoczyk_check(&traj).map_err(CliError::from)?)
        } else {
            None
        };
        let manifest = json!({
            "kind": "axisym",
            "times": traj.states.iter().map(|(t, _)| *t).collect::<Vec<_>>(),
            "stopping_reason": traj.reason,
            "detail": traj.detail,
            "diagnostics": traj.diagnostics,
            "checkpoints": checkpoints,
            "smoczyk_max_residual": smoczyk_residual,
            "meta": meta_block(json!({"spec": spec_str, "horizon": args.horizon, "config_file": config.echo()}), None),
        });
        write_json(&args.out.join("manifest.json"), &manifest)?;
        println!(
            "axisym flow: {} steps, stopped: {:?} ({})",
            traj.diagnostics.len(),
            traj.reason,
            traj.detail
        );
        return Ok(());
    }

    let (mesh, source) = match (&args.mesh, &args.spec) {
        (Some(path), _) => (crate::read_mesh(path)?, path.display().to_string()),
        (None, Some(spec_str)) => {
            let spec: ShapeSpec<f64> = spec_str
                .parse()
                .map_err(|e: mcflow::Error| CliError::config(e.to_string()))?;
            (generate(&spec)?, spec_str.clone())
        }
        (None, None) => return Err(CliError::config("need --mesh or --spec")),
    };

    let traj = mcf_evolve(&mesh, &opts)?;
    let mut checkpoints = Vec::new();
    for (i, (_, m)) in traj.states.iter().enumerate() {
        let name = format!("state_{i:04}.off");
        write_mesh_file(m, &args.out.join(&name))?;
        checkpoints.push(name);
    }

    let need_entropy = args.curvature_monitor || args.speed_monitor;
    let entropy_value = match (need_entropy, args.entropy_value) {
        (true, Some(v)) => Some(v),
        (true, None) => Some(
            entropy(&mesh, &EntropyOptions::default())
                .map_err(CliError::from)?
                .value,
        ),
        (false, passed) => passed,
    };

    let round_point = detect_round_point(&traj.diagnostics).ok();
    let mut monitor_csv = String::new();
    if let Some(ev) = entropy_value.filter(|_| need_entropy) {
        let cm = args.curvature_monitor.then(|| curvature_monitor(&traj, ev));
        let sm = if args.speed_monitor {
            Some(speed_monitor(&traj, ev).map_err(CliError::from)?)
        } else {
            None
        };
        // One CSV row per stored state: t, max|A|, r(t), product, dist_H, bound.
        writeln!(monitor_csv, "t,max_abs_a,r,product,dist_h,bound").unwrap();
        let rows = traj.states.len().saturating_sub(1);
        for i in 0..rows {
            let t = traj.states[i + 1].0;
            let (mut max_a, mut radius, mut product) = (f64::NAN, f64::NAN, f64::NAN);
            if let Some(cm) = &cm {
                if let Some(row) = cm
                    .rows
                    .iter()
                    .min_by(|a, b| (a.t - t).abs().partial_cmp(&(b.t - t).abs()).unwrap())
                {
                    max_a = row.max_abs_a;
                    radius = row.radius;
                    product = row.product;
                }
            }
            let (mut dist, mut bound) = (f64::NAN, f64::NAN);
            if let Some(sm) = &sm {
                if let Some(row) = sm.rows.get(i) {
                    dist = row.dist;
                    bound = row.bound_shape;
                }
            }
            writeln!(
                monitor_csv,
                "{t:.12e},{max_a:.12e},{radius:.12e},{product:.12e},{dist:.12e},{bound:.12e}"
            )
            .unwrap();
        }
        write_atomic(&args.out.join("monitors.csv"), monitor_csv.as_bytes())?;
        if let Some(cm) = &cm {
            write_json(&args.out.join("curvature_monitor.json"), &json!(cm))?;
        }
        if let Some(sm) = &sm {
            write_json(&args.out.join("speed_monitor.json"), &json!(sm))?;
        }
    }

    let manifest = json!({
        "kind": "mesh",
        "times": traj.states.iter().map(|(t, _)| *t).collect::<Vec<_>>(),
        "stopping_reason": traj.reason,
        "detail": traj.detail,
        "diagnostics": traj.diagnostics,
        "checkpoints": checkpoints,
        "round_point": round_point,
        "entropy_value": entropy_value,
        "meta": meta_block(
            json!({"source": source, "horizon": args.horizon, "config_file": config.echo()}),
            Some(mesh_sha256(&mesh)),
        ),
    });
    write_json(&args.out.join("manifest.json"), &manifest)?;
    println!(
        "flow: {} steps, stopped: {:?} ({})",
        traj.diagnostics.len(),
        traj.reason,
        traj.detail
    );
    Ok(())
}
