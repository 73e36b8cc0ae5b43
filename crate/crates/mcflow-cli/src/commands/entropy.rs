use std::path::PathBuf;

use clap::Args;
use mcflow::entropy::{entropy, EntropyOptions};
use serde_json::json;

use crate::config::Config;
use crate::report::{mesh_sha256, meta_block, write_json};
use crate::CliError;

#[derive(Args)]
pub struct EntropyArgs {
    /// Input mesh (.off or .obj).
    #[arg(long)]
    pub mesh: PathBuf,
    /// Also run the independent grid oracle and report the gap.
    #[arg(long)]
    pub oracle: bool,
    /// Quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of curvature-cluster starts.
    #[arg(long)]
    pub cluster_starts: Option<usize>,
    /// Write the JSON report here (stdout gets a summary line).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value configuration file supplying defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(mut args: EntropyArgs) -> Result<(), CliError> {
    let config = Config::load(args.config.as_deref())?;
    config.fill(&mut args.tol, "tol")?;
    config.fill(&mut args.cluster_starts, "cluster_starts")?;

    let mesh = crate::read_mesh(&args.mesh)?;
    let opts = EntropyOptions {
        quad_tol: args.tol.unwrap_or(1e-6),
        cluster_starts: args.cluster_starts.unwrap_or(4),
        with_oracle: args.oracle,
        ..Default::default()
    };
    let result = entropy(&mesh, &opts).map_err(CliError::from)?;

    let report = json!({
        "entropy": result,
        "meta": meta_block(
            json!({
                "mesh": args.mesh.display().to_string(),
                "oracle": args.oracle,
                "tol": opts.quad_tol,
                "cluster_starts": opts.cluster_starts,
                "config_file": config.echo(),
            }),
            Some(mesh_sha256(&mesh)),
        ),
    });
    if let Some(out) = &args.out {
        write_json(out, &report)?;
    } else {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    }
    println!(
        "entropy = {:.6} (scale {:.4}, converged: {})",
        result.value, result.argmax.scale, result.converged
    );
    if !result.converged {
        return Err(CliError::numerical(
            "entropy ascent did not converge; best probed value reported",
        ));
    }
    Ok(())
}
