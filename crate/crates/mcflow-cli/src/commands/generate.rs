use std::path::PathBuf;

use clap::Args;
use mcflow::mesh::generate::{generate, ShapeSpec};
use mcflow::mesh::io::write_mesh_file;

use crate::CliError;

#[derive(Args)]
pub struct GenerateArgs {
    /// Shape spec, e.g. "sphere:r=1,level=4" or "spiked_sphere:l=5,w=0.05,level=5".
    #[arg(long)]
    pub spec: String,
    /// Output mesh path (.off or .obj).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: GenerateArgs) -> Result<(), CliError> {
    let spec: ShapeSpec<f64> = args
        .spec
        .parse()
        .map_err(|e: mcflow::Error| CliError::config(e.to_string()))?;
    let mesh = generate(&spec)?;
    write_mesh_file(&mesh, &args.out)?;
    println!(
        "wrote {} ({} vertices, {} faces)",
        args.out.display(),
        mesh.n_vertices(),
        mesh.n_faces()
    );
    Ok(())
}
