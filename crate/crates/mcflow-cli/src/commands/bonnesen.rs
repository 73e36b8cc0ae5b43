use std::path::PathBuf;

use clap::Args;
use mcflow::bonnesen::{bonnesen_check, PlanarCurve};
use mcflow::Vec2;
use serde_json::json;

use crate::report::{meta_block, write_json};
use crate::CliError;

#[derive(Args)]
pub struct BonnesenArgs {
    /// Two-column CSV (x,y per row); the curve closes implicitly.
    #[arg(long)]
    pub curve: PathBuf,
    /// Write the JSON report here (stdout otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read_curve(path: &PathBuf) -> Result<PlanarCurve<f64>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() || (lineno == 0 && body.starts_with(|c: char| c.is_alphabetic())) {
            continue; // optional header row
        }
        let mut cols = body.split(',');
        let x: f64 = cols
            .next()
            .ok_or_else(|| CliError::config(format!("{}:{}: missing x", path.display(), lineno + 1)))?
            .trim()
            .parse()
            .map_err(|e| CliError::config(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        let y: f64 = cols
            .next()
            .ok_or_else(|| CliError::config(format!("{}:{}: missing y", path.display(), lineno + 1)))?
            .trim()
            .parse()
            .map_err(|e| CliError::config(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        pts.push(Vec2::new(x, y));
    }
    PlanarCurve::new(pts).map_err(CliError::from)
}

pub fn run(args: BonnesenArgs) -> Result<(), CliError> {
    let curve = read_curve(&args.curve)?;
    let check = bonnesen_check(&curve)?;
    let report = json!({
        "bonnesen": check,
        "meta": meta_block(json!({"curve": args.curve.display().to_string()}), None),
    });
    match &args.out {
        Some(out) => write_json(out, &report)?,
        None => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
    }
    println!(
        "lhs = {:.6}, rhs = {:.6}, holds: {}",
        check.lhs, check.rhs, check.holds
    );
    if !check.holds {
        return Err(CliError::numerical("Bonnesen inequality violated"));
    }
    Ok(())
}
