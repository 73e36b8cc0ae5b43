use clap::Args;
use mcflow::bonnesen::{bonnesen_check, PlanarCurve};
use mcflow::entropy::{entropy, EntropyOptions};
use mcflow::flow::{mcf_evolve, mcf_evolve_axisym, FlowOptions};
use mcflow::mesh::generate::{generate, profile, ShapeSpec};
use mcflow::shrinker::{lambda_chain_holds, lambda_reference, phi, shrinker_residual};
use mcflow::Vec3;

use crate::CliError;

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite name: lambda-table | entropy-sphere | shrinker | sphere-flow | bonnesen | all
    pub suite: String,
}

struct Summary {
    passed: usize,
    failed: usize,
}

impl Summary {
    fn new() -> Self {
        Summary {
            passed: 0,
            failed: 0,
        }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.passed += 1;
            println!("PASS {name}: {detail}");
        } else {
            self.failed += 1;
            println!("FAIL {name}: {detail}");
        }
    }
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    let mut summary = Summary::new();
    let known = ["lambda-table", "entropy-sphere", "shrinker", "sphere-flow", "bonnesen"];
    let suites: Vec<&str> = match args.suite.as_str() {
        "all" => known.to_vec(),
        s if known.contains(&s) => vec![s],
        other => {
            return Err(CliError::config(format!(
                "unknown suite '{other}' (expected one of {known:?} or 'all')"
            )))
        }
    };
    for suite in suites {
        match suite {
            "lambda-table" => lambda_table_suite(&mut summary),
            "entropy-sphere" => entropy_sphere_suite(&mut summary)?,
            "shrinker" => shrinker_suite(&mut summary)?,
            "sphere-flow" => sphere_flow_suite(&mut summary)?,
            "bonnesen" => bonnesen_suite(&mut summary)?,
            _ => unreachable!(),
        }
    }
    println!("{} passed, {} failed", summary.passed, summary.failed);
    if summary.failed > 0 {
        return Err(CliError::numerical(format!(
            "{} checks failed",
            summary.failed
        )));
    }
    Ok(())
}

fn lambda_table_suite(summary: &mut Summary) {
    let l1: f64 = lambda_reference(1).unwrap();
    let l2: f64 = lambda_reference(2).unwrap();
    let l1_closed = (2.0 * std::f64::consts::PI / std::f64::consts::E).sqrt();
    let l2_closed = 4.0 / std::f64::consts::E;
    summary.check(
        "lambda-1",
        (l1 - l1_closed).abs() < 1e-12,
        format!("{l1:.7} vs sqrt(2 pi / e) = {l1_closed:.7}"),
    );
    summary.check(
        "lambda-2",
        (l2 - l2_closed).abs() < 1e-12,
        format!("{l2:.7} vs 4/e = {l2_closed:.7}"),
    );
    summary.check(
        "lambda-chain",
        lambda_chain_holds::<f64>(),
        format!("2 > {l1:.6} > 1.5 > {l2:.6} > sqrt(2)"),
    );
}

fn entropy_sphere_suite(summary: &mut Summary) -> Result<(), CliError> {
    let mesh = generate(&ShapeSpec::Sphere {
        radius: 1.0,
        center: Vec3::zeros(),
        level: 4,
    })?;
    let result = entropy(&mesh, &EntropyOptions::default())?;
    let expect = 4.0 / std::f64::consts::E;
    summary.check(
        "entropy-value",
        (result.value - expect).abs() < 5e-3,
        format!("{:.6} vs 4/e = {expect:.6}", result.value),
    );
    summary.check(
        "entropy-argmax",
        (result.argmax.scale - 2.0).abs() < 2e-2 && result.argmax.center.norm() < 1e-2,
        format!(
            "scale {:.4}, |center| {:.2e}",
            result.argmax.scale,
            result.argmax.center.norm()
        ),
    );
    Ok(())
}

fn shrinker_suite(summary: &mut Summary) -> Result<(), CliError> {
    let sphere2 = generate(&ShapeSpec::Sphere {
        radius: 2.0,
        center: Vec3::zeros(),
        level: 4,
    })?;
    let report = shrinker_residual(&sphere2)?;
    summary.check(
        "sphere-2-residual",
        report.max_residual < 0.05,
        format!("max residual {:.4}", report.max_residual),
    );
    let p = phi(&sphere2, -1.0)?;
    summary.check(
        "phi-at-minus-one",
        p.max_abs() < 0.05,
        format!("max |phi| {:.4}", p.max_abs()),
    );
    Ok(())
}

fn sphere_flow_suite(summary: &mut Summary) -> Result<(), CliError> {
    // Mesh flow at a coarse level: radius law to 2%.
    let mesh: mcflow::TriangleMesh<f64> = generate(&ShapeSpec::Sphere {
        radius: 2.0,
        center: Vec3::zeros(),
        level: 3,
    })?;
    let traj = mcf_evolve(
        &mesh,
        &FlowOptions {
            horizon: Some(0.5),
            ..Default::default()
        },
    )?;
    let worst = traj
        .diagnostics
        .iter()
        .map(|d| {
            let expect = (4.0 - 4.0 * d.t).sqrt();
            ((d.fit_radius - expect) / expect).abs()
        })
        .fold(0.0f64, f64::max);
    summary.check(
        "mesh-radius-law",
        worst < 0.02,
        format!("worst relative radius error {worst:.2e}"),
    );

    let p: mcflow::flow::AxisymProfile<f64> = profile(&ShapeSpec::Sphere {
        radius: 2.0,
        center: Vec3::zeros(),
        level: 7,
    })?;
    let traj = mcf_evolve_axisym(&p, &FlowOptions::default())?;
    let t_end: f64 = traj.final_time();
    summary.check(
        "axisym-extinction",
        (t_end - 1.0).abs() < 0.01,
        format!("extinction at t = {t_end:.5} (exact 1)"),
    );
    Ok(())
}

fn bonnesen_suite(summary: &mut Summary) -> Result<(), CliError> {
    let circle = bonnesen_check(&PlanarCurve::<f64>::circle(1.0, 4096)?)?;
    summary.check(
        "circle-equality",
        circle.holds && (circle.rhs - circle.lhs).abs() < 1e-4,
        format!("lhs {:.2e}, rhs {:.2e}", circle.lhs, circle.rhs),
    );
    let square = bonnesen_check(&PlanarCurve::<f64>::square(2.0, 64)?)?;
    summary.check(
        "square-holds",
        square.holds,
        format!("lhs {:.4}, rhs {:.4}", square.lhs, square.rhs),
    );
    Ok(())
}
