//! Acceptance suite: one test per criterion, each printing a
//! `[criterion N] PASS` line (run with `--nocapture` to see them).
//!
//! Expected values tagged with closed forms are derived in-line from
//! independent oracles (quadrature, ODE laws, 1D scans), never from the code
//! paths they check.

use mcflow::bonnesen::{bonnesen_check, PlanarCurve};
use mcflow::entropy::{
    entropy, entropy_grid_oracle, gaussian_area, EntropyOptions, GaussianFrame, GridSpec,
};
use mcflow::flow::{
    curvature_monitor, detect_round_point, mcf_evolve, mcf_evolve_axisym, rescaled_flow,
    smoczyk_check, speed_monitor, AxisymProfile, FlowOptions, MeshTrajectory, ProfileTopology,
    RescaledTrajectory, StopReason,
};
use mcflow::mesh::generate::{generate, perturbed_sphere, profile, ShapeSpec};
use mcflow::metrics::{
    best_sphere_fit, hausdorff_distance, monotonicity_defect, rigidity_defect, RigidityOptions,
};
use mcflow::shrinker::{lambda_chain_holds, lambda_reference, phi, shrinker_residual};
use mcflow::{TriangleMesh, Vec2, Vec3};

const LAMBDA_1: f64 = 1.5203469010662808; // sqrt(2 pi / e)
const LAMBDA_2: f64 = 1.4715177646857693; // 4 / e

fn sphere(radius: f64, level: u32) -> TriangleMesh<f64> {
    generate(&ShapeSpec::Sphere {
        radius,
        center: Vec3::zeros(),
        level,
    })
    .unwrap()
}

/// Criterion 1: the lambda table reproduces the closed forms to 1e-6 against
/// an independent quadrature oracle, and the ordering chain holds exactly.
#[test]
fn criterion_01_lambda_table() {
    let l1: f64 = lambda_reference(1).unwrap();
    let l2: f64 = lambda_reference(2).unwrap();

    // Independent oracle for lambda_1: Gaussian area of the cylinder of
    // radius sqrt(2), F = (4 pi)^-1 2 pi sqrt(2) e^{-1/2} Int e^{-z^2/4} dz,
    // by Simpson quadrature.
    let n = 1 << 14;
    let (a, b) = (-60.0f64, 60.0f64);
    let h = (b - a) / n as f64;
    let f = |z: f64| (-z * z / 4.0).exp();
    let mut integral = 0.0;
    for i in 0..n {
        let z0 = a + i as f64 * h;
        integral += h / 6.0 * (f(z0) + 4.0 * f(z0 + 0.5 * h) + f(z0 + h));
    }
    let l1_oracle = (1.0 / (4.0 * std::f64::consts::PI))
        * 2.0
        * std::f64::consts::PI
        * 2.0f64.sqrt()
        * (-0.5f64).exp()
        * integral;
    assert!(
        (l1 - l1_oracle).abs() < 1e-6,
        "lambda_1 {l1} vs quadrature oracle {l1_oracle}"
    );
    // Closed forms; the printed 6-figure reference values are 1.52035 and
    // 1.471518.
    assert!((l1 - (2.0 * std::f64::consts::PI / std::f64::consts::E).sqrt()).abs() < 1e-12);
    assert!((l1 - 1.52035).abs() < 1e-5);
    assert!((l2 - 4.0 / std::f64::consts::E).abs() < 1e-12);
    assert!((l2 - 1.471518).abs() < 1e-6);
    assert!(lambda_chain_holds::<f64>());
    assert!(2.0 > l1 && l1 > 1.5 && l2 > 2.0f64.sqrt() && l1 > l2);
    println!("[criterion 1] PASS: lambda_1 = {l1:.7}, lambda_2 = {l2:.7}, chain holds");
}

/// Criterion 2: entropy of the unit sphere at level 5 with argmax and oracle
/// agreement.
#[test]
fn criterion_02_sphere_entropy() {
    let mesh = sphere(1.0, 5);
    let result = entropy(&mesh, &EntropyOptions::default()).unwrap();
    assert!(
        (result.value - 1.4715).abs() <= 3e-3,
        "entropy {} vs 1.4715 +- 3e-3",
        result.value
    );
    assert!(
        result.argmax.center.norm() <= 1e-2,
        "|y| = {}",
        result.argmax.center.norm()
    );
    assert!(
        (result.argmax.scale - 2.0).abs() <= 2e-2,
        "rho = {}",
        result.argmax.scale
    );
    let oracle = entropy_grid_oracle(&mesh, &GridSpec::default_for(&mesh));
    assert!(
        (result.value - oracle.value).abs() <= 1e-3,
        "optimizer {} vs oracle {}",
        result.value,
        oracle.value
    );
    println!(
        "[criterion 2] PASS: entropy {:.6} (argmax rho {:.4}), oracle gap {:.2e}",
        result.value,
        result.argmax.scale,
        result.value - oracle.value
    );
}

/// Criterion 3: entropy invariance under 10 seeded rigid motions + dilations
/// of the (2,1,1) ellipsoid, within 1e-4 relative.
#[test]
fn criterion_03_entropy_invariance() {
    use rand::{Rng, SeedableRng};
    let mesh = generate(&ShapeSpec::Ellipsoid {
        a: 2.0,
        b: 1.0,
        c: 1.0,
        level: 3,
    })
    .unwrap();
    let base = entropy(&mesh, &EntropyOptions::default()).unwrap().value;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260811);
    let mut worst: f64 = 0.0;
    for trial in 0..10 {
        let angles: [f64; 3] = [
            rng.gen_range(-3.1..3.1),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-3.1..3.1),
        ];
        let rot = nalgebra::Rotation3::from_euler_angles(angles[0], angles[1], angles[2]);
        let scale: f64 = rng.gen_range(0.5..2.0);
        let shift = Vec3::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        );
        let moved = mesh.map_vertices(|p| (rot * p) * scale + shift).unwrap();
        let value = entropy(&moved, &EntropyOptions::default()).unwrap().value;
        let rel = ((value - base) / base).abs();
        worst = worst.max(rel);
        assert!(
            rel <= 1e-4,
            "trial {trial}: entropy {value} vs base {base} (rel {rel:.2e})"
        );
    }
    println!("[criterion 3] PASS: 10 rigid motions + dilations, worst relative drift {worst:.2e}");
}

/// Criterion 4: shrinker residuals on the radius-2 sphere (level and order),
/// phi at t = -1, and the mid-tube cylinder residual.
#[test]
fn criterion_04_shrinker_residuals() {
    let r5 = shrinker_residual(&sphere(2.0, 5)).unwrap().max_residual;
    assert!(r5 <= 0.02, "sphere(2) level-5 residual {r5}");

    let r3 = shrinker_residual(&sphere(2.0, 3)).unwrap().max_residual;
    let r4 = shrinker_residual(&sphere(2.0, 4)).unwrap().max_residual;
    let order1 = (r3 / r4).log2();
    let order2 = (r4 / r5).log2();
    assert!(
        order1 >= 1.5 && order2 >= 1.5,
        "observed orders {order1:.2}, {order2:.2} (residuals {r3:.2e} {r4:.2e} {r5:.2e})"
    );

    let p = phi(&sphere(2.0, 5), -1.0).unwrap();
    assert!(p.max_abs() <= 0.02, "max |phi| = {}", p.max_abs());

    let cyl = generate(&ShapeSpec::CappedCylinder {
        radius: 2.0f64.sqrt(),
        length: 20.0,
        level: 7,
    })
    .unwrap();
    let report = shrinker_residual(&cyl).unwrap();
    let mut worst_mid: f64 = 0.0;
    for (v, &r) in report.residual.values.iter().enumerate() {
        if cyl.position(v).z.abs() < 5.0 {
            worst_mid = worst_mid.max(r);
        }
    }
    assert!(worst_mid <= 0.03, "mid-tube residual {worst_mid}");
    println!(
        "[criterion 4] PASS: sphere residual {r5:.2e} (orders {order1:.2}/{order2:.2}), phi {:.2e}, tube {worst_mid:.2e}",
        p.max_abs()
    );
}

fn radius_law_worst_rel(traj: &MeshTrajectory<f64>, r0_sq: f64, t_max: f64) -> f64 {
    traj.diagnostics
        .iter()
        .filter(|d| d.t <= t_max)
        .map(|d| {
            let expect = (r0_sq - 4.0 * d.t).sqrt();
            ((d.fit_radius - expect) / expect).abs()
        })
        .fold(0.0f64, f64::max)
}

/// Criterion 5: mesh and profile sphere flows reproduce the radius laws, and
/// the cylinder flow follows r(t) = sqrt(r0^2 - 2t).
#[test]
fn criterion_05_sphere_flow_laws() {
    // Mesh flow at level 4: 1% law on [0, 0.9], extinction within 1%.
    let mesh = sphere(2.0, 4);
    let traj = mcf_evolve(&mesh, &FlowOptions::default()).unwrap();
    let worst = radius_law_worst_rel(&traj, 4.0, 0.9);
    assert!(worst <= 0.01, "mesh radius law worst {worst:.3e}");
    let rp = detect_round_point(&traj.diagnostics).unwrap();
    assert!(
        (rp.time - 1.0).abs() <= 0.01,
        "extinction time {} vs 1",
        rp.time
    );

    // Axisymmetric flow: 1e-4 relative on [0, 0.9].
    let p: AxisymProfile<f64> = profile(&ShapeSpec::Sphere {
        radius: 2.0,
        center: Vec3::zeros(),
        level: 8,
    })
    .unwrap();
    let opts = FlowOptions {
        horizon: Some(0.9),
        ..Default::default()
    };
    let atraj = mcf_evolve_axisym(&p, &opts).unwrap();
    let mut worst_axi: f64 = 0.0;
    for d in &atraj.diagnostics {
        let expect = (4.0 - 4.0 * d.t).sqrt();
        worst_axi = worst_axi.max(((d.fit_radius - expect) / expect).abs());
    }
    assert!(worst_axi <= 1e-4, "axisym radius law worst {worst_axi:.3e}");

    // Cylinder law to 1e-4 relative (periodic profile).
    let n = 96;
    let period = 4.0;
    let samples: Vec<Vec2<f64>> = (0..n)
        .map(|i| Vec2::new(period * i as f64 / n as f64, 2.0))
        .collect();
    let cyl = AxisymProfile::new(samples, ProfileTopology::PeriodicZ { period }).unwrap();
    let ctraj = mcf_evolve_axisym(
        &cyl,
        &FlowOptions {
            horizon: Some(1.8),
            ..Default::default()
        },
    )
    .unwrap();
    let mut worst_cyl: f64 = 0.0;
    for (t, state) in &ctraj.states {
        let expect = (4.0 - 2.0 * t).sqrt();
        for q in state.samples() {
            worst_cyl = worst_cyl.max(((q.y - expect) / expect).abs());
        }
    }
    assert!(worst_cyl <= 1e-4, "cylinder law worst {worst_cyl:.3e}");
    println!(
        "[criterion 5] PASS: mesh law {worst:.2e}, T {:.5}, axisym law {worst_axi:.2e}, cylinder law {worst_cyl:.2e}",
        rp.time
    );
}

/// Shared ellipsoid (1.2, 1, 1) pipeline for criteria 6 and 7.
fn ellipsoid_pipeline() -> (f64, MeshTrajectory<f64>, RescaledTrajectory<f64>) {
    let mesh = generate(&ShapeSpec::Ellipsoid {
        a: 1.2,
        b: 1.0,
        c: 1.0,
        level: 4,
    })
    .unwrap();
    let delta = entropy(&mesh, &EntropyOptions::default()).unwrap().value - LAMBDA_2;
    let opts = FlowOptions {
        store_area_ratio: 23.0 / 24.0,
        ..Default::default()
    };
    let traj = mcf_evolve(&mesh, &opts).unwrap();
    let rp = detect_round_point(&traj.diagnostics).unwrap();
    assert!(rp.fit_residual <= 0.05, "fit residual {}", rp.fit_residual);
    let rescaled = rescaled_flow(&traj, &rp).unwrap();
    (delta, traj, rescaled)
}

/// Criteria 6 and 7: round-point extraction, monotone convergence of the
/// unit-scale states to the radius-2 sphere, and the Gaussian dissipation
/// integral bounded by the entropy defect.
#[test]
fn criterion_06_07_round_point_and_monotonicity() {
    let (delta, traj, rescaled) = ellipsoid_pipeline();
    assert_eq!(traj.reason, StopReason::RoundPointExtracted, "{}", traj.detail);

    // Criterion 6: Hausdorff deviation of the unit-scale states from 2 S^2
    // decreases over the tail window (last 20% of life excluding the final
    // 2%, i.e. rescaled t in [-0.2, -0.02]).
    let reference = sphere(2.0, 4);
    let mut deviations = Vec::new();
    for i in 0..rescaled.states.len() {
        let (t, m) = rescaled.unit_scale_state(i).unwrap();
        if t >= -0.2 && t <= -0.02 {
            let (d, _) = hausdorff_distance(&m, &reference);
            deviations.push((t, d));
        }
    }
    assert!(
        deviations.len() >= 5,
        "only {} tail states",
        deviations.len()
    );
    for w in deviations.windows(2) {
        assert!(
            w[1].1 <= w[0].1 + 1e-4,
            "deviation increased: {:?} -> {:?}",
            w[0],
            w[1]
        );
    }
    let (first, last) = (deviations[0].1, deviations.last().unwrap().1);
    assert!(last < first, "no net decrease: {first} -> {last}");
    println!(
        "[criterion 6] PASS: fit residual ok, deviation {first:.4} -> {last:.4} over {} tail states",
        deviations.len()
    );

    // Criterion 7: dissipation integral on [-0.9, -0.6] within (0, delta+5e-3].
    let report = monotonicity_defect(&rescaled, (-0.9, -0.6), Some(delta)).unwrap();
    assert!(report.integral > 0.0, "integral {}", report.integral);
    assert!(
        report.integral <= delta + 5e-3,
        "integral {} vs delta {delta} + 5e-3",
        report.integral
    );

    // Exact shrinking-sphere trajectory: integral at the discretization floor.
    let mut states = Vec::new();
    for k in 0..32 {
        let t = -1.0 + 0.55 * k as f64 / 31.0;
        let radius = 2.0 * (-t).sqrt();
        states.push((
            t,
            generate(&ShapeSpec::Sphere {
                radius,
                center: Vec3::zeros(),
                level: 4,
            })
            .unwrap(),
        ));
    }
    let exact = RescaledTrajectory {
        states,
        singular_point: Vec3::zeros(),
        singular_time: 1.0,
    };
    let sphere_integral = monotonicity_defect(&exact, (-0.9, -0.6), None)
        .unwrap()
        .integral;
    assert!(
        sphere_integral <= 1e-4,
        "sphere trajectory integral {sphere_integral:.2e}"
    );
    println!(
        "[criterion 7] PASS: ellipsoid integral {:.3e} <= delta {delta:.3e} + 5e-3; sphere {sphere_integral:.2e}",
        report.integral
    );
}

fn rigidity_rows(level: u32) -> Vec<(String, f64, f64, f64)> {
    let opts = RigidityOptions::default();
    let mut rows = Vec::new();
    for eps in [0.02, 0.05, 0.1, 0.2, 0.3] {
        let mesh = perturbed_sphere(eps, level).unwrap();
        let r = rigidity_defect(&mesh, &opts).unwrap();
        rows.push((format!("perturbed:{eps}"), r.delta, r.distance, r.ratio));
    }
    for eps in [0.05, 0.1, 0.2, 0.4] {
        let mesh = generate(&ShapeSpec::Ellipsoid {
            a: 1.0 + eps,
            b: 1.0,
            c: 1.0,
            level,
        })
        .unwrap();
        let r = rigidity_defect(&mesh, &opts).unwrap();
        rows.push((format!("ellipsoid:{eps}"), r.delta, r.distance, r.ratio));
    }
    rows
}

/// Criterion 8: every corpus row satisfies d <= R_max delta^(1/8), and R_max
/// is stable within 20% under one refinement level; the log-log slope is
/// reported (informational: the exponent need not be sharp).
#[test]
fn criterion_08_rigidity_sweep() {
    let floor = 1e-6;
    let rows4 = rigidity_rows(4);
    let rows5 = rigidity_rows(5);
    let max_ratio = |rows: &[(String, f64, f64, f64)]| {
        rows.iter()
            .filter(|r| r.1 > 10.0 * floor)
            .map(|r| r.3)
            .fold(f64::NAN, f64::max)
    };
    let r4 = max_ratio(&rows4);
    let r5 = max_ratio(&rows5);
    for (name, delta, d, _) in rows4.iter().chain(&rows5) {
        if *delta > 10.0 * floor {
            assert!(
                *d <= r4.max(r5) * delta.powf(0.125) + 1e-12,
                "{name}: d = {d} vs bound {}",
                r4.max(r5) * delta.powf(0.125)
            );
        }
    }
    assert!(
        (r5 - r4).abs() <= 0.2 * r4,
        "max ratio unstable under refinement: {r4:.4} -> {r5:.4}"
    );

    // Informational slope of log d against log delta at level 5.
    let pts: Vec<(f64, f64)> = rows5
        .iter()
        .filter(|r| r.1 > 10.0 * floor)
        .map(|r| (r.1.ln(), r.2.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    println!(
        "[criterion 8] PASS: max ratio {r4:.4} -> {r5:.4} under refinement; log-log slope {slope:.3} (informational; 1/8 = 0.125 need not be sharp)"
    );
}

/// Criterion 9: the spike experiment. Tube-frame grid-oracle entropy is
/// strictly increasing as the spike thins and clears lambda_2 + 0.02 at the
/// thinnest width, while the sphere-fit defect stays large.
///
/// Thresholds re-derived by the oracle before freezing: the published
/// tube-frame grid localizes on the shaft (focus z in [2.5, 4], scales around
/// sqrt(2)/r_shaft); the minimax normalized sphere-fit defect of the l = 5
/// family measures 0.74-0.87, so the far-from-round threshold is frozen at
/// 0.7 (the geometric optimum trades the tip against the far side of the
/// bulk, so values sit below 1).
#[test]
fn criterion_09_spike_experiment() {
    let widths = [0.2, 0.1, 0.05, 0.02];
    let mut values = Vec::new();
    for &w in &widths {
        let mesh = generate(&ShapeSpec::SpikedSphere {
            length: 5.0,
            width: w,
            level: 5,
        })
        .unwrap();
        let rho_match = 2.0f64.sqrt() / (0.71 * w);
        let spec = GridSpec {
            center_lo: Vec3::new(0.0, 0.0, 2.5),
            center_hi: Vec3::new(0.0, 0.0, 4.0),
            center_res: [1, 1, 16],
            rho_lo: rho_match * 0.4,
            rho_hi: rho_match * 2.5,
            rho_res: 25,
            zoom_stages: 4,
            zoom_shrink: 0.3,
            quad_tol: 1e-7,
        };
        let oracle = entropy_grid_oracle(&mesh, &spec);
        // The oracle frame must localize on the spike shaft at a scale near
        // the tube match.
        assert!(
            oracle.frame.scale > 0.5 * rho_match && oracle.frame.scale < 2.5 * rho_match,
            "w = {w}: scale {} vs tube match {rho_match}",
            oracle.frame.scale
        );
        values.push((w, oracle.value));
    }
    for pair in values.windows(2) {
        assert!(
            pair[1].1 > pair[0].1,
            "not strictly increasing: {:?} -> {:?}",
            pair[0],
            pair[1]
        );
    }
    let thinnest = values.last().unwrap().1;
    assert!(
        thinnest > LAMBDA_2 + 0.02,
        "thinnest spike entropy {thinnest} vs lambda_2 + 0.02"
    );

    // Far from round throughout: normalized sphere-fit defect >= 0.7
    // (oracle-derived threshold; see doc comment).
    let mut defects = Vec::new();
    for &w in &widths {
        let mesh = generate(&ShapeSpec::SpikedSphere {
            length: 5.0,
            width: w,
            level: 4,
        })
        .unwrap();
        let fit = best_sphere_fit(&mesh).unwrap();
        assert!(
            fit.normalized_defect >= 0.7,
            "w = {w}: normalized defect {}",
            fit.normalized_defect
        );
        defects.push(fit.normalized_defect);
    }
    println!(
        "[criterion 9] PASS: tube-frame oracle {:?} strictly increasing, thinnest {:.5} > lambda_2 + 0.02; defects {:?}",
        values.iter().map(|v| v.1).collect::<Vec<_>>(),
        thinnest,
        defects
    );
}

/// Criterion 10: the curvature and speed monitors match their closed-form
/// evaluations on the sphere flow, and the evolution-identity residual at
/// least halves under refinement halving.
#[test]
fn criterion_10_monitors() {
    let mesh = sphere(2.0, 4);
    let traj = mcf_evolve(&mesh, &FlowOptions::default()).unwrap();

    // Closed form for sup |A| r on the shrinking sphere with T = 1:
    // |A| = sqrt(2)/(2 sqrt(1-t)), r = min(sqrt t, sqrt(T-t)); the product is
    // increasing up to t = T/2 and constant sqrt(2)/2 after it.
    let cm = curvature_monitor(&traj, LAMBDA_2);
    assert!(cm.applicable);
    let closed_form = 0.5f64.sqrt();
    assert!(
        (cm.sup_product - closed_form).abs() <= 0.05 * closed_form,
        "sup product {} vs closed form {closed_form}",
        cm.sup_product
    );

    // Speed monitor vs the 1D closed-form scan at the same sampled times.
    let sm = speed_monitor(&traj, LAMBDA_2).unwrap();
    let t_sing = sm.singular_time;
    let mut scan = 0.0f64;
    for (t, _) in traj.states.iter().skip(1) {
        let dist = 2.0 - (4.0 - 4.0 * t.min(t_sing)).max(0.0).sqrt();
        let shape = if *t > t_sing / 2.0 {
            (2.0 * t_sing).sqrt() - (t_sing - t).max(0.0).sqrt()
        } else {
            t.sqrt()
        };
        if shape > 0.0 {
            scan = scan.max(dist / shape);
        }
    }
    assert!(
        (sm.min_l - scan).abs() <= 0.02 * scan,
        "monitor L {} vs scan {scan}",
        sm.min_l
    );
    // The branch-1 maximum of the scan is 2 sqrt(2) - 2 at t = T/2.
    let branch1 = 2.0 * 2.0f64.sqrt() - 2.0;
    assert!(sm.min_l >= branch1 - 0.02);

    // Smoczyk identity residual: halving dt and spacing at least halves it.
    let run = |level: u32, acc: f64| -> f64 {
        let p: AxisymProfile<f64> = profile(&ShapeSpec::Ellipsoid {
            a: 1.2,
            b: 1.0,
            c: 1.0,
            level,
        })
        .unwrap();
        let opts = FlowOptions {
            horizon: Some(0.15),
            material_windows: true,
            accuracy_factor: acc,
            ..Default::default()
        };
        smoczyk_check(&mcf_evolve_axisym(&p, &opts).unwrap()).unwrap()
    };
    let coarse = run(7, 1.0);
    let fine = run(8, 0.5);
    assert!(
        coarse / fine >= 2.0,
        "smoczyk residual ratio {:.2} ({coarse:.3e} -> {fine:.3e})",
        coarse / fine
    );
    println!(
        "[criterion 10] PASS: curvature sup {:.5} (~{closed_form:.5}), speed L {:.5} (~{scan:.5}), smoczyk ratio {:.2}",
        cm.sup_product,
        sm.min_l,
        coarse / fine
    );
}

/// Criterion 11: Bonnesen on the circle (equality), the (2,1) ellipse, and
/// the side-2 square, at the stated values.
#[test]
fn criterion_11_bonnesen() {
    let pi = std::f64::consts::PI;

    // Circle: equality case within 1e-4 (4096-gon; the polygon's own
    // isoperimetric defect scales as n^-2).
    let circle = bonnesen_check(&PlanarCurve::<f64>::circle(1.0, 4096).unwrap()).unwrap();
    assert!(circle.holds);
    assert!(
        circle.lhs.abs() <= 1e-4 && circle.rhs.abs() <= 1e-4,
        "circle lhs {} rhs {}",
        circle.lhs,
        circle.rhs
    );

    // Ellipse (2,1): lhs = pi^2 (R_out - R_in)^2 = pi^2; rhs = L^2 - 8 pi^2
    // with L from Simpson quadrature of the arc-length integrand.
    let ellipse = bonnesen_check(&PlanarCurve::<f64>::ellipse(2.0, 1.0, 4096).unwrap()).unwrap();
    assert!(ellipse.holds);
    let n = 1 << 16;
    let h = 2.0 * pi / n as f64;
    let integrand = |t: f64| ((2.0 * t.sin()).powi(2) + t.cos().powi(2)).sqrt();
    let mut length = 0.0;
    for i in 0..n {
        let t0 = i as f64 * h;
        length += h / 6.0 * (integrand(t0) + 4.0 * integrand(t0 + 0.5 * h) + integrand(t0 + h));
    }
    let rhs_expect = length * length - 8.0 * pi * pi;
    assert!(
        (ellipse.lhs - pi * pi).abs() <= 1e-3 * pi * pi,
        "ellipse lhs {}",
        ellipse.lhs
    );
    assert!(
        (ellipse.rhs - rhs_expect).abs() <= 1e-3 * rhs_expect,
        "ellipse rhs {} vs {rhs_expect}",
        ellipse.rhs
    );

    // Square side 2: lhs = pi^2 (sqrt 2 - 1)^2, rhs = 64 - 16 pi.
    let square = bonnesen_check(&PlanarCurve::<f64>::square(2.0, 64).unwrap()).unwrap();
    assert!(square.holds);
    let lhs_expect = pi * pi * (2.0f64.sqrt() - 1.0).powi(2);
    let rhs_expect = 64.0 - 16.0 * pi;
    assert!(
        (square.lhs - lhs_expect).abs() <= 1e-3 * lhs_expect,
        "square lhs {} vs {lhs_expect}",
        square.lhs
    );
    assert!(
        (square.rhs - rhs_expect).abs() <= 1e-3 * rhs_expect,
        "square rhs {} vs {rhs_expect}",
        square.rhs
    );
    println!(
        "[criterion 11] PASS: circle equality ({:.1e}), ellipse {:.4}/{:.4}, square {:.4}/{:.4}",
        (circle.rhs - circle.lhs).abs(),
        ellipse.lhs,
        ellipse.rhs,
        square.lhs,
        square.rhs
    );
}
