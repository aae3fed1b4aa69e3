//! End-to-end acceptance checks, one test per shipped guarantee. Every
//! test recomputes its oracle from first principles (closed-form
//! solutions, independent budget arithmetic, byte comparisons) rather
//! than trusting the report it is checking.

use std::f64::consts::PI;
use std::sync::OnceLock;

use moclab::{
    build_initial_field, builtin_scenario, cfl_timestep, evolve, parse_config, verify, Field,
    FlowSpec, Grid, ManifoldModel, Outcome, TheoremTag, VerificationReport,
};

fn sphere_report() -> &'static VerificationReport {
    static REPORT: OnceLock<VerificationReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let sc = builtin_scenario("main-sphere-heat").unwrap().unwrap();
        verify(&sc).expect("sphere scenario runs")
    })
}

fn passed(n: u32, what: &str) {
    println!("criterion {n:02} pass - {what}");
}

/// Relative sup error of the axisymmetric heat solver against
/// e^{-2t} cos(theta) on the unit 2-sphere.
fn sphere_solver_error(cells: usize, t: f64) -> f64 {
    let model = ManifoldModel::round_sphere(2).unwrap();
    let grid = Grid::Theta1D { cells };
    let u0 = Field::from_fn(model, grid, |p| p.x.cos()).unwrap();
    let spec = FlowSpec::heat();
    let fields = evolve(&spec, &u0, t, &[t], 0.5).unwrap();
    let u = &fields[0];
    let decay = (-2.0 * t).exp();
    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..u.values.len() {
        let exact = decay * u.node_point(i).x.cos();
        err = err.max((u.values[i] - exact).abs());
        scale = scale.max(exact.abs());
    }
    err / scale
}

#[test]
fn criterion_01_sphere_heat_solver_matches_the_eigenfunction_decay() {
    let coarse = sphere_solver_error(400, 0.5);
    assert!(
        coarse <= 1e-3,
        "relative error {coarse:.3e} exceeds 1e-3 at 400 cells"
    );
    let fine = sphere_solver_error(800, 0.5);
    assert!(
        fine * 3.0 <= coarse,
        "halving h only improved {coarse:.3e} to {fine:.3e}"
    );
    passed(1, &format!("solver error {coarse:.2e}, refinement ratio {:.2}", coarse / fine));
}

#[test]
fn criterion_02_sphere_envelope_matches_the_exact_modulus() {
    let report = sphere_report();
    let mut worst = 0.0f64;
    for snap in report.artifacts.iter().filter(|s| s.time > 0.0) {
        let decay = (-2.0 * snap.time).exp();
        for j in 0..snap.bin_centers.len() {
            if snap.raw_nonempty[j] {
                let exact = decay * snap.bin_centers[j].sin();
                worst = worst.max((snap.w_envelope[j] - exact).abs());
            }
        }
    }
    assert!(worst <= 5e-3, "envelope deviates {worst:.3e} from exp(-2t) sin s");
    passed(2, &format!("sup envelope error {worst:.2e} across checkpoints"));
}

#[test]
fn criterion_03_epsilon_gap_survives_discretization() {
    let report = sphere_report();
    let eps = 1e-3;
    assert_eq!(report.budget.epsilon_lift, eps);
    assert!(report.pass);
    for row in &report.checkpoints {
        assert!(
            row.max_violation <= -eps / 2.0,
            "t = {}: max violation {:.3e} above -eps/2",
            row.time,
            row.max_violation
        );
    }
    let worst = report.max_violation;
    passed(3, &format!("worst gap {worst:.3e} stays below -eps/2 = {:.1e}", -eps / 2.0));
}

#[test]
fn criterion_04_degenerate_torus_flows_pass_with_audited_budgets() {
    for id in ["main-torus-mcf", "main-torus-plap"] {
        let sc = builtin_scenario(id).unwrap().unwrap();
        let report = verify(&sc).expect("scenario runs");
        assert!(report.pass, "{id} failed its own budget");

        // Rebuild every budget term from the scenario parameters.
        let model = sc.manifold_model().unwrap();
        let spec = sc.flow_spec(&model).unwrap();
        let u0 = build_initial_field(&sc, &model).unwrap();
        let dt = cfl_timestep(&u0, &spec, sc.cfl_safety).unwrap();
        let s_max = model.diameter() / 2.0;
        let (h1, h2) = u0.spacings();
        let h = h1.max(h2).max(s_max / sc.comparison_nodes as f64);
        let delta = s_max / (2.0 * sc.bins as f64);
        let total = 0.5 * sc.epsilon_lift + 0.5 * delta + 0.5 * h + 0.5 * dt;

        let b = &report.budget;
        assert_eq!(b.delta_bin, delta, "{id}: band halfwidth");
        assert_eq!(b.grid_h, h, "{id}: grid spacing");
        assert_eq!(b.dt, dt, "{id}: initial CFL step");
        assert_eq!(b.total, total, "{id}: budget total");
        assert!(report.max_violation <= total, "{id}: violation over budget");
    }
    passed(4, "graphical MCF and 3-Laplacian pass with independently recomputed budgets");
}

#[test]
fn criterion_05_ricci_flow_tracks_the_rescaled_closed_form() {
    let sc = builtin_scenario("ricci-sphere").unwrap().unwrap();
    let report = verify(&sc).expect("scenario runs");
    assert!(report.pass, "rescaled comparison failed");
    let mut worst = 0.0f64;
    for (row, snap) in report.checkpoints.iter().zip(&report.artifacts) {
        let lambda = 1.0 - 2.0 * row.time;
        let reported = row.extra.get("metric_scale").copied().unwrap();
        assert!((reported - lambda).abs() <= 1e-12, "metric scale drifted");
        for j in 0..snap.bin_centers.len() {
            if snap.raw_nonempty[j] {
                let exact = lambda * (snap.bin_centers[j] / lambda.sqrt()).sin();
                worst = worst.max((snap.w_envelope[j] - exact).abs());
            }
        }
    }
    assert!(worst <= 5e-3, "modulus deviates {worst:.3e} from the shrinking-sphere form");
    passed(5, &format!("modulus within {worst:.2e} of (1-2t) sin(s/sqrt(1-2t))"));
}

#[test]
fn criterion_06_height_bound_holds_over_sampled_pairs() {
    let sc = builtin_scenario("height-torus").unwrap().unwrap();
    assert_eq!(sc.delta_g, 0.05);
    let report = verify(&sc).expect("initial hypothesis check passes");
    assert!(report.pass);
    for row in report.checkpoints.iter().filter(|r| r.time > 0.0) {
        let pairs = row.extra.get("pairs_sampled").copied().unwrap();
        assert!(pairs >= 1e5, "t = {}: only {pairs} pairs sampled", row.time);
        assert!(
            row.max_violation <= 1e-3,
            "t = {}: height excess {:.3e}",
            row.time,
            row.max_violation
        );
    }
    passed(6, &format!("worst height excess {:.2e} over >=1e5 pairs per checkpoint", report.max_violation));
}

#[test]
fn criterion_07_drift_comparison_and_zero_potential_collapse() {
    let sc = builtin_scenario("bakry-circle").unwrap().unwrap();
    let report = verify(&sc).expect("scenario runs");
    assert!(report.pass, "drift comparison failed");
    assert!(report.notes.iter().any(|n| n.contains("a = -1")), "Hessian bound is not -1");
    for row in &report.checkpoints {
        let drift = row.extra.get("weighted_mean_drift").copied().unwrap();
        assert!(
            drift <= 1e-6 * row.time + f64::EPSILON,
            "t = {}: weighted mean drifted {drift:.3e}",
            row.time
        );
    }

    // With the potential switched off the drift report must coincide with
    // the undrifted main estimate on the same circle.
    let mut zero = sc.clone();
    zero.id = "bakry-zero-potential".into();
    zero.drift_amplitude = 0.0;
    let mut flat = zero.clone();
    flat.id = "main-flat-twin".into();
    flat.theorem = TheoremTag::Main;
    let rz = verify(&zero).unwrap();
    let rf = verify(&flat).unwrap();
    assert!((rz.max_violation - rf.max_violation).abs() <= 1e-12);
    assert!((rz.tolerance_budget - rf.tolerance_budget).abs() <= 1e-12);
    assert_eq!(rz.checkpoints.len(), rf.checkpoints.len());
    for (a, b) in rz.checkpoints.iter().zip(&rf.checkpoints) {
        assert!((a.max_violation - b.max_violation).abs() <= 1e-12);
    }
    passed(7, "drift bound, conserved weighted mean, and exact zero-potential collapse");
}

#[test]
fn criterion_08_neumann_domains_pass_and_match_the_interval_modulus() {
    let sc = builtin_scenario("neumann-interval").unwrap().unwrap();
    let report = verify(&sc).expect("scenario runs");
    assert!(report.pass);
    let mut worst = 0.0f64;
    for snap in &report.artifacts {
        let decay = (-PI * PI * snap.time).exp();
        for j in 0..snap.bin_centers.len() {
            if snap.raw_nonempty[j] {
                let exact = decay * (PI * snap.bin_centers[j]).sin();
                worst = worst.max((snap.w_envelope[j] - exact).abs());
            }
        }
    }
    assert!(worst <= 5e-3, "interval envelope deviates {worst:.3e}");

    let rect = builtin_scenario("neumann-rect-mcf").unwrap().unwrap();
    let r2 = verify(&rect).expect("scenario runs");
    assert!(r2.pass, "rectangle MCF violated its budget");
    passed(8, &format!("interval modulus within {worst:.2e}; rectangle MCF within budget"));
}

#[test]
fn criterion_09_alpha_admissibility_panel() {
    let sc = builtin_scenario("alpha-admissibility").unwrap().unwrap();
    assert_eq!(sc.samples, 10_000);
    let report = verify(&sc).expect("audit runs");
    assert!(report.pass, "an admissible preset was flagged");
    assert_eq!(report.checkpoints.len(), 4);
    for (k, name) in ["heat", "graphical-mcf"].iter().enumerate() {
        assert!(report.notes[k].contains(name));
        let err = report.checkpoints[k]
            .extra
            .get("parallel_ratio_error")
            .copied()
            .unwrap();
        assert!(err <= 1e-9, "{name}: ratio off by {err:.3e} along v parallel to p");
    }
    for row in &report.checkpoints {
        assert_eq!(row.extra.get("samples").copied().unwrap(), 10_000.0);
    }
    passed(9, "heat, MCF, and p-Laplacian(3,4) admissible; gradient-aligned ratio sharp");
}

#[test]
fn criterion_10_dirichlet_bound_and_hypothesis_rejection() {
    let sc = builtin_scenario("dirichlet-interval").unwrap().unwrap();
    let report = verify(&sc).expect("scenario runs");
    assert!(report.pass);
    for row in &report.checkpoints {
        assert!(
            row.max_violation <= 1e-6,
            "t = {}: slack {:.3e} below -1e-6",
            row.time,
            -row.max_violation
        );
    }

    let mut convex = sc;
    convex.id = "dirichlet-convex".into();
    convex.dirichlet_quad = 0.5;
    let rejected = verify(&convex).expect("audit still completes");
    assert_eq!(rejected.outcome, Outcome::HypothesisNotMet);
    assert_ne!(rejected.outcome, Outcome::Violation);
    assert!(!rejected.pass);
    assert!(rejected.notes.iter().any(|n| n.contains("not concave")));
    passed(10, "pi s bound holds with nonnegative slack; convex profile rejected as hypothesis-not-met");
}

#[test]
fn criterion_11_reruns_are_byte_identical() {
    const CONFIG: &str = "\
        [scenario]\n\
        id = rerun-circle\n\
        theorem = main\n\
        manifold = circle\n\
        flow = heat\n\
        initial = eigenfunction\n\
        amplitude = 1.0\n\
        horizon = 0.05\n\
        checkpoints = 0.02, 0.05\n\
        grid = 100\n\
        bins = 25\n\
        comparison_nodes = 100\n\
        pair_budget = 1000000000\n";
    let run_into = |dir: &std::path::Path| {
        let text = format!("output_dir = {}\n{CONFIG}", dir.display());
        let config = parse_config(&text).unwrap();
        assert_eq!(moclab::harness::run(&config), 0);
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_into(a.path());
    run_into(b.path());
    let dir_a = a.path().join("rerun-circle");
    let dir_b = b.path().join("rerun-circle");
    let mut names: Vec<String> = std::fs::read_dir(&dir_a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.contains(&"report.json".to_string()));
    assert!(names.iter().any(|n| n.ends_with(".svg")));
    for name in &names {
        let bytes_a = std::fs::read(dir_a.join(name)).unwrap();
        let bytes_b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{name} differs between identical runs");
    }
    passed(11, &format!("two runs produced identical bytes for {} artifacts", names.len()));
}
