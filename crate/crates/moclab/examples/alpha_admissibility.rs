//! Random audit of the gradient-direction coefficient: for each flow
//! preset, alpha(R, t) must not exceed R^2 v.Av / (v.p)^2 over random
//! radii, times, and test vectors. Along v parallel to p the ratio
//! collapses to alpha itself, which pins the audit's sharpness.

use moclab::{alpha_admissible, builtin_scenario, isotropic_matrix, verify, FlowSpec};

fn main() {
    let sc = builtin_scenario("alpha-admissibility").unwrap().unwrap();
    let report = verify(&sc).expect("audit runs");
    println!("{} pass={}", report.scenario, report.pass);
    for (row, note) in report.checkpoints.iter().zip(&report.notes) {
        println!(
            "  {note}: worst ratio {:.12}, parallel-direction error {:.1e}",
            row.extra.get("worst_ratio").copied().unwrap_or(f64::NAN),
            row.extra.get("parallel_ratio_error").copied().unwrap_or(f64::NAN),
        );
    }

    // An oversized alpha is caught immediately.
    let heat = FlowSpec::heat();
    let matrix = |r: f64, p: [f64; 3], t: f64| isotropic_matrix(&heat, r, p, t);
    let (ok, worst) = alpha_admissible(matrix, |_r, _t| 2.0, 10_000, 1);
    println!("alpha = 2 against the heat matrix: admissible={ok} (worst ratio {worst:.3})");
}
