//! The comparison bound under two degenerate diffusions on the flat torus:
//! graphical mean curvature flow (alpha shrinks along steep gradients) and
//! the parabolic 3-Laplacian (alpha and beta both vanish at critical
//! points). Initial data is a seeded band-limited random field, so every
//! run reproduces the same curves.

use moclab::{builtin_scenario, verify};

fn main() {
    for id in ["main-torus-mcf", "main-torus-plap"] {
        let sc = builtin_scenario(id).unwrap().unwrap();
        let report = verify(&sc).expect("scenario runs");
        println!(
            "{:<16} flow={:<28} pass={} worst={:+.3e} budget={:.3e}",
            id, report.provenance.flow, report.pass, report.max_violation, report.tolerance_budget
        );
        for row in report.checkpoints.iter().filter(|r| r.time > 0.0) {
            let spot = row
                .extra
                .get("viscosity_spot_excess")
                .map(|v| format!("  spot_excess={v:+.2e}"))
                .unwrap_or_default();
            println!(
                "  t={:<5} w-phi={:+.3e} at s={:.4}{}",
                row.time, row.max_violation, row.argmax_s, spot
            );
        }
    }
}
