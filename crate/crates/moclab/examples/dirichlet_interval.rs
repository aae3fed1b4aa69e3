//! Dirichlet boundaries flip the comparison around: instead of evolving a
//! profile, the user supplies a concave increasing phi and the claim
//! u(y,t) - u(x,t) <= 2 phi(d/2) is audited over every vertex pair. The
//! audit also checks phi's own side conditions; a convex profile is
//! reported as a failed hypothesis, not as a violated bound.

use moclab::{builtin_scenario, verify, Outcome};

fn main() {
    let sc = builtin_scenario("dirichlet-interval").unwrap().unwrap();
    let report = verify(&sc).expect("scenario runs");
    println!("{} outcome={:?}", report.scenario, report.outcome);
    for row in &report.checkpoints {
        println!(
            "  t={:<4} worst |du| - 2 phi(d/2) = {:+.3e} at d = {:.4}",
            row.time,
            row.max_violation,
            2.0 * row.argmax_s
        );
    }

    let mut convex = sc;
    convex.id = "dirichlet-convex-profile".into();
    convex.dirichlet_quad = 0.5;
    let rejected = verify(&convex).expect("audit still completes");
    assert_eq!(rejected.outcome, Outcome::HypothesisNotMet);
    println!("convex profile: outcome={:?}", rejected.outcome);
    for note in &rejected.notes {
        println!("  {note}");
    }
}
