//! Heat flow on the unit 2-sphere: extract the modulus of continuity of
//! cos(theta) under the flow and verify it stays an epsilon below the
//! evolved one-dimensional comparison profile at every checkpoint.

use moclab::{builtin_scenario, verify};

fn main() {
    let sc = builtin_scenario("main-sphere-heat")
        .expect("registry parses")
        .expect("id exists");
    let report = verify(&sc).expect("scenario runs");

    println!("scenario {} [{:?}] on {}", report.scenario, report.theorem, report.provenance.manifold);
    println!(
        "{:>6}  {:>14}  {:>10}  {:>9}  {:>6}",
        "t", "max w - phi", "argmax s", "bins", "empty"
    );
    for row in &report.checkpoints {
        println!(
            "{:>6}  {:>14.6e}  {:>10.6}  {:>9}  {:>6}",
            row.time, row.max_violation, row.argmax_s, row.nonempty_bins, row.empty_bins
        );
    }
    let b = &report.budget;
    println!(
        "budget {:.3e} = {}*eps {:.1e} + {}*band {:.1e} + {}*h {:.1e} + {}*dt {:.1e}",
        b.total, b.c_eps, b.epsilon_lift, b.c_bin, b.delta_bin, b.c_grid, b.grid_h, b.c_dt, b.dt
    );
    println!("outcome: {:?}", report.outcome);
    std::process::exit(if report.pass { 0 } else { 1 });
}
