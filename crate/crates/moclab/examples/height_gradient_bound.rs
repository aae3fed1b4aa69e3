//! Height-dependent gradient bound on the flat torus. A one-dimensional
//! ramp profile phi(z, t) evolves next to the field; inverting it turns u
//! into Psi(u), and the claim is that Psi(u) stays 1-Lipschitz:
//! Psi(u(y,t)) - Psi(u(x,t)) <= d(x,y) over a large seeded sample of
//! vertex pairs.

use moclab::{builtin_scenario, verify};

fn main() {
    let sc = builtin_scenario("height-torus").unwrap().unwrap();
    let report = verify(&sc).expect("scenario runs");
    println!("{} pass={} (worst excess {:+.3e}, budget {:.3e})",
        report.scenario, report.pass, report.max_violation, report.tolerance_budget);
    for row in &report.checkpoints {
        println!(
            "t={:<4} excess={:+.4e} pairs={} spread={:.3e} range_excess={:.2e}",
            row.time,
            row.max_violation,
            row.extra.get("pairs_sampled").copied().unwrap_or(0.0) as u64,
            row.extra.get("u_spread").copied().unwrap_or(f64::NAN),
            row.extra.get("range_excess").copied().unwrap_or(f64::NAN),
        );
    }
    for note in &report.notes {
        println!("note: {note}");
    }
}
