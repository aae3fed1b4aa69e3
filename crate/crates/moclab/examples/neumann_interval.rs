//! Insulated boundaries: the modulus comparison on an interval and on a
//! rectangle, both with zero-flux walls. On the interval the first Neumann
//! eigenfunction cos(pi x) makes the modulus exactly e^{-pi^2 t} sin(pi s),
//! which the extracted envelope reproduces to a few parts in ten thousand.

use moclab::{builtin_scenario, verify};

fn main() {
    let sc = builtin_scenario("neumann-interval").unwrap().unwrap();
    let report = verify(&sc).expect("scenario runs");
    println!("{} pass={}", report.scenario, report.pass);
    for snap in &report.artifacts {
        let decay = (-std::f64::consts::PI.powi(2) * snap.time).exp();
        let sup = snap
            .bin_centers
            .iter()
            .zip(&snap.w_envelope)
            .zip(&snap.env_nonempty)
            .filter(|&(_, &ne)| ne)
            .map(|((&s, &w), _)| (w - decay * (std::f64::consts::PI * s).sin()).abs())
            .fold(0.0f64, f64::max);
        println!("  t={:<4} sup |envelope - exact modulus| = {:.3e}", snap.time, sup);
    }

    let rect = builtin_scenario("neumann-rect-mcf").unwrap().unwrap();
    let r2 = verify(&rect).expect("scenario runs");
    println!(
        "{} pass={} worst={:+.3e} budget={:.3e}",
        r2.scenario, r2.pass, r2.max_violation, r2.tolerance_budget
    );
}
