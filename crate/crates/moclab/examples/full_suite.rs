//! Run every bundled scenario through the batch harness, writing
//! report.json, modulus.csv, comparison.csv, and per-checkpoint SVG plots
//! under out/<scenario-id>/. This is the same path the `moclab run`
//! binary takes, driven through the config parser.

fn main() {
    let text = moclab::scenarios::builtin_config_text();
    let config = moclab::parse_config(&text).expect("bundled scenarios always parse");
    println!("running {} scenarios into ./out", config.scenarios.len());
    std::process::exit(moclab::harness::run(&config));
}
