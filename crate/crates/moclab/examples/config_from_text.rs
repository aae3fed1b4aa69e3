//! Scenarios are plain text. This drives the same parser as `moclab run`
//! on an inline config: two quick circle runs at different grid
//! resolutions, written under out-custom/ with plots.

const CONFIG: &str = "\
output_dir = out-custom
emit_plots = true

[scenario]
id = circle-coarse
theorem = main
manifold = circle
circumference = 6.283185307179586
flow = heat
initial = eigenfunction
amplitude = 1.0
horizon = 0.1
checkpoints = 0.05, 0.1
grid = 100
bins = 25
comparison_nodes = 100
pair_budget = 1000000000

[scenario]
id = circle-fine
theorem = main
manifold = circle
circumference = 6.283185307179586
flow = heat
initial = eigenfunction
amplitude = 1.0
horizon = 0.1
checkpoints = 0.05, 0.1
grid = 200
bins = 50
comparison_nodes = 200
pair_budget = 1000000000
";

fn main() {
    let config = moclab::parse_config(CONFIG).expect("inline config parses");
    std::process::exit(moclab::harness::run(&config));
}
