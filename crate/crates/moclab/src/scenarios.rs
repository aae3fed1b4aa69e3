//! Built-in verification scenarios.
//!
//! Each entry is stored as config text and parsed through the ordinary
//! parser, so the registry exercises the same construction path as user
//! configs and doubles as format documentation.

use crate::config::parse_config;
use crate::error::Result;
use crate::verifier::ScenarioSpec;

pub const BUILTIN: [(&str, &str); 10] = [
    (
        "main-sphere-heat",
        "[scenario]\n\
         id = main-sphere-heat\n\
         theorem = main\n\
         manifold = sphere\n\
         dimension = 2\n\
         flow = heat\n\
         initial = eigenfunction\n\
         amplitude = 1.0\n\
         horizon = 0.5\n\
         checkpoints = 0.1, 0.25, 0.5\n\
         grid = 400\n\
         bins = 200\n\
         n_phi = 256\n\
         pair_budget = 30000000\n\
         comparison_nodes = 400\n\
         epsilon = 0.001\n",
    ),
    (
        "main-torus-mcf",
        "[scenario]\n\
         id = main-torus-mcf\n\
         theorem = main\n\
         manifold = torus\n\
         flow = graphical-mcf\n\
         initial = bandlimited\n\
         max_mode = 2\n\
         amplitude = 0.25\n\
         seed = 7\n\
         horizon = 0.1\n\
         checkpoints = 0.02, 0.05, 0.1\n\
         grid = 96x96\n\
         bins = 256\n\
         pair_budget = 4000000\n\
         comparison_nodes = 400\n\
         epsilon = 0.001\n",
    ),
    (
        "main-torus-plap",
        "[scenario]\n\
         id = main-torus-plap\n\
         theorem = main\n\
         manifold = torus\n\
         flow = p-laplacian\n\
         p = 3.0\n\
         initial = bandlimited\n\
         max_mode = 2\n\
         amplitude = 0.25\n\
         seed = 11\n\
         horizon = 0.05\n\
         checkpoints = 0.01, 0.03, 0.05\n\
         grid = 96x96\n\
         bins = 256\n\
         pair_budget = 4000000\n\
         comparison_nodes = 400\n\
         epsilon = 0.001\n",
    ),
    (
        "ricci-sphere",
        "[scenario]\n\
         id = ricci-sphere\n\
         theorem = ricci-flow\n\
         manifold = sphere\n\
         dimension = 2\n\
         flow = heat\n\
         initial = eigenfunction\n\
         amplitude = 1.0\n\
         horizon = 0.25\n\
         checkpoints = 0.05, 0.15, 0.25\n\
         grid = 400\n\
         bins = 600\n\
         n_phi = 256\n\
         pair_budget = 30000000\n\
         comparison_nodes = 400\n\
         epsilon = 0.001\n",
    ),
    (
        "height-torus",
        "[scenario]\n\
         id = height-torus\n\
         theorem = height-bound\n\
         manifold = torus\n\
         flow = heat\n\
         initial = eigenfunction\n\
         amplitude = 0.3\n\
         horizon = 0.5\n\
         checkpoints = 0.1, 0.3, 0.5\n\
         grid = 96x96\n\
         comparison_nodes = 512\n\
         delta_g = 0.05\n\
         samples = 120000\n",
    ),
    (
        "bakry-circle",
        "[scenario]\n\
         id = bakry-circle\n\
         theorem = bakry-emery\n\
         manifold = circle\n\
         flow = heat\n\
         drift_amplitude = 1.0\n\
         initial = eigenfunction\n\
         amplitude = 0.5\n\
         horizon = 1.0\n\
         checkpoints = 0.25, 0.5, 1.0\n\
         grid = 400\n\
         bins = 100\n\
         pair_budget = 10000000\n\
         comparison_nodes = 400\n\
         epsilon = 0.001\n",
    ),
    (
        "neumann-interval",
        "[scenario]\n\
         id = neumann-interval\n\
         theorem = neumann\n\
         manifold = interval\n\
         length = 1.0\n\
         boundary = neumann\n\
         flow = heat\n\
         initial = eigenfunction\n\
         amplitude = 1.0\n\
         horizon = 0.3\n\
         checkpoints = 0.1, 0.3\n\
         grid = 400\n\
         bins = 200\n\
         pair_budget = 10000000\n\
         comparison_nodes = 400\n\
         epsilon = 0.001\n",
    ),
    (
        "neumann-rect-mcf",
        "[scenario]\n\
         id = neumann-rect-mcf\n\
         theorem = neumann\n\
         manifold = rectangle\n\
         boundary = neumann\n\
         flow = graphical-mcf\n\
         initial = eigenfunction\n\
         amplitude = 0.25\n\
         horizon = 0.1\n\
         checkpoints = 0.02, 0.05, 0.1\n\
         grid = 64x64\n\
         bins = 256\n\
         pair_budget = 10000000\n\
         comparison_nodes = 400\n\
         epsilon = 0.001\n",
    ),
    (
        "dirichlet-interval",
        "[scenario]\n\
         id = dirichlet-interval\n\
         theorem = dirichlet\n\
         manifold = interval\n\
         length = 1.0\n\
         boundary = dirichlet\n\
         flow = heat\n\
         initial = eigenfunction\n\
         amplitude = 1.0\n\
         horizon = 0.3\n\
         checkpoints = 0.1, 0.3\n\
         grid = 400\n\
         bins = 200\n\
         pair_budget = 10000000\n\
         dirichlet_slope = 3.141592653589793\n\
         dirichlet_quad = 0.0\n\
         dirichlet_decay = 0.0\n",
    ),
    (
        "alpha-admissibility",
        "[scenario]\n\
         id = alpha-admissibility\n\
         theorem = alpha-admissibility\n\
         samples = 10000\n\
         seed = 0\n",
    ),
];

/// All built-in scenarios in registry order.
pub fn builtin_scenarios() -> Result<Vec<ScenarioSpec>> {
    BUILTIN
        .iter()
        .map(|(_, text)| {
            let cfg = parse_config(text)?;
            Ok(cfg.scenarios.into_iter().next().expect("snippet has one scenario"))
        })
        .collect()
}

/// Look up one built-in scenario by id.
pub fn builtin_scenario(id: &str) -> Result<Option<ScenarioSpec>> {
    for (name, text) in BUILTIN {
        if name == id {
            let cfg = parse_config(text)?;
            return Ok(cfg.scenarios.into_iter().next());
        }
    }
    Ok(None)
}

/// Complete config text running every built-in scenario, as a starting
/// point for custom suites.
pub fn builtin_config_text() -> String {
    let mut out = String::from("# built-in verification suite\noutput_dir = out\n\n");
    for (_, text) in BUILTIN {
        out.push_str(text);
        out.push('\n');
    }
    out
}

/// Human-readable registry table for the `list` subcommand.
pub fn registry_table() -> Result<String> {
    let scenarios = builtin_scenarios()?;
    let mut rows = vec![[
        "id".to_string(),
        "theorem".to_string(),
        "manifold".to_string(),
        "flow".to_string(),
        "horizon".to_string(),
    ]];
    for sc in &scenarios {
        rows.push([
            sc.id.clone(),
            format!("{:?}", sc.theorem),
            format!("{:?}", sc.manifold),
            format!("{:?}", sc.flow),
            sc.horizon.to_string(),
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        for (k, (cell, w)) in row.iter().zip(widths).enumerate() {
            if k + 1 == row.len() {
                out.push_str(cell);
            } else {
                out.push_str(&format!("{cell:<w$}  "));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::TheoremTag;

    #[test]
    fn registry_parses_and_ids_are_unique_and_consistent() {
        let scenarios = builtin_scenarios().unwrap();
        assert_eq!(scenarios.len(), BUILTIN.len());
        for ((id, _), sc) in BUILTIN.iter().zip(&scenarios) {
            assert_eq!(*id, sc.id, "registry key must match parsed id");
        }
        let mut ids: Vec<&str> = scenarios.iter().map(|s| s.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), BUILTIN.len(), "duplicate ids in registry");
    }

    #[test]
    fn registry_covers_every_theorem_family() {
        let scenarios = builtin_scenarios().unwrap();
        for tag in [
            TheoremTag::Main,
            TheoremTag::RicciFlow,
            TheoremTag::HeightBound,
            TheoremTag::BakryEmery,
            TheoremTag::Neumann,
            TheoremTag::Dirichlet,
            TheoremTag::AlphaAdmissible,
        ] {
            assert!(
                scenarios.iter().any(|s| s.theorem == tag),
                "no scenario for {tag:?}"
            );
        }
    }

    #[test]
    fn lookup_finds_known_ids_only() {
        assert!(builtin_scenario("main-sphere-heat").unwrap().is_some());
        assert!(builtin_scenario("no-such-id").unwrap().is_none());
    }

    #[test]
    fn full_suite_config_parses_as_one_document() {
        let cfg = parse_config(&builtin_config_text()).unwrap();
        assert_eq!(cfg.scenarios.len(), BUILTIN.len());
    }

    #[test]
    fn table_lists_every_id() {
        let table = registry_table().unwrap();
        for (id, _) in BUILTIN {
            assert!(table.contains(id));
        }
    }
}
