//! Line-oriented `key = value` scenario configuration.
//!
//! The format is deliberately tiny: blank lines and `#` comments are
//! ignored, `[scenario]` opens a new scenario block, and everything before
//! the first block sets global options. Parsing is strict: unknown keys,
//! duplicate ids, and malformed values are errors that carry line numbers.
//!
//! ```text
//! # global options
//! output_dir = out
//! emit_plots = true
//! seed = 0
//!
//! [scenario]
//! id = sphere-heat
//! theorem = main
//! manifold = sphere
//! dimension = 2
//! flow = heat
//! initial = eigenfunction
//! amplitude = 1.0
//! horizon = 0.5
//! checkpoints = 0.1, 0.25, 0.5
//! grid = 400
//! bins = 1200
//! ```
//!
//! Global keys: `output_dir`, `emit_plots`, `threads`, and default values
//! for `seed`, `bins`, `grid`, and `dt_safety` applied to every scenario
//! that does not set its own.
//!
//! Scenario keys: `id`, `theorem` (required); `manifold` plus its shape
//! parameters (`circumference`, `l1`/`l2`, `dimension`, `length`),
//! `boundary`, `flow` and `p`, `ricci`, `drift_amplitude`, `initial` with
//! `amplitude`/`max_mode`/`value`, `horizon`, `checkpoints`, `grid`
//! (`N` or `NxM`), `bins`, `pair_budget`, `seed`, `n_phi`,
//! `comparison_nodes`, `samples`, `epsilon`, `safety`, `max_empty`,
//! `delta_g`, `dirichlet_slope`, `dirichlet_quad`, `dirichlet_decay`.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use crate::geometry::{Boundary, ManifoldKind};
use crate::verifier::{FlowKind, InitialProfile, ScenarioSpec, TheoremTag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

type ParseResult<T> = std::result::Result<T, ConfigError>;

/// A parsed configuration: global options plus validated scenarios.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    pub emit_plots: bool,
    /// Worker cap; `None` defers to MOCLAB_THREADS or the host.
    pub threads: Option<usize>,
    pub scenarios: Vec<ScenarioSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            output_dir: PathBuf::from("out"),
            emit_plots: true,
            threads: None,
            scenarios: Vec::new(),
        }
    }
}

/// Scenario-level defaults that global lines can override.
#[derive(Debug, Clone, Copy)]
struct Defaults {
    seed: Option<u64>,
    bins: Option<usize>,
    grid: Option<(usize, usize)>,
    safety: Option<f64>,
}

struct Builder {
    spec: ScenarioSpec,
    start_line: usize,
    id_line: usize,
    saw_id: bool,
    saw_theorem: bool,
    saw_flow_p: bool,
    saw_checkpoints: bool,
}

impl Builder {
    fn new(start_line: usize, defaults: &Defaults) -> Self {
        let mut spec = ScenarioSpec::new("", TheoremTag::Main);
        if let Some(seed) = defaults.seed {
            spec.seed = seed;
        }
        if let Some(bins) = defaults.bins {
            spec.bins = bins;
        }
        if let Some((n1, n2)) = defaults.grid {
            spec.n1 = n1;
            spec.n2 = n2;
        }
        if let Some(s) = defaults.safety {
            spec.cfl_safety = s;
        }
        Builder {
            spec,
            start_line,
            id_line: 0,
            saw_id: false,
            saw_theorem: false,
            saw_flow_p: false,
            saw_checkpoints: false,
        }
    }
}

fn parse_f64(line: usize, key: &str, v: &str) -> ParseResult<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| ConfigError::new(line, format!("`{key}` expects a finite number, got `{v}`")))
}

fn parse_u64(line: usize, key: &str, v: &str) -> ParseResult<u64> {
    v.parse::<u64>()
        .map_err(|_| ConfigError::new(line, format!("`{key}` expects a nonnegative integer, got `{v}`")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> ParseResult<usize> {
    v.parse::<usize>()
        .map_err(|_| ConfigError::new(line, format!("`{key}` expects a nonnegative integer, got `{v}`")))
}

fn parse_bool(line: usize, key: &str, v: &str) -> ParseResult<bool> {
    match v {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(ConfigError::new(
            line,
            format!("`{key}` expects true or false, got `{v}`"),
        )),
    }
}

fn parse_grid(line: usize, v: &str) -> ParseResult<(usize, usize)> {
    let parts: Vec<&str> = v.split('x').map(str::trim).collect();
    match parts.as_slice() {
        [n] => {
            let n = parse_usize(line, "grid", n)?;
            Ok((n, n))
        }
        [n1, n2] => Ok((parse_usize(line, "grid", n1)?, parse_usize(line, "grid", n2)?)),
        _ => Err(ConfigError::new(
            line,
            format!("`grid` expects N or NxM, got `{v}`"),
        )),
    }
}

fn parse_theorem(line: usize, v: &str) -> ParseResult<TheoremTag> {
    match v {
        "main" => Ok(TheoremTag::Main),
        "ricci-flow" => Ok(TheoremTag::RicciFlow),
        "height-bound" => Ok(TheoremTag::HeightBound),
        "bakry-emery" => Ok(TheoremTag::BakryEmery),
        "neumann" => Ok(TheoremTag::Neumann),
        "dirichlet" => Ok(TheoremTag::Dirichlet),
        "alpha-admissibility" => Ok(TheoremTag::AlphaAdmissible),
        _ => Err(ConfigError::new(
            line,
            format!(
                "unknown theorem `{v}` (valid: main, ricci-flow, height-bound, \
                 bakry-emery, neumann, dirichlet, alpha-admissibility)"
            ),
        )),
    }
}

fn parse_manifold(line: usize, v: &str) -> ParseResult<ManifoldKind> {
    match v {
        "circle" => Ok(ManifoldKind::Circle {
            circumference: 2.0 * std::f64::consts::PI,
        }),
        "torus" => Ok(ManifoldKind::FlatTorus { l1: 1.0, l2: 1.0 }),
        "sphere" => Ok(ManifoldKind::RoundSphere { dim: 2 }),
        "interval" => Ok(ManifoldKind::Interval { length: 1.0 }),
        "rectangle" => Ok(ManifoldKind::Rectangle { l1: 1.0, l2: 1.0 }),
        _ => Err(ConfigError::new(
            line,
            format!(
                "unknown manifold `{v}` (valid: circle, torus, sphere, interval, rectangle)"
            ),
        )),
    }
}

fn parse_boundary(line: usize, v: &str) -> ParseResult<Boundary> {
    match v {
        "closed" => Ok(Boundary::Closed),
        "neumann" => Ok(Boundary::Neumann),
        "dirichlet" => Ok(Boundary::Dirichlet),
        _ => Err(ConfigError::new(
            line,
            format!("unknown boundary `{v}` (valid: closed, neumann, dirichlet)"),
        )),
    }
}

fn parse_flow(line: usize, v: &str) -> ParseResult<FlowKind> {
    match v {
        "heat" => Ok(FlowKind::Heat),
        "graphical-mcf" => Ok(FlowKind::GraphicalMcf),
        // Default power; a later `p = ...` line refines it.
        "p-laplacian" => Ok(FlowKind::PLaplacian(3.0)),
        _ => Err(ConfigError::new(
            line,
            format!("unknown flow `{v}` (valid: heat, graphical-mcf, p-laplacian)"),
        )),
    }
}

fn parse_checkpoints(line: usize, v: &str) -> ParseResult<Vec<f64>> {
    let cps: Vec<f64> = v
        .split(',')
        .map(|piece| parse_f64(line, "checkpoints", piece.trim()))
        .collect::<ParseResult<_>>()?;
    if cps.is_empty() {
        return Err(ConfigError::new(line, "`checkpoints` expects at least one time"));
    }
    if cps[0] <= 0.0 || cps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ConfigError::new(
            line,
            "`checkpoints` must be positive and strictly increasing",
        ));
    }
    Ok(cps)
}

fn apply_scenario_key(b: &mut Builder, line: usize, key: &str, value: &str) -> ParseResult<()> {
    let spec = &mut b.spec;
    match key {
        "id" => {
            if value.is_empty() {
                return Err(ConfigError::new(line, "`id` must not be empty"));
            }
            // Ids double as output directory names.
            if !value
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.')
            {
                return Err(ConfigError::new(
                    line,
                    "`id` may contain only letters, digits, `-`, `_`, and `.`",
                ));
            }
            spec.id = value.to_string();
            b.saw_id = true;
            b.id_line = line;
        }
        "theorem" => {
            spec.theorem = parse_theorem(line, value)?;
            b.saw_theorem = true;
            if spec.theorem == TheoremTag::RicciFlow {
                spec.ricci = true;
            }
        }
        "manifold" => spec.manifold = parse_manifold(line, value)?,
        "circumference" => match &mut spec.manifold {
            ManifoldKind::Circle { circumference } => {
                *circumference = parse_f64(line, key, value)?;
            }
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`circumference` only applies to manifold = circle",
                ))
            }
        },
        "length" => match &mut spec.manifold {
            ManifoldKind::Interval { length } => *length = parse_f64(line, key, value)?,
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`length` only applies to manifold = interval",
                ))
            }
        },
        "l1" => match &mut spec.manifold {
            ManifoldKind::FlatTorus { l1, .. } | ManifoldKind::Rectangle { l1, .. } => {
                *l1 = parse_f64(line, key, value)?;
            }
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`l1` only applies to manifold = torus or rectangle",
                ))
            }
        },
        "l2" => match &mut spec.manifold {
            ManifoldKind::FlatTorus { l2, .. } | ManifoldKind::Rectangle { l2, .. } => {
                *l2 = parse_f64(line, key, value)?;
            }
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`l2` only applies to manifold = torus or rectangle",
                ))
            }
        },
        "dimension" => match &mut spec.manifold {
            ManifoldKind::RoundSphere { dim } => {
                let d = parse_usize(line, key, value)?;
                if d < 2 {
                    return Err(ConfigError::new(line, "`dimension` must be at least 2"));
                }
                *dim = d as u32;
            }
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`dimension` only applies to manifold = sphere",
                ))
            }
        },
        "boundary" => spec.boundary = parse_boundary(line, value)?,
        "flow" => {
            spec.flow = parse_flow(line, value)?;
            if b.saw_flow_p {
                return Err(ConfigError::new(line, "set `flow` before `p`"));
            }
        }
        "p" => match &mut spec.flow {
            FlowKind::PLaplacian(p) => {
                let val = parse_f64(line, key, value)?;
                if val <= 2.0 {
                    return Err(ConfigError::new(line, "`p` must exceed 2"));
                }
                *p = val;
                b.saw_flow_p = true;
            }
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`p` only applies to flow = p-laplacian",
                ))
            }
        },
        "ricci" => spec.ricci = parse_bool(line, key, value)?,
        "drift_amplitude" => spec.drift_amplitude = parse_f64(line, key, value)?,
        "initial" => {
            spec.initial = match value {
                "eigenfunction" => InitialProfile::Eigenfunction { amplitude: 1.0 },
                "bandlimited" => InitialProfile::Bandlimited {
                    max_mode: 2,
                    amplitude: 1.0,
                },
                "constant" => InitialProfile::Constant { value: 0.0 },
                _ => {
                    return Err(ConfigError::new(
                        line,
                        format!(
                            "unknown initial `{value}` (valid: eigenfunction, bandlimited, \
                             constant)"
                        ),
                    ))
                }
            };
        }
        "amplitude" => {
            let a = parse_f64(line, key, value)?;
            match &mut spec.initial {
                InitialProfile::Eigenfunction { amplitude }
                | InitialProfile::Bandlimited { amplitude, .. } => *amplitude = a,
                InitialProfile::Constant { .. } => {
                    return Err(ConfigError::new(
                        line,
                        "`amplitude` does not apply to initial = constant",
                    ))
                }
            }
        }
        "max_mode" => match &mut spec.initial {
            InitialProfile::Bandlimited { max_mode, .. } => {
                *max_mode = parse_usize(line, key, value)? as u32;
            }
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`max_mode` only applies to initial = bandlimited",
                ))
            }
        },
        "value" => match &mut spec.initial {
            InitialProfile::Constant { value: v } => *v = parse_f64(line, key, value)?,
            _ => {
                return Err(ConfigError::new(
                    line,
                    "`value` only applies to initial = constant",
                ))
            }
        },
        "horizon" => {
            let h = parse_f64(line, key, value)?;
            if h <= 0.0 {
                return Err(ConfigError::new(line, "`horizon` must be positive"));
            }
            spec.horizon = h;
        }
        "checkpoints" => {
            spec.checkpoints = parse_checkpoints(line, value)?;
            b.saw_checkpoints = true;
        }
        "grid" => {
            let (n1, n2) = parse_grid(line, value)?;
            if n1 < 4 || n2 < 4 {
                return Err(ConfigError::new(line, "`grid` axes must be at least 4"));
            }
            spec.n1 = n1;
            spec.n2 = n2;
        }
        "bins" => {
            let bins = parse_usize(line, key, value)?;
            if bins == 0 {
                return Err(ConfigError::new(line, "`bins` must be positive"));
            }
            spec.bins = bins;
        }
        "pair_budget" => spec.pair_budget = parse_u64(line, key, value)?,
        "seed" => spec.seed = parse_u64(line, key, value)?,
        "n_phi" => {
            let n = parse_usize(line, key, value)?;
            if n < 2 {
                return Err(ConfigError::new(line, "`n_phi` must be at least 2"));
            }
            spec.n_phi = n;
        }
        "comparison_nodes" => {
            let n = parse_usize(line, key, value)?;
            if n < 2 {
                return Err(ConfigError::new(line, "`comparison_nodes` must be at least 2"));
            }
            spec.comparison_nodes = n;
        }
        "samples" => spec.samples = parse_u64(line, key, value)?,
        "epsilon" => {
            let e = parse_f64(line, key, value)?;
            if e < 0.0 {
                return Err(ConfigError::new(line, "`epsilon` must be nonnegative"));
            }
            spec.epsilon_lift = e;
        }
        "safety" => {
            let s = parse_f64(line, key, value)?;
            if !(s > 0.0 && s <= 1.0) {
                return Err(ConfigError::new(line, "`safety` must lie in (0, 1]"));
            }
            spec.cfl_safety = s;
        }
        "max_empty" => {
            let m = parse_f64(line, key, value)?;
            if !(0.0..=1.0).contains(&m) {
                return Err(ConfigError::new(line, "`max_empty` must lie in [0, 1]"));
            }
            spec.max_empty_fraction = m;
        }
        "delta_g" => spec.delta_g = parse_f64(line, key, value)?,
        "dirichlet_slope" => spec.dirichlet_slope = parse_f64(line, key, value)?,
        "dirichlet_quad" => spec.dirichlet_quad = parse_f64(line, key, value)?,
        "dirichlet_decay" => spec.dirichlet_decay = parse_f64(line, key, value)?,
        _ => {
            return Err(ConfigError::new(
                line,
                format!("unknown scenario key `{key}`"),
            ))
        }
    }
    Ok(())
}

fn finalize(b: Builder) -> ParseResult<(ScenarioSpec, usize)> {
    if !b.saw_id {
        return Err(ConfigError::new(
            b.start_line,
            "scenario is missing required key `id`",
        ));
    }
    if !b.saw_theorem {
        return Err(ConfigError::new(
            b.start_line,
            format!("scenario `{}` is missing required key `theorem`", b.spec.id),
        ));
    }
    let spec = b.spec;
    if let Some(&last) = spec.checkpoints.last() {
        if last > spec.horizon + 1e-12 {
            return Err(ConfigError::new(
                b.start_line,
                format!(
                    "scenario `{}`: checkpoints exceed the horizon {}",
                    spec.id, spec.horizon
                ),
            ));
        }
    }
    // Boundary coherence so misconfigurations fail here with a line anchor
    // rather than deep in the run.
    let needs = match spec.theorem {
        TheoremTag::Neumann => Some(Boundary::Neumann),
        TheoremTag::Dirichlet => Some(Boundary::Dirichlet),
        _ => None,
    };
    if let Some(want) = needs {
        if spec.boundary != want {
            return Err(ConfigError::new(
                b.start_line,
                format!(
                    "scenario `{}`: theorem requires boundary = {}",
                    spec.id,
                    match want {
                        Boundary::Neumann => "neumann",
                        Boundary::Dirichlet => "dirichlet",
                        Boundary::Closed => "closed",
                    }
                ),
            ));
        }
    }
    if spec.theorem == TheoremTag::RicciFlow && !spec.ricci {
        return Err(ConfigError::new(
            b.start_line,
            format!("scenario `{}`: ricci-flow scenarios need ricci = true", spec.id),
        ));
    }
    Ok((spec, b.id_line))
}

/// Parse a configuration text into validated global options and scenarios.
pub fn parse_config(text: &str) -> ParseResult<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut defaults = Defaults {
        seed: None,
        bins: None,
        grid: None,
        safety: None,
    };
    let mut current: Option<Builder> = None;
    let mut id_lines: HashMap<String, usize> = HashMap::new();

    let flush = |b: Builder, cfg: &mut RunConfig, ids: &mut HashMap<String, usize>| -> ParseResult<()> {
        let (spec, id_line) = finalize(b)?;
        if let Some(&first) = ids.get(&spec.id) {
            return Err(ConfigError::new(
                id_line,
                format!(
                    "duplicate scenario id `{}` (already defined at line {first})",
                    spec.id
                ),
            ));
        }
        ids.insert(spec.id.clone(), id_line);
        cfg.scenarios.push(spec);
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if line != "[scenario]" {
                return Err(ConfigError::new(
                    line_no,
                    format!("unknown section `{line}` (only [scenario] is recognized)"),
                ));
            }
            if let Some(b) = current.take() {
                flush(b, &mut cfg, &mut id_lines)?;
            }
            current = Some(Builder::new(line_no, &defaults));
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => {
                return Err(ConfigError::new(
                    line_no,
                    format!("expected `key = value`, got `{line}`"),
                ))
            }
        };
        if key.is_empty() {
            return Err(ConfigError::new(line_no, "empty key"));
        }
        match &mut current {
            Some(b) => apply_scenario_key(b, line_no, key, value)?,
            None => match key {
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "emit_plots" => cfg.emit_plots = parse_bool(line_no, key, value)?,
                "threads" => {
                    let t = parse_usize(line_no, key, value)?;
                    if t == 0 {
                        return Err(ConfigError::new(line_no, "`threads` must be positive"));
                    }
                    cfg.threads = Some(t);
                }
                "seed" => defaults.seed = Some(parse_u64(line_no, key, value)?),
                "bins" => {
                    let bins = parse_usize(line_no, key, value)?;
                    if bins == 0 {
                        return Err(ConfigError::new(line_no, "`bins` must be positive"));
                    }
                    defaults.bins = Some(bins);
                }
                "grid" => defaults.grid = Some(parse_grid(line_no, value)?),
                "dt_safety" => {
                    let s = parse_f64(line_no, key, value)?;
                    if !(s > 0.0 && s <= 1.0) {
                        return Err(ConfigError::new(line_no, "`dt_safety` must lie in (0, 1]"));
                    }
                    defaults.safety = Some(s);
                }
                _ => {
                    return Err(ConfigError::new(
                        line_no,
                        format!("unknown global key `{key}` (scenario keys go after [scenario])"),
                    ))
                }
            },
        }
    }
    if let Some(b) = current.take() {
        flush(b, &mut cfg, &mut id_lines)?;
    }
    Ok(cfg)
}
