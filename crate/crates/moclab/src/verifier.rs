//! Scenario verification.
//!
//! A scenario bundles a manifold, a flow, initial data, and a claimed
//! modulus bound. Verification runs the flow, measures modulus curves at
//! the checkpoints, solves the matching one-dimensional comparison profile,
//! and scores the worst violation of `w <= phi` against an explicit
//! tolerance budget
//!
//! ```text
//! budget = c_eps * epsilon_lift + c_bin * delta_bin + c_grid * h + c_dt * dt
//! ```
//!
//! whose constants are logged in the report; a scenario passes iff
//! `max_violation <= budget` (and, for supplied-profile scenarios, iff the
//! profile actually satisfies the hypotheses it claims). Reports serialize
//! losslessly to JSON and carry enough provenance to reproduce the run.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::comparison::{
    build_supersolution_initial, check_comparison, invert_profile, solve_comparison,
    solve_height_profile, ComparisonParams, DriftTerm,
};
use crate::error::{Error, Result};
use crate::flow::{cfl_timestep, evolve, DriftPotential, Field, FlowSpec, Grid};
use crate::geometry::{Boundary, ManifoldKind, ManifoldModel, Point};
use crate::modulus::{extract_modulus, increasing_envelope, ModulusCurve, ModulusParams};

/// Seed domain separators so the same scenario seed drives independent
/// generators for initial data, pair sampling, and admissibility sampling.
const INIT_SEED_SALT: u64 = 0x5eed_0001_cafe_f00d;
const PAIR_SEED_SALT: u64 = 0x5eed_0002_cafe_f00d;
const ALPHA_SEED_SALT: u64 = 0x5eed_0003_cafe_f00d;

const PAIR_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremTag {
    Main,
    RicciFlow,
    HeightBound,
    BakryEmery,
    Neumann,
    Dirichlet,
    AlphaAdmissible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Pass,
    Violation,
    /// The supplied profile failed its own side conditions; the bound was
    /// never in play, so this is reported separately from a violation.
    HypothesisNotMet,
}

/// The additive tolerance and the measured quantities it was built from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetBreakdown {
    pub epsilon_lift: f64,
    pub delta_bin: f64,
    pub grid_h: f64,
    pub dt: f64,
    pub c_eps: f64,
    pub c_bin: f64,
    pub c_grid: f64,
    pub c_dt: f64,
    pub total: f64,
}

impl BudgetBreakdown {
    pub fn new(
        epsilon_lift: f64,
        delta_bin: f64,
        grid_h: f64,
        dt: f64,
        constants: (f64, f64, f64, f64),
    ) -> Self {
        let (c_eps, c_bin, c_grid, c_dt) = constants;
        let total = c_eps * epsilon_lift + c_bin * delta_bin + c_grid * grid_h + c_dt * dt;
        BudgetBreakdown {
            epsilon_lift,
            delta_bin,
            grid_h,
            dt,
            c_eps,
            c_bin,
            c_grid,
            c_dt,
            total,
        }
    }

    fn fixed(total: f64) -> Self {
        BudgetBreakdown {
            epsilon_lift: 0.0,
            delta_bin: 0.0,
            grid_h: 0.0,
            dt: 0.0,
            c_eps: 0.0,
            c_bin: 0.0,
            c_grid: 0.0,
            c_dt: 0.0,
            total,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointReport {
    pub time: f64,
    /// Worst `w - phi` over populated bins (family-specific scale; see the
    /// verifier for the exact expression).
    pub max_violation: f64,
    /// Abscissa where the worst gap sits.
    pub argmax_s: f64,
    pub nonempty_bins: usize,
    pub empty_bins: usize,
    pub extra: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub pair_budget: u64,
    pub bins: usize,
    pub n_phi: usize,
    pub samples: u64,
    pub comparison_nodes: usize,
    pub grid: String,
    pub flow: String,
    pub manifold: String,
}

/// Raw and envelope modulus values per bin, plus the comparison profile at
/// the bin centers, at one instant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSnapshot {
    pub time: f64,
    pub bin_centers: Vec<f64>,
    pub w_raw: Vec<f64>,
    pub raw_nonempty: Vec<bool>,
    pub w_envelope: Vec<f64>,
    pub env_nonempty: Vec<bool>,
    /// Empty when the scenario has no comparison profile.
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub theorem: TheoremTag,
    pub outcome: Outcome,
    pub pass: bool,
    pub max_violation: f64,
    pub tolerance_budget: f64,
    pub budget: BudgetBreakdown,
    pub checkpoints: Vec<CheckpointReport>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
    pub artifacts: Vec<CurveSnapshot>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowKind {
    Heat,
    GraphicalMcf,
    PLaplacian(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialProfile {
    /// Lowest compatible eigenfunction scaled to the given amplitude.
    Eigenfunction { amplitude: f64 },
    /// Seeded random combination of modes up to `max_mode`, normalized so
    /// the sup norm equals `amplitude`.
    Bandlimited { max_mode: u32, amplitude: f64 },
    Constant { value: f64 },
}

/// Plain-data description of one verification run.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub id: String,
    pub theorem: TheoremTag,
    pub manifold: ManifoldKind,
    pub boundary: Boundary,
    pub flow: FlowKind,
    pub ricci: bool,
    /// Cosine drift potential amplitude; attached only for drift scenarios.
    pub drift_amplitude: f64,
    pub initial: InitialProfile,
    pub horizon: f64,
    pub checkpoints: Vec<f64>,
    pub n1: usize,
    pub n2: usize,
    pub comparison_nodes: usize,
    pub bins: usize,
    pub n_phi: usize,
    pub pair_budget: u64,
    pub seed: u64,
    pub epsilon_lift: f64,
    pub cfl_safety: f64,
    pub max_empty_fraction: f64,
    /// Height-bound gradient headroom: the certificate slope is
    /// `(1 + delta_g) * max |grad u0|`.
    pub delta_g: f64,
    /// Sampled pairs (height bound) or sampled triples (admissibility).
    pub samples: u64,
    /// Supplied Dirichlet profile `(slope s + quad s^2) exp(-decay t)`.
    pub dirichlet_slope: f64,
    pub dirichlet_quad: f64,
    pub dirichlet_decay: f64,
}

impl ScenarioSpec {
    /// Baseline spec; fields are public and meant to be adjusted.
    pub fn new(id: &str, theorem: TheoremTag) -> Self {
        ScenarioSpec {
            id: id.to_string(),
            theorem,
            manifold: ManifoldKind::Circle {
                circumference: 2.0 * std::f64::consts::PI,
            },
            boundary: Boundary::Closed,
            flow: FlowKind::Heat,
            ricci: false,
            drift_amplitude: 0.0,
            initial: InitialProfile::Eigenfunction { amplitude: 1.0 },
            horizon: 0.1,
            checkpoints: vec![0.1],
            n1: 128,
            n2: 128,
            comparison_nodes: 400,
            bins: 128,
            n_phi: 256,
            pair_budget: 2_000_000,
            seed: 0,
            epsilon_lift: 1e-3,
            cfl_safety: 0.5,
            max_empty_fraction: 0.5,
            delta_g: 0.05,
            samples: 100_000,
            dirichlet_slope: std::f64::consts::PI,
            dirichlet_quad: 0.0,
            dirichlet_decay: 0.0,
        }
    }

    pub fn manifold_model(&self) -> Result<ManifoldModel> {
        match self.manifold {
            ManifoldKind::Circle { circumference } => ManifoldModel::circle(circumference),
            ManifoldKind::FlatTorus { l1, l2 } => ManifoldModel::flat_torus(l1, l2),
            ManifoldKind::RoundSphere { dim } => ManifoldModel::round_sphere(dim),
            ManifoldKind::Interval { length } => {
                ManifoldModel::interval(length, self.boundary)
            }
            ManifoldKind::Rectangle { l1, l2 } => {
                ManifoldModel::rectangle(l1, l2, self.boundary)
            }
        }
    }

    pub fn grid(&self) -> Grid {
        match self.manifold {
            ManifoldKind::RoundSphere { .. } => Grid::Theta1D { cells: self.n1 },
            ManifoldKind::Circle { .. } => Grid::Periodic1D { nodes: self.n1 },
            ManifoldKind::FlatTorus { .. } => Grid::Periodic2D {
                nx: self.n1,
                ny: self.n2,
            },
            ManifoldKind::Interval { .. } => Grid::Line1D { n: self.n1 },
            ManifoldKind::Rectangle { .. } => Grid::Rect2D {
                nx: self.n1,
                ny: self.n2,
            },
        }
    }

    pub fn flow_spec(&self, model: &ManifoldModel) -> Result<FlowSpec> {
        let mut spec = match self.flow {
            FlowKind::Heat => FlowSpec::heat(),
            FlowKind::GraphicalMcf => FlowSpec::graphical_mcf(),
            FlowKind::PLaplacian(p) => FlowSpec::p_laplacian(p)?,
        };
        if self.theorem == TheoremTag::BakryEmery {
            // Attached even at amplitude zero so the zero-potential run
            // exercises the same weighted stencil.
            spec = spec.with_drift(DriftPotential::cosine(model, self.drift_amplitude)?);
        }
        if self.ricci {
            spec = spec.with_ricci_flow();
        }
        Ok(spec)
    }

    fn modulus_params(&self) -> ModulusParams {
        ModulusParams {
            bins: self.bins,
            pair_budget: self.pair_budget,
            seed: self.seed,
            n_phi: self.n_phi,
            max_empty_fraction: self.max_empty_fraction,
            band_halfwidth: None,
        }
    }

    fn provenance(&self, model: &ManifoldModel, spec: &FlowSpec) -> Provenance {
        Provenance {
            seed: self.seed,
            pair_budget: self.pair_budget,
            bins: self.bins,
            n_phi: self.n_phi,
            samples: self.samples,
            comparison_nodes: self.comparison_nodes,
            grid: format!("{:?}", self.grid()),
            flow: spec.describe(),
            manifold: format!("{:?} ({:?})", model.kind(), model.boundary()),
        }
    }
}

/// Initial data for a scenario: the named eigenfunction of the model, a
/// seeded band-limited sum, or a constant.
pub fn build_initial_field(sc: &ScenarioSpec, model: &ManifoldModel) -> Result<Field> {
    let grid = sc.grid();
    match sc.initial {
        InitialProfile::Constant { value } => Field::from_fn(*model, grid, |_| value),
        InitialProfile::Eigenfunction { amplitude } => {
            let f = eigenfunction(model)?;
            Field::from_fn(*model, grid, move |p| amplitude * f(p))
        }
        InitialProfile::Bandlimited {
            max_mode,
            amplitude,
        } => {
            if max_mode == 0 {
                return Err(Error::InvalidParameter(
                    "band-limited initial data needs max_mode >= 1".into(),
                ));
            }
            let f = bandlimited_sum(model, max_mode, sc.seed ^ INIT_SEED_SALT)?;
            let sup = (0..grid.node_count(model))
                .map(|i| f(grid.node_point(model, i)).abs())
                .fold(0.0f64, f64::max);
            if sup == 0.0 {
                return Err(Error::InvalidParameter(
                    "band-limited initial data vanished identically".into(),
                ));
            }
            let scale = amplitude / sup;
            Field::from_fn(*model, grid, move |p| scale * f(p))
        }
    }
}

type PointFn = Box<dyn Fn(Point) -> f64 + Send + Sync>;

fn eigenfunction(model: &ManifoldModel) -> Result<PointFn> {
    use std::f64::consts::PI;
    let b = model.boundary();
    Ok(match model.kind() {
        ManifoldKind::RoundSphere { .. } => Box::new(|p| p.x.cos()),
        ManifoldKind::Circle { circumference } => {
            let k = 2.0 * PI / circumference;
            Box::new(move |p| (k * p.x).sin())
        }
        ManifoldKind::FlatTorus { l1, .. } => {
            let k = 2.0 * PI / l1;
            Box::new(move |p| (k * p.x).sin())
        }
        ManifoldKind::Interval { length } => {
            let k = PI / length;
            match b {
                Boundary::Dirichlet => Box::new(move |p| (k * p.x).sin()),
                _ => Box::new(move |p| (k * p.x).cos()),
            }
        }
        ManifoldKind::Rectangle { l1, l2 } => {
            let (kx, ky) = (PI / l1, PI / l2);
            match b {
                Boundary::Dirichlet => {
                    Box::new(move |p| (kx * p.x).sin() * (ky * p.y).sin())
                }
                _ => Box::new(move |p| (kx * p.x).cos() * (ky * p.y).cos()),
            }
        }
    })
}

fn bandlimited_sum(model: &ManifoldModel, max_mode: u32, seed: u64) -> Result<PointFn> {
    use std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coef = |k: u32| -> f64 {
        // Mild spectral decay keeps high modes from dominating.
        rng.gen_range(-1.0..1.0) / k.max(1) as f64
    };
    let b = model.boundary();
    Ok(match model.kind() {
        ManifoldKind::RoundSphere { .. } => {
            // cos(k theta) is a polynomial in cos(theta), hence smooth on
            // the sphere through both poles.
            let c: Vec<f64> = (1..=max_mode).map(&mut coef).collect();
            Box::new(move |p| {
                c.iter()
                    .enumerate()
                    .map(|(i, &ck)| ck * ((i as f64 + 1.0) * p.x).cos())
                    .sum()
            })
        }
        ManifoldKind::Circle { circumference } => {
            let base = 2.0 * PI / circumference;
            let c: Vec<(f64, f64)> = (1..=max_mode).map(|k| (coef(k), coef(k))).collect();
            Box::new(move |p| {
                c.iter()
                    .enumerate()
                    .map(|(i, &(a, bb))| {
                        let ang = (i as f64 + 1.0) * base * p.x;
                        a * ang.cos() + bb * ang.sin()
                    })
                    .sum()
            })
        }
        ManifoldKind::FlatTorus { l1, l2 } => {
            let (bx, by) = (2.0 * PI / l1, 2.0 * PI / l2);
            let mut modes = Vec::new();
            for kx in 0..=max_mode {
                for ky in 0..=max_mode {
                    if kx == 0 && ky == 0 {
                        continue;
                    }
                    let k = kx.max(ky);
                    modes.push((kx as f64, ky as f64, coef(k), coef(k)));
                }
            }
            Box::new(move |p| {
                modes
                    .iter()
                    .map(|&(kx, ky, a, bb)| {
                        let ang = kx * bx * p.x + ky * by * p.y;
                        a * ang.cos() + bb * ang.sin()
                    })
                    .sum()
            })
        }
        ManifoldKind::Interval { length } => {
            let base = PI / length;
            let c: Vec<f64> = (1..=max_mode).map(&mut coef).collect();
            match b {
                Boundary::Dirichlet => Box::new(move |p| {
                    c.iter()
                        .enumerate()
                        .map(|(i, &ck)| ck * ((i as f64 + 1.0) * base * p.x).sin())
                        .sum()
                }),
                _ => Box::new(move |p| {
                    c.iter()
                        .enumerate()
                        .map(|(i, &ck)| ck * ((i as f64 + 1.0) * base * p.x).cos())
                        .sum()
                }),
            }
        }
        ManifoldKind::Rectangle { l1, l2 } => {
            let (bx, by) = (PI / l1, PI / l2);
            let dirichlet = b == Boundary::Dirichlet;
            let lo = if dirichlet { 1 } else { 0 };
            let mut modes = Vec::new();
            for kx in lo..=max_mode {
                for ky in lo..=max_mode {
                    if kx == 0 && ky == 0 {
                        continue;
                    }
                    modes.push((kx as f64, ky as f64, coef(kx.max(ky))));
                }
            }
            Box::new(move |p| {
                modes
                    .iter()
                    .map(|&(kx, ky, a)| {
                        if dirichlet {
                            a * (kx * bx * p.x).sin() * (ky * by * p.y).sin()
                        } else {
                            a * (kx * bx * p.x).cos() * (ky * by * p.y).cos()
                        }
                    })
                    .sum()
            })
        }
    })
}

fn budget_constants(theorem: TheoremTag) -> (f64, f64, f64, f64) {
    match theorem {
        TheoremTag::Main
        | TheoremTag::RicciFlow
        | TheoremTag::BakryEmery
        | TheoremTag::Neumann => (0.5, 0.5, 0.5, 0.5),
        TheoremTag::HeightBound | TheoremTag::Dirichlet => (0.0, 0.0, 0.5, 0.5),
        TheoremTag::AlphaAdmissible => (0.0, 0.0, 0.0, 0.0),
    }
}

/// Everything the comparison-based families share: evolve, bin, compare.
struct ComparisonRun {
    rows: Vec<CheckpointReport>,
    artifacts: Vec<CurveSnapshot>,
    max_violation: f64,
    budget: BudgetBreakdown,
    provenance: Provenance,
    /// Envelope curves per snapshot, for family-specific extras.
    envelopes: Vec<ModulusCurve>,
    raws: Vec<ModulusCurve>,
    fields: Vec<Field>,
}

fn snapshot_times(sc: &ScenarioSpec) -> Result<Vec<f64>> {
    if sc.checkpoints.is_empty() {
        return Err(Error::InvalidParameter(
            "a scenario needs at least one checkpoint".into(),
        ));
    }
    if sc
        .checkpoints
        .windows(2)
        .any(|w| w[0] >= w[1])
        || sc.checkpoints[0] <= 0.0
        || *sc.checkpoints.last().unwrap() > sc.horizon + 1e-12
    {
        return Err(Error::InvalidParameter(
            "checkpoints must be strictly increasing, positive, and within the horizon"
                .into(),
        ));
    }
    let mut times = Vec::with_capacity(sc.checkpoints.len() + 1);
    times.push(0.0);
    times.extend_from_slice(&sc.checkpoints);
    Ok(times)
}

fn run_comparison_family(
    sc: &ScenarioSpec,
    drift: DriftTerm,
    s_max: f64,
) -> Result<ComparisonRun> {
    let model = sc.manifold_model()?;
    let u0 = build_initial_field(sc, &model)?;
    let spec = sc.flow_spec(&model)?;
    let times = snapshot_times(sc)?;
    let dt0 = cfl_timestep(&u0, &spec, sc.cfl_safety)?;
    let fields = evolve(&spec, &u0, sc.horizon, &times, sc.cfl_safety)?;

    let mparams = sc.modulus_params();
    let mut raws = Vec::with_capacity(fields.len());
    let mut envelopes = Vec::with_capacity(fields.len());
    for f in &fields {
        let raw = extract_modulus(f, &mparams)?;
        envelopes.push(increasing_envelope(&raw));
        raws.push(raw);
    }

    let cparams = ComparisonParams {
        nodes: sc.comparison_nodes,
        safety: sc.cfl_safety,
        epsilon_lift: sc.epsilon_lift,
        dt_max: spec.dt_max,
    };
    let h_cmp = s_max / sc.comparison_nodes as f64;
    let s_nodes: Vec<f64> = (0..sc.comparison_nodes)
        .map(|i| (i as f64 + 0.5) * h_cmp)
        .collect();
    let phi0 = build_supersolution_initial(&envelopes[0], sc.epsilon_lift, &s_nodes)?;
    let profile = solve_comparison(&spec, drift, s_max, phi0, &times, &cparams)?;

    let mut rows = Vec::with_capacity(fields.len());
    let mut artifacts = Vec::with_capacity(fields.len());
    let mut worst = f64::NEG_INFINITY;
    for (k, env) in envelopes.iter().enumerate() {
        let check = check_comparison(env, &profile)?;
        worst = worst.max(check.max_violation);
        rows.push(CheckpointReport {
            time: times[k],
            max_violation: check.max_violation,
            argmax_s: check.argmax_s,
            nonempty_bins: check.nonempty_bins,
            empty_bins: check.empty_bins,
            extra: BTreeMap::new(),
        });
        artifacts.push(CurveSnapshot {
            time: times[k],
            bin_centers: env.bin_centers.clone(),
            w_raw: raws[k].values.clone(),
            raw_nonempty: raws[k].nonempty.clone(),
            w_envelope: env.values.clone(),
            env_nonempty: env.nonempty.clone(),
            phi: check.phi_at_bins,
        });
    }

    let (h1, h2) = fields[0].spacings();
    let grid_h = h1.max(h2).max(h_cmp);
    let budget = BudgetBreakdown::new(
        sc.epsilon_lift,
        envelopes[0].bin_halfwidth,
        grid_h,
        dt0,
        budget_constants(sc.theorem),
    );
    let provenance = sc.provenance(&model, &spec);
    Ok(ComparisonRun {
        rows,
        artifacts,
        max_violation: worst,
        budget,
        provenance,
        envelopes,
        raws,
        fields,
    })
}

fn finish_report(
    sc: &ScenarioSpec,
    run: ComparisonRun,
    notes: Vec<String>,
) -> VerificationReport {
    let pass = run.max_violation <= run.budget.total;
    VerificationReport {
        scenario: sc.id.clone(),
        theorem: sc.theorem,
        outcome: if pass { Outcome::Pass } else { Outcome::Violation },
        pass,
        max_violation: run.max_violation,
        tolerance_budget: run.budget.total,
        budget: run.budget,
        checkpoints: run.rows,
        notes,
        provenance: run.provenance,
        artifacts: run.artifacts,
    }
}

/// Largest excess of the one-dimensional operator over the observed time
/// derivative at interior local maxima of the raw curve, between two
/// consecutive snapshots. Diagnostic only; `None` when no interior maximum
/// has populated neighbors in both snapshots.
fn viscosity_spot_worst(
    prev: &ModulusCurve,
    cur: &ModulusCurve,
    spec: &FlowSpec,
    drift_at: &dyn Fn(f64) -> f64,
) -> Option<f64> {
    let dt = cur.time - prev.time;
    if dt <= 0.0 {
        return None;
    }
    let h = cur.bin_centers[1] - cur.bin_centers[0];
    let mut worst: Option<f64> = None;
    for j in 1..cur.bins() - 1 {
        let occupied = |c: &ModulusCurve| c.nonempty[j - 1] && c.nonempty[j] && c.nonempty[j + 1];
        if !occupied(cur) || !occupied(prev) {
            continue;
        }
        if cur.values[j] < cur.values[j - 1] || cur.values[j] < cur.values[j + 1] {
            continue;
        }
        let w_t = (cur.values[j] - prev.values[j]) / dt;
        let w_s = (cur.values[j + 1] - cur.values[j - 1]) / (2.0 * h);
        let w_ss = (cur.values[j + 1] - 2.0 * cur.values[j] + cur.values[j - 1]) / (h * h);
        let q = w_s.abs();
        let t = cur.time;
        let rhs = spec.alpha(q, cur.values[j], t) * w_ss
            + drift_at(cur.bin_centers[j]) * spec.beta(q, t) * w_s;
        let excess = w_t - rhs;
        worst = Some(worst.map_or(excess, |w: f64| w.max(excess)));
    }
    worst
}

pub fn verify_main_estimate(sc: &ScenarioSpec) -> Result<VerificationReport> {
    if sc.theorem != TheoremTag::Main {
        return Err(Error::Scenario("scenario is not a main-estimate run".into()));
    }
    let model = sc.manifold_model()?;
    if !model.is_closed() {
        return Err(Error::Scenario(
            "the main estimate runs on closed manifolds; use the Neumann or Dirichlet \
             variants on domains"
                .into(),
        ));
    }
    let kappa = model.ricci_lower();
    let n = model.dimension();
    let s_max = model.diameter() / 2.0;
    let mut run = run_comparison_family(sc, DriftTerm::CKappa { kappa, n }, s_max)?;

    // Spot-check the one-dimensional inequality at interior curve maxima.
    let spec = sc.flow_spec(&model)?;
    let h_cmp = s_max / sc.comparison_nodes as f64;
    let pole_tol = 0.45 * h_cmp;
    let drift_at = move |s: f64| {
        crate::geometry::drift_coefficient(kappa, n, s, pole_tol).unwrap_or(0.0)
    };
    for k in 1..run.raws.len() {
        if let Some(excess) =
            viscosity_spot_worst(&run.raws[k - 1], &run.raws[k], &spec, &drift_at)
        {
            run.rows[k]
                .extra
                .insert("viscosity_spot_excess".into(), excess);
        }
    }
    Ok(finish_report(sc, run, Vec::new()))
}

pub fn verify_neumann(sc: &ScenarioSpec) -> Result<VerificationReport> {
    if sc.theorem != TheoremTag::Neumann {
        return Err(Error::Scenario("scenario is not a Neumann run".into()));
    }
    let model = sc.manifold_model()?;
    if model.boundary() != Boundary::Neumann {
        return Err(Error::Scenario(
            "the Neumann variant needs a Neumann domain".into(),
        ));
    }
    let s_max = model.diameter() / 2.0;
    let run = run_comparison_family(sc, DriftTerm::NoDrift, s_max)?;
    Ok(finish_report(sc, run, Vec::new()))
}

pub fn verify_ricci_flow(sc: &ScenarioSpec) -> Result<VerificationReport> {
    if sc.theorem != TheoremTag::RicciFlow || !sc.ricci {
        return Err(Error::Scenario("scenario is not a Ricci-flow run".into()));
    }
    let model = sc.manifold_model()?;
    let n = match model.kind() {
        ManifoldKind::RoundSphere { dim } => dim,
        _ => {
            return Err(Error::Scenario(
                "the Ricci-flow variant runs on the round sphere".into(),
            ))
        }
    };
    if sc.flow != FlowKind::Heat {
        return Err(Error::Scenario(
            "the Ricci-flow comparison is stated for the heat flow".into(),
        ));
    }
    // The comparison lives on the fixed unit-sphere coordinate; modulus
    // curves live in the shrinking metric and the check maps between them.
    let s_max = std::f64::consts::PI / 2.0;
    let mut run = run_comparison_family(sc, DriftTerm::RicciRescaled { n }, s_max)?;

    // Exact-solution telemetry: for cos(theta) initial data the modulus is
    // lambda(t) sin(s / sqrt(lambda(t))) in the evolving metric.
    let exact_ready = matches!(sc.initial, InitialProfile::Eigenfunction { amplitude } if amplitude == 1.0);
    for (k, env) in run.envelopes.iter().enumerate() {
        let lambda = run.fields[k].metric_scale;
        run.rows[k].extra.insert("metric_scale".into(), lambda);
        if exact_ready {
            // Only bins with attained pairs carry evidence: past the
            // shrunken diameter the envelope extends flat while the closed
            // form keeps moving, and comparing there would be noise.
            let sup_err = env
                .bin_centers
                .iter()
                .zip(&env.values)
                .zip(&run.raws[k].nonempty)
                .filter(|&(_, &ne)| ne)
                .map(|((&s, &v), _)| (v - lambda * (s / lambda.sqrt()).sin()).abs())
                .fold(0.0f64, f64::max);
            run.rows[k].extra.insert("formula_sup_error".into(), sup_err);
        }
    }
    Ok(finish_report(sc, run, Vec::new()))
}

pub fn verify_bakry_emery(sc: &ScenarioSpec) -> Result<VerificationReport> {
    if sc.theorem != TheoremTag::BakryEmery {
        return Err(Error::Scenario("scenario is not a drift run".into()));
    }
    let model = sc.manifold_model()?;
    if !matches!(model.kind(), ManifoldKind::Circle { .. } | ManifoldKind::FlatTorus { .. }) {
        return Err(Error::Scenario(
            "drift potentials are supported on the circle and flat torus".into(),
        ));
    }
    let spec = sc.flow_spec(&model)?;
    let drift = spec
        .drift
        .as_ref()
        .expect("drift scenarios always carry a potential");

    // Comparison drift rate: the smallest Hessian eigenvalue of f over the
    // grid (for the cosine potential this is -amplitude k^2 exactly at the
    // node x = 0).
    let grid = sc.grid();
    let a = (0..grid.node_count(&model))
        .map(|i| {
            let h = (drift.hess)(grid.node_point(&model, i));
            // Symmetric 2x2 smallest eigenvalue.
            let half_tr = (h[0][0] + h[1][1]) / 2.0;
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            half_tr - (half_tr * half_tr - det).max(0.0).sqrt()
        })
        .fold(f64::INFINITY, f64::min);

    let s_max = model.diameter() / 2.0;
    let mut run = run_comparison_family(sc, DriftTerm::BakryEmery { a }, s_max)?;

    // The weighted mean integral(u exp(-f)) / integral(exp(-f)) is conserved
    // by the flow; its drift is a discretization health check.
    let weights: Vec<f64> = (0..grid.node_count(&model))
        .map(|i| (-(drift.f)(grid.node_point(&model, i))).exp())
        .collect();
    let wsum: f64 = weights.iter().sum();
    let mean_of = |f: &Field| -> f64 {
        f.values
            .iter()
            .zip(&weights)
            .map(|(u, w)| u * w)
            .sum::<f64>()
            / wsum
    };
    let mean0 = mean_of(&run.fields[0]);
    for (k, f) in run.fields.iter().enumerate() {
        let mean = mean_of(f);
        run.rows[k].extra.insert("weighted_mean".into(), mean);
        run.rows[k]
            .extra
            .insert("weighted_mean_drift".into(), (mean - mean0).abs());
    }
    let notes = vec![format!("hessian lower bound a = {a}")];
    Ok(finish_report(sc, run, notes))
}

/// Deterministic max-reduce over sampled node pairs. The same seed always
/// visits the same pairs, so successive checkpoints see identical pair sets.
fn fold_sampled_pairs<F>(nodes: usize, samples: u64, seed: u64, mut excess: F) -> (f64, f64)
where
    F: FnMut(usize, usize) -> Option<(f64, f64)>,
{
    let mut worst = f64::NEG_INFINITY;
    let mut arg = 0.0;
    let chunks = samples.div_ceil(PAIR_CHUNK);
    for chunk in 0..chunks {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let draws = PAIR_CHUNK.min(samples - chunk * PAIR_CHUNK);
        for _ in 0..draws {
            let i = rng.gen_range(0..nodes);
            let j = rng.gen_range(0..nodes);
            if i == j {
                continue;
            }
            if let Some((e, d)) = excess(i, j) {
                if e > worst || (e == worst && d < arg) {
                    worst = e;
                    arg = d;
                }
            }
        }
    }
    (worst, arg)
}

pub fn verify_height_bound(sc: &ScenarioSpec) -> Result<VerificationReport> {
    if sc.theorem != TheoremTag::HeightBound {
        return Err(Error::Scenario("scenario is not a height-bound run".into()));
    }
    let model = sc.manifold_model()?;
    if !model.is_closed() && model.boundary() != Boundary::Neumann {
        return Err(Error::Scenario(
            "the height bound needs a closed manifold or a Neumann domain".into(),
        ));
    }
    let u0 = build_initial_field(sc, &model)?;
    let spec = sc.flow_spec(&model)?;
    let times = snapshot_times(sc)?;
    let dt0 = cfl_timestep(&u0, &spec, sc.cfl_safety)?;

    // Slope certificate: G = (1 + delta_g) * max gradient, steep enough
    // that the ramp u_min + G z spans the initial range over the diameter.
    let spread = u0.max_value() - u0.min_value();
    let g = (1.0 + sc.delta_g) * u0.max_gradient();
    let diameter = model.diameter();
    if g * diameter < spread {
        return Err(Error::InitialHypothesis(format!(
            "height slope G = {g} cannot span the initial range {spread} over the \
             diameter {diameter}; raise delta_g"
        )));
    }
    let segments = sc.comparison_nodes.max(2);
    let hz = diameter / segments as f64;
    let u_min0 = u0.min_value();
    let initial: Vec<f64> = (0..=segments)
        .map(|i| u_min0 + g * (i as f64 * hz))
        .collect();
    let profile = solve_height_profile(&spec, diameter, initial, &times, sc.cfl_safety)?;

    // Geodesic distances between sampled grid nodes.
    let grid = u0.grid;
    let node_pt: Vec<Point> = (0..grid.node_count(&model))
        .map(|i| grid.node_point(&model, i))
        .collect();
    let distance = |i: usize, j: usize| -> f64 {
        model
            .geodesic_distance(node_pt[i], node_pt[j])
            .expect("grid nodes are valid points")
    };

    // Initial pairwise check is a hypothesis: the ramp inverse is
    // (u - u_min) / G, so the check reduces to a Lipschitz bound.
    let (init_excess, init_arg) = fold_sampled_pairs(
        node_pt.len(),
        sc.samples,
        sc.seed ^ PAIR_SEED_SALT,
        |i, j| {
            let d = distance(i, j);
            let e = (u0.values[j] - u0.values[i]).abs() / g - d;
            Some((e, d))
        },
    );
    if init_excess > 1e-12 {
        return Err(Error::InitialHypothesis(format!(
            "initial height inequality fails by {init_excess} at distance {init_arg}; \
             raise delta_g"
        )));
    }

    let fields = evolve(&spec, &u0, sc.horizon, &times, sc.cfl_safety)?;
    let mut rows = Vec::with_capacity(fields.len());
    let mut worst_overall = f64::NEG_INFINITY;
    for (k, f) in fields.iter().enumerate() {
        let phi_t = &profile.values_by_time[k];
        let (excess, arg) = fold_sampled_pairs(
            node_pt.len(),
            sc.samples,
            sc.seed ^ PAIR_SEED_SALT,
            |i, j| {
                let d = distance(i, j);
                let zi = invert_profile(phi_t, hz, f.values[i]);
                let zj = invert_profile(phi_t, hz, f.values[j]);
                Some(((zj - zi).abs() - d, d))
            },
        );
        worst_overall = worst_overall.max(excess);
        let mut extra = BTreeMap::new();
        extra.insert("pairs_sampled".into(), sc.samples as f64);
        extra.insert(
            "u_spread".into(),
            f.max_value() - f.min_value(),
        );
        // Positive when the field escapes the profile's range (the
        // clamped inverse would then hide mass); must stay at zero.
        let range_excess = (f.max_value() - phi_t[segments])
            .max(phi_t[0] - f.min_value())
            .max(0.0);
        extra.insert("range_excess".into(), range_excess);
        rows.push(CheckpointReport {
            time: times[k],
            max_violation: excess,
            argmax_s: arg,
            nonempty_bins: 0,
            empty_bins: 0,
            extra,
        });
    }

    let (h1, h2) = fields[0].spacings();
    let budget = BudgetBreakdown::new(
        0.0,
        0.0,
        h1.max(h2).max(hz),
        dt0,
        budget_constants(sc.theorem),
    );
    let pass = worst_overall <= budget.total;
    let notes = vec![format!("slope certificate G = {g}, diameter {diameter}")];
    Ok(VerificationReport {
        scenario: sc.id.clone(),
        theorem: sc.theorem,
        outcome: if pass { Outcome::Pass } else { Outcome::Violation },
        pass,
        max_violation: worst_overall,
        tolerance_budget: budget.total,
        budget,
        checkpoints: rows,
        notes,
        provenance: sc.provenance(&model, &spec),
        artifacts: Vec::new(),
    })
}

pub fn verify_dirichlet(sc: &ScenarioSpec) -> Result<VerificationReport> {
    if sc.theorem != TheoremTag::Dirichlet {
        return Err(Error::Scenario("scenario is not a Dirichlet run".into()));
    }
    let model = sc.manifold_model()?;
    if model.boundary() != Boundary::Dirichlet {
        return Err(Error::Scenario(
            "the Dirichlet variant needs a Dirichlet domain".into(),
        ));
    }
    let u0 = build_initial_field(sc, &model)?;
    let spec = sc.flow_spec(&model)?;
    let times = snapshot_times(sc)?;
    let dt0 = cfl_timestep(&u0, &spec, sc.cfl_safety)?;
    let fields = evolve(&spec, &u0, sc.horizon, &times, sc.cfl_safety)?;

    let (slope, quad, decay) = (sc.dirichlet_slope, sc.dirichlet_quad, sc.dirichlet_decay);
    let phi = move |s: f64, t: f64| (slope * s + quad * s * s) * (-decay * t).exp();

    // Hypothesis audit on a sampling lattice. Failures downgrade the outcome
    // instead of counting as violations: a bad profile proves nothing.
    let mut notes = Vec::new();
    let s_max = model.diameter() / 2.0;
    let m_samp = 256usize;
    let tol = 1e-9;
    let mut hypothesis_ok = true;

    // Initial domination of the measured modulus.
    let raw0 = extract_modulus(&fields[0], &sc.modulus_params())?;
    let env0 = increasing_envelope(&raw0);
    for j in 0..env0.bins() {
        if env0.nonempty[j] && phi(env0.bin_centers[j], 0.0) < env0.values[j] - tol {
            hypothesis_ok = false;
            notes.push(format!(
                "profile starts below the measured modulus at s = {}",
                env0.bin_centers[j]
            ));
            break;
        }
    }
    // Shape and supersolution property, sampled over the space-time lattice.
    'shape: for &t in &times {
        let dt_fd = 1e-6;
        for i in 0..m_samp {
            let s = (i as f64 + 0.5) * s_max / m_samp as f64;
            let hs = s_max / m_samp as f64;
            let (lo, mid, hi) = (phi(s - hs, t), phi(s, t), phi(s + hs, t));
            if hi < mid - tol {
                hypothesis_ok = false;
                notes.push(format!("profile is not increasing near s = {s}, t = {t}"));
                break 'shape;
            }
            if lo + hi - 2.0 * mid > tol {
                hypothesis_ok = false;
                notes.push(format!("profile is not concave near s = {s}, t = {t}"));
                break 'shape;
            }
            let phi_t = (phi(s, t + dt_fd) - phi(s, t)) / dt_fd;
            let phi_s = (hi - lo) / (2.0 * hs);
            let phi_ss = (lo + hi - 2.0 * mid) / (hs * hs);
            let needed = spec.alpha(phi_s.abs(), mid, t) * phi_ss;
            if phi_t < needed - 1e-6 {
                hypothesis_ok = false;
                notes.push(format!(
                    "profile is not a supersolution near s = {s}, t = {t} \
                     (phi_t = {phi_t}, alpha phi'' = {needed})"
                ));
                break 'shape;
            }
        }
    }

    // Pairwise bound u(y) - u(x) <= 2 phi(d/2, t) over every vertex pair.
    let grid = u0.grid;
    let node_pt: Vec<Point> = (0..grid.node_count(&model))
        .map(|i| grid.node_point(&model, i))
        .collect();
    let mut rows = Vec::with_capacity(fields.len());
    let mut worst_overall = f64::NEG_INFINITY;
    for (k, f) in fields.iter().enumerate() {
        let t = times[k];
        let mut worst = f64::NEG_INFINITY;
        let mut arg = 0.0;
        for i in 0..node_pt.len() {
            for j in (i + 1)..node_pt.len() {
                let d = model
                    .geodesic_distance(node_pt[i], node_pt[j])
                    .expect("grid nodes are valid");
                if d == 0.0 {
                    continue;
                }
                let gap = (f.values[j] - f.values[i]).abs() - 2.0 * phi(d / 2.0, t);
                if gap > worst {
                    worst = gap;
                    arg = d / 2.0;
                }
            }
        }
        worst_overall = worst_overall.max(worst);
        rows.push(CheckpointReport {
            time: t,
            max_violation: worst,
            argmax_s: arg,
            nonempty_bins: 0,
            empty_bins: 0,
            extra: BTreeMap::new(),
        });
    }

    let (h1, h2) = fields[0].spacings();
    let budget = BudgetBreakdown::new(
        0.0,
        0.0,
        h1.max(h2),
        dt0,
        budget_constants(sc.theorem),
    );
    let bound_holds = worst_overall <= budget.total;
    let (outcome, pass) = if !hypothesis_ok {
        (Outcome::HypothesisNotMet, false)
    } else if bound_holds {
        (Outcome::Pass, true)
    } else {
        (Outcome::Violation, false)
    };
    Ok(VerificationReport {
        scenario: sc.id.clone(),
        theorem: sc.theorem,
        outcome,
        pass,
        max_violation: worst_overall,
        tolerance_budget: budget.total,
        budget,
        checkpoints: rows,
        notes,
        provenance: sc.provenance(&model, &spec),
        artifacts: Vec::new(),
    })
}

/// Diffusion matrix of an isotropic flow at gradient `p_hat * r`:
/// `beta I + (alpha - beta) p_hat p_hat^T`.
pub fn isotropic_matrix(spec: &FlowSpec, r: f64, p_hat: [f64; 3], t: f64) -> [[f64; 3]; 3] {
    let alpha = spec.alpha(r, 0.0, t);
    let beta = spec.beta(r, t);
    let mut a = [[0.0; 3]; 3];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = if i == j { beta } else { 0.0 };
            *v += (alpha - beta) * p_hat[i] * p_hat[j];
        }
    }
    a
}

/// `R^2 v^T A v / (v . p)^2` with `R = |p|`; the right side of the
/// admissibility inequality for `alpha`.
pub fn admissibility_ratio(a: &[[f64; 3]; 3], v: [f64; 3], p: [f64; 3]) -> f64 {
    let dot = |x: [f64; 3], y: [f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let av = [
        dot(a[0], v),
        dot(a[1], v),
        dot(a[2], v),
    ];
    let vav = dot(v, av);
    let r2 = dot(p, p);
    let vp = dot(v, p);
    r2 * vav / (vp * vp)
}

/// Sampled check that `alpha(R, t) <= R^2 v^T A(R, p_hat, t) v / (v . p)^2`
/// up to `1e-12`, over seeded random `(R, p, v, t)` draws. Returns the pass
/// flag and the smallest ratio of right side to `alpha` seen.
pub fn alpha_admissible<M, A>(matrix: M, alpha: A, samples: u64, seed: u64) -> (bool, f64)
where
    M: Fn(f64, [f64; 3], f64) -> [[f64; 3]; 3],
    A: Fn(f64, f64) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ALPHA_SEED_SALT);
    let unit = |rng: &mut ChaCha8Rng| -> [f64; 3] {
        loop {
            let v: [f64; 3] = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-3 && n <= 1.0 {
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    };
    let mut pass = true;
    let mut worst_ratio = f64::INFINITY;
    let mut drawn = 0u64;
    while drawn < samples {
        let r = 10f64.powf(rng.gen_range(-2.0..1.0));
        let t = rng.gen_range(0.0..1.0);
        let p_hat = unit(&mut rng);
        let v = unit(&mut rng);
        let vp = v[0] * p_hat[0] + v[1] * p_hat[1] + v[2] * p_hat[2];
        if vp == 0.0 {
            continue;
        }
        drawn += 1;
        let a = matrix(r, p_hat, t);
        let p = [p_hat[0] * r, p_hat[1] * r, p_hat[2] * r];
        let rhs = admissibility_ratio(&a, v, p);
        let al = alpha(r, t);
        if al > rhs + 1e-12 {
            pass = false;
        }
        if al > 0.0 && rhs / al < worst_ratio {
            worst_ratio = rhs / al;
        }
    }
    (pass, worst_ratio)
}

pub fn verify_alpha_admissible(sc: &ScenarioSpec) -> Result<VerificationReport> {
    if sc.theorem != TheoremTag::AlphaAdmissible {
        return Err(Error::Scenario(
            "scenario is not an admissibility run".into(),
        ));
    }
    if sc.samples == 0 {
        return Err(Error::InvalidParameter(
            "admissibility needs a positive sample count".into(),
        ));
    }
    let presets: Vec<(String, FlowSpec)> = vec![
        ("heat".into(), FlowSpec::heat()),
        ("graphical-mcf".into(), FlowSpec::graphical_mcf()),
        ("p-laplacian(3)".into(), FlowSpec::p_laplacian(3.0)?),
        ("p-laplacian(4)".into(), FlowSpec::p_laplacian(4.0)?),
    ];
    let mut rows = Vec::with_capacity(presets.len());
    let mut notes = Vec::with_capacity(presets.len());
    let mut all_pass = true;
    let mut worst_gap = f64::NEG_INFINITY;
    for (k, (name, spec)) in presets.iter().enumerate() {
        let (pass, worst_ratio) = alpha_admissible(
            |r, p_hat, t| isotropic_matrix(spec, r, p_hat, t),
            |r, t| spec.alpha(r, 0.0, t),
            sc.samples,
            sc.seed + k as u64,
        );
        all_pass &= pass;
        worst_gap = worst_gap.max(1.0 - worst_ratio);

        // The ratio is minimized along the gradient direction, where it
        // must collapse to exactly 1.
        let mut parallel_err = 0.0f64;
        for &r in &[0.1, 1.0, 5.0] {
            for &t in &[0.0, 0.5] {
                let p_hat = [
                    1.0 / f64::sqrt(3.0),
                    1.0 / f64::sqrt(3.0),
                    -1.0 / f64::sqrt(3.0),
                ];
                let a = isotropic_matrix(spec, r, p_hat, t);
                let p = [p_hat[0] * r, p_hat[1] * r, p_hat[2] * r];
                let ratio = admissibility_ratio(&a, p_hat, p) / spec.alpha(r, 0.0, t);
                parallel_err = parallel_err.max((ratio - 1.0).abs());
            }
        }
        let mut extra = BTreeMap::new();
        extra.insert("worst_ratio".into(), worst_ratio);
        extra.insert("parallel_ratio_error".into(), parallel_err);
        extra.insert("samples".into(), sc.samples as f64);
        rows.push(CheckpointReport {
            time: k as f64,
            max_violation: 1.0 - worst_ratio,
            argmax_s: 0.0,
            nonempty_bins: 0,
            empty_bins: 0,
            extra,
        });
        notes.push(format!("row {k}: {name}"));
    }
    let budget = BudgetBreakdown::fixed(1e-12);
    let pass = all_pass && worst_gap <= budget.total;
    let model = sc.manifold_model()?;
    Ok(VerificationReport {
        scenario: sc.id.clone(),
        theorem: sc.theorem,
        outcome: if pass { Outcome::Pass } else { Outcome::Violation },
        pass,
        max_violation: worst_gap,
        tolerance_budget: budget.total,
        budget,
        checkpoints: rows,
        notes,
        provenance: sc.provenance(&model, &FlowSpec::heat()),
        artifacts: Vec::new(),
    })
}

/// Route a scenario to its verifier.
pub fn verify(sc: &ScenarioSpec) -> Result<VerificationReport> {
    match sc.theorem {
        TheoremTag::Main => verify_main_estimate(sc),
        TheoremTag::RicciFlow => verify_ricci_flow(sc),
        TheoremTag::HeightBound => verify_height_bound(sc),
        TheoremTag::BakryEmery => verify_bakry_emery(sc),
        TheoremTag::Neumann => verify_neumann(sc),
        TheoremTag::Dirichlet => verify_dirichlet(sc),
        TheoremTag::AlphaAdmissible => verify_alpha_admissible(sc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circle_main(id: &str) -> ScenarioSpec {
        let mut sc = ScenarioSpec::new(id, TheoremTag::Main);
        sc.manifold = ManifoldKind::Circle {
            circumference: 2.0 * std::f64::consts::PI,
        };
        sc.n1 = 100;
        sc.bins = 25;
        sc.comparison_nodes = 100;
        sc.horizon = 0.05;
        sc.checkpoints = vec![0.02, 0.05];
        sc.pair_budget = 1 << 40;
        sc
    }

    #[test]
    fn budget_total_is_the_weighted_sum() {
        let b = BudgetBreakdown::new(1e-3, 2e-4, 5e-3, 1e-5, (0.5, 0.5, 0.5, 0.5));
        let expect = 0.5 * 1e-3 + 0.5 * 2e-4 + 0.5 * 5e-3 + 0.5 * 1e-5;
        assert_eq!(b.total, expect);
    }

    #[test]
    fn circle_heat_scenario_passes() {
        let sc = circle_main("test-circle");
        let report = verify(&sc).unwrap();
        assert!(report.pass, "mv = {}", report.max_violation);
        assert_eq!(report.outcome, Outcome::Pass);
        // Row zero is the initial time with margin at least the lift.
        assert_eq!(report.checkpoints[0].time, 0.0);
        assert!(report.checkpoints[0].max_violation <= -sc.epsilon_lift / 2.0);
        assert_eq!(report.checkpoints.len(), 3);
        assert_eq!(report.artifacts.len(), 3);
        // Report survives a JSON round trip losslessly.
        let text = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.max_violation, report.max_violation);
        assert_eq!(back.budget.total, report.budget.total);
        assert_eq!(back.checkpoints[2].max_violation, report.checkpoints[2].max_violation);
    }

    #[test]
    fn eigenfunction_amplitudes_are_exact() {
        let sphere = ManifoldModel::round_sphere(2).unwrap();
        let mut sc = ScenarioSpec::new("t", TheoremTag::Main);
        sc.manifold = sphere.kind();
        sc.initial = InitialProfile::Eigenfunction { amplitude: 0.7 };
        sc.n1 = 16;
        let f = build_initial_field(&sc, &sphere).unwrap();
        for (i, &v) in f.values.iter().enumerate() {
            let theta = f.node_point(i).x;
            assert_eq!(v, 0.7 * theta.cos());
        }
    }

    #[test]
    fn bandlimited_fields_are_seeded_and_normalized() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let mut sc = ScenarioSpec::new("t", TheoremTag::Main);
        sc.manifold = m.kind();
        sc.n1 = 32;
        sc.n2 = 32;
        sc.initial = InitialProfile::Bandlimited {
            max_mode: 2,
            amplitude: 0.25,
        };
        let a = build_initial_field(&sc, &m).unwrap();
        let b = build_initial_field(&sc, &m).unwrap();
        assert_eq!(a.values, b.values);
        sc.seed = 1;
        let c = build_initial_field(&sc, &m).unwrap();
        assert_ne!(a.values, c.values);
        let sup = a.values.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((sup - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn dirichlet_bandlimited_initial_data_pins_the_boundary() {
        let m = ManifoldModel::interval(1.0, Boundary::Dirichlet).unwrap();
        let mut sc = ScenarioSpec::new("t", TheoremTag::Dirichlet);
        sc.manifold = m.kind();
        sc.boundary = Boundary::Dirichlet;
        sc.n1 = 64;
        sc.initial = InitialProfile::Bandlimited {
            max_mode: 3,
            amplitude: 0.5,
        };
        let f = build_initial_field(&sc, &m).unwrap();
        assert_eq!(f.values[0], 0.0);
        assert_eq!(*f.values.last().unwrap(), 0.0);
    }

    #[test]
    fn admissibility_holds_for_presets_and_collapses_along_gradients() {
        for spec in [
            FlowSpec::heat(),
            FlowSpec::graphical_mcf(),
            FlowSpec::p_laplacian(3.0).unwrap(),
            FlowSpec::p_laplacian(4.0).unwrap(),
        ] {
            let (pass, worst) = alpha_admissible(
                |r, p_hat, t| isotropic_matrix(&spec, r, p_hat, t),
                |r, t| spec.alpha(r, 0.0, t),
                3000,
                7,
            );
            assert!(pass);
            assert!(worst >= 1.0 - 1e-12, "worst ratio {worst}");
            for &r in &[0.05, 1.0, 9.0] {
                let p_hat = [0.6, -0.8, 0.0];
                let a = isotropic_matrix(&spec, r, p_hat, 0.3);
                let p = [p_hat[0] * r, p_hat[1] * r, p_hat[2] * r];
                let ratio = admissibility_ratio(&a, p_hat, p) / spec.alpha(r, 0.0, 0.3);
                assert!((ratio - 1.0).abs() <= 1e-9, "ratio {ratio}");
            }
        }
    }

    #[test]
    fn inadmissible_alpha_is_caught() {
        let spec = FlowSpec::heat();
        let (pass, worst) = alpha_admissible(
            |r, p_hat, t| isotropic_matrix(&spec, r, p_hat, t),
            |_, _| 2.0,
            1000,
            3,
        );
        assert!(!pass);
        assert!(worst < 1.0);
    }

    #[test]
    fn dirichlet_convex_profile_is_hypothesis_not_met() {
        let mut sc = ScenarioSpec::new("t-dirichlet", TheoremTag::Dirichlet);
        sc.manifold = ManifoldKind::Interval { length: 1.0 };
        sc.boundary = Boundary::Dirichlet;
        sc.n1 = 64;
        sc.bins = 16;
        sc.horizon = 0.02;
        sc.checkpoints = vec![0.02];
        sc.pair_budget = 1 << 40;
        sc.dirichlet_quad = 0.5;
        let report = verify(&sc).unwrap();
        assert_eq!(report.outcome, Outcome::HypothesisNotMet);
        assert!(!report.pass);
        assert!(report.notes.iter().any(|n| n.contains("not concave")));
    }

    #[test]
    fn height_bound_small_torus_passes_and_tight_slope_errors() {
        let mut sc = ScenarioSpec::new("t-height", TheoremTag::HeightBound);
        sc.manifold = ManifoldKind::FlatTorus { l1: 1.0, l2: 1.0 };
        sc.n1 = 32;
        sc.n2 = 32;
        sc.initial = InitialProfile::Eigenfunction { amplitude: 0.3 };
        sc.horizon = 0.3;
        sc.checkpoints = vec![0.1, 0.3];
        sc.comparison_nodes = 128;
        sc.samples = 20_000;
        let report = verify(&sc).unwrap();
        assert!(report.pass, "excess = {}", report.max_violation);
        // The field decays twice as fast as the ramp profile, so the
        // evolved inequality holds with strict margin at these times.
        assert!(report.max_violation < 0.0);
        assert!(report
            .checkpoints
            .iter()
            .all(|r| r.extra["range_excess"].is_finite()));

        sc.delta_g = -0.99;
        assert!(matches!(
            verify(&sc),
            Err(Error::InitialHypothesis(_))
        ));
    }

    #[test]
    fn zero_potential_drift_report_matches_flat_main_report() {
        let main = circle_main("t-main");
        let main_report = verify(&main).unwrap();
        let mut drifted = circle_main("t-drift");
        drifted.theorem = TheoremTag::BakryEmery;
        drifted.drift_amplitude = 0.0;
        let drift_report = verify(&drifted).unwrap();
        assert_eq!(
            main_report.max_violation,
            drift_report.max_violation,
            "zero drift must reproduce the flat run exactly"
        );
        for (a, b) in main_report
            .checkpoints
            .iter()
            .zip(&drift_report.checkpoints)
        {
            assert_eq!(a.max_violation, b.max_violation);
        }
    }

    #[test]
    fn drifted_circle_run_conserves_the_weighted_mean() {
        let mut sc = circle_main("t-bakry");
        sc.theorem = TheoremTag::BakryEmery;
        sc.drift_amplitude = 1.0;
        sc.initial = InitialProfile::Eigenfunction { amplitude: 0.5 };
        let report = verify(&sc).unwrap();
        assert!(report.pass, "mv = {}", report.max_violation);
        for row in &report.checkpoints {
            assert!(row.extra["weighted_mean_drift"] <= 1e-9);
        }
        assert!(report.notes.iter().any(|n| n.contains("a = -1")));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        /// Anything below an admissible alpha is admissible with the same
        /// matrix (the inequality only gets easier).
        #[test]
        fn admissibility_is_monotone_in_alpha(scale in 0.05f64..1.0, seed in 0u64..100) {
            let spec = FlowSpec::p_laplacian(3.0).unwrap();
            let (pass_full, _) = alpha_admissible(
                |r, p_hat, t| isotropic_matrix(&spec, r, p_hat, t),
                |r, t| spec.alpha(r, 0.0, t),
                400,
                seed,
            );
            let (pass_scaled, _) = alpha_admissible(
                |r, p_hat, t| isotropic_matrix(&spec, r, p_hat, t),
                |r, t| scale * spec.alpha(r, 0.0, t),
                400,
                seed,
            );
            prop_assert!(pass_full);
            prop_assert!(pass_scaled);
        }
    }
}
