//! One-dimensional comparison profiles.
//!
//! The bound certified by the verifier is `w(s, t) <= phi(s, t)` where `phi`
//! solves a one-dimensional equation on `(0, s_max]`:
//!
//! ```text
//! phi_t = alpha(|phi'|, t) phi'' + v(s, t) phi'
//! ```
//!
//! with a drift `v` depending on the setting: `(n-1) c_k'/c_k * beta` for a
//! Ricci lower bound `kappa`, `-a s` for a drift potential with
//! `Hess f >= a`, zero on flat domains, and the coordinate-change advection
//! `-(n-1) s / lambda(t)` for the rescaled round sphere under Ricci flow
//! (where the diffusion also carries `1/lambda`).
//!
//! Grid: cell-centered nodes `(i + 1/2) h`. The left end is Dirichlet with
//! value `epsilon_lift > 0` (the strict lift that keeps the comparison
//! profile above the modulus), the right end is zero-flux. Both ghosts are
//! exact for affine data, and the constant profile `epsilon_lift` is exactly
//! stationary.
//!
//! The same module solves the height-function comparison: a Neumann problem
//! on the full diameter `[0, D]` with `u`-dependent `alpha` and no drift,
//! plus the (leftmost-preimage) inversion used to turn its solution into a
//! distance certificate.

use crate::error::{Error, Result};
use crate::flow::FlowSpec;
use crate::geometry::drift_coefficient;
use crate::modulus::ModulusCurve;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriftTerm {
    NoDrift,
    /// Geometric drift `(n-1) c_kappa'/c_kappa(s)`; multiplies `beta`.
    CKappa { kappa: f64, n: u32 },
    /// Drift-potential comparison `-a s`.
    BakryEmery { a: f64 },
    /// Rescaled-coordinate advection under Ricci flow on the unit n-sphere.
    RicciRescaled { n: u32 },
}

#[derive(Debug, Clone)]
pub struct ComparisonParams {
    pub nodes: usize,
    pub safety: f64,
    pub epsilon_lift: f64,
    pub dt_max: f64,
}

impl Default for ComparisonParams {
    fn default() -> Self {
        ComparisonParams {
            nodes: 400,
            safety: 0.5,
            epsilon_lift: 1e-3,
            dt_max: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonProfile {
    pub s_nodes: Vec<f64>,
    pub spacing: f64,
    pub s_max: f64,
    pub drift: DriftTerm,
    pub epsilon_lift: f64,
    pub times: Vec<f64>,
    pub values_by_time: Vec<Vec<f64>>,
}

impl ComparisonProfile {
    /// Piecewise-linear evaluation anchored at `(0, epsilon_lift)` on the
    /// left and extended flat past the last node (the right end has zero
    /// flux, and a flat extension can only under-estimate an increasing
    /// profile, which keeps the check conservative).
    pub fn value_at(&self, time_index: usize, s: f64) -> f64 {
        let phi = &self.values_by_time[time_index];
        let h = self.spacing;
        let m = phi.len();
        let first = self.s_nodes[0];
        if s <= first {
            let t = (s / first).clamp(0.0, 1.0);
            return self.epsilon_lift + t * (phi[0] - self.epsilon_lift);
        }
        let last = self.s_nodes[m - 1];
        if s >= last {
            return phi[m - 1];
        }
        let x = (s - first) / h;
        let i = (x.floor() as usize).min(m - 2);
        let frac = x - i as f64;
        phi[i] + frac * (phi[i + 1] - phi[i])
    }

    pub fn time_index(&self, time: f64) -> Result<usize> {
        self.times
            .iter()
            .position(|&t| (t - time).abs() <= 1e-9)
            .ok_or_else(|| {
                Error::CheckpointMismatch(format!(
                    "no comparison snapshot at t = {time}; have {:?}",
                    self.times
                ))
            })
    }
}

/// Increasing piecewise-linear majorant of the initial modulus, lifted by
/// `epsilon`. Interpolation runs through the attained-distance knots of the
/// envelope curve, which sit on or below the true modulus; past the last
/// knot the profile extends flat at its last value. Each node is then
/// raised to the largest envelope value within one node spacing to its
/// right, so the linear interpolant between nodes dominates the envelope
/// at every populated bin center and the initial check starts at -epsilon
/// or better.
pub fn build_supersolution_initial(
    envelope: &ModulusCurve,
    epsilon: f64,
    s_nodes: &[f64],
) -> Result<Vec<f64>> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon lift must be positive, got {epsilon}"
        )));
    }
    if !envelope.envelope_applied {
        return Err(Error::InvalidParameter(
            "initial supersolution needs the increasing envelope curve".into(),
        ));
    }
    let mut knots: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for (s, v) in envelope.attained_knots() {
        let last = knots.last_mut().unwrap();
        if s <= last.0 {
            // Envelope knots repeat when a bin inherits its predecessor.
            last.1 = last.1.max(v);
        } else {
            knots.push((s, v));
        }
    }
    if knots.len() == 1 {
        return Err(Error::EmptyBins(
            "modulus curve has no nonempty bins to build a supersolution from".into(),
        ));
    }
    let last_s = knots.last().unwrap().0;
    let eval = |s: f64| -> f64 {
        if s >= last_s {
            return knots.last().unwrap().1;
        }
        let k = knots.partition_point(|&(ks, _)| ks <= s);
        let (s0, v0) = knots[k - 1];
        let (s1, v1) = knots[k];
        v0 + (s - s0) / (s1 - s0) * (v1 - v0)
    };
    // Populated centers carry the envelope's binned values; the knots may
    // undershoot them where a bin's argmax sits off-center.
    let populated: Vec<(f64, f64)> = envelope
        .bin_centers
        .iter()
        .zip(&envelope.values)
        .zip(&envelope.nonempty)
        .filter(|&(_, &ne)| ne)
        .map(|((&c, &v), _)| (c, v))
        .collect();
    let node_gap = if s_nodes.len() >= 2 {
        s_nodes[1] - s_nodes[0]
    } else {
        0.0
    };
    let center_floor = |x: f64| -> f64 {
        // Envelope value at the greatest populated center <= x; the values
        // are nondecreasing, so this is the running max up to x.
        let k = populated.partition_point(|&(c, _)| c <= x);
        if k == 0 {
            f64::NEG_INFINITY
        } else {
            populated[k - 1].1
        }
    };
    Ok(s_nodes
        .iter()
        .map(|&s| eval(s).max(center_floor(s + node_gap)) + epsilon)
        .collect())
}

fn ricci_lambda(n: u32, t: f64) -> f64 {
    1.0 - 2.0 * (n as f64 - 1.0) * t
}

/// March the comparison equation and snapshot it at `times` (sorted,
/// starting at or after 0). `initial` holds cell-center values at
/// `(i + 1/2) * s_max / nodes`.
pub fn solve_comparison(
    spec: &FlowSpec,
    drift: DriftTerm,
    s_max: f64,
    initial: Vec<f64>,
    times: &[f64],
    params: &ComparisonParams,
) -> Result<ComparisonProfile> {
    let m = params.nodes;
    if m < 4 {
        return Err(Error::InvalidParameter(
            "comparison grid needs at least 4 nodes".into(),
        ));
    }
    if initial.len() != m {
        return Err(Error::InvalidParameter(format!(
            "initial profile has {} values, expected {m}",
            initial.len()
        )));
    }
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "comparison domain length must be positive, got {s_max}"
        )));
    }
    if times.is_empty() || times.windows(2).any(|w| w[0] > w[1]) || times[0] < 0.0 {
        return Err(Error::InvalidParameter(
            "comparison snapshot times must be sorted and nonnegative".into(),
        ));
    }
    if let Some(bad) = initial.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "initial comparison profile contains {bad}"
        )));
    }
    let eps = params.epsilon_lift;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(
            "epsilon lift must be positive".into(),
        ));
    }
    let h = s_max / m as f64;
    let s_nodes: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) * h).collect();

    if let DriftTerm::RicciRescaled { n } = drift {
        let horizon = 1.0 / (2.0 * (n as f64 - 1.0));
        if *times.last().unwrap() >= horizon {
            return Err(Error::InvalidParameter(format!(
                "Ricci comparison must stop before the collapse time {horizon}"
            )));
        }
        if spec.preset != crate::flow::Preset::Heat {
            return Err(Error::Scenario(
                "the Ricci comparison is defined for the heat preset".into(),
            ));
        }
    }

    // Geometric drift values are time-independent; the pole guard keeps the
    // staggered nodes clear of the zero of c_kappa.
    let static_drift: Option<Vec<f64>> = match drift {
        DriftTerm::CKappa { kappa, n } => {
            let pole_tol = 0.45 * h;
            let vals = s_nodes
                .iter()
                .map(|&s| drift_coefficient(kappa, n, s, pole_tol))
                .collect::<Result<Vec<f64>>>()?;
            Some(vals)
        }
        _ => None,
    };

    let mut phi = initial;
    let mut t = 0.0f64;
    let mut out = ComparisonProfile {
        s_nodes,
        spacing: h,
        s_max,
        drift,
        epsilon_lift: eps,
        times: Vec::with_capacity(times.len()),
        values_by_time: Vec::with_capacity(times.len()),
    };
    let mut rhs = vec![0.0; m];

    for &target in times {
        while t < target - 1e-14 {
            let lambda = match drift {
                DriftTerm::RicciRescaled { n } => ricci_lambda(n, t),
                _ => 1.0,
            };
            let mut stiff = 0.0f64;
            for i in 0..m {
                let left = if i == 0 { 2.0 * eps - phi[0] } else { phi[i - 1] };
                let right = if i == m - 1 { phi[m - 1] } else { phi[i + 1] };
                let slope = (right - left) / (2.0 * h);
                let q = slope.abs();
                let second = (right - 2.0 * phi[i] + left) / (h * h);
                let diff = spec.alpha(q, phi[i], t) / lambda;
                let adv = match drift {
                    DriftTerm::NoDrift => 0.0,
                    DriftTerm::CKappa { .. } => {
                        static_drift.as_ref().unwrap()[i] * spec.beta(q, t)
                    }
                    DriftTerm::BakryEmery { a } => -a * out.s_nodes[i],
                    DriftTerm::RicciRescaled { n } => {
                        -(n as f64 - 1.0) / lambda * out.s_nodes[i]
                    }
                };
                rhs[i] = diff * second + adv * slope + spec.lower_order(q, t);
                stiff = stiff.max(2.0 * diff / (h * h) + adv.abs() / h);
            }
            let dt = if stiff == 0.0 {
                if rhs.iter().all(|&r| r == 0.0) {
                    break;
                }
                return Err(Error::DegenerateDiffusion(
                    "comparison coefficients vanish but the right-hand side does not".into(),
                ));
            } else {
                (params.safety / stiff)
                    .min(params.dt_max)
                    .min(target - t)
            };
            for i in 0..m {
                phi[i] += dt * rhs[i];
                if !phi[i].is_finite() {
                    return Err(Error::NonFinite(format!(
                        "comparison profile became non-finite at t = {t}"
                    )));
                }
            }
            t += dt;
        }
        t = target;
        out.times.push(target);
        out.values_by_time.push(phi.clone());
    }
    Ok(out)
}

/// Result of comparing one modulus curve against one profile snapshot.
#[derive(Debug, Clone)]
pub struct CheckResult {
    /// `max_j (w_j - phi(s_j))` over nonempty bins.
    pub max_violation: f64,
    /// Bin center where the maximum is attained.
    pub argmax_s: f64,
    pub nonempty_bins: usize,
    pub empty_bins: usize,
    /// Profile values at every bin center, for reporting.
    pub phi_at_bins: Vec<f64>,
}

/// Evaluate the profile at the curve's bin centers and report the largest
/// violation of `w <= phi`. Curve and profile times must agree. A rescaled
/// Ricci profile lives on the fixed unit sphere, so curve abscissas (which
/// are distances in the shrinking metric) are mapped back through
/// `s / sqrt(lambda(t))` before evaluation.
pub fn check_comparison(curve: &ModulusCurve, profile: &ComparisonProfile) -> Result<CheckResult> {
    let k = profile.time_index(curve.time)?;
    let coord_scale = match profile.drift {
        DriftTerm::RicciRescaled { n } => {
            let lambda = ricci_lambda(n, curve.time);
            if lambda <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "metric collapsed before t = {}", curve.time
                )));
            }
            1.0 / lambda.sqrt()
        }
        _ => 1.0,
    };
    let mut max_violation = f64::NEG_INFINITY;
    let mut argmax_s = f64::NAN;
    let mut phi_at_bins = Vec::with_capacity(curve.bins());
    let mut nonempty = 0usize;
    for j in 0..curve.bins() {
        let s = curve.bin_centers[j];
        let phi = profile.value_at(k, s * coord_scale);
        phi_at_bins.push(phi);
        if !curve.nonempty[j] {
            continue;
        }
        nonempty += 1;
        let gap = curve.values[j] - phi;
        if gap > max_violation {
            max_violation = gap;
            argmax_s = s;
        }
    }
    if nonempty == 0 {
        return Err(Error::EmptyBins(
            "comparison check needs at least one nonempty bin".into(),
        ));
    }
    Ok(CheckResult {
        max_violation,
        argmax_s,
        nonempty_bins: nonempty,
        empty_bins: curve.bins() - nonempty,
        phi_at_bins,
    })
}

/// Solve `phi_t = alpha(|phi'|, phi, t) phi''` on the vertex grid
/// `z_i = i D / segments` with zero-flux ends, checking that monotonicity is
/// preserved (it is for CFL safety <= 2/3; losing it voids the inversion).
pub fn solve_height_profile(
    spec: &FlowSpec,
    diameter: f64,
    initial: Vec<f64>,
    times: &[f64],
    safety: f64,
) -> Result<ComparisonProfile> {
    let m = initial.len();
    if m < 3 {
        return Err(Error::InvalidParameter(
            "height profile needs at least 3 vertices".into(),
        ));
    }
    if times.is_empty() || times.windows(2).any(|w| w[0] > w[1]) || times[0] < 0.0 {
        return Err(Error::InvalidParameter(
            "height snapshot times must be sorted and nonnegative".into(),
        ));
    }
    if initial.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::MonotonicityLost(
            "initial height profile must be nondecreasing".into(),
        ));
    }
    let h = diameter / (m - 1) as f64;
    let s_nodes: Vec<f64> = (0..m).map(|i| i as f64 * h).collect();

    let mut phi = initial;
    let mut t = 0.0f64;
    let mut rhs = vec![0.0; m];
    let mut out = ComparisonProfile {
        s_nodes,
        spacing: h,
        s_max: diameter,
        drift: DriftTerm::NoDrift,
        epsilon_lift: 0.0,
        times: Vec::with_capacity(times.len()),
        values_by_time: Vec::with_capacity(times.len()),
    };

    for &target in times {
        while t < target - 1e-14 {
            let mut stiff = 0.0f64;
            for i in 0..m {
                let left = if i == 0 { phi[1] } else { phi[i - 1] };
                let right = if i == m - 1 { phi[m - 2] } else { phi[i + 1] };
                let q = ((right - left) / (2.0 * h)).abs();
                let second = (right - 2.0 * phi[i] + left) / (h * h);
                let a = spec.alpha(q, phi[i], t);
                rhs[i] = a * second;
                stiff = stiff.max(2.0 * a / (h * h));
            }
            let dt = if stiff == 0.0 {
                if rhs.iter().all(|&r| r == 0.0) {
                    break;
                }
                return Err(Error::DegenerateDiffusion(
                    "height comparison stalled with zero coefficients".into(),
                ));
            } else {
                (safety / stiff).min(target - t)
            };
            for i in 0..m {
                phi[i] += dt * rhs[i];
                if !phi[i].is_finite() {
                    return Err(Error::NonFinite(format!(
                        "height profile became non-finite at t = {t}"
                    )));
                }
            }
            t += dt;
            if phi.windows(2).any(|w| w[1] < w[0] - 1e-10) {
                return Err(Error::MonotonicityLost(format!(
                    "height profile stopped increasing at t = {t}; lower the CFL safety"
                )));
            }
        }
        t = target;
        out.times.push(target);
        out.values_by_time.push(phi.clone());
    }
    Ok(out)
}

/// Leftmost preimage of `u` under a nondecreasing vertex profile; clamps to
/// the ends when `u` falls outside the profile's range.
pub fn invert_profile(values: &[f64], spacing: f64, u: f64) -> f64 {
    let m = values.len();
    if u <= values[0] {
        return 0.0;
    }
    if u > values[m - 1] {
        return (m - 1) as f64 * spacing;
    }
    // First index with values[i] >= u; u > values[0] so i >= 1.
    let i = values.partition_point(|&v| v < u);
    let (lo, hi) = (values[i - 1], values[i]);
    let frac = if hi > lo { (u - lo) / (hi - lo) } else { 0.0 };
    ((i - 1) as f64 + frac) * spacing
}
