//! Extraction of discrete moduli of continuity.
//!
//! For a field `u` the modulus at half-distance `s` is
//! `w(s) = sup { (u(y) - u(x)) / 2 : d(x, y) = 2 s }`. The exact-distance
//! constraint is measure zero on a grid, so each bin center `s_j` collects
//! the pairs inside the band `|d(x, y) - 2 s_j| <= delta_bin`; the default
//! band halfwidth is half the center spacing, so bands are disjoint and a
//! pair near the midpoint between centers is discarded rather than smeared.
//! Alongside the sup, each bin records the half-distance at which it was
//! attained: `(attained_s, value)` always lies on or below the true modulus
//! curve, so those knots support sound majorants, while bin centers carry an
//! O(band width) placement error.
//!
//! Pair spaces are enumerated exhaustively when small enough, otherwise
//! sampled with a counter-seeded RNG in fixed-size chunks. Chunking gives two
//! invariants: results are independent of thread count, and a run with a
//! larger pair budget sees a superset of the pairs of a smaller one.
//!
//! Under the Ricci-flow variant all distances shrink uniformly; the field's
//! `metric_scale` rescales every pair distance by its square root here, so
//! curves always live in the evolving metric.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flow::{Field, Grid};
use crate::geometry::{sphere_distance, torus_distance, ManifoldKind, Point};

/// Pairs per RNG stream; sampling restarts the generator on each chunk.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct ModulusCurve {
    /// Band centers `(j + 1/2) * (D/2) / bins`.
    pub bin_centers: Vec<f64>,
    /// Largest half-difference seen in the band; 0 for empty bins.
    pub values: Vec<f64>,
    /// Half-distance of the pair attaining `values[j]`; 0 for empty bins.
    pub attained_s: Vec<f64>,
    pub nonempty: Vec<bool>,
    /// Band halfwidth in distance units: pair (x, y) lands in bin j iff
    /// `|d(x, y) - 2 bin_centers[j]| <= bin_halfwidth`.
    pub bin_halfwidth: f64,
    pub time: f64,
    pub envelope_applied: bool,
}

impl ModulusCurve {
    pub fn bins(&self) -> usize {
        self.values.len()
    }

    pub fn empty_bins(&self) -> usize {
        self.nonempty.iter().filter(|&&b| !b).count()
    }

    /// Knots `(attained_s, value)` of the nonempty bins.
    pub fn attained_knots(&self) -> Vec<(f64, f64)> {
        self.bin_centers
            .iter()
            .enumerate()
            .filter(|&(j, _)| self.nonempty[j])
            .map(|(j, _)| (self.attained_s[j], self.values[j]))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ModulusParams {
    pub bins: usize,
    /// Enumerate exhaustively when the pair space is at most this large,
    /// otherwise sample exactly this many pairs.
    pub pair_budget: u64,
    pub seed: u64,
    /// Azimuth resolution of the sphere pair space.
    pub n_phi: usize,
    /// Largest tolerated fraction of empty bins.
    pub max_empty_fraction: f64,
    /// Band halfwidth in distance units; `None` means `(D/2) / (2 bins)`.
    pub band_halfwidth: Option<f64>,
}

impl Default for ModulusParams {
    fn default() -> Self {
        ModulusParams {
            bins: 256,
            pair_budget: 2_000_000,
            seed: 0,
            n_phi: 256,
            max_empty_fraction: 0.5,
            band_halfwidth: None,
        }
    }
}

/// Per-bin accumulator: (best value, half-distance where attained).
/// Ties prefer the smaller distance, which makes the parallel reduction
/// order-independent.
#[derive(Clone)]
struct Accum {
    best: Vec<(f64, f64)>,
}

impl Accum {
    fn new(bins: usize) -> Self {
        Accum {
            best: vec![(f64::NEG_INFINITY, f64::INFINITY); bins],
        }
    }

    #[inline]
    fn push(&mut self, bin: usize, value: f64, s: f64) {
        let cur = &mut self.best[bin];
        if value > cur.0 || (value == cur.0 && s < cur.1) {
            *cur = (value, s);
        }
    }

    fn merge(mut self, other: Accum) -> Accum {
        for (a, b) in self.best.iter_mut().zip(other.best) {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                *a = b;
            }
        }
        self
    }
}

/// Band geometry shared by the enumeration and sampling paths.
#[derive(Clone, Copy)]
struct Binner {
    bins: usize,
    center_step: f64,
    halfwidth: f64,
}

impl Binner {
    fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.center_step
    }

    /// Deposit a pair at distance `d` into every band containing it.
    #[inline]
    fn deposit(&self, acc: &mut Accum, d: f64, value: f64) {
        let s = d / 2.0;
        // Candidate range is a superset; membership uses the exact band test
        // so results do not depend on how the range was rounded.
        let lo = ((s - self.halfwidth) / self.center_step - 0.5).floor() as i64 - 1;
        let hi = ((s + self.halfwidth) / self.center_step - 0.5).ceil() as i64 + 1;
        for j in lo.max(0)..=hi.min(self.bins as i64 - 1) {
            let j = j as usize;
            if (d - 2.0 * self.center(j)).abs() <= 2.0 * self.halfwidth {
                acc.push(j, value, s);
            }
        }
    }
}

enum PairSpace {
    /// Unordered node pairs i < j.
    Nodes { count: usize },
    /// Sphere chart triples: node pair (i <= j) plus an azimuth offset index.
    SphereTriples { cells: usize, n_phi: usize },
}

impl PairSpace {
    fn total(&self) -> u64 {
        match *self {
            PairSpace::Nodes { count } => {
                let n = count as u64;
                n * (n - 1) / 2
            }
            PairSpace::SphereTriples { cells, n_phi } => {
                let n = cells as u64;
                n * (n + 1) / 2 * n_phi as u64
            }
        }
    }
}

/// Half of the spread of field values; an upper bound for any modulus value.
pub fn oscillation(field: &Field) -> f64 {
    0.5 * (field.max_value() - field.min_value())
}

pub fn extract_modulus(field: &Field, params: &ModulusParams) -> Result<ModulusCurve> {
    if params.bins < 2 {
        return Err(Error::InvalidParameter(
            "modulus extraction needs at least 2 bins".into(),
        ));
    }
    if params.pair_budget == 0 {
        return Err(Error::InvalidParameter(
            "pair budget must be positive".into(),
        ));
    }

    let s_max = field.manifold.diameter() / 2.0;
    let bins = params.bins;
    let center_step = s_max / bins as f64;
    // Band halfwidth in s units (the public default is quoted in distance
    // units: delta_bin = (D/2) / (2 bins), i.e. half the center spacing).
    let halfwidth_s = match params.band_halfwidth {
        Some(d) => {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "band halfwidth must be positive, got {d}"
                )));
            }
            d / 2.0
        }
        None => center_step / 4.0,
    };
    let binner = Binner {
        bins,
        center_step,
        halfwidth: halfwidth_s,
    };
    // Ricci-flow variant: distances contract by the square root of the
    // metric scale.
    let dist_scale = field.metric_scale.sqrt();
    let u = &field.values;

    let space = match field.grid {
        Grid::Theta1D { cells } => {
            if params.n_phi < 2 {
                return Err(Error::InvalidParameter(
                    "sphere pair space needs at least two azimuth samples".into(),
                ));
            }
            PairSpace::SphereTriples {
                cells,
                n_phi: params.n_phi,
            }
        }
        _ => PairSpace::Nodes { count: u.len() },
    };

    let kind = field.manifold.kind();
    let points: Vec<(f64, f64)> = (0..u.len())
        .map(|i| {
            let p = field.node_point(i);
            (p.x, p.y)
        })
        .collect();
    let node_distance = |i: usize, j: usize| -> f64 {
        let (xi, yi) = points[i];
        let (xj, yj) = points[j];
        match kind {
            ManifoldKind::Circle { circumference } => {
                let d = (xi - xj).abs();
                d.min(circumference - d)
            }
            ManifoldKind::FlatTorus { l1, l2 } => {
                torus_distance(Point::new(xi, yi), Point::new(xj, yj), l1, l2)
            }
            ManifoldKind::Interval { .. } => (xi - xj).abs(),
            ManifoldKind::Rectangle { .. } => {
                let (dx, dy) = (xi - xj, yi - yj);
                (dx * dx + dy * dy).sqrt()
            }
            ManifoldKind::RoundSphere { .. } => unreachable!("sphere uses the triple space"),
        }
    };

    let total = space.total();
    let acc = if total <= params.pair_budget {
        match space {
            PairSpace::Nodes { count } => (0..count)
                .into_par_iter()
                .fold(
                    || Accum::new(bins),
                    |mut acc, i| {
                        for j in (i + 1)..count {
                            let d = node_distance(i, j) * dist_scale;
                            if d > 0.0 {
                                let v = (u[j] - u[i]).abs() / 2.0;
                                binner.deposit(&mut acc, d, v);
                            }
                        }
                        acc
                    },
                )
                .reduce(|| Accum::new(bins), Accum::merge),
            PairSpace::SphereTriples { cells, n_phi } => {
                let phi_step = std::f64::consts::PI / (n_phi - 1) as f64;
                (0..cells)
                    .into_par_iter()
                    .fold(
                        || Accum::new(bins),
                        |mut acc, i| {
                            let ti = points[i].0;
                            for j in i..cells {
                                let tj = points[j].0;
                                let v = (u[j] - u[i]).abs() / 2.0;
                                for k in 0..n_phi {
                                    if i == j && k == 0 {
                                        continue;
                                    }
                                    let d = sphere_distance(ti, tj, k as f64 * phi_step)
                                        * dist_scale;
                                    if d > 0.0 {
                                        binner.deposit(&mut acc, d, v);
                                    }
                                }
                            }
                            acc
                        },
                    )
                    .reduce(|| Accum::new(bins), Accum::merge)
            }
        }
    } else {
        let budget = params.pair_budget;
        let n_chunks = budget.div_ceil(CHUNK);
        (0..n_chunks)
            .into_par_iter()
            .fold(
                || Accum::new(bins),
                |mut acc, chunk| {
                    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                    rng.set_stream(chunk);
                    let draws = CHUNK.min(budget - chunk * CHUNK);
                    for _ in 0..draws {
                        match space {
                            PairSpace::Nodes { count } => {
                                let i = rng.gen_range(0..count);
                                let j = rng.gen_range(0..count);
                                if i == j {
                                    continue;
                                }
                                let d = node_distance(i, j) * dist_scale;
                                if d > 0.0 {
                                    let v = (u[j] - u[i]).abs() / 2.0;
                                    binner.deposit(&mut acc, d, v);
                                }
                            }
                            PairSpace::SphereTriples { cells, n_phi } => {
                                let i = rng.gen_range(0..cells);
                                let j = rng.gen_range(0..cells);
                                let k = rng.gen_range(0..n_phi);
                                if i == j && k == 0 {
                                    continue;
                                }
                                let phi =
                                    k as f64 * std::f64::consts::PI / (n_phi - 1) as f64;
                                let d = sphere_distance(points[i].0, points[j].0, phi)
                                    * dist_scale;
                                if d > 0.0 {
                                    let v = (u[j] - u[i]).abs() / 2.0;
                                    binner.deposit(&mut acc, d, v);
                                }
                            }
                        }
                    }
                    acc
                },
            )
            .reduce(|| Accum::new(bins), Accum::merge)
    };

    let mut values = Vec::with_capacity(bins);
    let mut attained = Vec::with_capacity(bins);
    let mut nonempty = Vec::with_capacity(bins);
    for &(v, s) in &acc.best {
        if v.is_finite() {
            values.push(v);
            attained.push(s);
            nonempty.push(true);
        } else {
            values.push(0.0);
            attained.push(0.0);
            nonempty.push(false);
        }
    }
    let empty = nonempty.iter().filter(|&&b| !b).count();
    let frac = empty as f64 / bins as f64;
    if frac > params.max_empty_fraction {
        return Err(Error::EmptyBins(format!(
            "{empty} of {bins} bins empty ({:.1}%); raise the pair budget, lower the \
             bin count, or widen the bands",
            frac * 100.0
        )));
    }

    Ok(ModulusCurve {
        bin_centers: (0..bins).map(|j| binner.center(j)).collect(),
        values,
        attained_s: attained,
        nonempty,
        bin_halfwidth: 2.0 * halfwidth_s,
        time: field.time,
        envelope_applied: false,
    })
}

/// Running maximum over bins. The attained distance travels with the value
/// it belongs to, so envelope knots stay on or below the true curve.
pub fn increasing_envelope(curve: &ModulusCurve) -> ModulusCurve {
    let mut out = curve.clone();
    let mut best = f64::NEG_INFINITY;
    let mut best_s = 0.0;
    let mut seen = false;
    for j in 0..out.bins() {
        if curve.nonempty[j] && curve.values[j] > best {
            best = curve.values[j];
            best_s = curve.attained_s[j];
        }
        seen |= curve.nonempty[j];
        if seen {
            out.values[j] = best;
            out.attained_s[j] = best_s;
            out.nonempty[j] = true;
        }
    }
    out.envelope_applied = true;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{Field, Grid};
    use crate::geometry::{Boundary, ManifoldModel};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_field_has_zero_modulus() {
        let m = ManifoldModel::circle(2.0 * PI).unwrap();
        let f = Field::from_fn(m, Grid::Periodic1D { nodes: 64 }, |_| 3.5).unwrap();
        let curve = extract_modulus(&f, &ModulusParams {
            bins: 16,
            ..Default::default()
        })
        .unwrap();
        assert!(curve.values.iter().all(|&v| v == 0.0));
        let env = increasing_envelope(&curve);
        assert!(env.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_field_has_identity_modulus() {
        // u = x on [0, 1] with 400 cells and 200 bins: pair distances are
        // multiples of 1/400 and band centers are odd multiples of 1/800, so
        // every band holds exactly the aligned distance; the sup is exact.
        let m = ManifoldModel::interval(1.0, Boundary::Neumann).unwrap();
        let f = Field::from_fn(m, Grid::Line1D { n: 400 }, |p| p.x).unwrap();
        let params = ModulusParams {
            bins: 200,
            pair_budget: 1 << 40,
            ..Default::default()
        };
        let curve = extract_modulus(&f, &params).unwrap();
        for j in 0..curve.bins() {
            assert!(curve.nonempty[j], "bin {j} empty");
            // Half-difference equals half-distance for the identity map.
            assert!((curve.values[j] - curve.attained_s[j]).abs() <= 1e-14);
            // The attaining distance is the band center itself.
            assert!((curve.attained_s[j] - curve.bin_centers[j]).abs() <= 1e-12);
            assert!(
                (curve.values[j] - curve.bin_centers[j]).abs()
                    <= curve.bin_halfwidth / 2.0 + 1e-12
            );
        }
    }

    #[test]
    fn sphere_eigenfunction_modulus_matches_sine() {
        // w(s) for cos(theta) on the unit 2-sphere is sin(s).
        let m = ManifoldModel::round_sphere(2).unwrap();
        let f = Field::from_fn(m, Grid::Theta1D { cells: 400 }, |p| p.x.cos()).unwrap();
        let params = ModulusParams {
            bins: 300,
            pair_budget: 1 << 40,
            n_phi: 256,
            ..Default::default()
        };
        let curve = increasing_envelope(&extract_modulus(&f, &params).unwrap());
        for j in 0..curve.bins() {
            let err = (curve.values[j] - curve.bin_centers[j].sin()).abs();
            assert!(err <= 5e-3, "bin {j}: {err}");
        }
        // The attained knots must never exceed the true curve.
        for (s, v) in curve.attained_knots() {
            assert!(v <= s.sin() + 1e-12, "knot ({s}, {v}) above sin(s)");
        }
    }

    #[test]
    fn ricci_scale_contracts_every_distance() {
        let m = ManifoldModel::round_sphere(2).unwrap();
        let mut f = Field::from_fn(m, Grid::Theta1D { cells: 100 }, |p| p.x.cos()).unwrap();
        let params = ModulusParams {
            bins: 50,
            pair_budget: 1 << 40,
            n_phi: 64,
            max_empty_fraction: 0.6,
            ..Default::default()
        };
        let before = extract_modulus(&f, &params).unwrap();
        f.metric_scale = 0.25;
        let after = extract_modulus(&f, &params).unwrap();
        // Distances halve, so the curve compresses left: the last nonempty
        // bin moves to about half the domain.
        let last_before = (0..50).rev().find(|&j| before.nonempty[j]).unwrap();
        let last_after = (0..50).rev().find(|&j| after.nonempty[j]).unwrap();
        assert!(last_before >= 48, "static curve should fill the domain");
        assert!(
            (last_after as i64 - (last_before as i64 + 1) / 2).unsigned_abs() <= 1,
            "scaled curve should end near half the domain, got {last_after}"
        );
        // Values at matching scaled positions agree: w_scaled(s/2) = w(s).
        let env_b = increasing_envelope(&before);
        let env_a = increasing_envelope(&after);
        for j in (0..50).step_by(7) {
            if env_b.nonempty[j] && j / 2 < 50 && env_a.nonempty[j / 2] {
                assert!(
                    (env_a.values[j / 2] - env_b.values[j]).abs() <= 0.05,
                    "bin {j}"
                );
            }
        }
    }

    #[test]
    fn envelope_is_running_max_and_carries_attained_distances() {
        let curve = ModulusCurve {
            bin_centers: vec![0.1, 0.2, 0.3, 0.4],
            values: vec![0.0, 0.3, 0.2, 0.5],
            attained_s: vec![0.1, 0.18, 0.3, 0.39],
            nonempty: vec![true; 4],
            bin_halfwidth: 0.05,
            time: 0.0,
            envelope_applied: false,
        };
        let env = increasing_envelope(&curve);
        assert_eq!(env.values, vec![0.0, 0.3, 0.3, 0.5]);
        assert_eq!(env.attained_s, vec![0.1, 0.18, 0.18, 0.39]);
        assert!(env.envelope_applied);
    }

    #[test]
    fn enumeration_matches_brute_force_on_the_circle() {
        let m = ManifoldModel::circle(2.0).unwrap();
        let n = 40;
        let f = Field::from_fn(m, Grid::Periodic1D { nodes: n }, |p| {
            (PI * p.x).sin() + 0.3 * (3.0 * PI * p.x).cos()
        })
        .unwrap();
        // Bands centered on odd multiples of the node spacing half: bins =
        // n/4 aligns them with the distance lattice.
        let bins = 10;
        let curve = extract_modulus(&f, &ModulusParams {
            bins,
            pair_budget: 1 << 40,
            ..Default::default()
        })
        .unwrap();

        // Independent quadratic loop with the band-membership test applied
        // literally.
        let center_step = 0.5 / bins as f64;
        let delta_bin = center_step / 2.0;
        let mut expect = vec![0.0f64; bins];
        let mut seen = vec![false; bins];
        for i in 0..n {
            for j in (i + 1)..n {
                let x = f.node_point(i).x;
                let y = f.node_point(j).x;
                let d = (x - y).abs().min(2.0 - (x - y).abs());
                let v = (f.values[j] - f.values[i]).abs() / 2.0;
                for (b, e) in expect.iter_mut().enumerate() {
                    let center = (b as f64 + 0.5) * center_step;
                    if (d - 2.0 * center).abs() <= delta_bin {
                        if v > *e || !seen[b] {
                            *e = v;
                        }
                        seen[b] = true;
                    }
                }
            }
        }
        for j in 0..bins {
            assert_eq!(curve.nonempty[j], seen[j], "bin {j} occupancy");
            if seen[j] {
                assert_eq!(curve.values[j], expect[j], "bin {j} value");
            }
        }
    }

    #[test]
    fn negation_preserves_the_modulus() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 24, ny: 24 }, |p| {
            (2.0 * PI * p.x).sin() * (2.0 * PI * p.y).cos()
        })
        .unwrap();
        let g = Field::new(
            f.manifold,
            f.grid,
            f.values.iter().map(|v| -v).collect(),
        )
        .unwrap();
        let params = ModulusParams {
            bins: 24,
            pair_budget: 1 << 40,
            ..Default::default()
        };
        let a = extract_modulus(&f, &params).unwrap();
        let b = extract_modulus(&g, &params).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn values_never_exceed_the_oscillation() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 32, ny: 32 }, |p| {
            (2.0 * PI * p.x).sin() + 0.4 * (4.0 * PI * p.y).cos()
        })
        .unwrap();
        assert!((oscillation(&f) - 0.5 * (f.max_value() - f.min_value())).abs() == 0.0);
        let curve = extract_modulus(&f, &ModulusParams {
            bins: 32,
            pair_budget: 1 << 40,
            ..Default::default()
        })
        .unwrap();
        let osc = oscillation(&f);
        assert!(curve.values.iter().all(|&v| v <= osc + 1e-15));
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 48, ny: 48 }, |p| {
            (2.0 * PI * p.x).sin() + (2.0 * PI * p.y).cos()
        })
        .unwrap();
        let params = ModulusParams {
            bins: 48,
            pair_budget: 100_000,
            seed: 42,
            ..Default::default()
        };
        let a = extract_modulus(&f, &params).unwrap();
        let b = extract_modulus(&f, &params).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.attained_s, b.attained_s);
    }

    #[test]
    fn too_many_empty_bins_is_an_error() {
        let m = ManifoldModel::circle(2.0 * PI).unwrap();
        let f = Field::from_fn(m, Grid::Periodic1D { nodes: 10 }, |p| p.x.sin()).unwrap();
        let err = extract_modulus(&f, &ModulusParams {
            bins: 1000,
            pair_budget: 1 << 40,
            ..Default::default()
        });
        assert!(matches!(err, Err(Error::EmptyBins(_))));
    }

    #[test]
    fn wide_bands_may_overlap_and_share_pairs() {
        // With a band halfwidth above the center spacing, one pair lands in
        // several bins.
        let m = ManifoldModel::interval(1.0, Boundary::Neumann).unwrap();
        let f = Field::from_fn(m, Grid::Line1D { n: 8 }, |p| p.x).unwrap();
        let curve = extract_modulus(&f, &ModulusParams {
            bins: 16,
            pair_budget: 1 << 40,
            band_halfwidth: Some(0.5),
            max_empty_fraction: 0.0,
            ..Default::default()
        })
        .unwrap();
        assert!(curve.nonempty.iter().all(|&b| b));
        assert!(curve.values.windows(2).all(|w| w[1] >= w[0] - 1e-15));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// A larger sampling budget sees a superset of the pairs of a
        /// smaller one, so per-bin suprema can only grow.
        #[test]
        fn budget_refinement_is_monotone(seed in 0u64..1000, c0 in -1.0f64..1.0, c1 in -1.0f64..1.0) {
            let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
            let f = Field::from_fn(m, Grid::Periodic2D { nx: 32, ny: 32 }, |p| {
                c0 * (2.0 * PI * p.x).sin() + c1 * (4.0 * PI * p.y).cos()
            })
            .unwrap();
            let base = ModulusParams {
                bins: 24,
                seed,
                max_empty_fraction: 1.0,
                ..Default::default()
            };
            let small = extract_modulus(&f, &ModulusParams { pair_budget: 40_000, ..base.clone() })?;
            let large = extract_modulus(&f, &ModulusParams { pair_budget: 120_000, ..base })?;
            for j in 0..24 {
                prop_assert!(small.values[j] <= large.values[j]);
            }
        }

        /// Envelope output is increasing and dominates the input.
        #[test]
        fn envelope_dominates_and_increases(vals in proptest::collection::vec(0.0f64..1.0, 8)) {
            let n = vals.len();
            let curve = ModulusCurve {
                bin_centers: (0..n).map(|j| (j as f64 + 0.5) * 0.1).collect(),
                values: vals.clone(),
                attained_s: (0..n).map(|j| (j as f64 + 0.5) * 0.1).collect(),
                nonempty: vec![true; n],
                bin_halfwidth: 0.05,
                time: 0.0,
                envelope_applied: false,
            };
            let env = increasing_envelope(&curve);
            for j in 0..n {
                prop_assert!(env.values[j] >= vals[j]);
                if j > 0 {
                    prop_assert!(env.values[j] >= env.values[j - 1]);
                }
            }
        }
    }
}
