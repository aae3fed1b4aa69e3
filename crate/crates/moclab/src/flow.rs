//! Explicit finite-difference solver for isotropic quasilinear flows
//!
//! ```text
//! u_t = [ alpha(|Du|,u,t) P + beta(|Du|,t) (I - P) ] : D^2 u
//!       + b(|Du|,t) - <Du, Df>,        P = Du Du^T / |Du|^2
//! ```
//!
//! on the model geometries of [`crate::geometry`]. Forward Euler in time with
//! a CFL-limited step. Three structural variants ride on the same stepper:
//! an optional drift potential `f` (circle and torus only), a Ricci-flow
//! metric rescaling on the unit sphere, and `u`-dependence of `alpha` for
//! height-function comparisons.
//!
//! Discretization notes, load-bearing for the invariants tested below:
//! * Heat-preset flows are discretized in flux (divergence) form. On the
//!   sphere this conserves the sin^(n-1)-weighted node sum exactly and needs
//!   no pole ghost cells (the pole faces carry zero flux); with a drift
//!   potential it conserves the exp(-f)-weighted node sum exactly.
//! * All other presets use the pointwise form with mirror ghosts; both forms
//!   agree to O(h^2).
//! * Below `grad_eps` the gradient direction is undefined and the operator
//!   degenerates to `beta * (Laplacian) + (alpha - beta) * u_xx` along the
//!   first axis.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Boundary, ManifoldKind, ManifoldModel, Point};

pub type AlphaFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
pub type BetaFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Heat,
    GraphicalMcf,
    PLaplacian(f64),
    Custom,
}

impl Preset {
    pub fn describe(&self) -> String {
        match self {
            Preset::Heat => "heat".into(),
            Preset::GraphicalMcf => "graphical-mcf".into(),
            Preset::PLaplacian(p) => format!("p-laplacian({p})"),
            Preset::Custom => "custom".into(),
        }
    }
}

/// Scalar potential with analytic gradient and Hessian suppliers, used for
/// drift flows on flat periodic models.
#[derive(Clone)]
pub struct DriftPotential {
    pub f: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    pub grad: Arc<dyn Fn(Point) -> (f64, f64) + Send + Sync>,
    pub hess: Arc<dyn Fn(Point) -> [[f64; 2]; 2] + Send + Sync>,
}

impl DriftPotential {
    /// `f(x, y) = amplitude * cos(2 pi x / period)` where `period` is the
    /// first side length of the model.
    pub fn cosine(m: &ManifoldModel, amplitude: f64) -> Result<Self> {
        let period = match m.kind() {
            ManifoldKind::Circle { circumference } => circumference,
            ManifoldKind::FlatTorus { l1, .. } => l1,
            _ => {
                return Err(Error::Scenario(
                    "cosine drift potential needs a circle or flat torus".into(),
                ))
            }
        };
        let k = 2.0 * std::f64::consts::PI / period;
        Ok(DriftPotential {
            f: Arc::new(move |p| amplitude * (k * p.x).cos()),
            grad: Arc::new(move |p| (-amplitude * k * (k * p.x).sin(), 0.0)),
            hess: Arc::new(move |p| {
                [[-amplitude * k * k * (k * p.x).cos(), 0.0], [0.0, 0.0]]
            }),
        })
    }

    pub fn zero() -> Self {
        DriftPotential {
            f: Arc::new(|_| 0.0),
            grad: Arc::new(|_| (0.0, 0.0)),
            hess: Arc::new(|_| [[0.0, 0.0], [0.0, 0.0]]),
        }
    }
}

#[derive(Clone)]
pub struct FlowSpec {
    pub preset: Preset,
    alpha: AlphaFn,
    beta: BetaFn,
    lower_order: BetaFn,
    pub drift: Option<DriftPotential>,
    pub grad_eps: f64,
    pub ricci_flow: bool,
    pub dt_max: f64,
}

pub const DEFAULT_GRAD_EPS: f64 = 1e-8;
pub const DEFAULT_DT_MAX: f64 = 0.1;

impl FlowSpec {
    fn from_parts(preset: Preset, alpha: AlphaFn, beta: BetaFn, lower_order: BetaFn) -> Self {
        FlowSpec {
            preset,
            alpha,
            beta,
            lower_order,
            drift: None,
            grad_eps: DEFAULT_GRAD_EPS,
            ricci_flow: false,
            dt_max: DEFAULT_DT_MAX,
        }
    }

    /// alpha = beta = 1, b = 0.
    pub fn heat() -> Self {
        Self::from_parts(
            Preset::Heat,
            Arc::new(|_, _, _| 1.0),
            Arc::new(|_, _| 1.0),
            Arc::new(|_, _| 0.0),
        )
    }

    /// Graphical mean curvature flow: alpha = 1/(1+q^2), beta = 1, b = 0.
    pub fn graphical_mcf() -> Self {
        Self::from_parts(
            Preset::GraphicalMcf,
            Arc::new(|q, _, _| 1.0 / (1.0 + q * q)),
            Arc::new(|_, _| 1.0),
            Arc::new(|_, _| 0.0),
        )
    }

    /// p-Laplacian flow for p > 2: alpha = (p-1) q^(p-2), beta = q^(p-2).
    pub fn p_laplacian(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 2.0) {
            return Err(Error::InvalidParameter(format!(
                "p-laplacian preset needs p > 2, got {p}"
            )));
        }
        Ok(Self::from_parts(
            Preset::PLaplacian(p),
            Arc::new(move |q, _, _| (p - 1.0) * q.powf(p - 2.0)),
            Arc::new(move |q, _| q.powf(p - 2.0)),
            Arc::new(|_, _| 0.0),
        ))
    }

    pub fn custom(alpha: AlphaFn, beta: BetaFn, lower_order: BetaFn) -> Self {
        Self::from_parts(Preset::Custom, alpha, beta, lower_order)
    }

    pub fn with_drift(mut self, drift: DriftPotential) -> Self {
        self.drift = Some(drift);
        self
    }

    pub fn with_ricci_flow(mut self) -> Self {
        self.ricci_flow = true;
        self
    }

    pub fn alpha(&self, q: f64, u: f64, t: f64) -> f64 {
        (self.alpha)(q, u, t)
    }

    pub fn beta(&self, q: f64, t: f64) -> f64 {
        (self.beta)(q, t)
    }

    pub fn lower_order(&self, q: f64, t: f64) -> f64 {
        (self.lower_order)(q, t)
    }

    /// True for the named presets, which all have b = 0; enables the strict
    /// range (maximum principle) guard during evolution.
    pub fn zero_order_free(&self) -> bool {
        !matches!(self.preset, Preset::Custom)
    }

    pub fn describe(&self) -> String {
        let mut s = self.preset.describe();
        if self.drift.is_some() {
            s.push_str("+drift");
        }
        if self.ricci_flow {
            s.push_str("+ricci");
        }
        s
    }
}

/// Spatial discretization. Layout is derived from the manifold: closed
/// models are periodic or pole-staggered, Neumann domains are cell-centered
/// with mirror ghosts, Dirichlet domains are vertex-centered with pinned
/// boundary values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    /// Axisymmetric sphere chart: `cells` cell-centered theta nodes on (0, pi).
    Theta1D { cells: usize },
    /// Periodic nodes on a circle.
    Periodic1D { nodes: usize },
    /// Periodic nodes on a torus, row-major `iy * nx + ix`.
    Periodic2D { nx: usize, ny: usize },
    /// Interval with `n` cells (Neumann) or `n` segments / `n+1` vertices (Dirichlet).
    Line1D { n: usize },
    /// Rectangle, same convention per axis as `Line1D`.
    Rect2D { nx: usize, ny: usize },
}

impl Grid {
    pub fn node_count(&self, m: &ManifoldModel) -> usize {
        match (*self, m.boundary()) {
            (Grid::Theta1D { cells }, _) => cells,
            (Grid::Periodic1D { nodes }, _) => nodes,
            (Grid::Periodic2D { nx, ny }, _) => nx * ny,
            (Grid::Line1D { n }, Boundary::Dirichlet) => n + 1,
            (Grid::Line1D { n }, _) => n,
            (Grid::Rect2D { nx, ny }, Boundary::Dirichlet) => (nx + 1) * (ny + 1),
            (Grid::Rect2D { nx, ny }, _) => nx * ny,
        }
    }

    /// Grid spacings `(h1, h2)`; `h2 = h1` for one-dimensional grids.
    pub fn spacings(&self, m: &ManifoldModel) -> (f64, f64) {
        match (*self, m.kind()) {
            (Grid::Theta1D { cells }, _) => {
                let h = std::f64::consts::PI / cells as f64;
                (h, h)
            }
            (Grid::Periodic1D { nodes }, ManifoldKind::Circle { circumference }) => {
                let h = circumference / nodes as f64;
                (h, h)
            }
            (Grid::Periodic2D { nx, ny }, ManifoldKind::FlatTorus { l1, l2 }) => {
                (l1 / nx as f64, l2 / ny as f64)
            }
            (Grid::Line1D { n }, ManifoldKind::Interval { length }) => {
                let h = length / n as f64;
                (h, h)
            }
            (Grid::Rect2D { nx, ny }, ManifoldKind::Rectangle { l1, l2 }) => {
                (l1 / nx as f64, l2 / ny as f64)
            }
            _ => panic!("grid does not match manifold"),
        }
    }

    fn matches(&self, m: &ManifoldModel) -> bool {
        matches!(
            (*self, m.kind()),
            (Grid::Theta1D { .. }, ManifoldKind::RoundSphere { .. })
                | (Grid::Periodic1D { .. }, ManifoldKind::Circle { .. })
                | (Grid::Periodic2D { .. }, ManifoldKind::FlatTorus { .. })
                | (Grid::Line1D { .. }, ManifoldKind::Interval { .. })
                | (Grid::Rect2D { .. }, ManifoldKind::Rectangle { .. })
        )
    }

    pub fn node_point(&self, m: &ManifoldModel, idx: usize) -> Point {
        let (h1, h2) = self.spacings(m);
        match (*self, m.boundary()) {
            (Grid::Theta1D { .. }, _) => Point::line((idx as f64 + 0.5) * h1),
            (Grid::Periodic1D { .. }, _) => Point::line(idx as f64 * h1),
            (Grid::Periodic2D { nx, .. }, _) => {
                let ix = idx % nx;
                let iy = idx / nx;
                Point::new(ix as f64 * h1, iy as f64 * h2)
            }
            (Grid::Line1D { .. }, Boundary::Dirichlet) => Point::line(idx as f64 * h1),
            (Grid::Line1D { .. }, _) => Point::line((idx as f64 + 0.5) * h1),
            (Grid::Rect2D { nx, .. }, Boundary::Dirichlet) => {
                let ix = idx % (nx + 1);
                let iy = idx / (nx + 1);
                Point::new(ix as f64 * h1, iy as f64 * h2)
            }
            (Grid::Rect2D { nx, .. }, _) => {
                let ix = idx % nx;
                let iy = idx / nx;
                Point::new((ix as f64 + 0.5) * h1, (iy as f64 + 0.5) * h2)
            }
        }
    }
}

/// Discrete scalar field at a fixed time.
#[derive(Clone)]
pub struct Field {
    pub manifold: ManifoldModel,
    pub grid: Grid,
    pub values: Vec<f64>,
    pub time: f64,
    /// Conformal factor of the evolving metric; 1 except under Ricci flow.
    pub metric_scale: f64,
}

impl Field {
    pub fn new(manifold: ManifoldModel, grid: Grid, values: Vec<f64>) -> Result<Self> {
        if !grid.matches(&manifold) {
            return Err(Error::InvalidField(format!(
                "grid {grid:?} does not fit manifold {:?}",
                manifold.kind()
            )));
        }
        let expect = grid.node_count(&manifold);
        if values.len() != expect {
            return Err(Error::InvalidField(format!(
                "expected {expect} values, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "field value at node {bad} is {}",
                values[bad]
            )));
        }
        let field = Field {
            manifold,
            grid,
            values,
            time: 0.0,
            metric_scale: 1.0,
        };
        field.check_dirichlet_boundary()?;
        Ok(field)
    }

    /// Sample `f` at the grid nodes. On Dirichlet grids, boundary samples at
    /// roundoff scale (like `sin(pi)`) are snapped to exact zero; materially
    /// nonzero boundary data is rejected as incompatible.
    pub fn from_fn(
        manifold: ManifoldModel,
        grid: Grid,
        f: impl Fn(Point) -> f64,
    ) -> Result<Self> {
        let count = grid.node_count(&manifold);
        let mut values: Vec<f64> = (0..count)
            .map(|i| f(grid.node_point(&manifold, i)))
            .collect();
        if manifold.boundary() == Boundary::Dirichlet {
            let snap = |v: &mut f64| -> Result<()> {
                if v.abs() > 1e-9 {
                    return Err(Error::InvalidField(format!(
                        "Dirichlet initial data must vanish on the boundary, found {v}"
                    )));
                }
                *v = 0.0;
                Ok(())
            };
            match grid {
                Grid::Line1D { n } => {
                    snap(&mut values[0])?;
                    snap(&mut values[n])?;
                }
                Grid::Rect2D { nx, ny } => {
                    let w = nx + 1;
                    for idx in 0..values.len() {
                        let (ix, iy) = (idx % w, idx / w);
                        if ix == 0 || ix == nx || iy == 0 || iy == ny {
                            snap(&mut values[idx])?;
                        }
                    }
                }
                _ => {}
            }
        }
        Field::new(manifold, grid, values)
    }

    fn check_dirichlet_boundary(&self) -> Result<()> {
        if self.manifold.boundary() != Boundary::Dirichlet {
            return Ok(());
        }
        let ok = match self.grid {
            Grid::Line1D { n } => self.values[0] == 0.0 && self.values[n] == 0.0,
            Grid::Rect2D { nx, ny } => {
                let w = nx + 1;
                (0..self.values.len()).all(|idx| {
                    let ix = idx % w;
                    let iy = idx / w;
                    let on_boundary = ix == 0 || ix == nx || iy == 0 || iy == ny;
                    !on_boundary || self.values[idx] == 0.0
                })
            }
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidField(
                "Dirichlet field must carry exact zeros on the boundary".into(),
            ))
        }
    }

    pub fn node_point(&self, idx: usize) -> Point {
        self.grid.node_point(&self.manifold, idx)
    }

    pub fn spacings(&self) -> (f64, f64) {
        self.grid.spacings(&self.manifold)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest discrete gradient magnitude (central differences).
    pub fn max_gradient(&self) -> f64 {
        let heat = FlowSpec::heat();
        let stepper = Stepper::new(self, &heat);
        (0..self.values.len())
            .map(|i| stepper.gradient_magnitude(&self.values, i))
            .fold(0.0, f64::max)
    }
}

fn reflect(i: i64, n: i64) -> usize {
    // Even reflection for cell-centered Neumann grids.
    let j = if i < 0 {
        -i - 1
    } else if i >= n {
        2 * n - 1 - i
    } else {
        i
    };
    j as usize
}

/// Precomputed stencil tables for one (manifold, grid, flow) triple.
struct Stepper<'a> {
    spec: &'a FlowSpec,
    grid: Grid,
    boundary: Boundary,
    dim: u32,
    h1: f64,
    h2: f64,
    /// Theta1D: cot(theta_j).
    cot: Vec<f64>,
    /// Theta1D heat: sin^(n-1) at faces (zero at the poles) and inverse
    /// weights at nodes.
    face_weight: Vec<f64>,
    node_weight_inv: Vec<f64>,
    /// Drift tables: exp(f) at nodes, exp(-f) at +faces per axis, analytic
    /// gradient at nodes.
    exp_f_node: Vec<f64>,
    exp_mf_face_x: Vec<f64>,
    exp_mf_face_y: Vec<f64>,
    grad_f: Vec<(f64, f64)>,
}

impl<'a> Stepper<'a> {
    fn new(field: &Field, spec: &'a FlowSpec) -> Self {
        let grid = field.grid;
        let m = &field.manifold;
        let (h1, h2) = grid.spacings(m);
        let mut stepper = Stepper {
            spec,
            grid,
            boundary: m.boundary(),
            dim: m.dimension(),
            h1,
            h2,
            cot: Vec::new(),
            face_weight: Vec::new(),
            node_weight_inv: Vec::new(),
            exp_f_node: Vec::new(),
            exp_mf_face_x: Vec::new(),
            exp_mf_face_y: Vec::new(),
            grad_f: Vec::new(),
        };
        if let Grid::Theta1D { cells } = grid {
            let n = m.dimension();
            stepper.cot = (0..cells)
                .map(|j| {
                    let theta = (j as f64 + 0.5) * h1;
                    theta.cos() / theta.sin()
                })
                .collect();
            stepper.face_weight = (0..=cells)
                .map(|j| {
                    if j == 0 || j == cells {
                        0.0
                    } else {
                        (j as f64 * h1).sin().powi((n - 1) as i32)
                    }
                })
                .collect();
            stepper.node_weight_inv = (0..cells)
                .map(|j| {
                    let theta = (j as f64 + 0.5) * h1;
                    1.0 / theta.sin().powi((n - 1) as i32)
                })
                .collect();
        }
        if let Some(drift) = &spec.drift {
            let count = grid.node_count(m);
            stepper.exp_f_node = (0..count)
                .map(|i| (drift.f)(grid.node_point(m, i)).exp())
                .collect();
            stepper.grad_f = (0..count)
                .map(|i| (drift.grad)(grid.node_point(m, i)))
                .collect();
            stepper.exp_mf_face_x = (0..count)
                .map(|i| {
                    let p = grid.node_point(m, i);
                    (-(drift.f)(Point::new(p.x + h1 / 2.0, p.y))).exp()
                })
                .collect();
            if matches!(grid, Grid::Periodic2D { .. }) {
                stepper.exp_mf_face_y = (0..count)
                    .map(|i| {
                        let p = grid.node_point(m, i);
                        (-(drift.f)(Point::new(p.x, p.y + h2 / 2.0))).exp()
                    })
                    .collect();
            }
        }
        stepper
    }

    fn neighbors_1d(&self, u: &[f64], i: usize) -> (f64, f64) {
        let n = u.len() as i64;
        let i = i as i64;
        match (self.grid, self.boundary) {
            (Grid::Periodic1D { .. }, _) => (
                u[((i - 1).rem_euclid(n)) as usize],
                u[((i + 1).rem_euclid(n)) as usize],
            ),
            (Grid::Theta1D { .. }, _) | (Grid::Line1D { .. }, Boundary::Neumann) => {
                (u[reflect(i - 1, n)], u[reflect(i + 1, n)])
            }
            (Grid::Line1D { .. }, _) => {
                // Dirichlet vertex grid: interior only; callers skip the ends.
                (u[(i - 1) as usize], u[(i + 1) as usize])
            }
            _ => unreachable!("1-D neighbor lookup on a 2-D grid"),
        }
    }

    fn node_2d(&self, u: &[f64], ix: i64, iy: i64) -> f64 {
        match self.grid {
            Grid::Periodic2D { nx, ny } => {
                let x = ix.rem_euclid(nx as i64) as usize;
                let y = iy.rem_euclid(ny as i64) as usize;
                u[y * nx + x]
            }
            Grid::Rect2D { nx, ny } => match self.boundary {
                Boundary::Dirichlet => {
                    let w = nx + 1;
                    u[iy as usize * w + ix as usize]
                }
                _ => {
                    let x = reflect(ix, nx as i64);
                    let y = reflect(iy, ny as i64);
                    u[y * nx + x]
                }
            },
            _ => unreachable!("2-D node lookup on a 1-D grid"),
        }
    }

    fn gradient_magnitude(&self, u: &[f64], idx: usize) -> f64 {
        match self.grid {
            Grid::Theta1D { .. } | Grid::Periodic1D { .. } | Grid::Line1D { .. } => {
                if self.boundary == Boundary::Dirichlet {
                    let n = u.len();
                    if idx == 0 {
                        return ((u[1] - u[0]) / self.h1).abs();
                    }
                    if idx == n - 1 {
                        return ((u[n - 1] - u[n - 2]) / self.h1).abs();
                    }
                }
                let (l, r) = self.neighbors_1d(u, idx);
                ((r - l) / (2.0 * self.h1)).abs()
            }
            Grid::Periodic2D { nx, .. } => {
                let (ix, iy) = ((idx % nx) as i64, (idx / nx) as i64);
                self.gradient_2d(u, ix, iy).0
            }
            Grid::Rect2D { nx, .. } => {
                let w = if self.boundary == Boundary::Dirichlet {
                    nx + 1
                } else {
                    nx
                };
                let (ix, iy) = ((idx % w) as i64, (idx / w) as i64);
                if self.boundary == Boundary::Dirichlet {
                    // One-sided at the boundary ring.
                    let (gx, gy) = self.gradient_2d_one_sided(u, ix, iy, nx as i64);
                    return (gx * gx + gy * gy).sqrt();
                }
                self.gradient_2d(u, ix, iy).0
            }
        }
    }

    fn gradient_2d(&self, u: &[f64], ix: i64, iy: i64) -> (f64, f64, f64) {
        let ux = (self.node_2d(u, ix + 1, iy) - self.node_2d(u, ix - 1, iy)) / (2.0 * self.h1);
        let uy = (self.node_2d(u, ix, iy + 1) - self.node_2d(u, ix, iy - 1)) / (2.0 * self.h2);
        ((ux * ux + uy * uy).sqrt(), ux, uy)
    }

    fn gradient_2d_one_sided(&self, u: &[f64], ix: i64, iy: i64, nx: i64) -> (f64, f64) {
        let ny = match self.grid {
            Grid::Rect2D { ny, .. } => ny as i64,
            _ => unreachable!(),
        };
        let gx = if ix == 0 {
            (self.node_2d(u, 1, iy) - self.node_2d(u, 0, iy)) / self.h1
        } else if ix == nx {
            (self.node_2d(u, nx, iy) - self.node_2d(u, nx - 1, iy)) / self.h1
        } else {
            (self.node_2d(u, ix + 1, iy) - self.node_2d(u, ix - 1, iy)) / (2.0 * self.h1)
        };
        let gy = if iy == 0 {
            (self.node_2d(u, ix, 1) - self.node_2d(u, ix, 0)) / self.h2
        } else if iy == ny {
            (self.node_2d(u, ix, ny) - self.node_2d(u, ix, ny - 1)) / self.h2
        } else {
            (self.node_2d(u, ix, iy + 1) - self.node_2d(u, ix, iy - 1)) / (2.0 * self.h2)
        };
        (gx, gy)
    }

    /// Right-hand side at one node. `scale` is the metric conformal factor.
    fn rhs(&self, u: &[f64], idx: usize, time: f64, scale: f64) -> f64 {
        match self.grid {
            Grid::Theta1D { .. } => self.rhs_sphere(u, idx, time) / scale,
            Grid::Periodic1D { .. } | Grid::Line1D { .. } => self.rhs_line(u, idx, time),
            Grid::Periodic2D { .. } | Grid::Rect2D { .. } => self.rhs_plane(u, idx, time),
        }
    }

    fn rhs_sphere(&self, u: &[f64], j: usize, time: f64) -> f64 {
        let h = self.h1;
        if matches!(self.spec.preset, Preset::Heat) {
            // Flux form; pole faces carry exactly zero flux.
            let n = u.len();
            let up = if j + 1 < n { u[j + 1] } else { u[j] };
            let lo = if j > 0 { u[j - 1] } else { u[j] };
            let flux_hi = self.face_weight[j + 1] * (up - u[j]);
            let flux_lo = self.face_weight[j] * (u[j] - lo);
            return (flux_hi - flux_lo) * self.node_weight_inv[j] / (h * h);
        }
        let (l, r) = self.neighbors_1d(u, j);
        let q_signed = (r - l) / (2.0 * h);
        let q = q_signed.abs();
        let second = (r - 2.0 * u[j] + l) / (h * h);
        let alpha = self.spec.alpha(q, u[j], time);
        let beta = self.spec.beta(q, time);
        alpha * second
            + ((self.dim - 1) as f64) * self.cot[j] * beta * q_signed
            + self.spec.lower_order(q, time)
    }

    fn rhs_line(&self, u: &[f64], i: usize, time: f64) -> f64 {
        let n = u.len();
        if self.boundary == Boundary::Dirichlet && (i == 0 || i == n - 1) {
            return 0.0;
        }
        let h = self.h1;
        if matches!(self.spec.preset, Preset::Heat) && self.spec.drift.is_some() {
            // Weighted flux form: exp(f) d/dx ( exp(-f) du/dx ).
            let nn = n as i64;
            let im = ((i as i64 - 1).rem_euclid(nn)) as usize;
            let ip = ((i as i64 + 1).rem_euclid(nn)) as usize;
            let flux_hi = self.exp_mf_face_x[i] * (u[ip] - u[i]);
            let flux_lo = self.exp_mf_face_x[im] * (u[i] - u[im]);
            return self.exp_f_node[i] * (flux_hi - flux_lo) / (h * h);
        }
        let (l, r) = self.neighbors_1d(u, i);
        if matches!(self.spec.preset, Preset::Heat) {
            // Same flux shape as the weighted form with unit weights, so a
            // zero potential reproduces the plain heat step bit for bit.
            return ((r - u[i]) - (u[i] - l)) / (h * h);
        }
        let q_signed = (r - l) / (2.0 * h);
        let q = q_signed.abs();
        let second = (r - 2.0 * u[i] + l) / (h * h);
        let mut rhs = self.spec.alpha(q, u[i], time) * second + self.spec.lower_order(q, time);
        if self.spec.drift.is_some() {
            rhs -= q_signed * self.grad_f[i].0;
        }
        rhs
    }

    fn rhs_plane(&self, u: &[f64], idx: usize, time: f64) -> f64 {
        let (nx, ny, dirichlet) = match (self.grid, self.boundary) {
            (Grid::Periodic2D { nx, ny }, _) => (nx, ny, false),
            (Grid::Rect2D { nx, ny }, b) => (nx, ny, b == Boundary::Dirichlet),
            _ => unreachable!(),
        };
        let w = if dirichlet { nx + 1 } else { nx };
        let (ix, iy) = ((idx % w) as i64, (idx / w) as i64);
        if dirichlet && (ix == 0 || ix == nx as i64 || iy == 0 || iy == ny as i64) {
            return 0.0;
        }
        let (h1, h2) = (self.h1, self.h2);

        if matches!(self.spec.preset, Preset::Heat) && self.spec.drift.is_some() {
            // Tensor-product weighted flux form on the torus.
            let idx_of = |jx: i64, jy: i64| -> usize {
                let x = jx.rem_euclid(nx as i64) as usize;
                let y = jy.rem_euclid(ny as i64) as usize;
                y * nx + x
            };
            let here = idx_of(ix, iy);
            let xm = idx_of(ix - 1, iy);
            let xp = idx_of(ix + 1, iy);
            let ym = idx_of(ix, iy - 1);
            let yp = idx_of(ix, iy + 1);
            let fx = (self.exp_mf_face_x[here] * (u[xp] - u[here])
                - self.exp_mf_face_x[xm] * (u[here] - u[xm]))
                / (h1 * h1);
            let fy = (self.exp_mf_face_y[here] * (u[yp] - u[here])
                - self.exp_mf_face_y[ym] * (u[here] - u[ym]))
                / (h2 * h2);
            return self.exp_f_node[here] * (fx + fy);
        }

        let c = self.node_2d(u, ix, iy);
        let xl = self.node_2d(u, ix - 1, iy);
        let xr = self.node_2d(u, ix + 1, iy);
        let yl = self.node_2d(u, ix, iy - 1);
        let yr = self.node_2d(u, ix, iy + 1);
        if matches!(self.spec.preset, Preset::Heat) {
            let fx = ((xr - c) - (c - xl)) / (h1 * h1);
            let fy = ((yr - c) - (c - yl)) / (h2 * h2);
            return fx + fy;
        }
        let ux = (xr - xl) / (2.0 * h1);
        let uy = (yr - yl) / (2.0 * h2);
        let uxx = (xr - 2.0 * c + xl) / (h1 * h1);
        let uyy = (yr - 2.0 * c + yl) / (h2 * h2);
        let q = (ux * ux + uy * uy).sqrt();
        let alpha = self.spec.alpha(q, c, time);
        let beta = self.spec.beta(q, time);
        let laplacian = uxx + uyy;

        let mut rhs = if q < self.spec.grad_eps {
            beta * laplacian + (alpha - beta) * uxx
        } else {
            let ne = self.node_2d(u, ix + 1, iy + 1);
            let nw = self.node_2d(u, ix - 1, iy + 1);
            let se = self.node_2d(u, ix + 1, iy - 1);
            let sw = self.node_2d(u, ix - 1, iy - 1);
            let uxy = (ne - nw - se + sw) / (4.0 * h1 * h2);
            let (dx, dy) = (ux / q, uy / q);
            let along = dx * dx * uxx + 2.0 * dx * dy * uxy + dy * dy * uyy;
            alpha * along + beta * (laplacian - along)
        };
        rhs += self.spec.lower_order(q, time);
        if self.spec.drift.is_some() {
            let idx_lin = iy as usize * w + ix as usize;
            let (fx, fy) = self.grad_f[idx_lin];
            rhs -= ux * fx + uy * fy;
        }
        rhs
    }

    /// max(alpha, beta) at one node, including the metric rescaling.
    fn coefficient(&self, u: &[f64], idx: usize, time: f64, scale: f64) -> f64 {
        let q = self.gradient_magnitude(u, idx);
        let a = self.spec.alpha(q, u[idx], time);
        let b = self.spec.beta(q, time);
        a.max(b) / scale
    }
}

/// Discrete right-hand side of the flow at a single node.
pub fn isotropic_rhs(field: &Field, spec: &FlowSpec, node: usize) -> Result<f64> {
    if node >= field.values.len() {
        return Err(Error::InvalidParameter(format!(
            "node {node} out of range for field of {} nodes",
            field.values.len()
        )));
    }
    validate_variants(field, spec)?;
    let stepper = Stepper::new(field, spec);
    let rhs = stepper.rhs(&field.values, node, field.time, field.metric_scale);
    if !rhs.is_finite() {
        return Err(Error::NonFinite(format!(
            "rhs at node {node} is {rhs}; stencil contains non-finite values"
        )));
    }
    Ok(rhs)
}

/// CFL-limited forward Euler step:
/// `dt = safety * h_min^2 / (2 * dim * sup max(alpha, beta))`, capped at
/// `spec.dt_max`. Errors when the diffusion coefficients vanish everywhere.
pub fn cfl_timestep(field: &Field, spec: &FlowSpec, safety: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "CFL safety factor must lie in (0, 1], got {safety}"
        )));
    }
    let stepper = Stepper::new(field, spec);
    let sup = (0..field.values.len())
        .map(|i| stepper.coefficient(&field.values, i, field.time, field.metric_scale))
        .fold(0.0, f64::max);
    timestep_from_sup(field, spec, safety, sup)
}

fn timestep_from_sup(field: &Field, spec: &FlowSpec, safety: f64, sup: f64) -> Result<f64> {
    if sup == 0.0 {
        return Err(Error::DegenerateDiffusion(
            "max(alpha, beta) vanishes at every node; the equation is degenerate here \
             (for gradient-degenerate presets evolve handles stationary fields directly)"
                .into(),
        ));
    }
    let (h1, h2) = field.spacings();
    let h = h1.min(h2);
    let dim = field.manifold.dimension() as f64;
    let dt = safety * h * h / (2.0 * dim * sup);
    Ok(dt.min(spec.dt_max))
}

fn validate_variants(field: &Field, spec: &FlowSpec) -> Result<()> {
    if spec.drift.is_some()
        && !matches!(field.grid, Grid::Periodic1D { .. } | Grid::Periodic2D { .. })
    {
        return Err(Error::Scenario(
            "drift potentials are supported on the circle and flat torus only".into(),
        ));
    }
    if spec.ricci_flow && !matches!(field.grid, Grid::Theta1D { .. }) {
        return Err(Error::Scenario(
            "the Ricci-flow variant is supported on the round sphere only".into(),
        ));
    }
    Ok(())
}

fn ricci_scale(dim: u32, t: f64) -> f64 {
    1.0 - 2.0 * (dim as f64 - 1.0) * t
}

/// Evolve `u0` to `horizon`, returning snapshots at the requested checkpoint
/// times (which must be sorted and lie in `[0, horizon]`).
pub fn evolve(
    spec: &FlowSpec,
    u0: &Field,
    horizon: f64,
    checkpoints: &[f64],
    safety: f64,
) -> Result<Vec<Field>> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "checkpoints must be sorted".into(),
        ));
    }
    if checkpoints
        .iter()
        .any(|&t| !(0.0..=horizon + 1e-12).contains(&t))
    {
        return Err(Error::InvalidParameter(
            "checkpoints must lie in [0, horizon]".into(),
        ));
    }
    validate_variants(u0, spec)?;
    let dim = u0.manifold.dimension();
    if spec.ricci_flow {
        let max_t = 1.0 / (2.0 * (dim as f64 - 1.0));
        if horizon >= max_t {
            return Err(Error::InvalidParameter(format!(
                "Ricci-flow horizon must stay below the collapse time {max_t}, got {horizon}"
            )));
        }
    }

    let mut field = u0.clone();
    field.metric_scale = if spec.ricci_flow {
        ricci_scale(dim, field.time)
    } else {
        1.0
    };
    let stepper = Stepper::new(&field, spec);
    let guard = spec.zero_order_free();
    let mut prev_min = field.min_value();
    let mut prev_max = field.max_value();
    let mut rhs = vec![0.0; field.values.len()];
    let mut out = Vec::with_capacity(checkpoints.len());

    for &target in checkpoints {
        while field.time < target - 1e-14 {
            let scale = field.metric_scale;
            let t = field.time;
            let mut sup = 0.0f64;
            for i in 0..field.values.len() {
                rhs[i] = stepper.rhs(&field.values, i, t, scale);
                sup = sup.max(stepper.coefficient(&field.values, i, t, scale));
            }
            let dt = if sup == 0.0 {
                if rhs.iter().all(|&r| r == 0.0) {
                    // Stationary degenerate field: jump to the checkpoint.
                    field.time = target;
                    break;
                }
                return Err(Error::DegenerateDiffusion(
                    "diffusion coefficients vanish but the right-hand side does not".into(),
                ));
            } else {
                timestep_from_sup(&field, spec, safety, sup)?.min(target - field.time)
            };

            let mut new_min = f64::INFINITY;
            let mut new_max = f64::NEG_INFINITY;
            for i in 0..field.values.len() {
                let v = field.values[i] + dt * rhs[i];
                field.values[i] = v;
                new_min = new_min.min(v);
                new_max = new_max.max(v);
            }
            if !(new_min.is_finite() && new_max.is_finite()) {
                return Err(Error::NonFinite(format!(
                    "field became non-finite at t = {}",
                    field.time
                )));
            }
            if guard && (new_max > prev_max + 1e-12 || new_min < prev_min - 1e-12) {
                return Err(Error::CflViolation(format!(
                    "range expanded at t = {} (max {prev_max} -> {new_max}, \
                     min {prev_min} -> {new_min}); reduce the CFL safety factor",
                    field.time
                )));
            }
            prev_min = new_min;
            prev_max = new_max;
            field.time += dt;
            if spec.ricci_flow {
                field.metric_scale = ricci_scale(dim, field.time);
            }
        }
        field.time = target;
        if spec.ricci_flow {
            field.metric_scale = ricci_scale(dim, field.time);
        }
        out.push(field.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Boundary;
    use std::f64::consts::PI;

    fn sphere_field(cells: usize) -> Field {
        let m = ManifoldModel::round_sphere(2).unwrap();
        Field::from_fn(m, Grid::Theta1D { cells }, |p| p.x.cos()).unwrap()
    }

    #[test]
    fn sphere_eigenfunction_rhs() {
        // Laplacian of cos(theta) on S^2 is -2 cos(theta).
        let f = sphere_field(200);
        let h = PI / 200.0;
        for j in [0, 50, 100, 150, 199] {
            let rhs = isotropic_rhs(&f, &FlowSpec::heat(), j).unwrap();
            let expect = -2.0 * f.values[j];
            assert!(
                (rhs - expect).abs() <= 6.0 * h * h,
                "node {j}: rhs {rhs} vs {expect}"
            );
        }
    }

    #[test]
    fn torus_eigenfunction_rhs() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 128, ny: 128 }, |p| {
            (2.0 * PI * p.x).sin()
        })
        .unwrap();
        let k2 = 4.0 * PI * PI;
        for idx in [5, 700, 9000] {
            let rhs = isotropic_rhs(&f, &FlowSpec::heat(), idx).unwrap();
            let expect = -k2 * f.values[idx];
            assert!((rhs - expect).abs() <= k2 * k2 * (1.0f64 / 128.0).powi(2));
        }
    }

    #[test]
    fn constant_field_rhs_is_zero_for_all_presets() {
        let specs = [
            FlowSpec::heat(),
            FlowSpec::graphical_mcf(),
            FlowSpec::p_laplacian(3.0).unwrap(),
        ];
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 16, ny: 16 }, |_| 0.7).unwrap();
        for spec in &specs {
            assert_eq!(isotropic_rhs(&f, spec, 37).unwrap(), 0.0);
        }
        let s = sphere_field(32);
        let s = Field::new(s.manifold, s.grid, vec![0.7; 32]).unwrap();
        for spec in &specs {
            assert_eq!(isotropic_rhs(&s, spec, 3).unwrap(), 0.0);
        }
    }

    #[test]
    fn degenerate_gradient_uses_axis_fallback() {
        // Saddle with vanishing gradient at the node under test.
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 64, ny: 64 }, |p| {
            0.01 * (2.0 * PI * p.x).cos() * (2.0 * PI * p.y).cos()
        })
        .unwrap();
        // Node (0, 0) has zero central gradient by symmetry.
        let spec = FlowSpec::graphical_mcf();
        let rhs = isotropic_rhs(&f, &spec, 0).unwrap();
        let h = 1.0 / 64.0;
        let u = |ix: i64, iy: i64| {
            f.values[(iy.rem_euclid(64) * 64 + ix.rem_euclid(64)) as usize]
        };
        let uxx = (u(1, 0) - 2.0 * u(0, 0) + u(-1, 0)) / (h * h);
        let uyy = (u(0, 1) - 2.0 * u(0, 0) + u(0, -1)) / (h * h);
        // MCF at q = 0: alpha = beta = 1 so the fallback is the Laplacian.
        assert!((rhs - (uxx + uyy)).abs() < 1e-12);
        // p-Laplacian at q = 0 vanishes entirely.
        let rhs_p = isotropic_rhs(&f, &FlowSpec::p_laplacian(3.0).unwrap(), 0).unwrap();
        assert_eq!(rhs_p, 0.0);
    }

    #[test]
    fn cfl_examples() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 100, ny: 100 }, |p| p.x).unwrap();
        let dt = cfl_timestep(&f, &FlowSpec::heat(), 0.5).unwrap();
        assert!((dt - 1.25e-5).abs() < 1e-18);

        let m = ManifoldModel::interval(1.0, Boundary::Neumann).unwrap();
        let f = Field::from_fn(m, Grid::Line1D { n: 10 }, |p| p.x).unwrap();
        let dt = cfl_timestep(&f, &FlowSpec::heat(), 0.9).unwrap();
        assert!((dt - 4.5e-3).abs() < 1e-15);

        // Constant field under the p-Laplacian: degenerate everywhere.
        let f = Field::from_fn(m, Grid::Line1D { n: 10 }, |_| 1.0).unwrap();
        let err = cfl_timestep(&f, &FlowSpec::p_laplacian(3.0).unwrap(), 0.5);
        assert!(matches!(err, Err(Error::DegenerateDiffusion(_))));
    }

    #[test]
    fn heat_decay_on_sphere_matches_eigenvalue() {
        let f = sphere_field(200);
        let out = evolve(&FlowSpec::heat(), &f, 0.25, &[0.25], 0.5).unwrap();
        let decay = (-2.0 * 0.25f64).exp();
        let max_rel = out[0]
            .values
            .iter()
            .zip(&f.values)
            .map(|(v, v0)| (v - decay * v0).abs())
            .fold(0.0, f64::max)
            / decay;
        assert!(max_rel <= 1e-3, "relative error {max_rel}");
    }

    #[test]
    fn constant_initial_data_is_stationary_for_every_preset() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 16, ny: 16 }, |_| 0.4).unwrap();
        for spec in [
            FlowSpec::heat(),
            FlowSpec::graphical_mcf(),
            FlowSpec::p_laplacian(3.0).unwrap(),
        ] {
            let out = evolve(&spec, &f, 0.3, &[0.1, 0.3], 0.5).unwrap();
            for snap in &out {
                assert!(snap.values.iter().all(|&v| v == 0.4));
            }
        }
    }

    #[test]
    fn ricci_flow_heat_matches_exact_solution() {
        // On the shrinking round 2-sphere, u = (1 - 2t) cos(theta) is exact.
        let f = sphere_field(200);
        let spec = FlowSpec::heat().with_ricci_flow();
        let out = evolve(&spec, &f, 0.25, &[0.1, 0.25], 0.5).unwrap();
        for snap in &out {
            let factor = 1.0 - 2.0 * snap.time;
            assert!((snap.metric_scale - factor).abs() < 1e-12);
            let err = snap
                .values
                .iter()
                .zip(&f.values)
                .map(|(v, v0)| (v - factor * v0).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-3, "t = {}: error {err}", snap.time);
        }
        // Horizon at or past the collapse time is rejected.
        assert!(evolve(&spec, &f, 0.5, &[0.5], 0.5).is_err());
    }

    #[test]
    fn grid_mean_is_conserved_on_closed_models() {
        // Plain node mean on flat models, sin-weighted mean on the sphere;
        // both are exact invariants of the flux-form heat stepper.
        let m = ManifoldModel::circle(2.0 * PI).unwrap();
        let f = Field::from_fn(m, Grid::Periodic1D { nodes: 128 }, |p| {
            0.3 * p.x.sin() + 0.1 * (3.0 * p.x).cos()
        })
        .unwrap();
        let mean0: f64 = f.values.iter().sum::<f64>() / 128.0;
        let out = evolve(&FlowSpec::heat(), &f, 1.0, &[1.0], 0.5).unwrap();
        let mean1: f64 = out[0].values.iter().sum::<f64>() / 128.0;
        assert!((mean1 - mean0).abs() <= 1e-10);

        let s = sphere_field(100);
        let h = PI / 100.0;
        let weighted = |v: &[f64]| -> f64 {
            v.iter()
                .enumerate()
                .map(|(j, x)| x * ((j as f64 + 0.5) * h).sin())
                .sum::<f64>()
        };
        let w0 = weighted(&s.values);
        let out = evolve(&FlowSpec::heat(), &s, 0.5, &[0.5], 0.5).unwrap();
        let w1 = weighted(&out[0].values);
        assert!((w1 - w0).abs() <= 1e-10, "sphere weighted mean drifted");
    }

    #[test]
    fn drift_heat_conserves_weighted_mean() {
        let m = ManifoldModel::circle(2.0 * PI).unwrap();
        let drift = DriftPotential::cosine(&m, 1.0).unwrap();
        let spec = FlowSpec::heat().with_drift(drift.clone());
        let f = Field::from_fn(m, Grid::Periodic1D { nodes: 400 }, |p| 0.5 * p.x.sin()).unwrap();
        let h = 2.0 * PI / 400.0;
        let weighted = |field: &Field| -> f64 {
            field
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| v * (-(drift.f)(field.node_point(j))).exp() * h)
                .sum()
        };
        let w0 = weighted(&f);
        let out = evolve(&spec, &f, 1.0, &[0.5, 1.0], 0.5).unwrap();
        for snap in &out {
            assert!(
                (weighted(snap) - w0).abs() <= 1e-6 * snap.time.max(1.0),
                "weighted mean drifted by {}",
                (weighted(snap) - w0).abs()
            );
        }
    }

    #[test]
    fn range_never_expands_for_preset_flows() {
        let m = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        let f = Field::from_fn(m, Grid::Periodic2D { nx: 32, ny: 32 }, |p| {
            0.2 * (2.0 * PI * p.x).sin() + 0.1 * (2.0 * PI * (p.x + p.y)).cos()
        })
        .unwrap();
        for spec in [
            FlowSpec::heat(),
            FlowSpec::graphical_mcf(),
            FlowSpec::p_laplacian(3.0).unwrap(),
        ] {
            let out = evolve(&spec, &f, 0.02, &[0.01, 0.02], 0.5).unwrap();
            assert!(out[1].max_value() <= f.max_value() + 1e-12);
            assert!(out[1].min_value() >= f.min_value() - 1e-12);
        }
    }

    #[test]
    fn pole_cells_stay_regular() {
        let f = sphere_field(100);
        let out = evolve(&FlowSpec::heat(), &f, 0.1, &[0.1], 0.5).unwrap();
        let v = &out[0].values;
        let h = PI / 100.0;
        let n = v.len();
        assert!((v[0] - v[1]).abs() <= 4.0 * h * h);
        assert!((v[n - 1] - v[n - 2]).abs() <= 4.0 * h * h);
    }

    #[test]
    fn comparison_principle_between_ordered_data() {
        let m = ManifoldModel::circle(2.0 * PI).unwrap();
        let grid = Grid::Periodic1D { nodes: 64 };
        let lo = Field::from_fn(m, grid, |p| 0.3 * p.x.sin()).unwrap();
        let hi = Field::from_fn(m, grid, |p| 0.3 * p.x.sin() + 0.05 * (2.0 * p.x).cos() + 0.06)
            .unwrap();
        assert!(lo.values.iter().zip(&hi.values).all(|(a, b)| a <= b));
        for spec in [FlowSpec::heat(), FlowSpec::graphical_mcf()] {
            let out_lo = evolve(&spec, &lo, 0.05, &[0.05], 0.5).unwrap();
            let out_hi = evolve(&spec, &hi, 0.05, &[0.05], 0.5).unwrap();
            assert!(out_lo[0]
                .values
                .iter()
                .zip(&out_hi[0].values)
                .all(|(a, b)| *a <= b + 1e-12));
        }
    }

    #[test]
    fn neumann_interval_decay() {
        let m = ManifoldModel::interval(1.0, Boundary::Neumann).unwrap();
        let f = Field::from_fn(m, Grid::Line1D { n: 200 }, |p| (PI * p.x).cos()).unwrap();
        let out = evolve(&FlowSpec::heat(), &f, 0.1, &[0.1], 0.5).unwrap();
        let decay = (-PI * PI * 0.1).exp();
        let err = out[0]
            .values
            .iter()
            .zip(&f.values)
            .map(|(v, v0)| (v - decay * v0).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-3 * decay.max(0.1), "error {err}");
    }

    #[test]
    fn dirichlet_boundary_stays_pinned() {
        let m = ManifoldModel::interval(1.0, Boundary::Dirichlet).unwrap();
        let f = Field::from_fn(m, Grid::Line1D { n: 100 }, |p| (PI * p.x).sin()).unwrap();
        let out = evolve(&FlowSpec::heat(), &f, 0.1, &[0.1], 0.5).unwrap();
        assert_eq!(out[0].values[0], 0.0);
        assert_eq!(out[0].values[100], 0.0);
        let decay = (-PI * PI * 0.1).exp();
        let err = out[0]
            .values
            .iter()
            .zip(&f.values)
            .map(|(v, v0)| (v - decay * v0).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-3);
        // Non-zero boundary data is rejected at construction.
        assert!(Field::from_fn(m, Grid::Line1D { n: 10 }, |p| p.x.cos()).is_err());
    }

    #[test]
    fn field_validation() {
        let m = ManifoldModel::circle(1.0).unwrap();
        assert!(Field::new(m, Grid::Periodic1D { nodes: 8 }, vec![0.0; 7]).is_err());
        assert!(Field::new(m, Grid::Periodic1D { nodes: 2 }, vec![0.0, f64::NAN]).is_err());
        let torus = ManifoldModel::flat_torus(1.0, 1.0).unwrap();
        assert!(Field::new(torus, Grid::Periodic1D { nodes: 8 }, vec![0.0; 8]).is_err());
    }
}
