//! Model geometries with closed-form distances and curvature data.
//!
//! Every supported manifold is either flat (circle, torus, interval,
//! rectangle) or the unit round sphere, so geodesic distances, diameters and
//! Ricci lower bounds are all exact. The comparison coefficient family
//! `c_kappa` solves c'' + kappa c = 0 with c(0) = 1, c'(0) = 0 and feeds the
//! one-dimensional drift term `(n-1) c'/c`.

use crate::error::{Error, Result};

/// Chart coordinates. Interpretation depends on the manifold:
/// arclength `x` for `Circle` and `Interval` (`y` unused), periodic `(x, y)`
/// for `FlatTorus`, Cartesian `(x, y)` for `Rectangle`, and polar angle /
/// azimuth `(theta, phi)` for `RoundSphere`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Point on a one-dimensional chart.
    pub fn line(x: f64) -> Self {
        Point { x, y: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ManifoldKind {
    /// Flat circle of the given circumference.
    Circle { circumference: f64 },
    /// Flat torus with side lengths `l1 x l2`.
    FlatTorus { l1: f64, l2: f64 },
    /// Unit round sphere of dimension `dim`, axisymmetric chart.
    RoundSphere { dim: u32 },
    /// Interval `[0, length]`.
    Interval { length: f64 },
    /// Rectangle `[0, l1] x [0, l2]`.
    Rectangle { l1: f64, l2: f64 },
}

/// Boundary flavor. Closed manifolds carry `Closed`; domains carry the
/// boundary condition their fields are evolved with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Closed,
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldModel {
    kind: ManifoldKind,
    boundary: Boundary,
}

fn require_positive(value: f64, what: &str) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidManifold(format!(
            "{what} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

impl ManifoldModel {
    pub fn circle(circumference: f64) -> Result<Self> {
        require_positive(circumference, "circle circumference")?;
        Ok(ManifoldModel {
            kind: ManifoldKind::Circle { circumference },
            boundary: Boundary::Closed,
        })
    }

    pub fn flat_torus(l1: f64, l2: f64) -> Result<Self> {
        require_positive(l1, "torus side l1")?;
        require_positive(l2, "torus side l2")?;
        Ok(ManifoldModel {
            kind: ManifoldKind::FlatTorus { l1, l2 },
            boundary: Boundary::Closed,
        })
    }

    /// Unit round sphere S^dim, dim >= 2, in the axisymmetric chart.
    pub fn round_sphere(dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidManifold(format!(
                "round sphere dimension must be >= 2, got {dim}"
            )));
        }
        Ok(ManifoldModel {
            kind: ManifoldKind::RoundSphere { dim },
            boundary: Boundary::Closed,
        })
    }

    pub fn interval(length: f64, boundary: Boundary) -> Result<Self> {
        require_positive(length, "interval length")?;
        if boundary == Boundary::Closed {
            return Err(Error::InvalidManifold(
                "interval requires a Neumann or Dirichlet boundary flavor".into(),
            ));
        }
        Ok(ManifoldModel {
            kind: ManifoldKind::Interval { length },
            boundary,
        })
    }

    pub fn rectangle(l1: f64, l2: f64, boundary: Boundary) -> Result<Self> {
        require_positive(l1, "rectangle side l1")?;
        require_positive(l2, "rectangle side l2")?;
        if boundary == Boundary::Closed {
            return Err(Error::InvalidManifold(
                "rectangle requires a Neumann or Dirichlet boundary flavor".into(),
            ));
        }
        Ok(ManifoldModel {
            kind: ManifoldKind::Rectangle { l1, l2 },
            boundary,
        })
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_closed(&self) -> bool {
        self.boundary == Boundary::Closed
    }

    pub fn dimension(&self) -> u32 {
        match self.kind {
            ManifoldKind::Circle { .. } | ManifoldKind::Interval { .. } => 1,
            ManifoldKind::FlatTorus { .. } | ManifoldKind::Rectangle { .. } => 2,
            ManifoldKind::RoundSphere { dim } => dim,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self.kind {
            ManifoldKind::Circle { circumference } => circumference / 2.0,
            ManifoldKind::FlatTorus { l1, l2 } => ((l1 / 2.0).powi(2) + (l2 / 2.0).powi(2)).sqrt(),
            ManifoldKind::RoundSphere { .. } => std::f64::consts::PI,
            ManifoldKind::Interval { length } => length,
            ManifoldKind::Rectangle { l1, l2 } => (l1 * l1 + l2 * l2).sqrt(),
        }
    }

    /// Largest `kappa` with Ric >= (n-1) kappa g. Flat models give 0, the
    /// unit sphere gives 1.
    pub fn ricci_lower(&self) -> f64 {
        match self.kind {
            ManifoldKind::RoundSphere { .. } => 1.0,
            _ => 0.0,
        }
    }

    pub fn validate_point(&self, p: Point) -> Result<()> {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::InvalidCoordinates(format!(
                "non-finite coordinates ({}, {})",
                p.x, p.y
            )));
        }
        match self.kind {
            // Periodic charts accept any finite representative.
            ManifoldKind::Circle { .. } | ManifoldKind::FlatTorus { .. } => Ok(()),
            ManifoldKind::RoundSphere { .. } => {
                if !(0.0..=std::f64::consts::PI).contains(&p.x) {
                    return Err(Error::InvalidCoordinates(format!(
                        "polar angle theta = {} outside [0, pi]",
                        p.x
                    )));
                }
                Ok(())
            }
            ManifoldKind::Interval { length } => {
                if !(0.0..=length).contains(&p.x) {
                    return Err(Error::InvalidCoordinates(format!(
                        "x = {} outside [0, {length}]",
                        p.x
                    )));
                }
                Ok(())
            }
            ManifoldKind::Rectangle { l1, l2 } => {
                if !(0.0..=l1).contains(&p.x) || !(0.0..=l2).contains(&p.y) {
                    return Err(Error::InvalidCoordinates(format!(
                        "({}, {}) outside [0, {l1}] x [0, {l2}]",
                        p.x, p.y
                    )));
                }
                Ok(())
            }
        }
    }

    /// Exact geodesic distance between chart points.
    pub fn geodesic_distance(&self, a: Point, b: Point) -> Result<f64> {
        self.validate_point(a)?;
        self.validate_point(b)?;
        Ok(match self.kind {
            ManifoldKind::Circle { circumference } => {
                let d = (a.x - b.x).rem_euclid(circumference);
                d.min(circumference - d)
            }
            ManifoldKind::FlatTorus { l1, l2 } => torus_distance(a, b, l1, l2),
            ManifoldKind::RoundSphere { .. } => sphere_distance(a.x, b.x, a.y - b.y),
            ManifoldKind::Interval { .. } => (a.x - b.x).abs(),
            ManifoldKind::Rectangle { .. } => ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt(),
        })
    }
}

/// Torus distance as the minimum over the nine nearest lattice translates.
pub(crate) fn torus_distance(a: Point, b: Point, l1: f64, l2: f64) -> f64 {
    let dx = (a.x - b.x).rem_euclid(l1);
    let dy = (a.y - b.y).rem_euclid(l2);
    let mut best = f64::INFINITY;
    for ox in [-l1, 0.0, l1] {
        for oy in [-l2, 0.0, l2] {
            let d2 = (dx + ox).powi(2) + (dy + oy).powi(2);
            if d2 < best {
                best = d2;
            }
        }
    }
    best.sqrt()
}

/// Unit-sphere distance in the axisymmetric chart. Computed as
/// `atan2(|a x b|, a . b)` on embedded unit vectors, which stays accurate
/// near coincident and near antipodal pairs where the plain law of cosines
/// loses half the significand.
pub(crate) fn sphere_distance(theta_a: f64, theta_b: f64, delta_phi: f64) -> f64 {
    let (sa, ca) = theta_a.sin_cos();
    let (sb, cb) = theta_b.sin_cos();
    let (sp, cp) = delta_phi.sin_cos();
    // a = (sa, 0, ca), b = (sb cp, sb sp, cb).
    let dot = sa * sb * cp + ca * cb;
    let cx = -ca * sb * sp;
    let cy = ca * sb * cp - sa * cb;
    let cz = sa * sb * sp;
    let cross = (cx * cx + cy * cy + cz * cz).sqrt();
    cross.atan2(dot)
}

/// `(dimension, diameter, ricci lower bound)`.
pub fn manifold_constants(m: &ManifoldModel) -> (u32, f64, f64) {
    (m.dimension(), m.diameter(), m.ricci_lower())
}

/// Free-function form of [`ManifoldModel::geodesic_distance`].
pub fn geodesic_distance(m: &ManifoldModel, a: Point, b: Point) -> Result<f64> {
    m.geodesic_distance(a, b)
}

/// Solution of c'' + kappa c = 0, c(0) = 1, c'(0) = 0.
pub fn c_kappa(kappa: f64, t: f64) -> f64 {
    if kappa > 0.0 {
        (kappa.sqrt() * t).cos()
    } else if kappa < 0.0 {
        ((-kappa).sqrt() * t).cosh()
    } else {
        1.0
    }
}

/// Derivative of [`c_kappa`] in `t`.
pub fn c_kappa_prime(kappa: f64, t: f64) -> f64 {
    if kappa > 0.0 {
        let r = kappa.sqrt();
        -r * (r * t).sin()
    } else if kappa < 0.0 {
        let r = (-kappa).sqrt();
        r * (r * t).sinh()
    } else {
        0.0
    }
}

/// One-dimensional comparison drift coefficient `(n-1) c_kappa'/c_kappa` at
/// half-distance `s`. For `kappa > 0` the coefficient has a pole at
/// `pi / (2 sqrt(kappa))`; evaluation within `pole_tol` of the pole is an
/// error so callers keep their grids staggered away from it.
pub fn drift_coefficient(kappa: f64, n: u32, s: f64, pole_tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "drift coefficient needs dimension n >= 1".into(),
        ));
    }
    if kappa == 0.0 || n == 1 {
        return Ok(0.0);
    }
    if kappa > 0.0 {
        let limit = std::f64::consts::FRAC_PI_2 / kappa.sqrt();
        if s > limit - pole_tol {
            return Err(Error::DriftPole {
                s,
                limit,
                pole_tol,
            });
        }
        let r = kappa.sqrt();
        Ok(-((n - 1) as f64) * r * (r * s).tan())
    } else {
        let r = (-kappa).sqrt();
        Ok(((n - 1) as f64) * r * (r * s).tanh())
    }
}
