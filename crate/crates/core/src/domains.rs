//! Diffeomorphisms from the unit disk onto a regular hexagon, an axis-aligned
//! ellipse and a circular annulus, together with the orthonormal families
//! obtained by composing the Zernike basis with the inverse maps.
//!
//! For a map `φ: D → M` with inverse Jacobian `J`, the family
//! `Q_j = q · (Z_j ∘ φ⁻¹)` is orthonormal on `M` under `(1/π) |J| / q² dx dy`.
//! The families and their weights are:
//!
//! | family | domain  | q                          | weight `\|J\| / q²`      |
//! |--------|---------|----------------------------|--------------------------|
//! | `Z`    | disk    | 1                          | 1                        |
//! | `K`    | hexagon | 1                          | `1 / R_α(θ)²`            |
//! | `H`    | hexagon | `1 / R_α(θ)`               | 1                        |
//! | `E`    | ellipse | `1 / sqrt(AB)`             | 1                        |
//! | `O`    | annulus | `sqrt(\|J\|)`              | 1                        |
//! | `C`    | annulus | 1                          | `(ρ - a) / (ρ (A - a)²)` |

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

use crate::error::{Error, Result};
use crate::samplings::NodeSet;
use crate::zernike::{self, Point, Polar, ZernikeIndex};

/// Relative slack admitted when deciding whether a point lies in a closed domain.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Half-angle of the hexagon, `π / 6`.
pub const HEX_ALPHA: f64 = PI / 6.0;

/// Default shift applied to annulus nodes that land on the inner circle.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Annuli with `a / A` above this are accepted but flagged as ill-conditioned.
pub const THIN_ANNULUS_RATIO: f64 = 0.95;

/// `U_α(θ) = θ - ⌊(θ + α) / 2α⌋ 2α`, the angle folded into `[-α, α)`.
pub fn fold_angle(theta: f64, alpha: f64) -> f64 {
    theta - ((theta + alpha) / (2.0 * alpha)).floor() * 2.0 * alpha
}

/// `R_α(θ) = cos α / cos U_α(θ)`: the boundary radius of the regular polygon
/// with half-angle `α` inscribed in the unit circle, edge midpoint at `θ = 0`.
/// Values lie in `[cos α, 1]`.
pub fn r_alpha(theta: f64, alpha: f64) -> f64 {
    alpha.cos() / fold_angle(theta, alpha).cos()
}

/// Angle of `p` in `[0, 2π)`; the origin gets 0.
pub fn angle_0_2pi(p: Point) -> f64 {
    let t = p.y.atan2(p.x);
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// Image domain of a disk diffeomorphism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Disk,
    /// Regular hexagon of side 1 inscribed in the unit circle, vertices at
    /// `θ = π/6 + kπ/3`.
    Hexagon,
    /// Axis-aligned ellipse with semi-axes `major` along x and `minor` along y.
    Ellipse { major: f64, minor: f64 },
    /// Circular annulus `inner <= ρ <= outer`.
    Annulus { inner: f64, outer: f64 },
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Domain {
    pub fn ellipse(major: f64, minor: f64) -> Result<Self> {
        if !(minor > 0.0 && major >= minor && major.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "ellipse needs A >= B > 0, got A = {major}, B = {minor}"
            )));
        }
        Ok(Domain::Ellipse { major, minor })
    }

    /// Annulus with `0 < inner < outer`. Ratios above [`THIN_ANNULUS_RATIO`]
    /// are accepted with a warning.
    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && inner < outer && outer.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "annulus needs 0 < a < A, got a = {inner}, A = {outer}"
            )));
        }
        if inner / outer > THIN_ANNULUS_RATIO {
            log::warn!("annulus with a/A = {:.4} is close to degenerate", inner / outer);
        }
        Ok(Domain::Annulus { inner, outer })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Disk => "disk",
            Domain::Hexagon => "hexagon",
            Domain::Ellipse { .. } => "ellipse",
            Domain::Annulus { .. } => "annulus",
        }
    }

    /// Closed-domain membership with relative slack [`BOUNDARY_TOL`].
    pub fn contains(&self, p: Point) -> bool {
        let slack = 1.0 + BOUNDARY_TOL;
        match *self {
            Domain::Disk => p.norm() <= slack,
            Domain::Hexagon => p.norm() <= r_alpha(angle_0_2pi(p), HEX_ALPHA) * slack,
            Domain::Ellipse { major, minor } => {
                (p.x / major).hypot(p.y / minor) <= slack
            }
            Domain::Annulus { inner, outer } => {
                let r = p.norm();
                r >= inner * (1.0 - BOUNDARY_TOL) && r <= outer * slack
            }
        }
    }

    /// `φ(u, v)`: disk point to domain point.
    pub fn forward(&self, p: Point) -> Point {
        match *self {
            Domain::Disk => p,
            Domain::Hexagon => {
                let t = angle_0_2pi(p);
                let Polar { rho, theta } = p.to_polar();
                Polar::new(rho * r_alpha(t, HEX_ALPHA), theta).to_cartesian()
            }
            Domain::Ellipse { major, minor } => Point::new(major * p.x, minor * p.y),
            Domain::Annulus { inner, outer } => {
                // (ρ, θ) are the polar coordinates of the disk point (u, v);
                // A(h + (1 - h)ρ) is written as a + (A - a)ρ so that ρ = 0 maps
                // to radius a exactly.
                let Polar { rho, theta } = p.to_polar();
                Polar::new(inner + (outer - inner) * rho, theta).to_cartesian()
            }
        }
    }

    /// `φ⁻¹(x, y)` as a polar disk point. Points outside the closed domain are
    /// rejected.
    pub fn inverse_polar(&self, p: Point) -> Result<Polar> {
        if !self.contains(p) {
            return Err(Error::PointOutside {
                x: p.x,
                y: p.y,
                domain: self.name(),
            });
        }
        Ok(match *self {
            Domain::Disk => p.to_polar(),
            Domain::Hexagon => {
                let Polar { rho, theta } = p.to_polar();
                Polar::new(rho / r_alpha(angle_0_2pi(p), HEX_ALPHA), theta)
            }
            Domain::Ellipse { major, minor } => Point::new(p.x / major, p.y / minor).to_polar(),
            Domain::Annulus { inner, outer } => {
                let Polar { rho, theta } = p.to_polar();
                Polar::new(((rho - inner) / (outer - inner)).max(0.0), theta)
            }
        })
    }

    pub fn inverse(&self, p: Point) -> Result<Point> {
        Ok(self.inverse_polar(p)?.to_cartesian())
    }

    /// `|J|` of the inverse map at a domain point.
    pub fn inverse_jacobian(&self, p: Point) -> f64 {
        match *self {
            Domain::Disk => 1.0,
            Domain::Hexagon => {
                let r = r_alpha(angle_0_2pi(p), HEX_ALPHA);
                1.0 / (r * r)
            }
            Domain::Ellipse { major, minor } => 1.0 / (major * minor),
            Domain::Annulus { inner, outer } => {
                let rho = p.norm();
                (rho - inner) / (rho * (outer - inner) * (outer - inner))
            }
        }
    }

    pub fn area(&self) -> f64 {
        match *self {
            Domain::Disk => PI,
            Domain::Hexagon => 1.5 * 3f64.sqrt(),
            Domain::Ellipse { major, minor } => PI * major * minor,
            Domain::Annulus { inner, outer } => PI * (outer * outer - inner * inner),
        }
    }
}

/// Orthonormal function families transferred from the disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Z,
    K,
    H,
    E,
    O,
    C,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::Z, Family::K, Family::H, Family::E, Family::O, Family::C];

    pub fn name(self) -> &'static str {
        match self {
            Family::Z => "Z",
            Family::K => "K",
            Family::H => "H",
            Family::E => "E",
            Family::O => "O",
            Family::C => "C",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
    }

    fn valid_on(self, domain: &Domain) -> bool {
        matches!(
            (self, domain),
            (Family::Z, Domain::Disk)
                | (Family::K | Family::H, Domain::Hexagon)
                | (Family::E, Domain::Ellipse { .. })
                | (Family::O | Family::C, Domain::Annulus { .. })
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family of functions on a specific domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    domain: Domain,
    family: Family,
}

impl Basis {
    pub fn new(domain: Domain, family: Family) -> Result<Self> {
        if !family.valid_on(&domain) {
            return Err(Error::FamilyDomainMismatch {
                family: family.name(),
                domain: domain.name(),
            });
        }
        Ok(Basis { domain, family })
    }

    pub fn disk() -> Self {
        Basis {
            domain: Domain::Disk,
            family: Family::Z,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The normalizing factor `q` at a domain point. Zero on the inner circle
    /// of the annulus for `O`.
    pub fn q_factor(&self, p: Point) -> f64 {
        match (self.family, self.domain) {
            (Family::H, _) => 1.0 / r_alpha(angle_0_2pi(p), HEX_ALPHA),
            (Family::E, Domain::Ellipse { major, minor }) => 1.0 / (major * minor).sqrt(),
            (Family::O, Domain::Annulus { inner, outer }) => {
                let rho = p.norm();
                ((rho - inner).max(0.0) / rho).sqrt() / (outer - inner)
            }
            _ => 1.0,
        }
    }

    /// `q` when it does not vary over the domain (`Z`, `K`, `E`, `C`).
    pub fn constant_q(&self) -> Option<f64> {
        match self.family {
            Family::H | Family::O => None,
            _ => Some(self.q_factor(Point::new(0.0, 0.0))),
        }
    }

    /// Weight `w` such that `(1/π) ∬_M Q_j Q_k w dx dy = δ_jk`.
    pub fn weight(&self, p: Point) -> f64 {
        match self.family {
            Family::K | Family::C => self.domain.inverse_jacobian(p),
            _ => 1.0,
        }
    }

    /// Value of basis function `j` at `p`.
    pub fn eval(&self, j: usize, p: Point) -> Result<f64> {
        let disk = self.domain.inverse_polar(p)?;
        Ok(self.q_factor(p) * zernike::zernike_eval(ZernikeIndex::from_single(j), disk))
    }

    /// Values of functions `0 .. out.len()` at `p`.
    pub fn eval_all(&self, p: Point, out: &mut [f64]) -> Result<()> {
        let disk = self.domain.inverse_polar(p)?;
        self.eval_all_from(p, disk, out);
        Ok(())
    }

    /// As [`Basis::eval_all`] with the disk pre-image `disk = φ⁻¹(p)` already
    /// known: `q(p) Z_j(disk)`.
    pub fn eval_all_from(&self, p: Point, disk: Polar, out: &mut [f64]) {
        self.scaled_eval(self.q_factor(p), disk, out);
    }

    /// `Z_j(disk)` times the point-dependent part of `q` only; a constant `q`
    /// is left out.
    pub(crate) fn eval_all_unscaled(&self, p: Point, disk: Polar, out: &mut [f64]) {
        let q = if self.constant_q().is_some() { 1.0 } else { self.q_factor(p) };
        self.scaled_eval(q, disk, out);
    }

    fn scaled_eval(&self, q: f64, disk: Polar, out: &mut [f64]) {
        zernike::eval_all(disk, out);
        if q != 1.0 {
            out.iter_mut().for_each(|v| *v *= q);
        }
    }
}

/// Single-function view of `basis_eval(b, j, p)`.
pub fn basis_eval(basis: &Basis, j: usize, p: Point) -> Result<f64> {
    basis.eval(j, p)
}

/// Maps a disk node set onto `domain`, keeping node order. Annulus nodes whose
/// source is exactly the origin are moved radially to `a + DEFAULT_EPSILON`.
pub fn transfer_nodes(domain: Domain, nodes: &NodeSet) -> Result<NodeSet> {
    transfer_nodes_with_epsilon(domain, nodes, DEFAULT_EPSILON)
}

/// As [`transfer_nodes`] with an explicit inner-circle shift. `epsilon = 0`
/// gives the plain image `φ(S)`.
pub fn transfer_nodes_with_epsilon(
    domain: Domain,
    nodes: &NodeSet,
    epsilon: f64,
) -> Result<NodeSet> {
    if nodes.domain() != Domain::Disk {
        return Err(Error::InvalidArgument(format!(
            "transfer expects disk nodes, got nodes on the {}",
            nodes.domain()
        )));
    }
    if epsilon < 0.0 {
        return Err(Error::InvalidArgument(format!("negative epsilon {epsilon}")));
    }
    let mut moved = Vec::with_capacity(nodes.len());
    let mut sources = Vec::with_capacity(nodes.len());
    for &s in nodes.points() {
        match domain {
            Domain::Annulus { inner, outer } if s.x == 0.0 && s.y == 0.0 => {
                // θ = 0 at the origin, so the node lands on (a + ε, 0), whose
                // pre-image is no longer the origin
                moved.push(Point::new(inner + epsilon, 0.0));
                sources.push(Point::new(epsilon / (outer - inner), 0.0));
            }
            _ => {
                moved.push(domain.forward(s));
                sources.push(s);
            }
        }
    }
    Ok(nodes.transferred(domain, moved, sources))
}
