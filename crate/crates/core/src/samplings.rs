//! Interpolation node sets on the unit disk.
//!
//! Bos arrays place `n_j = 2n - 4j + 5` equispaced nodes on each of
//! `k = ⌊n/2⌋ + 1` concentric circles, which gives exactly `(n + 1)(n + 2)/2`
//! nodes. The OCS, Carnicer and Cuyt schemes differ only in the radii. All rings
//! start at angle 0.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;
use rand::Rng;

use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::quadrature::lobatto_nodes;
use crate::rng::seeded;
use crate::zernike::{self, basis_size, Point, Polar};

/// Containment slack for generated node sets.
pub const DISK_TOL: f64 = 1e-12;

/// Default Carnicer exponent.
pub const CARNICER_EXPONENT: f64 = 1.46;

/// Candidate pool size for the random thinned scheme.
pub const THINNING_POOL: usize = 1000;

/// Golden angle `π(3 - √5)`.
pub const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Ocs,
    Carnicer,
    Cuyt,
    BosCustom,
    Spiral,
    RandomThinned,
    ApproxFekete,
    FileLoaded,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ocs => "ocs",
            Scheme::Carnicer => "carnicer",
            Scheme::Cuyt => "cuyt",
            Scheme::BosCustom => "bos",
            Scheme::Spiral => "spiral",
            Scheme::RandomThinned => "random",
            Scheme::ApproxFekete => "afp",
            Scheme::FileLoaded => "file",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered nodes for degree-`order` interpolation, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    order: u32,
    scheme: Scheme,
    domain: Domain,
    seed: Option<u64>,
    metadata: String,
    points: Vec<Point>,
    /// Disk points the nodes were carried from, when known.
    preimages: Option<Vec<Point>>,
}

impl NodeSet {
    /// Disk node set; checks the count and containment within `tol`.
    pub fn on_disk(
        order: u32,
        scheme: Scheme,
        points: Vec<Point>,
        tol: f64,
        metadata: impl Into<String>,
    ) -> Result<Self> {
        let expected = basis_size(order);
        if points.len() != expected {
            return Err(Error::NodeCount {
                order,
                expected,
                actual: points.len(),
            });
        }
        if let Some((index, p)) = points
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.x * p.x + p.y * p.y <= 1.0 + tol))
        {
            return Err(Error::OutsideDomain {
                index,
                x: p.x,
                y: p.y,
                domain: "unit disk",
            });
        }
        Ok(NodeSet {
            order,
            scheme,
            domain: Domain::Disk,
            seed: None,
            metadata: metadata.into(),
            points,
            preimages: None,
        })
    }

    /// The nodes moved onto `domain`, remembering their disk pre-images.
    pub(crate) fn transferred(&self, domain: Domain, points: Vec<Point>, preimages: Vec<Point>) -> NodeSet {
        NodeSet {
            order: self.order,
            scheme: self.scheme,
            domain,
            seed: self.seed,
            metadata: self.metadata.clone(),
            points,
            preimages: Some(preimages),
        }
    }

    fn seeded_with(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Exact disk pre-images of transferred nodes. Evaluating the
    /// transferred families there avoids the rounding of `φ⁻¹ ∘ φ`.
    pub fn preimages(&self) -> Option<&[Point]> {
        self.preimages.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same nodes in a different order.
    pub fn permuted(&self, perm: &[usize]) -> NodeSet {
        let pick = |v: &[Point]| perm.iter().map(|&i| v[i]).collect::<Vec<_>>();
        NodeSet {
            points: pick(&self.points),
            preimages: self.preimages.as_deref().map(pick),
            metadata: self.metadata.clone(),
            ..*self
        }
    }
}

/// Ring layout of a Bos array.
#[derive(Debug, Clone, PartialEq)]
pub struct BosArraySpec {
    pub order: u32,
    /// Strictly decreasing radii, outermost first.
    pub radii: Vec<f64>,
    pub counts: Vec<usize>,
    /// Angular offset of the first node on each ring, in radians.
    pub offsets: Vec<f64>,
}

/// `n_j = 2n - 4j + 5` for `j = 1 ..= ⌊n/2⌋ + 1`.
pub fn ring_counts(n: u32) -> Vec<usize> {
    let n = n as usize;
    (1..=n / 2 + 1).map(|j| 2 * n + 5 - 4 * j).collect()
}

impl BosArraySpec {
    /// Standard ring counts and zero offsets for the given radii.
    pub fn new(order: u32, radii: Vec<f64>) -> Self {
        let k = radii.len();
        BosArraySpec {
            order,
            counts: ring_counts(order),
            offsets: vec![0.0; k],
            radii,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.order as usize / 2 + 1;
        let bad = |msg: String| Err(Error::InvalidBosArray(msg));
        if self.radii.len() != k || self.counts.len() != k || self.offsets.len() != k {
            return bad(format!(
                "order {} needs {k} rings, got {} radii, {} counts, {} offsets",
                self.order,
                self.radii.len(),
                self.counts.len(),
                self.offsets.len()
            ));
        }
        let total: usize = self.counts.iter().sum();
        if total != basis_size(self.order) {
            return bad(format!(
                "ring counts sum to {total}, expected {}",
                basis_size(self.order)
            ));
        }
        if self.radii.windows(2).any(|w| !(w[0] > w[1])) {
            return bad("radii must be strictly decreasing".to_string());
        }
        let (first, last) = (self.radii[0], self.radii[k - 1]);
        if !(first <= 1.0 + DISK_TOL) || !(last >= 0.0) {
            return bad(format!("radii must lie in [0, 1], got {first} .. {last}"));
        }
        if last == 0.0 && self.counts[k - 1] != 1 {
            return bad("a ring of radius 0 must hold a single node".to_string());
        }
        Ok(())
    }
}

/// Emits rings outermost first; node `i` of ring `j` sits at angle
/// `φ_j + 2πi / n_j`.
pub fn bos_array(spec: &BosArraySpec, scheme: Scheme) -> Result<NodeSet> {
    spec.validate()?;
    let mut points = Vec::with_capacity(basis_size(spec.order));
    for ((&r, &count), &phase) in spec.radii.iter().zip(&spec.counts).zip(&spec.offsets) {
        for i in 0..count {
            let angle = phase + TAU * i as f64 / count as f64;
            points.push(Polar::new(r, angle).to_cartesian());
        }
    }
    NodeSet::on_disk(spec.order, scheme, points, DISK_TOL, format!("{scheme} n={}", spec.order))
}

fn check_order(n: u32) -> Result<()> {
    if n == 0 || n > zernike::MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "order must be in 1..={}, got {n}",
            zernike::MAX_ORDER
        )));
    }
    Ok(())
}

/// OCS radii `1.1565ξ - 0.76535ξ² + 0.60517ξ³` with `ξ_j` the Chebyshev zeros
/// `cos((2j - 1)π / (2(n + 1)))`. The zero `ξ = 0` (even `n`, last ring) is
/// taken exactly, so that ring collapses to the origin.
pub fn ocs_radii(n: u32) -> Result<Vec<f64>> {
    check_order(n)?;
    Ok((1..=n / 2 + 1)
        .map(|j| {
            if 2 * j - 1 == n + 1 {
                return 0.0;
            }
            let xi = ((2 * j - 1) as f64 * PI / (2.0 * (n as f64 + 1.0))).cos();
            1.1565 * xi - 0.76535 * xi * xi + 0.60517 * xi * xi * xi
        })
        .collect())
}

/// Carnicer radii `1 - (2(j - 1)/n)^a`.
pub fn carnicer_radii(n: u32, a: f64) -> Result<Vec<f64>> {
    check_order(n)?;
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("Carnicer exponent must be > 0, got {a}")));
    }
    Ok((1..=n / 2 + 1)
        .map(|j| 1.0 - (2.0 * (j - 1) as f64 / n as f64).powf(a))
        .collect())
}

/// Cuyt radii: the `⌊n/2⌋ + 1` non-negative Gauss-Lobatto nodes of degree `n`
/// (zeros of `(1 - x²) P_n'(x)`), decreasing from 1.
pub fn cuyt_radii(n: u32) -> Result<Vec<f64>> {
    check_order(n)?;
    let nodes = lobatto_nodes(n as usize)?;
    Ok(nodes.into_iter().rev().filter(|&x| x >= 0.0).collect())
}

pub fn ocs_nodes(n: u32) -> Result<NodeSet> {
    bos_array(&BosArraySpec::new(n, ocs_radii(n)?), Scheme::Ocs)
}

pub fn carnicer_nodes(n: u32) -> Result<NodeSet> {
    bos_array(&BosArraySpec::new(n, carnicer_radii(n, CARNICER_EXPONENT)?), Scheme::Carnicer)
}

pub fn cuyt_nodes(n: u32) -> Result<NodeSet> {
    bos_array(&BosArraySpec::new(n, cuyt_radii(n)?), Scheme::Cuyt)
}

/// Sunflower spiral: node `i` (1-based) at radius `sqrt((i - 1/2)/N)` and angle
/// `i` times the golden angle.
pub fn spiral_nodes(n: u32) -> Result<NodeSet> {
    check_order(n)?;
    let total = basis_size(n);
    let points = (1..=total)
        .map(|i| {
            let r = ((i as f64 - 0.5) / total as f64).sqrt();
            Polar::new(r, i as f64 * GOLDEN_ANGLE).to_cartesian()
        })
        .collect();
    NodeSet::on_disk(n, Scheme::Spiral, points, DISK_TOL, format!("spiral n={n}"))
}

/// Greedy farthest-point thinning of [`THINNING_POOL`] uniform disk samples.
///
/// Candidates come from [`seeded`]`(seed)`: radius `sqrt(u)`, angle `2πv`. The
/// first pick is the candidate nearest the boundary; each further pick
/// maximizes the distance to the already selected nodes (ties go to the lower
/// candidate index).
pub fn random_thinned_nodes(n: u32, seed: u64) -> Result<NodeSet> {
    let total = basis_size(n);
    if total > THINNING_POOL {
        return Err(Error::InvalidArgument(format!(
            "order {n} needs {total} nodes, more than the pool of {THINNING_POOL}"
        )));
    }
    let mut rng = seeded(seed);
    let pool: Vec<Point> = (0..THINNING_POOL)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            let t = TAU * rng.random::<f64>();
            Polar::new(r, t).to_cartesian()
        })
        .collect();
    let selected = farthest_point_thinning(&pool, total);
    let points = selected.into_iter().map(|i| pool[i]).collect();
    NodeSet::on_disk(n, Scheme::RandomThinned, points, DISK_TOL, format!("random n={n} seed={seed}"))
        .map(|s| s.seeded_with(seed))
}

/// Indices of `count` points chosen greedily by farthest-point selection.
pub fn farthest_point_thinning(pool: &[Point], count: usize) -> Vec<usize> {
    let mut selected = Vec::with_capacity(count);
    if count == 0 || pool.is_empty() {
        return selected;
    }
    let first = argmax(pool.iter().map(|p| p.norm()));
    let mut nearest: Vec<f64> = pool.iter().map(|p| p.dist(pool[first])).collect();
    selected.push(first);
    while selected.len() < count.min(pool.len()) {
        let next = argmax(nearest.iter().copied());
        selected.push(next);
        let q = pool[next];
        for (d, p) in nearest.iter_mut().zip(pool) {
            *d = d.min(p.dist(q));
        }
    }
    selected
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Polar tensor mesh with at least `density` points: the origin plus `nr`
/// rings at radii `i / nr`, each with `2 nr` equispaced angles.
pub fn polar_mesh(density: usize) -> Vec<Point> {
    let nr = ((density as f64 / 2.0).sqrt().ceil() as usize).max(1);
    let nt = 2 * nr;
    let mut mesh = Vec::with_capacity(nr * nt + 1);
    mesh.push(Point::ORIGIN);
    for i in 1..=nr {
        let r = i as f64 / nr as f64;
        for k in 0..nt {
            mesh.push(Polar::new(r, TAU * k as f64 / nt as f64).to_cartesian());
        }
    }
    mesh
}

/// Approximate Fekete points: the `N` mesh points picked by column-pivoted
/// QR of the `N × M` Zernike Vandermonde (rows are polynomials, columns are
/// mesh points). The pivoting is done by modified Gram-Schmidt on the columns.
pub fn approximate_fekete(n: u32, mesh_density: usize) -> Result<NodeSet> {
    check_order(n)?;
    let size = basis_size(n);
    if mesh_density < 10 * size {
        return Err(Error::InvalidArgument(format!(
            "mesh density {mesh_density} below 10 N = {}",
            10 * size
        )));
    }
    let mesh = polar_mesh(mesh_density);
    let mut cols: Vec<Vec<f64>> = mesh
        .iter()
        .map(|p| {
            let mut v = vec![0.0; size];
            zernike::eval_all(p.to_polar(), &mut v);
            v
        })
        .collect();
    let mut norms: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();
    let scale = norms.iter().cloned().fold(0.0, f64::max);
    let mut active = vec![true; mesh.len()];
    let mut picked = Vec::with_capacity(size);
    for step in 0..size {
        let (best, best_norm) = norms
            .iter()
            .enumerate()
            .filter(|(i, _)| active[*i])
            .fold((usize::MAX, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        if best == usize::MAX || best_norm <= scale * 1e-24 {
            return Err(Error::RankDeficient { rank: step, needed: size });
        }
        active[best] = false;
        picked.push(best);
        let q: Vec<f64> = {
            let c = &cols[best];
            let inv = 1.0 / dot(c, c).sqrt();
            c.iter().map(|v| v * inv).collect()
        };
        for (i, col) in cols.iter_mut().enumerate() {
            if !active[i] {
                continue;
            }
            let proj = dot(&q, col);
            col.iter_mut().zip(&q).for_each(|(c, qv)| *c -= proj * qv);
            norms[i] = dot(col, col);
        }
    }
    let points = picked.iter().map(|&i| mesh[i]).collect();
    NodeSet::on_disk(n, Scheme::ApproxFekete, points, DISK_TOL, format!("afp n={n} mesh={}", mesh.len()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Node generator for the computable schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Ocs,
    Carnicer { exponent: f64 },
    Cuyt,
    Spiral,
    RandomThinned { seed: u64 },
    ApproxFekete { mesh_factor: usize },
}

impl Generator {
    pub fn scheme(&self) -> Scheme {
        match self {
            Generator::Ocs => Scheme::Ocs,
            Generator::Carnicer { .. } => Scheme::Carnicer,
            Generator::Cuyt => Scheme::Cuyt,
            Generator::Spiral => Scheme::Spiral,
            Generator::RandomThinned { .. } => Scheme::RandomThinned,
            Generator::ApproxFekete { .. } => Scheme::ApproxFekete,
        }
    }

    pub fn generate(&self, n: u32) -> Result<NodeSet> {
        match *self {
            Generator::Ocs => ocs_nodes(n),
            Generator::Carnicer { exponent } => {
                bos_array(&BosArraySpec::new(n, carnicer_radii(n, exponent)?), Scheme::Carnicer)
            }
            Generator::Cuyt => cuyt_nodes(n),
            Generator::Spiral => spiral_nodes(n),
            Generator::RandomThinned { seed } => random_thinned_nodes(n, seed),
            Generator::ApproxFekete { mesh_factor } => {
                approximate_fekete(n, mesh_factor.max(10) * basis_size(n))
            }
        }
    }
}
