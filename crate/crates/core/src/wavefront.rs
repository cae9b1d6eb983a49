//! Random turbulence wavefronts over a 36-segment hexagonal aperture and their
//! zonal reconstruction, one independent interpolation per segment.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use crate::collocation::{assemble, CollocationMatrix, Interpolator};
use crate::domains::{transfer_nodes, Basis, Domain, Family};
use crate::error::{Error, Result};
use crate::rng;
use crate::samplings::{Generator, NodeSet, Scheme};
use crate::zernike::{self, Point, ZernikeIndex};

/// Number of Zernike terms `a_1 .. a_14` in a wavefront.
pub const WAVEFRONT_MODES: usize = 14;

/// Normalization radius of the wavefront polynomials.
pub const SUPPORT_RADIUS: f64 = 6.0;

/// Segments in the aperture.
pub const SEGMENTS: usize = 36;

/// Target number of evaluation points per segment.
pub const GRID_TARGET: usize = 2500;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Noll's constant `Γ(14/3) [(24/5) Γ(6/5)]^{5/6} Γ(11/6)² / (2π²) ≈ 2.2698`.
pub fn noll_constant() -> f64 {
    let g = libm::tgamma;
    g(14.0 / 3.0) * libm::pow(4.8 * g(1.2), 5.0 / 6.0) * g(11.0 / 6.0).powi(2) / (2.0 * PI * PI)
}

/// Kolmogorov covariance `<a_j a_k>` of two Zernike coefficients (single
/// indices), in units of `(D / r0)^{5/3}`. Non-zero only for equal signed `m`.
pub fn noll_covariance(j: usize, k: usize) -> f64 {
    let (a, b) = (ZernikeIndex::from_single(j), ZernikeIndex::from_single(k));
    if a.m() != b.m() || a.n() == 0 || b.n() == 0 {
        return 0.0;
    }
    let (n, np) = (a.n() as f64, b.n() as f64);
    let parity = (a.n() + b.n()) as i64 - 2 * a.m().abs() as i64;
    let sign = if (parity / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let g = libm::tgamma;
    noll_constant() * sign * ((n + 1.0) * (np + 1.0)).sqrt() * g((n + np - 5.0 / 3.0) / 2.0)
        / (g((n - np + 17.0 / 3.0) / 2.0)
            * g((np - n + 17.0 / 3.0) / 2.0)
            * g((n + np + 23.0 / 3.0) / 2.0))
}

/// Covariance of modes `Z_1 .. Z_13` (piston excluded).
pub fn kolmogorov_covariance() -> DMatrix<f64> {
    let m = WAVEFRONT_MODES - 1;
    DMatrix::from_fn(m, m, |i, k| noll_covariance(i + 1, k + 1))
}

/// Sampler of Kolmogorov wavefronts.
#[derive(Debug, Clone)]
pub struct TurbulenceModel {
    factor: DMatrix<f64>,
    strength: f64,
}

impl TurbulenceModel {
    /// `strength` scales the coefficient standard deviations.
    pub fn new(strength: f64) -> Result<Self> {
        if !(strength > 0.0 && strength.is_finite()) {
            return Err(Error::InvalidArgument(format!("strength must be > 0, got {strength}")));
        }
        let chol = kolmogorov_covariance()
            .cholesky()
            .ok_or_else(|| Error::InvalidArgument("covariance not positive definite".into()))?;
        Ok(TurbulenceModel {
            factor: chol.l(),
            strength,
        })
    }

    /// Piston is zero; the other 13 coefficients are `strength · L ξ` with
    /// `ξ` standard normal from the given generator.
    pub fn sample(&self, rng: &mut rng::Rng) -> Wavefront {
        let xi = DVector::from_fn(WAVEFRONT_MODES - 1, |_, _| StandardNormal.sample(rng));
        let a = &self.factor * xi * self.strength;
        let mut coefficients = [0.0; WAVEFRONT_MODES];
        coefficients[1..].copy_from_slice(a.as_slice());
        Wavefront::new(coefficients)
    }
}

/// Wavefront seeded by `seed`.
pub fn kolmogorov_wavefront(seed: u64, strength: f64) -> Result<Wavefront> {
    Ok(TurbulenceModel::new(strength)?.sample(&mut rng::seeded(seed)))
}

/// `f(x, y) = Σ_{j=1}^{14} a_j Z_{j-1}((x, y) / 6)` around `center`.
///
/// Segment vertices reach radius √37 ≈ 6.08, so the polynomials are evaluated a
/// little outside the unit disk there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavefront {
    pub coefficients: [f64; WAVEFRONT_MODES],
    pub center: Point,
}

impl Wavefront {
    pub fn new(coefficients: [f64; WAVEFRONT_MODES]) -> Self {
        Wavefront {
            coefficients,
            center: Point::ORIGIN,
        }
    }

    pub fn translated(mut self, offset: Point) -> Self {
        self.center = self.center + offset;
        self
    }

    /// The 14 mode values at `p`.
    pub fn modes(&self, p: Point) -> [f64; WAVEFRONT_MODES] {
        let q = p - self.center;
        let scaled = Point::new(q.x / SUPPORT_RADIUS, q.y / SUPPORT_RADIUS).to_polar();
        let mut out = [0.0; WAVEFRONT_MODES];
        zernike::eval_all(scaled, &mut out);
        out
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.modes(p)
            .iter()
            .zip(&self.coefficients)
            .map(|(z, a)| z * a)
            .sum()
    }
}

/// Hexagon outward normals: the edge midpoints of the unit-side hexagon sit at
/// angles `kπ/3`, at distance `√3/2` from its center.
const EDGE_NORMALS: [(f64, f64); 6] = [
    (1.0, 0.0),
    (0.5, 0.866_025_403_784_438_6),
    (-0.5, 0.866_025_403_784_438_6),
    (-1.0, 0.0),
    (-0.5, -0.866_025_403_784_438_6),
    (0.5, -0.866_025_403_784_438_6),
];

/// Closed point-in-hexagon test for the unit-side hexagon at the origin.
pub fn in_unit_hexagon(p: Point, tol: f64) -> bool {
    EDGE_NORMALS
        .iter()
        .all(|&(nx, ny)| p.x * nx + p.y * ny <= SQRT3 / 2.0 + tol)
}

/// Signed distance to the hexagon boundary, positive inside.
fn hexagon_margin(p: Point) -> f64 {
    EDGE_NORMALS
        .iter()
        .map(|&(nx, ny)| SQRT3 / 2.0 - (p.x * nx + p.y * ny))
        .fold(f64::INFINITY, f64::min)
}

/// 36 unit-side hexagons in three rings (6, 12, 18) around an empty central
/// cell. Neighbouring centers are `√3` apart across a shared edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedAperture {
    centers: Vec<Point>,
}

pub fn build_aperture() -> SegmentedAperture {
    // axial lattice coordinates along e1 = √3 (1, 0), e2 = √3 (1/2, √3/2)
    let mut cells: Vec<(i32, f64, Point)> = Vec::new();
    for q in -3i32..=3 {
        for r in -3i32..=3 {
            let ring = q.abs().max(r.abs()).max((q + r).abs());
            if ring == 0 || ring > 3 {
                continue;
            }
            let c = Point::new(
                SQRT3 * (q as f64 + 0.5 * r as f64),
                SQRT3 * (SQRT3 / 2.0) * r as f64,
            );
            let angle = crate::domains::angle_0_2pi(c);
            cells.push((ring, angle, c));
        }
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    SegmentedAperture {
        centers: cells.into_iter().map(|(_, _, c)| c).collect(),
    }
}

impl SegmentedAperture {
    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Characteristic function `χ_k` of the closed segment `k`.
    pub fn contains(&self, k: usize, p: Point) -> bool {
        in_unit_hexagon(p - self.centers[k], 1e-12)
    }

    /// Lowest-index segment containing `p`.
    pub fn segment_of(&self, p: Point) -> Option<usize> {
        (0..self.len()).find(|&k| self.contains(k, p))
    }

    pub fn vertices(&self, k: usize) -> [Point; 6] {
        let c = self.centers[k];
        core::array::from_fn(|i| {
            let t = PI / 6.0 + i as f64 * PI / 3.0;
            Point::new(c.x + t.cos(), c.y + t.sin())
        })
    }

    pub fn translated(&self, offset: Point) -> SegmentedAperture {
        SegmentedAperture {
            centers: self.centers.iter().map(|&c| c + offset).collect(),
        }
    }
}

/// Square evaluation lattice, identical in every segment.
///
/// The lattice has spacing `sqrt(area / 2500)` and is offset by half a step
/// from each segment center. Points on a shared edge would belong to the
/// lower-index segment; with this spacing no lattice point lies within `1e-9`
/// of an edge, which [`EvaluationGrid::new`] checks.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationGrid {
    local: Vec<Point>,
}

impl EvaluationGrid {
    pub fn new(target: usize) -> Result<Self> {
        let area = 1.5 * SQRT3;
        let step = (area / target as f64).sqrt();
        let half = (1.0 / step).ceil() as i64 + 1;
        let mut local = Vec::new();
        for iy in -half..half {
            for ix in -half..half {
                let p = Point::new((ix as f64 + 0.5) * step, (iy as f64 + 0.5) * step);
                let margin = hexagon_margin(p);
                if margin.abs() <= 1e-9 {
                    return Err(Error::InvalidArgument(format!(
                        "grid point ({}, {}) lies on a segment edge",
                        p.x, p.y
                    )));
                }
                if margin > 0.0 {
                    local.push(p);
                }
            }
        }
        Ok(EvaluationGrid { local })
    }

    /// Offsets from a segment center.
    pub fn local_points(&self) -> &[Point] {
        &self.local
    }

    pub fn points_in(&self, aperture: &SegmentedAperture, k: usize) -> Vec<Point> {
        let c = aperture.centers()[k];
        self.local.iter().map(|&p| p + c).collect()
    }
}

/// `(Σ |approx - truth|² / Σ |truth|²)^{1/2}`.
pub fn rrmse(approx: &[f64], truth: &[f64]) -> Result<f64> {
    if approx.len() != truth.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            approx.len(),
            truth.len()
        )));
    }
    let num: f64 = approx.iter().zip(truth).map(|(a, t)| (a - t) * (a - t)).sum();
    let den: f64 = truth.iter().map(|t| t * t).sum();
    if den == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((num / den).sqrt())
}

/// Per-segment interpolation with one node layout replicated in every segment.
#[derive(Debug, Clone)]
pub struct ZonalSolver {
    order: u32,
    scheme: Scheme,
    basis: Basis,
    local_nodes: Vec<Point>,
    matrix: CollocationMatrix,
    interpolator: Interpolator,
}

impl ZonalSolver {
    /// `nodes` is a disk node set; it is carried onto the unit hexagon.
    pub fn new(nodes: &NodeSet, family: Family) -> Result<Self> {
        let basis = Basis::new(Domain::Hexagon, family)?;
        let local = transfer_nodes(Domain::Hexagon, nodes)?;
        let matrix = assemble(&basis, &local)?;
        // every segment shares this matrix; report the failure on segment 0
        let interpolator = Interpolator::new(&matrix).map_err(|e| match e {
            Error::Singular { sigma_min } => Error::SingularSegment { hexagon: 0, sigma_min },
            other => other,
        })?;
        Ok(ZonalSolver {
            order: nodes.order(),
            scheme: nodes.scheme(),
            basis,
            local_nodes: local.points().to_vec(),
            matrix,
            interpolator,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn interpolator(&self) -> &Interpolator {
        &self.interpolator
    }

    pub fn local_nodes(&self) -> &[Point] {
        &self.local_nodes
    }

    /// Node positions inside segment `k`.
    pub fn sample_points(&self, aperture: &SegmentedAperture, k: usize) -> Vec<Point> {
        let c = aperture.centers()[k];
        self.local_nodes.iter().map(|&p| p + c).collect()
    }

    /// Coefficients of one segment from its node samples.
    pub fn solve_segment(&self, k: usize, samples: &[f64]) -> Result<Vec<f64>> {
        self.interpolator.coefficients(samples).map_err(|e| match e {
            Error::Singular { sigma_min } => Error::SingularSegment { hexagon: k, sigma_min },
            other => other,
        })
    }

    /// Solves every segment from its samples (`samples[k][i]` at node `i` of
    /// segment `k`).
    pub fn reconstruct(&self, samples: &[Vec<f64>]) -> Result<ReconstructionResult> {
        let coefficients = samples
            .iter()
            .enumerate()
            .map(|(k, s)| self.solve_segment(k, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReconstructionResult {
            order: self.order,
            scheme: self.scheme,
            basis: self.basis,
            coefficients,
        })
    }
}

/// Coefficient vectors `c^k` of a zonal reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub order: u32,
    pub scheme: Scheme,
    pub basis: Basis,
    pub coefficients: Vec<Vec<f64>>,
}

impl ReconstructionResult {
    /// `Σ_j c_j^k Q_j(p - center_k)`; `p` must lie in segment `k`.
    pub fn eval_in(&self, aperture: &SegmentedAperture, k: usize, p: Point) -> Result<f64> {
        self.eval_local(k, p - aperture.centers()[k])
    }

    fn eval_local(&self, k: usize, local: Point) -> Result<f64> {
        let c = &self.coefficients[k];
        let mut vals = vec![0.0; c.len()];
        self.basis.eval_all(local, &mut vals)?;
        Ok(vals.iter().zip(c).map(|(v, c)| v * c).sum())
    }

    /// RRMSE against `truth` over every segment's grid points.
    pub fn rrmse(
        &self,
        aperture: &SegmentedAperture,
        grid: &EvaluationGrid,
        truth: &Wavefront,
    ) -> Result<f64> {
        let mut approx = Vec::new();
        let mut exact = Vec::new();
        for k in 0..aperture.len() {
            for &local in grid.local_points() {
                approx.push(self.eval_local(k, local)?);
                exact.push(truth.eval(local + aperture.centers()[k]));
            }
        }
        rrmse(&approx, &exact)
    }
}

/// Samples `w` at the transferred nodes of every segment and interpolates.
pub fn zonal_interpolate(
    aperture: &SegmentedAperture,
    w: &Wavefront,
    nodes: &NodeSet,
    family: Family,
) -> Result<ReconstructionResult> {
    if !matches!(family, Family::K | Family::H) {
        return Err(Error::FamilyDomainMismatch {
            family: family.name(),
            domain: "hexagon",
        });
    }
    let solver = ZonalSolver::new(nodes, family)?;
    let samples: Vec<Vec<f64>> = (0..aperture.len())
        .map(|k| solver.sample_points(aperture, k).iter().map(|&p| w.eval(p)).collect())
        .collect();
    solver.reconstruct(&samples)
}

/// Quadratic forms `A`, `T` with `RRMSE(a)² = aᵀ A a / aᵀ T a` for the
/// reconstruction of any wavefront with coefficients `a`.
///
/// The reconstruction is linear in the samples and the samples are linear in
/// `a`, so the per-segment error on the grid is `E_k a` with
/// `E_k = Lᵀ F_k - G_k` (`L` the Lagrange functions on the grid, `F_k` and
/// `G_k` the wavefront modes at the nodes and on the grid).
#[derive(Debug, Clone)]
pub struct ErrorForms {
    pub error: DMatrix<f64>,
    pub truth: DMatrix<f64>,
}

impl ErrorForms {
    pub fn new(aperture: &SegmentedAperture, grid: &EvaluationGrid, solver: &ZonalSolver) -> Result<Self> {
        let size = solver.local_nodes().len();
        let pts = grid.local_points();
        let mut basis_on_grid = DMatrix::zeros(size, pts.len());
        let mut column = vec![0.0; size];
        for (g, &p) in pts.iter().enumerate() {
            solver.basis().eval_all(p, &mut column)?;
            basis_on_grid.column_mut(g).copy_from_slice(&column);
        }
        let lagrange_t = lagrange_transposed(solver, &basis_on_grid)?;

        let modes = WAVEFRONT_MODES;
        let flat = Wavefront::new([0.0; WAVEFRONT_MODES]);
        let mut error = DMatrix::zeros(modes, modes);
        let mut truth = DMatrix::zeros(modes, modes);
        for k in 0..aperture.len() {
            let c = aperture.centers()[k];
            let mut at_nodes = DMatrix::zeros(size, modes);
            for (i, &p) in solver.local_nodes().iter().enumerate() {
                let v = flat.modes(p + c);
                for m in 0..modes {
                    at_nodes[(i, m)] = v[m];
                }
            }
            let mut on_grid = DMatrix::zeros(pts.len(), modes);
            for (g, &p) in pts.iter().enumerate() {
                let v = flat.modes(p + c);
                for m in 0..modes {
                    on_grid[(g, m)] = v[m];
                }
            }
            let e = &lagrange_t * &at_nodes - &on_grid;
            error += e.transpose() * &e;
            truth += on_grid.transpose() * &on_grid;
        }
        Ok(ErrorForms { error, truth })
    }

    pub fn rrmse(&self, a: &[f64; WAVEFRONT_MODES]) -> Result<f64> {
        let v = DVector::from_column_slice(a);
        let num = v.dot(&(&self.error * &v));
        let den = v.dot(&(&self.truth * &v));
        if den == 0.0 {
            return Err(Error::ZeroReference);
        }
        Ok((num.max(0.0) / den).sqrt())
    }
}

/// `Lᵀ` (grid × nodes) where `approx(grid) = Lᵀ samples`.
fn lagrange_transposed(solver: &ZonalSolver, basis_on_grid: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    // approx = Bᵀ c with Mᵀ c = f, so approx = Bᵀ M⁻ᵀ f and Lᵀ = (M⁻¹ B)ᵀ.
    let lagrange = solver
        .matrix
        .entries()
        .lu()
        .solve(basis_on_grid)
        .ok_or(Error::SingularSegment { hexagon: 0, sigma_min: solver.interpolator().sigma_min() })?;
    Ok(lagrange.transpose())
}

/// Trial settings shared by every experiment cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub master_seed: u64,
    pub strength: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            trials: 100,
            master_seed: 7,
            strength: 1.0,
        }
    }
}

/// The wavefront of trial `t`; independent of the order, scheme and basis.
pub fn trial_wavefront(model: &TurbulenceModel, config: &ExperimentConfig, trial: usize) -> Wavefront {
    model.sample(&mut rng::stream(config.master_seed, trial as u64))
}

/// Mean RRMSE over the configured trials for one node set and family.
pub fn experiment_cell(
    aperture: &SegmentedAperture,
    grid: &EvaluationGrid,
    nodes: &NodeSet,
    family: Family,
    config: &ExperimentConfig,
) -> Result<f64> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let model = TurbulenceModel::new(config.strength)?;
    let solver = ZonalSolver::new(nodes, family)?;
    let forms = ErrorForms::new(aperture, grid, &solver)?;
    let mut total = 0.0;
    for t in 0..config.trials {
        total += forms.rrmse(&trial_wavefront(&model, config, t).coefficients)?;
    }
    Ok(total / config.trials as f64)
}

/// Anything that can supply disk nodes of a given order.
pub trait NodeSource {
    fn label(&self) -> String;
    fn nodes(&self, order: u32) -> Result<NodeSet>;
}

impl NodeSource for Generator {
    fn label(&self) -> String {
        String::from(self.scheme().name())
    }

    fn nodes(&self, order: u32) -> Result<NodeSet> {
        self.generate(order)
    }
}

/// One `(order, scheme, basis)` cell of an experiment table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub order: u32,
    pub scheme: String,
    pub family: Family,
    pub trials: usize,
    /// Per-cell failure instead of aborting the sweep.
    pub mean_rrmse: core::result::Result<f64, Error>,
}

/// Sweeps orders × sources × families in that nesting order.
pub fn run_experiment(
    orders: &[u32],
    sources: &[&dyn NodeSource],
    families: &[Family],
    config: &ExperimentConfig,
) -> Result<Vec<ExperimentRow>> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let aperture = build_aperture();
    let grid = EvaluationGrid::new(GRID_TARGET)?;
    let mut rows = Vec::new();
    for &order in orders {
        for source in sources {
            let nodes = source.nodes(order);
            for &family in families {
                let mean_rrmse = nodes
                    .as_ref()
                    .map_err(Clone::clone)
                    .and_then(|n| experiment_cell(&aperture, &grid, n, family, config));
                rows.push(ExperimentRow {
                    order,
                    scheme: source.label(),
                    family,
                    trials: config.trials,
                    mean_rrmse,
                });
            }
        }
    }
    Ok(rows)
}
