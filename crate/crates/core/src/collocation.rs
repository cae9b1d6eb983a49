//! Collocation matrices, 2-norm conditioning, interpolation solves and
//! Lebesgue constants.
//!
//! Orientation is fixed: entry `(i, j)` is basis function `i` evaluated at node
//! `j`, so rows follow the single index and columns follow node order. The
//! interpolation coefficients `c` of data `f` therefore solve `Mᵀ c = f`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use nalgebra::{DMatrix, DVector, LU};

use crate::domains::{Basis, Domain, Family};
use crate::error::{Error, Result};
use crate::samplings::{NodeSet, Scheme};
use crate::zernike::{basis_size, Point, Polar};

/// Where a collocation matrix came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub order: u32,
    pub scheme: Scheme,
    pub family: Family,
    pub domain: Domain,
    pub seed: Option<u64>,
}

/// Stored as `scale · unscaled`, with a constant normalizing factor `q` kept
/// out of the entries: the matrix of `K`, `E` or `C` at transferred nodes is
/// then exactly the disk matrix, and its conditioning is bit-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationMatrix {
    entries: DMatrix<f64>,
    scale: f64,
    provenance: Provenance,
}

impl CollocationMatrix {
    /// The full matrix `(B_i(s_j))`.
    pub fn entries(&self) -> DMatrix<f64> {
        if self.scale == 1.0 {
            self.entries.clone()
        } else {
            &self.entries * self.scale
        }
    }

    /// The entries without the constant factor.
    pub fn unscaled(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Constant factor of every entry; `1` unless `q` is a constant `≠ 1`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Reorders the columns, i.e. the nodes.
    pub fn permute_columns(&self, perm: &[usize]) -> CollocationMatrix {
        let entries = DMatrix::from_fn(self.size(), self.size(), |i, j| self.entries[(i, perm[j])]);
        CollocationMatrix {
            entries,
            scale: self.scale,
            provenance: self.provenance,
        }
    }
}

/// Builds `(B_{i}(s_j))` for `i, j < N`.
pub fn assemble(basis: &Basis, nodes: &NodeSet) -> Result<CollocationMatrix> {
    if nodes.domain() != basis.domain() {
        return Err(Error::InvalidArgument(alloc::format!(
            "nodes live on the {} but the basis on the {}",
            nodes.domain(),
            basis.domain()
        )));
    }
    let size = basis_size(nodes.order());
    if nodes.len() != size {
        return Err(Error::NodeCount {
            order: nodes.order(),
            expected: size,
            actual: nodes.len(),
        });
    }
    let mut entries = DMatrix::zeros(size, size);
    let mut column = vec![0.0; size];
    let preimages = nodes.preimages();
    for (j, &p) in nodes.points().iter().enumerate() {
        let outside = Error::OutsideDomain {
            index: j,
            x: p.x,
            y: p.y,
            domain: basis.domain().name(),
        };
        match preimages {
            Some(src) if basis.domain().contains(p) => {
                basis.eval_all_unscaled(p, src[j].to_polar(), &mut column)
            }
            Some(_) => return Err(outside),
            None => {
                let disk = basis.domain().inverse_polar(p).map_err(|_| outside)?;
                basis.eval_all_unscaled(p, disk, &mut column)
            }
        }
        for (i, &v) in column.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
            entries[(i, j)] = v;
        }
    }
    Ok(CollocationMatrix {
        entries,
        scale: basis.constant_q().unwrap_or(1.0),
        provenance: Provenance {
            order: nodes.order(),
            scheme: nodes.scheme(),
            family: basis.family(),
            domain: basis.domain(),
            seed: nodes.seed(),
        },
    })
}

/// 2-norm conditioning of a collocation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub provenance: Provenance,
    /// `sigma_max / sigma_min`; infinite when `sigma_min` is zero or subnormal.
    pub kappa2: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
}

/// All singular values, largest first.
pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(Error::SvdFailed)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// `κ₂ = σ_max / σ_min` from a full SVD.
pub fn condition_number(m: &CollocationMatrix) -> Result<ConditionReport> {
    if let Some((i, j)) = find_non_finite(&m.entries) {
        return Err(Error::NonFinite { row: i, col: j });
    }
    let s = singular_values(&m.entries)?;
    let top = s.first().copied().unwrap_or(0.0);
    let bottom = s.last().copied().unwrap_or(0.0);
    let kappa2 = if bottom.is_normal() { top / bottom } else { f64::INFINITY };
    Ok(ConditionReport {
        provenance: m.provenance,
        kappa2,
        sigma_max: top * m.scale.abs(),
        sigma_min: bottom * m.scale.abs(),
    })
}

fn find_non_finite(m: &DMatrix<f64>) -> Option<(usize, usize)> {
    (0..m.ncols())
        .flat_map(|j| (0..m.nrows()).map(move |i| (i, j)))
        .find(|&(i, j)| !m[(i, j)].is_finite())
}

/// Factored interpolation problem for one collocation matrix.
#[derive(Debug, Clone)]
pub struct Interpolator {
    transpose_lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    transpose: DMatrix<f64>,
    sigma_min: f64,
    sigma_max: f64,
}

impl Interpolator {
    /// Fails with [`Error::Singular`] when `σ_min <= N ε σ_max`.
    pub fn new(m: &CollocationMatrix) -> Result<Self> {
        let full = m.entries();
        let s = singular_values(&full)?;
        let sigma_max = s.first().copied().unwrap_or(0.0);
        let sigma_min = s.last().copied().unwrap_or(0.0);
        if !(sigma_min > sigma_max * m.size() as f64 * f64::EPSILON) {
            return Err(Error::Singular { sigma_min });
        }
        let transpose = full.transpose();
        Ok(Interpolator {
            transpose_lu: transpose.clone().lu(),
            transpose,
            sigma_min,
            sigma_max,
        })
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    /// Coefficients `c` with `Mᵀ c = values`.
    pub fn coefficients(&self, values: &[f64]) -> Result<Vec<f64>> {
        let n = self.transpose.nrows();
        if values.len() != n {
            return Err(Error::InvalidArgument(alloc::format!(
                "expected {n} values, got {}",
                values.len()
            )));
        }
        let rhs = DVector::from_column_slice(values);
        let c = self
            .transpose_lu
            .solve(&rhs)
            .ok_or(Error::Singular { sigma_min: self.sigma_min })?;
        Ok(c.iter().copied().collect())
    }

    /// `‖Mᵀ c - values‖_∞`.
    pub fn residual(&self, coefficients: &[f64], values: &[f64]) -> f64 {
        let c = DVector::from_column_slice(coefficients);
        let r = &self.transpose * c;
        r.iter()
            .zip(values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Solution of an interpolation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolation {
    pub coefficients: Vec<f64>,
    /// `‖Mᵀ c - values‖_∞`.
    pub residual: f64,
}

/// Solves `Mᵀ c = values`, where `values[j]` is the datum at node `j`.
pub fn solve_interpolation(m: &CollocationMatrix, values: &[f64]) -> Result<Interpolation> {
    let interp = Interpolator::new(m)?;
    let coefficients = interp.coefficients(values)?;
    let residual = interp.residual(&coefficients, values);
    Ok(Interpolation {
        coefficients,
        residual,
    })
}

/// Polar tensor grid on the disk, `radial × angular` points with radii
/// `i / (radial - 1)`, mapped onto `domain`.
pub fn domain_grid(domain: Domain, radial: usize, angular: usize) -> Vec<Point> {
    let mut grid = Vec::with_capacity(radial * angular);
    for i in 0..radial {
        let rho = if radial > 1 { i as f64 / (radial - 1) as f64 } else { 0.0 };
        for k in 0..angular {
            let disk = Polar::new(rho, TAU * k as f64 / angular as f64).to_cartesian();
            grid.push(domain.forward(disk));
        }
    }
    grid
}

/// Default Lebesgue grid: 200 radii by 512 angles.
pub const LEBESGUE_GRID: (usize, usize) = (200, 512);

/// Grid estimate (a lower bound) of the Lebesgue constant
/// `max_x Σ_j |ℓ_j(x)|`, with `ℓ(x) = M⁻¹ b(x)` the Lagrange functions.
pub fn lebesgue_constant(
    nodes: &NodeSet,
    basis: &Basis,
    radial: usize,
    angular: usize,
) -> Result<f64> {
    let m = assemble(basis, nodes)?;
    let full = m.entries();
    let s = singular_values(&full)?;
    let (smax, smin) = (s[0], s[s.len() - 1]);
    if !(smin > smax * m.size() as f64 * f64::EPSILON) {
        return Err(Error::Singular { sigma_min: smin });
    }
    let size = m.size();
    let lu = full.lu();
    let grid = domain_grid(basis.domain(), radial, angular);
    const CHUNK: usize = 2048;
    let mut worst: f64 = 0.0;
    let mut column = vec![0.0; size];
    for chunk in grid.chunks(CHUNK) {
        let mut rhs = DMatrix::zeros(size, chunk.len());
        for (c, &p) in chunk.iter().enumerate() {
            basis.eval_all(p, &mut column)?;
            rhs.column_mut(c).copy_from_slice(&column);
        }
        let lagrange = lu.solve(&rhs).ok_or(Error::Singular { sigma_min: smin })?;
        for col in lagrange.column_iter() {
            worst = worst.max(col.iter().map(|v| v.abs()).sum());
        }
    }
    Ok(worst)
}
