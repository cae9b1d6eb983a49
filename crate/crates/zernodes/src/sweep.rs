//! Parallel sweeps over orders, schemes and basis families, and their CSV
//! tables. Cells run on the rayon pool; rows come back in sweep order.

use std::io;
use std::path::PathBuf;

use rayon::prelude::*;
use zernodes_core::collocation::{condition_number, lebesgue_constant, ConditionReport};
use zernodes_core::samplings::{Generator, CARNICER_EXPONENT};
use zernodes_core::wavefront::{
    build_aperture, experiment_cell, EvaluationGrid, ExperimentConfig, GRID_TARGET,
};
use zernodes_core::{assemble, transfer_nodes_with_epsilon, Basis, Domain, Family, NodeSet};

use crate::config::{ConfigError, RunConfig};
use crate::nodefile::{load_nodes, node_file_path};

/// Where a scheme's nodes come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SchemeSpec {
    Generated(Generator),
    /// `<dir>/<name>_n<order>.txt`, e.g. published Lebesgue or Fekete points.
    Directory { name: String, dir: PathBuf },
    /// One explicit file, valid for a single order.
    File { name: String, path: PathBuf },
}

impl SchemeSpec {
    /// Resolves a scheme name. `--from-file` turns any name into a file
    /// scheme; unknown names are looked up in `node_dir`.
    pub fn parse(name: &str, config: &RunConfig, node_dir: &std::path::Path) -> SchemeSpec {
        let name = name.trim().to_ascii_lowercase();
        if let Some(path) = &config.from_file {
            return SchemeSpec::File {
                name,
                path: path.clone(),
            };
        }
        let generator = match name.as_str() {
            "ocs" => Generator::Ocs,
            "carnicer" => Generator::Carnicer {
                exponent: CARNICER_EXPONENT,
            },
            "cuyt" => Generator::Cuyt,
            "spiral" => Generator::Spiral,
            "random" => Generator::RandomThinned {
                seed: config.seed.unwrap_or(0),
            },
            "afp" => Generator::ApproxFekete {
                mesh_factor: config.mesh_factor.unwrap_or(10),
            },
            _ => {
                return SchemeSpec::Directory {
                    name,
                    dir: node_dir.to_path_buf(),
                }
            }
        };
        SchemeSpec::Generated(generator)
    }

    pub fn label(&self) -> String {
        match self {
            SchemeSpec::Generated(g) => g.scheme().name().to_string(),
            SchemeSpec::Directory { name, .. } | SchemeSpec::File { name, .. } => name.clone(),
        }
    }

    /// Disk nodes of order `n`.
    pub fn nodes(&self, n: u32) -> Result<NodeSet, CellError> {
        match self {
            SchemeSpec::Generated(g) => g.generate(n).map_err(CellError::failed),
            SchemeSpec::Directory { name, dir } => {
                let path = node_file_path(dir, name, n);
                if !path.is_file() {
                    return Err(CellError::Missing(path));
                }
                load_nodes(&path, n).map_err(CellError::failed)
            }
            SchemeSpec::File { path, .. } => {
                if !path.is_file() {
                    return Err(CellError::Missing(path.clone()));
                }
                load_nodes(path, n).map_err(CellError::failed)
            }
        }
    }
}

/// Soft failure of one table cell; the sweep carries on.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CellError {
    #[error("node file {} not found", .0.display())]
    Missing(PathBuf),
    #[error("{0}")]
    Failed(String),
}

impl CellError {
    fn failed(e: impl std::fmt::Display) -> Self {
        CellError::Failed(e.to_string())
    }

    /// The token written in place of a value.
    pub fn marker(&self) -> &'static str {
        match self {
            CellError::Missing(_) => "missing",
            CellError::Failed(_) => "error",
        }
    }
}

/// Nodes of `family`'s domain, carried over from the disk when needed.
pub fn nodes_on(nodes: &NodeSet, domain: Domain, epsilon: f64) -> zernodes_core::Result<NodeSet> {
    if domain == Domain::Disk {
        Ok(nodes.clone())
    } else {
        transfer_nodes_with_epsilon(domain, nodes, epsilon)
    }
}

/// Each family with the domain it lives on.
fn family_domains(families: &[Family], config: &RunConfig) -> Result<Vec<(Family, Domain)>, ConfigError> {
    families
        .iter()
        .map(|&f| Ok((f, config.domain_for(f)?)))
        .collect()
}

/// Evaluates `cell` for every `(order, scheme)` pair in parallel and
/// flattens the per-family results in order.
fn sweep<T, F>(orders: &[u32], schemes: &[SchemeSpec], cell: F) -> Vec<T>
where
    T: Send,
    F: Fn(u32, &SchemeSpec) -> Vec<T> + Sync,
{
    let cells: Vec<(u32, &SchemeSpec)> = orders
        .iter()
        .flat_map(|&n| schemes.iter().map(move |s| (n, s)))
        .collect();
    let done: Vec<Vec<T>> = cells
        .par_iter()
        .map(|&(n, s)| {
            log::info!("n={n} scheme={}", s.label());
            cell(n, s)
        })
        .collect();
    done.into_iter().flatten().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub order: u32,
    pub scheme: String,
    pub family: Family,
    pub domain: &'static str,
    pub report: Result<ConditionReport, CellError>,
}

/// `κ₂` for every order × scheme × family.
pub fn condition_table(
    orders: &[u32],
    schemes: &[SchemeSpec],
    families: &[Family],
    config: &RunConfig,
) -> Result<Vec<ConditionRow>, ConfigError> {
    let targets = family_domains(families, config)?;
    let epsilon = config.epsilon();
    Ok(sweep(orders, schemes, |n, spec| {
        let nodes = spec.nodes(n);
        targets
            .iter()
            .map(|&(family, domain)| {
                let report = nodes.clone().and_then(|nodes| {
                    let moved = nodes_on(&nodes, domain, epsilon).map_err(CellError::failed)?;
                    let basis = Basis::new(domain, family).map_err(CellError::failed)?;
                    let m = assemble(&basis, &moved).map_err(CellError::failed)?;
                    condition_number(&m).map_err(CellError::failed)
                });
                ConditionRow {
                    order: n,
                    scheme: spec.label(),
                    family,
                    domain: domain.name(),
                    report,
                }
            })
            .collect()
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LebesgueRow {
    pub order: u32,
    pub scheme: String,
    pub family: Family,
    pub domain: &'static str,
    pub lebesgue: Result<f64, CellError>,
}

/// Grid estimates of the Lebesgue constant for every order × scheme × family.
pub fn lebesgue_table(
    orders: &[u32],
    schemes: &[SchemeSpec],
    families: &[Family],
    config: &RunConfig,
    grid: (usize, usize),
) -> Result<Vec<LebesgueRow>, ConfigError> {
    let targets = family_domains(families, config)?;
    let epsilon = config.epsilon();
    Ok(sweep(orders, schemes, |n, spec| {
        let nodes = spec.nodes(n);
        targets
            .iter()
            .map(|&(family, domain)| {
                let lebesgue = nodes.clone().and_then(|nodes| {
                    let moved = nodes_on(&nodes, domain, epsilon).map_err(CellError::failed)?;
                    let basis = Basis::new(domain, family).map_err(CellError::failed)?;
                    lebesgue_constant(&moved, &basis, grid.0, grid.1).map_err(CellError::failed)
                });
                LebesgueRow {
                    order: n,
                    scheme: spec.label(),
                    family,
                    domain: domain.name(),
                    lebesgue,
                }
            })
            .collect()
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub order: u32,
    pub scheme: String,
    pub family: Family,
    pub trials: usize,
    pub mean_rrmse: Result<f64, CellError>,
}

/// Mean wavefront RRMSE for every order × scheme × hexagon family. The
/// trial wavefronts depend only on the master seed and trial index, so every
/// cell sees the same draws.
pub fn wavefront_table(
    orders: &[u32],
    schemes: &[SchemeSpec],
    families: &[Family],
    experiment: &ExperimentConfig,
) -> Result<Vec<ExperimentRecord>, ConfigError> {
    if experiment.trials == 0 {
        return Err(zernodes_core::Error::InvalidArgument("at least one trial is required".into()).into());
    }
    if let Some(&f) = families.iter().find(|f| !matches!(f, Family::K | Family::H)) {
        return Err(zernodes_core::Error::FamilyDomainMismatch {
            family: f.name(),
            domain: "hexagon",
        }
        .into());
    }
    let aperture = build_aperture();
    let grid = EvaluationGrid::new(GRID_TARGET)?;
    Ok(sweep(orders, schemes, |n, spec| {
        let nodes = spec.nodes(n);
        families
            .iter()
            .map(|&family| ExperimentRecord {
                order: n,
                scheme: spec.label(),
                family,
                trials: experiment.trials,
                mean_rrmse: nodes.clone().and_then(|nodes| {
                    experiment_cell(&aperture, &grid, &nodes, family, experiment)
                        .map_err(CellError::failed)
                }),
            })
            .collect()
    }))
}

/// `d.dddde+XX` with `digits` decimals, as in published tables.
pub fn scientific(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else { "inf".into() };
    }
    let s = format!("{v:.digits$e}");
    let (mantissa, exp) = s.split_once('e').expect("`e` format always has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Condition numbers to four decimals, switching to scientific notation from
/// `1e3` on (`908.9529`, then `1.2301e+03`).
pub fn format_kappa(k: f64) -> String {
    if k.is_finite() && k < 1e3 {
        format!("{k:.4}")
    } else {
        scientific(k, 4)
    }
}

fn log_failure(what: &str, order: u32, scheme: &str, family: Family, e: &CellError) {
    log::warn!("{what} n={order} scheme={scheme} basis={family}: {e}");
}

pub fn write_condition_csv<W: io::Write>(w: W, rows: &[ConditionRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "scheme", "basis", "domain", "kappa2", "sigma_max", "sigma_min"])?;
    for r in rows {
        let n = r.order.to_string();
        let head = [n.as_str(), &r.scheme, r.family.name(), r.domain];
        match &r.report {
            Ok(rep) => out.write_record(head.iter().copied().chain([
                format_kappa(rep.kappa2).as_str(),
                &scientific(rep.sigma_max, 10),
                &scientific(rep.sigma_min, 10),
            ]))?,
            Err(e) => {
                log_failure("condition", r.order, &r.scheme, r.family, e);
                out.write_record(head.iter().copied().chain([e.marker(), "", ""]))?
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_lebesgue_csv<W: io::Write>(w: W, rows: &[LebesgueRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "scheme", "basis", "domain", "lebesgue"])?;
    for r in rows {
        let value = match &r.lebesgue {
            Ok(v) => format!("{v:.4}"),
            Err(e) => {
                log_failure("lebesgue", r.order, &r.scheme, r.family, e);
                e.marker().to_string()
            }
        };
        out.write_record([&r.order.to_string(), &r.scheme, r.family.name(), r.domain, &value])?;
    }
    out.flush()?;
    Ok(())
}

/// `n,scheme,basis,mean_rrmse,trials`; the RRMSE is a fraction, not percent.
pub fn write_experiment_csv<W: io::Write>(w: W, rows: &[ExperimentRecord]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "scheme", "basis", "mean_rrmse", "trials"])?;
    for r in rows {
        let value = match &r.mean_rrmse {
            Ok(v) => scientific(*v, 6),
            Err(e) => {
                log_failure("wavefront", r.order, &r.scheme, r.family, e);
                e.marker().to_string()
            }
        };
        out.write_record([
            &r.order.to_string(),
            &r.scheme,
            r.family.name(),
            &value,
            &r.trials.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
