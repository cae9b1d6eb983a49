use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use zernodes::config::{parse_families, parse_orders, split_list, RunConfig};
use zernodes::nodefile::write_nodes;
use zernodes::sweep::{
    condition_table, lebesgue_table, nodes_on, wavefront_table, write_condition_csv,
    write_experiment_csv, write_lebesgue_csv, SchemeSpec,
};
use zernodes_core::collocation::LEBESGUE_GRID;
use zernodes_core::wavefront::ExperimentConfig;
use zernodes_core::{Domain, Family};

/// Interpolation nodes, collocation conditioning and zonal wavefront
/// reconstruction for Zernike-like bases.
#[derive(Parser, Debug)]
#[command(name = "zernodes", version)]
struct Cli {
    /// TOML file with default settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory of `<scheme>_n<order>.txt` node files (beats ZERNODES_NODE_DIR
    /// and the config file).
    #[arg(long, global = true)]
    node_dir: Option<PathBuf>,

    /// Output file; `-` or nothing writes to stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a node set, on the disk or carried onto another domain.
    Nodes(NodesArgs),
    /// Condition numbers of collocation matrices as CSV.
    ConditionTable(TableArgs),
    /// Grid estimates of Lebesgue constants as CSV.
    Lebesgue(LebesgueArgs),
    /// Mean zonal reconstruction error over random wavefronts as CSV.
    Wavefront(WavefrontArgs),
}

#[derive(Args, Debug, Default)]
struct Geometry {
    /// disk, hexagon, ellipse or annulus.
    #[arg(long)]
    domain: Option<String>,
    /// Ellipse semi-major axis, or annulus outer radius.
    #[arg(long = "A")]
    major: Option<f64>,
    /// Ellipse semi-minor axis.
    #[arg(long = "B")]
    minor: Option<f64>,
    /// Annulus inner radius.
    #[arg(long = "a")]
    inner: Option<f64>,
    /// Radial shift for annulus nodes coming from the disk center.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct Source {
    /// Read nodes from this file instead of generating them.
    #[arg(long)]
    from_file: Option<PathBuf>,
    /// Seed for the random-thinned scheme.
    #[arg(long)]
    seed: Option<u64>,
    /// Mesh size of approximate Fekete points, in multiples of N.
    #[arg(long)]
    mesh_factor: Option<usize>,
}

#[derive(Args, Debug)]
struct NodesArgs {
    /// ocs, carnicer, cuyt, spiral, random, afp, or a file-backed name.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    geometry: Geometry,
    #[command(flatten)]
    source: Source,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Orders, e.g. `1..30`, `5` or `2,4,8`.
    #[arg(long, conflicts_with = "n")]
    orders: Option<String>,
    /// A single order.
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated scheme names.
    #[arg(long, alias = "scheme", value_delimiter = ',')]
    schemes: Vec<String>,
    /// Comma-separated basis families: Z, K, H, E, O, C.
    #[arg(long, alias = "basis", value_delimiter = ',')]
    bases: Vec<String>,
    #[command(flatten)]
    geometry: Geometry,
    #[command(flatten)]
    source: Source,
}

#[derive(Args, Debug)]
struct LebesgueArgs {
    #[command(flatten)]
    table: TableArgs,
    /// Radial lines of the evaluation grid.
    #[arg(long)]
    radial: Option<usize>,
    /// Angular lines of the evaluation grid.
    #[arg(long)]
    angular: Option<usize>,
}

#[derive(Args, Debug)]
struct WavefrontArgs {
    #[arg(long, conflicts_with = "n")]
    orders: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, alias = "scheme", value_delimiter = ',')]
    schemes: Vec<String>,
    /// K and/or H.
    #[arg(long, alias = "basis", value_delimiter = ',')]
    bases: Vec<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed of the trial wavefronts (and of random thinning).
    #[arg(long)]
    seed: Option<u64>,
    /// Turbulence strength scaling every coefficient.
    #[arg(long)]
    strength: Option<f64>,
    #[arg(long)]
    from_file: Option<PathBuf>,
    #[arg(long)]
    mesh_factor: Option<usize>,
}

fn non_empty(v: &[String]) -> Option<Vec<String>> {
    let v = split_list(v);
    (!v.is_empty()).then_some(v)
}

impl Geometry {
    fn apply(&self, c: &mut RunConfig) {
        c.domain = self.domain.clone();
        c.major = self.major;
        c.minor = self.minor;
        c.inner = self.inner;
        c.epsilon = self.epsilon;
    }
}

impl Source {
    fn apply(&self, c: &mut RunConfig) {
        c.from_file = self.from_file.clone();
        c.seed = self.seed;
        c.mesh_factor = self.mesh_factor;
    }
}

impl TableArgs {
    fn flags(&self) -> RunConfig {
        let mut c = RunConfig {
            orders: self.orders.clone(),
            n: self.n,
            schemes: non_empty(&self.schemes),
            bases: non_empty(&self.bases),
            ..Default::default()
        };
        self.geometry.apply(&mut c);
        self.source.apply(&mut c);
        c
    }
}

impl Command {
    fn flags(&self) -> RunConfig {
        match self {
            Command::Nodes(a) => {
                let mut c = RunConfig {
                    n: a.n,
                    schemes: a.scheme.clone().map(|s| vec![s]),
                    ..Default::default()
                };
                a.geometry.apply(&mut c);
                a.source.apply(&mut c);
                c
            }
            Command::ConditionTable(t) => t.flags(),
            Command::Lebesgue(l) => RunConfig {
                radial: l.radial,
                angular: l.angular,
                ..l.table.flags()
            },
            Command::Wavefront(w) => RunConfig {
                orders: w.orders.clone(),
                n: w.n,
                schemes: non_empty(&w.schemes),
                bases: non_empty(&w.bases),
                trials: w.trials,
                seed: w.seed,
                strength: w.strength,
                from_file: w.from_file.clone(),
                mesh_factor: w.mesh_factor,
                ..Default::default()
            },
        }
    }
}

/// Orders from `n` or `orders`, else `default`.
fn orders_of(c: &RunConfig, default: &str) -> anyhow::Result<Vec<u32>> {
    Ok(match (c.n, &c.orders) {
        (Some(n), _) => vec![n],
        (None, Some(o)) => parse_orders(o)?,
        (None, None) => parse_orders(default)?,
    })
}

fn schemes_of(c: &RunConfig, node_dir: &Path, default: &[&str]) -> Vec<SchemeSpec> {
    let names: Vec<String> = match &c.schemes {
        Some(s) => s.clone(),
        None => default.iter().map(|s| s.to_string()).collect(),
    };
    names.iter().map(|s| SchemeSpec::parse(s, c, node_dir)).collect()
}

/// Bases from the config, else the table family of `--domain`, else `Z`.
/// Bases that do not live on an explicit `--domain` are rejected.
fn families_of(c: &RunConfig) -> anyhow::Result<Vec<Family>> {
    let domain = c.domain.as_deref().map(|d| c.domain_named(d)).transpose()?;
    let families = match &c.bases {
        Some(b) => parse_families(b)?,
        None => vec![match domain {
            None | Some(Domain::Disk) => Family::Z,
            Some(Domain::Hexagon) => Family::H,
            Some(Domain::Ellipse { .. }) => Family::E,
            Some(Domain::Annulus { .. }) => Family::O,
        }],
    };
    if let Some(d) = domain {
        for &f in &families {
            if c.domain_for(f)? != d {
                bail!("basis {f} is not defined on the {d}");
            }
        }
    }
    Ok(families)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file_config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut flags = cli.command.flags();
    flags.output = cli.output.clone();
    let config = file_config.overlay(flags);
    let node_dir = config.resolve_node_dir(cli.node_dir.as_deref());
    log::debug!("settings: {config:?}, node directory {}", node_dir.display());

    let mut buffer = Vec::new();
    match &cli.command {
        Command::Nodes(_) => {
            let n = config.n.context("`nodes` needs --n")?;
            let scheme = match config.schemes.as_deref() {
                Some([s]) => s.clone(),
                Some(_) => bail!("`nodes` takes exactly one scheme"),
                None => bail!("`nodes` needs --scheme"),
            };
            let spec = SchemeSpec::parse(&scheme, &config, &node_dir);
            let disk = spec.nodes(n)?;
            let domain = config.domain_named(config.domain.as_deref().unwrap_or("disk"))?;
            write_nodes(&mut buffer, &nodes_on(&disk, domain, config.epsilon())?)?;
        }
        Command::ConditionTable(_) => {
            let orders = orders_of(&config, "1..30")?;
            let schemes = schemes_of(&config, &node_dir, &["ocs", "carnicer", "cuyt"]);
            let rows = condition_table(&orders, &schemes, &families_of(&config)?, &config)?;
            write_condition_csv(&mut buffer, &rows)?;
        }
        Command::Lebesgue(_) => {
            let orders = orders_of(&config, "1..10")?;
            let schemes = schemes_of(&config, &node_dir, &["ocs"]);
            let grid = (
                config.radial.unwrap_or(LEBESGUE_GRID.0),
                config.angular.unwrap_or(LEBESGUE_GRID.1),
            );
            if grid.0 < 2 || grid.1 < 1 {
                bail!("the Lebesgue grid needs at least 2 radial and 1 angular lines");
            }
            let rows = lebesgue_table(&orders, &schemes, &families_of(&config)?, &config, grid)?;
            write_lebesgue_csv(&mut buffer, &rows)?;
        }
        Command::Wavefront(_) => {
            let orders = orders_of(&config, "2..20")?;
            let schemes = schemes_of(&config, &node_dir, &["ocs"]);
            let families = match &config.bases {
                Some(b) => parse_families(b)?,
                None => vec![Family::K, Family::H],
            };
            let defaults = ExperimentConfig::default();
            let experiment = ExperimentConfig {
                trials: config.trials.unwrap_or(defaults.trials),
                master_seed: config.seed.unwrap_or(defaults.master_seed),
                strength: config.strength.unwrap_or(defaults.strength),
            };
            let rows = wavefront_table(&orders, &schemes, &families, &experiment)?;
            write_experiment_csv(&mut buffer, &rows)?;
        }
    }
    emit(config.output.as_deref(), &buffer)
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match output {
        None => io::stdout().lock().write_all(bytes)?,
        Some(p) if p == Path::new("-") => io::stdout().lock().write_all(bytes)?,
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            w.write_all(bytes)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
