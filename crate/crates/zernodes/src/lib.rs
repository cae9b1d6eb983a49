//! File formats, parallel table sweeps and the `zernodes` command line on top
//! of [`zernodes_core`].
//!
//! - [`nodefile`]: the `x y` node text format.
//! - [`config`]: TOML run settings and flag overlay.
//! - [`sweep`]: condition, Lebesgue and wavefront tables as CSV.

pub mod config;
pub mod nodefile;
pub mod sweep;

pub use config::{parse_orders, RunConfig};
pub use nodefile::{load_nodes, write_nodes, NodeFileError};
pub use sweep::{CellError, SchemeSpec};
