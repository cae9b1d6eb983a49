//! Plain-text node files: one `x y` pair per line, `#` starts a comment,
//! blank lines are ignored. Numbers always use `.` as the decimal point.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use zernodes_core::samplings::DISK_TOL;
use zernodes_core::{basis_size, NodeSet, Point, Scheme};

/// Nodes may sit this far outside the unit circle (rounding in published
/// tables); they are pulled back onto the circle on load.
pub const FILE_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum NodeFileError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: expected two numbers, found {content:?}")]
    Parse { line: usize, content: String },

    #[error("order {order} needs {expected} nodes, the file has {actual}")]
    Count {
        order: u32,
        expected: usize,
        actual: usize,
    },

    #[error("line {line}: node ({x}, {y}) lies outside the unit disk")]
    Outside { line: usize, x: f64, y: f64 },

    #[error(transparent)]
    Core(#[from] zernodes_core::Error),
}

/// Parses node text for order `n`.
pub fn parse_nodes(text: &str, n: u32, metadata: &str) -> Result<NodeSet, NodeFileError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bad = || NodeFileError::Parse {
            line,
            content: raw.to_string(),
        };
        let mut fields = body.split_whitespace();
        let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad());
        };
        let (x, y) = match (xs.parse::<f64>(), ys.parse::<f64>()) {
            (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => (x, y),
            _ => return Err(bad()),
        };
        let p = Point::new(x, y);
        let r = p.norm();
        if r > 1.0 + FILE_TOL {
            return Err(NodeFileError::Outside { line, x, y });
        }
        points.push(if r > 1.0 { Point::new(x / r, y / r) } else { p });
    }
    let expected = basis_size(n);
    if points.len() != expected {
        return Err(NodeFileError::Count {
            order: n,
            expected,
            actual: points.len(),
        });
    }
    Ok(NodeSet::on_disk(n, Scheme::FileLoaded, points, DISK_TOL, metadata)?)
}

/// Reads and validates a node file for order `n`.
pub fn load_nodes(path: &Path, n: u32) -> Result<NodeSet, NodeFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| NodeFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_nodes(&text, n, &format!("file {}", path.display()))
}

/// Node file text with a provenance header. Coordinates are written in the
/// shortest form that reads back to the same `f64`.
pub fn format_nodes(nodes: &NodeSet) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# scheme={} n={} domain={} points={}",
        nodes.scheme(),
        nodes.order(),
        nodes.domain(),
        nodes.len()
    );
    if let Some(seed) = nodes.seed() {
        let _ = writeln!(out, "# seed={seed}");
    }
    if !nodes.metadata().is_empty() {
        let _ = writeln!(out, "# {}", nodes.metadata());
    }
    for p in nodes.points() {
        let _ = writeln!(out, "{:?} {:?}", p.x, p.y);
    }
    out
}

pub fn write_nodes<W: Write>(mut w: W, nodes: &NodeSet) -> io::Result<()> {
    w.write_all(format_nodes(nodes).as_bytes())
}

/// `<dir>/<scheme>_n<order>.txt`, the layout expected for file-backed schemes.
pub fn node_file_path(dir: &Path, scheme: &str, n: u32) -> PathBuf {
    dir.join(format!("{scheme}_n{n}.txt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use zernodes_core::samplings::ocs_nodes;

    #[test]
    fn round_trip_is_exact() {
        let nodes = ocs_nodes(7).unwrap();
        let back = parse_nodes(&format_nodes(&nodes), 7, "").unwrap();
        assert_eq!(back.points(), nodes.points());
        assert_eq!(back.scheme(), Scheme::FileLoaded);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\n0 0 # centre\n  1 0\n0.0 -1.0\n";
        assert_eq!(parse_nodes(text, 1, "").unwrap().len(), 3);
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(
            parse_nodes("0 0\n1 0\n", 1, ""),
            Err(NodeFileError::Count { expected: 3, actual: 2, .. })
        ));
        assert!(matches!(
            parse_nodes("0 0\n1 0\n0 1.1\n", 1, ""),
            Err(NodeFileError::Outside { line: 3, .. })
        ));
        assert!(matches!(
            parse_nodes("0 0\n1,0 0\n0 1\n", 1, ""),
            Err(NodeFileError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_nodes("0 0 0\n", 1, ""), Err(NodeFileError::Parse { .. })));
        assert!(matches!(parse_nodes("nan 0\n", 1, ""), Err(NodeFileError::Parse { .. })));
    }

    #[test]
    fn rounding_slack_is_pulled_onto_the_circle() {
        let set = parse_nodes("0 0\n1.0000000005 0\n0 -1\n", 1, "").unwrap();
        assert_eq!(set.points()[1], Point::new(1.0, 0.0));
    }
}
