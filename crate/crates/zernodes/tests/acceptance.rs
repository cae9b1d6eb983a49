//! Acceptance gate: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any fails.
//!
//! Published Lebesgue and Fekete columns are checked only when node files
//! `lebesgue_n<n>.txt` / `fekete_n<n>.txt` are found in `$ZERNODES_NODE_DIR`.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use zernodes::nodefile::{load_nodes, node_file_path};
use zernodes::sweep::nodes_on;
use zernodes_core::collocation::{assemble, condition_number};
use zernodes_core::domains::{r_alpha, HEX_ALPHA};
use zernodes_core::quadrature::gauss_legendre;
use zernodes_core::samplings::{
    approximate_fekete, carnicer_nodes, carnicer_radii, cuyt_nodes, ocs_nodes, ocs_radii,
    random_thinned_nodes, spiral_nodes, CARNICER_EXPONENT,
};
use zernodes_core::wavefront::{
    build_aperture, experiment_cell, EvaluationGrid, ExperimentConfig, GRID_TARGET,
};
use zernodes_core::{
    basis_size, transfer_nodes_with_epsilon, Basis, Domain, Family, NodeSet, Point, Result,
};

const DASH: f64 = f64::NAN;

/// Columns: n, Fekete, Lebesgue, Cuyt, Carnicer, OCS. `DASH` marks no entry.
type Row = [f64; 6];

/// κ₂ of `Z_N` on the disk.
const DISK_TABLE: [Row; 30] = [
    [1.0, 1.5399, 1.4142, 1.4142, 1.4142, 1.0894],
    [2.0, 2.7439, 2.7324, 2.7324, 2.7324, 1.3050],
    [3.0, 3.2536, 3.1225, 3.1566, 3.1581, 1.7631],
    [4.0, 3.4446, 3.3015, 3.3225, 3.2647, 2.0453],
    [5.0, 4.6120, 3.9513, 4.3097, 4.2150, 2.4867],
    [6.0, 4.9542, 4.0784, 4.6605, 4.4578, 2.7353],
    [7.0, 5.6333, 4.9161, 5.3029, 5.1572, 3.2308],
    [8.0, 6.3214, 5.1008, 6.1798, 5.5954, 3.4889],
    [9.0, 8.3085, 5.3493, 7.3072, 6.2337, 4.0410],
    [10.0, 8.2548, 6.3572, 8.8531, 6.9373, 4.3396],
    [11.0, 11.9448, 6.7369, 10.8302, 7.7707, 4.9642],
    [12.0, 17.8157, 7.0520, 13.5731, 8.7855, 5.3384],
    [13.0, 18.5226, 8.0623, 17.1568, 9.9757, 6.0638],
    [14.0, 12.6567, 8.4132, 22.0487, 11.4031, 6.5551],
    [15.0, 14.0587, 8.4660, 28.4848, 13.0202, 7.4148],
    [16.0, 17.1278, 9.4538, 37.2457, 14.9912, 8.0713],
    [17.0, 31.5826, 9.8407, 48.8657, 17.2379, 9.1269],
    [18.0, 33.1363, 10.0008, 64.6647, 19.9636, 10.0257],
    [19.0, 29.6446, 10.9025, 85.7326, 23.1097, 11.3638],
    [20.0, 46.7642, 10.4536, 114.3812, 26.9060, 12.6065],
    [21.0, DASH, 11.2767, 152.7292, 31.3207, 14.3577],
    [22.0, DASH, 12.0337, 204.8834, 36.7983, 16.1049],
    [23.0, DASH, 12.9792, 274.9192, 44.4349, 18.4636],
    [24.0, DASH, 13.0622, 370.2150, 54.7430, 20.9946],
    [25.0, DASH, 13.8224, 498.5231, 67.0134, 24.2573],
    [26.0, DASH, 14.4974, 673.2165, 83.3803, 28.7151],
    [27.0, DASH, 16.2366, 908.9529, 102.8985, 34.0948],
    [28.0, DASH, 15.2266, 1.2301e+03, 128.9610, 40.7343],
    [29.0, DASH, 16.4605, 1.6643e+03, 160.1399, 48.8196],
    [30.0, DASH, 16.3907, 2.2562e+03, 201.7801, 58.7650],
];

/// κ₂ of `H_N` on the regular hexagon.
const HEXAGON_TABLE: [Row; 30] = [
    [1.0, 1.5424, 1.4142, 1.4142, 1.4142, 1.0894],
    [2.0, 2.6644, 2.6381, 2.6381, 2.6381, 1.3022],
    [3.0, 3.4047, 3.0600, 3.0648, 3.0662, 1.7487],
    [4.0, 3.4646, 3.3446, 3.3502, 3.3665, 2.0837],
    [5.0, 4.7611, 3.8632, 4.2325, 4.1088, 2.5098],
    [6.0, 5.1265, 4.1627, 4.7841, 4.5872, 2.7742],
    [7.0, 5.6318, 4.9381, 5.3100, 5.1008, 3.2715],
    [8.0, 6.4440, 5.3006, 6.3034, 5.7390, 3.5458],
    [9.0, 8.4318, 5.5113, 7.4074, 6.2807, 4.1172],
    [10.0, 8.2043, 6.6362, 8.9542, 7.0857, 4.4395],
    [11.0, 12.2404, 6.7054, 11.0277, 7.8981, 5.0903],
    [12.0, 18.6916, 7.1561, 13.8663, 8.9648, 5.4859],
    [13.0, 18.9939, 8.2517, 17.6401, 10.2007, 6.2447],
    [14.0, 12.3993, 8.6073, 22.7265, 11.6907, 6.7554],
    [15.0, 14.5990, 8.9438, 29.5367, 13.4182, 7.6654],
    [16.0, 17.8455, 9.2566, 38.7135, 15.4657, 8.3408],
    [17.0, 30.3842, 10.1587, 51.0616, 17.8722, 9.4625],
    [18.0, 34.4056, 10.4381, 67.7225, 20.7151, 10.3709],
    [19.0, 30.0170, 11.5052, 90.2043, 24.0800, 11.7973],
    [20.0, 48.9868, 10.9410, 120.5793, 28.0594, 13.0385],
    [21.0, DASH, 11.8041, 161.6430, 32.7823, 14.9107],
    [22.0, DASH, 12.1411, 217.2085, 38.3790, 16.6391],
    [23.0, DASH, 13.1619, 292.4459, 45.1537, 19.1885],
    [24.0, DASH, 13.0789, 394.3992, 55.5390, 22.0302],
    [25.0, DASH, 14.3365, 532.6510, 68.0373, 25.8231],
    [26.0, DASH, 15.0311, 720.2371, 84.7075, 30.5322],
    [27.0, DASH, 16.7740, 974.9349, 104.5959, 36.3070],
    [28.0, DASH, 15.3181, 1.3209e+03, 131.1732, 43.3877],
    [29.0, DASH, 16.1864, 1.7912e+03, 162.9679, 52.0749],
    [30.0, DASH, 16.4365, 2.4308e+03, 205.4732, 62.7200],
];

/// κ₂ of `O_N` on the annulus `a = 0.5, A = 1` with `ε = 0.01`.
const ANNULUS_TABLE: [Row; 30] = [
    [1.0, 1.5399, 1.4142, 1.4142, 1.4142, 1.0894],
    [2.0, 5.6530, 13.0693, 13.0693, 13.0693, 6.2580],
    [3.0, 3.8305, 3.8305, 3.9425, 3.9457, 2.3146],
    [4.0, 8.5933, 9.2258, 16.3100, 16.2516, 8.9572],
    [5.0, 6.0460, 5.3222, 6.1427, 6.1439, 3.6421],
    [6.0, 11.5300, 17.8841, 19.2637, 19.3219, 11.2881],
    [7.0, 7.9657, 6.6345, 8.2301, 8.3816, 5.0701],
    [8.0, 14.7927, 20.3604, 21.9942, 22.5124, 13.4426],
    [9.0, 10.0415, 7.6209, 10.3285, 10.8781, 6.6287],
    [10.0, 19.0184, 23.1542, 24.5657, 26.0831, 15.5836],
    [11.0, 13.0292, 11.2410, 12.5101, 13.8407, 8.3854],
    [12.0, 23.2890, 26.2121, 27.0232, 30.4782, 17.8852],
    [13.0, 21.0524, 13.3994, 17.7900, 17.6501, 10.4483],
    [14.0, 26.4920, 18.5879, 29.3992, 36.4852, 20.5647],
    [15.0, 19.8817, 15.6447, 29.2002, 22.9999, 12.9595],
    [16.0, 28.2465, 29.0063, 38.0386, 45.4592, 23.8555],
    [17.0, 35.4970, 14.8135, 49.7670, 31.0772, 16.1227],
    [18.0, 43.0206, 33.1381, 65.7066, 59.6068, 28.1236],
    [19.0, 44.5684, 18.4383, 86.9626, 43.8193, 20.2433],
    [20.0, 51.9107, 34.7701, 115.8508, 82.3726, 33.8176],
    [21.0, DASH, 17.7106, 154.5142, 64.3283, 25.7458],
    [22.0, DASH, 36.8589, 207.0704, 119.1053, 41.5837],
    [23.0, DASH, 24.2163, 277.6323, 97.5817, 33.2713],
    [24.0, DASH, 40.5045, 373.6002, 178.2601, 52.3668],
    [25.0, DASH, 24.9974, 502.7867, 151.6353, 43.7868],
    [26.0, DASH, 41.1193, 678.6072, 273.4479, 67.5685],
    [27.0, DASH, 30.6723, 915.8179, 239.6360, 58.7493],
    [28.0, DASH, 45.8095, 1.2389e+03, 426.8275, 89.2716],
    [29.0, DASH, 32.4057, 1.6756e+03, 383.1633, 80.3447],
    [30.0, DASH, 48.6714, 2.2707e+03, 674.6989, 120.5633],
];

const FEKETE: usize = 1;
const LEBESGUE: usize = 2;
const CUYT: usize = 3;
const CARNICER: usize = 4;
const OCS: usize = 5;

/// Relative tolerance of the published tables: four significant decimals up
/// to n = 10, 1% beyond.
fn table_tolerance(n: u32) -> f64 {
    if n <= 10 {
        1e-3
    } else {
        1e-2
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn kappa_on(nodes: &NodeSet, domain: Domain, family: Family, epsilon: f64) -> Result<f64> {
    let moved = nodes_on(nodes, domain, epsilon)?;
    let basis = Basis::new(domain, family)?;
    Ok(condition_number(&assemble(&basis, &moved)?)?.kappa2)
}

fn node_dir() -> Option<PathBuf> {
    std::env::var_os("ZERNODES_NODE_DIR")
        .filter(|d| !d.is_empty())
        .map(PathBuf::from)
}

/// Published nodes for `scheme` at order `n`, when supplied.
fn file_nodes(scheme: &str, n: u32) -> Option<NodeSet> {
    let path = node_file_path(&node_dir()?, scheme, n);
    path.is_file().then(|| load_nodes(&path, n).expect("supplied node file is valid"))
}

/// Compares computed columns against a published table; returns the worst
/// ratio of deviation to tolerance and a description.
fn check_table(
    table: &[Row; 30],
    domain: Domain,
    family: Family,
    epsilon: f64,
) -> (bool, String, Vec<(u32, f64, f64)>) {
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    let mut failures = 0;
    let mut file_rows = 0;
    let mut disk_pairs = Vec::new();
    for row in table {
        let n = row[0] as u32;
        let mut columns: Vec<(usize, &str, NodeSet)> = vec![
            (OCS, "ocs", ocs_nodes(n).unwrap()),
            (CARNICER, "carnicer", carnicer_nodes(n).unwrap()),
            (CUYT, "cuyt", cuyt_nodes(n).unwrap()),
        ];
        for (col, name) in [(LEBESGUE, "lebesgue"), (FEKETE, "fekete")] {
            if let Some(nodes) = file_nodes(name, n).filter(|_| !row[col].is_nan()) {
                file_rows += 1;
                columns.push((col, name, nodes));
            }
        }
        for (col, name, nodes) in columns {
            let k = match kappa_on(&nodes, domain, family, epsilon) {
                Ok(k) => k,
                Err(e) => {
                    failures += 1;
                    worst_at = format!("{name} n={n}: {e}");
                    continue;
                }
            };
            if family == Family::H {
                disk_pairs.push((n, k, kappa_on(&nodes, Domain::Disk, Family::Z, 0.0).unwrap()));
            }
            let ratio = rel(k, row[col]) / table_tolerance(n);
            if ratio > 1.0 {
                failures += 1;
            }
            if ratio > worst {
                worst = ratio;
                worst_at = format!("{name} n={n}: {k:.4} vs {}", row[col]);
            }
        }
    }
    let files = if file_rows == 0 {
        "Lebesgue/Fekete columns skipped (no node files)".to_string()
    } else {
        format!("{file_rows} Lebesgue/Fekete rows from files")
    };
    (
        failures == 0,
        format!("worst deviation {worst:.2}× tolerance at {worst_at}; {files}"),
        disk_pairs,
    )
}

fn anchors(domain: Domain, family: Family, cases: &[(&str, u32, f64)]) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(scheme, n, want) in cases {
        let nodes = match scheme {
            "ocs" => ocs_nodes(n),
            "carnicer" => carnicer_nodes(n),
            _ => cuyt_nodes(n),
        }
        .unwrap();
        let k = kappa_on(&nodes, domain, family, 0.01).unwrap();
        let ok = rel(k, want) <= 1e-2;
        pass &= ok;
        parts.push(format!("{scheme} n={n} {k:.4} (paper {want})"));
    }
    (pass, parts.join(", "))
}

fn criterion_1() -> Outcome {
    let published: [(&str, u32, &[f64]); 4] = [
        ("OCS", 10, &[0.0, 0.2786, 0.4972, 0.6981, 0.8742, 0.9818]),
        ("Carnicer", 10, &[0.0, 0.2780, 0.5256, 0.7376, 0.9046, 1.0]),
        ("OCS", 15, &[0.1066, 0.2860, 0.4385, 0.5802, 0.7162, 0.8398, 0.9362, 0.9894]),
        ("Carnicer", 15, &[0.0958, 0.2780, 0.4468, 0.6006, 0.7376, 0.8548, 0.9472, 1.0]),
    ];
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for (scheme, n, table) in published {
        let mut radii = if scheme == "OCS" {
            ocs_radii(n).unwrap()
        } else {
            carnicer_radii(n, CARNICER_EXPONENT).unwrap()
        };
        radii.reverse();
        pass &= radii.len() == table.len();
        for (r, t) in radii.iter().zip(table) {
            worst = worst.max((r - t).abs());
        }
    }
    let elapsed = start.elapsed();
    pass &= worst <= 5e-5 && elapsed < Duration::from_secs(1);
    outcome(pass, format!("max |r - table| = {worst:.2e} (≤ 5e-5), {elapsed:.1?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (table_ok, detail, _) = check_table(&DISK_TABLE, Domain::Disk, Family::Z, 0.0);
    let (anchor_ok, anchor_detail) = anchors(
        Domain::Disk,
        Family::Z,
        &[("ocs", 1, 1.0894), ("ocs", 30, 58.7650), ("carnicer", 30, 201.7801), ("cuyt", 30, 2.2562e+03)],
    );
    let elapsed = start.elapsed();
    outcome(
        table_ok && anchor_ok && elapsed < Duration::from_secs(120),
        format!("{detail}; anchors {anchor_detail}; {elapsed:.1?}"),
    )
}

fn criterion_3() -> Outcome {
    let (table_ok, detail, pairs) = check_table(&HEXAGON_TABLE, Domain::Hexagon, Family::H, 0.0);
    let (anchor_ok, anchor_detail) = anchors(
        Domain::Hexagon,
        Family::H,
        &[("ocs", 30, 62.7200), ("carnicer", 30, 205.4732)],
    );
    let bound = 2.0 * 3f64.sqrt() / 3.0;
    let worst = pairs.iter().map(|&(_, h, z)| h / z).fold(0.0, f64::max);
    let bound_ok = pairs.iter().all(|&(_, h, z)| h <= bound * z);
    outcome(
        table_ok && anchor_ok && bound_ok,
        format!(
            "{detail}; anchors {anchor_detail}; max κ(H)/κ(Z) = {worst:.4} ≤ {bound:.4} over {} rows",
            pairs.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let annulus = Domain::annulus(0.5, 1.0).unwrap();
    let (pass, detail) = anchors(
        annulus,
        Family::O,
        &[("ocs", 2, 6.2580), ("ocs", 30, 120.5633), ("cuyt", 30, 2.2707e+03)],
    );
    // the full columns are reported for information only
    let (_, full, _) = check_table(&ANNULUS_TABLE, annulus, Family::O, 0.01);
    outcome(pass, format!("{detail}; full columns: {full}"))
}

fn criterion_5() -> Outcome {
    let ellipse = Domain::ellipse(2.0, 1.0).unwrap();
    let annulus = Domain::annulus(0.5, 1.0).unwrap();
    let targets = [(Domain::Hexagon, Family::K), (ellipse, Family::E), (annulus, Family::C)];
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    let mut checked = 0;
    for n in [5u32, 10, 20] {
        let schemes = [
            ocs_nodes(n).unwrap(),
            carnicer_nodes(n).unwrap(),
            cuyt_nodes(n).unwrap(),
            spiral_nodes(n).unwrap(),
            random_thinned_nodes(n, 7).unwrap(),
            approximate_fekete(n, 10 * basis_size(n)).unwrap(),
        ];
        for nodes in &schemes {
            let disk = kappa_on(nodes, Domain::Disk, Family::Z, 0.0).unwrap();
            for (domain, family) in targets {
                // the plain image φ(S): no inner-circle shift on the annulus
                let moved = kappa_on(nodes, domain, family, 0.0).unwrap();
                let d = rel(moved, disk);
                checked += 1;
                if d >= worst {
                    worst = d;
                    worst_at = format!("{} n={n} {family}", nodes.scheme());
                }
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("{checked} cases, max relative κ₂ change {worst:.2e} ({worst_at})"),
    )
}

/// A product rule in domain polar coordinates `(r, θ)`: Gauss–Legendre in
/// `r` between `r_lo(θ)` and `r_hi(θ)`, Gauss–Legendre in `θ` on each of the
/// given angular sectors.
fn polar_rule(
    sectors: &[(f64, f64)],
    r_lo: impl Fn(f64) -> f64,
    r_hi: impl Fn(f64) -> f64,
    nr: usize,
    nt: usize,
) -> Vec<(Point, f64)> {
    let (xr, wr) = gauss_legendre(nr).unwrap();
    let (xt, wt) = gauss_legendre(nt).unwrap();
    let mut rule = Vec::new();
    for &(t0, t1) in sectors {
        for (ut, vt) in xt.iter().zip(&wt) {
            let t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * ut;
            let (lo, hi) = (r_lo(t), r_hi(t));
            for (ur, vr) in xr.iter().zip(&wr) {
                let r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * ur;
                let w = vt * 0.5 * (t1 - t0) * vr * 0.5 * (hi - lo) * r;
                rule.push((Point::new(r * t.cos(), r * t.sin()), w));
            }
        }
    }
    rule
}

/// `max |G - I|` for the Gram matrix of `basis` up to `order` under its
/// weight and `dx dy / π`.
fn gram_error(basis: &Basis, order: u32, rule: &[(Point, f64)]) -> f64 {
    let size = basis_size(order);
    let mut gram = vec![0.0; size * size];
    let mut vals = vec![0.0; size];
    for &(p, w) in rule {
        basis.eval_all(p, &mut vals).unwrap();
        let ww = w * basis.weight(p) / PI;
        for i in 0..size {
            for j in 0..=i {
                gram[i * size + j] += ww * vals[i] * vals[j];
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..size {
        for j in 0..=i {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i * size + j] - target).abs());
        }
    }
    worst
}

fn criterion_6() -> Outcome {
    let full = [(0.0, 2.0 * PI)];
    let disk_rule = polar_rule(&full, |_| 0.0, |_| 1.0, 16, 64);
    let disk = gram_error(&Basis::disk(), 10, &disk_rule);

    // the hexagon boundary has a kink on each vertex ray, so split there
    let hex_sectors: Vec<(f64, f64)> = (0..6)
        .map(|k| (PI / 6.0 + k as f64 * PI / 3.0, PI / 6.0 + (k + 1) as f64 * PI / 3.0))
        .collect();
    let hex_rule = polar_rule(&hex_sectors, |_| 0.0, |t| r_alpha(t, HEX_ALPHA), 12, 48);
    let annulus = Domain::annulus(0.5, 1.0).unwrap();
    let ring_rule = polar_rule(&full, |_| 0.5, |_| 1.0, 12, 64);
    let ellipse = Domain::ellipse(2.0, 1.0).unwrap();
    // ellipse: integrate in the stretched polar coordinates, Jacobian A·B
    let ellipse_rule: Vec<(Point, f64)> = disk_rule
        .iter()
        .map(|&(p, w)| (ellipse.forward(p), w * 2.0))
        .collect();

    let cases = [
        (Family::K, Domain::Hexagon, &hex_rule),
        (Family::H, Domain::Hexagon, &hex_rule),
        (Family::E, ellipse, &ellipse_rule),
        (Family::O, annulus, &ring_rule),
        (Family::C, annulus, &ring_rule),
    ];
    let mut pass = disk <= 1e-10;
    let mut parts = vec![format!("Z(n≤10) {disk:.1e}")];
    for (family, domain, rule) in cases {
        let e = gram_error(&Basis::new(domain, family).unwrap(), 6, rule);
        pass &= e <= 1e-6;
        parts.push(format!("{family} {e:.1e}"));
    }
    outcome(pass, format!("max |G - I|: {}", parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let n = 10;
    let size = basis_size(n);
    let ellipse = Domain::ellipse(2.0, 1.0).unwrap();
    let annulus = Domain::annulus(0.5, 1.0).unwrap();
    let cases = [
        (Family::Z, Domain::Disk),
        (Family::K, Domain::Hexagon),
        (Family::H, Domain::Hexagon),
        (Family::E, ellipse),
        (Family::O, annulus),
        (Family::C, annulus),
    ];
    let disk_nodes = ocs_nodes(n).unwrap();
    let mut worst: f64 = 0.0;
    for (f, (family, domain)) in cases.into_iter().enumerate() {
        let basis = Basis::new(domain, family).unwrap();
        let nodes = nodes_on(&disk_nodes, domain, 0.01).unwrap();
        let m = assemble(&basis, &nodes).unwrap();
        let interp = zernodes_core::collocation::Interpolator::new(&m).unwrap();
        for draw in 0..10u64 {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(1000 * f as u64 + draw);
            let truth: Vec<f64> = (0..size).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut vals = vec![0.0; size];
            let samples: Vec<f64> = nodes
                .points()
                .iter()
                .map(|&p| {
                    basis.eval_all(p, &mut vals).unwrap();
                    vals.iter().zip(&truth).map(|(q, c)| q * c).sum()
                })
                .collect();
            let got = interp.coefficients(&samples).unwrap();
            for (g, t) in got.iter().zip(&truth) {
                worst = worst.max((g - t).abs());
            }
        }
    }
    outcome(worst < 1e-7, format!("6 families × 10 draws at n = {n}, max coefficient error {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let aperture = build_aperture();
    let grid = EvaluationGrid::new(GRID_TARGET).unwrap();
    let config = ExperimentConfig::default();
    let cell = |nodes: &NodeSet, family| experiment_cell(&aperture, &grid, nodes, family, &config).unwrap();

    let ocs20 = ocs_nodes(20).unwrap();
    let k20 = cell(&ocs20, Family::K);
    let h20 = cell(&ocs20, Family::H);
    let mut pass = k20 <= 0.01 && h20 <= 0.03;

    let mut min_ratio = f64::INFINITY;
    let mut min_at = String::new();
    for n in 12..=20u32 {
        let ocs = ocs_nodes(n).unwrap();
        let rivals = [random_thinned_nodes(n, config.master_seed).unwrap(), spiral_nodes(n).unwrap()];
        for family in [Family::K, Family::H] {
            let base = cell(&ocs, family);
            for rival in &rivals {
                let ratio = cell(rival, family) / base;
                if ratio < min_ratio {
                    min_ratio = ratio;
                    min_at = format!("{} {family} n={n}", rival.scheme());
                }
            }
        }
    }
    pass &= min_ratio >= 10.0;
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "(a) K n=20 {:.3}% (b) H n=20 {:.3}% (c) min rival/OCS ratio {min_ratio:.1} ({min_at}); {} trials, {elapsed:.1?}",
            100.0 * k20,
            100.0 * h20,
            config.trials
        ),
    )
}

fn criterion_9() -> Outcome {
    let annulus = Domain::annulus(0.5, 1.0).unwrap();
    let basis = Basis::new(annulus, Family::O).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for nodes in [ocs_nodes(6).unwrap(), carnicer_nodes(6).unwrap(), cuyt_nodes(6).unwrap()] {
        let kappas: Vec<f64> = [1e-2, 1e-4, 1e-6]
            .iter()
            .map(|&eps| {
                let moved = transfer_nodes_with_epsilon(annulus, &nodes, eps).unwrap();
                condition_number(&assemble(&basis, &moved).unwrap()).unwrap().kappa2
            })
            .collect();
        pass &= kappas.windows(2).all(|w| w[1] > w[0]);
        parts.push(format!(
            "{} {:.3e} < {:.3e} < {:.3e}",
            nodes.scheme(),
            kappas[0],
            kappas[1],
            kappas[2]
        ));
    }
    outcome(pass, format!("n = 6, ε = 1e-2, 1e-4, 1e-6: {}", parts.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("OCS and Carnicer radii for n = 10, 15", criterion_1),
        ("disk Z condition numbers, n = 1..30", criterion_2),
        ("hexagon H condition numbers and the 2√3/3 bound", criterion_3),
        ("annulus O condition numbers (a = 0.5, A = 1, ε = 0.01)", criterion_4),
        ("condition invariance of K, E, C at transferred nodes", criterion_5),
        ("quadrature orthonormality of all families", criterion_6),
        ("interpolation exactness from critical samples", criterion_7),
        ("zonal wavefront reconstruction over 36 segments", criterion_8),
        ("annulus conditioning blows up as ε → 0", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} {id}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
