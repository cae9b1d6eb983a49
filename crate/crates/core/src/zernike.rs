//! Zernike circle polynomials on the unit disk.
//!
//! Polynomials are indexed either by the pair `(n, m)` (radial order and signed
//! azimuthal frequency) or by the single index `j = (n(n + 2) + m) / 2`, which
//! is the only convention used throughout this crate. With the normalization
//! `N_n^m = sqrt(2(n + 1) / (1 + δ_{m,0}))` the polynomials are orthonormal under
//! the measure `dx dy / π` on the disk.


/// Largest radial order accepted anywhere in the crate.
pub const MAX_ORDER: u32 = 60;

/// A point in the plane, in dimensionless Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// A point in polar coordinates. `theta` is in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Polar {
    pub rho: f64,
    pub theta: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Polar form with `theta` in `(-π, π]`. The origin gets `theta = 0`.
    pub fn to_polar(self) -> Polar {
        Polar {
            rho: self.norm(),
            theta: self.y.atan2(self.x),
        }
    }
}

impl Polar {
    pub const fn new(rho: f64, theta: f64) -> Self {
        Polar { rho, theta }
    }

    pub fn to_cartesian(self) -> Point {
        let (s, c) = self.theta.sin_cos();
        Point {
            x: self.rho * c,
            y: self.rho * s,
        }
    }
}

impl core::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl core::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// Radial order `n` and signed azimuthal frequency `m` of a Zernike polynomial.
///
/// Construction goes through [`ZernikeIndex::new`] or [`ZernikeIndex::from_single`],
/// so `|m| <= n` and `n - m` even always hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZernikeIndex {
    n: u32,
    m: i32,
}

impl ZernikeIndex {
    /// Returns `None` unless `|m| <= n` and `n - m` is even.
    pub fn new(n: u32, m: i32) -> Option<Self> {
        let valid = m.unsigned_abs() <= n && (n as i64 - m as i64) % 2 == 0;
        valid.then_some(ZernikeIndex { n, m })
    }

    /// Inverse of [`ZernikeIndex::single`]; every `j` is valid.
    pub fn from_single(j: usize) -> Self {
        // largest n with n(n+1)/2 <= j, from the float root then corrected
        let mut n = ((libm::sqrt(8.0 * j as f64 + 1.0) - 1.0) / 2.0) as u64;
        while n * (n + 1) / 2 > j as u64 {
            n -= 1;
        }
        while (n + 1) * (n + 2) / 2 <= j as u64 {
            n += 1;
        }
        let m = 2 * j as i64 - (n * (n + 2)) as i64;
        ZernikeIndex {
            n: n as u32,
            m: m as i32,
        }
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn m(self) -> i32 {
        self.m
    }

    /// Single index `j = (n(n + 2) + m) / 2`.
    pub fn single(self) -> usize {
        let n = self.n as i64;
        ((n * (n + 2) + self.m as i64) / 2) as usize
    }

    /// `N_n^m = sqrt(2(n + 1) / (1 + δ_{m,0}))`.
    pub fn normalization(self) -> f64 {
        let num = 2.0 * (self.n as f64 + 1.0);
        if self.m == 0 {
            (num / 2.0).sqrt()
        } else {
            num.sqrt()
        }
    }
}

/// Converts a single index to `(n, m)`.
pub fn index_to_nm(j: usize) -> ZernikeIndex {
    ZernikeIndex::from_single(j)
}

/// Single index of `(n, m)`, or `None` for an invalid pair.
pub fn nm_to_index(n: u32, m: i32) -> Option<usize> {
    ZernikeIndex::new(n, m).map(ZernikeIndex::single)
}

/// Number of polynomials of radial order at most `n`: `(n + 1)(n + 2) / 2`.
pub const fn basis_size(n: u32) -> usize {
    let n = n as usize;
    (n + 1) * (n + 2) / 2
}

/// Radial polynomial `R_n^{|m|}(rho)`.
///
/// Uses `R_n^m(ρ) = (-1)^k ρ^m P_k^{(m,0)}(1 - 2ρ²)` with `k = (n - m)/2` and the
/// three-term Jacobi recurrence, which avoids the cancellation of the explicit
/// factorial sum at high order.
pub fn radial_poly(index: ZernikeIndex, rho: f64) -> f64 {
    let n = index.n;
    let m = index.m.unsigned_abs();
    assert!(n <= MAX_ORDER, "radial order {n} exceeds {MAX_ORDER}");
    let k = (n - m) / 2;
    let x = 1.0 - 2.0 * rho * rho;
    let a = m as f64;
    let mut prev = 1.0;
    let mut cur = if k == 0 {
        1.0
    } else {
        (a + 1.0) + (a + 2.0) * (x - 1.0) / 2.0
    };
    for i in 2..=k {
        let i = i as f64;
        let s = 2.0 * i + a;
        let next = ((s - 1.0) * (s * (s - 2.0) * x + a * a) * cur
            - 2.0 * (i + a - 1.0) * (i - 1.0) * s * prev)
            / (2.0 * i * (i + a) * (s - 2.0));
        prev = cur;
        cur = next;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    sign * cur * rho.powi(m as i32)
}

/// Normalized Zernike polynomial at a polar point: cosine branch for `m >= 0`,
/// sine branch with `|m|` for `m < 0`.
pub fn zernike_eval(index: ZernikeIndex, p: Polar) -> f64 {
    let radial = index.normalization() * radial_poly(index, p.rho);
    let m = index.m;
    if m == 0 {
        radial
    } else if m > 0 {
        radial * (m as f64 * p.theta).cos()
    } else {
        radial * ((-m) as f64 * p.theta).sin()
    }
}

/// `Z_j` at a Cartesian point; the angle comes from `atan2`.
pub fn zernike_cartesian(j: usize, p: Point) -> f64 {
    zernike_eval(ZernikeIndex::from_single(j), p.to_polar())
}

/// Writes `Z_0 .. Z_{out.len() - 1}` at `p` into `out`.
pub fn eval_all(p: Polar, out: &mut [f64]) {
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = zernike_eval(ZernikeIndex::from_single(j), p);
    }
}
