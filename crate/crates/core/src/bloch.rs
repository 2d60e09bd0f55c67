//! Qubit states and Bloch-sphere geometry.
//!
//! A pure qubit state is written `|psi> = cos(x/2)|0> + e^{-iy} sin(x/2)|1>`
//! with `x` in `[0, pi]` and `y` in `[0, 2pi)`. Note the **minus** sign in
//! the phase: with this convention the Bloch coordinates are
//!
//! ```text
//! Z = cos x,   X = sin x cos y,   Y = sin x sin y,
//! ```
//!
//! so `y` increases clockwise when viewed from +Z. A circle on the sphere is
//! the intersection with the plane
//!
//! ```text
//! Z cos(mu) + X sin(mu) cos(nu) + Y sin(mu) sin(nu) + c = 0,
//! ```
//!
//! i.e. the unit normal is the point at polar angle `mu`, azimuth `nu`, and
//! `c` is the offset (`|c| <= 1` for a nonempty intersection).

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, CVector, Complex64};

const NORM_TOL: f64 = 1e-9;
/// Below this, a normal component counts as zero for canonicalization.
const AXIS_TOL: f64 = 1e-12;

/// Normalized qubit state in canonical form: the `|0>` amplitude is real and
/// nonnegative, and if it vanishes the `|1>` amplitude is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PureQubit {
    a0: Complex64,
    a1: Complex64,
}

impl PureQubit {
    /// Build from amplitudes. Errors unless `|a0|^2 + |a1|^2 = 1` within
    /// 1e-9; the stored state is renormalized exactly and canonicalized.
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let n2 = a0.norm_sqr() + a1.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self::canonicalized(a0 * inv, a1 * inv))
    }

    /// State at polar angle `x` in `[0, pi]`, azimuth `y`:
    /// `cos(x/2)|0> + e^{-iy} sin(x/2)|1>`.
    pub fn from_angles(x: f64, y: f64) -> Self {
        let a0 = c64((0.5 * x).cos(), 0.0);
        let a1 = Complex64::from_polar((0.5 * x).sin(), -y);
        Self::canonicalized(a0, a1)
    }

    pub fn ket0() -> Self {
        Self {
            a0: c64(1.0, 0.0),
            a1: c64(0.0, 0.0),
        }
    }

    pub fn ket1() -> Self {
        Self {
            a0: c64(0.0, 0.0),
            a1: c64(1.0, 0.0),
        }
    }

    fn canonicalized(a0: Complex64, a1: Complex64) -> Self {
        let r0 = a0.norm();
        if r0 == 0.0 {
            return Self {
                a0: c64(0.0, 0.0),
                a1: c64(1.0, 0.0),
            };
        }
        let phase = a0 / r0;
        Self {
            a0: c64(r0, 0.0),
            a1: a1 * phase.conj(),
        }
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    /// `(x, y)` angles of the canonical form; `y = 0` at the poles.
    pub fn angles(&self) -> (f64, f64) {
        let x = 2.0 * self.a1.norm().atan2(self.a0.re);
        let y = if self.a1.norm() == 0.0 {
            0.0
        } else {
            (-self.a1.arg()).rem_euclid(TAU)
        };
        (x, y)
    }

    pub fn to_vector(&self) -> CVector {
        CVector::new(vec![self.a0, self.a1])
    }
}

/// Point on the unit sphere, `X^2 + Y^2 + Z^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { x, y, z })
    }
}

/// Map a state to its Bloch point. With `a1 = e^{-iy} sin(x/2)` the
/// components are `X = 2 Re(a0* a1)`, `Y = -2 Im(a0* a1)`,
/// `Z = |a0|^2 - |a1|^2`.
pub fn state_to_bloch(psi: &PureQubit) -> BlochPoint {
    let cross = psi.a0.conj() * psi.a1;
    BlochPoint {
        x: 2.0 * cross.re,
        y: -2.0 * cross.im,
        z: psi.a0.norm_sqr() - psi.a1.norm_sqr(),
    }
}

/// Inverse of [`state_to_bloch`]; returns the canonical state.
pub fn bloch_to_state(p: &BlochPoint) -> Result<PureQubit> {
    let n2 = p.x * p.x + p.y * p.y + p.z * p.z;
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n2));
    }
    let x = p.z.clamp(-1.0, 1.0).acos();
    let y = if p.x == 0.0 && p.y == 0.0 {
        0.0
    } else {
        p.y.atan2(p.x).rem_euclid(TAU)
    };
    Ok(PureQubit::from_angles(x, y))
}

/// A circle on the unit sphere: the locus
/// `Z cos(mu) + X sin(mu) cos(nu) + Y sin(mu) sin(nu) + c = 0`.
///
/// `(mu, nu, c)` and `(pi - mu, nu + pi, -c)` denote the same circle; the
/// canonical representative has `cos(mu) > 0`, or `cos(mu) = 0` and the first
/// nonzero of the (X, Y) normal components positive. At `mu = 0` the azimuth
/// is undefined and canonicalized to `nu = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereCircle {
    mu: f64,
    nu: f64,
    c: f64,
    canonical: bool,
}

impl SphereCircle {
    /// Store `(mu, nu, c)` as given (after range normalization), without
    /// canonicalizing. `mu` must lie in `[0, pi]`, `nu` is reduced mod 2pi,
    /// and `|c| <= 1` is required for a nonempty locus.
    pub fn raw(mu: f64, nu: f64, c: f64) -> Result<Self> {
        if !mu.is_finite() || !(-AXIS_TOL..=PI + AXIS_TOL).contains(&mu) {
            return Err(Error::InvalidArgument(format!(
                "mu = {mu} outside [0, pi]"
            )));
        }
        if !nu.is_finite() || !c.is_finite() {
            return Err(Error::InvalidArgument("non-finite circle parameter".into()));
        }
        if c.abs() > 1.0 + AXIS_TOL {
            return Err(Error::EmptyLocus(c));
        }
        let mu = mu.clamp(0.0, PI);
        let nu = nu.rem_euclid(TAU);
        let c = c.clamp(-1.0, 1.0);
        let canonical = (mu, nu, c) == canonical_params(mu, nu, c);
        Ok(Self {
            mu,
            nu,
            c,
            canonical,
        })
    }

    /// Canonical circle for `(mu, nu, c)`.
    pub fn new(mu: f64, nu: f64, c: f64) -> Result<Self> {
        Ok(Self::raw(mu, nu, c)?.canonicalize())
    }

    /// Canonical circle for the plane `nx X + ny Y + nz Z + d = 0` in
    /// Cartesian coordinates; the normal is rescaled to unit length.
    pub fn from_plane(nx: f64, ny: f64, nz: f64, d: f64) -> Result<Self> {
        let norm = (nx * nx + ny * ny + nz * nz).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::ZeroNormal);
        }
        let (nx, ny, nz, c) = (nx / norm, ny / norm, nz / norm, d / norm);
        if c.abs() > 1.0 + NORM_TOL {
            return Err(Error::EmptyLocus(c));
        }
        let mu = nz.clamp(-1.0, 1.0).acos();
        let nu = if nx.hypot(ny) < AXIS_TOL {
            0.0
        } else {
            ny.atan2(nx).rem_euclid(TAU)
        };
        Self::new(mu, nu, c.clamp(-1.0, 1.0))
    }

    pub fn canonicalize(&self) -> Self {
        if self.canonical {
            return *self;
        }
        let (mu, nu, c) = canonical_params(self.mu, self.nu, self.c);
        Self {
            mu,
            nu,
            c,
            canonical: true,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Unit normal in Cartesian `(X, Y, Z)` order.
    pub fn normal_cartesian(&self) -> [f64; 3] {
        let (smu, cmu) = self.mu.sin_cos();
        let (snu, cnu) = self.nu.sin_cos();
        [smu * cnu, smu * snu, cmu]
    }

    /// Signed plane residual `Z cos(mu) + X sin(mu) cos(nu) +
    /// Y sin(mu) sin(nu) + c`; zero exactly on the circle.
    pub fn residual(&self, p: &BlochPoint) -> f64 {
        let n = self.normal_cartesian();
        n[0] * p.x + n[1] * p.y + n[2] * p.z + self.c
    }

    /// `count` points equally spaced in arc angle around the circle. When
    /// `|c| = 1` the locus is a single tangent point, returned `count` times.
    pub fn points(&self, count: usize) -> Result<Vec<BlochPoint>> {
        if count == 0 {
            return Err(Error::InvalidArgument("point count must be >= 1".into()));
        }
        let n = self.normal_cartesian();
        let (e1, e2) = perp_basis(n);
        let rho = (1.0 - self.c * self.c).max(0.0).sqrt();
        let center = [-self.c * n[0], -self.c * n[1], -self.c * n[2]];
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let t = TAU * (k as f64) / (count as f64);
            let (st, ct) = t.sin_cos();
            out.push(BlochPoint {
                x: center[0] + rho * (ct * e1[0] + st * e2[0]),
                y: center[1] + rho * (ct * e1[1] + st * e2[1]),
                z: center[2] + rho * (ct * e1[2] + st * e2[2]),
            });
        }
        Ok(out)
    }
}

fn canonical_params(mu: f64, nu: f64, c: f64) -> (f64, f64, f64) {
    let (mut mu, mut nu, mut c) = if needs_flip(mu, nu) {
        (PI - mu, (nu + PI).rem_euclid(TAU), -c)
    } else {
        (mu, nu, c)
    };
    if mu.sin().abs() <= AXIS_TOL {
        nu = 0.0;
    }
    if c == 0.0 {
        c = 0.0; // normalize -0.0
    }
    (mu, nu, c)
}

fn needs_flip(mu: f64, nu: f64) -> bool {
    let nz = mu.cos();
    if nz > AXIS_TOL {
        return false;
    }
    if nz < -AXIS_TOL {
        return true;
    }
    let nx = mu.sin() * nu.cos();
    if nx.abs() > AXIS_TOL {
        return nx < 0.0;
    }
    let ny = mu.sin() * nu.sin();
    ny < -AXIS_TOL
}

/// Orthonormal pair spanning the plane orthogonal to unit vector `n`.
fn perp_basis(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let h = n[0].hypot(n[1]);
    let e1 = if h > 1e-9 {
        [-n[1] / h, n[0] / h, 0.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let e2 = [
        n[1] * e1[2] - n[2] * e1[1],
        n[2] * e1[0] - n[0] * e1[2],
        n[0] * e1[1] - n[1] * e1[0],
    ];
    (e1, e2)
}

// Serialize only (mu, nu, c); the canonical flag is recomputed on load.
#[derive(Serialize, Deserialize)]
struct CircleWire {
    mu: f64,
    nu: f64,
    c: f64,
}

impl Serialize for SphereCircle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CircleWire {
            mu: self.mu,
            nu: self.nu,
            c: self.c,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SphereCircle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CircleWire::deserialize(d)?;
        SphereCircle::raw(w.mu, w.nu, w.c).map_err(serde::de::Error::custom)
    }
}

/// Streaming area-uniform sampler: `Z` uniform on [-1, 1] and azimuth
/// uniform on [0, 2pi), which is exactly uniform by the hat-box theorem.
/// Deterministic for a given seed (fixed ChaCha8 stream).
pub struct SphereSampler {
    rng: ChaCha8Rng,
}

impl SphereSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Iterator for SphereSampler {
    type Item = BlochPoint;

    fn next(&mut self) -> Option<BlochPoint> {
        let z = 2.0 * self.rng.gen::<f64>() - 1.0;
        let phi = TAU * self.rng.gen::<f64>();
        let s = (1.0 - z * z).max(0.0).sqrt();
        Some(BlochPoint {
            x: s * phi.cos(),
            y: s * phi.sin(),
            z,
        })
    }
}

/// `n` area-uniform points, deterministic per seed.
pub fn sample_sphere(n: usize, seed: u64) -> Vec<BlochPoint> {
    SphereSampler::new(seed).take(n).collect()
}
