//! Recovering the circle of superposable states from a channel.
//!
//! For a 2x4 Kraus operator acting on `|psi> (x) |0>` only the entries
//! `a11, a13, a21, a23` matter. A channel that superposes `|0>` with itself
//! must have `a21 = 0`, which pins `lambda = |a23|^2 / |alpha|^2`; writing
//! `a11 - a23 = r1 e^{i gamma1}` and `a13 = r2 e^{i gamma2}`, the states it
//! can superpose with `|0>` satisfy
//!
//! ```text
//! A Z + B X + C Y + D = 0,
//! A = (r1^2 - r2^2)/2,  B = r1 r2 cos(gamma),  C = r1 r2 sin(gamma),
//! D = (r1^2 + r2^2)/2 - |a23 beta / alpha|^2,   gamma = gamma2 - gamma1,
//! ```
//!
//! a circle on the Bloch sphere. [`extract_circle`] computes it in closed
//! form; [`scan_superposable`] and [`fit_plane`] provide the independent
//! numerical witnesses.

use std::f64::consts::{PI, TAU};

use crate::bloch::{state_to_bloch, BlochPoint, PureQubit, SphereCircle};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::superposition::{is_superposable, CPMap, KrausOperator, SuperpositionSpec};

/// Intermediate quantities of the circle derivation.
#[derive(Debug, Clone, Copy)]
pub struct ExtractionTrace {
    pub lambda: f64,
    pub r1: f64,
    pub gamma1: f64,
    pub r2: f64,
    pub gamma2: f64,
    /// `gamma2 - gamma1`.
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Closed-form circle of states superposable with `|0>` under `k`.
///
/// Requires `|a21| < 1e-9` (otherwise the channel cannot superpose `|0>`
/// with `|0>` and the closed form does not apply; use the scan path) and
/// `|a23| > 1e-9` (otherwise `lambda` is undefined).
pub fn extract_circle(
    k: &KrausOperator,
    spec: &SuperpositionSpec,
) -> Result<(SphereCircle, ExtractionTrace)> {
    let m = k.matrix();
    let a11 = m.get(0, 0);
    let a13 = m.get(0, 2);
    let a21 = m.get(1, 0);
    let a23 = m.get(1, 2);

    if a21.norm() >= 1e-9 {
        return Err(Error::CannotSuperposeKnown(a21.norm()));
    }
    if a23.norm() <= 1e-9 {
        return Err(Error::DegenerateLambda);
    }

    let alpha2 = spec.alpha().norm_sqr();
    let lambda = a23.norm_sqr() / alpha2;

    let diff = a11 - a23;
    let (r1, gamma1) = (diff.norm(), diff.arg());
    let (r2, gamma2) = (a13.norm(), a13.arg());
    let gamma = gamma2 - gamma1;

    let a = 0.5 * (r1 * r1 - r2 * r2);
    let b = r1 * r2 * gamma.cos();
    let c = r1 * r2 * gamma.sin();
    let d = 0.5 * (r1 * r1 + r2 * r2) - a23.norm_sqr() * spec.beta().norm_sqr() / alpha2;

    let trace = ExtractionTrace {
        lambda,
        r1,
        gamma1,
        r2,
        gamma2,
        gamma,
        a,
        b,
        c,
        d,
    };

    let norm = (a * a + b * b + c * c).sqrt();
    if norm < 1e-12 {
        return Err(Error::NoCircle);
    }
    let offset = d / norm;
    if offset.abs() > 1.0 + 1e-9 {
        return Err(Error::EmptyLocus(offset));
    }
    // Plane normal in Cartesian (X, Y, Z) order is (B, C, A).
    let circle = SphereCircle::from_plane(b / norm, c / norm, a / norm, offset.clamp(-1.0, 1.0))?;
    Ok((circle, trace))
}

/// Evaluate [`is_superposable`] against `|0>` on a `grid_n x grid_n` (x, y)
/// grid (x endpoints inclusive), with the two poles evaluated once each,
/// and return the accepted Bloch points in row-major order.
pub fn scan_superposable(
    map: &CPMap,
    spec: &SuperpositionSpec,
    grid_n: usize,
    tol: f64,
) -> Result<Vec<BlochPoint>> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument("grid_n must be >= 2".into()));
    }
    let phi0 = PureQubit::ket0();
    let mut accepted = Vec::new();
    for i in 0..grid_n {
        let x = PI * (i as f64) / ((grid_n - 1) as f64);
        let pole = i == 0 || i == grid_n - 1;
        let y_count = if pole { 1 } else { grid_n };
        for j in 0..y_count {
            let y = TAU * (j as f64) / (grid_n as f64);
            let psi = PureQubit::from_angles(x, y);
            let (ok, _) = is_superposable(map, spec, &psi, &phi0, tol)?;
            if ok {
                accepted.push(state_to_bloch(&psi));
            }
        }
    }
    Ok(accepted)
}

/// Least-squares plane through Bloch points under a unit-normal constraint:
/// the offset is taken at the centroid and the normal is the smallest-
/// eigenvalue direction of the centered covariance. Returns the canonical
/// circle and the largest absolute plane residual over the inputs.
///
/// Errors when fewer than 3 points are given or when the points do not
/// determine a unique plane (identical or collinear inputs).
pub fn fit_plane(points: &[BlochPoint]) -> Result<(SphereCircle, f64)> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(
            "plane fit needs at least 3 points".into(),
        ));
    }
    let n = points.len() as f64;
    let centroid = [
        points.iter().map(|p| p.x).sum::<f64>() / n,
        points.iter().map(|p| p.y).sum::<f64>() / n,
        points.iter().map(|p| p.z).sum::<f64>() / n,
    ];
    let mut cov = [[0.0f64; 3]; 3];
    for p in points {
        let d = [p.x - centroid[0], p.y - centroid[1], p.z - centroid[2]];
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += d[i] * d[j];
            }
        }
    }
    let cov_m = CMatrix::from_rows_real(&[cov[0].to_vec(), cov[1].to_vec(), cov[2].to_vec()]);
    let (eigs, vecs) = hermitian_eigen(&cov_m)?;
    // Two vanishing eigenvalues mean the points span at most a line.
    if eigs[1] <= 1e-12 * n.max(1.0) {
        return Err(Error::DegenerateFit);
    }
    let normal = [vecs.get(0, 0).re, vecs.get(1, 0).re, vecs.get(2, 0).re];
    let nn = (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
    let normal = [normal[0] / nn, normal[1] / nn, normal[2] / nn];
    let offset = -(normal[0] * centroid[0] + normal[1] * centroid[1] + normal[2] * centroid[2]);

    let circle = SphereCircle::from_plane(normal[0], normal[1], normal[2], offset.clamp(-1.0, 1.0))?;
    let max_residual = points
        .iter()
        .map(|p| circle.residual(p).abs())
        .fold(0.0, f64::max);
    Ok((circle, max_residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, CMatrix, Complex64};
    use crate::synthesize::synthesize_channel;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn extract_ring_channel() {
        // mu = 0, c = 1/2: a23 = -1, alpha^2 = 4/5 gives lambda = 5/4 and
        // the plane (1/2) Z + 1/4 = 0, i.e. Z + 1/2 = 0.
        let ch = synthesize_channel(&SphereCircle::new(0.0, 0.0, 0.5).unwrap()).unwrap();
        let (circle, trace) = extract_circle(ch.kraus(), ch.spec()).unwrap();
        assert_close(trace.lambda, 1.25, 1e-15);
        assert_close(trace.r1, 1.0, 1e-15);
        assert_close(trace.r2, 0.0, 1e-300);
        assert_close(trace.a, 0.5, 1e-15);
        assert_close(trace.b, 0.0, 1e-300);
        assert_close(trace.c, 0.0, 1e-300);
        assert_close(trace.d, 0.25, 1e-15);
        assert_close(circle.mu(), 0.0, 1e-12);
        assert_close(circle.c(), 0.5, 1e-12);
    }

    #[test]
    fn extract_record_channel() {
        // a11 = 2^-1/2, a23 = -2^-1/2, alpha = -2^-1/2: r1 = sqrt(2),
        // A = 1, D = 1/2, circle Z + 1/2 = 0.
        let s = 0.5f64.sqrt();
        let mut m = CMatrix::zeros(2, 4);
        m.set(0, 0, c64(s, 0.0));
        m.set(1, 2, c64(-s, 0.0));
        let k = KrausOperator::new(m).unwrap();
        let spec = SuperpositionSpec::from_real(-s, s).unwrap();
        let (circle, trace) = extract_circle(&k, &spec).unwrap();
        assert_close(trace.lambda, 1.0, 1e-15);
        assert_close(trace.r1, 2f64.sqrt(), 1e-15);
        assert_close(trace.a, 1.0, 1e-15);
        assert_close(trace.d, 0.5, 1e-15);
        assert_close(circle.mu(), 0.0, 1e-12);
        assert_close(circle.c(), 0.5, 1e-12);
    }

    #[test]
    fn extract_rejects_bad_channels() {
        let spec = SuperpositionSpec::from_real(0.5f64.sqrt(), 0.5f64.sqrt()).unwrap();

        let mut m = CMatrix::zeros(2, 4);
        m.set(1, 0, c64(0.5, 0.0));
        m.set(1, 2, c64(0.5, 0.0));
        let k = KrausOperator::new(m).unwrap();
        assert!(matches!(
            extract_circle(&k, &spec),
            Err(Error::CannotSuperposeKnown(_))
        ));

        let mut m = CMatrix::zeros(2, 4);
        m.set(0, 0, c64(0.5, 0.0));
        let k = KrausOperator::new(m).unwrap();
        assert!(matches!(extract_circle(&k, &spec), Err(Error::DegenerateLambda)));
    }

    #[test]
    fn scan_zero_map_is_empty() {
        let map = CPMap::singleton(KrausOperator::new(CMatrix::zeros(2, 4)).unwrap()).unwrap();
        let spec = SuperpositionSpec::from_real(0.5f64.sqrt(), 0.5f64.sqrt()).unwrap();
        let accepted = scan_superposable(&map, &spec, 32, 1e-9).unwrap();
        assert!(accepted.is_empty());
    }

    #[test]
    fn scan_ring_channel_grid_100() {
        // Grid 100 puts x = 2pi/3 on the x-grid (66/99 = 2/3), so the ring
        // Z = -1/2 is accepted as a full row.
        let circ = SphereCircle::new(0.0, 0.0, 0.5).unwrap();
        let ch = synthesize_channel(&circ).unwrap();
        let map = CPMap::singleton(ch.kraus().clone()).unwrap();
        let accepted = scan_superposable(&map, ch.spec(), 100, 1e-9).unwrap();
        assert_eq!(accepted.len(), 100);
        for p in &accepted {
            assert!((p.z + 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn scan_record_channel_grid_100() {
        let s = 0.5f64.sqrt();
        let mut m = CMatrix::zeros(2, 4);
        m.set(0, 0, c64(s, 0.0));
        m.set(1, 2, c64(-s, 0.0));
        let map = CPMap::singleton(KrausOperator::new(m).unwrap()).unwrap();
        let spec = SuperpositionSpec::from_real(-s, s).unwrap();
        let accepted = scan_superposable(&map, &spec, 100, 1e-9).unwrap();
        assert!(!accepted.is_empty());
        for p in &accepted {
            assert!((p.z + 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn fit_plane_recovers_ring() {
        let circ = SphereCircle::new(0.0, 0.0, 0.5).unwrap();
        let pts = circ.points(12).unwrap();
        let (fitted, max_res) = fit_plane(&pts).unwrap();
        assert!(max_res < 1e-10);
        assert_close(fitted.mu(), 0.0, 1e-9);
        assert_close(fitted.c(), 0.5, 1e-9);
    }

    #[test]
    fn fit_plane_with_noise() {
        let circ = SphereCircle::new(PI / 3.0, 1.0, 0.2).unwrap();
        let mut pts = circ.points(50).unwrap();
        // Deterministic 1e-8-scale perturbation.
        for (i, p) in pts.iter_mut().enumerate() {
            let t = i as f64;
            p.x += 1e-8 * (3.1 * t).sin();
            p.y += 1e-8 * (1.7 * t).cos();
            p.z += 1e-8 * (2.3 * t).sin();
        }
        let (fitted, _) = fit_plane(&pts).unwrap();
        let na = circ.normal_cartesian();
        let nb = fitted.normal_cartesian();
        for i in 0..3 {
            assert_close(na[i], nb[i], 1e-6);
        }
        assert_close(circ.c(), fitted.c(), 1e-6);
    }

    #[test]
    fn fit_plane_three_points_and_degenerate() {
        let pts = [
            BlochPoint::new(1.0, 0.0, 0.0).unwrap(),
            BlochPoint::new(0.0, 1.0, 0.0).unwrap(),
            BlochPoint::new(0.0, 0.0, 1.0).unwrap(),
        ];
        let (circle, max_res) = fit_plane(&pts).unwrap();
        assert!(max_res < 1e-12);
        // Plane X + Y + Z = 1, unit-normal offset -1/sqrt(3).
        assert_close(circle.c(), -1.0 / 3f64.sqrt(), 1e-12);

        let same = [pts[0]; 5];
        assert!(matches!(fit_plane(&same), Err(Error::DegenerateFit)));

        let collinear = [
            BlochPoint::new(0.0, 0.0, 1.0).unwrap(),
            BlochPoint::new(0.0, 0.0, -1.0).unwrap(),
            BlochPoint::new(0.0, 0.0, 1.0).unwrap(),
        ];
        assert!(matches!(fit_plane(&collinear), Err(Error::DegenerateFit)));
    }

    #[test]
    fn roundtrip_synthesize_then_extract() {
        for &(mu, nu, c) in &[
            (0.0, 0.0, 0.5),
            (0.7, 2.0, -0.3),
            (std::f64::consts::FRAC_PI_2, 4.5, 0.1),
            (1.2, 0.3, 0.9),
        ] {
            let circ = SphereCircle::new(mu, nu, c).unwrap();
            let ch = synthesize_channel(&circ).unwrap();
            let (back, _) = extract_circle(ch.kraus(), ch.spec()).unwrap();
            let na = circ.normal_cartesian();
            let nb = back.normal_cartesian();
            for i in 0..3 {
                assert_close(na[i], nb[i], 1e-12);
            }
            assert_close(circ.c(), back.c(), 1e-12);
        }
    }

    #[test]
    fn extraction_lambda_matches_fit() {
        use crate::superposition::{apply_kraus, fit_phase};
        let circ = SphereCircle::new(0.9, 2.2, -0.4).unwrap();
        let ch = synthesize_channel(&circ).unwrap();
        let (_, trace) = extract_circle(ch.kraus(), ch.spec()).unwrap();
        let psi = crate::bloch::bloch_to_state(&circ.points(7).unwrap()[3]).unwrap();
        let out = apply_kraus(ch.kraus(), &psi, &PureQubit::ket0());
        let report = fit_phase(&out, ch.spec(), &psi, &PureQubit::ket0(), 1e-9).unwrap();
        assert_close(trace.lambda, report.lambda.unwrap(), 1e-9);
    }

    #[test]
    fn trace_is_send_sync() {
        fn check<T: Send + Sync>() {}
        check::<ExtractionTrace>();
        check::<Complex64>();
    }
}
