//! Building the channel that superposes a circle of states with `|0>`.
//!
//! For the canonical circle `(mu, nu, c)` the construction uses
//!
//! ```text
//! alpha = sqrt((1 + cos mu) / (2 + cos mu - c)),
//! beta  = sqrt((1 - c)      / (2 + cos mu - c)),
//! M0    = ( 0  0  sin(mu/2) e^{i nu}  0 )
//!         ( 0  0  -cos(mu/2)          0 ),
//! lambda = (1 + cos mu) / (2 |alpha|^2),
//! ```
//!
//! Only the third register column of `M0` is populated, so the output ray is
//! the same for every input: `(sin(mu/2) e^{i nu}, -cos(mu/2))`, whose Bloch
//! point is the antipode of the circle's plane normal. Every state on the
//! circle fits some input-dependent phase `theta` exactly, with success
//! probability `sin^2(x/2) = (1 - Z)/2`.

use serde::{Deserialize, Serialize};

use crate::bloch::{state_to_bloch, PureQubit, SphereCircle};
use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, Complex64};
use crate::superposition::{apply_kraus, fit_phase, CPMap, KrausOperator, SuperpositionSpec};

/// A synthesized superposition channel: the Kraus operator, its weights,
/// the scale `lambda`, the target circle, and the fixed output state.
#[derive(Debug, Clone)]
pub struct SuperpositionChannel {
    kraus: KrausOperator,
    spec: SuperpositionSpec,
    lambda: f64,
    circle: SphereCircle,
    output_state: PureQubit,
}

impl SuperpositionChannel {
    pub fn kraus(&self) -> &KrausOperator {
        &self.kraus
    }

    pub fn spec(&self) -> &SuperpositionSpec {
        &self.spec
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn circle(&self) -> &SphereCircle {
        &self.circle
    }

    pub fn output_state(&self) -> &PureQubit {
        &self.output_state
    }

    /// The channel as a singleton CP map.
    pub fn as_cp_map(&self) -> CPMap {
        CPMap::singleton(self.kraus.clone()).expect("validated at construction")
    }

    /// Success probability for input `psi`: `||M0 (psi (x) |0>)||^2`,
    /// which equals `(1 - Z)/2` for the input's Bloch `Z`.
    pub fn success_probability(&self, psi: &PureQubit) -> f64 {
        apply_kraus(&self.kraus, psi, &PureQubit::ket0()).norm_sqr()
    }

    /// Phase `theta` in `[0, 2pi)` making the output proportional to
    /// `alpha |psi> + beta e^{i theta} |0>`, for `psi` on the circle
    /// (within 1e-9). Found by phase matching, not by the closed-form
    /// arctangent, which is singular at mu = 0; on-circle states with zero
    /// output (`psi = |0>`) report `theta = 0`.
    pub fn phase_for_state(&self, psi: &PureQubit) -> Result<f64> {
        let residual = self.circle.residual(&state_to_bloch(psi));
        if residual.abs() > 1e-9 {
            return Err(Error::OffCircle(residual));
        }
        let out = apply_kraus(&self.kraus, psi, &PureQubit::ket0());
        if out.norm_sqr() < 1e-18 {
            return Ok(0.0);
        }
        let report = fit_phase(&out, &self.spec, psi, &PureQubit::ket0(), 1e-9)?;
        report.theta.ok_or(Error::PhaseFitFailed)
    }
}

/// Construct the channel for a circle. Non-canonical input is canonicalized
/// first (so `cos mu >= 0` and the denominators stay positive); `|c|` must
/// stay strictly below 1, since a tangent circle would force `beta = 0`.
pub fn synthesize_channel(circ: &SphereCircle) -> Result<SuperpositionChannel> {
    let circ = circ.canonicalize();
    let (mu, nu, c) = (circ.mu(), circ.nu(), circ.c());
    if c.abs() >= 1.0 - 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "tangent circle (|c| = {}) leaves no weight on the known state",
            c.abs()
        )));
    }

    let cos_mu = mu.cos();
    let denom = 2.0 + cos_mu - c;
    let alpha = ((1.0 + cos_mu) / denom).sqrt();
    let beta = ((1.0 - c) / denom).sqrt();
    let spec = SuperpositionSpec::from_real(alpha, beta)?;
    let lambda = (1.0 + cos_mu) / (2.0 * alpha * alpha);

    let (half_sin, half_cos) = ((0.5 * mu).sin(), (0.5 * mu).cos());
    let mut m = CMatrix::zeros(2, 4);
    m.set(0, 2, Complex64::from_polar(half_sin, nu));
    m.set(1, 2, c64(-half_cos, 0.0));
    let kraus = KrausOperator::new(m)?;

    // Fixed output ray (sin(mu/2) e^{i nu}, -cos(mu/2)), canonicalized.
    let output_state = PureQubit::new(Complex64::from_polar(half_sin, nu), c64(-half_cos, 0.0))?;

    Ok(SuperpositionChannel {
        kraus,
        spec,
        lambda,
        circle: circ,
        output_state,
    })
}

/// The alternate fixture for the ring `Z + 1/2 = 0`: operator with
/// `a11 = sqrt(1/2)`, `a23 = -sqrt(1/2)`, weights `alpha = -sqrt(1/2)`,
/// `beta = sqrt(1/2)`, and constant phase `theta = 0`. Unlike the
/// synthesized channel its output depends on the input: each ring state maps
/// to another ring state (the azimuth shifts by pi) with probability 1/2.
pub fn alternate_channel_example() -> (KrausOperator, SuperpositionSpec, f64) {
    let s = 0.5f64.sqrt();
    let mut m = CMatrix::zeros(2, 4);
    m.set(0, 0, c64(s, 0.0));
    m.set(1, 2, c64(-s, 0.0));
    let kraus = KrausOperator::new(m).expect("columns have norm <= 1");
    let spec = SuperpositionSpec::from_real(-s, s).expect("normalized weights");
    (kraus, spec, 0.0)
}

/// Wire form of a channel file. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub kraus: [[(f64, f64); 4]; 2],
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
    pub lambda: f64,
    pub circle: SphereCircle,
    pub output_state: [(f64, f64); 2],
}

impl From<&SuperpositionChannel> for ChannelJson {
    fn from(ch: &SuperpositionChannel) -> Self {
        let m = ch.kraus.matrix();
        let pair = |z: Complex64| (z.re, z.im);
        let mut kraus = [[(0.0, 0.0); 4]; 2];
        for (i, row) in kraus.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = pair(m.get(i, j));
            }
        }
        Self {
            kraus,
            alpha: pair(ch.spec.alpha()),
            beta: pair(ch.spec.beta()),
            lambda: ch.lambda,
            circle: ch.circle,
            output_state: [pair(ch.output_state.a0()), pair(ch.output_state.a1())],
        }
    }
}

impl TryFrom<&ChannelJson> for SuperpositionChannel {
    type Error = Error;

    fn try_from(w: &ChannelJson) -> Result<Self> {
        let mut m = CMatrix::zeros(2, 4);
        for i in 0..2 {
            for j in 0..4 {
                let (re, im) = w.kraus[i][j];
                m.set(i, j, c64(re, im));
            }
        }
        let kraus = KrausOperator::new(m)?;
        let spec = SuperpositionSpec::new(
            c64(w.alpha.0, w.alpha.1),
            c64(w.beta.0, w.beta.1),
        )?;
        if !(w.lambda > 0.0) {
            return Err(Error::InvalidArgument("lambda must be > 0".into()));
        }
        let output_state = PureQubit::new(
            c64(w.output_state[0].0, w.output_state[0].1),
            c64(w.output_state[1].0, w.output_state[1].1),
        )?;
        Ok(SuperpositionChannel {
            kraus,
            spec,
            lambda: w.lambda,
            circle: w.circle.canonicalize(),
            output_state,
        })
    }
}
