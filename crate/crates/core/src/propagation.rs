//! The causal transition kernel and the operator matrix elements it is
//! built from: velocity-resolved propagation elements, particle and
//! antiparticle combinations over a two-level occupancy, spatial inner
//! products of inertial states, and a regularized-delta quadrature oracle
//! for the closed form.
//!
//! The closed-form kernel for a time-ordered displacement (Δτ > 0, Δξ) is
//! e^{−im·Δτ̄}/(2π|Δτ̄|) inside the light cone and exactly zero outside,
//! with Δτ̄ = Δτ·√(1 − |Δξ/Δτ|²) the invariant proper time. Negative m
//! selects the conjugate (antiparticle) branch.

use crate::error::{Error, Result};
use crate::exec::{sum_indexed, Workers};
use crate::mass_states::BoostedMassState;
use crate::tetrad::ThreeVelocity;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Causal classification of a displacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Timelike,
    Lightlike,
    Spacelike,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Timelike => "timelike",
            Regime::Lightlike => "lightlike",
            Regime::Spacelike => "spacelike",
        })
    }
}

/// A kernel argument: signed scalar-mass and a time-ordered displacement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelQuery {
    m: f64,
    dtau: f64,
    dxi: [f64; 3],
}

impl KernelQuery {
    /// Δτ must be strictly positive (time ordering); m is signed, the
    /// negative branch is the mass conjugate.
    pub fn new(m: f64, dtau: f64, dxi: [f64; 3]) -> Result<Self> {
        if !m.is_finite() || !dtau.is_finite() || !dxi.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite {
                context: "propagation",
            });
        }
        if dtau <= 0.0 {
            return Err(Error::TimeOrdering { dtau });
        }
        Ok(Self { m, dtau, dxi })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    pub fn dxi(&self) -> [f64; 3] {
        self.dxi
    }

    fn speed_sqr(&self) -> f64 {
        self.dxi.iter().map(|c| c * c).sum::<f64>() / (self.dtau * self.dtau)
    }

    /// The conjugate query m → −m.
    pub fn mass_conjugate(&self) -> Self {
        Self {
            m: -self.m,
            ..*self
        }
    }
}

/// Kernel amplitude with its causal regime and invariant proper time.
/// Outside the light cone the amplitude is exactly zero and the proper
/// time is reported as 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub amplitude: Complex64,
    pub regime: Regime,
    pub proper_time: f64,
}

/// Closed-form transition kernel. Lightlike displacements have no finite
/// value (1/|Δτ̄| diverges) and are reported as an error.
pub fn transition_kernel(q: &KernelQuery) -> Result<KernelValue> {
    let r2 = q.speed_sqr();
    if r2 < 1.0 {
        let proper_time = q.dtau * (1.0 - r2).sqrt();
        let amplitude = Complex64::from_polar(1.0, -q.m * proper_time) / (2.0 * PI * proper_time);
        Ok(KernelValue {
            amplitude,
            regime: Regime::Timelike,
            proper_time,
        })
    } else if r2 > 1.0 {
        Ok(KernelValue {
            amplitude: Complex64::new(0.0, 0.0),
            regime: Regime::Spacelike,
            proper_time: 0.0,
        })
    } else {
        Err(Error::LightlikeSingularity)
    }
}

/// The kernel of the mass-conjugated operator: m → −m, equal to the complex
/// conjugate of the direct kernel.
pub fn mass_conjugate_kernel(q: &KernelQuery) -> Result<KernelValue> {
    transition_kernel(&q.mass_conjugate())
}

/// Gaussian nascent-delta regularization for the operator matrix elements,
/// plus the β-ball quadrature resolution used by the oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularizationParams {
    epsilon: f64,
    beta_step: f64,
}

impl RegularizationParams {
    /// ε > 0; the β-grid step must resolve ε (step < ε/4).
    pub fn new(epsilon: f64, beta_step: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument {
                context: "propagation",
                detail: format!("nascent-delta width must be positive (got {epsilon})"),
            });
        }
        if !(beta_step > 0.0) || beta_step >= epsilon / 4.0 {
            return Err(Error::GridResolution {
                context: "propagation",
                detail: format!(
                    "beta grid step {beta_step} does not resolve epsilon = {epsilon}; need step < {}",
                    epsilon / 4.0
                ),
            });
        }
        Ok(Self { epsilon, beta_step })
    }

    /// Default grid: step = ε/8.
    pub fn with_default_grid(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, epsilon / 8.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn beta_step(&self) -> f64 {
        self.beta_step
    }

    /// Product Gaussian δ_ε³(u) = ∏ exp(−uᵢ²/2ε²)/(√(2π)ε).
    pub fn delta3(&self, u: [f64; 3]) -> f64 {
        let e2 = self.epsilon * self.epsilon;
        let norm = ((2.0 * PI).sqrt() * self.epsilon).powi(3);
        (-(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) / (2.0 * e2)).exp() / norm
    }
}

/// Matrix element of the velocity-resolved propagation operator:
/// e^{−iE(Δτ − β·Δξ)}/(2πγ) · δ_ε³(Δξ − βΔτ), with E = γm (m signed).
/// Concentrates on the causal path Δξ = βΔτ as ε → 0.
pub fn t_beta_element(
    m: f64,
    beta: &ThreeVelocity,
    dtau: f64,
    dxi: [f64; 3],
    reg: &RegularizationParams,
) -> Result<Complex64> {
    if dtau <= 0.0 {
        return Err(Error::TimeOrdering { dtau });
    }
    if m == 0.0 {
        return Err(Error::InvalidArgument {
            context: "propagation",
            detail: "t_beta_element requires m != 0".into(),
        });
    }
    let gamma = beta.gamma();
    let energy = gamma * m;
    let b = beta.components();
    let mismatch = [
        dxi[0] - b[0] * dtau,
        dxi[1] - b[1] * dtau,
        dxi[2] - b[2] * dtau,
    ];
    let phase = -energy * (dtau - beta.dot3(dxi));
    Ok(Complex64::from_polar(1.0, phase) / (2.0 * PI * gamma) * reg.delta3(mismatch))
}

/// Quadrature oracle for the closed-form kernel: the velocity-resolved
/// elements integrated over the open unit ball of β with the
/// Lorentz-invariant weight γ²Δτ² (the Δτ² factor is the Jacobian that
/// relates the ξ-space nascent delta to the β-space measure; with it the
/// quadrature converges to [`transition_kernel`] with O(ε²) bias).
///
/// The β grid is uniform Cartesian clipped to |β| < 1; cells whose Gaussian
/// weight is below the deterministic support threshold are skipped, which
/// changes the sum by less than one part in 1e7.
pub fn transition_kernel_numeric(
    q: &KernelQuery,
    reg: &RegularizationParams,
    workers: Workers,
) -> Result<Complex64> {
    let ratio = q.speed_sqr().sqrt();
    if ratio > 0.9 {
        return Err(Error::InvalidArgument {
            context: "propagation",
            detail: format!(
                "oracle requires |dxi|/dtau <= 0.9 to keep the stationary velocity away from \
                 the ball boundary (got {ratio:.3})"
            ),
        });
    }
    if q.m == 0.0 {
        return Err(Error::InvalidArgument {
            context: "propagation",
            detail: "oracle requires m != 0".into(),
        });
    }

    // global grid over (−1, 1) per axis
    let n = (2.0 / reg.beta_step).ceil() as usize;
    let step = 2.0 / n as f64;
    let center = |j: usize| -1.0 + (j as f64 + 0.5) * step;

    // per-axis index windows: beyond ~6.3σ the per-axis Gaussian factor is
    // below e^{−20} and the cell cannot move the sum at double precision
    let sigma_beta = reg.epsilon / q.dtau;
    let half_window = sigma_beta * (2.0f64 * 20.0).sqrt();
    let mut windows = Vec::with_capacity(3);
    for axis in 0..3 {
        let peak = q.dxi[axis] / q.dtau;
        let lo = (((peak - half_window) + 1.0) / step - 0.5).ceil().max(0.0) as usize;
        let hi = ((((peak + half_window) + 1.0) / step - 0.5).floor() as isize)
            .min(n as isize - 1);
        if hi < lo as isize {
            return Ok(Complex64::new(0.0, 0.0));
        }
        windows.push((lo, hi as usize));
    }

    let (x_lo, x_hi) = windows[0];
    let (y_lo, y_hi) = windows[1];
    let (z_lo, z_hi) = windows[2];
    let ny = y_hi - y_lo + 1;
    let nz = z_hi - z_lo + 1;
    let total = (x_hi - x_lo + 1) * ny * nz;

    let cell = step * step * step;
    let weight = q.dtau * q.dtau;

    let sum = sum_indexed(total, workers, |idx| {
        let ix = x_lo + idx / (ny * nz);
        let rem = idx % (ny * nz);
        let iy = y_lo + rem / nz;
        let iz = z_lo + rem % nz;
        let b = [center(ix), center(iy), center(iz)];
        let b2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
        if b2 >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let gamma = 1.0 / (1.0 - b2).sqrt();
        let energy = gamma * q.m;
        let bdot = b[0] * q.dxi[0] + b[1] * q.dxi[1] + b[2] * q.dxi[2];
        let mismatch = [
            q.dxi[0] - b[0] * q.dtau,
            q.dxi[1] - b[1] * q.dtau,
            q.dxi[2] - b[2] * q.dtau,
        ];
        // γ² · t_β = γ/(2π) e^{−iE(Δτ−β·Δξ)} δ_ε³
        Complex64::from_polar(1.0, -energy * (q.dtau - bdot)) * (gamma / (2.0 * PI))
            * reg.delta3(mismatch)
    });
    Ok(sum * cell * weight)
}

/// Occupancy of the two-level spacetime Fock label: 0 = vacuum, 1 = one
/// particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OccupancyLabel(u8);

impl OccupancyLabel {
    pub const VACUUM: OccupancyLabel = OccupancyLabel(0);
    pub const SINGLE: OccupancyLabel = OccupancyLabel(1);

    pub fn new(n: u8) -> Result<Self> {
        if n > 1 {
            return Err(Error::OccupancyOverflow);
        }
        Ok(Self(n))
    }

    pub fn n(&self) -> u8 {
        self.0
    }
}

/// Creation/annihilation amplitudes of the particle operator: a⁺ creates a
/// particle, b⁻ destroys an antiparticle. Mass conjugation maps a⁺ → a⁻ =
/// (a⁺)* and swaps the branch each amplitude multiplies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParticleCoefficients {
    pub a_plus: Complex64,
    pub b_minus: Complex64,
}

impl ParticleCoefficients {
    pub fn unit_creation() -> Self {
        Self {
            a_plus: Complex64::new(1.0, 0.0),
            b_minus: Complex64::new(0.0, 0.0),
        }
    }

    pub fn a_minus(&self) -> Complex64 {
        self.a_plus.conj()
    }

    pub fn b_plus(&self) -> Complex64 {
        self.b_minus.conj()
    }

    /// Coefficients of the mass-conjugated (antiparticle) operator,
    /// arranged so that the same element formula applies:
    /// a⁻ multiplies the m → −m branch and b⁺ the +m branch.
    pub fn mass_conjugate(&self) -> Self {
        Self {
            a_plus: self.b_plus(),
            b_minus: self.a_minus(),
        }
    }
}

/// Matrix element of the particle operator on a spacetime Fock label:
/// a⁺·t(m) + b⁻·t(−m) acting on the vacuum. Creating on an occupied label
/// overflows the two-level space.
pub fn particle_element(
    coeffs: &ParticleCoefficients,
    m: f64,
    beta: &ThreeVelocity,
    dtau: f64,
    dxi: [f64; 3],
    reg: &RegularizationParams,
    occupancy: OccupancyLabel,
) -> Result<Complex64> {
    if m <= 0.0 {
        return Err(Error::NonpositiveMass { m });
    }
    if occupancy.n() != 0 {
        return Err(Error::OccupancyOverflow);
    }
    let plus = t_beta_element(m, beta, dtau, dxi, reg)?;
    let minus = t_beta_element(-m, beta, dtau, dxi, reg)?;
    Ok(coeffs.a_plus * plus + coeffs.b_minus * minus)
}

/// Spatial inner product of two inertial states of the same velocity at
/// time τ: e^{−iτ(ΔE + β·ΔV)}/(2π) · δ_ε³(ΔV + βΔE), Δ taken bra − ket.
pub fn s_element(
    tau: f64,
    bra: &BoostedMassState,
    ket: &BoostedMassState,
    reg: &RegularizationParams,
) -> Result<Complex64> {
    if bra.beta() != ket.beta() {
        return Err(Error::VelocityMismatch);
    }
    let beta = bra.beta();
    let de = bra.energy() - ket.energy();
    let bv = bra.v().spatial();
    let kv = ket.v().spatial();
    let dv = [bv[0] - kv[0], bv[1] - kv[1], bv[2] - kv[2]];
    let b = beta.components();
    let arg = [dv[0] + b[0] * de, dv[1] + b[1] * de, dv[2] + b[2] * de];
    let phase = -tau * (de + beta.dot3(dv));
    Ok(Complex64::from_polar(1.0, phase) / (2.0 * PI) * reg.delta3(arg))
}
