//! Plane-wave eigenstate wavefunctions, the two-term general solution of the
//! generalized Klein-Gordon eigenvalue equation, finite-difference residual
//! checks, finite-box overlaps, and Gaussian wavepacket moments.
//!
//! Every plane wave carries the fixed normalization prefactor 1/(2π)² and is
//! a pure phase: nothing moves through space, the complex winding does.

use crate::error::{Error, Result};
use crate::exec::{sum_indexed, Workers};
use crate::mass_states::BoostedMassState;
use crate::tetrad::FourVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// 1/(2π)², the plane-wave normalization.
pub const WAVE_NORM: f64 = 1.0 / (4.0 * PI * PI);

/// A point (τ, ξ) in the local spacetime basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub tau: f64,
    pub xi: [f64; 3],
}

impl SpacetimePoint {
    pub fn new(tau: f64, xi: [f64; 3]) -> Self {
        assert!(
            tau.is_finite() && xi.iter().all(|c| c.is_finite()),
            "spacetime point components must be finite"
        );
        Self { tau, xi }
    }

    pub fn origin() -> Self {
        Self::new(0.0, [0.0; 3])
    }
}

/// Which energy branch a plane wave carries: K = P + V or K̄ = −P + V.
/// The negative branch corresponds to m → −m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergySign {
    Positive,
    Negative,
}

/// A plane-wave eigenstate of a boosted four-mass state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveState {
    state: BoostedMassState,
    sign: EnergySign,
}

impl PlaneWaveState {
    pub fn new(state: BoostedMassState, sign: EnergySign) -> Self {
        Self { state, sign }
    }

    pub fn positive(state: BoostedMassState) -> Self {
        Self::new(state, EnergySign::Positive)
    }

    pub fn state(&self) -> &BoostedMassState {
        &self.state
    }

    /// The effective four-mass vector of the branch: K or K̄ = −P + V.
    pub fn effective_four_mass(&self) -> FourVector {
        match self.sign {
            EnergySign::Positive => self.state.four_mass(),
            EnergySign::Negative => -self.state.p() + self.state.v(),
        }
    }

    /// φ(p) = e^{−i(K·t τ − K⃗·ξ⃗)}/(2π)².
    pub fn evaluate(&self, p: &SpacetimePoint) -> Complex64 {
        let k = self.effective_four_mass();
        plane_phase(&k, p) * WAVE_NORM
    }
}

/// e^{−i K_a ξ^a} with K_a ξ^a = K.t τ − K⃗·ξ⃗.
fn plane_phase(k: &FourVector, p: &SpacetimePoint) -> Complex64 {
    let contraction = k.t * p.tau - k.x * p.xi[0] - k.y * p.xi[1] - k.z * p.xi[2];
    Complex64::from_polar(1.0, -contraction)
}

/// Wavefunction of a particle at rest: e^{−i(mτ − k·ξ)}/(2π)².
pub fn evaluate_rest_wave(m: f64, k: [f64; 3], p: &SpacetimePoint) -> Complex64 {
    let phase = m * p.tau - (k[0] * p.xi[0] + k[1] * p.xi[1] + k[2] * p.xi[2]);
    Complex64::from_polar(WAVE_NORM, -phase)
}

/// Lorentz-transformed wavefunction of a moving state,
/// e^{−iτ(E + β·V)} e^{iξ·(V + βE)}/(2π)².
pub fn evaluate_plane_wave(w: &PlaneWaveState, p: &SpacetimePoint) -> Complex64 {
    w.evaluate(p)
}

/// The two-term general solution A e^{−iK_aξ^a} + B e^{−iK̄_aξ^a}, both
/// terms carrying the common 1/(2π)² prefactor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperpositionState {
    a: Complex64,
    b: Complex64,
    state: BoostedMassState,
}

impl SuperpositionState {
    /// At least one coefficient must be nonzero.
    pub fn new(a: Complex64, b: Complex64, state: BoostedMassState) -> Result<Self> {
        if a.norm_sqr() == 0.0 && b.norm_sqr() == 0.0 {
            return Err(Error::InvalidArgument {
                context: "wavefunctions",
                detail: "superposition coefficients A and B are both zero".into(),
            });
        }
        Ok(Self { a, b, state })
    }

    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    pub fn state(&self) -> &BoostedMassState {
        &self.state
    }

    pub fn evaluate(&self, p: &SpacetimePoint) -> Complex64 {
        let plus = PlaneWaveState::new(self.state, EnergySign::Positive).evaluate(p);
        let minus = PlaneWaveState::new(self.state, EnergySign::Negative).evaluate(p);
        self.a * plus + self.b * minus
    }
}

/// Evaluate the general solution at a point.
pub fn evaluate_general_solution(s: &SuperpositionState, p: &SpacetimePoint) -> Complex64 {
    s.evaluate(p)
}

/// Finite-difference residual of the generalized KG eigenvalue equation:
/// (K²_h − M²)φ at `p`, where K²_h = −∂²_{τ,h} + ∇²_h realizes the operator
/// K_aK^a (with K_a = i∂_a) through 3-point central differences of step h.
/// O(h²) for exact solutions, any sign of M².
pub fn kg_residual(s: &SuperpositionState, p: &SpacetimePoint, h: f64) -> Complex64 {
    assert!(h > 0.0, "finite-difference step must be positive");
    let m2 = s.state.m_squared();
    let at = |tau: f64, xi: [f64; 3]| s.evaluate(&SpacetimePoint::new(tau, xi));
    let center = at(p.tau, p.xi);
    let h2 = h * h;

    let d2_tau = (at(p.tau + h, p.xi) + at(p.tau - h, p.xi) - 2.0 * center) / h2;
    let mut lap = Complex64::new(0.0, 0.0);
    for axis in 0..3 {
        let mut hi = p.xi;
        let mut lo = p.xi;
        hi[axis] += h;
        lo[axis] -= h;
        lap += (at(p.tau, hi) + at(p.tau, lo) - 2.0 * center) / h2;
    }
    -d2_tau + lap - m2 * center
}

/// Apply i∂_a by first-order central differences to a plane wave; returns
/// the four recovered covariant eigenvalue components (K.t, −K.x, −K.y, −K.z)
/// normalized by φ(p). O(h²) against `effective_four_mass`.
pub fn eigenvalue_by_differences(w: &PlaneWaveState, p: &SpacetimePoint, h: f64) -> [Complex64; 4] {
    let at = |tau: f64, xi: [f64; 3]| w.evaluate(&SpacetimePoint::new(tau, xi));
    let center = at(p.tau, p.xi);
    let i = Complex64::new(0.0, 1.0);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    out[0] = i * (at(p.tau + h, p.xi) - at(p.tau - h, p.xi)) / (2.0 * h) / center;
    for axis in 0..3 {
        let mut hi = p.xi;
        let mut lo = p.xi;
        hi[axis] += h;
        lo[axis] -= h;
        out[axis + 1] = i * (at(p.tau, hi) - at(p.tau, lo)) / (2.0 * h) / center;
    }
    out
}

/// Numerical overlap ∫ conj(φ₁)φ₂ over the 4-cube [−L, L]⁴ by midpoint
/// quadrature. The integrand e^{iΔK_aξ^a}/(2π)⁴ separates per axis, so the
/// product of four 1-D midpoint sums is the exact same quadrature value as
/// the full 4-D sweep.
pub fn box_overlap(
    w1: &PlaneWaveState,
    w2: &PlaneWaveState,
    box_half_width: f64,
    quadrature_step: f64,
) -> Result<Complex64> {
    if !(box_half_width > 0.0) || !(quadrature_step > 0.0) {
        return Err(Error::InvalidArgument {
            context: "wavefunctions",
            detail: "box half-width and quadrature step must be positive".into(),
        });
    }
    let k1 = w1.effective_four_mass();
    let k2 = w2.effective_four_mass();
    // the integrand beats at ΔK per axis; each individual wave must also be
    // resolved per the operation contract
    let max_component = k1
        .as_array()
        .iter()
        .chain(k2.as_array().iter())
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let beat = (k1 - k2)
        .as_array()
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let rate = max_component.max(beat);
    if rate * quadrature_step > PI / 4.0 {
        return Err(Error::GridResolution {
            context: "wavefunctions",
            detail: format!(
                "step {quadrature_step} too coarse for wavelength 2pi/{rate}; need step <= {}",
                PI / 4.0 / rate
            ),
        });
    }

    let dk = k1 - k2;
    // conj(φ₁)φ₂ = e^{i dk.t τ} e^{−i dk⃗·ξ⃗} / (2π)⁴
    let mut total = Complex64::new(WAVE_NORM * WAVE_NORM, 0.0);
    let freqs = [dk.t, -dk.x, -dk.y, -dk.z];
    for f in freqs {
        total *= axis_midpoint_sum(f, box_half_width, quadrature_step);
    }
    Ok(total)
}

/// Midpoint sum of e^{i c x} over [−L, L].
fn axis_midpoint_sum(c: f64, half_width: f64, step: f64) -> Complex64 {
    let n = ((2.0 * half_width) / step).ceil() as usize;
    let s = 2.0 * half_width / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let x = -half_width + (j as f64 + 0.5) * s;
        acc += Complex64::from_polar(1.0, c * x);
    }
    acc * s
}

/// Gaussian wavepacket description. `sigma_k` and `sigma_m` are the standard
/// deviations of the |amplitude|² marginals in vector-mass and scalar-mass;
/// the synthesis weight per axis is exp(−(k−c)²/(4σ²)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavepacketSpec {
    pub center_k: [f64; 3],
    pub sigma_k: [f64; 3],
    pub center_m: f64,
    pub sigma_m: f64,
    pub grid: PacketGrid,
}

/// Position-space sampling box (shared by the three ξ axes and the τ axis).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketGrid {
    pub half_width: f64,
    pub step: f64,
}

impl WavepacketSpec {
    pub fn validate(&self) -> Result<()> {
        let widths = [
            self.sigma_k[0],
            self.sigma_k[1],
            self.sigma_k[2],
            self.sigma_m,
        ];
        if !widths.iter().all(|w| w.is_finite() && *w > 0.0) {
            return Err(Error::InvalidArgument {
                context: "wavefunctions",
                detail: "packet widths must be strictly positive".into(),
            });
        }
        if !(self.grid.half_width > 0.0) || !(self.grid.step > 0.0) {
            return Err(Error::InvalidArgument {
                context: "wavefunctions",
                detail: "grid half-width and step must be positive".into(),
            });
        }
        let max_width = widths.iter().fold(0.0f64, |m, w| m.max(*w));
        if self.grid.step >= 1.0 / (4.0 * max_width) {
            return Err(Error::GridResolution {
                context: "wavefunctions",
                detail: format!(
                    "step {} does not resolve the narrowest packet feature; need step < {}",
                    self.grid.step,
                    1.0 / (4.0 * max_width)
                ),
            });
        }
        Ok(())
    }
}

/// Widths of one conjugate pair and their product.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMoments {
    pub position_width: f64,
    pub momentum_width: f64,
    pub product: f64,
}

/// Measured wavepacket widths per axis plus the τ/m pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// (Δξⁱ, Δkⁱ, Δξⁱ·Δkⁱ) per spatial axis.
    pub axes: [PairMoments; 3],
    /// (Δτ, Δm, Δτ·Δm) at the fixed-position slice ξ = 0.
    pub tau_m: PairMoments,
    /// Lower bound saturated by Gaussian packets under the standard-deviation
    /// dispersion measure used here.
    pub fourier_lower_bound: f64,
    /// A stricter bound of 1 per conjugate pair is sometimes stated for these
    /// pairs under an unspecified dispersion convention; it is recorded here
    /// for comparison and is not a property of the standard-deviation measure.
    pub comparison_bound: f64,
    pub note: String,
}

/// Fraction of the |φ|² mass sitting in the outermost grid cells (leak
/// indicator for a box that is too small).
const LEAK_TOLERANCE: f64 = 1e-6;

/// Synthesize the packet by midpoint quadrature over the Gaussian weights
/// and measure standard deviations of the |φ|² marginals.
///
/// The weight is a product of per-axis Gaussians and the rest-wave phase
/// factorizes per axis, so each marginal reduces exactly to a 1-D synthesis
/// along its own axis; the τ/m pair is the 1-D synthesis over scalar-mass at
/// ξ = 0.
pub fn wavepacket_moments(spec: &WavepacketSpec, workers: Workers) -> Result<MomentReport> {
    spec.validate()?;
    let mut axes = [PairMoments {
        position_width: 0.0,
        momentum_width: 0.0,
        product: 0.0,
    }; 3];
    for (i, slot) in axes.iter_mut().enumerate() {
        // spatial phase e^{+i k ξ}
        *slot = pair_moments_1d(
            spec.center_k[i],
            spec.sigma_k[i],
            &spec.grid,
            1.0,
            workers,
        )?;
    }
    // temporal phase e^{−i m τ}
    let tau_m = pair_moments_1d(spec.center_m, spec.sigma_m, &spec.grid, -1.0, workers)?;
    Ok(MomentReport {
        axes,
        tau_m,
        fourier_lower_bound: 0.5,
        comparison_bound: 1.0,
        note: "standard-deviation widths; minimal Gaussian packets saturate product = 1/2 \
               per conjugate pair (the recorded comparison bound of 1 assumes a different \
               dispersion measure)"
            .to_string(),
    })
}

fn pair_moments_1d(
    center: f64,
    sigma: f64,
    grid: &PacketGrid,
    phase_sign: f64,
    workers: Workers,
) -> Result<PairMoments> {
    // amplitude weight exp(−(k−c)²/(4σ²)) has standard deviation √2·σ
    let s_amp = std::f64::consts::SQRT_2 * sigma;
    let k_range = 8.0 * s_amp;
    // k-step: resolve the weight and push aliased images beyond 4 box widths
    let dk_target = (s_amp / 6.0).min(PI / (2.0 * grid.half_width));
    let nk = ((2.0 * k_range) / dk_target).ceil() as usize;
    let dk = 2.0 * k_range / nk as f64;
    let ks: Vec<f64> = (0..nk)
        .map(|j| center - k_range + (j as f64 + 0.5) * dk)
        .collect();
    let weights: Vec<f64> = ks
        .iter()
        .map(|k| (-(k - center).powi(2) / (4.0 * sigma * sigma)).exp())
        .collect();

    let nx = ((2.0 * grid.half_width) / grid.step).ceil() as usize;
    let sx = 2.0 * grid.half_width / nx as f64;
    let xs: Vec<f64> = (0..nx)
        .map(|j| -grid.half_width + (j as f64 + 0.5) * sx)
        .collect();

    // density |ψ(x)|² with ψ(x) = Σ w(k) e^{i·sign·k x} dk
    let density: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let psi = sum_indexed(nk, workers, |j| {
                Complex64::from_polar(weights[j], phase_sign * ks[j] * x)
            }) * dk;
            psi.norm_sqr()
        })
        .collect();

    let total: f64 = density.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidArgument {
            context: "wavefunctions",
            detail: "packet density vanished on the grid".into(),
        });
    }
    let leak = (density[0] + density[nx - 1]) / total;
    if leak > LEAK_TOLERANCE {
        return Err(Error::GridResolution {
            context: "wavefunctions",
            detail: format!(
                "packet leaks outside the sampling box (boundary mass fraction {leak:.2e})"
            ),
        });
    }

    let mean: f64 = density
        .iter()
        .zip(&xs)
        .map(|(d, x)| d * x)
        .sum::<f64>()
        / total;
    let var: f64 = density
        .iter()
        .zip(&xs)
        .map(|(d, x)| d * (x - mean) * (x - mean))
        .sum::<f64>()
        / total;
    let position_width = var.sqrt();

    let wtot: f64 = weights.iter().map(|w| w * w).sum();
    let kmean: f64 = weights
        .iter()
        .zip(&ks)
        .map(|(w, k)| w * w * k)
        .sum::<f64>()
        / wtot;
    let kvar: f64 = weights
        .iter()
        .zip(&ks)
        .map(|(w, k)| w * w * (k - kmean) * (k - kmean))
        .sum::<f64>()
        / wtot;
    let momentum_width = kvar.sqrt();

    Ok(PairMoments {
        position_width,
        momentum_width,
        product: position_width * momentum_width,
    })
}

/// One row of a CSV grid dump: a sample of a wavefunction on a line cut.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSample {
    pub tau: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub re: f64,
    pub im: f64,
}

/// Sample the packet along line cuts (the τ axis at ξ = 0, then each ξ axis
/// at τ = 0) for grid dumps. The packet is the product of its per-axis
/// syntheses, so each cut is the corresponding 1-D profile scaled by the
/// central values of the other axes.
pub fn packet_line_cuts(spec: &WavepacketSpec, workers: Workers) -> Result<Vec<GridSample>> {
    spec.validate()?;
    let nx = ((2.0 * spec.grid.half_width) / spec.grid.step).ceil() as usize;
    let sx = 2.0 * spec.grid.half_width / nx as f64;
    let xs: Vec<f64> = (0..nx)
        .map(|j| -spec.grid.half_width + (j as f64 + 0.5) * sx)
        .collect();

    let axis_profile = |center: f64, sigma: f64, phase_sign: f64| -> Vec<Complex64> {
        let s_amp = std::f64::consts::SQRT_2 * sigma;
        let k_range = 8.0 * s_amp;
        let dk_target = (s_amp / 6.0).min(PI / (2.0 * spec.grid.half_width));
        let nk = ((2.0 * k_range) / dk_target).ceil() as usize;
        let dk = 2.0 * k_range / nk as f64;
        xs.iter()
            .map(|&x| {
                sum_indexed(nk, workers, |j| {
                    let k = center - k_range + (j as f64 + 0.5) * dk;
                    let w = (-(k - center).powi(2) / (4.0 * sigma * sigma)).exp();
                    Complex64::from_polar(w, phase_sign * k * x)
                }) * dk
            })
            .collect()
    };

    let profiles: Vec<Vec<Complex64>> = vec![
        axis_profile(spec.center_m, spec.sigma_m, -1.0),
        axis_profile(spec.center_k[0], spec.sigma_k[0], 1.0),
        axis_profile(spec.center_k[1], spec.sigma_k[1], 1.0),
        axis_profile(spec.center_k[2], spec.sigma_k[2], 1.0),
    ];
    let center_idx = nx / 2;
    let mut rows = Vec::with_capacity(4 * nx);
    for (axis, profile) in profiles.iter().enumerate() {
        // product of the other axes' central values
        let mut scale = Complex64::new(1.0, 0.0);
        for (other, p) in profiles.iter().enumerate() {
            if other != axis {
                scale *= p[center_idx];
            }
        }
        for (j, val) in profile.iter().enumerate() {
            let full = scale * val;
            let mut coords = [0.0; 4];
            coords[axis] = xs[j];
            rows.push(GridSample {
                tau: coords[0],
                xi1: coords[1],
                xi2: coords[2],
                xi3: coords[3],
                re: full.re,
                im: full.im,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass_states::{boost_state, RestMassState};
    use crate::tetrad::ThreeVelocity;

    fn state(m: f64, k: [f64; 3], beta: [f64; 3]) -> BoostedMassState {
        boost_state(
            &RestMassState::new(m, k).unwrap(),
            &ThreeVelocity::new(beta).unwrap(),
        )
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn rest_wave_examples() {
        let p0 = SpacetimePoint::origin();
        let got = evaluate_rest_wave(1.0, [0.0; 3], &p0);
        assert!(close(got, Complex64::new(WAVE_NORM, 0.0), 1e-15));
        assert!((WAVE_NORM - 0.025330295910584444).abs() < 1e-18);

        // e^{−iπ} = −1
        let got = evaluate_rest_wave(1.0, [0.0; 3], &SpacetimePoint::new(PI, [0.0; 3]));
        assert!(close(got, Complex64::new(-WAVE_NORM, 0.0), 1e-15));

        // phase mτ − k·ξ = 0 cancels
        let got = evaluate_rest_wave(1.0, [1.0, 0.0, 0.0], &SpacetimePoint::new(1.0, [1.0, 0.0, 0.0]));
        assert!(close(got, Complex64::new(WAVE_NORM, 0.0), 1e-15));
    }

    #[test]
    fn plane_wave_reduces_to_rest_wave_at_zero_velocity() {
        let w = PlaneWaveState::positive(state(1.3, [0.4, -0.2, 0.9], [0.0; 3]));
        for p in [
            SpacetimePoint::new(0.3, [0.1, -0.5, 0.2]),
            SpacetimePoint::new(-1.1, [0.0, 2.0, -0.7]),
        ] {
            let got = evaluate_plane_wave(&w, &p);
            let want = evaluate_rest_wave(1.3, [0.4, -0.2, 0.9], &p);
            assert!(close(got, want, 1e-15));
        }
    }

    #[test]
    fn plane_wave_boosted_phase() {
        let w = PlaneWaveState::positive(state(1.0, [1.0, 0.0, 0.0], [0.6, 0.0, 0.0]));
        let origin = evaluate_plane_wave(&w, &SpacetimePoint::origin());
        assert!(close(origin, Complex64::new(WAVE_NORM, 0.0), 1e-15));

        // E + β·V = 2 for this state
        let got = evaluate_plane_wave(&w, &SpacetimePoint::new(1.0, [0.0; 3]));
        let want = Complex64::from_polar(WAVE_NORM, -2.0);
        assert!(close(got, want, 1e-14));
    }

    #[test]
    fn plane_wave_is_pure_phase() {
        let w = PlaneWaveState::positive(state(1.7, [0.3, 1.1, -0.4], [0.2, -0.3, 0.4]));
        for p in [
            SpacetimePoint::new(0.9, [4.0, -2.0, 0.5]),
            SpacetimePoint::new(-3.0, [0.0, 0.1, 7.0]),
        ] {
            assert!((evaluate_plane_wave(&w, &p).norm() - WAVE_NORM).abs() < 1e-15);
        }
    }

    #[test]
    fn general_solution_examples() {
        let s = state(1.0, [0.0; 3], [0.0; 3]);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);

        // A = 1, B = 0 reduces to the positive-energy plane wave
        let sup = SuperpositionState::new(one, zero, s).unwrap();
        let p = SpacetimePoint::new(0.4, [0.2, 0.0, -0.1]);
        assert!(close(
            sup.evaluate(&p),
            PlaneWaveState::positive(s).evaluate(&p),
            1e-15
        ));

        // A = 0, B = 1 at rest: e^{+imτ}/(2π)²
        let sup = SuperpositionState::new(zero, one, s).unwrap();
        let p = SpacetimePoint::new(0.7, [0.0; 3]);
        assert!(close(sup.evaluate(&p), Complex64::from_polar(WAVE_NORM, 0.7), 1e-15));

        // A = B = 1/2 gives cos(mτ)/(2π)² at ξ = 0
        let half = Complex64::new(0.5, 0.0);
        let sup = SuperpositionState::new(half, half, s).unwrap();
        let got = sup.evaluate(&SpacetimePoint::new(0.7, [0.0; 3]));
        assert!(close(got, Complex64::new(0.7f64.cos() * WAVE_NORM, 0.0), 1e-15));

        assert!(SuperpositionState::new(zero, zero, s).is_err());
    }

    #[test]
    fn boost_consistency_with_rest_wave() {
        // the boosted wave equals the rest wave evaluated in boosted coordinates
        let m = 1.4;
        let k = [0.8, -0.3, 0.5];
        let beta = ThreeVelocity::new([0.5, 0.1, -0.3]).unwrap();
        let w = PlaneWaveState::positive(boost_state(&RestMassState::new(m, k).unwrap(), &beta));
        let inverse = crate::tetrad::boost_matrix(&beta.reversed());
        for p in [
            SpacetimePoint::new(0.6, [0.3, -0.2, 1.0]),
            SpacetimePoint::new(-1.2, [2.0, 0.4, -0.5]),
        ] {
            let event = FourVector::from_parts(p.tau, p.xi);
            let back = inverse.apply(&event);
            let rest_p = SpacetimePoint::new(back.t, back.spatial());
            let got = evaluate_plane_wave(&w, &p);
            let want = evaluate_rest_wave(m, k, &rest_p);
            assert!(close(got, want, 1e-9), "got {got}, want {want}");
        }
    }

    #[test]
    fn eigenvalue_recovery_by_differences() {
        let w = PlaneWaveState::positive(state(1.0, [1.0, 0.0, 0.0], [0.6, 0.0, 0.0]));
        let kv = w.effective_four_mass();
        let got = eigenvalue_by_differences(&w, &SpacetimePoint::new(0.2, [0.1, 0.0, 0.3]), 1e-4);
        let want = [kv.t, -kv.x, -kv.y, -kv.z];
        for (g, w_) in got.iter().zip(want.iter()) {
            assert!((g.re - w_).abs() < 1e-6, "{} vs {}", g.re, w_);
            assert!(g.im.abs() < 1e-6);
        }
    }

    #[test]
    fn kg_residual_second_order() {
        // exact plane wave: residual O(h²), ratio → 4
        let s = state(1.0, [0.5, 0.0, 0.0], [0.3, 0.0, 0.0]);
        let sup = SuperpositionState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), s)
            .unwrap();
        let p = SpacetimePoint::new(0.3, [0.1, -0.2, 0.4]);
        let r1 = kg_residual(&sup, &p, 0.01);
        let r2 = kg_residual(&sup, &p, 0.005);
        let ratio = r1.norm() / r2.norm();
        assert!((3.8..=4.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn kg_residual_small_at_fine_step() {
        let s = state(1.0, [0.0; 3], [0.0; 3]);
        let sup = SuperpositionState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), s)
            .unwrap();
        let p = SpacetimePoint::new(0.3, [0.0; 3]);
        let r = kg_residual(&sup, &p, 1e-3);
        let phi = sup.evaluate(&p);
        assert!(r.norm() < 1e-6 * phi.norm(), "residual {}", r.norm());
    }

    #[test]
    fn kg_residual_negative_m_squared() {
        // |k| > m: the eigenvalue equation holds for negative M² too
        let s = state(1.0, [2.0, 0.0, 0.0], [0.4, 0.0, 0.0]);
        let sup = SuperpositionState::new(Complex64::new(0.7, 0.1), Complex64::new(0.2, -0.4), s)
            .unwrap();
        let p = SpacetimePoint::new(-0.4, [0.3, 0.1, 0.0]);
        let r1 = kg_residual(&sup, &p, 0.01);
        let r2 = kg_residual(&sup, &p, 0.005);
        assert!(r1.norm() < 1e-3);
        let ratio = r1.norm() / r2.norm();
        assert!((3.8..=4.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn box_overlap_diagonal() {
        let w = PlaneWaveState::positive(state(1.0, [0.3, 0.0, 0.0], [0.2, 0.0, 0.0]));
        let l = 2.0 * PI;
        let got = box_overlap(&w, &w, l, 0.05).unwrap();
        let want = (2.0 * l).powi(4) / (2.0 * PI).powi(4); // = 16 for L = 2π
        assert!((got.re - want).abs() / want < 1e-12);
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn box_overlap_commensurate_beat_vanishes() {
        let l = 2.0 * PI;
        let m1 = 1.0;
        let dm = 2.0 * PI / l;
        let w1 = PlaneWaveState::positive(state(m1, [0.2, 0.0, 0.0], [0.0; 3]));
        let w2 = PlaneWaveState::positive(state(m1 + dm, [0.2, 0.0, 0.0], [0.0; 3]));
        let got = box_overlap(&w1, &w2, l, 0.05).unwrap();
        let diag = (2.0 * l).powi(4) / (2.0 * PI).powi(4);
        assert!(got.norm() / diag < 1e-12, "got {got}");
    }

    #[test]
    fn box_overlap_dirichlet_envelope() {
        let l = 2.0 * PI;
        for dm in [0.3, 0.7, 1.1, 1.9] {
            let w1 = PlaneWaveState::positive(state(1.0, [0.0; 3], [0.0; 3]));
            let w2 = PlaneWaveState::positive(state(1.0 + dm, [0.0; 3], [0.0; 3]));
            let got = box_overlap(&w1, &w2, l, 0.02).unwrap();
            let diag = (2.0 * l).powi(4) / (2.0 * PI).powi(4);
            let ratio = got.re / diag;
            let want = (dm * l).sin() / (dm * l);
            assert!((ratio - want).abs() < 1e-3, "dm={dm}: {ratio} vs {want}");
        }
    }

    #[test]
    fn box_overlap_rejects_coarse_step() {
        let w = PlaneWaveState::positive(state(5.0, [0.0; 3], [0.0; 3]));
        assert!(matches!(
            box_overlap(&w, &w, PI, 1.0),
            Err(Error::GridResolution { .. })
        ));
    }

    #[test]
    fn wavepacket_gaussian_products() {
        let spec = WavepacketSpec {
            center_k: [0.0; 3],
            sigma_k: [1.0, 1.0, 1.0],
            center_m: 1.0,
            sigma_m: 0.5,
            grid: PacketGrid {
                half_width: 12.0,
                step: 0.05,
            },
        };
        let r = wavepacket_moments(&spec, Workers::serial()).unwrap();
        for ax in &r.axes {
            assert!((ax.momentum_width - 1.0).abs() < 1e-3);
            assert!((ax.position_width - 0.5).abs() < 1e-3);
            assert!((ax.product - 0.5).abs() < 1e-3);
        }
        assert!((r.tau_m.momentum_width - 0.5).abs() < 1e-3);
        assert!((r.tau_m.position_width - 1.0).abs() < 1e-3);
        assert!((r.tau_m.product - 0.5).abs() < 1e-3);
        assert_eq!(r.fourier_lower_bound, 0.5);
        assert_eq!(r.comparison_bound, 1.0);
    }

    #[test]
    fn wavepacket_scaling_symmetry() {
        let base = WavepacketSpec {
            center_k: [0.0; 3],
            sigma_k: [1.0, 1.0, 1.0],
            center_m: 1.0,
            sigma_m: 1.0,
            grid: PacketGrid {
                half_width: 12.0,
                step: 0.05,
            },
        };
        let doubled = WavepacketSpec {
            sigma_k: [2.0, 2.0, 2.0],
            grid: PacketGrid {
                half_width: 12.0,
                step: 0.025,
            },
            ..base
        };
        let a = wavepacket_moments(&base, Workers::serial()).unwrap();
        let b = wavepacket_moments(&doubled, Workers::serial()).unwrap();
        assert!((b.axes[0].momentum_width / a.axes[0].momentum_width - 2.0).abs() < 1e-3);
        assert!((b.axes[0].position_width / a.axes[0].position_width - 0.5).abs() < 1e-3);
        assert!((b.axes[0].product - a.axes[0].product).abs() < 1e-3);
    }

    #[test]
    fn wavepacket_leak_detected() {
        let spec = WavepacketSpec {
            center_k: [0.0; 3],
            sigma_k: [1.0, 1.0, 1.0],
            center_m: 1.0,
            sigma_m: 1.0,
            grid: PacketGrid {
                half_width: 0.8, // far too small for a width-1/2 packet
                step: 0.02,
            },
        };
        assert!(matches!(
            wavepacket_moments(&spec, Workers::serial()),
            Err(Error::GridResolution { .. })
        ));
    }

    #[test]
    fn moments_deterministic_across_workers() {
        let spec = WavepacketSpec {
            center_k: [0.4, 0.0, -0.2],
            sigma_k: [1.0, 0.7, 1.3],
            center_m: 1.0,
            sigma_m: 0.6,
            grid: PacketGrid {
                half_width: 14.0,
                step: 0.05,
            },
        };
        let a = wavepacket_moments(&spec, Workers::serial()).unwrap();
        let b = wavepacket_moments(&spec, Workers::new(5)).unwrap();
        assert_eq!(a, b);
    }
}
