//! Discretized path integral over spacelike slices: per-segment proper
//! times, polygonal path actions, stationary-path search, kernel
//! composition across slices, and Monte Carlo worldline statistics.
//!
//! Composition contracts the slice integrals as a transfer chain (cost
//! (N−1)·grid^(2D) instead of grid^(D·(N−1))) using the damped segment
//! kernel e^{−i(m − i·damping)Δτ̄}/(2πΔτ̄). Slice boxes are centered on the
//! straight-line path and tapered by a smooth window over their outer half
//! so box truncation cannot contaminate the stationary phase.

use crate::error::{Error, Result};
use crate::exec::{map_indexed, sum_indexed, Workers};
use crate::propagation::transition_kernel;
use crate::propagation::KernelQuery;
use crate::wavefunctions::SpacetimePoint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Invariant proper time of one timelike segment:
/// Δτ·√(1 − |Δξ/Δτ|²). Rejects Δτ ≤ 0 and |Δξ| ≥ Δτ (the lightlike
/// boundary included).
pub fn proper_time_segment(dtau: f64, dxi: &[f64]) -> Result<f64> {
    if dtau <= 0.0 {
        return Err(Error::TimeOrdering { dtau });
    }
    let r2 = dxi.iter().map(|c| c * c).sum::<f64>() / (dtau * dtau);
    if r2 >= 1.0 {
        return Err(Error::SpacelikeSegment { index: None });
    }
    Ok(dtau * (1.0 - r2).sqrt())
}

/// A polygonal worldline with strictly increasing slice times.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    vertices: Vec<SpacetimePoint>,
}

impl PiecewisePath {
    pub fn new(vertices: Vec<SpacetimePoint>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument {
                context: "path_integral",
                detail: "a path needs at least two vertices".into(),
            });
        }
        if !vertices.windows(2).all(|w| w[1].tau > w[0].tau) {
            return Err(Error::InvalidArgument {
                context: "path_integral",
                detail: "slice times must be strictly increasing".into(),
            });
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[SpacetimePoint] {
        &self.vertices
    }

    pub fn segments(&self) -> impl Iterator<Item = (f64, [f64; 3])> + '_ {
        self.vertices.windows(2).map(|w| {
            let dtau = w[1].tau - w[0].tau;
            let dxi = [
                w[1].xi[0] - w[0].xi[0],
                w[1].xi[1] - w[0].xi[1],
                w[1].xi[2] - w[0].xi[2],
            ];
            (dtau, dxi)
        })
    }
}

/// Proper times, total, action S = −m·Σ Δτ̄ⱼ, and phase e^{iS} of a path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionReport {
    pub segment_proper_times: Vec<f64>,
    pub total_proper_time: f64,
    pub action: f64,
    pub phase_re: f64,
    pub phase_im: f64,
}

impl ActionReport {
    pub fn phase(&self) -> Complex64 {
        Complex64::new(self.phase_re, self.phase_im)
    }
}

/// Sum the per-segment proper times of a path; all segments must be
/// timelike, the error names the first offending segment.
pub fn path_action(path: &PiecewisePath, m: f64) -> Result<ActionReport> {
    if m <= 0.0 {
        return Err(Error::NonpositiveMass { m });
    }
    let mut segment_proper_times = Vec::with_capacity(path.vertices.len() - 1);
    for (index, (dtau, dxi)) in path.segments().enumerate() {
        let tb = proper_time_segment(dtau, &dxi).map_err(|e| match e {
            Error::SpacelikeSegment { .. } => Error::SpacelikeSegment { index: Some(index) },
            other => other,
        })?;
        segment_proper_times.push(tb);
    }
    let total_proper_time: f64 = segment_proper_times.iter().sum();
    let action = -m * total_proper_time;
    let phase = Complex64::from_polar(1.0, action);
    Ok(ActionReport {
        segment_proper_times,
        total_proper_time,
        action,
        phase_re: phase.re,
        phase_im: phase.im,
    })
}

/// Result of the stationary-path search: the maximizing interior vertices
/// and the maximized total proper time.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryPath {
    pub vertices: Vec<SpacetimePoint>,
    pub total_proper_time: f64,
}

/// Find the interior vertices that maximize total proper time between two
/// timelike-separated endpoints, by gradient ascent with backtracking from
/// a deliberately perturbed start. The total proper time is strictly
/// concave on the timelike region, so the maximizer is unique (the straight
/// line); the ascent verifies that numerically rather than assuming it.
pub fn stationary_intermediate(
    start: &SpacetimePoint,
    end: &SpacetimePoint,
    interior_times: &[f64],
) -> Result<StationaryPath> {
    let total_dtau = end.tau - start.tau;
    let disp = [
        end.xi[0] - start.xi[0],
        end.xi[1] - start.xi[1],
        end.xi[2] - start.xi[2],
    ];
    if total_dtau <= 0.0 || disp.iter().map(|c| c * c).sum::<f64>() >= total_dtau * total_dtau {
        return Err(Error::NoTimelikePath);
    }
    if interior_times.is_empty() {
        return Ok(StationaryPath {
            vertices: Vec::new(),
            total_proper_time: proper_time_segment(total_dtau, &disp)?,
        });
    }
    let mut times = Vec::with_capacity(interior_times.len() + 2);
    times.push(start.tau);
    times.extend_from_slice(interior_times);
    times.push(end.tau);
    if !times.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument {
            context: "path_integral",
            detail: "interior times must be strictly increasing and inside the endpoints".into(),
        });
    }
    let n_int = interior_times.len();
    let dts: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();

    // straight-line interpolation, then a feasible deterministic perturbation
    let lerp = |tau: f64| -> [f64; 3] {
        let f = (tau - start.tau) / total_dtau;
        [
            start.xi[0] + f * disp[0],
            start.xi[1] + f * disp[1],
            start.xi[2] + f * disp[2],
        ]
    };
    let straight: Vec<[f64; 3]> = interior_times.iter().map(|&t| lerp(t)).collect();
    let speed = (disp.iter().map(|c| c * c).sum::<f64>()).sqrt() / total_dtau;
    let margin = dts
        .iter()
        .map(|dt| dt * (1.0 - speed))
        .fold(f64::INFINITY, f64::min);
    let mut xs = straight.clone();
    for (i, x) in xs.iter_mut().enumerate() {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        x[0] += sign * 0.2 * margin;
        x[1] -= sign * 0.1 * margin;
    }

    let total = |xs: &[[f64; 3]]| -> Option<f64> {
        let mut sum = 0.0;
        let mut prev = start.xi;
        for (i, dt) in dts.iter().enumerate() {
            let next = if i < n_int { xs[i] } else { end.xi };
            let d2: f64 = (0..3).map(|a| (next[a] - prev[a]).powi(2)).sum();
            if d2 >= dt * dt {
                return None;
            }
            sum += (dt * dt - d2).sqrt();
            prev = next;
        }
        Some(sum)
    };
    // ∂/∂xₙ Σ τ̄ⱼ = −Δξₙ/τ̄ₙ + Δξₙ₊₁/τ̄ₙ₊₁
    let grad = |xs: &[[f64; 3]]| -> Vec<[f64; 3]> {
        let mut pts = Vec::with_capacity(n_int + 2);
        pts.push(start.xi);
        pts.extend_from_slice(xs);
        pts.push(end.xi);
        let mut tbs = Vec::with_capacity(n_int + 1);
        let mut deltas = Vec::with_capacity(n_int + 1);
        for (i, dt) in dts.iter().enumerate() {
            let d = [
                pts[i + 1][0] - pts[i][0],
                pts[i + 1][1] - pts[i][1],
                pts[i + 1][2] - pts[i][2],
            ];
            let d2: f64 = d.iter().map(|c| c * c).sum();
            tbs.push((dt * dt - d2).sqrt());
            deltas.push(d);
        }
        (0..n_int)
            .map(|i| {
                let mut g = [0.0; 3];
                for a in 0..3 {
                    g[a] = -deltas[i][a] / tbs[i] + deltas[i + 1][a] / tbs[i + 1];
                }
                g
            })
            .collect()
    };

    let mut f = total(&xs).expect("perturbed start must stay timelike");
    let mut step = 0.5 * dts.iter().fold(f64::INFINITY, |m, d| m.min(*d));
    for _ in 0..50_000 {
        let g = grad(&xs);
        let gmax = g
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |m, c| m.max(c.abs()));
        if gmax < 1e-12 {
            break;
        }
        // backtracking ascent step
        loop {
            let trial: Vec<[f64; 3]> = xs
                .iter()
                .zip(&g)
                .map(|(x, gv)| [x[0] + step * gv[0], x[1] + step * gv[1], x[2] + step * gv[2]])
                .collect();
            match total(&trial) {
                Some(ft) if ft > f => {
                    xs = trial;
                    f = ft;
                    step *= 1.3;
                    break;
                }
                _ => {
                    step *= 0.5;
                    if step < 1e-17 {
                        break;
                    }
                }
            }
        }
        if step < 1e-17 {
            break;
        }
    }

    let vertices = interior_times
        .iter()
        .zip(&xs)
        .map(|(&t, x)| SpacetimePoint::new(t, *x))
        .collect();
    Ok(StationaryPath {
        vertices,
        total_proper_time: f,
    })
}

/// Spacelike slicing of the composition region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceGrid {
    times: Vec<f64>,
    dim: usize,
    half_width: f64,
    step: f64,
}

impl SliceGrid {
    /// `times` includes both endpoints (τ₀ < τ₁ < … < τ_N); `dim` ∈ {1,2,3}.
    pub fn new(times: Vec<f64>, dim: usize, half_width: f64, step: f64) -> Result<Self> {
        if times.len() < 2 || !times.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidArgument {
                context: "path_integral",
                detail: "slice times must be strictly increasing with at least two entries".into(),
            });
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidArgument {
                context: "path_integral",
                detail: format!("spatial dimension must be 1, 2 or 3 (got {dim})"),
            });
        }
        if !(half_width > 0.0) || !(step > 0.0) || step >= half_width {
            return Err(Error::InvalidArgument {
                context: "path_integral",
                detail: "box half-width and step must satisfy 0 < step < half-width".into(),
            });
        }
        Ok(Self {
            times,
            dim,
            half_width,
            step,
        })
    }

    /// Uniform slicing of [t0, t1] into `segments` segments.
    pub fn uniform(
        t0: f64,
        t1: f64,
        segments: usize,
        dim: usize,
        half_width: f64,
        step: f64,
    ) -> Result<Self> {
        if segments < 1 || t1 <= t0 {
            return Err(Error::InvalidArgument {
                context: "path_integral",
                detail: "need t1 > t0 and at least one segment".into(),
            });
        }
        let times = (0..=segments)
            .map(|i| t0 + (t1 - t0) * i as f64 / segments as f64)
            .collect();
        Self::new(times, dim, half_width, step)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn segments(&self) -> usize {
        self.times.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        self.step
    }
}

/// How the composition fixes the per-slice constants Cₙ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Normalization {
    /// Calibrate one complex constant from a rest-frame two-slice
    /// composition at the grid's own slice spacing, then reuse it per slice.
    StationaryPhaseCalibrated,
    /// Use the given constant per interior slice.
    Explicit(Complex64),
}

/// Composition configuration: normalization rule, imaginary-mass damping
/// (must be positive), and the slice grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ComposeConfig {
    pub normalization: Normalization,
    pub damping: f64,
    pub grid: SliceGrid,
}

impl ComposeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0) || !self.damping.is_finite() {
            return Err(Error::InvalidArgument {
                context: "path_integral",
                detail: format!("damping must be positive (got {})", self.damping),
            });
        }
        Ok(())
    }
}

/// Fraction of the slice box where the smooth taper window is exactly 1.
const WINDOW_FLAT_FRACTION: f64 = 0.5;

/// C∞ step: 0 at s ≤ 0, 1 at s ≥ 1, smooth everywhere.
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let f = |u: f64| (-1.0 / u).exp();
    f(s) / (f(s) + f(1.0 - s))
}

/// Window value at offset `o` inside a box of half-width `l`.
fn window(o: f64, l: f64) -> f64 {
    let edge = l * WINDOW_FLAT_FRACTION;
    let a = o.abs();
    if a <= edge {
        1.0
    } else {
        smooth_step(1.0 - (a - edge) / (l - edge))
    }
}

/// Damped segment kernel e^{−i(m − i·damping)Δτ̄}/(2πΔτ̄), zero outside the
/// light cone (the Θ factor).
fn damped_kernel(m: f64, damping: f64, dtau: f64, dxi2: f64) -> Complex64 {
    let dt2 = dtau * dtau;
    if dxi2 >= dt2 {
        return Complex64::new(0.0, 0.0);
    }
    let tb = (dt2 - dxi2).sqrt();
    Complex64::from_polar((-damping * tb).exp(), -m * tb) / (2.0 * PI * tb)
}

/// Offsets of the midpoint grid covering [−L, L] with ~`step` spacing.
fn box_offsets(half_width: f64, step: f64) -> Vec<f64> {
    let n = ((2.0 * half_width) / step).ceil() as usize;
    let s = 2.0 * half_width / n as f64;
    (0..n)
        .map(|j| -half_width + (j as f64 + 0.5) * s)
        .collect()
}

/// Multi-index offsets for a D-dimensional box (flattened, row-major).
fn box_points(offsets: &[f64], dim: usize) -> Vec<[f64; 3]> {
    let n = offsets.len();
    let total = n.pow(dim as u32);
    let mut pts = Vec::with_capacity(total);
    for idx in 0..total {
        let mut p = [0.0; 3];
        let mut rem = idx;
        for d in (0..dim).rev() {
            p[d] = offsets[rem % n];
            rem /= n;
        }
        pts.push(p);
    }
    pts
}

/// Raw (unnormalized) sliced composition over interior boxes centered on
/// the straight-line path. Transfer contraction over slices; within each
/// step the sum over previous points is chunk-reduced in fixed order.
fn compose_raw(
    m: f64,
    start: &SpacetimePoint,
    end: &SpacetimePoint,
    grid: &SliceGrid,
    damping: f64,
    workers: Workers,
) -> Result<Complex64> {
    let times = grid.times();
    if (times[0] - start.tau).abs() > 1e-12 || (times[times.len() - 1] - end.tau).abs() > 1e-12 {
        return Err(Error::InvalidArgument {
            context: "path_integral",
            detail: "slice grid must start and end at the endpoint times".into(),
        });
    }
    let n_seg = grid.segments();
    if n_seg < 2 {
        return Err(Error::InvalidArgument {
            context: "path_integral",
            detail: "composition needs at least two slices (one interior surface)".into(),
        });
    }
    let dim = grid.dim();
    // stationary region must be resolved by the step and fit the flat core
    let min_dt = times.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let stationary_width = (min_dt / (2.0 * m.abs().max(1e-300))).sqrt();
    if grid.step() > stationary_width / 3.0 {
        return Err(Error::GridResolution {
            context: "path_integral",
            detail: format!(
                "step {} cannot resolve the stationary region (width {stationary_width:.3e})",
                grid.step()
            ),
        });
    }

    let total_dtau = end.tau - start.tau;
    let disp = [
        end.xi[0] - start.xi[0],
        end.xi[1] - start.xi[1],
        end.xi[2] - start.xi[2],
    ];
    let center_at = |tau: f64| -> [f64; 3] {
        let f = (tau - start.tau) / total_dtau;
        [
            start.xi[0] + f * disp[0],
            start.xi[1] + f * disp[1],
            start.xi[2] + f * disp[2],
        ]
    };

    let offsets = box_offsets(grid.half_width(), grid.step());
    let cell_1d = 2.0 * grid.half_width() / offsets.len() as f64;
    let cell = cell_1d.powi(dim as i32);
    let pts = box_points(&offsets, dim);
    let weights: Vec<f64> = pts
        .iter()
        .map(|p| {
            (0..dim)
                .map(|d| window(p[d], grid.half_width()))
                .product::<f64>()
        })
        .collect();

    let dist2 = |a: &[f64; 3], b: &[f64; 3]| -> f64 {
        (0..dim).map(|d| (a[d] - b[d]).powi(2)).sum()
    };

    // first segment: start → slice 1
    let c1 = center_at(times[1]);
    let dt1 = times[1] - times[0];
    let mut psi: Vec<Complex64> = pts
        .iter()
        .zip(&weights)
        .map(|(p, w)| {
            let abs = [c1[0] + p[0], c1[1] + p[1], c1[2] + p[2]];
            damped_kernel(m, damping, dt1, dist2(&abs, &start.xi)) * *w
        })
        .collect();

    // middle transfers: slice n → slice n+1, integrating over slice n;
    // targets are independent, so they parallelize without reordering sums
    for n in 1..n_seg - 1 {
        let c_prev = center_at(times[n]);
        let c_next = center_at(times[n + 1]);
        let dt = times[n + 1] - times[n];
        let psi_prev = psi;
        psi = map_indexed(pts.len(), workers, |target| {
            let p_next = &pts[target];
            let abs_next = [
                c_next[0] + p_next[0],
                c_next[1] + p_next[1],
                c_next[2] + p_next[2],
            ];
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, p_prev) in pts.iter().enumerate() {
                let abs_prev = [
                    c_prev[0] + p_prev[0],
                    c_prev[1] + p_prev[1],
                    c_prev[2] + p_prev[2],
                ];
                acc += psi_prev[j] * damped_kernel(m, damping, dt, dist2(&abs_next, &abs_prev));
            }
            acc * cell * weights[target]
        });
    }

    // last segment: slice N−1 → end, integrating over the final interior slice
    let c_last = center_at(times[n_seg - 1]);
    let dt_last = times[n_seg] - times[n_seg - 1];
    let total = sum_indexed(pts.len(), workers, |j| {
        let p = &pts[j];
        let abs = [c_last[0] + p[0], c_last[1] + p[1], c_last[2] + p[2]];
        psi[j] * damped_kernel(m, damping, dt_last, dist2(&end.xi, &abs))
    });
    Ok(total * cell)
}

/// The per-slice normalization constant fixed so that a rest-frame
/// two-slice composition with slice spacing `spacing` reproduces the
/// direct kernel (modulus and phase).
pub fn calibration_constant(
    m: f64,
    spacing: f64,
    grid: &SliceGrid,
    damping: f64,
    workers: Workers,
) -> Result<Complex64> {
    let cal_grid = SliceGrid::uniform(
        0.0,
        2.0 * spacing,
        2,
        grid.dim(),
        grid.half_width(),
        grid.step(),
    )?;
    let start = SpacetimePoint::origin();
    let end = SpacetimePoint::new(2.0 * spacing, [0.0; 3]);
    let raw = compose_raw(m, &start, &end, &cal_grid, damping, workers)?;
    if raw.norm() == 0.0 {
        return Err(Error::GridResolution {
            context: "path_integral",
            detail: "calibration composition vanished; grid cannot support the kernel".into(),
        });
    }
    let direct = transition_kernel(&KernelQuery::new(m, 2.0 * spacing, [0.0; 3])?)?;
    Ok(direct.amplitude / raw)
}

/// Compose segment kernels across the slice grid between timelike-separated
/// endpoints and return the normalized amplitude.
pub fn compose_kernels(
    m: f64,
    start: &SpacetimePoint,
    end: &SpacetimePoint,
    config: &ComposeConfig,
    workers: Workers,
) -> Result<Complex64> {
    config.validate()?;
    if m <= 0.0 {
        return Err(Error::NonpositiveMass { m });
    }
    let total_dtau = end.tau - start.tau;
    let disp2: f64 = (0..3)
        .map(|a| (end.xi[a] - start.xi[a]).powi(2))
        .sum();
    if total_dtau <= 0.0 || disp2 >= total_dtau * total_dtau {
        return Err(Error::NoTimelikePath);
    }
    let n_seg = config.grid.segments();
    let constant = match config.normalization {
        Normalization::Explicit(c) => c,
        Normalization::StationaryPhaseCalibrated => {
            let times = config.grid.times();
            let spacing = times[1] - times[0];
            let uniform = times
                .windows(2)
                .all(|w| ((w[1] - w[0]) - spacing).abs() < 1e-9 * spacing);
            if !uniform {
                return Err(Error::InvalidArgument {
                    context: "path_integral",
                    detail: "stationary-phase calibration requires uniform slicing".into(),
                });
            }
            calibration_constant(m, spacing, &config.grid, config.damping, workers)?
        }
    };
    let raw = compose_raw(m, start, end, &config.grid, config.damping, workers)?;
    Ok(constant.powu(n_seg as u32 - 1) * raw)
}

/// Statistics of uniformly sampled interior vertices (rejection on the
/// timelike constraint).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathStatistics {
    pub n_samples: u64,
    pub n_accepted: u64,
    pub rejection_fraction: f64,
    pub direct_proper_time: f64,
    pub max_total_proper_time: f64,
    pub mean_total_proper_time: f64,
    pub mean_action: f64,
    /// Histogram of total proper time over [0, direct]: (bin lower edge, count).
    pub histogram: Vec<(f64, u64)>,
}

const HISTOGRAM_BINS: usize = 50;

/// Sample interior vertices uniformly from the slice boxes, reject paths
/// with any non-timelike segment, and report proper-time statistics.
/// Samples are drawn from a fixed set of ChaCha streams keyed by
/// (seed, stream index) with fixed per-stream counts and merged in stream
/// order, so the statistics are bitwise-reproducible for a given seed with
/// any worker count.
pub fn sample_paths_mc(
    start: &SpacetimePoint,
    end: &SpacetimePoint,
    grid: &SliceGrid,
    m: f64,
    seed: u64,
    n_samples: u64,
    workers: Workers,
) -> Result<PathStatistics> {
    if m <= 0.0 {
        return Err(Error::NonpositiveMass { m });
    }
    let total_dtau = end.tau - start.tau;
    let disp = [
        end.xi[0] - start.xi[0],
        end.xi[1] - start.xi[1],
        end.xi[2] - start.xi[2],
    ];
    let disp2: f64 = disp.iter().map(|c| c * c).sum();
    if total_dtau <= 0.0 || disp2 >= total_dtau * total_dtau {
        return Err(Error::NoTimelikePath);
    }
    let direct_proper_time = proper_time_segment(total_dtau, &disp)?;
    let times = grid.times();
    if (times[0] - start.tau).abs() > 1e-12 || (times[times.len() - 1] - end.tau).abs() > 1e-12 {
        return Err(Error::InvalidArgument {
            context: "path_integral",
            detail: "slice grid must start and end at the endpoint times".into(),
        });
    }
    let dim = grid.dim();
    let n_int = grid.segments() - 1;
    let centers: Vec<[f64; 3]> = times[1..times.len() - 1]
        .iter()
        .map(|&tau| {
            let f = (tau - start.tau) / total_dtau;
            [
                start.xi[0] + f * disp[0],
                start.xi[1] + f * disp[1],
                start.xi[2] + f * disp[2],
            ]
        })
        .collect();
    let dts: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();

    // fixed stream layout independent of the worker count
    const STREAMS: u64 = 64;
    let n_streams = STREAMS.min(n_samples.max(1));
    let per_stream: Vec<u64> = (0..n_streams)
        .map(|i| n_samples / n_streams + u64::from(i < n_samples % n_streams))
        .collect();

    #[derive(Clone, Default)]
    struct Partial {
        accepted: u64,
        max_tb: f64,
        sum_tb: f64,
        hist: Vec<u64>,
    }

    let run_worker = |stream: u64, count: u64| -> Partial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut part = Partial {
            hist: vec![0; HISTOGRAM_BINS],
            ..Default::default()
        };
        let l = grid.half_width();
        let mut vertex = vec![[0.0f64; 3]; n_int];
        for _ in 0..count {
            for v in vertex.iter_mut().take(n_int) {
                for d in v.iter_mut().take(dim) {
                    *d = rng.gen_range(-l..l);
                }
            }
            // total proper time; reject on any non-timelike segment
            let mut prev = start.xi;
            let mut tb_total = 0.0;
            let mut ok = true;
            for (i, dt) in dts.iter().enumerate() {
                let next = if i < n_int {
                    [
                        centers[i][0] + vertex[i][0],
                        centers[i][1] + vertex[i][1],
                        centers[i][2] + vertex[i][2],
                    ]
                } else {
                    end.xi
                };
                let d2: f64 = (0..3).map(|a| (next[a] - prev[a]).powi(2)).sum();
                if d2 >= dt * dt {
                    ok = false;
                    break;
                }
                tb_total += (dt * dt - d2).sqrt();
                prev = next;
            }
            if !ok {
                continue;
            }
            part.accepted += 1;
            part.sum_tb += tb_total;
            if tb_total > part.max_tb {
                part.max_tb = tb_total;
            }
            let bin = ((tb_total / direct_proper_time) * HISTOGRAM_BINS as f64)
                .floor()
                .clamp(0.0, (HISTOGRAM_BINS - 1) as f64) as usize;
            part.hist[bin] += 1;
        }
        part
    };

    let partials: Vec<Partial> = map_indexed(n_streams as usize, workers, |i| {
        run_worker(i as u64, per_stream[i])
    });

    // merge in stream order
    let mut accepted = 0u64;
    let mut max_tb = 0.0f64;
    let mut sum_tb = 0.0f64;
    let mut hist = vec![0u64; HISTOGRAM_BINS];
    for p in partials {
        accepted += p.accepted;
        if p.max_tb > max_tb {
            max_tb = p.max_tb;
        }
        sum_tb += p.sum_tb;
        for (h, c) in hist.iter_mut().zip(&p.hist) {
            *h += c;
        }
    }
    let mean_tb = if accepted > 0 {
        sum_tb / accepted as f64
    } else {
        0.0
    };
    Ok(PathStatistics {
        n_samples,
        n_accepted: accepted,
        rejection_fraction: 1.0 - accepted as f64 / n_samples.max(1) as f64,
        direct_proper_time,
        max_total_proper_time: max_tb,
        mean_total_proper_time: mean_tb,
        mean_action: -m * mean_tb,
        histogram: (0..HISTOGRAM_BINS)
            .map(|b| {
                (
                    direct_proper_time * b as f64 / HISTOGRAM_BINS as f64,
                    hist[b],
                )
            })
            .collect(),
    })
}
