//! C ABI for the fourmass toolkit: opaque state handles, plain-struct
//! results, and integer status codes so other languages can bind without
//! linking Rust. The header `include/fourmass.h` is generated at build time.
//!
//! Conventions: every function returns an [`FmStatus`]; outputs go through
//! pointers that must be valid for the call. Handles created by
//! `fm_state_new` must be released with `fm_state_free`.

use fourmass::mass_states::{boost_state, mass_shell, BoostedMassState, RestMassState};
use fourmass::path_integral::{path_action, proper_time_segment, PiecewisePath};
use fourmass::propagation::{transition_kernel, KernelQuery, Regime};
use fourmass::tetrad::{boost_matrix, FourVector, ThreeVelocity};
use fourmass::wavefunctions::SpacetimePoint;
use fourmass::Error;
use std::os::raw::c_char;

/// Status codes returned by every FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmStatus {
    Ok = 0,
    NullPointer = 1,
    NonFinite = 2,
    VelocityOutOfRange = 3,
    NonpositiveMass = 4,
    LightlikeSingularity = 5,
    SpacelikeSegment = 6,
    TimeOrdering = 7,
    InvalidArgument = 8,
}

fn status_of(e: &Error) -> FmStatus {
    match e {
        Error::VelocityOutOfRange { .. } => FmStatus::VelocityOutOfRange,
        Error::NonpositiveMass { .. } => FmStatus::NonpositiveMass,
        Error::NonFinite { .. } => FmStatus::NonFinite,
        Error::TimeOrdering { .. } => FmStatus::TimeOrdering,
        Error::LightlikeSingularity => FmStatus::LightlikeSingularity,
        Error::SpacelikeSegment { .. } | Error::NoTimelikePath => FmStatus::SpacelikeSegment,
        _ => FmStatus::InvalidArgument,
    }
}

/// Causal regime of a kernel value.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmRegime {
    Timelike = 0,
    Lightlike = 1,
    Spacelike = 2,
}

/// Transition-kernel result.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FmKernelValue {
    pub re: f64,
    pub im: f64,
    pub regime: FmRegime,
    pub proper_time: f64,
}

/// Mass-shell invariants of a boosted state.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FmMassShell {
    pub p2: f64,
    pub v2: f64,
    pub pv: f64,
    pub m2: f64,
    pub mtilde2: f64,
    pub m_squared: f64,
}

/// Path-action result.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FmActionReport {
    pub total_proper_time: f64,
    pub action: f64,
    pub phase_re: f64,
    pub phase_im: f64,
}

/// Opaque boosted four-mass state handle.
pub struct FmState(BoostedMassState);

/// Version string of the underlying library (static, do not free).
#[no_mangle]
pub extern "C" fn fm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create a boosted state from scalar-mass, vector-mass and velocity.
///
/// # Safety
/// `k` and `beta` must point to 3 readable doubles; `out` must be a valid
/// destination for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn fm_state_new(
    m: f64,
    k: *const f64,
    beta: *const f64,
    out: *mut *mut FmState,
) -> FmStatus {
    if k.is_null() || beta.is_null() || out.is_null() {
        return FmStatus::NullPointer;
    }
    let k = [*k, *k.add(1), *k.add(2)];
    let beta = [*beta, *beta.add(1), *beta.add(2)];
    let rest = match RestMassState::new(m, k) {
        Ok(r) => r,
        Err(e) => return status_of(&e),
    };
    let velocity = match ThreeVelocity::new(beta) {
        Ok(v) => v,
        Err(e) => return status_of(&e),
    };
    let state = boost_state(&rest, &velocity);
    *out = Box::into_raw(Box::new(FmState(state)));
    FmStatus::Ok
}

/// Release a state handle. Null is a no-op.
///
/// # Safety
/// `state` must be a pointer returned by `fm_state_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fm_state_free(state: *mut FmState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// The four-mass vector K = P + V of a state, written as (t, x, y, z).
///
/// # Safety
/// `state` must be a live handle; `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fm_state_four_mass(state: *const FmState, out: *mut f64) -> FmStatus {
    if state.is_null() || out.is_null() {
        return FmStatus::NullPointer;
    }
    let k = (*state).0.four_mass().as_array();
    std::ptr::copy_nonoverlapping(k.as_ptr(), out, 4);
    FmStatus::Ok
}

/// Mass-shell invariants P·P, V·V, P·V, m², m̃², M² of a state.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn fm_state_mass_shell(
    state: *const FmState,
    out: *mut FmMassShell,
) -> FmStatus {
    if state.is_null() || out.is_null() {
        return FmStatus::NullPointer;
    }
    let shell = mass_shell(&(*state).0);
    *out = FmMassShell {
        p2: shell.p2,
        v2: shell.v2,
        pv: shell.pv,
        m2: shell.m2,
        mtilde2: shell.mtilde2,
        m_squared: shell.m_squared,
    };
    FmStatus::Ok
}

/// Apply the boost Λ(β) to a four-vector (t, x, y, z).
///
/// # Safety
/// `beta` must point to 3 readable doubles; `vector` to 4 readable doubles;
/// `out` to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fm_boost_apply(
    beta: *const f64,
    vector: *const f64,
    out: *mut f64,
) -> FmStatus {
    if beta.is_null() || vector.is_null() || out.is_null() {
        return FmStatus::NullPointer;
    }
    let beta = [*beta, *beta.add(1), *beta.add(2)];
    let velocity = match ThreeVelocity::new(beta) {
        Ok(v) => v,
        Err(e) => return status_of(&e),
    };
    let v = [*vector, *vector.add(1), *vector.add(2), *vector.add(3)];
    if !v.iter().all(|c| c.is_finite()) {
        return FmStatus::NonFinite;
    }
    let boosted = boost_matrix(&velocity)
        .apply(&FourVector::new(v[0], v[1], v[2], v[3]))
        .as_array();
    std::ptr::copy_nonoverlapping(boosted.as_ptr(), out, 4);
    FmStatus::Ok
}

/// Invariant proper time Δτ̄ = Δτ·√(1 − |Δξ/Δτ|²) of one timelike segment.
///
/// # Safety
/// `dxi` must point to 3 readable doubles; `out` to a writable double.
#[no_mangle]
pub unsafe extern "C" fn fm_proper_time(dtau: f64, dxi: *const f64, out: *mut f64) -> FmStatus {
    if dxi.is_null() || out.is_null() {
        return FmStatus::NullPointer;
    }
    let dxi = [*dxi, *dxi.add(1), *dxi.add(2)];
    match proper_time_segment(dtau, &dxi) {
        Ok(tb) => {
            *out = tb;
            FmStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Closed-form causal transition kernel for signed m, Δτ > 0 and Δξ.
/// Lightlike displacements report `FmStatus::LightlikeSingularity`.
///
/// # Safety
/// `dxi` must point to 3 readable doubles; `out` to a valid destination.
#[no_mangle]
pub unsafe extern "C" fn fm_transition_kernel(
    m: f64,
    dtau: f64,
    dxi: *const f64,
    out: *mut FmKernelValue,
) -> FmStatus {
    if dxi.is_null() || out.is_null() {
        return FmStatus::NullPointer;
    }
    let dxi = [*dxi, *dxi.add(1), *dxi.add(2)];
    let query = match KernelQuery::new(m, dtau, dxi) {
        Ok(q) => q,
        Err(e) => return status_of(&e),
    };
    match transition_kernel(&query) {
        Ok(v) => {
            *out = FmKernelValue {
                re: v.amplitude.re,
                im: v.amplitude.im,
                regime: match v.regime {
                    Regime::Timelike => FmRegime::Timelike,
                    Regime::Lightlike => FmRegime::Lightlike,
                    Regime::Spacelike => FmRegime::Spacelike,
                },
                proper_time: v.proper_time,
            };
            FmStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Action report for a polygonal worldline given as parallel arrays of
/// `n` vertex times and `3n` spatial components (x0,y0,z0,x1,y1,z1,...).
///
/// # Safety
/// `taus` must point to `n` readable doubles and `xis` to `3n`; `out` must
/// be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn fm_path_action(
    m: f64,
    n: usize,
    taus: *const f64,
    xis: *const f64,
    out: *mut FmActionReport,
) -> FmStatus {
    if taus.is_null() || xis.is_null() || out.is_null() {
        return FmStatus::NullPointer;
    }
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let tau = *taus.add(i);
        let xi = [*xis.add(3 * i), *xis.add(3 * i + 1), *xis.add(3 * i + 2)];
        if !tau.is_finite() || !xi.iter().all(|c| c.is_finite()) {
            return FmStatus::NonFinite;
        }
        vertices.push(SpacetimePoint::new(tau, xi));
    }
    let path = match PiecewisePath::new(vertices) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    match path_action(&path, m) {
        Ok(r) => {
            *out = FmActionReport {
                total_proper_time: r.total_proper_time,
                action: r.action,
                phase_re: r.phase_re,
                phase_im: r.phase_im,
            };
            FmStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
