//! Numerical toolkit for a fully symmetric formulation of relativistic
//! quantum mechanics of a free, massive, spin-zero particle: Minkowski
//! boost algebra, four-mass states K = P + V carrying both a scalar-mass
//! and a spacelike vector-mass, generalized Klein-Gordon plane waves, the
//! causal transition kernel e^{−imΔτ̄}/(2π|Δτ̄|)·Θ(light cone), and a
//! discretized path integral over spacelike slices that recovers the
//! classical action S = −m∫dτ̄.
//!
//! Everything is exposed as pure functions on immutable value types in
//! natural units (ħ = c = 1) with metric signature (+, −, −, −). Stochastic
//! and gridded operations are deterministic: fixed seeds, fixed partition
//! orders, reproducible for any worker count.

pub mod check;
pub mod error;
pub mod exec;
pub mod mass_states;
pub mod path_integral;
pub mod propagation;
pub mod tetrad;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use exec::Workers;
pub use mass_states::{
    boost_state, generator_projection, mass_shell, BoostedMassState, DirectionClass,
    MassShellReport, RestMassState, StateSpec,
};
pub use path_integral::{
    compose_kernels, path_action, proper_time_segment, sample_paths_mc, stationary_intermediate,
    ActionReport, ComposeConfig, Normalization, PathStatistics, PiecewisePath, SliceGrid,
    StationaryPath,
};
pub use propagation::{
    mass_conjugate_kernel, particle_element, s_element, t_beta_element, transition_kernel,
    transition_kernel_numeric, KernelQuery, KernelValue, OccupancyLabel, ParticleCoefficients,
    Regime, RegularizationParams,
};
pub use tetrad::{
    antisym_matrix, antisym_squared, apply_boost, boost_matrix, l_matrix, l_matrix_via_antisym,
    minkowski_dot, BoostMatrix, FourVector, Mat3, Mat4, ThreeVelocity, METRIC_DIAG,
};
pub use wavefunctions::{
    box_overlap, evaluate_general_solution, evaluate_plane_wave, evaluate_rest_wave, kg_residual,
    wavepacket_moments, EnergySign, MomentReport, PacketGrid, PlaneWaveState, SpacetimePoint,
    SuperpositionState, WavepacketSpec, WAVE_NORM,
};
