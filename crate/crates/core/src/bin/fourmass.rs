//! Batch front end: every module exposed as a subcommand with reproducible,
//! machine-readable CSV/JSON output. Every file written gets a sibling
//! `<file>.manifest.json` recording the exact invocation; replaying the
//! manifest's arguments reproduces the file bitwise (the manifest's own
//! timestamp aside).
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use fourmass::check::{run_invariant_suite, SuiteReport};
use fourmass::exec::Workers;
use fourmass::mass_states::{boost_state, mass_shell, RestMassState, StateSpec};
use fourmass::path_integral::{
    compose_kernels, path_action, sample_paths_mc, ComposeConfig, Normalization, PiecewisePath,
    SliceGrid,
};
use fourmass::propagation::{
    transition_kernel, transition_kernel_numeric, KernelQuery, Regime, RegularizationParams,
};
use fourmass::tetrad::ThreeVelocity;
use fourmass::wavefunctions::{
    box_overlap, packet_line_cuts, wavepacket_moments, EnergySign, PacketGrid, PlaneWaveState,
    SpacetimePoint, WavepacketSpec,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fourmass",
    version,
    about = "Symmetric relativistic quantum mechanics toolkit: boosts, four-mass states, causal kernels, path integrals"
)]
struct Cli {
    /// Output format for tables and reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for stochastic subcommands (required by `action --mc`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker thread count; results are identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Write output to this file (plus `<file>.manifest.json`) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full invariant suite of every module; exit 0 iff all pass.
    Check,
    /// Boost a rest state and report P, V, K and the mass-shell invariants.
    Boost {
        /// Scalar-mass m > 0.
        #[arg(long, allow_hyphen_values = true)]
        m: f64,
        /// Vector-mass components kx,ky,kz.
        #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
        k: Triple,
        /// Boost velocity components bx,by,bz with |beta| < 1.
        #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
        beta: Triple,
    },
    /// Evaluate the causal transition kernel over a sweep of displacements.
    Kernel {
        /// Scalar-mass (signed; negative selects the conjugate branch).
        #[arg(long, allow_hyphen_values = true)]
        m: f64,
        /// Time displacement: single value or sweep start:stop:count.
        #[arg(long, value_parser = parse_range, default_value = "1")]
        dtau: RangeSpec,
        /// Spatial displacement along x: value or start:stop:count.
        #[arg(long, value_parser = parse_range, default_value = "0")]
        dxi1: RangeSpec,
        /// Spatial displacement along y.
        #[arg(long, value_parser = parse_range, default_value = "0")]
        dxi2: RangeSpec,
        /// Spatial displacement along z.
        #[arg(long, value_parser = parse_range, default_value = "0")]
        dxi3: RangeSpec,
        /// Add the regularized-delta quadrature oracle columns.
        #[arg(long, action = ArgAction::SetTrue)]
        oracle: bool,
        /// Nascent-delta width for the oracle.
        #[arg(long, default_value_t = 0.02)]
        epsilon: f64,
        /// Beta-grid step for the oracle (default epsilon/8).
        #[arg(long)]
        beta_step: Option<f64>,
    },
    /// Compose segment kernels across spacelike slices and compare phases
    /// against the direct kernel over a damping sweep.
    Compose {
        /// Scalar-mass m > 0.
        #[arg(long)]
        m: f64,
        /// Total time displacement.
        #[arg(long)]
        dtau: f64,
        /// Total spatial displacement along x (compositions run along x).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        dxi: f64,
        /// Number of segments (slices); interior surfaces = slices − 1.
        #[arg(long, default_value_t = 2)]
        slices: usize,
        /// Spatial dimension of the slice integrals (1, 2 or 3).
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Slice box half-width as a fraction of the slice spacing.
        #[arg(long, default_value_t = 0.45)]
        half_width: f64,
        /// Slice grid step; defaults to resolving the fastest oscillation.
        #[arg(long)]
        step: Option<f64>,
        /// Damping values to sweep, comma-separated.
        #[arg(long, value_parser = parse_list, default_value = "0.001")]
        damping: FloatList,
        /// Calibrate once at the first damping value and hold the constant
        /// fixed across the sweep (instead of recalibrating per value).
        #[arg(long, action = ArgAction::SetTrue)]
        fixed_calibration: bool,
    },
    /// Evaluate the action of a polygonal worldline, or sample worldlines
    /// with --mc and emit proper-time statistics.
    Action {
        /// Scalar-mass m > 0.
        #[arg(long)]
        m: f64,
        /// Vertices "tau,x[,y[,z]];tau,x[,y[,z]];..." for the direct report.
        #[arg(long, value_parser = parse_vertices, conflicts_with = "mc", allow_hyphen_values = true)]
        vertices: Option<VertexList>,
        /// Monte Carlo sampling mode (requires --seed).
        #[arg(long, action = ArgAction::SetTrue)]
        mc: bool,
        /// Endpoints "tau,x[,y[,z]];tau,x[,y[,z]]" for --mc.
        #[arg(long, value_parser = parse_vertices, allow_hyphen_values = true)]
        endpoints: Option<VertexList>,
        /// Segment count for --mc.
        #[arg(long, default_value_t = 2)]
        slices: usize,
        /// Spatial dimension for --mc sampling.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Sampling box half-width for --mc.
        #[arg(long, default_value_t = 0.9)]
        half_width: f64,
        /// Number of samples for --mc.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Synthesize a Gaussian wavepacket and report uncertainty moments.
    Wavepacket {
        /// Gaussian widths of the vector-mass weight per axis.
        #[arg(long, value_parser = parse_triple, default_value = "1,1,1")]
        sigma_k: Triple,
        /// Center of the vector-mass weight per axis.
        #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
        center_k: Triple,
        /// Gaussian width of the scalar-mass weight.
        #[arg(long, default_value_t = 1.0)]
        sigma_m: f64,
        /// Center of the scalar-mass weight.
        #[arg(long, default_value_t = 1.0)]
        center_m: f64,
        /// Sampling box half-width (defaults to 12 half-widths of the
        /// broadest position feature).
        #[arg(long)]
        half_width: Option<f64>,
        /// Sampling step (defaults to 1/(8·max width)).
        #[arg(long)]
        step: Option<f64>,
        /// Also dump packet line cuts as CSV (tau, xi1, xi2, xi3, re, im).
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Finite-box inner product of two plane-wave states.
    Overlap {
        #[arg(long)]
        m1: f64,
        #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
        k1: Triple,
        #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
        beta1: Triple,
        /// Energy sign of the first state: +1 or -1.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign1: i32,
        #[arg(long)]
        m2: f64,
        #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
        k2: Triple,
        #[arg(long, value_parser = parse_triple, default_value = "0,0,0")]
        beta2: Triple,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign2: i32,
        /// Box half-width L (integration over [−L, L]⁴).
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        box_l: f64,
        /// Quadrature step.
        #[arg(long, default_value_t = 0.02)]
        step: f64,
    },
}

#[derive(Clone, Copy, Debug)]
struct Triple([f64; 3]);

fn parse_triple(s: &str) -> Result<Triple, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        out[i] = parse_finite(p)?;
    }
    Ok(Triple(out))
}

#[derive(Clone, Debug)]
struct RangeSpec {
    values: Vec<f64>,
}

fn parse_range(s: &str) -> Result<RangeSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => Ok(RangeSpec {
            values: vec![parse_finite(parts[0])?],
        }),
        3 => {
            let start = parse_finite(parts[0])?;
            let stop = parse_finite(parts[1])?;
            let count: usize = parts[2]
                .parse()
                .map_err(|_| format!("bad sweep count '{}'", parts[2]))?;
            if count == 0 {
                return Err("sweep count must be at least 1".into());
            }
            let values = if count == 1 {
                vec![start]
            } else {
                (0..count)
                    .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                    .collect()
            };
            Ok(RangeSpec { values })
        }
        _ => Err(format!("expected 'value' or 'start:stop:count', got '{s}'")),
    }
}

#[derive(Clone, Debug)]
struct FloatList(Vec<f64>);

fn parse_list(s: &str) -> Result<FloatList, String> {
    let mut out = Vec::new();
    for p in s.split(',') {
        out.push(parse_finite(p)?);
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(FloatList(out))
}

#[derive(Clone, Debug)]
struct VertexList(Vec<SpacetimePoint>);

fn parse_vertices(s: &str) -> Result<VertexList, String> {
    let mut out = Vec::new();
    for chunk in s.split(';') {
        let comps: Vec<&str> = chunk.split(',').collect();
        if comps.len() < 2 || comps.len() > 4 {
            return Err(format!(
                "vertex '{chunk}' needs 2-4 components tau,x[,y[,z]]"
            ));
        }
        let mut vals = [0.0f64; 4];
        for (i, c) in comps.iter().enumerate() {
            vals[i] = parse_finite(c)?;
        }
        out.push(SpacetimePoint::new(vals[0], [vals[1], vals[2], vals[3]]));
    }
    Ok(VertexList(out))
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if !v.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(v)
}

/// 17 significant digits: enough to reproduce the f64 bit pattern from text.
fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
struct Manifest {
    subcommand: String,
    args: Vec<String>,
    seed: Option<u64>,
    workers: usize,
    version: String,
    timestamp_unix: u64,
}

fn manifest_for(cli: &Cli) -> Manifest {
    // raw argv minus the binary name and any --out pair; replaying these
    // arguments with a fresh --out reproduces the data file bitwise
    let mut args: Vec<String> = Vec::new();
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == "--out" {
            i += 2;
            continue;
        }
        if raw[i].starts_with("--out=") {
            i += 1;
            continue;
        }
        args.push(raw[i].clone());
        i += 1;
    }
    Manifest {
        subcommand: match &cli.command {
            Command::Check => "check",
            Command::Boost { .. } => "boost",
            Command::Kernel { .. } => "kernel",
            Command::Compose { .. } => "compose",
            Command::Action { .. } => "action",
            Command::Wavepacket { .. } => "wavepacket",
            Command::Overlap { .. } => "overlap",
        }
        .to_string(),
        args,
        seed: cli.seed,
        workers: cli.workers,
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    }
}

fn emit(out: &Option<PathBuf>, content: &str, manifest: &Manifest) -> std::io::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            std::fs::write(
                manifest_path(path),
                serde_json::to_string_pretty(manifest).unwrap(),
            )?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn manifest_path(data: &Path) -> PathBuf {
    let mut name = data.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    data.with_file_name(name)
}

enum CmdError {
    Domain(String),
    Usage(String),
}

impl From<fourmass::Error> for CmdError {
    fn from(e: fourmass::Error) -> Self {
        CmdError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Domain(format!("io: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CmdError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CmdError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CmdError> {
    let workers = Workers::new(cli.workers);
    let manifest = manifest_for(cli);
    match &cli.command {
        Command::Check => {
            let report = run_invariant_suite(None, workers);
            let content = match cli.format {
                Format::Csv => check_csv(&report),
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
            };
            emit(&cli.out, &content, &manifest)?;
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Boost { m, k, beta } => {
            let rest = RestMassState::new(*m, k.0)?;
            let velocity = ThreeVelocity::new(beta.0)?;
            let state = boost_state(&rest, &velocity);
            let shell = mass_shell(&state);
            #[derive(Serialize)]
            struct BoostReport {
                input: StateSpec,
                energy: f64,
                p: [f64; 4],
                v: [f64; 4],
                k_four: [f64; 4],
                mass_shell: fourmass::MassShellReport,
            }
            let report = BoostReport {
                input: StateSpec::from(&state),
                energy: state.energy(),
                p: state.p().as_array(),
                v: state.v().as_array(),
                k_four: state.four_mass().as_array(),
                mass_shell: shell,
            };
            let content = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                Format::Csv => {
                    let mut s = String::from(
                        "m,k1,k2,k3,beta1,beta2,beta3,energy,\
                         p0,p1,p2,p3,v0,v1,v2,v3,kf0,kf1,kf2,kf3,\
                         pp,vv,pv,m2,mtilde2,m_squared\n",
                    );
                    let mut row: Vec<String> = vec![g17(*m)];
                    row.extend(k.0.iter().map(|v| g17(*v)));
                    row.extend(beta.0.iter().map(|v| g17(*v)));
                    row.push(g17(state.energy()));
                    row.extend(state.p().as_array().iter().map(|v| g17(*v)));
                    row.extend(state.v().as_array().iter().map(|v| g17(*v)));
                    row.extend(state.four_mass().as_array().iter().map(|v| g17(*v)));
                    for v in [
                        shell.p2,
                        shell.v2,
                        shell.pv,
                        shell.m2,
                        shell.mtilde2,
                        shell.m_squared,
                    ] {
                        row.push(g17(v));
                    }
                    s.push_str(&row.join(","));
                    s.push('\n');
                    s
                }
            };
            emit(&cli.out, &content, &manifest)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernel {
            m,
            dtau,
            dxi1,
            dxi2,
            dxi3,
            oracle,
            epsilon,
            beta_step,
        } => {
            let reg = if *oracle {
                Some(match beta_step {
                    Some(step) => RegularizationParams::new(*epsilon, *step)?,
                    None => RegularizationParams::with_default_grid(*epsilon)?,
                })
            } else {
                None
            };
            let mut rows = Vec::new();
            for &dt in &dtau.values {
                for &x in &dxi1.values {
                    for &y in &dxi2.values {
                        for &z in &dxi3.values {
                            let q = KernelQuery::new(*m, dt, [x, y, z])?;
                            let (regime, proper_time, re, im) = match transition_kernel(&q) {
                                Ok(v) => (v.regime, v.proper_time, v.amplitude.re, v.amplitude.im),
                                Err(fourmass::Error::LightlikeSingularity) => {
                                    (Regime::Lightlike, f64::NAN, f64::NAN, f64::NAN)
                                }
                                Err(e) => return Err(e.into()),
                            };
                            let (oracle_re, oracle_im, rel_err) = match (&reg, regime) {
                                (Some(reg), Regime::Timelike) => {
                                    let o = transition_kernel_numeric(&q, reg, workers)?;
                                    let c = transition_kernel(&q).unwrap().amplitude;
                                    let rel = (o - c).norm() / c.norm();
                                    (Some(o.re), Some(o.im), Some(rel))
                                }
                                _ => (None, None, None),
                            };
                            rows.push(KernelRow {
                                m: *m,
                                dtau: dt,
                                dxi1: x,
                                dxi2: y,
                                dxi3: z,
                                regime: regime.to_string(),
                                proper_time,
                                re,
                                im,
                                oracle_re,
                                oracle_im,
                                rel_err,
                            });
                        }
                    }
                }
            }
            let with_oracle = rows.iter().any(|r| r.oracle_re.is_some());
            let content = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rows).unwrap() + "\n",
                Format::Csv => {
                    let mut s = String::from("m,dtau,dxi1,dxi2,dxi3,regime,proper_time,re,im");
                    if with_oracle {
                        s.push_str(",oracle_re,oracle_im,rel_err");
                    }
                    s.push('\n');
                    for r in &rows {
                        let mut cols = vec![
                            g17(r.m),
                            g17(r.dtau),
                            g17(r.dxi1),
                            g17(r.dxi2),
                            g17(r.dxi3),
                            r.regime.clone(),
                            g17(r.proper_time),
                            g17(r.re),
                            g17(r.im),
                        ];
                        if with_oracle {
                            cols.push(r.oracle_re.map(g17).unwrap_or_default());
                            cols.push(r.oracle_im.map(g17).unwrap_or_default());
                            cols.push(r.rel_err.map(g17).unwrap_or_default());
                        }
                        s.push_str(&cols.join(","));
                        s.push('\n');
                    }
                    s
                }
            };
            emit(&cli.out, &content, &manifest)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compose {
            m,
            dtau,
            dxi,
            slices,
            dim,
            half_width,
            step,
            damping,
            fixed_calibration,
        } => {
            if *m <= 0.0 {
                return Err(CmdError::Usage("compose requires m > 0".into()));
            }
            let spacing = dtau / *slices as f64;
            let l = half_width * spacing;
            let step = step.unwrap_or_else(|| {
                // resolve the fastest in-box oscillation |S'| ≤ 2mL/τ̄_min
                let ratio = (2.0 * l / spacing).min(0.99);
                let tb_min = spacing * (1.0 - ratio * ratio).sqrt();
                (std::f64::consts::TAU * tb_min / (2.0 * m * l)) / 12.0
            });
            let start = SpacetimePoint::origin();
            let end = SpacetimePoint::new(*dtau, [*dxi, 0.0, 0.0]);
            let direct = transition_kernel(&KernelQuery::new(*m, *dtau, [*dxi, 0.0, 0.0])?)?;

            let grid = SliceGrid::uniform(0.0, *dtau, *slices, *dim, l, step)?;
            let fixed_constant = if *fixed_calibration {
                Some(fourmass::path_integral::calibration_constant(
                    *m,
                    spacing,
                    &grid,
                    damping.0[0],
                    workers,
                )?)
            } else {
                None
            };
            let mut rows = Vec::new();
            for &eta in &damping.0 {
                let config = ComposeConfig {
                    normalization: match fixed_constant {
                        Some(c) => Normalization::Explicit(c),
                        None => Normalization::StationaryPhaseCalibrated,
                    },
                    damping: eta,
                    grid: grid.clone(),
                };
                let amp = compose_kernels(*m, &start, &end, &config, workers)?;
                let phase = amp.arg();
                rows.push(ComposeRow {
                    damping: eta,
                    re: amp.re,
                    im: amp.im,
                    modulus: amp.norm(),
                    phase,
                    direct_phase: direct.amplitude.arg(),
                    phase_diff: wrap_angle(phase - direct.amplitude.arg()),
                });
            }
            let content = match cli.format {
                Format::Json => serde_json::to_string_pretty(&rows).unwrap() + "\n",
                Format::Csv => {
                    let mut s =
                        String::from("damping,re,im,modulus,phase,direct_phase,phase_diff\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            g17(r.damping),
                            g17(r.re),
                            g17(r.im),
                            g17(r.modulus),
                            g17(r.phase),
                            g17(r.direct_phase),
                            g17(r.phase_diff)
                        ));
                    }
                    s
                }
            };
            emit(&cli.out, &content, &manifest)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Action {
            m,
            vertices,
            mc,
            endpoints,
            slices,
            dim,
            half_width,
            samples,
        } => {
            if *mc {
                let seed = cli.seed.ok_or_else(|| {
                    CmdError::Usage("action --mc requires --seed for reproducibility".into())
                })?;
                let ends = endpoints
                    .as_ref()
                    .ok_or_else(|| CmdError::Usage("action --mc requires --endpoints".into()))?;
                if ends.0.len() != 2 {
                    return Err(CmdError::Usage(
                        "--endpoints needs exactly two vertices".into(),
                    ));
                }
                let grid = SliceGrid::uniform(
                    ends.0[0].tau,
                    ends.0[1].tau,
                    *slices,
                    *dim,
                    *half_width,
                    half_width / 64.0,
                )?;
                let stats =
                    sample_paths_mc(&ends.0[0], &ends.0[1], &grid, *m, seed, *samples, workers)?;
                let content = match cli.format {
                    Format::Json => serde_json::to_string_pretty(&stats).unwrap() + "\n",
                    Format::Csv => {
                        let mut s = String::from("bin_lower_proper_time,count\n");
                        for (lo, c) in &stats.histogram {
                            s.push_str(&format!("{},{}\n", g17(*lo), c));
                        }
                        s
                    }
                };
                emit(&cli.out, &content, &manifest)?;
                Ok(ExitCode::SUCCESS)
            } else {
                let verts = vertices.as_ref().ok_or_else(|| {
                    CmdError::Usage("action requires --vertices (or --mc with --endpoints)".into())
                })?;
                let path = PiecewisePath::new(verts.0.clone())?;
                let report = path_action(&path, *m)?;
                let content = match cli.format {
                    Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                    Format::Csv => {
                        let mut s = String::from("segment,proper_time\n");
                        for (i, tb) in report.segment_proper_times.iter().enumerate() {
                            s.push_str(&format!("{i},{}\n", g17(*tb)));
                        }
                        s.push_str(&format!(
                            "total,{}\naction,{}\nphase_re,{}\nphase_im,{}\n",
                            g17(report.total_proper_time),
                            g17(report.action),
                            g17(report.phase_re),
                            g17(report.phase_im)
                        ));
                        s
                    }
                };
                emit(&cli.out, &content, &manifest)?;
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Wavepacket {
            sigma_k,
            center_k,
            sigma_m,
            center_m,
            half_width,
            step,
            dump,
        } => {
            let min_width = sigma_k.0.iter().fold(*sigma_m, |a, s| a.min(*s));
            let max_width = sigma_k.0.iter().fold(*sigma_m, |a, s| a.max(*s));
            if min_width <= 0.0 {
                return Err(CmdError::Usage("packet widths must be positive".into()));
            }
            let spec = WavepacketSpec {
                center_k: center_k.0,
                sigma_k: sigma_k.0,
                center_m: *center_m,
                sigma_m: *sigma_m,
                grid: PacketGrid {
                    half_width: half_width.unwrap_or(12.0 / (2.0 * min_width)),
                    step: step.unwrap_or(1.0 / (8.0 * max_width)),
                },
            };
            let report = wavepacket_moments(&spec, workers)?;
            if let Some(dump_path) = dump {
                let cuts = packet_line_cuts(&spec, workers)?;
                let mut s = String::from("tau,xi1,xi2,xi3,re,im\n");
                for c in &cuts {
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        g17(c.tau),
                        g17(c.xi1),
                        g17(c.xi2),
                        g17(c.xi3),
                        g17(c.re),
                        g17(c.im)
                    ));
                }
                std::fs::write(dump_path, &s)?;
                std::fs::write(
                    manifest_path(dump_path),
                    serde_json::to_string_pretty(&manifest).unwrap(),
                )?;
            }
            let content = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                Format::Csv => {
                    let mut s = String::from("axis,delta_pos,delta_mom,product\n");
                    for (name, ax) in ["xi1", "xi2", "xi3"].iter().zip(&report.axes) {
                        s.push_str(&format!(
                            "{name},{},{},{}\n",
                            g17(ax.position_width),
                            g17(ax.momentum_width),
                            g17(ax.product)
                        ));
                    }
                    s.push_str(&format!(
                        "tau,{},{},{}\n",
                        g17(report.tau_m.position_width),
                        g17(report.tau_m.momentum_width),
                        g17(report.tau_m.product)
                    ));
                    s
                }
            };
            emit(&cli.out, &content, &manifest)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Overlap {
            m1,
            k1,
            beta1,
            sign1,
            m2,
            k2,
            beta2,
            sign2,
            box_l,
            step,
        } => {
            let wave =
                |m: f64, k: &Triple, beta: &Triple, sign: i32| -> Result<PlaneWaveState, CmdError> {
                    let state =
                        boost_state(&RestMassState::new(m, k.0)?, &ThreeVelocity::new(beta.0)?);
                    let sign = match sign {
                        1 => EnergySign::Positive,
                        -1 => EnergySign::Negative,
                        other => {
                            return Err(CmdError::Usage(format!(
                                "energy sign must be 1 or -1 (got {other})"
                            )))
                        }
                    };
                    Ok(PlaneWaveState::new(state, sign))
                };
            let w1 = wave(*m1, k1, beta1, *sign1)?;
            let w2 = wave(*m2, k2, beta2, *sign2)?;
            let value = box_overlap(&w1, &w2, *box_l, *step)?;
            let diagonal = (2.0 * box_l).powi(4) / (2.0 * std::f64::consts::PI).powi(4);
            #[derive(Serialize)]
            struct OverlapReport {
                re: f64,
                im: f64,
                diagonal: f64,
                ratio_re: f64,
                ratio_im: f64,
            }
            let report = OverlapReport {
                re: value.re,
                im: value.im,
                diagonal,
                ratio_re: value.re / diagonal,
                ratio_im: value.im / diagonal,
            };
            let content = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                Format::Csv => format!(
                    "re,im,diagonal,ratio_re,ratio_im\n{},{},{},{},{}\n",
                    g17(report.re),
                    g17(report.im),
                    g17(report.diagonal),
                    g17(report.ratio_re),
                    g17(report.ratio_im)
                ),
            };
            emit(&cli.out, &content, &manifest)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct KernelRow {
    m: f64,
    dtau: f64,
    dxi1: f64,
    dxi2: f64,
    dxi3: f64,
    regime: String,
    proper_time: f64,
    re: f64,
    im: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_err: Option<f64>,
}

#[derive(Serialize)]
struct ComposeRow {
    damping: f64,
    re: f64,
    im: f64,
    modulus: f64,
    phase: f64,
    direct_phase: f64,
    phase_diff: f64,
}

fn check_csv(report: &SuiteReport) -> String {
    let mut s = String::from("module,property,cases,status,worst,tolerance\n");
    for r in &report.rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.module,
            r.property,
            r.cases,
            if r.passed { "PASS" } else { "FAIL" },
            g17(r.worst),
            g17(r.tolerance)
        ));
    }
    s
}

fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    if y < -PI {
        y += 2.0 * PI;
    }
    y
}
