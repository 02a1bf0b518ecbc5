//! Command-line surface tying the engines together.
//!
//! Every run resolves a config, refuses to reuse a nonempty output
//! directory, writes its CSV products, and closes with a digest manifest.
//! Exit codes: 0 success, 2 configuration problem, 3 numerical-contract
//! failure.

use crate::analysis::{
    derive_seed, detect_revival_peaks, histogram, lambda_scan, write_csv, Engine, RunManifest,
};
use crate::classical::{
    accelerating_windows, integrate_trajectory, propagate_ensemble, standard_map_step,
    hamiltonian,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::modes::{cavity_mode, wigner};
use crate::quantum::{evolve, momentum_distribution, PropagationPlan};
use crate::state::{gaussian_packet, sample_gaussian_ensemble, PhasePoint};
use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "fermi-forge",
    about = "Classical and quantum dynamics of a gravity-bounced particle on a modulated exponential mirror",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Plain-text config file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; must be empty or absent.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread count (or set FERMI_FORGE_THREADS).
    #[arg(long)]
    threads: Option<usize>,
    /// Print the resolved config and exit.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate the standard map and record momentum dispersion.
    Map {
        #[command(flatten)]
        common: CommonArgs,
        /// Kick strength K.
        #[arg(long, default_value_t = 5.0)]
        k: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = 10_000)]
        n_seeds: usize,
    },
    /// Integrate a trajectory and a classical ensemble.
    Classical {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Propagate a wave packet and record observables and distributions.
    Quantum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cavity eigenmodes.
    Modes {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Wigner distribution of one cavity mode.
    Wigner {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1)]
        mode: usize,
    },
    /// Recurrence-time predictions for the configured packet.
    Revival {
        #[command(flatten)]
        common: CommonArgs,
        /// Mean quantum number override (defaults to the packet energy).
        #[arg(long)]
        r: Option<f64>,
    },
    /// Sweep the modulation strength.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 4.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 0.1)]
        lambda_step: f64,
        #[arg(long, value_parser = parse_engine, default_value = "classical")]
        engine: Engine,
    },
    /// Quantum run with space-time density export.
    Carpet {
        #[command(flatten)]
        common: CommonArgs,
        /// Collect a carpet row every this many observable samples.
        #[arg(long, default_value_t = 1)]
        carpet_every: usize,
    },
}

fn parse_engine(s: &str) -> std::result::Result<Engine, String> {
    match s {
        "classical" => Ok(Engine::Classical),
        "quantum" => Ok(Engine::Quantum),
        other => Err(format!("unknown engine `{other}` (classical|quantum)")),
    }
}

/// Entry point used by both `main` and the CLI tests.
pub fn cli_dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error path with status 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::ParameterDomain(_)
        | Error::Grid(_)
        | Error::Construction(_)
        | Error::Io(_) => 2,
        _ => 3,
    }
}

struct RunContext {
    cfg: RunConfig,
    out: PathBuf,
    manifest: RunManifest,
}

impl RunContext {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn emit<I>(&mut self, name: &str, header: &str, rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        let path = self.path(name);
        write_csv(&path, header, rows)?;
        self.manifest.record(&path)
    }
}

fn prepare(common: &CommonArgs) -> Result<Option<RunContext>> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    let threads = common.threads.or_else(|| {
        std::env::var("FERMI_FORGE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        // A second initialization in the same process is harmless; the pool
        // keeps its first size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    if common.dry_run {
        println!("{cfg}");
        return Ok(None);
    }
    if common.out.exists() {
        let occupied = std::fs::read_dir(&common.out)?.next().is_some();
        if occupied {
            return Err(Error::Config(format!(
                "output directory {} is not empty; refusing to mix runs",
                common.out.display()
            )));
        }
    } else {
        std::fs::create_dir_all(&common.out)?;
    }
    let manifest = RunManifest::open(&common.out, cfg.to_string(), cfg.seed);
    Ok(Some(RunContext {
        cfg,
        out: common.out.clone(),
        manifest,
    }))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Map {
            common,
            k,
            steps,
            n_seeds,
        } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_map(&mut ctx, k, steps, n_seeds)?;
            ctx.manifest.close()?;
            Ok(())
        }
        Command::Classical { common } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_classical(&mut ctx)?;
            ctx.manifest.close()?;
            Ok(())
        }
        Command::Quantum { common } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_quantum(&mut ctx, None)?;
            ctx.manifest.close()?;
            Ok(())
        }
        Command::Modes { common, n_max } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_modes(&mut ctx, n_max)?;
            ctx.manifest.close()?;
            Ok(())
        }
        Command::Wigner { common, mode } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_wigner(&mut ctx, mode)?;
            ctx.manifest.close()?;
            Ok(())
        }
        Command::Revival { common, r } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_revival(&mut ctx, r)?;
            ctx.manifest.close()?;
            Ok(())
        }
        Command::Scan {
            common,
            lambda_min,
            lambda_max,
            lambda_step,
            engine,
        } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_scan(&mut ctx, lambda_min, lambda_max, lambda_step, engine)?;
            ctx.manifest.close()?;
            Ok(())
        }
        Command::Carpet {
            common,
            carpet_every,
        } => {
            let Some(mut ctx) = prepare(&common)? else {
                return Ok(());
            };
            run_quantum(&mut ctx, Some(carpet_every))?;
            ctx.manifest.close()?;
            Ok(())
        }
    }
}

fn run_map(ctx: &mut RunContext, k: f64, steps: usize, n_seeds: usize) -> Result<()> {
    if !(k >= 0.0) {
        return Err(Error::ParameterDomain(format!("K must be >= 0, got {k}")));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    let mut states: Vec<(f64, f64)> = (0..n_seeds.max(1))
        .map(|_| (0.0, rng.gen::<f64>() * std::f64::consts::TAU))
        .collect();
    let mut rows = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let n = states.len() as f64;
        let mean: f64 = states.iter().map(|s| s.0).sum::<f64>() / n;
        let var: f64 = states.iter().map(|s| (s.0 - mean).powi(2)).sum::<f64>() / n;
        rows.push(vec![j as f64, mean, 0.0, var, 0.0]);
        for s in &mut states {
            *s = standard_map_step(s.0, s.1, k);
        }
    }
    ctx.emit("dispersion.csv", "t,mean_p,mean_z,var_p,var_z", rows)
}

fn run_classical(ctx: &mut RunContext) -> Result<()> {
    let cfg = ctx.cfg;
    let params = cfg.scaled_params();
    let start = PhasePoint::new(cfg.z0, cfg.p0, 0.0)?;
    let traj = integrate_trajectory(start, cfg.t_final, cfg.dt, &params)?;
    let rows: Vec<Vec<f64>> = traj
        .samples
        .iter()
        .map(|s| vec![s.t, s.z, s.p, hamiltonian(s.z, s.p, s.t, &params)])
        .collect();
    ctx.emit("trajectory.csv", "t,z,p,H", rows)?;

    let ensemble = sample_gaussian_ensemble(
        cfg.z0,
        cfg.p0,
        cfg.dz,
        cfg.dp(),
        cfg.n_particles,
        cfg.seed,
    )?;
    let stride = ((cfg.t_final / cfg.dt) as usize / 256).max(1);
    let run = propagate_ensemble(&ensemble, cfg.t_final, cfg.dt, stride, &params)?;
    let rows: Vec<Vec<f64>> = run
        .records
        .iter()
        .map(|r| vec![r.t, r.mean_z, r.mean_p, r.var_z, r.var_p])
        .collect();
    ctx.emit("dispersion.csv", "t,mean_z,mean_p,var_z,var_p", rows)?;

    let momenta: Vec<f64> = run.final_ensemble.points.iter().map(|p| p.p).collect();
    let hist = histogram(&momenta, None)?;
    let rows: Vec<Vec<f64>> = hist
        .bin_centers
        .iter()
        .zip(hist.counts.iter().zip(hist.density.iter()))
        .map(|(&c, (&n, &d))| vec![c, n, d])
        .collect();
    ctx.emit("histogram.csv", "bin_center,count,density", rows)
}

fn run_quantum(ctx: &mut RunContext, carpet_every: Option<usize>) -> Result<()> {
    let cfg = ctx.cfg;
    let params = cfg.scaled_params();
    let grid = cfg.grid()?;
    let psi0 = gaussian_packet(cfg.z0, cfg.p0, cfg.dz, grid, cfg.kbar)?;
    let stride = ((cfg.t_final / cfg.dt) as usize / 512).max(1);
    let mut plan = PropagationPlan::new(cfg.dt, stride, cfg.t_final)?;
    if let Some(every) = carpet_every {
        plan = plan.with_carpet(every);
    }
    let run = evolve(&psi0, &plan, &params)?;

    let s = &run.series;
    let rows: Vec<Vec<f64>> = (0..s.len())
        .map(|i| {
            vec![
                s.t[i], s.norm[i], s.mean_z[i], s.mean_p[i], s.var_z[i], s.var_p[i], s.c2[i],
            ]
        })
        .collect();
    ctx.emit(
        "observables.csv",
        "t,norm,mean_z,mean_p,var_z,var_p,C2",
        rows,
    )?;

    let pdist = momentum_distribution(&run.final_state);
    ctx.emit(
        "pdist.csv",
        "p,density",
        pdist.iter().map(|&(p, d)| vec![p, d]),
    )?;
    let zdist: Vec<Vec<f64>> = run
        .final_state
        .density()
        .iter()
        .enumerate()
        .map(|(i, &d)| vec![grid.z(i), d])
        .collect();
    ctx.emit("zdist.csv", "z,density", zdist)?;

    let peaks = detect_revival_peaks(&s.t, &s.c2, 0.2);
    ctx.emit("c2_peaks.csv", "t_peak", peaks.iter().map(|&p| vec![p]))?;

    if let Some(carpet) = &run.carpet {
        let pgm = ctx.path("carpet.pgm");
        carpet.write_pgm(&pgm)?;
        ctx.manifest.record(&pgm)?;
        let mut rows: Vec<Vec<f64>> = carpet
            .times
            .iter()
            .enumerate()
            .map(|(i, &t)| vec![0.0, i as f64, t])
            .collect();
        rows.extend(
            (0..grid.n)
                .map(|i| vec![1.0, i as f64, grid.z(i)]),
        );
        ctx.emit("carpet.csv", "axis,index,value", rows)?;
    }
    Ok(())
}

fn run_modes(ctx: &mut RunContext, n_max: usize) -> Result<()> {
    let cfg = ctx.cfg;
    let grid = cfg.grid()?;
    let mut rows = Vec::new();
    for n in 1..=n_max.max(1) {
        let mode = cavity_mode(n, cfg.kbar, grid)?;
        rows.push(vec![n as f64, mode.energy, mode.airy_zero]);
        let psi_rows: Vec<Vec<f64>> = (0..grid.n)
            .map(|i| vec![grid.z(i), mode.psi[i]])
            .collect();
        ctx.emit(&format!("mode_psi_{n}.csv"), "z,psi", psi_rows)?;
    }
    ctx.emit("modes.csv", "n,E_n,z_n", rows)
}

fn run_wigner(ctx: &mut RunContext, mode_idx: usize) -> Result<()> {
    let cfg = ctx.cfg;
    let grid = cfg.grid()?;
    let mode = cavity_mode(mode_idx.max(1), cfg.kbar, grid)?;
    let field = wigner(&mode.to_state(), 1)?;
    // 16-bit graymap over the symmetric display range.
    let peak = field
        .w
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let h = field.z_axis.len();
    let wdt = field.p_axis.len();
    let mut bytes = Vec::with_capacity(32 + 2 * h * wdt);
    use std::io::Write;
    write!(&mut bytes, "P5\n{wdt} {h}\n65535\n")?;
    for row in &field.w {
        for v in row {
            let scaled = ((v / peak) * 0.5 + 0.5).clamp(0.0, 1.0);
            bytes.extend_from_slice(&((scaled * 65535.0) as u16).to_be_bytes());
        }
    }
    let pgm = ctx.path("wigner.pgm");
    std::fs::write(&pgm, bytes)?;
    ctx.manifest.record(&pgm)?;

    let mut rows: Vec<Vec<f64>> = field
        .z_axis
        .iter()
        .enumerate()
        .map(|(i, &z)| vec![0.0, i as f64, z])
        .collect();
    rows.extend(
        field
            .p_axis
            .iter()
            .enumerate()
            .map(|(j, &p)| vec![1.0, j as f64, p]),
    );
    ctx.emit("wigner_axes.csv", "axis,index,value", rows)
}

fn run_revival(ctx: &mut RunContext, r_override: Option<f64>) -> Result<()> {
    use crate::revivals::*;
    let cfg = ctx.cfg;
    let kbar = cfg.kbar;
    let energy = 0.5 * cfg.p0 * cfg.p0 + cfg.z0;
    let r = match r_override {
        Some(r) => r,
        // Invert E_r = (9π²r²k̄²/8)^(1/3).
        None => (8.0 * energy.powi(3) / (9.0 * std::f64::consts::PI.powi(2) * kbar * kbar))
            .sqrt(),
    };
    let omega = classical_frequency(r, kbar)?;
    let n_res = (1.0 / omega).round().max(1.0);
    let e_n = n_res * n_res * std::f64::consts::PI.powi(2) / 2.0;
    let res = resonance_data(e_n, energy, kbar, omega)?;
    let est = recurrence_times(cfg.lambda, r, kbar, &res)?;
    let regime = match est.regime {
        NonlinearityRegime::Vanishing => 0.0,
        NonlinearityRegime::Weak => 1.0,
        NonlinearityRegime::Strong => 2.0,
    };
    ctx.emit(
        "revival_estimate.csv",
        "r,N,omega,zeta,Delta,mu,M_cl,M_Q,T0_cl,T0_Q,Tl_cl,Tl_Q,regime",
        [vec![
            r,
            res.n_res as f64,
            est.omega,
            est.zeta,
            est.delta,
            est.mu,
            est.m_cl,
            est.m_q,
            est.t0_cl,
            est.t0_q,
            est.t_lambda_cl,
            est.t_lambda_q,
            regime,
        ]],
    )?;

    let v = matrix_element(res.e0, res.n_res)?;
    let input = QuasiEnergyInput {
        lambda: cfg.lambda,
        r,
        kbar,
        zeta: est.zeta,
        omega: est.omega,
        v,
        n_res: res.n_res,
        h0_bar: res.e0,
    };
    let q = input.q();
    let mut rows = Vec::new();
    for dn in -2..=2 {
        let nu = input.nu(r + dn as f64);
        let sol = mathieu_char_value(nu, q, 60)?;
        rows.push(vec![nu, q, sol.a, sol.residual]);
    }
    ctx.emit("mathieu.csv", "nu,q,a,residual", rows)
}

fn run_scan(
    ctx: &mut RunContext,
    lambda_min: f64,
    lambda_max: f64,
    lambda_step: f64,
    engine: Engine,
) -> Result<()> {
    if !(lambda_step > 0.0) || lambda_max < lambda_min {
        return Err(Error::ParameterDomain(format!(
            "bad lambda grid [{lambda_min}, {lambda_max}] step {lambda_step}"
        )));
    }
    let n = ((lambda_max - lambda_min) / lambda_step).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| lambda_min + i as f64 * lambda_step).collect();
    let result = lambda_scan(&ctx.cfg, &grid, engine)?;
    let rows: Vec<Vec<f64>> = result
        .entries
        .iter()
        .map(|e| {
            vec![
                e.lambda,
                e.dp,
                e.dz,
                e.seed as f64,
                match e.localized {
                    None => -1.0,
                    Some(false) => 0.0,
                    Some(true) => 1.0,
                },
            ]
        })
        .collect();
    ctx.emit("scan.csv", "lambda,dp,dz,seed,localized", rows)?;

    let windows = accelerating_windows(lambda_max.max(1.0) / std::f64::consts::PI + 1.0)?;
    let rows: Vec<Vec<f64>> = windows
        .iter()
        .map(|w| vec![w.s, w.lo, w.hi, w.lambda_m])
        .collect();
    ctx.emit("windows.csv", "s,lo,hi,lambda_m", rows)
}

/// Seed used for the `index`-th lambda of a scan, re-exported for tests.
pub fn scan_seed(master: u64, index: u64) -> u64 {
    derive_seed(master, index)
}
