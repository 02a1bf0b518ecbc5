//! Continuous-time integration of `ż = p`, `ṗ = −1 + κV₀ e^(−κ(z − λ sin t))`.
//!
//! The flight between wall encounters is a plain parabola which the classic
//! fourth-order Runge–Kutta step integrates exactly; all the difficulty lives
//! in the stiff exponential wall. Each base step is internally subdivided so
//! the local step never exceeds `0.1/(κ F_wall)` nor `0.2/(κ|p|)`, keeping
//! both the wall curvature and the per-step penetration depth resolved.

use crate::error::{Error, Result};
use crate::params::ScaledParams;
use crate::state::{Ensemble, PhasePoint};
use rayon::prelude::*;

/// Wall exponents are capped here before exponentiation; trajectories never
/// legitimately reach that depth, so a clamp event is recorded rather than
/// propagating an overflow.
const EXP_CLAMP: f64 = 700.0;

/// Largest base step that still resolves the drive period 2π.
const MAX_BASE_DT: f64 = 0.2;

/// Fixed chunk size for parallel ensemble work; combining chunk partials in
/// index order keeps reductions bitwise deterministic for any thread count.
const CHUNK: usize = 64;

/// Scaled force `−1 + κ V₀ exp(−κ(z − λ sin t))`, exponent clamped.
#[inline]
pub fn force(z: f64, t: f64, params: &ScaledParams) -> f64 {
    force_flagged(z, t, params).0
}

/// Force plus a flag marking whether the exponent clamp engaged.
#[inline]
pub fn force_flagged(z: f64, t: f64, params: &ScaledParams) -> (f64, bool) {
    let mut arg = -params.kappa * (z - params.lambda * t.sin());
    let clamped = arg > EXP_CLAMP;
    if clamped {
        arg = EXP_CLAMP;
    }
    (-1.0 + params.kappa * params.v0 * arg.exp(), clamped)
}

/// Instantaneous scaled energy `p²/2 + z + V₀ e^(−κ(z − λ sin t))`.
#[inline]
pub fn hamiltonian(z: f64, p: f64, t: f64, params: &ScaledParams) -> f64 {
    let arg = (-params.kappa * (z - params.lambda * t.sin())).min(EXP_CLAMP);
    0.5 * p * p + z + params.v0 * arg.exp()
}

/// Wall part of the force magnitude, used for step control.
#[inline]
fn wall_force(z: f64, t: f64, params: &ScaledParams) -> f64 {
    let arg = (-params.kappa * (z - params.lambda * t.sin())).min(EXP_CLAMP);
    params.kappa * params.v0 * arg.exp()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct StepState {
    pub(crate) z: f64,
    pub(crate) p: f64,
    pub(crate) t: f64,
}

/// One classic RK4 step of the equations of motion.
#[inline]
fn rk4_step(s: StepState, dt: f64, params: &ScaledParams, clamped: &mut bool) -> StepState {
    let f = |z: f64, t: f64, clamped: &mut bool| -> f64 {
        let (v, c) = force_flagged(z, t, params);
        *clamped |= c;
        v
    };
    let k1z = s.p;
    let k1p = f(s.z, s.t, clamped);
    let k2z = s.p + 0.5 * dt * k1p;
    let k2p = f(s.z + 0.5 * dt * k1z, s.t + 0.5 * dt, clamped);
    let k3z = s.p + 0.5 * dt * k2p;
    let k3p = f(s.z + 0.5 * dt * k2z, s.t + 0.5 * dt, clamped);
    let k4z = s.p + dt * k3p;
    let k4p = f(s.z + dt * k3z, s.t + dt, clamped);
    StepState {
        z: s.z + dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
        p: s.p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        t: s.t + dt,
    }
}

/// Advances to exactly `t_target`, subdividing near the wall.
pub(crate) fn advance_to(
    mut s: StepState,
    t_target: f64,
    dt_base: f64,
    params: &ScaledParams,
    clamped: &mut bool,
) -> Result<StepState> {
    while s.t < t_target {
        let fw = wall_force(s.z, s.t, params);
        let mut dt = dt_base.min(0.1 / (params.kappa * fw));
        if s.p.abs() > 0.0 {
            dt = dt.min(0.2 / (params.kappa * s.p.abs()));
        }
        dt = dt.min(t_target - s.t);
        s = rk4_step(s, dt, params, clamped);
        if !s.z.is_finite() || !s.p.is_finite() {
            return Err(Error::Construction(format!(
                "trajectory diverged near t = {}",
                s.t
            )));
        }
    }
    s.t = t_target;
    Ok(s)
}

/// A sampled trajectory plus its bookkeeping.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// States at `t = t0 + k dt`.
    pub samples: Vec<PhasePoint>,
    /// Number of RK4 force evaluations that hit the exponent clamp.
    pub clamped_events: usize,
}

impl Trajectory {
    /// Energy along the trajectory.
    pub fn energies(&self, params: &ScaledParams) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| hamiltonian(s.z, s.p, s.t, params))
            .collect()
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::StepSize {
            requested: dt,
            suggested: 0.01,
            reason: "dt must be positive".into(),
        });
    }
    if dt > MAX_BASE_DT {
        return Err(Error::StepSize {
            requested: dt,
            suggested: std::f64::consts::PI / 32.0,
            reason: "base step does not resolve the drive period 2π".into(),
        });
    }
    Ok(())
}

/// Integrates a single trajectory, sampling every `dt`.
pub fn integrate_trajectory(
    start: PhasePoint,
    t_final: f64,
    dt: f64,
    params: &ScaledParams,
) -> Result<Trajectory> {
    check_dt(dt)?;
    params.validate()?;
    let n_samples = (t_final / dt).round() as usize;
    let mut samples = Vec::with_capacity(n_samples + 1);
    let mut s = StepState {
        z: start.z,
        p: start.p,
        t: start.t,
    };
    let mut clamped = false;
    let mut clamped_events = 0usize;
    samples.push(start);
    for k in 1..=n_samples {
        let t_target = start.t + k as f64 * dt;
        s = advance_to(s, t_target, dt, params, &mut clamped)?;
        if clamped {
            clamped_events += 1;
            clamped = false;
        }
        samples.push(PhasePoint {
            z: s.z,
            p: s.p,
            t: s.t,
        });
    }
    Ok(Trajectory {
        samples,
        clamped_events,
    })
}

/// Dispersion snapshot of an ensemble at one sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionRecord {
    /// Sample index.
    pub j: usize,
    /// Sample time (or step count for discrete maps).
    pub t: f64,
    pub mean_z: f64,
    pub mean_p: f64,
    pub var_z: f64,
    pub var_p: f64,
}

/// Outcome of propagating a full ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleRun {
    /// Ensemble advanced to the final time (failed points carried unchanged).
    pub final_ensemble: Ensemble,
    pub records: Vec<DiffusionRecord>,
    /// Indices of points whose trajectories failed, with the reason.
    pub failures: Vec<(usize, String)>,
    /// Total clamped-force events across the ensemble.
    pub clamped_events: usize,
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

#[derive(Debug, Clone)]
struct ChunkPartial {
    // Per sample index: weight, w·z, w·p, w·z², w·p².
    sums: Vec<[Kahan; 5]>,
    finals: Vec<(usize, PhasePoint)>,
    failures: Vec<(usize, String)>,
    clamped: usize,
}

/// Advances every ensemble point independently and records dispersion every
/// `stride` base steps.
///
/// Failures are per point: the affected point keeps its initial state, is
/// excluded from all statistics, and is reported in
/// [`EnsembleRun::failures`] rather than dropped silently.
pub fn propagate_ensemble(
    ensemble: &Ensemble,
    t_final: f64,
    dt: f64,
    stride: usize,
    params: &ScaledParams,
) -> Result<EnsembleRun> {
    check_dt(dt)?;
    params.validate()?;
    if ensemble.is_empty() {
        return Err(Error::Construction("ensemble must be nonempty".into()));
    }
    let stride = stride.max(1);
    let n_steps = (t_final / dt).round() as usize;
    let sample_count = n_steps / stride + 1;
    let weights: Vec<f64> = (0..ensemble.len()).map(|i| ensemble.weight(i)).collect();

    let indexed: Vec<(usize, PhasePoint)> = ensemble
        .points
        .iter()
        .copied()
        .enumerate()
        .collect();

    let partials: Vec<ChunkPartial> = indexed
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut part = ChunkPartial {
                sums: vec![[Kahan::default(); 5]; sample_count],
                finals: Vec::with_capacity(chunk.len()),
                failures: Vec::new(),
                clamped: 0,
            };
            for &(idx, start) in chunk {
                let w = weights[idx];
                let mut s = StepState {
                    z: start.z,
                    p: start.p,
                    t: start.t,
                };
                let mut clamped = false;
                let mut failed = false;
                let mut local = Vec::with_capacity(sample_count);
                local.push(s);
                for k in 1..=n_steps {
                    let t_target = start.t + k as f64 * dt;
                    match advance_to(s, t_target, dt, params, &mut clamped) {
                        Ok(next) => s = next,
                        Err(e) => {
                            part.failures.push((idx, e.to_string()));
                            failed = true;
                            break;
                        }
                    }
                    if k % stride == 0 {
                        local.push(s);
                    }
                }
                if failed {
                    part.finals.push((idx, start));
                    continue;
                }
                if clamped {
                    part.clamped += 1;
                }
                for (si, st) in local.iter().enumerate() {
                    let row = &mut part.sums[si];
                    row[0].add(w);
                    row[1].add(w * st.z);
                    row[2].add(w * st.p);
                    row[3].add(w * st.z * st.z);
                    row[4].add(w * st.p * st.p);
                }
                part.finals.push((
                    idx,
                    PhasePoint {
                        z: s.z,
                        p: s.p,
                        t: s.t,
                    },
                ));
            }
            part
        })
        .collect();

    // Combine chunk partials in chunk order: deterministic for any thread
    // count.
    let mut totals = vec![[Kahan::default(); 5]; sample_count];
    let mut final_points = ensemble.points.clone();
    let mut failures = Vec::new();
    let mut clamped_events = 0usize;
    for part in partials {
        for (si, row) in part.sums.iter().enumerate() {
            for c in 0..5 {
                totals[si][c].add(row[c].value());
            }
        }
        for (idx, pt) in part.finals {
            final_points[idx] = pt;
        }
        failures.extend(part.failures);
        clamped_events += part.clamped;
    }

    let records = totals
        .iter()
        .enumerate()
        .map(|(si, row)| {
            let w = row[0].value();
            let mean_z = row[1].value() / w;
            let mean_p = row[2].value() / w;
            DiffusionRecord {
                j: si,
                t: (si * stride) as f64 * dt,
                mean_z,
                mean_p,
                var_z: (row[3].value() / w - mean_z * mean_z).max(0.0),
                var_p: (row[4].value() / w - mean_p * mean_p).max(0.0),
            }
        })
        .collect();

    Ok(EnsembleRun {
        final_ensemble: Ensemble {
            points: final_points,
            weights: ensemble.weights.clone(),
            seed: ensemble.seed,
        },
        records,
        failures,
        clamped_events,
    })
}

/// Axis-aligned phase-space rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub z_min: f64,
    pub z_max: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Region {
    #[inline]
    pub fn contains(&self, z: f64, p: f64) -> bool {
        z >= self.z_min && z <= self.z_max && p >= self.p_min && p <= self.p_max
    }
}

/// Fraction of trajectories that have never left `region` by each sample
/// time.
pub fn survival_probability(
    ensemble: &Ensemble,
    region: Region,
    t_final: f64,
    dt: f64,
    stride: usize,
    params: &ScaledParams,
) -> Result<Vec<(f64, f64)>> {
    check_dt(dt)?;
    params.validate()?;
    for pt in &ensemble.points {
        if !region.contains(pt.z, pt.p) {
            return Err(Error::ParameterDomain(format!(
                "region must contain the initial ensemble; ({}, {}) outside",
                pt.z, pt.p
            )));
        }
    }
    let stride = stride.max(1);
    let n_steps = (t_final / dt).round() as usize;
    let weights: Vec<f64> = (0..ensemble.len()).map(|i| ensemble.weight(i)).collect();

    // First-exit sample index per point (n_steps+1 = never exited).
    let exits: Vec<usize> = ensemble
        .points
        .par_chunks(CHUNK)
        .enumerate()
        .flat_map_iter(|(ci, chunk)| {
            let base = ci * CHUNK;
            chunk.iter().enumerate().map(move |(k, start)| {
                let _ = base + k;
                let mut s = StepState {
                    z: start.z,
                    p: start.p,
                    t: start.t,
                };
                let mut clamped = false;
                for step in 1..=n_steps {
                    let t_target = start.t + step as f64 * dt;
                    match advance_to(s, t_target, dt, params, &mut clamped) {
                        Ok(next) => s = next,
                        Err(_) => return step,
                    }
                    if !region.contains(s.z, s.p) {
                        return step;
                    }
                }
                n_steps + 1
            })
        })
        .collect();

    let sample_count = n_steps / stride + 1;
    let mut series = Vec::with_capacity(sample_count);
    for si in 0..sample_count {
        let step = si * stride;
        let mut alive = Kahan::default();
        for (i, &exit) in exits.iter().enumerate() {
            if exit > step {
                alive.add(weights[i]);
            }
        }
        series.push((step as f64 * dt, alive.value()));
    }
    Ok(series)
}
