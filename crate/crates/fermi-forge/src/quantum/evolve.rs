//! Long propagation with observable sampling, boundary policing and optional
//! carpet rows.

use super::carpet::CarpetField;
use super::observables::{autocorrelation, momentum_moments};
use super::split_step::SplitStepPropagator;
use crate::error::{Error, Result};
use crate::params::ScaledParams;
use crate::state::WavefunctionState;

/// What to do when probability reaches the grid edge.
///
/// The equation of motion conserves norm, so there is no absorber: either the
/// run aborts on contamination (`HardCap`, the default — gravity is supposed
/// to confine the packet and a touched edge means the grid was sized wrong),
/// or contamination is tolerated and merely flagged (`AbsorberOff`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPolicy {
    HardCap,
    AbsorberOff,
}

/// Propagation schedule. Sampling happens every `stride` steps, so `dt`
/// divides the sampling interval by construction.
#[derive(Debug, Clone, Copy)]
pub struct PropagationPlan {
    pub dt: f64,
    pub stride: usize,
    pub t_final: f64,
    pub boundary: BoundaryPolicy,
    /// Collect a carpet row every this many samples.
    pub carpet_every: Option<usize>,
}

impl PropagationPlan {
    pub fn new(dt: f64, stride: usize, t_final: f64) -> Result<Self> {
        if !(dt > 0.0) || dt > std::f64::consts::TAU / 64.0 + 1e-12 {
            return Err(Error::StepSize {
                requested: dt,
                suggested: std::f64::consts::TAU / 64.0,
                reason: "plan must resolve the drive period (dt <= 2π/64)".into(),
            });
        }
        if stride == 0 {
            return Err(Error::ParameterDomain("stride must be >= 1".into()));
        }
        if !(t_final > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "t_final must be positive, got {t_final}"
            )));
        }
        Ok(PropagationPlan {
            dt,
            stride,
            t_final,
            boundary: BoundaryPolicy::HardCap,
            carpet_every: None,
        })
    }

    pub fn with_carpet(mut self, every: usize) -> Self {
        self.carpet_every = Some(every.max(1));
        self
    }

    pub fn with_boundary(mut self, boundary: BoundaryPolicy) -> Self {
        self.boundary = boundary;
        self
    }
}

/// Time series of the sampled observables.
#[derive(Debug, Clone, Default)]
pub struct ObservableSeries {
    pub t: Vec<f64>,
    pub norm: Vec<f64>,
    pub mean_z: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub var_z: Vec<f64>,
    pub var_p: Vec<f64>,
    pub c2: Vec<f64>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

#[derive(Debug)]
pub struct EvolveResult {
    pub final_state: WavefunctionState,
    pub series: ObservableSeries,
    pub carpet: Option<CarpetField>,
    /// True when `AbsorberOff` saw edge probability above the limit.
    pub boundary_flag: bool,
}

const EDGE_POINTS: usize = 4;
const EDGE_LIMIT: f64 = 1e-6;

fn edge_probability(state: &WavefunctionState) -> f64 {
    let dz = state.grid.dz();
    let n = state.grid.n;
    let head: f64 = state.psi[..EDGE_POINTS].iter().map(|c| c.norm_sqr()).sum();
    let tail: f64 = state.psi[n - EDGE_POINTS..]
        .iter()
        .map(|c| c.norm_sqr())
        .sum();
    (head + tail) * dz
}

/// Runs the split-step propagator over the full plan.
pub fn evolve(
    psi0: &WavefunctionState,
    plan: &PropagationPlan,
    params: &ScaledParams,
) -> Result<EvolveResult> {
    let mut prop = SplitStepPropagator::new(params, psi0.grid, plan.dt, psi0.kbar)?;
    let mut state = psi0.clone();
    let n_steps = (plan.t_final / plan.dt).round() as usize;
    let n_samples = n_steps / plan.stride;

    let mut series = ObservableSeries::default();
    let mut carpet = plan.carpet_every.map(|_| CarpetField::new(psi0.grid));
    let mut boundary_flag = false;

    let sample = |state: &WavefunctionState,
                      series: &mut ObservableSeries,
                      carpet: &mut Option<CarpetField>,
                      sample_idx: usize|
     -> Result<()> {
        let norm = state.norm();
        let (mean_z, var_z) = state.position_moments();
        let (mean_p, var_p) = momentum_moments(state);
        let c2 = autocorrelation(psi0, state)?;
        series.t.push(state.t);
        series.norm.push(norm);
        series.mean_z.push(mean_z);
        series.mean_p.push(mean_p);
        series.var_z.push(var_z);
        series.var_p.push(var_p);
        series.c2.push(c2);
        if let (Some(c), Some(every)) = (carpet.as_mut(), plan.carpet_every) {
            if sample_idx % every == 0 {
                c.push_row(state.t, norm, state.density());
            }
        }
        Ok(())
    };

    sample(&state, &mut series, &mut carpet, 0)?;
    let mut norm_prev = series.norm[0];
    for s in 1..=n_samples {
        for _ in 0..plan.stride {
            prop.step(&mut state);
            let norm = state.norm();
            let drift = (norm - norm_prev).abs();
            if drift > 1e-9 {
                return Err(Error::NormDrift {
                    drift,
                    limit: 1e-9,
                });
            }
            norm_prev = norm;
        }
        let edge = edge_probability(&state);
        if edge > EDGE_LIMIT {
            match plan.boundary {
                BoundaryPolicy::HardCap => {
                    return Err(Error::BoundaryContamination {
                        t: state.t,
                        edge_probability: edge,
                        limit: EDGE_LIMIT,
                    })
                }
                BoundaryPolicy::AbsorberOff => boundary_flag = true,
            }
        }
        sample(&state, &mut series, &mut carpet, s)?;
    }

    Ok(EvolveResult {
        final_state: state,
        series,
        carpet,
        boundary_flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::state::gaussian_packet;

    #[test]
    fn unitarity_over_many_steps() {
        let grid = GridSpec::new(-10.0, 60.0, 1024).unwrap();
        let params = ScaledParams::new(4.0, 0.5, 0.5, 4.0).unwrap();
        let psi0 = gaussian_packet(12.0, 0.0, 2.0, grid, 4.0).unwrap();
        let plan = PropagationPlan::new(0.05, 20, 50.0).unwrap();
        let run = evolve(&psi0, &plan, &params).unwrap();
        for n in &run.series.norm {
            assert!((n - 1.0).abs() < 1e-8, "norm drifted to {n}");
        }
        assert_eq!(run.series.c2[0], 1.0);
    }

    #[test]
    fn boundary_contamination_aborts_hard_cap_runs() {
        // A fast packet on a deliberately short grid must trip the edge
        // detector.
        let grid = GridSpec::new(-5.0, 25.0, 512).unwrap();
        let params = ScaledParams::new(4.0, 0.0, 0.5, 0.0).unwrap();
        let psi0 = gaussian_packet(10.0, 6.0, 1.5, grid, 4.0).unwrap();
        let plan = PropagationPlan::new(0.05, 5, 20.0).unwrap();
        let err = evolve(&psi0, &plan, &params).unwrap_err();
        assert!(matches!(err, Error::BoundaryContamination { .. }));

        let plan = plan.with_boundary(BoundaryPolicy::AbsorberOff);
        let run = evolve(&psi0, &plan, &params).unwrap();
        assert!(run.boundary_flag);
    }

    #[test]
    fn carpet_rows_collect_at_requested_cadence() {
        let grid = GridSpec::new(-10.0, 60.0, 512).unwrap();
        let params = ScaledParams::new(4.0, 0.0, 0.5, 4.0).unwrap();
        let psi0 = gaussian_packet(12.0, 0.0, 2.0, grid, 4.0).unwrap();
        let plan = PropagationPlan::new(0.05, 10, 10.0).unwrap().with_carpet(2);
        let run = evolve(&psi0, &plan, &params).unwrap();
        let carpet = run.carpet.unwrap();
        assert_eq!(carpet.rows.len(), 11);
        for (row, norm) in carpet.rows.iter().zip(carpet.norms.iter()) {
            let integral: f64 = row.iter().sum::<f64>() * grid.dz();
            assert!((integral - norm).abs() < 1e-9);
        }
    }
}
