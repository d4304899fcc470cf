//! Closed-loop time stepping.

use std::time::{Duration, Instant};

use log::{debug, warn};

use super::scenario::{Mode, Scenario};
use crate::control::{control_inputs, project_state, ControlInput, ControlOptions};
use crate::error::{Error, Result};
use crate::objective::{objective_from_partition, ObjectiveReport};
use crate::partition::{compute_partition, Partition, PartitionOptions};
use crate::sensing::{AgentLimits, AgentState};

/// Relative tolerance on a decrease of `H` before a step counts as a
/// monotonicity violation.
pub const MONOTONICITY_TOL: f64 = 1e-9;
/// Projected control norm under which the swarm counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-4;
/// Smallest step the automatic halving will try.
pub const MIN_DT: f64 = 1e-6;
/// Growth of a halved step after each accepted step, back up to the
/// scenario's `dt`.
pub const DT_GROWTH: f64 = 1.5;

/// One logged step: the snapshot and the controls computed from it.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub step: usize,
    pub states: Vec<AgentState>,
    pub controls: Vec<ControlInput>,
    pub objective: ObjectiveReport,
    /// Total area of cells, common regions and neutral region.
    pub tiled_area: f64,
    /// Largest control norm after dropping components blocked by a bound.
    pub max_control: f64,
    /// Step size used to leave this snapshot (0 for the last record).
    pub dt: f64,
    pub wall_clock: Duration,
}

#[derive(Clone, Debug)]
pub struct RunLog {
    pub scenario: String,
    pub mode: Mode,
    pub records: Vec<StepRecord>,
    /// Partitions at the scenario's snapshot steps.
    pub snapshots: Vec<(usize, Partition)>,
    pub omega_area: f64,
}

impl RunLog {
    pub fn final_record(&self) -> &StepRecord {
        self.records.last().expect("a run logs at least one record")
    }

    pub fn converged(&self) -> bool {
        self.final_record().max_control < CONVERGENCE_TOL
    }

    /// Steps where `H` fell by more than `MONOTONICITY_TOL·|H|`.
    pub fn monotonicity_violations(&self) -> Vec<usize> {
        self.records
            .windows(2)
            .filter(|w| {
                let (a, b) = (w[0].objective.h, w[1].objective.h);
                b - a < -MONOTONICITY_TOL * a.abs()
            })
            .map(|w| w[1].step)
            .collect()
    }

    /// Largest `|tiled area − area(Ω)|` over all steps.
    pub fn max_tiling_defect(&self) -> f64 {
        self.records
            .iter()
            .map(|r| (r.tiled_area - self.omega_area).abs())
            .fold(0.0, f64::max)
    }
}

/// Fixed-camera mode pins tilt to zero and zoom to its minimum.
pub fn mode_states(s: &Scenario, mode: Mode) -> Vec<AgentState> {
    s.agents
        .iter()
        .map(|a| match mode {
            Mode::Ptz => a.initial,
            Mode::Fixed => AgentState {
                h: 0.0,
                delta: a.limits.delta_min,
                ..a.initial
            },
        })
        .collect()
}

struct Stepper<'a> {
    s: &'a Scenario,
    mode: Mode,
    lims: Vec<AgentLimits>,
    popts: PartitionOptions,
    copts: ControlOptions,
}

struct Snapshot {
    states: Vec<AgentState>,
    partition: Partition,
    objective: ObjectiveReport,
}

impl Stepper<'_> {
    fn snapshot(&self, states: Vec<AgentState>, step: usize) -> Result<Snapshot> {
        let partition = compute_partition(&states, &self.lims, &self.s.omega, &self.popts).map_err(|e| numeric(step, e))?;
        let objective = objective_from_partition(&partition, &self.s.density);
        if !objective.h.is_finite() {
            return Err(Error::Numeric {
                step,
                message: format!("objective is {}", objective.h),
            });
        }
        Ok(Snapshot {
            states,
            partition,
            objective,
        })
    }

    fn controls(&self, snap: &Snapshot, step: usize) -> Result<Vec<ControlInput>> {
        let u = control_inputs(&snap.states, &snap.partition, &self.s.omega, &self.s.density, &self.copts)
            .map_err(|e| numeric(step, e))?;
        Ok(match self.mode {
            Mode::Ptz => u,
            Mode::Fixed => u.into_iter().map(ControlInput::without_ptz).collect(),
        })
    }

    fn advance(&self, states: &[AgentState], u: &[ControlInput], dt: f64) -> Vec<AgentState> {
        states
            .iter()
            .zip(u)
            .zip(&self.lims)
            .map(|((s, u), l)| project_state(s, u, dt, l, &self.s.omega))
            .collect()
    }
}

fn numeric(step: usize, e: Error) -> Error {
    match e {
        Error::Numeric { .. } => e,
        other => Error::Numeric {
            step,
            message: other.to_string(),
        },
    }
}

/// Runs the scenario in its own mode.
pub fn run(s: &Scenario) -> Result<RunLog> {
    run_mode(s, s.mode)
}

/// Runs the scenario from its initial states in the given mode.
pub fn run_mode(s: &Scenario, mode: Mode) -> Result<RunLog> {
    s.validate()?;
    let st = Stepper {
        s,
        mode,
        lims: s.limits(),
        popts: PartitionOptions {
            eps_f: s.eps_f,
            polygon_vertices: s.polygonization,
        },
        copts: ControlOptions {
            gains: s.gains,
            boundary_samples: s.boundary_samples,
        },
    };
    let mut records = Vec::with_capacity(s.steps + 1);
    let mut snapshots = Vec::new();
    let mut snap = st.snapshot(mode_states(s, mode), 0)?;
    let mut stranded_warned = vec![false; s.agents.len()];
    // Step size carried between steps when halving is enabled.
    let mut dt_next = s.dt;

    for step in 0..=s.steps {
        let started = Instant::now();
        let u = st.controls(&snap, step)?;
        let max_control = u
            .iter()
            .zip(&snap.states)
            .zip(&st.lims)
            .map(|((u, x), l)| u.projected(x, l, &s.omega).norm())
            .fold(0.0, f64::max);
        for (i, warned) in stranded_warned.iter_mut().enumerate() {
            if !*warned && snap.partition.cells[i].is_empty() && snap.partition.guaranteed[i].is_some() {
                warn!("agent {i} is fully dominated at step {step} and receives no control");
                *warned = true;
            }
        }

        let (next, dt) = if step < s.steps {
            let mut dt = dt_next;
            loop {
                let trial = st.snapshot(st.advance(&snap.states, &u, dt), step + 1)?;
                let (h0, h1) = (snap.objective.h, trial.objective.h);
                if !s.auto_dt || h1 - h0 >= -MONOTONICITY_TOL * h0.abs() || dt * 0.5 < MIN_DT {
                    dt_next = (dt * DT_GROWTH).min(s.dt);
                    break (Some(trial), dt);
                }
                debug!("step {step}: H fell from {h0} to {h1} at dt={dt}, halving");
                dt *= 0.5;
            }
        } else {
            (None, 0.0)
        };

        if s.snapshots.contains(&step) {
            snapshots.push((step, snap.partition.clone()));
        }
        records.push(StepRecord {
            step,
            tiled_area: snap.partition.tiled_area(),
            states: snap.states.clone(),
            controls: u,
            objective: snap.objective.clone(),
            max_control,
            dt,
            wall_clock: started.elapsed(),
        });
        match next {
            Some(n) => snap = n,
            None => break,
        }
    }

    Ok(RunLog {
        scenario: s.name.clone(),
        mode,
        records,
        snapshots,
        omega_area: s.omega.area(),
    })
}
