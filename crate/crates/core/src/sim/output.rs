//! Run artefacts: CSV tables and JSON documents.
//!
//! Floats are written with Rust's shortest round-trip formatting and nothing
//! time-dependent is recorded, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::runner::{RunLog, CONVERGENCE_TOL};
use crate::error::Result;
use crate::geom2d::{PolygonWithHoles, Region};
use crate::partition::Partition;
use crate::sensing::AgentState;

/// `step,agent,x,y,z,theta,h,delta`, angles in radians.
pub fn trajectories_csv(log: &RunLog) -> String {
    let mut out = String::from("step,agent,x,y,z,theta,h,delta\n");
    for r in &log.records {
        for (i, s) in r.states.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.step, i, s.q.x, s.q.y, s.z, s.theta, s.h, s.delta
            );
        }
    }
    out
}

/// `step,H,agent_0,…,agent_{n−1},neutral_area`.
pub fn objective_csv(log: &RunLog) -> String {
    let n = log.records.first().map_or(0, |r| r.states.len());
    let mut out = String::from("step,H");
    for i in 0..n {
        let _ = write!(out, ",agent_{i}");
    }
    out.push_str(",neutral_area\n");
    for r in &log.records {
        let _ = write!(out, "{},{}", r.step, r.objective.h);
        for v in &r.objective.per_agent {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{}", r.objective.neutral_area);
    }
    out
}

#[derive(Serialize)]
struct RegionJson {
    area: f64,
    polygons: Vec<PolygonWithHoles>,
}

impl From<&Region> for RegionJson {
    fn from(r: &Region) -> Self {
        RegionJson {
            area: r.area(),
            polygons: r.polygons().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct CommonJson {
    quality: f64,
    members: Vec<usize>,
    #[serde(flatten)]
    region: RegionJson,
}

#[derive(Serialize)]
struct PartitionJson {
    step: usize,
    cells: Vec<RegionJson>,
    common: Vec<CommonJson>,
    neutral: RegionJson,
}

pub fn partition_json(step: usize, p: &Partition) -> String {
    let doc = PartitionJson {
        step,
        cells: p.cells.iter().map(RegionJson::from).collect(),
        common: p
            .common
            .iter()
            .map(|c| CommonJson {
                quality: c.quality,
                members: c.members.clone(),
                region: RegionJson::from(&c.region),
            })
            .collect(),
        neutral: RegionJson::from(&p.neutral),
    };
    serde_json::to_string_pretty(&doc).expect("partition serializes")
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub scenario: &'a str,
    pub mode: String,
    pub steps: usize,
    #[serde(rename = "H_initial")]
    pub h_initial: f64,
    #[serde(rename = "H_final")]
    pub h_final: f64,
    pub final_states: &'a [AgentState],
    pub converged: bool,
    pub convergence_tolerance: f64,
    pub max_control_final: f64,
    pub monotonicity_violations: usize,
    pub violation_steps: Vec<usize>,
    pub max_tiling_defect: f64,
}

pub fn summary(log: &RunLog) -> Summary<'_> {
    let last = log.final_record();
    let violations = log.monotonicity_violations();
    Summary {
        scenario: &log.scenario,
        mode: log.mode.to_string(),
        steps: last.step,
        h_initial: log.records[0].objective.h,
        h_final: last.objective.h,
        final_states: &last.states,
        converged: log.converged(),
        convergence_tolerance: CONVERGENCE_TOL,
        max_control_final: last.max_control,
        monotonicity_violations: violations.len(),
        violation_steps: violations,
        max_tiling_defect: log.max_tiling_defect(),
    }
}

pub fn summary_json(log: &RunLog) -> String {
    serde_json::to_string_pretty(&summary(log)).expect("summary serializes")
}

/// Writes every artefact of a run into `dir`, creating it if needed, and
/// returns the paths written.
pub fn emit_outputs(log: &RunLog, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    put("trajectories.csv".into(), trajectories_csv(log))?;
    put("objective.csv".into(), objective_csv(log))?;
    for (step, p) in &log.snapshots {
        put(format!("partition_{step}.json"), partition_json(*step, p))?;
    }
    put("summary.json".into(), summary_json(log))?;
    Ok(written)
}
