//! Operator scripts: a sequence of Pauli applications with a syndrome trace.

use serde::{Deserialize, Serialize};

use super::membrane::{membrane_operator, MembraneSpec};
use super::motion::{fragment_loop, move_lineon, random_offsets};
use super::topology::{project_and_classify, TopologyReport};
use super::{syndrome, PauliOp};
use crate::error::{Error, Result};
use crate::lattice::Cell;
use crate::model::OrthoplexModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSpec {
    /// The B term being moved.
    pub cell: Cell,
    pub axis: usize,
    /// `+1` or `-1` half steps.
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Pauli { cell: Cell, axis: PauliAxis },
    Membrane(MembraneSpec),
    Move(MoveSpec),
    /// Membrane whose boundary excitations are scattered along `w` by seeded offsets.
    Fragment(MembraneSpec),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    pub steps: Vec<Step>,
}

impl Script {
    /// Accepts either `{"steps": [...]}` or a bare step array.
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Wrapped(Script),
            Bare(Vec<Step>),
        }
        Ok(match serde_json::from_str(text)? {
            Repr::Wrapped(s) => s,
            Repr::Bare(steps) => Script { steps },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub step: usize,
    #[serde(rename = "violatedX")]
    pub violated_x: Vec<Cell>,
    #[serde(rename = "violatedZ")]
    pub violated_z: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection: Option<TopologyReport>,
}

/// Applies the steps in order, recording the cumulative syndrome after each.
/// Fragment step `i` draws its offsets from `seed + i`.
pub fn run_script(
    model: &OrthoplexModel,
    script: &Script,
    seed: u64,
    project: Option<usize>,
) -> Result<Vec<TraceEntry>> {
    let mut state = PauliOp::identity(model.n());
    let mut trace = Vec::with_capacity(script.steps.len());
    for (i, step) in script.steps.iter().enumerate() {
        let delta = match step {
            Step::Pauli { cell, axis } => {
                if model.qubit(cell).is_none() {
                    return Err(Error::invalid_cell(&cell.0, "not a qubit"));
                }
                match axis {
                    PauliAxis::X => PauliOp::x_on(model, [cell])?,
                    PauliAxis::Z => PauliOp::z_on(model, [cell])?,
                }
            }
            Step::Membrane(spec) => membrane_operator(model, spec)?,
            Step::Move(m) => move_lineon(model, &m.cell, m.axis, m.delta)?,
            Step::Fragment(spec) => {
                if model.p() != 4 {
                    return Err(Error::InvalidDimension(model.p()));
                }
                let base = syndrome(model, &membrane_operator(model, spec)?)?;
                let offsets = random_offsets(&base, model.shape.sizes[3], seed.wrapping_add(i as u64));
                fragment_loop(model, spec, &offsets)?.0
            }
        };
        state = state.compose(&delta);
        let syn = syndrome(model, &state)?;
        let projection = match project {
            Some(axis) => Some(project_and_classify(&model.shape, &syn, axis, None)?),
            None => None,
        };
        trace.push(TraceEntry {
            step: i,
            violated_x: syn.violated_x,
            violated_z: syn.violated_z,
            projection,
        });
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Plane;
    use crate::lattice::LatticeShape;

    #[test]
    fn script_json_forms() {
        let text = r#"[
            {"pauli": {"cell": [1, 0, 0, 0], "axis": "X"}},
            {"move": {"cell": [2, 0, 0, 0], "axis": 3, "delta": 1}},
            {"membrane": {"plane": "x+y", "offset": 1,
                          "region": {"rectangle": {"v0": 0, "lv": 1, "t0": 0, "lt": 1}}}}
        ]"#;
        let bare = Script::from_json(text).unwrap();
        assert_eq!(bare.steps.len(), 3);
        let wrapped = Script::from_json(&serde_json::to_string(&bare).unwrap()).unwrap();
        assert_eq!(wrapped, bare);
        assert_eq!(
            bare.steps[2],
            Step::Membrane(MembraneSpec::rectangle(Plane::XPlusY, 1, 0, 1, 0, 1))
        );
    }

    #[test]
    fn trace_is_cumulative() {
        let m = OrthoplexModel::build(LatticeShape::periodic(&[4, 4, 4, 4]).unwrap()).unwrap();
        let script = Script {
            steps: vec![
                Step::Pauli {
                    cell: Cell::new(vec![1, 0, 0, 0]),
                    axis: PauliAxis::X,
                },
                Step::Pauli {
                    cell: Cell::new(vec![1, 0, 0, 0]),
                    axis: PauliAxis::X,
                },
                Step::Fragment(MembraneSpec::rectangle(Plane::XPlusY, 1, 0, 1, 0, 1)),
            ],
        };
        let trace = run_script(&m, &script, 5, Some(3)).unwrap();
        assert_eq!(trace[0].violated_z.len(), 6);
        assert!(trace[1].violated_z.is_empty());
        let p = trace[2].projection.as_ref().unwrap();
        assert_eq!((p.components, p.all_degree_two), (1, true));
        assert_eq!(run_script(&m, &script, 5, Some(3)).unwrap(), trace);
    }
}
