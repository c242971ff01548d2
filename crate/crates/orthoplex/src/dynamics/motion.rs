//! Single-qubit moves of point excitations, loop fragmentation and stacking.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::membrane::{membrane_operator, MembraneSpec};
use super::{syndrome, PauliOp, Syndrome};
use crate::error::{Error, Result};
use crate::lattice::Cell;
use crate::model::OrthoplexModel;

/// X on the qubit `cell + delta·½ x̂_axis`, which moves a B-term excitation at `cell`.
pub fn move_lineon(model: &OrthoplexModel, cell: &Cell, axis: usize, delta: i64) -> Result<PauliOp> {
    if model.z_check(cell).is_none() {
        return Err(Error::invalid_cell(&cell.0, "not a B term"));
    }
    if axis >= model.p() || delta.abs() != 1 {
        return Err(Error::invalid_cell(&cell.0, "move must be one half step along an axis"));
    }
    let target = cell.step(axis, delta);
    if model.qubit(&target).is_none() {
        return Err(Error::invalid_cell(&target.0, "move leaves the lattice"));
    }
    PauliOp::x_on(model, [&target])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanonMove {
    pub op: PauliOp,
    /// Anchor of the translated dipole, `anchor + (½, −½, 0)`.
    pub next_anchor: Cell,
}

/// Moves the B-term dipole `{anchor, anchor + (½, ½, 0)}` of the 3D model along `x + y = const`.
pub fn move_planon(model: &OrthoplexModel, anchor: &Cell) -> Result<PlanonMove> {
    if model.p() != 3 {
        return Err(Error::InvalidDimension(model.p()));
    }
    let partner = anchor.offset(&[1, 1, 0]);
    if model.z_check(anchor).is_none() || model.z_check(&partner).is_none() {
        return Err(Error::invalid_cell(&anchor.0, "dipole ends must both be B terms"));
    }
    let link = anchor.step(0, 1);
    if model.qubit(&link).is_none() {
        return Err(Error::invalid_cell(&link.0, "move leaves the lattice"));
    }
    let next_anchor = model
        .shape
        .canonicalize(&anchor.offset(&[1, -1, 0]))
        .ok_or_else(|| Error::invalid_cell(&anchor.0, "dipole leaves the lattice"))?;
    Ok(PlanonMove {
        op: PauliOp::x_on(model, [&link])?,
        next_anchor,
    })
}

/// Uniform offsets in `[0, L_w)` for every violated B term, reproducible from `seed`.
pub fn random_offsets(syn: &Syndrome, l_w: usize, seed: u64) -> BTreeMap<Cell, i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    syn.violated_z
        .iter()
        .map(|c| (c.clone(), rng.gen_range(0..l_w as i64)))
        .collect()
}

/// Membrane operator followed by w-translation strings that scatter its boundary
/// excitations. Cells missing from `offsets` stay put.
pub fn fragment_loop(
    model: &OrthoplexModel,
    spec: &MembraneSpec,
    offsets: &BTreeMap<Cell, i64>,
) -> Result<(PauliOp, Syndrome)> {
    if model.p() != 4 {
        return Err(Error::InvalidDimension(model.p()));
    }
    let l_w = model.shape.sizes[3] as i64;
    let mut op = membrane_operator(model, spec)?;
    let loop_syn = syndrome(model, &op)?;
    for (cell, &o) in offsets {
        if !(0..l_w).contains(&o) {
            return Err(Error::OffsetOutOfRange(format!("offset {o} for {cell} not in [0, {l_w})")));
        }
        if loop_syn.violated_z.binary_search(cell).is_err() {
            return Err(Error::invalid_cell(&cell.0, "not an excitation of the loop"));
        }
        let string: Vec<Cell> = (0..o).map(|j| cell.step(3, 2 * j + 1)).collect();
        op = op.compose(&PauliOp::x_on(model, &string)?);
    }
    let syn = syndrome(model, &op)?;
    Ok((op, syn))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlignmentReport {
    pub single: usize,
    pub second: usize,
    pub separate_total: usize,
    pub composite: usize,
    pub lowered: bool,
}

/// Energy of a membrane stacked with its copy `k` steps along the plane normal.
pub fn alignment_cancellation(model: &OrthoplexModel, spec: &MembraneSpec, k: i64) -> Result<AlignmentReport> {
    let a = membrane_operator(model, spec)?;
    let b = membrane_operator(model, &spec.shifted_normal(k))?;
    let single = syndrome(model, &a)?.len();
    let second = syndrome(model, &b)?.len();
    let composite = syndrome(model, &a.compose(&b))?.len();
    Ok(AlignmentReport {
        single,
        second,
        separate_total: single + second,
        composite,
        lowered: composite < single + second,
    })
}
